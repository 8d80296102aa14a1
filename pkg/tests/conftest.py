"""Shared test configuration.

Hypothesis runs derandomized with no deadline: the property tests wrap real
integrations whose run time varies too much for per-example deadlines, and
reproducibility across machines matters more here than fresh exploration.

The figure presets are expensive to build (the placement scan alone runs a
few hundred integrations), so each table is a session-scoped fixture shared
between the preset tests and the acceptance gate.
"""

import pytest
from hypothesis import HealthCheck, settings

from qmirror import presets

settings.register_profile(
    "qmirror",
    deadline=None,
    derandomize=True,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("qmirror")

#: Worker processes for preset builds during testing.
PRESET_WORKERS = 4


@pytest.fixture(scope="session")
def fig2a():
    return presets.fig2a_table(max_workers=PRESET_WORKERS)[0]


@pytest.fixture(scope="session")
def fig2b():
    return presets.fig2b_table(max_workers=PRESET_WORKERS)[0]


@pytest.fixture(scope="session")
def fig3b():
    return presets.fig3b_table(max_workers=PRESET_WORKERS)[0]


@pytest.fixture(scope="session")
def fig3c():
    return presets.fig3c_table(max_workers=PRESET_WORKERS)[0]


@pytest.fixture(scope="session")
def fig4a():
    return presets.fig4a_table(max_workers=PRESET_WORKERS)[0]


@pytest.fixture(scope="session")
def fig4b():
    return presets.fig4b_table(max_workers=PRESET_WORKERS)[0]


@pytest.fixture(scope="session")
def fig4c():
    return presets.fig4c_table(max_workers=PRESET_WORKERS)[0]


@pytest.fixture(scope="session")
def fig4d():
    return presets.fig4d_table(max_workers=PRESET_WORKERS)[0]
