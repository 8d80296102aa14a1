"""Tabular results and their emission as CSV, JSON, or SVG plots.

Everything downstream of a simulation or sweep flows through
:class:`ResultTable`: a header plus rows of scalars (floats, ints, strings,
or ``None`` for missing entries).  Emission is deliberately boring --
RFC-4180-style CSV with 12 significant digits, a direct JSON mirror of the
columns, and simple matplotlib line/heatmap SVGs -- and deterministic:
re-emitting the same table produces byte-identical files, which is what
makes the figure presets diffable across runs and machines.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .config import ConfigError

Cell = Union[float, int, str, None]

#: Format for floating-point cells: 12 significant digits, plain decimal
#: point, no thousands separators.  Chosen so emitted values are stable
#: across platforms while staying close to full double precision.
FLOAT_FORMAT = "%.12g"


@dataclass
class ResultTable:
    """A named-column table of scalar results.

    Rows are plain tuples in column order.  The table is append-only during
    assembly; emission never mutates it.
    """

    columns: List[str]
    rows: List[Tuple[Cell, ...]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.columns:
            raise ConfigError("a result table needs at least one column")
        if len(set(self.columns)) != len(self.columns):
            raise ConfigError(f"duplicate column names in {self.columns}")
        for row in self.rows:
            self._check_width(row)

    def _check_width(self, row: Sequence[Cell]) -> None:
        if len(row) != len(self.columns):
            raise ConfigError(
                f"row of width {len(row)} does not match {len(self.columns)} columns"
            )

    def append(self, row: Sequence[Cell]) -> None:
        self._check_width(row)
        self.rows.append(tuple(row))

    def extend(self, rows: Sequence[Sequence[Cell]]) -> None:
        for row in rows:
            self.append(row)

    def column(self, name: str) -> List[Cell]:
        """All values of one column, in row order."""
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise ConfigError(f"no column named {name!r} in {self.columns}") from None
        return [row[idx] for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


def _format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return FLOAT_FORMAT % value
    return str(value)


def _parse_cell(text: str) -> Cell:
    if text == "":
        return None
    if text == "nan":
        return math.nan
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def write_csv(table: ResultTable, path: Union[str, Path]) -> Path:
    """Emit the table as CSV: header row, ``.`` decimal separator,
    12 significant digits, RFC-4180 quoting."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_format_cell(v) for v in row])
    return path


def read_csv(path: Union[str, Path]) -> ResultTable:
    """Parse a CSV written by :func:`write_csv` back into a table.

    Numeric-looking cells come back as ``int``/``float``; empty cells as
    ``None``.  Values round-trip at the 12-digit emission precision.
    """
    path = Path(path)
    with path.open("r", newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError(f"{path}: empty file, expected a header row") from None
        table = ResultTable(columns=list(header))
        for row in reader:
            table.append([_parse_cell(cell) for cell in row])
    return table


def _json_safe(value: Cell) -> Cell:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json(table: ResultTable, path: Union[str, Path]) -> Path:
    """Emit the table as JSON mirroring the columns.

    Non-finite floats become ``null`` (strict JSON has no NaN literal).
    """
    path = Path(path)
    payload = {
        "columns": table.columns,
        "rows": [[_json_safe(v) for v in row] for row in table.rows],
    }
    with path.open("w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, allow_nan=False)
        handle.write("\n")
    return path


@dataclass(frozen=True)
class PlotSpec:
    """How to render a table as a figure.

    ``kind`` is ``"line"`` (one curve per distinct value of the ``series``
    column, x/y from the named columns) or ``"heatmap"`` (``value`` column
    pivoted over the x/y columns).
    """

    kind: str
    x: str
    y: str
    series: Optional[str] = None
    value: Optional[str] = None
    xlabel: Optional[str] = None
    ylabel: Optional[str] = None
    title: str = ""
    logx: bool = False
    logy: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("line", "heatmap"):
            raise ConfigError(f"unknown plot kind {self.kind!r}")
        if self.kind == "heatmap" and self.value is None:
            raise ConfigError("heatmap plots need a value column")


def _set_deterministic_svg() -> None:
    import matplotlib

    matplotlib.use("Agg")
    # Fixed hash salt and no embedded creation date, so repeated renders of
    # the same data are byte-identical.
    matplotlib.rcParams["svg.hashsalt"] = "qmirror"


def write_svg(table: ResultTable, spec: PlotSpec, path: Union[str, Path]) -> Path:
    """Render the table to an SVG file per ``spec``."""
    _set_deterministic_svg()
    import matplotlib.pyplot as plt
    import numpy as np

    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        xs = table.column(spec.x)
        ys = table.column(spec.y)
        if spec.kind == "line":
            if spec.series is None:
                ax.plot(xs, ys, lw=1.2)
            else:
                labels = table.column(spec.series)
                seen: List[Cell] = []
                for label in labels:
                    if label not in seen:
                        seen.append(label)
                for label in seen:
                    sel = [i for i, lab in enumerate(labels) if lab == label]
                    ax.plot(
                        [xs[i] for i in sel],
                        [ys[i] for i in sel],
                        lw=1.2,
                        label=str(label),
                    )
                ax.legend(fontsize=8)
        else:
            values = table.column(spec.value)
            xu = np.unique(np.asarray([v for v in xs if v is not None], dtype=float))
            yu = np.unique(np.asarray([v for v in ys if v is not None], dtype=float))
            grid = np.full((yu.size, xu.size), np.nan)
            xi = {v: i for i, v in enumerate(xu)}
            yi = {v: i for i, v in enumerate(yu)}
            for x, y, v in zip(xs, ys, values):
                if x is None or y is None or v is None:
                    continue
                grid[yi[float(y)], xi[float(x)]] = float(v)
            mesh = ax.pcolormesh(xu, yu, np.ma.masked_invalid(grid), shading="nearest")
            fig.colorbar(mesh, ax=ax, label=spec.value)
        if spec.logx:
            ax.set_xscale("log")
        if spec.logy:
            ax.set_yscale("log")
        ax.set_xlabel(spec.xlabel if spec.xlabel is not None else spec.x)
        ax.set_ylabel(spec.ylabel if spec.ylabel is not None else spec.y)
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return path


FORMATS = ("csv", "json", "svg")


def emit(
    table: ResultTable,
    fmt: str,
    path: Union[str, Path],
    plot: Optional[PlotSpec] = None,
) -> Path:
    """Write the table to ``path`` in the requested format."""
    if fmt == "csv":
        return write_csv(table, path)
    if fmt == "json":
        return write_json(table, path)
    if fmt == "svg":
        if plot is None:
            raise ConfigError("svg emission needs a PlotSpec")
        return write_svg(table, spec=plot, path=path)
    raise ConfigError(f"unknown output format {fmt!r}; expected one of {FORMATS}")
