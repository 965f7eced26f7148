"""Columnar data behind the scatter plots, grouped bars and distribution table.

Each builder takes selected indicator rows and returns a :class:`DataTable`;
rendering is left to external tools.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from countryimpact.indicators import NUMERIC_COLUMNS, CountryIndicators
from countryimpact.stats import linfit, pearson, pearson_pvalue, percentile

# figure -> (columns, drop rows with undefined values)
FIGURES: dict[str, tuple[tuple[str, ...], bool]] = {
    "fig1": (("pct_ic", "pct_ca"), True),
    "fig2": (("pct_ic", "pct_ca"), True),
    "fig3": (("pct_ic_x", "pct_nc_x", "pct_wc_x"), False),
    "fig4": (("ni_wc", "ni_nc", "ni_ic", "ni_all", "ni_ca"), False),
    "fig5": (("ni_all", "ni_ca"), True),
    "fig6": (("pct_ca_ic", "pct_nonca_ic"), True),
    "fig7": (("ni_ic_ca", "ni_ic", "ni_ic_nonca"), False),
    "fig8": (("pct_ca_ic", "ni_ic"), True),
}
FIGURE_SPECS = (*FIGURES, "table1")
TABLE1_PERCENTILES = (99, 95, 90, 75, 50, 25)


class UnknownFigureError(ValueError):
    pass


class TooFewPointsError(ValueError):
    pass


@dataclass
class DataTable:
    header: list[str]
    rows: list[list]
    notes: list[str] = field(default_factory=list)
    dropped: int = 0


def _value(row: CountryIndicators, column: str) -> float | None:
    if column == "pct_nonca_ic":
        return None if row.pct_ca_ic is None else 100.0 - row.pct_ca_ic
    return getattr(row, column)


def figure_data(figure: str, rows: Sequence[CountryIndicators], overlapping: bool = False) -> DataTable:
    """Per-country columns for ``figure``.

    Scatter figures drop countries with an undefined coordinate; bar figures
    keep them with ``NA`` cells.  ``overlapping`` switches ``fig3`` from the
    exclusive IC > NC > WC partition to the non-exclusive shares.
    """
    if figure == "table1":
        return output_distribution(rows)
    if figure not in FIGURES:
        raise UnknownFigureError(f"unknown figure spec {figure!r}; choose from {', '.join(FIGURE_SPECS)}")
    columns, drop = FIGURES[figure]
    if figure == "fig3" and overlapping:
        columns = ("pct_ic", "pct_nc", "pct_wc")
    table = DataTable(header=["country", *columns], rows=[])
    for row in rows:
        values = [_value(row, c) for c in columns]
        if drop and any(v is None for v in values):
            table.dropped += 1
            continue
        table.rows.append([row.country, *values])
    if table.dropped:
        table.notes.append(f"{table.dropped} countries dropped for undefined values")
    if not table.rows:
        table.notes.append(f"no data points for {figure}")
    return table


def output_distribution(rows: Sequence[CountryIndicators], n_years: int | None = None) -> DataTable:
    """Mean and upper percentiles of whole-counted output across countries."""
    header = ["level", "n", "type", "mean", *(f"p{p}" for p in TABLE1_PERCENTILES)]
    table = DataTable(header=header, rows=[])
    outputs = [r.output_whole for r in rows]
    if not outputs:
        table.notes.append("no countries selected")
        return table
    kinds = [("totals", 1)]
    if n_years:
        kinds.append(("average_per_year", n_years))
    for label, div in kinds:
        values = [v / div for v in outputs]
        table.rows.append(
            ["countries", len(values), label, math.fsum(values) / len(values),
             *(percentile(values, p) for p in TABLE1_PERCENTILES)]
        )
    return table


def parse_pair(spec: str) -> tuple[str, str]:
    parts = spec.split(":")
    if len(parts) != 2 or not all(parts):
        raise ValueError(f"pair must look like 'x:y', got {spec!r}")
    for name in parts:
        if name not in NUMERIC_COLUMNS:
            raise ValueError(f"unknown indicator {name!r}; choose from {', '.join(NUMERIC_COLUMNS)}")
    return parts[0], parts[1]


@dataclass
class Correlation:
    x: str
    y: str
    n: int
    dropped: int
    r: float | None
    p: float | None
    slope: float | None
    intercept: float | None
    points: list[tuple[str, float, float]]

    HEADER = ("x", "y", "n", "dropped", "r", "p", "slope", "intercept")

    def summary_row(self) -> list:
        return [self.x, self.y, self.n, self.dropped, self.r, self.p, self.slope, self.intercept]


def correlate(rows: Sequence[CountryIndicators], x: str, y: str) -> Correlation:
    """Pearson r, two-sided p and OLS fit of ``y`` on ``x`` across countries.

    Countries where either indicator is undefined are dropped and counted.
    ``r`` and ``p`` are ``None`` when either variable is constant.
    """
    points = []
    dropped = 0
    for row in rows:
        vx, vy = getattr(row, x), getattr(row, y)
        if vx is None or vy is None:
            dropped += 1
        else:
            points.append((row.country, float(vx), float(vy)))
    if len(points) < 3:
        raise TooFewPointsError(f"need at least 3 countries with both {x} and {y} defined, got {len(points)}")
    xs = [p[1] for p in points]
    ys = [p[2] for p in points]
    r = pearson(xs, ys)
    p = None if r is None else pearson_pvalue(r, len(points))
    try:
        slope, intercept = linfit(xs, ys)
    except ValueError:
        slope = intercept = None
    return Correlation(x, y, len(points), dropped, r, p, slope, intercept, points)
