"""Correlation, regression and percentile kernels."""

from __future__ import annotations

import math
from collections.abc import Sequence

from scipy.special import betainc, betaincc

PERCENTILE_RULE = "linear interpolation between closest ranks, h = (n-1)*p/100 (0-indexed)"
PVALUE_METHOD = "two-sided Student t test, t = r*sqrt((n-2)/(1-r^2)), df = n-2"


class ZeroVarianceError(ValueError):
    pass


def _check_pair(xs: Sequence[float], ys: Sequence[float]) -> None:
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("need at least 2 points")
    if not all(math.isfinite(v) for v in xs) or not all(math.isfinite(v) for v in ys):
        raise ValueError("values must be finite")


def _centered(values: Sequence[float]) -> list[float]:
    mean = math.fsum(values) / len(values)
    return [v - mean for v in values]


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Product-moment correlation; ``None`` if either variable is constant."""
    _check_pair(xs, ys)
    dx = _centered(xs)
    dy = _centered(ys)
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0 or syy == 0:
        return None
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def pearson_pvalue(r: float, n: int) -> float:
    if n < 3:
        raise ValueError("p-value needs n >= 3")
    if not -1.0 <= r <= 1.0:
        raise ValueError(f"r out of range: {r}")
    if abs(r) == 1.0:
        return 0.0
    df = n - 2
    # P(|T| > t) for Student t with df degrees of freedom is I_x(df/2, 1/2)
    # with x = df / (df + t^2) = 1 - r^2; for small r use the complement
    # I_{r^2}(1/2, df/2) so that x is never rounded near 1.
    r2 = r * r
    if r2 < 0.5:
        return float(betaincc(0.5, df / 2.0, r2))
    return float(betainc(df / 2.0, 0.5, 1.0 - r2))


def linfit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Ordinary least squares ``y = slope * x + intercept``."""
    _check_pair(xs, ys)
    mx = math.fsum(xs) / len(xs)
    my = math.fsum(ys) / len(ys)
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ZeroVarianceError("x has zero variance")
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, my - slope * mx


def percentile(values: Sequence[float], p: float) -> float:
    if not values:
        raise ValueError("percentile of an empty sequence")
    if not 0 <= p <= 100:
        raise ValueError(f"p must be in [0, 100], got {p}")
    data = sorted(values)
    h = (len(data) - 1) * p / 100
    lo = math.floor(h)
    frac = h - lo
    if frac == 0:
        return data[lo]
    return data[lo] + frac * (data[lo + 1] - data[lo])
