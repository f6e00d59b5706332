"""Structure functions, log-log regressions and uniform-regularity estimation.

All logarithms are base 2 and slopes are taken against -j, so that a
quantity decaying like 2**(-a*j) at fine scales yields an exponent a. The
asymptotic liminf definitions are realized as weighted least squares over a
scale interval [j1, j2]; per-scale weights equal the number of summed
positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AllZeroAtNegativeQ,
    AllZeroLevel,
    EmptyField,
    GridLacksSmallPositiveQ,
    NegativeMomentOnCoefficients,
    ScaleRangeTooNarrow,
    ValidationError,
)
from .multiscale import GrowthPair, MultiscaleField
from .wavelet import CoefficientPyramid

__all__ = [
    "MomentGrid",
    "StructureFunctions",
    "ScalingFunction",
    "AdmissibilityReport",
    "HminFit",
    "structure_functions",
    "scaling_function",
    "estimate_hmin",
    "hmin_fit",
    "p_admissibility",
    "default_scale_range",
]

# levels where more than this fraction of positions is exactly zero are
# flagged unreliable for negative moments
ZERO_FRACTION_LIMIT = 0.01


@dataclass(frozen=True)
class MomentGrid:
    """Sorted grid of moment orders q."""

    q_values: np.ndarray

    def __post_init__(self):
        q = np.sort(np.asarray(self.q_values, dtype=np.float64))
        if q.size == 0 or not np.all(np.isfinite(q)):
            raise ValidationError("moment grid must be nonempty and finite")
        object.__setattr__(self, "q_values", q)

    @classmethod
    def symmetric(cls, lo: float = -8.0, hi: float = 8.0, count: int = 64) -> "MomentGrid":
        return cls(np.linspace(lo, hi, count))

    @classmethod
    def positive(cls, lo: float = 0.1, hi: float = 8.0, count: int = 64) -> "MomentGrid":
        if lo <= 0:
            raise ValidationError("positive grid needs lo > 0")
        return cls(np.linspace(lo, hi, count))


@dataclass(frozen=True)
class StructureFunctions:
    """S(j, q) over valid scales and a moment grid, with log2 values cached.

    Normalization: S(j, q) is the mean of quantity**q over the retained
    positions (interior, with exact zeros excluded for q < 0). The
    normalization constant cancels in log-log slopes, which is what the
    scaling-function estimator consumes. Undefined entries are NaN in
    ``values``/``log2_values`` and False in ``defined``, never silently zero.
    """

    kind: str
    q_values: np.ndarray
    j_values: np.ndarray
    values: np.ndarray       # shape (n_scales, n_q)
    log2_values: np.ndarray  # same shape, NaN where undefined
    defined: np.ndarray      # bool, same shape
    weights: np.ndarray      # number of summed positions per (j, q)
    zero_fraction: np.ndarray        # per scale
    unreliable_negative_q: np.ndarray  # per scale, zero fraction above limit
    p: float | None = None
    growth: GrowthPair | None = None


@dataclass(frozen=True)
class ScalingFunction:
    """Per-q regression slopes of log2 S(j, q) against -j over [j1, j2]."""

    kind: str
    q_values: np.ndarray
    zeta: np.ndarray
    intercepts: np.ndarray
    goodness: np.ndarray
    defined: np.ndarray
    j1: int
    j2: int
    p: float | None = None
    growth: GrowthPair | None = None

    def value(self, q: float) -> float:
        i = int(np.argmin(np.abs(self.q_values - q)))
        if abs(self.q_values[i] - q) > 1e-9 or not self.defined[i]:
            raise ValidationError(f"q = {q} is not on the estimated grid")
        return float(self.zeta[i])


@dataclass(frozen=True)
class AdmissibilityReport:
    exists_positive: bool
    best_p: float | None
    slope_at_zero: float


@dataclass(frozen=True)
class HminFit:
    value: float
    intercept: float
    j_values: np.ndarray
    log2_sup: np.ndarray


def structure_functions(field: MultiscaleField, grid) -> StructureFunctions:
    """Compute S(j, q) for a multiscale field over its valid scale range.

    Parameters
    ----------
    field : MultiscaleField
        Quantities per scale; only interior positions enter the sums.
    grid : MomentGrid or array-like
        Moment orders. Raw coefficient fields require all q > 0.

    Raises
    ------
    EmptyField
        No valid scale retains any interior position.
    NegativeMomentOnCoefficients
        Nonpositive q requested on a raw coefficient field.
    AllZeroAtNegativeQ
        Some negative q is undefined at every scale.
    """
    if not isinstance(grid, MomentGrid):
        grid = MomentGrid(np.asarray(grid))
    q = grid.q_values
    if field.kind == "coefficients" and np.any(q <= 0):
        raise NegativeMomentOnCoefficients(
            "raw coefficient structure functions require q > 0"
        )
    js = [j for j in field.valid_scales() if field.interior[j].any()]
    if not js:
        raise EmptyField("field has no valid scale with interior positions")

    n_j, n_q = len(js), q.size
    values = np.full((n_j, n_q), np.nan)
    weights = np.zeros((n_j, n_q))
    zero_fraction = np.zeros(n_j)
    for row, j in enumerate(js):
        x = field.levels[j][field.interior[j]]
        nonzero = x > 0
        n_all = x.size
        n_nz = int(nonzero.sum())
        zero_fraction[row] = 1.0 - n_nz / n_all
        for col, qv in enumerate(q):
            if qv > 0:
                s = float(np.mean(x**qv))
                w = n_all
            elif qv == 0:
                s, w = 1.0, n_all
            else:
                if n_nz == 0:
                    continue
                s = float(np.mean(x[nonzero] ** qv))
                w = n_nz
            if math.isfinite(s) and s > 0:
                values[row, col] = s
                weights[row, col] = w
    defined = np.isfinite(values)
    for col, qv in enumerate(q):
        if qv < 0 and not defined[:, col].any():
            raise AllZeroAtNegativeQ(f"q = {qv} undefined at every scale")
    with np.errstate(invalid="ignore", divide="ignore"):
        log2_values = np.where(defined, np.log2(values), np.nan)
    return StructureFunctions(
        kind=field.kind,
        q_values=q,
        j_values=np.array(js, dtype=int),
        values=values,
        log2_values=log2_values,
        defined=defined,
        weights=weights,
        zero_fraction=zero_fraction,
        unreliable_negative_q=zero_fraction > ZERO_FRACTION_LIMIT,
        p=field.p,
        growth=field.growth,
    )


def _wls(x: np.ndarray, y: np.ndarray, w: np.ndarray) -> tuple[float, float, float]:
    """Weighted least squares of y on x; returns slope, intercept, R^2."""
    w = w / w.sum()
    xm = float(np.sum(w * x))
    ym = float(np.sum(w * y))
    sxx = float(np.sum(w * (x - xm) ** 2))
    sxy = float(np.sum(w * (x - xm) * (y - ym)))
    slope = sxy / sxx
    intercept = ym - slope * xm
    ss_res = float(np.sum(w * (y - slope * x - intercept) ** 2))
    ss_tot = float(np.sum(w * (y - ym) ** 2))
    r2 = 1.0 if ss_tot <= 1e-300 else 1.0 - ss_res / ss_tot
    return slope, intercept, r2


def scaling_function(
    sf: StructureFunctions, j1: int, j2: int
) -> ScalingFunction:
    """Estimate the scaling exponents by weighted log-log regression.

    For each q, the slope of log2 S(j, q) against -j over scales j1..j2,
    weighted by the number of summed positions per scale. Entries undefined
    at too many scales (fewer than 3 usable) are left undefined.
    """
    if j2 - j1 < 2:
        raise ScaleRangeTooNarrow("need j2 - j1 >= 2")
    wanted = [j for j in range(j1, j2 + 1)]
    have = set(int(j) for j in sf.j_values)
    if not set(wanted) <= have:
        raise ScaleRangeTooNarrow(
            f"scales {sorted(set(wanted) - have)} missing from the structure functions"
        )
    rows = np.array([int(np.where(sf.j_values == j)[0][0]) for j in wanted])
    js = np.array(wanted, dtype=float)
    n_q = sf.q_values.size
    zeta = np.full(n_q, np.nan)
    intercepts = np.full(n_q, np.nan)
    goodness = np.full(n_q, np.nan)
    defined = np.zeros(n_q, dtype=bool)
    for col in range(n_q):
        ok = sf.defined[rows, col]
        if ok.sum() < 3:
            continue
        x = -js[ok]
        y = sf.log2_values[rows, col][ok]
        w = sf.weights[rows, col][ok]
        slope, intercept, r2 = _wls(x, y, w)
        if math.isfinite(slope):
            zeta[col], intercepts[col], goodness[col] = slope, intercept, r2
            defined[col] = True
    return ScalingFunction(
        kind=sf.kind,
        q_values=sf.q_values,
        zeta=zeta,
        intercepts=intercepts,
        goodness=goodness,
        defined=defined,
        j1=j1,
        j2=j2,
        p=sf.p,
        growth=sf.growth,
    )


def hmin_fit(pyramid: CoefficientPyramid, j1: int, j2: int) -> HminFit:
    """Uniform-regularity fit: slope of log2 sup_k |c(j, k)| against -j.

    Uniform weights. A negative value flags data that cannot be modelled by
    a locally bounded function.
    """
    if j2 - j1 < 2:
        raise ScaleRangeTooNarrow("need j2 - j1 >= 2")
    js, sups = [], []
    for j in range(j1, j2 + 1):
        if j not in pyramid.levels:
            raise ScaleRangeTooNarrow(f"scale {j} missing from the pyramid")
        vals = pyramid.interior_values(j)
        if vals.size == 0:
            continue
        sup = float(np.max(np.abs(vals)))
        if sup == 0.0:
            raise AllZeroLevel(f"all interior coefficients vanish at scale {j}")
        js.append(j)
        sups.append(sup)
    if len(js) < 3:
        raise ScaleRangeTooNarrow("fewer than 3 usable scales for the hmin fit")
    x = -np.array(js, dtype=float)
    y = np.log2(np.array(sups))
    slope, intercept, _ = _wls(x, y, np.ones(len(js)))
    return HminFit(
        value=slope,
        intercept=intercept,
        j_values=np.array(js, dtype=int),
        log2_sup=y,
    )


def estimate_hmin(pyramid: CoefficientPyramid, j1: int, j2: int) -> float:
    return hmin_fit(pyramid, j1, j2).value


def p_admissibility(zeta: ScalingFunction) -> AdmissibilityReport:
    """Decide whether some p > 0 admits a p-exponent analysis.

    ``exists_positive`` is true when the scaling function is positive at some
    grid q > 0; ``best_p`` maximizes zeta(q)/q over those q; ``slope_at_zero``
    is the finite difference (zeta(q1) - 0) / q1 at the smallest positive
    grid point, anchored at zeta(0) = 0. A negative slope at zero means no
    admissible p exists without prior fractional integration.
    """
    pos = (zeta.q_values > 0) & zeta.defined
    if not pos.any():
        raise GridLacksSmallPositiveQ("no positive q on the estimated grid")
    qp = zeta.q_values[pos]
    zp = zeta.zeta[pos]
    if qp.min() > 0.5:
        raise GridLacksSmallPositiveQ(
            f"smallest positive q = {qp.min():g} is too far from 0"
        )
    slope_at_zero = float(zp[np.argmin(qp)] / qp.min())
    admissible = zp > 0
    exists = bool(admissible.any())
    best_p = None
    if exists:
        ratio = zp[admissible] / qp[admissible]
        best_p = float(qp[admissible][np.argmax(ratio)])
    return AdmissibilityReport(
        exists_positive=exists, best_p=best_p, slope_at_zero=slope_at_zero
    )


def default_scale_range(
    j_max_avail: int, valid_range: tuple[int, int] | None
) -> tuple[int, int]:
    """Default regression octaves: [max(3, j_max - 8), j_max - 2], clamped
    to the field's valid range."""
    if valid_range is None:
        raise EmptyField("field has no valid scales")
    j1 = max(3, j_max_avail - 8, valid_range[0])
    j2 = min(j_max_avail - 2, valid_range[1])
    if j2 - j1 < 2:
        raise ScaleRangeTooNarrow(
            f"default scale range [{j1}, {j2}] is too narrow"
        )
    return j1, j2
