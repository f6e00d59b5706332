"""Multiscale quantities derived from a coefficient pyramid.

Three families are provided: wavelet leaders (supremum over the tripled
dyadic interval and all finer scales), p-leaders (depth-weighted l^p sums
over the same window) and (theta, omega)-leaders (supremum over a
neighborhood whose depth grows sub-polynomially and whose width grows
sub-exponentially). Positions are treated periodically, consistent with the
transform's periodic extension; windows that wrap simply reuse values from
the other end, and scale clipping at the fine end of the pyramid is logged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientScales, NonPositiveP, ValidationError
from .wavelet import CoefficientPyramid, DyadicIndex

__all__ = [
    "GrowthPair",
    "GrowthCertificate",
    "Neighborhood",
    "MultiscaleField",
    "coefficient_field",
    "wavelet_leaders",
    "p_leaders",
    "theta_omega_neighborhood",
    "theta_omega_leaders",
]

MIN_FINER_LEVELS = 4  # finer levels required for a leader scale to be trusted


@dataclass(frozen=True)
class GrowthPair:
    """The (theta, omega) growth functions defining weak-scaling windows.

    theta(j) = j + ceil(j**beta) for beta in (0, 1), or j + theta_const when
    beta == 0; omega(j) = max(1, ceil(j**omega_exponent)). beta < 1 keeps the
    depth excess sub-polynomial and a finite omega_exponent keeps
    log(omega(j))/j -> 0, which is certified structurally at construction;
    monotonicity is checked exhaustively over any requested scale range.
    """

    beta: float = 0.25
    theta_const: int = 0
    omega_exponent: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.beta < 1.0):
            raise ValidationError("beta must lie in [0, 1)")
        if self.theta_const < 0 or self.theta_const != int(self.theta_const):
            raise ValidationError("theta_const must be a nonnegative integer")
        if not (math.isfinite(self.omega_exponent) and self.omega_exponent >= 0):
            raise ValidationError("omega_exponent must be finite and >= 0")

    def theta(self, j: int) -> int:
        if self.beta == 0.0:
            return j + int(self.theta_const)
        return j + math.ceil(j**self.beta)

    def omega(self, j: int) -> int:
        return max(1, math.ceil(j**self.omega_exponent))

    def certificate(self, j_lo: int, j_hi: int) -> "GrowthCertificate":
        monotone = all(
            self.theta(j + 1) >= self.theta(j) >= j for j in range(j_lo, j_hi + 1)
        )
        return GrowthCertificate(
            j_lo=j_lo,
            j_hi=j_hi,
            monotone=monotone,
            subpolynomial=self.beta < 1.0,
            subexponential=math.isfinite(self.omega_exponent),
        )


@dataclass(frozen=True)
class GrowthCertificate:
    j_lo: int
    j_hi: int
    monotone: bool
    subpolynomial: bool
    subexponential: bool

    @property
    def valid(self) -> bool:
        return self.monotone and self.subpolynomial and self.subexponential


@dataclass(frozen=True)
class Neighborhood:
    """Index set of a (theta, omega)-neighborhood plus the clip record."""

    indices: list[DyadicIndex]
    clipped_scales: int


@dataclass(frozen=True)
class MultiscaleField:
    """Per-scale arrays of one multiscale quantity.

    ``levels[j]`` holds the quantity at the retained positions
    ``positions[j]`` (all k for leaders and p-leaders, multiples of the
    stride for (theta, omega)-leaders). ``valid_range`` is the scale interval
    trusted for log-log regressions: leaders and p-leaders need at least
    MIN_FINER_LEVELS finer levels, (theta, omega)-leaders need theta(j) to
    stay within the pyramid.
    """

    kind: str
    levels: dict[int, np.ndarray]
    positions: dict[int, np.ndarray]
    interior: dict[int, np.ndarray]
    strides: dict[int, int]
    valid_range: tuple[int, int] | None
    p: float | None = None
    growth: GrowthPair | None = None
    scale_clip: dict[int, int] = field(default_factory=dict)

    @property
    def scales(self) -> list[int]:
        return sorted(self.levels)

    def valid_scales(self) -> list[int]:
        if self.valid_range is None:
            return []
        lo, hi = self.valid_range
        return [j for j in self.scales if lo <= j <= hi]


def _require_levels(pyramid: CoefficientPyramid, minimum: int = 2) -> list[int]:
    js = pyramid.scales
    if len(js) < minimum:
        raise InsufficientScales(f"pyramid has {len(js)} level(s), need {minimum}")
    return js


def coefficient_field(pyramid: CoefficientPyramid) -> MultiscaleField:
    """Wrap the raw coefficient magnitudes as a multiscale field."""
    js = pyramid.scales
    return MultiscaleField(
        kind="coefficients",
        levels={j: np.abs(pyramid.levels[j]) for j in js},
        positions={j: np.arange(pyramid.count(j)) for j in js},
        interior={j: pyramid.interior[j].copy() for j in js},
        strides={j: 1 for j in js},
        valid_range=(js[0], js[-1]),
    )


def _leader_valid_range(js: list[int]) -> tuple[int, int] | None:
    hi = js[-1] - MIN_FINER_LEVELS
    if hi < js[0]:
        return None
    return (js[0], hi)


def _masked_abs(pyramid: CoefficientPyramid, j: int) -> np.ndarray:
    """|c| with boundary-affected positions masked out of suprema (-inf)."""
    return np.where(pyramid.interior[j], np.abs(pyramid.levels[j]), -np.inf)


def wavelet_leaders(pyramid: CoefficientPyramid) -> MultiscaleField:
    """Wavelet leaders: sup of |c| over the tripled interval and finer scales.

    l(j, k) = sup |c(j', k')| over all dyadic intervals lambda' contained in
    3*lambda(j, k) with j <= j' <= j_fine. Computed bottom-up from subtree
    maxima; windows wrap periodically at the edges. Boundary-affected
    coefficients never enter a supremum; positions whose whole window is
    boundary-affected come out as 0 and are themselves flagged.
    """
    js = _require_levels(pyramid)
    subtree: dict[int, np.ndarray] = {}
    prev: np.ndarray | None = None
    for j in reversed(js):
        cur = _masked_abs(pyramid, j)
        if prev is not None:
            pad = np.full(2 * cur.size, -np.inf)
            pad[: min(prev.size, pad.size)] = prev[: pad.size]
            cur = np.maximum(cur, np.maximum(pad[0::2], pad[1::2]))
        subtree[j] = cur
        prev = cur
    levels = {}
    for j in js:
        t = subtree[j]
        if t.size >= 3:
            sup = np.maximum(np.maximum(np.roll(t, 1), t), np.roll(t, -1))
        else:
            sup = np.full(t.size, t.max())
        levels[j] = np.where(np.isfinite(sup), sup, 0.0)
    return MultiscaleField(
        kind="leaders",
        levels=levels,
        positions={j: np.arange(levels[j].size) for j in js},
        interior={j: pyramid.interior[j].copy() for j in js},
        strides={j: 1 for j in js},
        valid_range=_leader_valid_range(js),
    )


def p_leaders(pyramid: CoefficientPyramid, p: float) -> MultiscaleField:
    """p-leaders: depth-weighted l^p sums over the leader window.

    l_p(j, k) = (sum over lambda' in 3*lambda of |c(j', k')|**p * 2**-(j'-j))
    ** (1/p), with the sum running over all available finer scales; boundary
    -affected coefficients contribute nothing. Reduces to wavelet leaders as
    p -> infinity.
    """
    if not math.isfinite(p):
        raise ValidationError("p must be finite; use wavelet_leaders for p = inf")
    if p <= 0:
        raise NonPositiveP(f"p must be positive, got {p}")
    js = _require_levels(pyramid)
    subtree: dict[int, np.ndarray] = {}
    prev: np.ndarray | None = None
    for j in reversed(js):
        cur = np.where(pyramid.interior[j], np.abs(pyramid.levels[j]) ** p, 0.0)
        if prev is not None:
            pad = np.zeros(2 * cur.size)
            pad[: min(prev.size, pad.size)] = prev[: pad.size]
            cur = cur + 0.5 * (pad[0::2] + pad[1::2])
        subtree[j] = cur
        prev = cur
    levels = {}
    for j in js:
        t = subtree[j]
        if t.size >= 3:
            total = np.roll(t, 1) + t + np.roll(t, -1)
        else:
            total = np.full(t.size, t.sum())
        levels[j] = total ** (1.0 / p)
    return MultiscaleField(
        kind="pleaders",
        levels=levels,
        positions={j: np.arange(levels[j].size) for j in js},
        interior={j: pyramid.interior[j].copy() for j in js},
        strides={j: 1 for j in js},
        valid_range=_leader_valid_range(js),
        p=p,
    )


def theta_omega_neighborhood(
    index: DyadicIndex,
    growth: GrowthPair,
    pyramid_shape: dict[int, int],
) -> Neighborhood:
    """Exact index set of the (theta, omega)-neighborhood of one interval.

    The set contains every (j', k') with j <= j' <= theta(j) and
    |k/2**j - k'/2**j'| <= omega(j')/2**j, positions taken modulo the level
    size (periodic wrap). Scales beyond the finest available one are clipped
    and the number of clipped scales is recorded.
    """
    j, k = index.j, index.k
    if j not in pyramid_shape or not (0 <= k < pyramid_shape[j]):
        raise ValidationError(f"index ({j}, {k}) outside the pyramid shape")
    j_fine = max(pyramid_shape)
    th = growth.theta(j)
    indices: list[DyadicIndex] = []
    for jp in range(j, min(th, j_fine) + 1):
        if jp not in pyramid_shape:
            continue
        n = pyramid_shape[jp]
        m = jp - j
        halfwidth = growth.omega(jp) * 2**m
        center = k * 2**m
        if 2 * halfwidth + 1 >= n:
            ks = range(n)
        else:
            ks = sorted({x % n for x in range(center - halfwidth, center + halfwidth + 1)})
        indices.extend(DyadicIndex(jp, kk) for kk in ks)
    return Neighborhood(indices=indices, clipped_scales=max(0, th - j_fine))


def theta_omega_leaders(
    pyramid: CoefficientPyramid, growth: GrowthPair
) -> MultiscaleField:
    """(theta, omega)-leaders, evaluated on the stride grid.

    d(j, k) = sup of |c| over the (theta, omega)-neighborhood of (j, k),
    computed only at positions k that are multiples of floor(2 * omega(j)).
    Scales whose window reaches past the finest pyramid level are computed
    with the clipped window but excluded from ``valid_range``.
    Boundary-affected coefficients never enter a supremum.
    """
    js = _require_levels(pyramid)
    cert = growth.certificate(js[0], js[-1])
    if not cert.valid:
        raise ValidationError("growth pair fails its validity certificate")
    absmap = {j: _masked_abs(pyramid, j) for j in js}
    j_fine = pyramid.j_fine
    levels, positions, interior, strides, clip = {}, {}, {}, {}, {}
    for j in js:
        n = absmap[j].size
        stride = max(1, int(math.floor(2 * growth.omega(j))))
        ks = np.arange(0, n, stride)
        th = growth.theta(j)
        clip[j] = max(0, th - j_fine)
        d = np.zeros(ks.size)
        for jp in range(j, min(th, j_fine) + 1):
            if jp not in absmap:
                continue
            vals = absmap[jp]
            m = jp - j
            halfwidth = growth.omega(jp) * 2**m
            if 2 * halfwidth + 1 >= vals.size:
                d = np.maximum(d, vals.max())
                continue
            centers = ks * 2**m
            offsets = np.arange(-halfwidth, halfwidth + 1)
            idx = (centers[:, None] + offsets[None, :]) % vals.size
            d = np.maximum(d, vals[idx].max(axis=1))
        levels[j] = d
        positions[j] = ks
        interior[j] = pyramid.interior[j][ks]
        strides[j] = stride
    valid = [j for j in js if growth.theta(j) <= j_fine]
    valid_range = (min(valid), max(valid)) if valid else None
    return MultiscaleField(
        kind="thetaomega",
        levels=levels,
        positions=positions,
        interior=interior,
        strides=strides,
        valid_range=valid_range,
        growth=growth,
        scale_clip=clip,
    )
