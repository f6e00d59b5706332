"""Legendre spectra, the weak-scaling pipeline and reference spectra.

The Legendre transform maps an estimated scaling function to an upper bound
of the multifractal spectrum: L(H) = inf_q (1 + H q - zeta(q)). Restricting
the infimum to q > 0 reproduces the coefficient-based bound (increasing hull
only); taking all q with leader-type quantities resolves the decreasing part
as well. Values below a configurable floor stand in for -infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateHistogram,
    IncompatibleQRestriction,
    UnsupportedModel,
    ValidationError,
)
from .multiscale import GrowthPair, theta_omega_leaders
from .scaling import (
    MomentGrid,
    ScalingFunction,
    default_scale_range,
    scaling_function,
    structure_functions,
)
from .wavelet import CoefficientPyramid

__all__ = [
    "LegendreSpectrum",
    "LargeDeviationSpectrum",
    "legendre_transform",
    "ws_spectrum_pipeline",
    "rws_large_deviation",
    "theoretical_spectrum",
    "halfwidth_at",
]


@dataclass(frozen=True)
class LegendreSpectrum:
    """Sampled (H, D) curve; D values of -inf mark points off the support."""

    h_values: np.ndarray
    d_values: np.ndarray
    source_kind: str
    q_lo: float
    q_hi: float
    mode_h: float
    floor: float = -0.5

    def support(self) -> tuple[float, float]:
        finite = np.isfinite(self.d_values)
        if not finite.any():
            raise ValidationError("spectrum has empty support")
        hs = self.h_values[finite]
        return float(hs.min()), float(hs.max())


@dataclass(frozen=True)
class LargeDeviationSpectrum:
    """Histogram-based large-deviation spectrum of the coefficient exponents."""

    alpha_grid: np.ndarray
    rho: np.ndarray
    epsilon: float
    rho_infinity: float
    includes_infinity_bin: bool
    j_values: np.ndarray


def legendre_transform(
    zeta: ScalingFunction,
    h_grid: np.ndarray | None = None,
    q_restriction: str = "all",
    floor: float = -0.5,
    h_count: int = 512,
) -> LegendreSpectrum:
    """Discrete Legendre transform of an estimated scaling function.

    Parameters
    ----------
    zeta : ScalingFunction
        Estimated exponents over a moment grid.
    h_grid : array-like, optional
        Regularity grid. Defaults to 512 points spanning the range of the
        finite-difference slopes of zeta, widened by 0.5 on each side.
    q_restriction : {"all", "positive"}
        "positive" keeps only q > 0 (increasing bound); "all" requires a
        quantity kind that supports negative moments.
    floor : float
        Values below this are reported as -inf.

    Notes
    -----
    The point (q, zeta) = (0, 0) is always included: the zeroth-order
    structure function is normalized to a constant, so its exponent
    vanishes; this caps the transform at 1.
    """
    if q_restriction not in ("all", "positive"):
        raise ValidationError("q_restriction must be 'all' or 'positive'")
    keep = zeta.defined.copy()
    if q_restriction == "positive":
        keep &= zeta.q_values > 0
    elif zeta.kind == "coefficients":
        raise IncompatibleQRestriction(
            "raw coefficients do not support negative moments; "
            "use leaders, p-leaders or (theta, omega)-leaders"
        )
    qs = zeta.q_values[keep]
    zs = zeta.zeta[keep]
    if qs.size == 0:
        raise ValidationError("no usable q values after restriction")
    if not np.any(np.abs(qs) < 1e-12):
        qs = np.append(qs, 0.0)
        zs = np.append(zs, 0.0)
    order = np.argsort(qs)
    qs, zs = qs[order], zs[order]
    if h_grid is None:
        slopes = np.diff(zs) / np.diff(qs)
        h_grid = np.linspace(slopes.min() - 0.5, slopes.max() + 0.5, h_count)
    h_grid = np.asarray(h_grid, dtype=np.float64)
    d = np.min(1.0 + h_grid[:, None] * qs[None, :] - zs[None, :], axis=1)
    mode_h = float(h_grid[np.argmax(d)])
    d = np.where(d < floor, -np.inf, d)
    return LegendreSpectrum(
        h_values=h_grid,
        d_values=d,
        source_kind=zeta.kind,
        q_lo=float(qs.min()),
        q_hi=float(qs.max()),
        mode_h=mode_h,
        floor=floor,
    )


def halfwidth_at(spectrum: LegendreSpectrum, level: float = 0.5) -> float | None:
    """Half-width of the spectrum at a given D level, around the mode.

    Linear interpolation of the two crossings; None when the curve never
    drops to the level on one side of the mode.
    """
    h, d = spectrum.h_values, spectrum.d_values
    mode = int(np.argmax(d))

    def cross(indices) -> float | None:
        prev = mode
        for i in indices:
            if d[i] <= level:
                if not np.isfinite(d[i]):
                    return float(h[prev])
                t = (d[prev] - level) / (d[prev] - d[i])
                return float(h[prev] + t * (h[i] - h[prev]))
            prev = i
        return None

    right = cross(range(mode + 1, h.size))
    left = cross(range(mode - 1, -1, -1))
    if right is None or left is None:
        return None
    return (right - left) / 2.0


def ws_spectrum_pipeline(
    pyramid: CoefficientPyramid,
    growth: GrowthPair | None = None,
    grid: MomentGrid | None = None,
    j1: int | None = None,
    j2: int | None = None,
    h_grid: np.ndarray | None = None,
    floor: float = -0.5,
) -> LegendreSpectrum:
    """Weak-scaling spectrum: (theta, omega)-leaders -> structure functions
    -> scaling function -> full-range Legendre transform.

    Identical to calling the four constituents by hand with the same
    arguments; provided as the one-call front door.
    """
    growth = growth if growth is not None else GrowthPair()
    grid = grid if grid is not None else MomentGrid.symmetric()
    field = theta_omega_leaders(pyramid, growth)
    sf = structure_functions(field, grid)
    if j1 is None or j2 is None:
        d1, d2 = default_scale_range(pyramid.j_fine, field.valid_range)
        j1 = d1 if j1 is None else j1
        j2 = d2 if j2 is None else j2
    zeta = scaling_function(sf, j1, j2)
    return legendre_transform(zeta, h_grid=h_grid, q_restriction="all", floor=floor)


def rws_large_deviation(
    pyramid: CoefficientPyramid,
    epsilon: float,
    alpha_grid: np.ndarray | None = None,
    j1: int | None = None,
    j2: int | None = None,
) -> LargeDeviationSpectrum:
    """Empirical wavelet large-deviation spectrum.

    Per scale j, the exponents X(j, k) = -log2|c(j, k)| / j are histogrammed
    in windows [alpha - epsilon, alpha + epsilon]; rho(alpha) is the
    regression slope of log2(2**j * fraction) against j over the scales where
    the window is populated (at least 3 needed, else -inf). Exactly-zero
    coefficients aggregate into the +infinity bin. Slopes are capped at 1,
    the almost-sure bound for a probability times 2**j.
    """
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise ValidationError("epsilon must be positive and finite")
    scales = [j for j in pyramid.scales if j >= 1 and pyramid.interior[j].sum() >= 4]
    if j1 is not None:
        scales = [j for j in scales if j >= j1]
    if j2 is not None:
        scales = [j for j in scales if j <= j2]
    if len(scales) < 3:
        raise DegenerateHistogram("fewer than 3 usable scales")

    exponents: dict[int, np.ndarray] = {}
    totals: dict[int, int] = {}
    zero_fraction: dict[int, float] = {}
    for j in scales:
        vals = np.abs(pyramid.interior_values(j))
        nz = vals > 0
        totals[j] = vals.size
        zero_fraction[j] = 1.0 - nz.sum() / vals.size
        exponents[j] = -np.log2(vals[nz]) / j
    pooled = np.concatenate([exponents[j] for j in scales])
    if pooled.size == 0:
        raise DegenerateHistogram("no nonzero coefficients in range")
    if alpha_grid is None:
        lo, hi = float(pooled.min()), float(pooled.max())
        count = max(2, int(math.ceil((hi - lo) / (epsilon / 2.0))) + 1)
        alpha_grid = np.linspace(lo, hi, count)
    alpha_grid = np.asarray(alpha_grid, dtype=np.float64)

    rho = np.full(alpha_grid.size, -np.inf)
    for i, alpha in enumerate(alpha_grid):
        xs, ys = [], []
        for j in scales:
            x = exponents[j]
            frac = np.count_nonzero(np.abs(x - alpha) <= epsilon) / totals[j]
            if frac > 0:
                xs.append(j)
                ys.append(j + math.log2(frac))
        if len(xs) >= 3:
            slope = np.polyfit(np.array(xs, dtype=float), np.array(ys), 1)[0]
            rho[i] = min(float(slope), 1.0)

    xs, ys = [], []
    for j in scales:
        if zero_fraction[j] > 0:
            xs.append(j)
            ys.append(j + math.log2(zero_fraction[j]))
    rho_inf = -np.inf
    if len(xs) >= 3:
        rho_inf = min(float(np.polyfit(np.array(xs), np.array(ys), 1)[0]), 1.0)
    return LargeDeviationSpectrum(
        alpha_grid=alpha_grid,
        rho=rho,
        epsilon=float(epsilon),
        rho_infinity=rho_inf,
        includes_infinity_bin=True,
        j_values=np.array(scales, dtype=int),
    )


def _point_spectrum(h0: float, kind: str) -> LegendreSpectrum:
    return LegendreSpectrum(
        h_values=np.array([h0]),
        d_values=np.array([1.0]),
        source_kind=kind,
        q_lo=-math.inf,
        q_hi=math.inf,
        mode_h=h0,
    )


def theoretical_spectrum(config, formalism: str = "ws", p: float | None = None,
                         h_grid: np.ndarray | None = None) -> LegendreSpectrum:
    """Closed-form reference spectrum of a synthetic model.

    Supported combinations: fbm/fgn under the weak-scaling formalism (point
    spectrum of dimension one at the Hurst exponent), random wavelet series
    under "ws" (atoms (alpha_i, eta_i)) or "p"/"holder" (the increasing
    envelope eta * (H + 1/p) / (alpha + 1/p), capped at dimension one), and
    mrw under any formalism (parabola with mode H + lambda**2 / 2 and
    curvature parameter lambda**2). Intended as a test oracle.
    """
    model = config.model
    if formalism not in ("ws", "p", "holder"):
        raise UnsupportedModel(f"unknown formalism {formalism!r}")
    if model == "fbm":
        if formalism != "ws":
            return _point_spectrum(config.hurst, f"theory:{model}")
        return _point_spectrum(config.hurst, f"theory:{model}")
    if model == "fgn":
        if formalism != "ws":
            raise UnsupportedModel("fgn admits no p-exponent analysis")
        return _point_spectrum(config.alpha, f"theory:{model}")
    if model in ("rws", "lacunary"):
        atoms = config.rws_atoms()
        if formalism == "ws":
            hs = np.array([a for a, _ in atoms])
            ds = np.array([e for _, e in atoms])
            return LegendreSpectrum(
                h_values=hs,
                d_values=ds,
                source_kind=f"theory:{model}",
                q_lo=-math.inf,
                q_hi=math.inf,
                mode_h=float(hs[np.argmax(ds)]),
            )
        inv_p = 0.0 if formalism == "holder" else 1.0 / float(p)
        if formalism == "p" and (p is None or p <= 0):
            raise UnsupportedModel("formalism 'p' needs p > 0")
        if any(a + inv_p <= 0 for a, _ in atoms):
            raise UnsupportedModel("atom exponents must exceed -1/p")
        h_min = min(a for a, _ in atoms)
        # smallest H at which the envelope reaches dimension one
        h_cap = min((a + inv_p) / e - inv_p for a, e in atoms)
        if h_grid is None:
            h_grid = np.linspace(h_min - 0.1, h_cap + 0.1, 512)
        h_grid = np.asarray(h_grid, dtype=np.float64)
        d = np.full(h_grid.size, -np.inf)
        for i, h in enumerate(h_grid):
            cand = [e * (h + inv_p) / (a + inv_p) for a, e in atoms if a <= h]
            if cand and h <= h_cap + 1e-12:
                d[i] = max(cand)
        return LegendreSpectrum(
            h_values=h_grid,
            d_values=d,
            source_kind=f"theory:{model}:{formalism}",
            q_lo=-math.inf,
            q_hi=math.inf,
            mode_h=h_cap,
        )
    if model == "mrw":
        lam2 = config.intermittency**2
        c1 = config.hurst + lam2 / 2.0
        half_support = math.sqrt(2.0 * lam2)
        if h_grid is None:
            h_grid = np.linspace(c1 - half_support - 0.1, c1 + half_support + 0.1, 512)
        h_grid = np.asarray(h_grid, dtype=np.float64)
        d = 1.0 - (h_grid - c1) ** 2 / (2.0 * lam2)
        d = np.where(d >= 0.0, d, -np.inf)
        return LegendreSpectrum(
            h_values=h_grid,
            d_values=d,
            source_kind="theory:mrw",
            q_lo=-math.inf,
            q_hi=math.inf,
            mode_h=c1,
        )
    raise UnsupportedModel(f"unknown model {model!r}")
