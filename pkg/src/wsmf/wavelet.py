"""Dyadic discrete wavelet decomposition with L1-normalized coefficients.

Scale convention: the signal is identified with a function on [0, 1), so the
scale index ``j`` grows toward fine scales and level ``j`` holds roughly
``2**j`` coefficients (exactly ``2**j`` for power-of-two input lengths).
Level ``j`` of the pyramid corresponds to transform octave ``J - j`` where
``J = floor(log2(length))``.

Coefficients are stored in L1 normalization: the value kept at node (j, k) is
``2**(j/2)`` times the orthonormal transform output, so a coefficient scales
like ``2**j * integral(f * psi(2**j x - k))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ComputeError, NonFiniteInput, SignalTooShort, ValidationError

__all__ = [
    "Signal",
    "WaveletSpec",
    "DyadicIndex",
    "CoefficientPyramid",
    "decompose",
    "reconstruct",
    "pseudo_fractional_integrate",
    "pyramid_from_levels",
    "max_fine_scale",
]


@dataclass(frozen=True)
class Signal:
    """A 1-D real signal with a free-text channel label."""

    samples: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.samples.ndim != 1:
            raise ValidationError("signal samples must be one-dimensional")

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class DyadicIndex:
    """Scale/position index (j, k) of one dyadic interval."""

    j: int
    k: int


def _daubechies_lowpass(r: int) -> np.ndarray:
    """Minimum-phase Daubechies lowpass filter with ``r`` vanishing moments.

    Built by spectral factorization of the half-band polynomial: the binomial
    polynomial P(y) = sum_k C(r-1+k, k) y^k is mapped to the z-domain through
    y = -(z - 1)^2 / (4 z), the roots inside the unit circle are kept, and the
    result is multiplied by (1 + z)^r. Normalized so that sum(h) = sqrt(2).
    """
    if r == 1:
        return np.array([1.0, 1.0]) / math.sqrt(2.0)
    # Q(z) = z^(r-1) * P(-(z-1)^2 / (4z)), coefficients lowest degree first.
    q = np.zeros(2 * r - 1)
    for k in range(r):
        coeff = math.comb(r - 1 + k, k) * (-1.0) ** k / 4.0**k
        term = np.array([1.0])
        for _ in range(2 * k):
            term = np.convolve(term, [-1.0, 1.0])  # (z - 1)^(2k)
        padded = np.zeros(2 * r - 1)
        padded[r - 1 - k : r - 1 - k + term.size] = coeff * term
        q += padded
    roots = np.roots(q[::-1])
    inside = roots[np.abs(roots) < 1.0]
    h = np.array([1.0])
    for _ in range(r):
        h = np.convolve(h, [1.0, 1.0])  # (1 + z)^r
    h = np.convolve(h, np.real(np.poly(inside)[::-1]))
    return h * (math.sqrt(2.0) / h.sum())


@dataclass(frozen=True)
class WaveletSpec:
    """Compactly supported orthonormal wavelet, identified by family and r.

    The filter taps are derived at construction and checked against the
    orthonormality conditions sum(h) = sqrt(2) and
    sum_n h[n] h[n + 2m] = delta(m) to 1e-10.
    """

    family: str = "daubechies"
    vanishing_moments: int = 3
    filter_taps: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        r = self.vanishing_moments
        if self.family != "daubechies":
            raise ValidationError(f"unknown wavelet family: {self.family!r}")
        if not (1 <= r <= 10):
            raise ValidationError("vanishing_moments must be in [1, 10]")
        if self.filter_taps is None:
            object.__setattr__(self, "filter_taps", _daubechies_lowpass(r))
        taps = np.asarray(self.filter_taps, dtype=np.float64)
        object.__setattr__(self, "filter_taps", taps)
        if abs(taps.sum() - math.sqrt(2.0)) > 1e-10:
            raise ValidationError("filter taps do not sum to sqrt(2)")
        for m in range(1, taps.size // 2):
            if abs(np.dot(taps[: taps.size - 2 * m], taps[2 * m :])) > 1e-10:
                raise ValidationError("filter taps violate orthonormality")
        if abs(np.dot(taps, taps) - 1.0) > 1e-10:
            raise ValidationError("filter taps are not unit-norm")

    @property
    def highpass(self) -> np.ndarray:
        h = self.filter_taps
        g = h[::-1].copy()
        g[1::2] *= -1.0
        return g


@dataclass(frozen=True)
class CoefficientPyramid:
    """L1-normalized wavelet coefficients per dyadic scale.

    ``levels[j]`` is the coefficient array at scale j (larger j = finer);
    ``interior[j]`` flags coefficients whose filter support did not cross the
    signal edge. Boundary-affected positions stay in the arrays but are meant
    to be excluded from all downstream statistics. Instances are treated as
    immutable; transforms return new pyramids.
    """

    levels: dict[int, np.ndarray]
    interior: dict[int, np.ndarray]
    j_fine: int
    j_coarse: int
    origin_length: int
    spec: WaveletSpec | None = None
    approx: np.ndarray | None = None
    normalization: str = "L1"

    def count(self, j: int) -> int:
        return self.levels[j].size

    @property
    def scales(self) -> list[int]:
        return sorted(self.levels)

    def interior_values(self, j: int) -> np.ndarray:
        return self.levels[j][self.interior[j]]


def max_fine_scale(length: int) -> int:
    """Finest analysis scale available for a signal of the given length."""
    if length < 4:
        raise SignalTooShort("need at least 4 samples")
    return int(math.floor(math.log2(length))) - 1


def pyramid_from_levels(
    levels: dict[int, np.ndarray],
    origin_length: int | None = None,
    interior: dict[int, np.ndarray] | None = None,
    spec: WaveletSpec | None = None,
    approx: np.ndarray | None = None,
) -> CoefficientPyramid:
    """Assemble a pyramid from per-scale arrays (synthetic or test data)."""
    if not levels:
        raise ValidationError("levels must be nonempty")
    lv = {int(j): np.asarray(v, dtype=np.float64) for j, v in levels.items()}
    js = sorted(lv)
    if interior is None:
        interior = {j: np.ones(lv[j].size, dtype=bool) for j in js}
    if origin_length is None:
        origin_length = 2 * lv[js[-1]].size
    return CoefficientPyramid(
        levels=lv,
        interior={j: np.asarray(m, dtype=bool) for j, m in interior.items()},
        j_fine=js[-1],
        j_coarse=js[0],
        origin_length=int(origin_length),
        spec=spec,
        approx=approx,
    )


def decompose(
    signal: Signal,
    spec: WaveletSpec | None = None,
    j_fine: int | None = None,
    j_coarse: int | None = None,
) -> CoefficientPyramid:
    """Dyadic wavelet decomposition of a signal into an L1-normalized pyramid.

    Parameters
    ----------
    signal : Signal
        Input samples; all values must be finite.
    spec : WaveletSpec, optional
        Wavelet to use. Defaults to Daubechies with 3 vanishing moments.
    j_fine, j_coarse : int, optional
        Finest and coarsest scale indices to populate. Defaults to the finest
        available scale and j_coarse = 2. The coarsest level must retain at
        least 4 coefficients.

    Returns
    -------
    CoefficientPyramid
        Levels j_coarse..j_fine with boundary-affected coefficients flagged.

    Notes
    -----
    The transform uses periodic extension; a coefficient is flagged as
    boundary-affected when the support of its equivalent filter,
    ``(2**o - 1) * (taps - 1) + 1`` samples at octave ``o``, wraps around the
    signal edge.
    """
    spec = spec if spec is not None else WaveletSpec()
    x = signal.samples
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput(f"signal {signal.label!r} contains NaN or Inf")
    n = x.size
    jf_max = max_fine_scale(n)
    big_j = jf_max + 1
    if j_fine is None:
        j_fine = jf_max
    if j_coarse is None:
        j_coarse = 2
    if not (j_fine > j_coarse >= 1):
        raise ValidationError("need j_fine > j_coarse >= 1")
    if j_fine > jf_max:
        raise SignalTooShort(f"j_fine={j_fine} exceeds finest available scale {jf_max}")
    if n // 2 ** (big_j - j_coarse) < 4:
        raise SignalTooShort(
            f"length {n} leaves fewer than 4 coefficients at scale {j_coarse}"
        )

    h = spec.filter_taps
    g = spec.highpass
    taps = h.size
    levels: dict[int, np.ndarray] = {}
    interior: dict[int, np.ndarray] = {}
    a = x
    for octave in range(1, big_j - j_coarse + 1):
        if a.size % 2:
            a = a[:-1]
        half = a.size // 2
        if half < 2:
            raise SignalTooShort(f"cascade exhausted at octave {octave}")
        ap = np.concatenate([a, a[: taps - 1]])
        detail = np.correlate(ap, g, mode="valid")[::2]
        a = np.correlate(ap, h, mode="valid")[::2]
        j = big_j - octave
        if j <= j_fine:
            support = (2**octave - 1) * (taps - 1)
            positions = np.arange(half)
            levels[j] = 2.0 ** (j / 2.0) * detail
            interior[j] = (2**octave) * positions + support < half * 2**octave
    return CoefficientPyramid(
        levels=levels,
        interior=interior,
        j_fine=j_fine,
        j_coarse=j_coarse,
        origin_length=n,
        spec=spec,
        approx=a,
    )


def reconstruct(pyramid: CoefficientPyramid) -> np.ndarray:
    """Invert the decomposition (periodic synthesis filter bank).

    Requires the pyramid to carry its coarse approximation and exactly dyadic
    level sizes. With the full scale range this is a perfect reconstruction of
    the analyzed samples up to floating rounding.
    """
    if pyramid.approx is None or pyramid.spec is None:
        raise ComputeError("pyramid carries no approximation band or wavelet spec")
    h = pyramid.spec.filter_taps
    g = pyramid.spec.highpass
    a = pyramid.approx
    for j in pyramid.scales:
        d = pyramid.levels[j] * 2.0 ** (-j / 2.0)
        if d.size != a.size:
            raise ComputeError("level sizes are not dyadic; cannot reconstruct")
        n = 2 * a.size
        ua = np.zeros(n)
        ua[::2] = a
        ud = np.zeros(n)
        ud[::2] = d
        out = np.zeros(n)
        for t in range(h.size):
            out += h[t] * np.roll(ua, t) + g[t] * np.roll(ud, t)
        a = out
    return a


def pseudo_fractional_integrate(
    pyramid: CoefficientPyramid, s: float
) -> CoefficientPyramid:
    """Multiply every coefficient at scale j by ``2**(-s*j)``.

    Negative ``s`` performs pseudo-fractional differentiation. Composing
    orders s and t equals a single application of order s + t up to floating
    rounding. The approximation band, when present, is scaled with the
    coarsest level's factor so that repeated application stays consistent.
    """
    if not math.isfinite(s):
        raise ValidationError("fractional order must be finite")
    levels = {j: c * 2.0 ** (-s * j) for j, c in pyramid.levels.items()}
    approx = pyramid.approx
    if approx is not None:
        approx = approx * 2.0 ** (-s * pyramid.j_coarse)
    return replace(pyramid, levels=levels, approx=approx)
