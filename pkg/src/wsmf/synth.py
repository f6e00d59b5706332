"""Reproducible generators for the validation models.

fBm/fGn are sampled with exact covariance through circulant embedding
(Davies-Harte); random wavelet series are populated directly in the wavelet
domain; the multifractal random walk modulates fGn increments with the
exponential of a logarithmically correlated Gaussian field. All generators
are deterministic functions of (config, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmbeddingNotPSD,
    LawViolatesUniformBound,
    ParamOutOfRange,
    ValidationError,
)
from .wavelet import CoefficientPyramid, Signal, WaveletSpec, pyramid_from_levels

__all__ = [
    "SynthesisConfig",
    "gen_fbm",
    "gen_fgn",
    "gen_rws",
    "gen_mrw",
]

MODELS = ("fbm", "fgn", "rws", "lacunary", "mrw")
MIN_LENGTH = 2**10


@dataclass(frozen=True)
class SynthesisConfig:
    """Model choice plus parameters, length (power of two) and seed."""

    model: str
    length: int
    seed: int
    hurst: float | None = None              # fbm, mrw
    alpha: float | None = None              # fgn, lacunary
    eta: float | None = None                # lacunary
    atoms: tuple[tuple[float, float], ...] | None = None  # rws (alpha_i, eta_i)
    intermittency: float | None = None      # mrw lambda
    uniform_bound: float | None = None      # rws decay exponent A

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValidationError(f"unknown model {self.model!r}")
        n = self.length
        if n < MIN_LENGTH or n & (n - 1):
            raise ValidationError(f"length must be a power of two >= {MIN_LENGTH}")
        if self.model == "fbm":
            if self.hurst is None or not (0.0 < self.hurst < 1.0):
                raise ParamOutOfRange("fbm needs hurst in (0, 1)")
        elif self.model == "fgn":
            if self.alpha is None or not (-1.0 < self.alpha < 0.0):
                raise ParamOutOfRange("fgn needs alpha in (-1, 0)")
        elif self.model == "lacunary":
            if self.alpha is None or self.eta is None:
                raise ParamOutOfRange("lacunary needs alpha and eta")
            if not (0.0 < self.eta <= 1.0):
                raise ParamOutOfRange("lacunary density exponent must be in (0, 1]")
        elif self.model == "rws":
            if not self.atoms:
                raise ParamOutOfRange("rws needs at least one (alpha, eta) atom")
            for a, e in self.atoms:
                if not (math.isfinite(a) and 0.0 < e <= 1.0):
                    raise ParamOutOfRange(f"bad rws atom ({a}, {e})")
        elif self.model == "mrw":
            lam = self.intermittency
            if self.hurst is None or not (0.0 < self.hurst < 1.0):
                raise ParamOutOfRange("mrw needs hurst in (0, 1)")
            if lam is None or lam <= 0:
                raise ParamOutOfRange("mrw needs intermittency > 0")
            if lam**2 >= min(0.5, 2.0 * self.hurst):
                raise ParamOutOfRange(
                    "mrw needs lambda**2 < min(1/2, 2 * hurst)"
                )
        if self.model in ("rws", "lacunary") and self.uniform_bound is not None:
            decay = min(a for a, _ in self.rws_atoms())
            if decay < self.uniform_bound - 1e-12:
                raise LawViolatesUniformBound(
                    f"slowest atom decay {decay} violates the bound {self.uniform_bound}"
                )

    def rws_atoms(self) -> tuple[tuple[float, float], ...]:
        if self.model == "lacunary":
            return ((self.alpha, self.eta),)
        if self.model == "rws":
            return tuple(self.atoms)
        raise ValidationError(f"model {self.model!r} has no atoms")


def _fgn_autocov(hurst: float, lags: np.ndarray) -> np.ndarray:
    k = lags.astype(np.float64)
    two_h = 2.0 * hurst
    return 0.5 * (
        np.abs(k + 1) ** two_h - 2.0 * np.abs(k) ** two_h + np.abs(k - 1) ** two_h
    )


def _circulant_gaussian(cov, n: int, rng: np.random.Generator,
                        clip_negative: bool = False, _retry: bool = True) -> np.ndarray:
    """Exact stationary Gaussian sample from an autocovariance function.

    ``cov`` maps an integer lag array to autocovariances. The circulant
    embedding of size 2n is sampled through one FFT of a Hermitian complex
    normal vector; eigenvalues must be nonnegative. Small negative
    eigenvalues are clamped; for larger violations the embedding is doubled
    once (strict mode) or clipped (``clip_negative``, appropriate for
    logarithmic covariances whose embeddings are marginally indefinite).
    """
    m = 2 * n
    gamma = cov(np.arange(n + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(row).real
    floor = -1e-9 * max(lam.max(), 1e-300)
    if lam.min() < floor:
        if clip_negative and lam.min() > -1e-6 * lam.max():
            lam = np.maximum(lam, 0.0)
        elif _retry:
            return _circulant_gaussian(cov, 2 * n, rng, clip_negative, _retry=False)[:n]
        else:
            raise EmbeddingNotPSD(
                f"circulant embedding has eigenvalue {lam.min():g}"
            )
    lam = np.maximum(lam, 0.0)
    z = rng.standard_normal(m)
    w = np.empty(m, dtype=np.complex128)
    w[0] = z[0]
    w[n] = z[n]
    k = np.arange(1, n)
    w[k] = (z[k] + 1j * z[m - k]) / math.sqrt(2.0)
    w[m - k] = np.conj(w[k])
    sample = np.fft.fft(np.sqrt(lam / m) * w).real
    return sample[:n]


def gen_fbm(config: SynthesisConfig) -> Signal:
    """Fractional Brownian motion: exact-covariance fGn increments, summed."""
    if config.model != "fbm":
        raise ValidationError("config.model must be 'fbm'")
    rng = np.random.default_rng(config.seed)
    incr = _circulant_gaussian(
        lambda lags: _fgn_autocov(config.hurst, lags), config.length, rng
    )
    return Signal(np.cumsum(incr), label=f"fbm_h{config.hurst:g}_seed{config.seed}")


def gen_fgn(config: SynthesisConfig) -> Signal:
    """Fractional Gaussian noise with negative Hurst exponent alpha.

    Realized as the discrete difference of an fBm with Hurst alpha + 1, one
    sample longer, so the output keeps the configured length.
    """
    if config.model != "fgn":
        raise ValidationError("config.model must be 'fgn'")
    rng = np.random.default_rng(config.seed)
    hurst = config.alpha + 1.0
    incr = _circulant_gaussian(
        lambda lags: _fgn_autocov(hurst, lags), config.length + 1, rng
    )
    fbm = np.cumsum(incr)
    return Signal(np.diff(fbm), label=f"fgn_a{config.alpha:g}_seed{config.seed}")


def gen_rws(config: SynthesisConfig) -> CoefficientPyramid:
    """Random wavelet series, populated directly in the wavelet domain.

    Per scale j each position independently receives magnitude
    2**(-alpha_i * j) with probability 2**((eta_i - 1) * j) (atoms sampled
    disjointly by stacking their probability intervals) and a random sign,
    and is zero otherwise. The returned pyramid carries a zero approximation
    band and the default wavelet spec, so a signal can be rebuilt with
    ``wavelet.reconstruct``.
    """
    if config.model not in ("rws", "lacunary"):
        raise ValidationError("config.model must be 'rws' or 'lacunary'")
    atoms = config.rws_atoms()
    rng = np.random.default_rng(config.seed)
    big_j = int(math.log2(config.length))
    levels = {}
    for j in range(1, big_j):
        n = 2**j
        u = rng.random(n)
        signs = rng.integers(0, 2, n) * 2.0 - 1.0
        mags = np.zeros(n)
        cum = 0.0
        for a, e in atoms:
            prob = min(1.0, 2.0 ** ((e - 1.0) * j))
            chosen = (u >= cum) & (u < min(1.0, cum + prob)) & (mags == 0.0)
            mags[chosen] = 2.0 ** (-a * j)
            cum = min(1.0, cum + prob)
        levels[j] = signs * mags
        if config.uniform_bound is not None:
            cap = 2.0 ** (-config.uniform_bound * j)
            if mags.max() > cap * (1 + 1e-12):
                raise LawViolatesUniformBound(
                    f"scale {j} magnitude {mags.max():g} exceeds {cap:g}"
                )
    return pyramid_from_levels(
        levels,
        origin_length=config.length,
        spec=WaveletSpec(),
        approx=np.zeros(2),
    )


def gen_mrw(config: SynthesisConfig) -> Signal:
    """Multifractal random walk: fGn increments modulated by a log-normal
    cascade.

    The modulating field is Gaussian with covariance
    lambda**2 * log(L / (1 + tau)) up to the integral scale L = length, mean
    set so that the exponential has unit expectation. Expected log-cumulants
    of the result: c1 = hurst + lambda**2 / 2, c2 = -lambda**2.
    """
    if config.model != "mrw":
        raise ValidationError("config.model must be 'mrw'")
    lam2 = config.intermittency**2
    scale = float(config.length)
    seq = np.random.SeedSequence(config.seed)
    rng_incr, rng_field = (np.random.default_rng(s) for s in seq.spawn(2))
    incr = _circulant_gaussian(
        lambda lags: _fgn_autocov(config.hurst, lags), config.length, rng_incr
    )
    cascade = _circulant_gaussian(
        lambda lags: lam2 * np.log(np.maximum(scale / (1.0 + lags), 1.0)),
        config.length,
        rng_field,
        clip_negative=True,
    )
    cascade -= 0.5 * lam2 * math.log(scale)
    walk = np.cumsum(incr * np.exp(cascade))
    return Signal(
        walk,
        label=f"mrw_h{config.hurst:g}_l{config.intermittency:g}_seed{config.seed}",
    )
