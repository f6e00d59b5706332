"""Data ingestion, the end-to-end analysis pipeline and report serialization.

Input formats
-------------
CSV: one column per channel, optional single header row with channel labels,
decimal-point reals; any non-finite or unparseable cell is rejected with its
row and column. RAW: a 16-byte header (magic ``WSMF``, little-endian u32
channel count, little-endian u64 samples per channel) followed by
channel-major little-endian float64 samples.

Reports are emitted as one JSON document (stable key order, floats printed
with 17 significant digits, -infinity as null) plus one plot-ready TSV per
channel with columns H and D ("-inf" literal for points off the support).
"""

from __future__ import annotations

import csv
import math
import re
import struct
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .errors import (
    ChannelOutOfRange,
    ComputeError,
    IoError,
    LengthMismatch,
    ParseError,
    ValidationError,
)
from .multiscale import (
    GrowthPair,
    coefficient_field,
    p_leaders,
    theta_omega_leaders,
    wavelet_leaders,
)
from .scaling import (
    AdmissibilityReport,
    HminFit,
    MomentGrid,
    ScalingFunction,
    hmin_fit,
    p_admissibility,
    scaling_function,
    structure_functions,
)
from .sparsity import SparsitySplit, admissible_p_bound, sparsity_split
from .spectrum import LegendreSpectrum, legendre_transform
from .wavelet import (
    CoefficientPyramid,
    Signal,
    WaveletSpec,
    decompose,
    max_fine_scale,
    pseudo_fractional_integrate,
)

__all__ = [
    "AnalysisConfig",
    "AnalysisReport",
    "ChannelReport",
    "ingest",
    "run_analysis",
    "emit_report",
    "write_csv",
    "write_raw",
    "canonical_json",
]

RAW_MAGIC = b"WSMF"
FORMALISMS = ("leaders", "pleaders", "thetaomega")


# --------------------------------------------------------------------------
# ingestion
# --------------------------------------------------------------------------

def _read_csv(path: Path) -> list[Signal]:
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise IoError(str(exc)) from exc
    if not rows:
        raise ParseError(f"{path}: empty file")

    def parse_cell(text: str):
        try:
            value = float(text)
        except ValueError:
            return None
        return value

    first = [parse_cell(c.strip()) for c in rows[0]]
    has_header = any(v is None for v in first)
    if has_header:
        labels = [c.strip() for c in rows[0]]
        data_rows = rows[1:]
        offset = 2
    else:
        labels = [f"ch{i}" for i in range(len(rows[0]))]
        data_rows = rows
        offset = 1
    ncol = len(labels)
    if not data_rows:
        raise ParseError(f"{path}: no data rows")
    columns = [[] for _ in range(ncol)]
    for i, row in enumerate(data_rows):
        if len(row) != ncol:
            raise LengthMismatch(
                f"{path}: row {i + offset} has {len(row)} cells, expected {ncol}"
            )
        for c, cell in enumerate(row):
            value = parse_cell(cell.strip())
            if value is None or not math.isfinite(value):
                raise ParseError(
                    f"{path}: row {i + offset}, column {labels[c]!r}: "
                    f"bad value {cell.strip()!r}"
                )
            columns[c].append(value)
    return [Signal(np.array(col), label=lab) for col, lab in zip(columns, labels)]


def _read_raw(path: Path) -> list[Signal]:
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(str(exc)) from exc
    if len(blob) < 16:
        raise ParseError(f"{path}: truncated header")
    magic, nchan, nsamp = struct.unpack("<4sIQ", blob[:16])
    if magic != RAW_MAGIC:
        raise ParseError(f"{path}: bad magic {magic!r}")
    expected = 16 + 8 * nchan * nsamp
    if len(blob) != expected:
        raise LengthMismatch(
            f"{path}: {len(blob)} bytes, header promises {expected}"
        )
    data = np.frombuffer(blob, dtype="<f8", offset=16).reshape(nchan, nsamp)
    out = []
    for i in range(nchan):
        col = data[i]
        if not np.all(np.isfinite(col)):
            raise ParseError(f"{path}: channel {i} contains non-finite samples")
        out.append(Signal(col.astype(np.float64), label=f"ch{i}"))
    return out


def ingest(path, fmt: str, channels=None) -> list[Signal]:
    """Load the selected channels of a CSV or RAW file as Signals."""
    path = Path(path)
    if fmt == "csv":
        signals = _read_csv(path)
    elif fmt == "raw":
        signals = _read_raw(path)
    else:
        raise ValidationError(f"unknown format {fmt!r}")
    if channels is None:
        return signals
    labels = [s.label for s in signals]
    chosen = []
    for ch in channels:
        if isinstance(ch, int) or (isinstance(ch, str) and ch.lstrip("-").isdigit()):
            idx = int(ch)
            if not (0 <= idx < len(signals)):
                raise ChannelOutOfRange(f"channel index {idx} of {len(signals)}")
        else:
            if ch not in labels:
                raise ChannelOutOfRange(f"channel {ch!r} not in {labels}")
            idx = labels.index(ch)
        chosen.append(signals[idx])
    return chosen


def write_csv(path, signals: list[Signal]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([s.label or f"ch{i}" for i, s in enumerate(signals)])
            for row in zip(*[s.samples for s in signals]):
                writer.writerow([format(v, ".17g") for v in row])
    except OSError as exc:
        raise IoError(str(exc)) from exc


def write_raw(path, signals: list[Signal]) -> None:
    lengths = {len(s) for s in signals}
    if len(lengths) != 1:
        raise LengthMismatch("raw files need equal-length channels")
    nsamp = lengths.pop()
    try:
        with open(path, "wb") as fh:
            fh.write(struct.pack("<4sIQ", RAW_MAGIC, len(signals), nsamp))
            for s in signals:
                fh.write(s.samples.astype("<f8").tobytes())
    except OSError as exc:
        raise IoError(str(exc)) from exc


# --------------------------------------------------------------------------
# configuration and pipeline
# --------------------------------------------------------------------------

@dataclass
class AnalysisConfig:
    """Everything one analysis run needs; exactly one formalism per run."""

    input_path: str
    input_format: str = "csv"
    channels: list | None = None
    vanishing_moments: int = 3
    formalism: str = "thetaomega"
    p: float = 2.0
    beta: float = 0.25
    theta_const: int = 0
    omega_exponent: float = 1.0
    fractional_order: float = 0.0
    j1: int | None = None
    j2: int | None = None
    q_lo: float = -8.0
    q_hi: float = 8.0
    q_count: int = 64
    h_count: int = 512
    floor: float = -0.5
    sparsity: bool = False
    sparsity_q: float = 2.0
    sparsity_constant: float = 1.0
    json_path: str | None = None
    tsv_dir: str | None = None
    figures: bool = True

    def __post_init__(self):
        if self.formalism not in FORMALISMS:
            raise ValidationError(f"formalism must be one of {FORMALISMS}")
        if self.input_format not in ("csv", "raw"):
            raise ValidationError("input_format must be 'csv' or 'raw'")
        if self.j1 is not None and self.j2 is not None and self.j2 - self.j1 < 2:
            raise ValidationError("need j2 - j1 >= 2")

    def growth(self) -> GrowthPair:
        return GrowthPair(
            beta=self.beta,
            theta_const=self.theta_const,
            omega_exponent=self.omega_exponent,
        )

    def echo(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out


@dataclass
class ChannelReport:
    label: str
    scale_range: tuple[int, int]
    hmin: HminFit
    admissibility: AdmissibilityReport
    zeta: ScalingFunction
    spectrum: LegendreSpectrum
    offset_applied: float
    sparsity: SparsitySplit | None
    p_bound: float | None


@dataclass
class AnalysisReport:
    channels: list[ChannelReport]
    provenance: dict


def _field_for(config: AnalysisConfig, pyramid: CoefficientPyramid):
    if config.formalism == "leaders":
        return wavelet_leaders(pyramid)
    if config.formalism == "pleaders":
        return p_leaders(pyramid, config.p)
    return theta_omega_leaders(pyramid, config.growth())


def _clamp_range(want: tuple[int, int], valid: tuple[int, int] | None,
                 what: str) -> tuple[int, int]:
    if valid is None:
        raise ComputeError(f"{what}: no valid scales")
    j1, j2 = max(want[0], valid[0]), min(want[1], valid[1])
    if j2 - j1 < 2:
        raise ComputeError(f"{what}: scale range [{j1}, {j2}] too narrow")
    return j1, j2


def analyze_channel(signal: Signal, config: AnalysisConfig) -> ChannelReport:
    spec = WaveletSpec(vanishing_moments=config.vanishing_moments)
    jmax = max_fine_scale(len(signal))
    if config.j2 is not None and config.j2 > jmax:
        raise ValidationError(
            f"j2 = {config.j2} exceeds decomposable depth {jmax} "
            f"for length {len(signal)}"
        )
    want = (
        config.j1 if config.j1 is not None else max(3, jmax - 8),
        config.j2 if config.j2 is not None else jmax - 2,
    )
    pyramid = decompose(signal, spec)

    # diagnostics on the raw data: uniform regularity and p-admissibility
    fit = hmin_fit(pyramid, *want)
    raw_sf = structure_functions(coefficient_field(pyramid), MomentGrid.positive())
    raw_zeta = scaling_function(raw_sf, *want)
    admissibility = p_admissibility(raw_zeta)

    split = None
    bound = None
    if config.sparsity:
        split = sparsity_split(pyramid, config.sparsity_q, config.sparsity_constant)
        bound = admissible_p_bound(split.delta, fit.value)

    s = config.fractional_order
    if s != 0.0:
        pyramid = pseudo_fractional_integrate(pyramid, s)
    fld = _field_for(config, pyramid)
    j1, j2 = _clamp_range(want, fld.valid_range, f"channel {signal.label!r}")
    grid = MomentGrid(np.linspace(config.q_lo, config.q_hi, config.q_count))
    sf = structure_functions(fld, grid)
    zeta = scaling_function(sf, j1, j2)
    spectrum = legendre_transform(
        zeta, q_restriction="all", floor=config.floor, h_count=config.h_count
    )
    if s != 0.0:
        # report spectra in the coordinates of the un-integrated data
        spectrum = LegendreSpectrum(
            h_values=spectrum.h_values - s,
            d_values=spectrum.d_values,
            source_kind=spectrum.source_kind,
            q_lo=spectrum.q_lo,
            q_hi=spectrum.q_hi,
            mode_h=spectrum.mode_h - s,
            floor=spectrum.floor,
        )
    return ChannelReport(
        label=signal.label,
        scale_range=(j1, j2),
        hmin=fit,
        admissibility=admissibility,
        zeta=zeta,
        spectrum=spectrum,
        offset_applied=-s,
        sparsity=split,
        p_bound=bound,
    )


def run_analysis(config: AnalysisConfig) -> AnalysisReport:
    """Execute the full pipeline for every selected channel.

    Per channel: decompose, estimate the uniform regularity and the
    coefficient-based admissibility diagnostics on the raw data, optionally
    pseudo-fractionally integrate, compute the configured multiscale field,
    structure functions, scaling function and full-range Legendre spectrum.
    With a nonzero fractional order s the reported spectrum is offset by
    h -> h - s, cancelling the translation induced by the integration.
    """
    from . import __version__

    signals = ingest(config.input_path, config.input_format, config.channels)
    channels = []
    for sig in signals:
        try:
            channels.append(analyze_channel(sig, config))
        except ValidationError as exc:
            raise type(exc)(f"channel {sig.label!r}: {exc}") from exc
    provenance = {
        "config": config.echo(),
        "seed": None,
        "versions": {"wsmf": __version__, "numpy": np.__version__},
    }
    return AnalysisReport(channels=channels, provenance=provenance)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            raise ValidationError("NaN is not representable in reports")
        if math.isinf(v):
            return "null"
        return format(v, ".17g")
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, dict):
        items = ",".join(f"{_json_value(str(k))}:{_json_value(v)}"
                         for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ",".join(_json_value(v) for v in value) + "]"
    raise ValidationError(f"cannot serialize {type(value).__name__}")


def canonical_json(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, floats at 17 significant
    digits, infinities as null."""
    return _json_value(obj)


def _zeta_dict(zeta: ScalingFunction) -> dict:
    return {
        "kind": zeta.kind,
        "p": zeta.p,
        "j1": zeta.j1,
        "j2": zeta.j2,
        "q": list(zeta.q_values),
        "zeta": [float(z) if d else None for z, d in zip(zeta.zeta, zeta.defined)],
        "intercept": [float(b) if d else None
                      for b, d in zip(zeta.intercepts, zeta.defined)],
        "goodness": [float(g) if d else None
                     for g, d in zip(zeta.goodness, zeta.defined)],
    }


def channel_dict(ch: ChannelReport) -> dict:
    out = {
        "label": ch.label,
        "scale_range": [ch.scale_range[0], ch.scale_range[1]],
        "hmin": {
            "value": ch.hmin.value,
            "intercept": ch.hmin.intercept,
            "j": [int(j) for j in ch.hmin.j_values],
            "log2_sup": list(ch.hmin.log2_sup),
        },
        "admissibility": {
            "exists_positive": ch.admissibility.exists_positive,
            "best_p": ch.admissibility.best_p,
            "slope_at_zero": ch.admissibility.slope_at_zero,
        },
        "scaling": _zeta_dict(ch.zeta),
        "spectrum": {
            "mode_H": ch.spectrum.mode_h,
            "offset_applied": ch.offset_applied,
            "q_lo": ch.spectrum.q_lo,
            "q_hi": ch.spectrum.q_hi,
            "H": list(ch.spectrum.h_values),
            "D": list(ch.spectrum.d_values),
        },
    }
    if ch.sparsity is not None:
        sp = ch.sparsity
        out["sparsity"] = {
            "delta": sp.delta,
            "q": sp.q,
            "C": sp.budget_constant,
            "levels": sorted(sp.totals),
            "M": [sp.totals[j] for j in sorted(sp.totals)],
            "N": [sp.small_counts[j] for j in sorted(sp.totals)],
            "p_bound": ch.p_bound,
        }
    else:
        out["sparsity"] = None
    return out


def report_dict(report: AnalysisReport) -> dict:
    return {
        "channels": [channel_dict(c) for c in report.channels],
        "provenance": report.provenance,
    }


def _safe_name(label: str, index: int) -> str:
    name = re.sub(r"[^A-Za-z0-9._-]", "_", label or f"ch{index}")
    return name or f"ch{index}"


def emit_report(report: AnalysisReport, json_path=None, tsv_dir=None) -> None:
    """Write the JSON document and the per-channel (H, D) TSV tables.

    Output is byte-stable for identical reports: fixed float formatting and
    deterministic key order throughout.
    """
    if json_path is not None:
        text = canonical_json(report_dict(report)) + "\n"
        try:
            Path(json_path).write_text(text)
        except OSError as exc:
            raise IoError(str(exc)) from exc
    if tsv_dir is not None:
        outdir = Path(tsv_dir)
        try:
            outdir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoError(str(exc)) from exc
        for i, ch in enumerate(report.channels):
            lines = ["H\tD"]
            for h, d in zip(ch.spectrum.h_values, ch.spectrum.d_values):
                dtxt = "-inf" if d == -np.inf else format(float(d), ".17g")
                lines.append(f"{format(float(h), '.17g')}\t{dtxt}")
            target = outdir / f"{_safe_name(ch.label, i)}.tsv"
            try:
                target.write_text("\n".join(lines) + "\n")
            except OSError as exc:
                raise IoError(str(exc)) from exc
