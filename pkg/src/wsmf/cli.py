"""Command-line interface.

Subcommands: ``analyze`` (full pipeline to JSON/TSV/figures), ``synth``
(generate validation signals), ``hmin`` (uniform-regularity estimates),
``split`` (sparsity splitting and the admissible-p bound) and ``spectrum``
(Legendre transform of a tabulated scaling function). Exit codes: 0 on
success, 2 for validation errors, 3 for compute errors, 4 for I/O errors.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

import numpy as np

from .errors import ComputeError, ParseError, ReportIoError, ValidationError
from .io import (
    AnalysisConfig,
    canonical_json,
    emit_report,
    ingest,
    report_dict,
    run_analysis,
    write_csv,
    write_raw,
)
from .scaling import ScalingFunction, estimate_hmin
from .sparsity import admissible_p_bound, sparsity_split
from .spectrum import legendre_transform
from .synth import SynthesisConfig, gen_fbm, gen_fgn, gen_mrw, gen_rws
from .wavelet import Signal, WaveletSpec, decompose, max_fine_scale, reconstruct

_CONFIG_KEYS = {
    ("input", "path"): ("input_path", str),
    ("input", "format"): ("input_format", str),
    ("input", "channels"): ("channels", "channels"),
    ("wavelet", "vanishing_moments"): ("vanishing_moments", int),
    ("wavelet", "fractional_order"): ("fractional_order", float),
    ("multiscale", "formalism"): ("formalism", str),
    ("multiscale", "p"): ("p", float),
    ("multiscale", "beta"): ("beta", float),
    ("multiscale", "theta_const"): ("theta_const", int),
    ("multiscale", "omega_exponent"): ("omega_exponent", float),
    ("scaling", "j1"): ("j1", int),
    ("scaling", "j2"): ("j2", int),
    ("spectrum", "q_lo"): ("q_lo", float),
    ("spectrum", "q_hi"): ("q_hi", float),
    ("spectrum", "q_count"): ("q_count", int),
    ("spectrum", "h_count"): ("h_count", int),
    ("spectrum", "floor"): ("floor", float),
    ("sparsity", "enabled"): ("sparsity", "bool"),
    ("sparsity", "q"): ("sparsity_q", float),
    ("sparsity", "constant"): ("sparsity_constant", float),
    ("output", "json"): ("json_path", str),
    ("output", "tsv_dir"): ("tsv_dir", str),
    ("output", "figures"): ("figures", "bool"),
}


def _parse_channels(text):
    if text is None:
        return None
    items = [c.strip() for c in str(text).split(",") if c.strip()]
    return items or None


def _load_config_file(path) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValidationError(f"config file {path!r} not found or unreadable")
    out = {}
    for (section, key), (name, conv) in _CONFIG_KEYS.items():
        if parser.has_option(section, key):
            raw = parser.get(section, key)
            if conv == "bool":
                out[name] = parser.getboolean(section, key)
            elif conv == "channels":
                out[name] = _parse_channels(raw)
            else:
                out[name] = conv(raw)
    return out


def _build_analysis_config(args) -> AnalysisConfig:
    settings = {}
    if args.config:
        settings.update(_load_config_file(args.config))
    overrides = {
        "input_path": args.input,
        "input_format": args.format,
        "channels": _parse_channels(args.channels),
        "vanishing_moments": args.vanishing_moments,
        "formalism": args.formalism,
        "p": args.p,
        "beta": args.beta,
        "theta_const": args.theta_const,
        "omega_exponent": args.omega_exponent,
        "fractional_order": args.fractional_order,
        "j1": args.j1,
        "j2": args.j2,
        "q_lo": args.q_lo,
        "q_hi": args.q_hi,
        "q_count": args.q_count,
        "h_count": args.h_count,
        "floor": args.floor,
        "sparsity": args.sparsity or None,
        "sparsity_q": args.sparsity_q,
        "sparsity_constant": args.sparsity_constant,
        "json_path": args.json,
        "tsv_dir": args.tsv_dir,
        "figures": args.figures,
    }
    if args.meg_scales:
        overrides["j1"], overrides["j2"] = 10, 14
    settings.update({k: v for k, v in overrides.items() if v is not None})
    if "input_path" not in settings:
        raise ValidationError("no input file given (flag --input or config [input] path)")
    return AnalysisConfig(**settings)


def _cmd_analyze(args) -> int:
    config = _build_analysis_config(args)
    report = run_analysis(config)
    emit_report(report, config.json_path, config.tsv_dir)
    if config.figures and config.tsv_dir is not None:
        from .plots import render_channel_figures

        for i, ch in enumerate(report.channels):
            render_channel_figures(ch, config.tsv_dir, i)
    for ch in report.channels:
        print(
            f"{ch.label}\thmin={ch.hmin.value:.4f}\tmode_H={ch.spectrum.mode_h:.4f}"
            f"\tadmissible_p={ch.admissibility.exists_positive}"
        )
    if config.json_path is None and config.tsv_dir is None:
        print(canonical_json(report_dict(report)))
    return 0


def _parse_atoms(text):
    atoms = []
    for chunk in text.split(","):
        a, _, e = chunk.partition(":")
        atoms.append((float(a), float(e)))
    return tuple(atoms)


def _cmd_synth(args) -> int:
    config = SynthesisConfig(
        model=args.model,
        length=args.length,
        seed=args.seed,
        hurst=args.hurst,
        alpha=args.alpha,
        eta=args.eta,
        atoms=_parse_atoms(args.atoms) if args.atoms else None,
        intermittency=args.intermittency,
        uniform_bound=args.uniform_bound,
    )
    if config.model == "fbm":
        signal = gen_fbm(config)
    elif config.model == "fgn":
        signal = gen_fgn(config)
    elif config.model == "mrw":
        signal = gen_mrw(config)
    else:
        pyramid = gen_rws(config)
        signal = Signal(reconstruct(pyramid), label=f"{config.model}_seed{config.seed}")
    if args.out_format == "csv":
        write_csv(args.out, [signal])
    else:
        write_raw(args.out, [signal])
    print(f"{signal.label} -> {args.out} ({len(signal)} samples)")
    return 0


def _default_range(length, j1, j2):
    jmax = max_fine_scale(length)
    if j2 is not None and j2 > jmax:
        raise ValidationError(f"j2 = {j2} exceeds decomposable depth {jmax}")
    return (j1 if j1 is not None else max(3, jmax - 8),
            j2 if j2 is not None else jmax - 2)


def _cmd_hmin(args) -> int:
    signals = ingest(args.input, args.format, _parse_channels(args.channels))
    spec = WaveletSpec(vanishing_moments=args.vanishing_moments)
    for sig in signals:
        j1, j2 = _default_range(len(sig), args.j1, args.j2)
        value = estimate_hmin(decompose(sig, spec), j1, j2)
        print(f"{sig.label}\t{value:.6f}")
    return 0


def _cmd_split(args) -> int:
    signals = ingest(args.input, args.format, _parse_channels(args.channels))
    spec = WaveletSpec(vanishing_moments=args.vanishing_moments)
    for sig in signals:
        pyramid = decompose(sig, spec)
        j1, j2 = _default_range(len(sig), args.j1, args.j2)
        split = sparsity_split(pyramid, args.q, args.constant)
        hmin = estimate_hmin(pyramid, j1, j2)
        bound = admissible_p_bound(split.delta, hmin)
        btxt = "all" if bound is None else f"{bound:.4f}"
        print(f"{sig.label}\tdelta={split.delta:.4f}\thmin={hmin:.4f}\tp<{btxt}")
    return 0


def _read_zeta_table(path):
    qs, zs = [], []
    for i, line in enumerate(Path(path).read_text().splitlines()):
        line = line.strip()
        if not line:
            continue
        parts = line.replace(",", "\t").split()
        if len(parts) < 2:
            raise ParseError(f"{path}: line {i + 1}: need two columns (q, zeta)")
        try:
            qs.append(float(parts[0]))
            zs.append(float(parts[1]))
        except ValueError:
            if i == 0:
                continue  # header row
            raise ParseError(f"{path}: line {i + 1}: bad number") from None
    if len(qs) < 2:
        raise ParseError(f"{path}: need at least two (q, zeta) rows")
    return np.array(qs), np.array(zs)


def _cmd_spectrum(args) -> int:
    qs, zs = _read_zeta_table(args.zeta)
    order = np.argsort(qs)
    qs, zs = qs[order], zs[order]
    zeta = ScalingFunction(
        kind="table",
        q_values=qs,
        zeta=zs,
        intercepts=np.zeros_like(qs),
        goodness=np.ones_like(qs),
        defined=np.isfinite(zs),
        j1=0,
        j2=0,
    )
    spec = legendre_transform(
        zeta, q_restriction=args.q_restriction, floor=args.floor
    )
    lines = ["H\tD"]
    for h, d in zip(spec.h_values, spec.d_values):
        dtxt = "-inf" if d == -np.inf else format(float(d), ".17g")
        lines.append(f"{format(float(h), '.17g')}\t{dtxt}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    if args.figure:
        from .plots import render_spectrum

        render_spectrum(spec, args.figure)
    print(f"mode_H={spec.mode_h:.6f} -> {args.out}")
    return 0


def _add_io_flags(p):
    p.add_argument("--input", "-i", help="input file")
    p.add_argument("--format", default="csv", choices=("csv", "raw"))
    p.add_argument("--channels", help="comma-separated channel names or indices")
    p.add_argument("--vanishing-moments", "-r", type=int, default=3)
    p.add_argument("--j1", type=int)
    p.add_argument("--j2", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsmf",
        description="Multifractal analysis with leaders, p-leaders and "
                     "(theta, omega)-leaders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run the full pipeline on a file")
    pa.add_argument("--config", help="INI config file; flags override it")
    pa.add_argument("--input", "-i")
    pa.add_argument("--format", default=None, choices=("csv", "raw"))
    pa.add_argument("--channels")
    pa.add_argument("--vanishing-moments", "-r", type=int, default=None)
    pa.add_argument("--formalism", choices=("leaders", "pleaders", "thetaomega"))
    pa.add_argument("--p", type=float)
    pa.add_argument("--beta", type=float)
    pa.add_argument("--theta-const", type=int)
    pa.add_argument("--omega-exponent", type=float)
    pa.add_argument("--fractional-order", "-s", type=float)
    pa.add_argument("--j1", type=int)
    pa.add_argument("--j2", type=int)
    pa.add_argument("--meg-scales", action="store_true",
                    help="preset the regression octaves to [10, 14]")
    pa.add_argument("--q-lo", type=float)
    pa.add_argument("--q-hi", type=float)
    pa.add_argument("--q-count", type=int)
    pa.add_argument("--h-count", type=int)
    pa.add_argument("--floor", type=float)
    pa.add_argument("--sparsity", action="store_true")
    pa.add_argument("--sparsity-q", type=float)
    pa.add_argument("--sparsity-constant", type=float)
    pa.add_argument("--json", help="JSON report path")
    pa.add_argument("--tsv-dir", help="directory for per-channel TSV tables")
    pa.add_argument("--figures", action=argparse.BooleanOptionalAction,
                    default=None, help="render PNG figures next to the TSVs")
    pa.set_defaults(func=_cmd_analyze)

    ps = sub.add_parser("synth", help="generate a validation signal")
    ps.add_argument("--model", required=True,
                    choices=("fbm", "fgn", "rws", "lacunary", "mrw"))
    ps.add_argument("--length", "-n", type=int, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--hurst", type=float)
    ps.add_argument("--alpha", type=float)
    ps.add_argument("--eta", type=float)
    ps.add_argument("--atoms", help="rws atoms as alpha:eta,alpha:eta,...")
    ps.add_argument("--intermittency", "--lam", type=float)
    ps.add_argument("--uniform-bound", type=float)
    ps.add_argument("--out", required=True)
    ps.add_argument("--out-format", default="csv", choices=("csv", "raw"))
    ps.set_defaults(func=_cmd_synth)

    ph = sub.add_parser("hmin", help="uniform-regularity estimates")
    _add_io_flags(ph)
    ph.set_defaults(func=_cmd_hmin)

    pp = sub.add_parser("split", help="sparsity split and admissible-p bound")
    _add_io_flags(pp)
    pp.add_argument("--q", type=float, default=2.0)
    pp.add_argument("--constant", "-C", type=float, default=1.0)
    pp.set_defaults(func=_cmd_split)

    pl = sub.add_parser("spectrum", help="Legendre spectrum from a zeta table")
    pl.add_argument("--zeta", required=True, help="TSV/CSV with columns q, zeta")
    pl.add_argument("--q-restriction", default="all", choices=("all", "positive"))
    pl.add_argument("--floor", type=float, default=-0.5)
    pl.add_argument("--out", required=True, help="output TSV path")
    pl.add_argument("--figure", help="optional PNG path")
    pl.set_defaults(func=_cmd_spectrum)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ComputeError as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return 3
    except (ReportIoError, OSError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
