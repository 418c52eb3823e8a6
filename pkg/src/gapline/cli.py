"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 bound violation, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .bounds import FAMILIES, K2_VARIANTS, PROJECTOR_FAMILIES, BoundCurve, bound_curve
from .config import DEFAULT_EPSILONS, MAX_DESK_N, PRESETS, REPRODUCIBLE, ExperimentConfig, parse_intervals
from .errors import BoundViolationError, GaplineError, NumericalError, ValidationError
from .experiments import (
    inverse_matrix,
    plot_table,
    projector_diagnostics,
    run_experiment,
    write_outputs,
)
from .factory import SeededRng, generate
from .io import read_eigs, read_matrix, write_matrix
from .projector import (
    REPORT_FAMILIES,
    DecayProfile,
    bound_violations,
    decay_profile,
    roundoff_floor,
    sign_matrix,
    spectral_projector,
    truncation_report,
)
from .spectrum import distinct_magnitudes, spectrum_from_eigenvalues

EXIT_OK, EXIT_VALIDATION, EXIT_VIOLATION, EXIT_NUMERICAL = 0, 2, 3, 4

log = logging.getLogger("gapline")


def _csv_list(conv):
    def parse(text: str):
        return tuple(conv(tok) for tok in text.replace(",", " ").split())
    return parse


def _families(text: str) -> tuple[str, ...]:
    names = _csv_list(str)(text)
    unknown = set(names) - set(FAMILIES)
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown families {sorted(unknown)}")
    return names


def _guard(n: int, allow_large: bool) -> None:
    if n > MAX_DESK_N and not allow_large:
        raise ValidationError(f"n={n} exceeds {MAX_DESK_N}; pass --allow-large to proceed")


def _spectrum_config(args) -> ExperimentConfig:
    """Build a config from --config / --preset / --eigs / --intervals."""
    overrides = dict(n=args.n, m=args.m, seed=args.seed, complex_=args.complex_ or None,
                     allow_large=args.allow_large)
    if args.config:
        cfg = ExperimentConfig.from_file(args.config)
        return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    if args.preset:
        return ExperimentConfig.from_preset(args.preset, **overrides)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if args.eigs:
        return ExperimentConfig(eigenvalues=tuple(read_eigs(args.eigs)), **overrides)
    if args.intervals:
        return ExperimentConfig(intervals=parse_intervals(args.intervals), **overrides)
    raise ValidationError("give one of --config, --preset, --eigs, --intervals")


def cmd_generate(args) -> int:
    cfg = _spectrum_config(args)
    cfg.check_size()
    lam = cfg.spectrum()
    H = generate(lam, cfg.m, SeededRng(cfg.seed), complex_=cfg.complex_)
    stem = Path(args.out) / (args.name or cfg.name)
    files = write_matrix(stem, H)
    res = H.residuals()
    print(f"wrote {', '.join(str(f) for f in files)}")
    print(f"n={H.n} m={H.m} measured_bandwidth={H.bandwidth()} cutoff={H.cutoff:.3e}")
    for key, val in res.items():
        print(f"{key} = {val:.3e}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    H = read_matrix(args.matrix)
    _guard(H.n, args.allow_large)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.target == "inverse":
        M = inverse_matrix(H)
        diag = {"n": H.n}
    else:
        P = spectral_projector(H, args.mu)
        M = P if args.target == "projector" else sign_matrix(H)
        diag = projector_diagnostics(P)
    decay = decay_profile(M, args.target)
    (out / "decay.csv").write_text(decay.to_csv())
    text = "".join(f"{k} = {v!r}\n" for k, v in diag.items())
    (out / "diagnostics.txt").write_text(text)
    print(text, end="")
    print(f"wrote {out / 'decay.csv'}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    families = args.families or PROJECTOR_FAMILIES
    ks = np.arange(args.k_max + 1)
    kw = dict(m=args.m, tol=args.tol, k2=args.k2)
    if args.eigs:
        lam = read_eigs(args.eigs)
        if any(f.startswith("inv_") for f in families):
            kw["eigenvalues"] = lam
        if any(not f.startswith("inv_") for f in families):
            spec = spectrum_from_eigenvalues(lam, args.mu, scale_to_unit=True)
            kw.update(a=spec.a, b=spec.b, b1=spec.b1, b2=spec.b2,
                      ladder=distinct_magnitudes(spec.apply(lam), a=spec.a))
    else:
        if args.a is None or (args.b is None and (args.b1 is None or args.b2 is None)):
            raise ValidationError("give --eigs, or --a with --b (or --b1 and --b2)")
        b1 = args.b1 if args.b1 is not None else args.b
        b2 = args.b2 if args.b2 is not None else args.b
        kw.update(a=args.a, b=max(b1, b2), b1=b1, b2=b2)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for f in families:
        curve = bound_curve(f, ks, **kw)
        path = out / f"bounds_{f}.csv"
        path.write_text(curve.to_csv())
        print(f"wrote {path}")
    return EXIT_OK


def _family_from_path(path: Path) -> str:
    name = path.stem
    return name[len("bounds_"):] if name.startswith("bounds_") else name


def cmd_compare(args) -> int:
    decay = DecayProfile.from_csv(Path(args.decay).read_text(), args.source)
    curves = {}
    for p in map(Path, args.bounds):
        family = _family_from_path(p)
        curves[family] = BoundCurve.from_csv(family, p.read_text())
    n = len(decay)
    P = None
    if args.matrix:
        P = spectral_projector(read_matrix(args.matrix), args.mu)
    columns = {col: curves[f].dense(n) for col, f in REPORT_FAMILIES.items() if f in curves}
    report = truncation_report(P, decay, columns, args.eps)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.csv").write_text(report.to_csv())
    (out / "plotdata.csv").write_text(plot_table(decay, curves))
    print(report.to_csv(), end="")
    if args.plot:
        from .plotting import render_decay_figure

        render_decay_figure(decay, curves, out / "figure.png")
    floor = roundoff_floor(n)
    bad = {}
    for f, c in curves.items():
        if f in PROJECTOR_FAMILIES or f.startswith("inv_"):
            ks = bound_violations(decay.curve, c.dense(n, fill=np.inf), args.m, floor=floor)
            if ks.size:
                bad[f] = ks
    if bad:
        detail = "; ".join(f"{f} at k={ks[:5].tolist()}" for f, ks in bad.items())
        raise BoundViolationError(f"measured decay exceeds a capped bound: {detail}")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    cfg = ExperimentConfig.from_preset(
        args.figure, n=args.n, seed=args.seed, tol=args.tol, k2=args.k2,
        families=args.families, epsilons=args.eps, allow_large=args.allow_large,
    )
    out = Path(args.out) / args.figure
    result = run_experiment(cfg)
    files = write_outputs(result, out, plot=not args.no_plot)
    for f in files:
        print(f"wrote {f}")
    if result.report is not None and args.figure == "table1":
        print(result.report.to_csv(), end="")
    if result.n_violations:
        detail = "; ".join(f"{f} at k={ks[:5].tolist()}" for f, ks in result.violations.items() if ks.size)
        raise BoundViolationError(f"measured decay exceeds a capped bound: {detail}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gapline", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def spectrum_args(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--config", help="INI experiment file (see docs/config.md)")
        src.add_argument("--preset", choices=sorted(PRESETS))
        src.add_argument("--eigs", help="file with one eigenvalue per line")
        src.add_argument("--intervals", help="uniform spectrum, e.g. '-1:-0.3:100, 0.3:1:100'")
        p.add_argument("--n", type=int, help="override the preset size")
        p.add_argument("--m", type=int, help="bandwidth")
        p.add_argument("--seed", type=int)
        p.add_argument("--complex", dest="complex_", action="store_true", help="complex Hermitian")
        p.add_argument("--allow-large", action="store_true", help=f"permit n > {MAX_DESK_N}")

    p = sub.add_parser("generate", help="write a banded matrix with prescribed spectrum")
    spectrum_args(p)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--name", help="file stem (defaults to the config name)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="decay profile of a matrix function")
    p.add_argument("matrix", help="matrix file written by 'generate'")
    p.add_argument("--mu", type=float, default=0.0, help="split point inside the gap")
    p.add_argument("--target", choices=("projector", "sign", "inverse"), default="projector")
    p.add_argument("--out", default=".")
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", help="evaluate bound families on k = 0..k_max")
    p.add_argument("--eigs", help="eigenvalue file; the gap geometry is read off it")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--b1", type=float)
    p.add_argument("--b2", type=float)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--families", type=_families)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--k2", choices=K2_VARIANTS, default="proof")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("compare", help="truncation report; exit 3 on any bound violation")
    p.add_argument("decay", help="decay CSV from 'analyze'")
    p.add_argument("bounds", nargs="+", help="bound CSVs named bounds_<family>.csv")
    p.add_argument("--m", type=int, required=True, help="bandwidth (violations count from k = m)")
    p.add_argument("--eps", type=_csv_list(float), default=DEFAULT_EPSILONS)
    p.add_argument("--matrix", help="matrix file, for the 1/inf/2 error norms")
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--source", default="projector")
    p.add_argument("--plot", action="store_true", help="also render figure.png")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("reproduce", help="rerun a figure or table preset end to end")
    p.add_argument("figure", choices=REPRODUCIBLE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, help="override the matrix size")
    p.add_argument("--tol", type=float)
    p.add_argument("--k2", choices=K2_VARIANTS)
    p.add_argument("--families", type=_families)
    p.add_argument("--eps", type=_csv_list(float))
    p.add_argument("--out", default="results")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BoundViolationError as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except GaplineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
