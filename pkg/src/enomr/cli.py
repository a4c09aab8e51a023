"""Command-line front end: preset runs, convergence ladders, validation, timing.

Exit codes: 0 success; 2 configuration error; 3 runtime failure (non-finite
or non-physical state); 4 precision-floor warning escalated under --strict.
Failures print one machine-parsable line ``enomr-error category=... detail=...``
to stderr, and partially written output directories get an INCOMPLETE marker.
"""

from __future__ import annotations

import argparse
import os
import sys
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import extended as xt
from .coeffs import dump_coefficients_csv, validate_reference_tables
from .harness import (
    ExperimentConfig,
    PRESETS,
    build_setup,
    run_convergence_ladder,
    run_experiment,
    timing_comparison,
)
from .io import (
    mark_incomplete,
    write_convergence_csv,
    write_field2d_csv,
    write_manifest,
    write_profile_csv,
    write_timing_csv,
)
from .physics import NonPhysicalState
from .reconstruct import all_scheme_names
from .timeint import NanDetected

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_FLOOR = 4

_COMPONENT_NAMES = {1: ["u"], 3: ["rho", "mom_x", "energy"], 4: ["rho", "mom_x", "mom_y", "energy"]}


class CliError(Exception):
    def __init__(self, category: str, detail: str, code: int):
        super().__init__(detail)
        self.category = category
        self.detail = detail
        self.code = code


def parse_exact(text: str) -> Fraction:
    """Exact rational from a decimal/scientific literal ('1e6', '0.001', '3/4')."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(Decimal(text))


def _apply_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("ENOMR_THREADS")
        threads = int(env) if env else 1
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(threads)
    return threads


def _read_config_file(path: str) -> dict:
    """Flat key=value lines; [section] headers allowed and ignored."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError("config", f"cannot read config file: {exc}", EXIT_CONFIG)
    for ln, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#") or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise CliError("config", f"{path}:{ln}: expected key=value", EXIT_CONFIG)
        key, value = line.split("=", 1)
        out[key.strip().replace("_", "-")] = value.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="enomr", description=__doc__)
    parser.add_argument("--version", action="version", version=f"enomr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scheme", choices=all_scheme_names(), default="eno-mr5")
        p.add_argument("--precision", choices=xt.PRECISIONS, default=xt.DOUBLE)
        p.add_argument("--cfl", type=float, default=0.3)
        p.add_argument("--n", type=int, default=100, help="nodes per unit length (1/h)")
        p.add_argument("--nx", type=int, default=None)
        p.add_argument("--ny", type=int, default=None)
        p.add_argument("--tend", type=str, default=None, help="end time (exact literal)")
        p.add_argument("--lambda", dest="lam", type=str, default="1", help="solution scale factor")
        p.add_argument("--alpha", type=int, default=3, help="sine power of the smooth advection test")
        p.add_argument("--out", type=str, default="enomr-out")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--strict", action="store_true")
        p.add_argument("--config", type=str, default=None, help="key=value config file")

    p_val = sub.add_parser("validate-coeffs", help="check generated coefficients against the reference tables")
    common(p_val)

    p_conv = sub.add_parser("convergence", help="mesh-refinement ladder on a smooth preset")
    common(p_conv)
    p_conv.add_argument("--problem", choices=["sin-alpha", "burgers"], default="sin-alpha")
    p_conv.add_argument("--meshes", type=str, default="50,100,200", help="comma list of 1/h values")

    p_r1 = sub.add_parser("run1d", help="run a 1D preset and write the final profile")
    common(p_r1)
    p_r1.add_argument("--preset", choices=["advect-sin-alpha", "advect-composite",
                                           "burgers-smooth", "burgers-shock", "lax",
                                           "titarev-toro"], required=True)

    p_r2 = sub.add_parser("run2d", help="run a 2D preset and write the final field")
    common(p_r2)
    p_r2.add_argument("--preset", choices=["rp1", "rp2", "double-mach", "rayleigh-taylor"],
                      required=True)

    p_t = sub.add_parser("timing", help="normalized per-step cost across schemes")
    common(p_t)
    p_t.add_argument("--preset", choices=sorted(PRESETS), default="rp1")
    p_t.add_argument("--steps", type=int, default=4)
    p_t.add_argument("--reps", type=int, default=3)
    p_t.add_argument("--schemes", type=str,
                     default="weno-ao53,weno-ao953,eno-mr5,eno-mr9,eno-mr13,eno-mr17")
    return parser


def _merge_config_file(args) -> None:
    if not getattr(args, "config", None):
        return
    file_cfg = _read_config_file(args.config)
    mapping = {
        "scheme": ("scheme", str), "precision": ("precision", str), "cfl": ("cfl", float),
        "n": ("n", int), "nx": ("nx", int), "ny": ("ny", int), "tend": ("tend", str),
        "lambda": ("lam", str), "alpha": ("alpha", int), "out": ("out", str),
        "threads": ("threads", int), "meshes": ("meshes", str), "preset": ("preset", str),
        "problem": ("problem", str), "steps": ("steps", int), "reps": ("reps", int),
        "schemes": ("schemes", str),
    }
    for key, raw in file_cfg.items():
        if key not in mapping:
            raise CliError("config", f"unknown config key {key!r}", EXIT_CONFIG)
        attr, conv = mapping[key]
        if hasattr(args, attr):
            setattr(args, attr, conv(raw))


def _experiment_config(args, problem: str) -> ExperimentConfig:
    try:
        lam = parse_exact(args.lam)
        t_end = parse_exact(args.tend) if args.tend else None
    except (ValueError, ArithmeticError) as exc:
        raise CliError("config", f"bad numeric literal: {exc}", EXIT_CONFIG)
    return ExperimentConfig(
        problem=problem, scheme=args.scheme, n=args.n, precision=args.precision,
        lam=lam, alpha=args.alpha, cfl=args.cfl, t_end=t_end, nx=args.nx, ny=args.ny,
    )


def _manifest_dict(args, threads: int, extra: dict) -> dict:
    skip = {"config", "command"}
    base = {k.replace("_", "-"): v for k, v in vars(args).items() if k not in skip and v is not None}
    base["threads"] = threads
    base.update(extra)
    return base


def _cmd_validate(args, out_dir: Path, threads: int) -> int:
    report = validate_reference_tables()
    dump_coefficients_csv(out_dir / "coefficients.csv")
    write_manifest(out_dir, _manifest_dict(args, threads, {"stencils-checked": report.checked}))
    print(report.summary())
    if not report.ok:
        raise CliError("validation", f"{len(report.mismatches)} coefficient mismatches", EXIT_RUNTIME)
    print(f"validate-coeffs: {report.checked}/{report.checked} stencils matched")
    return EXIT_OK


def _cmd_convergence(args, out_dir: Path, threads: int) -> int:
    problem = {"sin-alpha": "advect-sin-alpha", "burgers": "burgers-smooth"}[args.problem]
    meshes = [int(tok) for tok in args.meshes.split(",") if tok]
    cfg = _experiment_config(args, problem)
    rows = run_convergence_ladder(cfg, meshes)
    write_convergence_csv(out_dir / "convergence.csv", rows,
                          header_comments=[f"problem={problem}", f"scheme={args.scheme}",
                                           f"precision={args.precision}", f"lambda={args.lam}"])
    write_manifest(out_dir, _manifest_dict(args, threads, {"problem": problem}))
    floored = [r for r in rows if r.floored]
    for r in rows:
        order = "-" if r.order_l1 is None else f"{r.order_l1:.2f}"
        tag = "  [precision floor]" if r.floored else ""
        print(f"h={r.h:<12g} L1={r.l1_str:<24} order={order}{tag}")
    if floored:
        msg = f"{len(floored)} rows at the {args.precision} precision floor"
        print(f"warning: {msg}")
        if args.strict:
            raise CliError("precision-floor", msg, EXIT_FLOOR)
    return EXIT_OK


def _run_and_snapshot(args, cfg: ExperimentConfig, out_dir: Path, threads: int) -> int:
    setup = build_setup(cfg)
    result = run_experiment(setup)
    grid = setup.problem.grid
    names = _COMPONENT_NAMES[setup.problem.model.n_components]
    comments = [f"{k}={v}" for k, v in sorted(setup.meta.items())] + [f"t-reached={result.t!r}"]
    if grid.dims == 1:
        columns = {name: result.state.field[i] for i, name in enumerate(names)}
        write_profile_csv(out_dir / "profile.csv", grid.axis_coords(0), columns, comments)
    else:
        comps = {name: xt.to_float_array(result.state.field[i]) for i, name in enumerate(names)}
        write_field2d_csv(out_dir / "field.csv", grid.axis_coords(0), grid.axis_coords(1),
                          comps, comments)
    write_manifest(out_dir, _manifest_dict(args, threads, {"steps": result.steps,
                                                           "t-reached": repr(result.t)}))
    payload = xt.to_float_array(result.state.field)
    if not np.all(np.isfinite(payload)):
        raise CliError("runtime-nan", "non-finite values in the final field", EXIT_RUNTIME)
    print(f"{cfg.problem}: {result.steps} steps to t={result.t:g}; wrote {out_dir}")
    return EXIT_OK


def _cmd_run(args, out_dir: Path, threads: int) -> int:
    cfg = _experiment_config(args, args.preset)
    return _run_and_snapshot(args, cfg, out_dir, threads)


def _cmd_timing(args, out_dir: Path, threads: int) -> int:
    schemes = [s for s in args.schemes.split(",") if s]
    cfg = _experiment_config(args, args.preset)
    entries = timing_comparison(schemes, cfg, repetitions=args.reps, steps=args.steps)
    write_timing_csv(out_dir / "timing.csv", entries,
                     header_comments=[f"preset={args.preset}", f"n={args.n}",
                                      f"steps={args.steps}", f"reps={args.reps}",
                                      f"threads={threads}"])
    write_manifest(out_dir, _manifest_dict(args, threads, {}))
    for name, secs, ratio in entries:
        print(f"{name:<12} {secs:.4f} s/step   ratio {ratio:.3f}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    out_dir = None
    try:
        _merge_config_file(args)
        threads = _apply_threads(getattr(args, "threads", None))
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "validate-coeffs":
            return _cmd_validate(args, out_dir, threads)
        if args.command == "convergence":
            return _cmd_convergence(args, out_dir, threads)
        if args.command in ("run1d", "run2d"):
            return _cmd_run(args, out_dir, threads)
        if args.command == "timing":
            return _cmd_timing(args, out_dir, threads)
        raise CliError("config", f"unknown command {args.command}", EXIT_CONFIG)
    except CliError as exc:
        if out_dir is not None:
            mark_incomplete(out_dir, exc.category, exc.detail)
        print(f"enomr-error category={exc.category} detail={exc.detail}", file=sys.stderr)
        return exc.code
    except (NanDetected, NonPhysicalState) as exc:
        if out_dir is not None:
            mark_incomplete(out_dir, "runtime-nan", str(exc))
        print(f"enomr-error category=runtime-nan detail={exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, OSError) as exc:
        if out_dir is not None:
            mark_incomplete(out_dir, "config", str(exc))
        print(f"enomr-error category=config detail={exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
