"""Command-line frontend.

Subcommands cover grid generation and caching, file-based transforms, and
the experiment suites (accuracy, conditioning, error surface, timing), all
emitting deterministic CSV.  Exit codes: 0 success, 1 numeric failure,
2 usage or parse failure.
"""

import argparse
import sys

import numpy as np

from . import experiments, fileio, reference, sampling
from .errors import BandLimitError, FileFormatError, OptisphError
from .sampling import Measure, Ordering
from .transform import forward_sht, inverse_sht

USAGE_ERRORS = (BandLimitError, FileFormatError)


def _band_limit_list(text: str):
    try:
        values = [int(s) for s in text.split(",") if s]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("band limits must be positive integers")
    return tuple(values)


def _add_grid_options(p, default_ordering="condmin"):
    p.add_argument("--measure", choices=[m.value for m in Measure], default="uniform")
    p.add_argument(
        "--ordering", choices=[o.value for o in Ordering], default=default_ordering
    )
    p.add_argument("--cache-dir", default=None, help="directory for grid cache files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optisph",
        description="Sphere sampling with L^2 points and fast spherical harmonic transforms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grid", help="generate a grid and write its cache file")
    p.add_argument("-L", "--band-limit", type=int, required=True)
    _add_grid_options(p)
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("forward", help="signal file -> coefficient file")
    p.add_argument("--signal", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("-o", "--out", required=True)
    p.add_argument(
        "--oracle",
        action="store_true",
        help="use the dense least-squares reference instead of the fast transform",
    )

    p = sub.add_parser("inverse", help="coefficient file -> signal file")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("-o", "--out", required=True)
    p.add_argument(
        "--oracle",
        action="store_true",
        help="use brute-force synthesis instead of the fast transform",
    )

    p = sub.add_parser("exp1", help="spectral-spatial-spectral accuracy sweep")
    p.add_argument("-L", "--band-limits", type=_band_limit_list, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _add_grid_options(p)
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("exp2", help="spatial-spectral-spatial accuracy sweep")
    p.add_argument("-L", "--band-limits", type=_band_limit_list, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _add_grid_options(p)
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("errsurface", help="per-(ell, m) round-trip error surface")
    p.add_argument("-L", "--band-limit", type=int, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _add_grid_options(p)
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("cond", help="per-order condition numbers")
    p.add_argument("-L", "--band-limits", type=_band_limit_list, required=True)
    _add_grid_options(p, default_ordering="interleaved")
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("bench", help="transform wall times")
    p.add_argument("-L", "--band-limits", type=_band_limit_list, required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--mean",
        action="store_true",
        help="aggregate trials by mean instead of median",
    )
    _add_grid_options(p, default_ordering="interleaved")
    p.add_argument("-o", "--out", required=True)

    return parser


def _load_grid_checked(path, expected_L=None, what=""):
    grid = sampling.load_grid(path)
    if expected_L is not None and grid.band_limit != expected_L:
        raise BandLimitError(
            f"band limit mismatch: {what} has L={expected_L}, grid has L={grid.band_limit}"
        )
    return grid


def cmd_grid(args) -> int:
    grid = sampling.make_grid(
        args.band_limit,
        Measure(args.measure),
        Ordering(args.ordering),
        cache_dir=args.cache_dir,
    )
    sampling.save_grid(grid, args.out)
    kappas = experiments.condition_profile(grid)
    print(
        f"grid L={args.band_limit} measure={args.measure} ordering={args.ordering} "
        f"samples={grid.sample_count} max_kappa={kappas.max():.6e}"
    )
    return 0


def cmd_forward(args) -> int:
    samples = fileio.read_signal(args.signal)
    grid = _load_grid_checked(args.grid, samples.band_limit, args.signal)
    if args.oracle:
        coeffs = reference.dense_lsq_analysis(samples, grid)
    else:
        coeffs = forward_sht(samples, grid)
    fileio.write_coefficients(args.out, coeffs)
    return 0


def cmd_inverse(args) -> int:
    coeffs = fileio.read_coefficients(args.coeffs)
    grid = _load_grid_checked(args.grid, coeffs.band_limit, args.coeffs)
    if args.oracle:
        samples = reference.direct_synthesis(coeffs, grid)
    else:
        samples = inverse_sht(coeffs, grid)
    fileio.write_signal(args.out, samples)
    return 0


def _sweep_config(args) -> experiments.SweepConfig:
    return experiments.SweepConfig(
        band_limits=args.band_limits,
        trials=args.trials,
        seed=args.seed,
        measure=Measure(args.measure),
        ordering=Ordering(args.ordering),
        cache_dir=args.cache_dir,
    )


def cmd_exp1(args) -> int:
    rows = experiments.run_spectral_experiment(_sweep_config(args))
    fileio.write_report(args.out, "exp1", args.seed, ["L", "trials", "e_max", "e_mean"], rows)
    return 0


def cmd_exp2(args) -> int:
    rows = experiments.run_spatial_experiment(_sweep_config(args))
    fileio.write_report(args.out, "exp2", args.seed, ["L", "trials", "e_max", "e_mean"], rows)
    return 0


def cmd_errsurface(args) -> int:
    grid = sampling.make_grid(
        args.band_limit,
        Measure(args.measure),
        Ordering(args.ordering),
        cache_dir=args.cache_dir,
    )
    rows = experiments.error_surface(grid, args.trials, args.seed)
    fileio.write_report(args.out, "errsurface", args.seed, ["ell", "m", "e"], rows)
    return 0


def cmd_cond(args) -> int:
    rows = experiments.condition_rows(
        args.band_limits, Measure(args.measure), Ordering(args.ordering), args.cache_dir
    )
    fileio.write_report(args.out, "cond", 0, ["L", "m", "kappa"], rows)
    finite = [r["kappa"] for r in rows if r["m"] == "max"]
    for L, kemax in zip(args.band_limits, finite):
        print(f"L={L} max_kappa={kemax:.6e}")
    return 0


def cmd_bench(args) -> int:
    results = experiments.benchmark(
        args.band_limits,
        trials=args.trials,
        seed=args.seed,
        measure=Measure(args.measure),
        ordering=Ordering(args.ordering),
        cache_dir=args.cache_dir,
        aggregate="mean" if args.mean else "median",
    )
    rows = [
        {
            "L": r.band_limit,
            "trials": r.trials,
            "tau_i": r.tau_inverse,
            "tau_f": r.tau_forward,
            "tau_f1": r.tau_solve,
        }
        for r in results
    ]
    fileio.write_report(
        args.out, "bench", args.seed, ["L", "trials", "tau_i", "tau_f", "tau_f1"], rows
    )
    return 0


_COMMANDS = {
    "grid": cmd_grid,
    "forward": cmd_forward,
    "inverse": cmd_inverse,
    "exp1": cmd_exp1,
    "exp2": cmd_exp2,
    "errsurface": cmd_errsurface,
    "cond": cmd_cond,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except USAGE_ERRORS as exc:
        print(f"optisph: {exc}", file=sys.stderr)
        return 2
    except OptisphError as exc:
        print(f"optisph: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
