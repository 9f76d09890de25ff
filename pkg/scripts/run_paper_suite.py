#!/usr/bin/env python3
"""Run the full experiment suite into a results directory.

Produces the CSV reports that the figures package consumes: accuracy
sweeps, a conditioning comparison across measures and orderings, an error
surface, and transform timings.  Grid orderings are cached next to the
results so repeat runs are fast.

Usage: python scripts/run_paper_suite.py [results_dir] [--full]

By default the sweeps stop at L = 128 so the suite finishes in a couple of
minutes; --full extends them to L = 256 (accuracy) and L = 512 (timings).
"""

import argparse
import sys
from pathlib import Path

from optisph.cli import main as optisph


def run(*argv):
    argv = [str(a) for a in argv]
    print("optisph " + " ".join(argv), flush=True)
    code = optisph(argv)
    if code != 0:
        sys.exit(code)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("results", nargs="?", default="results")
    parser.add_argument("--full", action="store_true")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--trials", type=int, default=10)
    args = parser.parse_args()

    out = Path(args.results)
    out.mkdir(parents=True, exist_ok=True)
    cache = out / "grid_cache"

    acc_sweep = "16,32,64,128" + (",256" if args.full else "")
    bench_sweep = "32,64,128,256" + (",512" if args.full else "")
    surface_L = 256 if args.full else 64

    common = ("--seed", args.seed, "--cache-dir", cache)
    run("exp1", "-L", acc_sweep, "--trials", args.trials, *common,
        "-o", out / "exp1.csv")
    run("exp2", "-L", acc_sweep, "--trials", args.trials, *common,
        "-o", out / "exp2.csv")
    run("errsurface", "-L", surface_L, "--trials", args.trials, *common,
        "-o", out / "errsurface.csv")
    for measure in ("uniform", "sine", "tan13"):
        for ordering in ("interleaved", "condmin"):
            run("cond", "-L", "16,32,64", "--measure", measure,
                "--ordering", ordering, "--cache-dir", cache,
                "-o", out / f"cond-{measure}-{ordering}.csv")
    run("bench", "-L", bench_sweep, "--trials", 3, "--seed", args.seed,
        "-o", out / "bench.csv")
    print(f"reports written to {out}/")


if __name__ == "__main__":
    main()
