"""Experiment harness: accuracy sweeps, conditioning profiles and timings.

Every experiment is deterministic given its seed (PCG64 via
``numpy.random.default_rng``) and returns plain row dictionaries ready for
CSV serialization.  Random inputs follow one recipe throughout: real and
imaginary parts drawn uniformly from [-1, 1].
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import blocks, sampling
from .errors import OptisphError
from .sampling import ColatitudeGrid, Measure, Ordering
from .transform import (
    HarmonicCoefficients,
    SpatialSamples,
    TransformStats,
    forward_sht,
    inverse_sht,
)


@dataclass(frozen=True)
class SweepConfig:
    """One experiment sweep: which band limits, how many trials, which grid."""

    band_limits: tuple
    trials: int = 10
    seed: int = 0
    measure: Measure = Measure.UNIFORM
    ordering: Ordering = Ordering.CONDITION_MINIMIZED
    cache_dir: str | None = None

    def grid(self, band_limit: int) -> ColatitudeGrid:
        return sampling.make_grid(
            band_limit, self.measure, self.ordering, cache_dir=self.cache_dir
        )


def random_coefficients(band_limit: int, rng) -> HarmonicCoefficients:
    n = band_limit**2
    values = rng.uniform(-1.0, 1.0, n) + 1j * rng.uniform(-1.0, 1.0, n)
    return HarmonicCoefficients(band_limit, values)


def random_samples(band_limit: int, rng) -> SpatialSamples:
    n = band_limit**2
    flat = rng.uniform(-1.0, 1.0, n) + 1j * rng.uniform(-1.0, 1.0, n)
    return SpatialSamples.from_flat(band_limit, flat)


def spectral_roundtrip_errors(grid: ColatitudeGrid, trials: int, rng):
    """Average max/mean coefficient error of inverse-then-forward transforms."""
    e_max = e_mean = 0.0
    n = grid.band_limit**2
    for _ in range(trials):
        truth = random_coefficients(grid.band_limit, rng)
        recovered = forward_sht(inverse_sht(truth, grid), grid)
        diff = np.abs(truth.values - recovered.values)
        e_max += diff.max()
        e_mean += diff.sum() / n
    return e_max / trials, e_mean / trials


def spatial_roundtrip_errors(grid: ColatitudeGrid, trials: int, rng):
    """Average max/mean sample error of forward-then-inverse transforms."""
    e_max = e_mean = 0.0
    n = grid.band_limit**2
    for _ in range(trials):
        truth = random_samples(grid.band_limit, rng)
        recovered = inverse_sht(forward_sht(truth, grid), grid)
        diff = np.abs(truth.flatten() - recovered.flatten())
        e_max += diff.max()
        e_mean += diff.sum() / n
    return e_max / trials, e_mean / trials


def _sweep(config: SweepConfig, runner):
    rows = []
    rng = np.random.default_rng(config.seed)
    for L in config.band_limits:
        try:
            grid = config.grid(L)
            e_max, e_mean = runner(grid, config.trials, rng)
            rows.append({"L": L, "trials": config.trials, "e_max": e_max, "e_mean": e_mean})
        except OptisphError as exc:
            rows.append(
                {"L": L, "trials": config.trials, "e_max": f"error:{exc}", "e_mean": ""}
            )
    return rows


def run_spectral_experiment(config: SweepConfig):
    """Spectral -> spatial -> spectral accuracy sweep."""
    return _sweep(config, spectral_roundtrip_errors)


def run_spatial_experiment(config: SweepConfig):
    """Spatial -> spectral -> spatial accuracy sweep."""
    return _sweep(config, spatial_roundtrip_errors)


def error_surface(grid: ColatitudeGrid, trials: int, seed: int):
    """Per-(ell, m) coefficient error of the spectral round trip, trial-averaged."""
    rng = np.random.default_rng(seed)
    L = grid.band_limit
    acc = np.zeros(L * L)
    for _ in range(trials):
        truth = random_coefficients(L, rng)
        recovered = forward_sht(inverse_sht(truth, grid), grid)
        acc += np.abs(truth.values - recovered.values)
    acc /= trials
    rows = []
    for ell in range(L):
        for m in range(-ell, ell + 1):
            rows.append({"ell": ell, "m": m, "e": acc[ell * ell + ell + m]})
    return rows


def condition_profile(grid: ColatitudeGrid) -> np.ndarray:
    """Condition number of every per-order block of a grid."""
    return np.array(
        [blocks.condition_number(blocks.build_block(grid, m)) for m in range(grid.band_limit)]
    )


def condition_rows(band_limits, measure: Measure, ordering: Ordering, cache_dir=None):
    """Per-order condition numbers plus a max summary row for each band limit."""
    rows = []
    for L in band_limits:
        grid = sampling.make_grid(L, measure, ordering, cache_dir=cache_dir)
        kappas = condition_profile(grid)
        for m, kappa in enumerate(kappas):
            rows.append({"L": L, "m": m, "kappa": kappa})
        rows.append({"L": L, "m": "max", "kappa": kappas.max()})
    return rows


@dataclass
class BenchResult:
    band_limit: int
    trials: int
    tau_inverse: float
    tau_forward: float
    tau_solve: float
    samples: dict = field(default_factory=dict)


def benchmark(
    band_limits,
    trials: int = 3,
    seed: int = 0,
    measure: Measure = Measure.UNIFORM,
    ordering: Ordering = Ordering.INTERLEAVED,
    cache_dir=None,
    aggregate: str = "median",
):
    """Wall-time the transforms: one warmup, then ``trials`` timed runs.

    The solve-step time is accumulated inside the forward transform itself.
    Conditioning checks are disabled so that ill-conditioned default
    orderings at large band limits still yield representative timings;
    accuracy is not measured here.
    """
    if aggregate not in ("median", "mean"):
        raise ValueError(f"unknown aggregate {aggregate!r}")
    reduce = np.median if aggregate == "median" else np.mean
    rng = np.random.default_rng(seed)
    results = []
    for L in band_limits:
        grid = sampling.make_grid(L, measure, ordering, cache_dir=cache_dir)
        coeffs = random_coefficients(L, rng)
        t_inv, t_fwd, t_solve = [], [], []
        for trial in range(trials + 1):
            t0 = time.perf_counter()
            samples = inverse_sht(coeffs, grid)
            ti = time.perf_counter() - t0
            stats = TransformStats()
            t0 = time.perf_counter()
            forward_sht(samples, grid, check=False, stats=stats)
            tf = time.perf_counter() - t0
            if trial == 0:
                continue  # warmup excluded
            t_inv.append(ti)
            t_fwd.append(tf)
            t_solve.append(stats.solve_seconds)
        results.append(
            BenchResult(
                band_limit=L,
                trials=trials,
                tau_inverse=float(reduce(t_inv)),
                tau_forward=float(reduce(t_fwd)),
                tau_solve=float(reduce(t_solve)),
            )
        )
    return results


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])
