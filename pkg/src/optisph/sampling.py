"""Iso-latitude sample grids with exactly L^2 points.

A grid for band limit L consists of L co-latitude rings; ring k carries
2k+1 equispaced longitudes starting at phi = 0, so the total sample count
is exactly L^2.  Ring co-latitudes are drawn from a candidate set generated
by one of three measures (uniform, sin(theta), |tan(theta)|^(1/3)) and
assigned to ring indices either by the default interleaved pattern or by a
greedy ordering that keeps every per-order synthesis block well
conditioned.

Grids are immutable after construction and cheap to share; the greedy
ordering is the only expensive operation and can be cached to disk in a
small, integer-only file that reproduces the co-latitudes bit-exactly.
"""

import enum
import math
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import integrate, optimize

from .errors import (
    BandLimitError,
    FileFormatError,
    IllConditionedGridError,
    RootFindError,
)

_GRID_MAGIC = "OPTISPH-GRID v1"


class Measure(enum.Enum):
    UNIFORM = "uniform"
    SINE = "sine"
    TAN_CUBE_ROOT = "tan13"


class Ordering(enum.Enum):
    INTERLEAVED = "interleaved"
    CONDITION_MINIMIZED = "condmin"


@dataclass(frozen=True, eq=False)
class ColatitudeGrid:
    """Ring co-latitudes plus the provenance needed to rebuild them exactly.

    ``thetas[k]`` is the co-latitude of ring k (the ring with 2k+1
    longitude samples) and equals ``candidates(band_limit, measure)`` at
    index ``permutation[k]``.
    """

    band_limit: int
    thetas: np.ndarray
    permutation: np.ndarray
    measure: Measure
    ordering: Ordering

    def __post_init__(self):
        L = self.band_limit
        if L < 1:
            raise BandLimitError(f"band limit must be positive, got {L}")
        if len(self.thetas) != L or len(self.permutation) != L:
            raise BandLimitError("grid arrays inconsistent with band limit")
        if sorted(self.permutation) != list(range(L)):
            raise ValueError("permutation is not a bijection on 0..L-1")
        if not np.all((self.thetas > 0.0) & (self.thetas <= np.pi)):
            raise ValueError("co-latitudes must lie in (0, pi]")
        if len(np.unique(self.thetas)) != L:
            raise ValueError("co-latitudes must be distinct")

    @property
    def sample_count(self) -> int:
        return self.band_limit**2

    def ring_sizes(self) -> np.ndarray:
        return 2 * np.arange(self.band_limit) + 1


@dataclass(frozen=True)
class RingLongitudes:
    """Equispaced longitudes of ring k: phi_j = 2*pi*j / (2k+1)."""

    ring_index: int
    phis: np.ndarray


def ring_longitudes(k: int) -> RingLongitudes:
    if k < 0:
        raise ValueError(f"ring index must be non-negative, got {k}")
    n = 2 * k + 1
    return RingLongitudes(ring_index=k, phis=2.0 * np.pi * np.arange(n) / n)


def equiangular_candidates(band_limit: int) -> np.ndarray:
    """Uniform-measure candidate set pi*(2t+1)/(2L-1), strictly increasing.

    The last candidate is exactly pi.
    """
    if band_limit < 1:
        raise BandLimitError(f"band limit must be positive, got {band_limit}")
    t = np.arange(band_limit)
    return np.pi * ((2 * t + 1) / (2 * band_limit - 1))


_TAN13_TOTAL = 2.0 * math.pi / math.sqrt(3.0)


def _tan13_tail_integrand(y: float) -> float:
    # After substituting v = y^3, cot(v)^(1/3) dv becomes 3 y^2 cot(y^3)^(1/3) dy,
    # which tends to 3y near zero: the singularity is gone.
    v = y * y * y
    if v <= 0.0:
        return 0.0
    return 3.0 * y * y * (math.cos(v) / math.sin(v)) ** (1.0 / 3.0)


def _tan13_cdf(theta: float) -> float:
    # Integral of |tan|^(1/3) from 0 to theta.  The measure is symmetric
    # about pi/2, where the integrand blows up like |theta - pi/2|^(-1/3);
    # integrate the distance-to-equator tail under a cube-root substitution
    # that regularizes it, so accuracy holds arbitrarily close to pi/2.
    half = math.pi / 2.0
    if theta >= math.pi:
        return _TAN13_TOTAL
    if theta > half:
        return _TAN13_TOTAL - _tan13_cdf(math.pi - theta)
    if theta <= 0.0:
        return 0.0
    span = half - theta
    tail, _ = integrate.quad(
        _tan13_tail_integrand, 0.0, span ** (1.0 / 3.0), epsabs=1e-13, limit=200
    )
    return 0.5 * _TAN13_TOTAL - tail


def measure_candidates(band_limit: int, measure: Measure) -> np.ndarray:
    """Candidate co-latitudes for the sine or |tan|^(1/3) measures.

    Starting from pi, consecutive candidates enclose equal fractions 1/L of
    the measure's total mass over [0, pi].  Returned in increasing order,
    ending exactly at pi.
    """
    if band_limit < 1:
        raise BandLimitError(f"band limit must be positive, got {band_limit}")
    L = band_limit
    if measure is Measure.SINE:
        # cos(theta_t) telescopes in exact steps of 2/L.
        t = np.arange(L)
        desc = np.arccos(-1.0 + 2.0 * t / L)
        return desc[::-1].copy()
    if measure is Measure.TAN_CUBE_ROOT:
        desc = np.empty(L)
        desc[0] = math.pi
        step = _TAN13_TOTAL / L
        for t in range(1, L):
            target = _TAN13_TOTAL - t * step
            try:
                desc[t] = optimize.bisect(
                    lambda u: _tan13_cdf(u) - target,
                    1e-12,
                    desc[t - 1],
                    xtol=1e-14,
                    maxiter=200,
                )
            except (ValueError, RuntimeError) as exc:
                raise RootFindError(t, f"partition point {t} did not converge: {exc}")
        return desc[::-1].copy()
    raise ValueError(f"measure {measure} has no partition-based candidates")


def candidates(band_limit: int, measure: Measure) -> np.ndarray:
    """Candidate co-latitudes for any measure, increasing, last element pi."""
    if measure is Measure.UNIFORM:
        return equiangular_candidates(band_limit)
    return measure_candidates(band_limit, measure)


def _interleaved_permutation(band_limit: int) -> np.ndarray:
    # Ring 0 (one sample) takes the pole; rings with more samples approach
    # the equator by alternating between the remaining extremes.
    L = band_limit
    perm = np.empty(L, dtype=np.int64)
    perm[0] = L - 1
    for k in range(1, L):
        perm[k] = (k - 1) // 2 if k % 2 else L - 1 - k // 2
    return perm


def interleaved_order(cands, band_limit: int, measure: Measure = Measure.UNIFORM) -> ColatitudeGrid:
    """Assign candidates to rings in the default interleaved pattern."""
    cands = np.asarray(cands, dtype=np.float64)
    if len(cands) != band_limit:
        raise ValueError(
            f"candidate count {len(cands)} does not match band limit {band_limit}"
        )
    if np.any(np.diff(cands) <= 0):
        raise ValueError("candidates must be strictly increasing")
    perm = _interleaved_permutation(band_limit)
    return ColatitudeGrid(
        band_limit=band_limit,
        thetas=cands[perm],
        permutation=perm,
        measure=measure,
        ordering=Ordering.INTERLEAVED,
    )


def _default_block_builder(m, thetas, band_limit):
    from .blocks import block_for_thetas

    return block_for_thetas(m, thetas, band_limit).entries


def optimize_order(
    cands,
    band_limit: int,
    block_builder=None,
    measure: Measure = Measure.UNIFORM,
    tie_rtol: float = 1e-9,
) -> ColatitudeGrid:
    """Greedy condition-number-minimizing assignment of candidates to rings.

    The largest ring is pinned first: for the uniform measure to the
    equiangular candidate nearest the equator (index (L-1)//2), otherwise
    to whichever candidate lies closest to pi/2.  Then, walking ring index
    m from L-2 down to 0, each step picks the unassigned candidate that
    minimizes the condition number of the order-m block built on the suffix
    {theta_m, ..., theta_{L-1}}.  Near-ties (relative ``tie_rtol``) resolve
    toward the equator.
    """
    from .blocks import condition_number

    cands = np.asarray(cands, dtype=np.float64)
    L = band_limit
    if L < 1:
        raise BandLimitError(f"band limit must be positive, got {L}")
    if len(cands) != L or len(np.unique(cands)) != L:
        raise ValueError("candidates must be distinct and match the band limit")
    if block_builder is None:
        block_builder = _default_block_builder

    perm = np.empty(L, dtype=np.int64)
    unassigned = list(range(L))
    if measure is Measure.UNIFORM:
        first = (L - 1) // 2
    else:
        first = int(np.argmin(np.abs(cands - np.pi / 2.0)))
    perm[L - 1] = first
    unassigned.remove(first)

    equator_dist = np.abs(cands - np.pi / 2.0)
    for m in range(L - 2, -1, -1):
        chosen = perm[m + 1 :]
        kappas = np.empty(len(unassigned))
        for i, t in enumerate(unassigned):
            suffix = cands[np.concatenate(([t], chosen))]
            kappas[i] = condition_number(block_builder(m, suffix, L))
        best = np.min(kappas)
        if not np.isfinite(best):
            raise IllConditionedGridError(m)
        near = kappas <= best * (1.0 + tie_rtol)
        ranked = sorted(
            (equator_dist[t], t) for i, t in enumerate(unassigned) if near[i]
        )
        pick = ranked[0][1]
        perm[m] = pick
        unassigned.remove(pick)

    return ColatitudeGrid(
        band_limit=L,
        thetas=cands[perm],
        permutation=perm,
        measure=measure,
        ordering=Ordering.CONDITION_MINIMIZED,
    )


def make_grid(
    band_limit: int,
    measure: Measure = Measure.UNIFORM,
    ordering: Ordering = Ordering.INTERLEAVED,
    cache_dir=None,
) -> ColatitudeGrid:
    """Build (or load from ``cache_dir``) the grid for one configuration.

    Only condition-minimized grids are cached; the greedy ordering needs to
    run once per (band limit, measure) and everything else is cheap.
    """
    cache_path = None
    if cache_dir is not None and ordering is Ordering.CONDITION_MINIMIZED:
        cache_path = Path(cache_dir) / (
            f"grid-L{band_limit}-{measure.value}-{ordering.value}.txt"
        )
        if cache_path.exists():
            grid = load_grid(cache_path)
            if (
                grid.band_limit == band_limit
                and grid.measure is measure
                and grid.ordering is ordering
            ):
                return grid
    cands = candidates(band_limit, measure)
    if ordering is Ordering.INTERLEAVED:
        grid = interleaved_order(cands, band_limit, measure)
    else:
        grid = optimize_order(cands, band_limit, measure=measure)
    if cache_path is not None:
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        save_grid(grid, cache_path)
    return grid


def _grid_payload(grid: ColatitudeGrid) -> str:
    lines = [
        _GRID_MAGIC,
        f"L {grid.band_limit}",
        f"measure {grid.measure.value}",
        f"ordering {grid.ordering.value}",
    ]
    lines.extend(str(int(t)) for t in grid.permutation)
    return "\n".join(lines) + "\n"


def save_grid(grid: ColatitudeGrid, destination) -> None:
    """Write a grid cache file; co-latitudes are stored as permutation integers."""
    payload = _grid_payload(grid)
    crc = zlib.crc32(payload.encode("ascii"))
    Path(destination).write_text(payload + f"crc32 {crc:08x}\n", encoding="ascii")


def load_grid(source) -> ColatitudeGrid:
    """Read a grid cache file and rebuild its co-latitudes bit-exactly."""
    text = Path(source).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines or lines[0] != _GRID_MAGIC:
        raise FileFormatError(f"{source}: missing or unsupported grid header")
    if len(lines) < 5:
        raise FileFormatError(f"{source}: truncated grid file")
    crc_line = lines[-1]
    if not crc_line.startswith("crc32 "):
        raise FileFormatError(f"{source}: missing crc32 trailer")
    payload = "\n".join(lines[:-1]) + "\n"
    expected = int(crc_line.split()[1], 16)
    actual = zlib.crc32(payload.encode("ascii"))
    if actual != expected:
        raise FileFormatError(
            f"{source}: checksum mismatch (stored {expected:08x}, computed {actual:08x})"
        )
    try:
        band_limit = int(lines[1].split()[1])
        measure = Measure(lines[2].split()[1])
        ordering = Ordering(lines[3].split()[1])
        perm = np.array([int(s) for s in lines[4:-1]], dtype=np.int64)
    except (IndexError, ValueError) as exc:
        raise FileFormatError(f"{source}: malformed grid file: {exc}")
    if len(perm) != band_limit:
        raise FileFormatError(
            f"{source}: expected {band_limit} permutation lines, found {len(perm)}"
        )
    cands = candidates(band_limit, measure)
    return ColatitudeGrid(
        band_limit=band_limit,
        thetas=cands[perm],
        permutation=perm,
        measure=measure,
        ordering=ordering,
    )
