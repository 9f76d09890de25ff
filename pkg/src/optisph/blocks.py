"""Per-order synthesis blocks over a grid suffix, and their solves.

For order m the block links the L-|m| harmonic coefficients of that order
to the ring-integrated Fourier content of the signal on the rings
|m| .. L-1: entry (row for ring k, column for degree ell) is
2*pi * Y_(ell,m)(theta_k, 0).  Only |m| blocks are ever stored; requesting
a negative order records the sign (-1)^m instead, which is exact.
"""

from __future__ import annotations

import typing
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import IllConditionedSolveError, OrderRangeError
from .legendre import legendre_table

if typing.TYPE_CHECKING:
    from .sampling import ColatitudeGrid

TWO_PI = 2.0 * np.pi

#: Relative singular-value floor below which a solve refuses to proceed.
SOLVE_RCOND = 1e-14


@dataclass(frozen=True)
class LegendreBlock:
    """Square synthesis block for one order, rows following the grid suffix."""

    order: int  # |m| of the stored block
    sign: int  # (-1)^m when a negative order was requested, else +1
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class GVector:
    """Ring-integrated Fourier content G_m(theta_k) over a grid suffix."""

    order: int
    values: np.ndarray


@dataclass(frozen=True)
class CoefficientSlice:
    """Harmonic coefficients of one order, degrees |m| .. L-1."""

    order: int
    values: np.ndarray


def block_for_thetas(m: int, thetas, band_limit: int) -> LegendreBlock:
    """Build the order-m block on an explicit list of ring co-latitudes."""
    am = abs(m)
    entries = TWO_PI * legendre_table(am, thetas, band_limit)
    sign = -1 if (m < 0 and am % 2) else 1
    return LegendreBlock(order=am, sign=sign, entries=entries)


def build_block(grid: ColatitudeGrid, m: int) -> LegendreBlock:
    """Build the order-m block on the suffix rings |m| .. L-1 of a grid."""
    am = abs(m)
    if am >= grid.band_limit:
        raise OrderRangeError(f"order {m} invalid for band limit {grid.band_limit}")
    return block_for_thetas(m, grid.thetas[am:], grid.band_limit)


def condition_number(block) -> float:
    """2-norm condition number sigma_max / sigma_min; infinity when singular.

    The blocks are not symmetric, so singular values (not eigenvalues) are
    what controls solve accuracy.
    """
    entries = block.entries if isinstance(block, LegendreBlock) else np.asarray(block)
    sv = np.linalg.svd(entries, compute_uv=False)
    if sv[-1] == 0.0 or not np.isfinite(sv[0]):
        return np.inf
    return float(sv[0] / sv[-1])


def _lstsq(entries: np.ndarray, rhs: np.ndarray, rcond):
    # QR with column pivoting; rank-revealing at the requested cutoff.
    x, _, rank, _ = linalg.lstsq(entries, rhs, cond=rcond, lapack_driver="gelsy")
    return x, rank


def solve_columns(
    entries: np.ndarray,
    rhs: np.ndarray,
    order: int,
    *,
    rcond: float = SOLVE_RCOND,
    check: bool = True,
):
    """Least-squares solve with complex right-hand sides split into real columns.

    ``rhs`` has complex columns; the solve runs once on the real block with
    twice the columns, which halves the work relative to a complex
    factorization.  Raises `IllConditionedSolveError` when the block is
    rank deficient at ``rcond`` and ``check`` is set.
    """
    rhs = np.atleast_2d(rhs.T).T  # ensure 2-D, columns = systems
    stacked = np.empty((entries.shape[0], 2 * rhs.shape[1]))
    stacked[:, 0::2] = rhs.real
    stacked[:, 1::2] = rhs.imag
    x, rank = _lstsq(entries, stacked, rcond if check else None)
    if check and rank < entries.shape[1]:
        raise IllConditionedSolveError(order, condition_number(entries))
    return x[:, 0::2] + 1j * x[:, 1::2]


def solve(block: LegendreBlock, g, *, rcond: float = SOLVE_RCOND, check: bool = True):
    """Recover the coefficient slice f from block * f = g.

    ``g`` may be a `GVector` or a plain array.  For blocks built with a
    negative order the stored sign is folded into the right-hand side, so
    callers never materialize negative-order blocks.
    """
    if isinstance(g, GVector):
        order = g.order
        values = np.asarray(g.values, dtype=np.complex128)
    else:
        order = block.order if block.sign == 1 else -block.order
        values = np.asarray(g, dtype=np.complex128)
    if values.shape[0] != block.size:
        raise ValueError(
            f"right-hand side length {values.shape[0]} does not match block size {block.size}"
        )
    rhs = block.sign * values
    x = solve_columns(block.entries, rhs[:, None], order, rcond=rcond, check=check)
    return CoefficientSlice(order=order, values=x[:, 0])
