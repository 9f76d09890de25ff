"""Slow reference implementations used to cross-validate the fast paths.

`direct_synthesis` evaluates the full double sum over (ell, m) at every
sample with no separation of variables; `dense_lsq_analysis` assembles the
complete L^2 x L^2 synthesis matrix and solves it in the least-squares
sense.  Both are quartic (or worse) in the band limit and exist purely as
independent oracles; the command line only reaches them behind an explicit
flag so benchmark numbers can never include them by accident.
"""

import warnings

import numpy as np
from scipy import linalg

from .errors import BandLimitError, SingularSystemError
from .legendre import legendre_table
from .sampling import ring_longitudes
from .transform import HarmonicCoefficients, SpatialSamples

DIRECT_SYNTHESIS_MAX_L = 128
DENSE_LSQ_MAX_L = 64


def _order_columns(band_limit: int, m: int) -> np.ndarray:
    ells = np.arange(abs(m), band_limit)
    return ells * ells + ells + m


def _ring_basis(grid, tables, k: int) -> np.ndarray:
    """Rows = the 2k+1 samples of ring k, columns = all (ell, m) basis values."""
    L = grid.band_limit
    phis = ring_longitudes(k).phis
    rows = np.zeros((len(phis), L * L), dtype=np.complex128)
    for m in range(-(L - 1), L):
        am = abs(m)
        vals = tables[am][k]
        if m < 0 and am % 2:
            vals = -vals
        rows[:, _order_columns(L, m)] = np.exp(1j * m * phis)[:, None] * vals[None, :]
    return rows


def synthesis_matrix(grid) -> np.ndarray:
    """Dense matrix mapping coefficients (ell^2+ell+m order) to samples ((k, j) order)."""
    L = grid.band_limit
    tables = [legendre_table(m, grid.thetas, L) for m in range(L)]
    blocks = [_ring_basis(grid, tables, k) for k in range(L)]
    return np.concatenate(blocks, axis=0)


def direct_synthesis(coeffs: HarmonicCoefficients, grid) -> SpatialSamples:
    """Brute-force synthesis: full double sum at every sample point."""
    L = grid.band_limit
    if coeffs.band_limit != L:
        raise BandLimitError(f"band limits disagree: {coeffs.band_limit} vs {L}")
    if L > DIRECT_SYNTHESIS_MAX_L:
        raise BandLimitError(
            f"direct synthesis is quartic; refusing band limit {L} > {DIRECT_SYNTHESIS_MAX_L}"
        )
    tables = [legendre_table(m, grid.thetas, L) for m in range(L)]
    rings = []
    for k in range(L):
        rings.append(_ring_basis(grid, tables, k) @ coeffs.values)
    return SpatialSamples(L, rings)


def dense_lsq_analysis(samples: SpatialSamples, grid) -> HarmonicCoefficients:
    """Least-squares analysis through the full L^2 x L^2 synthesis matrix.

    On this sampling scheme the matrix is square, so the least-squares
    minimizer is the plain solution of the dense system; it is computed by
    LU with partial pivoting, the classic "naive least squares" baseline
    whose error tracks the full-system condition number.
    """
    L = grid.band_limit
    if samples.band_limit != L:
        raise BandLimitError(f"band limits disagree: {samples.band_limit} vs {L}")
    if L > DENSE_LSQ_MAX_L:
        raise BandLimitError(
            f"dense least squares is sextic; refusing band limit {L} > {DENSE_LSQ_MAX_L}"
        )
    matrix = synthesis_matrix(grid)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", linalg.LinAlgWarning)
            x = linalg.solve(matrix, samples.flatten())
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"synthesis matrix is singular: {exc}")
    return HarmonicCoefficients(L, x)
