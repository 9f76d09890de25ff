"""Forward and inverse spherical harmonic transforms on the L^2-sample grid.

The inverse transform synthesizes ring by ring: for each order m the
longitudinal Fourier content G_(+-m)(theta_k) is accumulated against the
Legendre recurrence, and each ring then folds all 2L-1 tones into its own
2k+1 DFT bins and applies one inverse FFT.

The forward transform peels orders from the top down.  At order m the
rings k >= m are analyzed at frequency +-m (exact, because every order
above m has already been removed from the rings that cannot resolve it),
the two coefficient slices are recovered through a rank-revealing solve of
the order-m block, and the slices' spatial contribution is subtracted from
rings k < m so that later, coarser analyses stay alias-free.  The caller's
samples are never mutated; peeling runs on a private flat copy.

Hot loops are compiled with numba and run single-threaded, so transforms
are reentrant, bitwise reproducible, and their wall time reflects the
arithmetic rather than interpreter overhead.
"""

import functools
import math
import time
from dataclasses import dataclass, field

import numba
import numpy as np

from .blocks import TWO_PI, solve_columns
from .errors import AliasingError, BandLimitError, OrderRangeError
from .legendre import FOUR_PI, legendre_table, spin_table


@dataclass
class HarmonicCoefficients:
    """Triangular coefficient storage, flattened as index(ell, m) = ell^2 + ell + m."""

    band_limit: int
    values: np.ndarray

    @staticmethod
    def index(ell: int, m: int) -> int:
        return ell * ell + ell + m

    @classmethod
    def zeros(cls, band_limit: int) -> "HarmonicCoefficients":
        if band_limit < 1:
            raise BandLimitError(f"band limit must be positive, got {band_limit}")
        return cls(band_limit, np.zeros(band_limit**2, dtype=np.complex128))

    def get(self, ell: int, m: int) -> complex:
        return self.values[self.index(ell, m)]

    def set(self, ell: int, m: int, value: complex) -> None:
        self.values[self.index(ell, m)] = value

    def order_slice(self, m: int, ell_min: int | None = None) -> np.ndarray:
        lo = abs(m) if ell_min is None else ell_min
        ells = np.arange(lo, self.band_limit)
        return self.values[ells * ells + ells + m]

    def set_order_slice(self, m: int, values, ell_min: int | None = None) -> None:
        lo = abs(m) if ell_min is None else ell_min
        ells = np.arange(lo, self.band_limit)
        self.values[ells * ells + ells + m] = values

    def copy(self) -> "HarmonicCoefficients":
        return HarmonicCoefficients(self.band_limit, self.values.copy())


@dataclass
class SpatialSamples:
    """Ragged ring storage: ring k holds 2k+1 complex samples."""

    band_limit: int
    rings: list

    @classmethod
    def zeros(cls, band_limit: int) -> "SpatialSamples":
        if band_limit < 1:
            raise BandLimitError(f"band limit must be positive, got {band_limit}")
        return cls(
            band_limit,
            [np.zeros(2 * k + 1, dtype=np.complex128) for k in range(band_limit)],
        )

    @classmethod
    def from_flat(cls, band_limit: int, flat) -> "SpatialSamples":
        flat = np.asarray(flat, dtype=np.complex128)
        if flat.size != band_limit**2:
            raise BandLimitError(f"expected {band_limit**2} samples, got {flat.size}")
        rings = [flat[k * k : (k + 1) * (k + 1)].copy() for k in range(band_limit)]
        return cls(band_limit, rings)

    def flatten(self) -> np.ndarray:
        return np.concatenate(self.rings)

    def copy(self) -> "SpatialSamples":
        return SpatialSamples(self.band_limit, [r.copy() for r in self.rings])

    @property
    def sample_count(self) -> int:
        return sum(len(r) for r in self.rings)


@dataclass
class TransformStats:
    """Wall-time bookkeeping filled in by `forward_sht`."""

    solve_seconds: float = 0.0
    orders: int = 0
    extra: dict = field(default_factory=dict)


def ring_analysis(ring_values, m: int):
    """Quadrature-exact Fourier pair of one ring at frequencies (+m, -m).

    Returns Delta_k * sum_j v_j * exp(-+ i m phi_j), the exact integral of
    v(phi) e^{-+imphi} over the circle whenever v is band-limited at the
    ring's own index k.  Requesting |m| > k would alias and is refused.
    """
    values = np.asarray(ring_values)
    n = values.shape[0]
    if n % 2 == 0:
        raise ValueError(f"ring length must be odd, got {n}")
    k = (n - 1) // 2
    if abs(m) > k:
        raise AliasingError(f"frequency {m} is not resolvable on a ring of index {k}")
    spec = np.fft.fft(values)
    delta = TWO_PI / n
    return delta * spec[m % n], delta * spec[(-m) % n]


def _check_band_limits(a: int, b: int) -> None:
    if a != b:
        raise BandLimitError(f"band limits disagree: {a} vs {b}")


# ---------------------------------------------------------------------------
# compiled kernels


@numba.njit(cache=True)
def _g_accumulate(costh, sinth, fcols, seed_fac, a_curr, a_next, offsets, L, out):
    """G_(+-m)(theta) for all orders at once, fused with the Legendre recurrence.

    fcols packs, per order m, the four real coefficient streams
    [Re f_m, Im f_m, Re f_(-m), Im f_(-m)] for degrees m..L-1; ``out`` gets
    sum_ell P_ellm(theta) * fcols (the 2*pi and (-1)^m factors are applied
    by the caller).
    """
    big = 2.0**500
    tiny = 2.0**-500
    up = 2.0**1000
    down = 2.0**-1000
    four_pi = 4.0 * math.pi
    for i in range(costh.shape[0]):
        c = costh[i]
        s = sinth[i]
        for m in range(L):
            base = offsets[m]
            mant = math.sqrt((2 * m + 1) / four_pi)
            if m % 2:
                mant = -mant
            off = 0
            for q in range(m):
                mant *= s * seed_fac[q]
                if -tiny < mant < tiny and mant != 0.0:
                    mant *= up
                    off -= 1000
            prev = 0.0
            curr = mant
            a0 = 0.0
            a1 = 0.0
            a2 = 0.0
            a3 = 0.0
            ncols = L - m
            for j in range(ncols):
                v = math.ldexp(curr, off)
                idx = base + j
                a0 += v * fcols[idx, 0]
                a1 += v * fcols[idx, 1]
                a2 += v * fcols[idx, 2]
                a3 += v * fcols[idx, 3]
                if j < ncols - 1:
                    nxt = (c * curr - a_curr[idx] * prev) / a_next[idx]
                    prev = curr
                    curr = nxt
                    ac = abs(curr)
                    if ac > big:
                        curr *= down
                        prev *= down
                        off += 1000
                    elif ac < tiny and abs(prev) < tiny and (curr != 0.0 or prev != 0.0):
                        curr *= up
                        prev *= up
                        off -= 1000
            out[i, m, 0] = a0
            out[i, m, 1] = a1
            out[i, m, 2] = a2
            out[i, m, 3] = a3


@numba.njit(cache=True)
def _fold_bins(g_plus, g_minus, L, bins):
    """Fold the 2L-1 tones of every ring into its native DFT bins."""
    for k in range(L):
        n = 2 * k + 1
        s = k * k
        mp = 0  # m mod n
        for m in range(L):
            bins[s + mp] += g_plus[k, m]
            if m > 0:
                mn = n - mp if mp != 0 else 0
                bins[s + mn] += g_minus[k, m]
            mp += 1
            if mp == n:
                mp = 0


@numba.njit(cache=True)
def _peel_analyze(buf, roots, m, L, out_p, out_n):
    """Exact ring DFT at frequencies +-m for every ring k >= m."""
    two_pi = 2.0 * math.pi
    for k in range(m, L):
        n = 2 * k + 1
        s = k * k
        step = m % n
        acc_p = 0.0j
        acc_n = 0.0j
        mj = 0
        for j in range(n):
            t = roots[s + mj]
            v = buf[s + j]
            acc_p += v * t.conjugate()
            acc_n += v * t
            mj += step
            if mj >= n:
                mj -= n
        delta = two_pi / n
        out_p[k - m] = delta * acc_p
        out_n[k - m] = delta * acc_n


@numba.njit(cache=True)
def _peel_update(buf, roots, m, big_gp, big_gn):
    """Subtract the order-(+-m) contribution from the rings k < m in place."""
    two_pi = 2.0 * math.pi
    for k in range(big_gp.shape[0]):
        n = 2 * k + 1
        s = k * k
        step = m % n
        cp = big_gp[k] / two_pi
        cn = big_gn[k] / two_pi
        mj = 0
        for j in range(n):
            t = roots[s + mj]
            buf[s + j] -= cp * t + cn * t.conjugate()
            mj += step
            if mj >= n:
                mj -= n


# ---------------------------------------------------------------------------
# per-band-limit lookup tables


@functools.lru_cache(maxsize=8)
def _packed_tables(band_limit: int):
    """Packed recurrence factors and per-order offsets for the fused kernel."""
    L = band_limit
    size = L * (L + 1) // 2
    offsets = np.empty(L + 1, dtype=np.int64)
    a_curr = np.zeros(size)
    a_next = np.ones(size)
    pos = 0
    for m in range(L):
        offsets[m] = pos
        ells = np.arange(m, L, dtype=np.float64)
        a_curr[pos : pos + L - m] = np.sqrt(
            (ells**2 - m * m) / ((2.0 * ells - 1.0) * (2.0 * ells + 1.0))
        )
        nxt = ells + 1.0
        a_next[pos : pos + L - m] = np.sqrt(
            (nxt**2 - m * m) / ((2.0 * nxt - 1.0) * (2.0 * nxt + 1.0))
        )
        pos += L - m
    offsets[L] = pos
    q = np.arange(1, L + 1, dtype=np.float64)
    seed_fac = np.sqrt((2.0 * q - 1.0) / (2.0 * q))
    return offsets, a_curr, a_next, seed_fac


@functools.lru_cache(maxsize=8)
def _ring_roots_flat(band_limit: int) -> np.ndarray:
    """Concatenated roots of unity: entry k*k + r is exp(2*pi*i*r/(2k+1))."""
    parts = [
        np.exp(2j * np.pi * np.arange(2 * k + 1) / (2 * k + 1))
        for k in range(band_limit)
    ]
    return np.concatenate(parts)


def _order_signs(band_limit: int) -> np.ndarray:
    signs = np.ones(band_limit)
    signs[1::2] = -1.0
    return signs


def _synthesis_g(coeffs: HarmonicCoefficients, grid):
    """G_(+-m)(theta_k) matrices of shape (L, L) for m = 0..L-1."""
    L = grid.band_limit
    offsets, a_curr, a_next, seed_fac = _packed_tables(L)
    fcols = np.empty((L * (L + 1) // 2, 4))
    for m in range(L):
        fp = coeffs.order_slice(m)
        fn = coeffs.order_slice(-m)
        sl = slice(offsets[m], offsets[m + 1])
        fcols[sl, 0] = fp.real
        fcols[sl, 1] = fp.imag
        fcols[sl, 2] = fn.real
        fcols[sl, 3] = fn.imag
    out = np.empty((L, L, 4))
    _g_accumulate(
        np.cos(grid.thetas), np.sin(grid.thetas), fcols, seed_fac, a_curr, a_next,
        offsets, L, out,
    )
    out *= TWO_PI
    g_plus = out[:, :, 0] + 1j * out[:, :, 1]
    g_minus = (out[:, :, 2] + 1j * out[:, :, 3]) * _order_signs(L)[None, :]
    return g_plus, g_minus


def _rings_from_tones(g_plus, g_minus, band_limit: int):
    """Fold tone matrices into per-ring bins and inverse-FFT each ring."""
    L = band_limit
    bins = np.zeros(L * L, dtype=np.complex128)
    _fold_bins(g_plus, g_minus, L, bins)
    rings = []
    for k in range(L):
        n = 2 * k + 1
        s = k * k
        rings.append((n / TWO_PI) * np.fft.ifft(bins[s : s + n]))
    return rings


def inverse_sht(coeffs: HarmonicCoefficients, grid) -> SpatialSamples:
    """Synthesize the band-limited signal on every grid sample.

    Separation of variables: the order loop accumulates G_(+-m) on all
    rings, then every ring folds the 2L-1 tones into its own bin count and
    applies a single inverse FFT.
    """
    L = grid.band_limit
    _check_band_limits(coeffs.band_limit, L)
    g_plus, g_minus = _synthesis_g(coeffs, grid)
    return SpatialSamples(L, _rings_from_tones(g_plus, g_minus, L))


def forward_sht(
    samples: SpatialSamples,
    grid,
    *,
    method: str = "direct",
    check: bool = True,
    stats: TransformStats | None = None,
) -> HarmonicCoefficients:
    """Recover all L^2 coefficients by top-down order peeling.

    Parameters
    ----------
    samples, grid
        Signal laid out on the grid's rings; band limits must agree.
    method : {"direct", "spectral"}
        "direct" analyzes and updates the rings in the spatial domain,
        exactly as the peeling procedure is stated.  "spectral" keeps each
        ring as its DFT and applies the peeling at the aliased bins;
        equivalent far below solver accuracy and cheaper at large band
        limits.
    check : bool
        Refuse numerically singular per-order solves (recommended).  When
        off, the rank-revealing solve quietly returns a least-squares
        answer; useful only for timing studies on ill-conditioned grids.
    stats : TransformStats, optional
        Receives the cumulative wall time of the solve step.
    """
    L = grid.band_limit
    _check_band_limits(samples.band_limit, L)
    if method == "direct":
        return _forward_direct(samples, grid, check, stats)
    if method == "spectral":
        return _forward_spectral(samples, grid, check, stats)
    raise ValueError(f"unknown method {method!r}")


def _solve_pair(block, g_p, g_n, m, sign, check, timer):
    t0 = time.perf_counter()
    if m == 0:
        f_p = solve_columns(block, g_p[:, None], 0, check=check)[:, 0]
        f_n = f_p
    else:
        rhs = np.column_stack([g_p, sign * g_n])
        sol = solve_columns(block, rhs, m, check=check)
        f_p, f_n = sol[:, 0], sol[:, 1]
    timer[0] += time.perf_counter() - t0
    return f_p, f_n


def _forward_direct(samples, grid, check, stats):
    L = grid.band_limit
    coeffs = HarmonicCoefficients.zeros(L)
    buf = samples.flatten()  # private working copy; ring k lives at [k*k, (k+1)*(k+1))
    roots = _ring_roots_flat(L)
    timer = [0.0]
    for m in range(L - 1, -1, -1):
        table = legendre_table(m, grid.thetas, L)
        g_p = np.empty(L - m, dtype=np.complex128)
        g_n = np.empty(L - m, dtype=np.complex128)
        _peel_analyze(buf, roots, m, L, g_p, g_n)
        sign = -1.0 if m % 2 else 1.0
        f_p, f_n = _solve_pair(TWO_PI * table[m:], g_p, g_n, m, sign, check, timer)
        coeffs.set_order_slice(m, f_p)
        if m:
            coeffs.set_order_slice(-m, f_n)
            cols = np.column_stack([f_p.real, f_p.imag, f_n.real, f_n.imag])
            gg = TWO_PI * (table[:m] @ cols)
            big_gp = gg[:, 0] + 1j * gg[:, 1]
            big_gn = sign * (gg[:, 2] + 1j * gg[:, 3])
            _peel_update(buf, roots, m, big_gp, big_gn)
    if stats is not None:
        stats.solve_seconds = timer[0]
        stats.orders = L
    return coeffs


def _forward_spectral(samples, grid, check, stats):
    L = grid.band_limit
    coeffs = HarmonicCoefficients.zeros(L)
    spectra = [np.fft.fft(r) for r in samples.rings]
    timer = [0.0]
    for m in range(L - 1, -1, -1):
        table = legendre_table(m, grid.thetas, L)
        g_p = np.empty(L - m, dtype=np.complex128)
        g_n = np.empty(L - m, dtype=np.complex128)
        for k in range(m, L):
            n = 2 * k + 1
            delta = TWO_PI / n
            g_p[k - m] = delta * spectra[k][m % n]
            g_n[k - m] = delta * spectra[k][(-m) % n]
        sign = -1.0 if m % 2 else 1.0
        f_p, f_n = _solve_pair(TWO_PI * table[m:], g_p, g_n, m, sign, check, timer)
        coeffs.set_order_slice(m, f_p)
        if m:
            coeffs.set_order_slice(-m, f_n)
            cols = np.column_stack([f_p.real, f_p.imag, f_n.real, f_n.imag])
            gg = TWO_PI * (table[:m] @ cols)
            big_gp = gg[:, 0] + 1j * gg[:, 1]
            big_gn = sign * (gg[:, 2] + 1j * gg[:, 3])
            # The subtraction only touches the two aliased bins of each ring.
            for k in range(m):
                n = 2 * k + 1
                spectra[k][m % n] -= n * big_gp[k] / TWO_PI
                spectra[k][(-m) % n] -= n * big_gn[k] / TWO_PI
    if stats is not None:
        stats.solve_seconds = timer[0]
        stats.orders = L
    return coeffs


# ---------------------------------------------------------------------------
# spin transforms


def spin_inverse_sht(coeffs: HarmonicCoefficients, grid, spin: int) -> SpatialSamples:
    """Spin-weighted synthesis; identical control flow with spin basis tables.

    Spin zero takes the scalar path bit for bit.  Coefficients with degree
    below |spin| have no basis function and are ignored.
    """
    L = grid.band_limit
    _check_band_limits(coeffs.band_limit, L)
    if abs(spin) >= L:
        raise OrderRangeError(f"spin {spin} invalid for band limit {L}")
    if spin == 0:
        return inverse_sht(coeffs, grid)
    g_plus = np.empty((L, L), dtype=np.complex128)
    g_minus = np.empty((L, L), dtype=np.complex128)
    for m in range(L):
        lo = max(m, abs(spin))
        tab_p = spin_table(spin, m, grid.thetas, L)
        tab_n = spin_table(spin, -m, grid.thetas, L)
        g_plus[:, m] = TWO_PI * (tab_p @ coeffs.order_slice(m, lo))
        g_minus[:, m] = TWO_PI * (tab_n @ coeffs.order_slice(-m, lo))
    return SpatialSamples(L, _rings_from_tones(g_plus, g_minus, L))


def spin_forward_sht(
    samples: SpatialSamples, grid, spin: int, *, check: bool = True
) -> HarmonicCoefficients:
    """Spin-weighted analysis by the same top-down peeling.

    For |m| < |spin| the order has fewer unknowns than rings and the block
    is tall; the least-squares solve is exact for consistent data.
    Coefficients with degree below |spin| come back as zero.
    """
    L = grid.band_limit
    _check_band_limits(samples.band_limit, L)
    if abs(spin) >= L:
        raise OrderRangeError(f"spin {spin} invalid for band limit {L}")
    if spin == 0:
        return forward_sht(samples, grid, check=check)
    coeffs = HarmonicCoefficients.zeros(L)
    buf = samples.flatten()
    roots = _ring_roots_flat(L)
    for m in range(L - 1, -1, -1):
        lo = max(m, abs(spin))
        tab_p = spin_table(spin, m, grid.thetas, L)
        tab_n = spin_table(spin, -m, grid.thetas, L)
        g_p = np.empty(L - m, dtype=np.complex128)
        g_n = np.empty(L - m, dtype=np.complex128)
        _peel_analyze(buf, roots, m, L, g_p, g_n)
        f_p = solve_columns(TWO_PI * tab_p[m:], g_p[:, None], m, check=check)[:, 0]
        if m == 0:
            f_n = f_p
        else:
            f_n = solve_columns(TWO_PI * tab_n[m:], g_n[:, None], -m, check=check)[:, 0]
        coeffs.set_order_slice(m, f_p, lo)
        if m:
            coeffs.set_order_slice(-m, f_n, lo)
            big_gp = TWO_PI * (tab_p[:m] @ f_p)
            big_gn = TWO_PI * (tab_n[:m] @ f_n)
            _peel_update(buf, roots, m, big_gp, big_gn)
    return coeffs
