"""Scaled associated Legendre functions and spin-weighted harmonics.

All evaluators use the orthonormal spherical-harmonic convention with the
Condon-Shortley phase: a "column" holds Y_lm(theta, 0) for fixed order m,
which is real-valued, so integrating a product of two columns over the
sphere gives a Kronecker delta.

Fast evaluation goes through an upward three-term recurrence seeded at the
lowest valid degree.  Seeds contain sin(theta)**m factors that underflow
double precision long before the band limits of interest, so mantissas are
kept inside ``[2**-500, 2**500]`` and a per-point power-of-two offset
absorbs the rest; the offset is applied on output.  Slow factorial-exact
evaluators (`legendre_direct`, `wigner_d_direct`, `spin_direct`) are
intended as test oracles only.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .errors import OrderRangeError

FOUR_PI = 4.0 * math.pi

_DIRECT_MAX_DEGREE = 30
_WIGNER_MAX_DEGREE = 20

# Rescaling window shared by all upward recurrences.
_SHIFT = 1000
_BIG = 2.0**500
_TINY = 2.0**-500
_UP = 2.0**_SHIFT
_DOWN = 2.0**-_SHIFT


@dataclass(frozen=True)
class LegendreColumn:
    """Values Y_lm(theta, 0) for ell = |order| .. L-1 at one co-latitude."""

    order: int
    theta: float
    values: np.ndarray

    def value(self, ell: int) -> float:
        return self.values[ell - abs(self.order)]


@dataclass(frozen=True)
class SpinColumn:
    """Spin-weighted values at longitude zero, ell = max(|order|,|spin|) .. L-1."""

    spin: int
    order: int
    theta: float
    values: np.ndarray

    def value(self, ell: int) -> float:
        return self.values[ell - max(abs(self.order), abs(self.spin))]


@numba.njit(cache=True)
def _legendre_kernel(costh, sinth, am, ncols, seed0, seed_fac, a_curr, a_next, out):
    big = 2.0**500
    tiny = 2.0**-500
    up = 2.0**1000
    down = 2.0**-1000
    for i in range(costh.shape[0]):
        c = costh[i]
        s = sinth[i]
        mant = seed0
        off = 0
        for q in range(am):
            mant *= s * seed_fac[q]
            if -tiny < mant < tiny and mant != 0.0:
                mant *= up
                off -= 1000
        out[i, 0] = math.ldexp(mant, off)
        prev = 0.0
        curr = mant
        for j in range(ncols - 1):
            nxt = (c * curr - a_curr[j] * prev) / a_next[j]
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
            out[i, j + 1] = math.ldexp(curr, off)


def _recurrence_factors(am: int, band_limit: int):
    # a(l) = sqrt((l^2 - m^2) / ((2l-1)(2l+1))); a_curr[0] is zero by construction.
    ells = np.arange(am, band_limit, dtype=np.float64)
    a_curr = np.sqrt((ells**2 - am**2) / ((2.0 * ells - 1.0) * (2.0 * ells + 1.0)))
    ells_next = ells + 1.0
    a_next = np.sqrt(
        (ells_next**2 - am**2) / ((2.0 * ells_next - 1.0) * (2.0 * ells_next + 1.0))
    )
    return a_curr[: band_limit - am - 1], a_next[: band_limit - am - 1]


def legendre_table(m: int, thetas, band_limit: int) -> np.ndarray:
    """Evaluate Y_lm(theta, 0) on a grid of co-latitudes.

    Parameters
    ----------
    m : int
        Order, |m| < band_limit.  Negative orders apply the exact sign
        relation Y_l(-m) = (-1)^m Y_lm at longitude zero.
    thetas : array_like
        Co-latitudes in radians.
    band_limit : int
        One past the largest degree evaluated.

    Returns
    -------
    2D array of shape (len(thetas), band_limit - |m|); column j holds
    degree ell = |m| + j.
    """
    am = abs(m)
    if band_limit < 1 or am >= band_limit:
        raise OrderRangeError(f"order {m} invalid for band limit {band_limit}")
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    ncols = band_limit - am
    out = np.empty((thetas.size, ncols))
    seed0 = (-1.0) ** (am % 2) * math.sqrt((2 * am + 1) / FOUR_PI)
    q = np.arange(1, am + 1, dtype=np.float64)
    seed_fac = np.sqrt((2.0 * q - 1.0) / (2.0 * q))
    a_curr, a_next = _recurrence_factors(am, band_limit)
    _legendre_kernel(
        np.cos(thetas), np.sin(thetas), am, ncols, seed0, seed_fac, a_curr, a_next, out
    )
    if m < 0 and am % 2:
        out = -out
    return out


def legendre_column(m: int, theta: float, band_limit: int) -> LegendreColumn:
    """Single-point version of `legendre_table`, wrapped with its metadata."""
    values = legendre_table(m, [theta], band_limit)[0]
    return LegendreColumn(order=m, theta=float(theta), values=values)


def legendre_direct(ell: int, m: int, theta: float) -> float:
    """Factorial-exact evaluation of Y_lm(theta, 0) from the Rodrigues form.

    The polynomial part is differentiated with exact integer coefficients
    and evaluated in rational arithmetic, so the result is correct to a few
    ulp.  Restricted to ell <= 30; intended purely as a test oracle for the
    recurrence-based evaluators.
    """
    if not 0 <= ell <= _DIRECT_MAX_DEGREE:
        raise OrderRangeError(f"direct evaluation supports 0 <= ell <= {_DIRECT_MAX_DEGREE}")
    if abs(m) > ell:
        raise OrderRangeError(f"|m| = {abs(m)} exceeds ell = {ell}")
    am = abs(m)
    x = Fraction(math.cos(theta))
    # (ell+am)-th derivative of (x^2-1)^ell, exact integer coefficients.
    total = Fraction(0)
    for i in range((ell + am + 1) // 2, ell + 1):
        power = 2 * i - ell - am
        coef = math.comb(ell, i) * (-1) ** (ell - i) * math.perm(2 * i, ell + am)
        total += coef * x**power
    p_am = float(total / (2**ell * math.factorial(ell))) * math.sin(theta) ** am
    p_am *= (-1.0) ** (am % 2)
    if m >= 0:
        p = p_am
    else:
        rel = Fraction(math.factorial(ell - am), math.factorial(ell + am))
        p = (-1.0) ** (am % 2) * float(rel) * p_am
    norm_ratio = Fraction(math.factorial(ell - m), math.factorial(ell + m))
    norm = math.sqrt((2 * ell + 1) / FOUR_PI * float(norm_ratio))
    return norm * p


def wigner_d_direct(ell: int, m_row: int, m_col: int, beta: float) -> float:
    """Wigner small-d element d^ell_{m_row, m_col}(beta) by the explicit sum.

    Factorials are exact integers; restricted to ell <= 20.  Test oracle.
    """
    if not 0 <= ell <= _WIGNER_MAX_DEGREE:
        raise OrderRangeError(f"wigner_d_direct supports 0 <= ell <= {_WIGNER_MAX_DEGREE}")
    if abs(m_row) > ell or abs(m_col) > ell:
        raise OrderRangeError("|m| exceeds ell")
    f = math.factorial
    pref = math.sqrt(f(ell + m_row) * f(ell - m_row) * f(ell + m_col) * f(ell - m_col))
    ch = math.cos(beta / 2.0)
    sh = math.sin(beta / 2.0)
    k_lo = max(0, m_col - m_row)
    k_hi = min(ell + m_col, ell - m_row)
    total = 0.0
    for k in range(k_lo, k_hi + 1):
        num = (
            (-1.0) ** ((m_row - m_col + k) % 2)
            * ch ** (2 * ell + m_col - m_row - 2 * k)
            * sh ** (m_row - m_col + 2 * k)
        )
        den = f(ell + m_col - k) * f(k) * f(m_row - m_col + k) * f(ell - m_row - k)
        total += num / den
    return pref * total


def spin_direct(spin: int, ell: int, m: int, theta: float) -> float:
    """Spin-weighted harmonic at longitude zero from the Wigner-d oracle."""
    return (
        (-1.0) ** (m % 2)
        * math.sqrt((2 * ell + 1) / FOUR_PI)
        * wigner_d_direct(ell, -m, -spin, theta)
    )


def _rescale_pair(curr, prev, off):
    hi = np.abs(curr) > _BIG
    if hi.any():
        curr[hi] *= _DOWN
        prev[hi] *= _DOWN
        off[hi] += _SHIFT
    lo = (np.abs(curr) < _TINY) & (np.abs(prev) < _TINY) & ((curr != 0.0) | (prev != 0.0))
    if lo.any():
        curr[lo] *= _UP
        prev[lo] *= _UP
        off[lo] -= _SHIFT


def _spin_seed(spin: int, m: int, thetas: np.ndarray):
    """Seed of the spin recurrence at ell = max(|m|, |spin|), as (mantissa, offset)."""
    j = max(abs(m), abs(spin))
    n = thetas.size
    if j == 0:
        return np.full(n, 1.0 / math.sqrt(FOUR_PI)), np.zeros(n, dtype=np.int64)
    # At the lowest degree the explicit Wigner-d sum collapses to one term.
    k_lo = max(0, m - spin)
    k_hi = min(j - spin, j + m)
    assert k_lo == k_hi, "seed degree must sit at a corner of the d-matrix"
    k = k_lo
    exp_sin = spin - m + 2 * k
    exp_cos = 2 * j - exp_sin
    sign = -1.0 if (k + spin) % 2 else 1.0
    f = math.factorial
    numer = f(j - m) * f(j + m) * f(j - spin) * f(j + spin)
    denom = f(j - spin - k) * f(k) * f(spin - m + k) * f(j + m - k)
    ratio2 = Fraction(numer, denom * denom)
    shift2 = ratio2.numerator.bit_length() - ratio2.denominator.bit_length()
    if shift2 % 2:
        shift2 -= 1
    base = math.sqrt(float(ratio2 / Fraction(2) ** shift2))
    scale = sign * base * math.sqrt((2 * j + 1) / FOUR_PI)
    ch = np.cos(thetas / 2.0)
    sh = np.sin(thetas / 2.0)
    mant = np.full(n, scale)
    off = np.full(n, shift2 // 2, dtype=np.int64)
    for _ in range(exp_sin):
        mant *= sh
        _rescale_small(mant, off)
    for _ in range(exp_cos):
        mant *= ch
        _rescale_small(mant, off)
    return mant, off


def _rescale_small(mant, off):
    lo = (np.abs(mant) < _TINY) & (mant != 0.0)
    if lo.any():
        mant[lo] *= _UP
        off[lo] -= _SHIFT


def spin_table(spin: int, m: int, thetas, band_limit: int) -> np.ndarray:
    """Spin-weighted harmonics at longitude zero over a grid of co-latitudes.

    Returns shape (len(thetas), band_limit - max(|m|, |spin|)); column j
    holds degree ell = max(|m|, |spin|) + j.  Reduces to `legendre_table`
    for spin 0.
    """
    lo = max(abs(m), abs(spin))
    if band_limit < 1 or lo >= band_limit:
        raise OrderRangeError(
            f"order {m}, spin {spin} invalid for band limit {band_limit}"
        )
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    ncols = band_limit - lo
    costh = np.cos(thetas)
    out = np.empty((thetas.size, ncols))
    mant, off = _spin_seed(spin, m, thetas)
    out[:, 0] = np.ldexp(mant, off)
    prev = np.zeros_like(mant)
    curr = mant
    ms = float(m * spin)
    for idx, ell in enumerate(range(lo, band_limit - 1)):
        if ell == 0:
            nxt = math.sqrt(3.0) * costh * curr
        else:
            d = ell * math.sqrt(
                ((ell + 1.0) ** 2 - m * m) * ((ell + 1.0) ** 2 - spin * spin) / (2 * ell + 3)
            )
            a = math.sqrt(2 * ell + 1.0) * ell * (ell + 1.0)
            b = math.sqrt(2 * ell + 1.0) * ms
            c = (ell + 1.0) * math.sqrt(
                (ell * ell - m * m) * (ell * ell - spin * spin) / (2 * ell - 1.0)
            )
            nxt = ((a * costh - b) * curr - c * prev) / d
        prev = curr
        curr = nxt
        _rescale_pair(curr, prev, off)
        out[:, idx + 1] = np.ldexp(curr, off)
    return out


def spin_column(spin: int, m: int, theta: float, band_limit: int) -> SpinColumn:
    """Single-point version of `spin_table`, wrapped with its metadata."""
    values = spin_table(spin, m, [theta], band_limit)[0]
    return SpinColumn(spin=spin, order=m, theta=float(theta), values=values)
