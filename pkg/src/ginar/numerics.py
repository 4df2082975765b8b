"""Small dense matrix algebra and chi-square tail utilities.

Everything here operates on tiny matrices (at most ``2*(p+1)`` square, with
p the autoregressive order), so a plain Gauss-Jordan sweep is both fast
enough and lets us surface the exact pivot that went bad instead of a
generic linear-algebra failure.

The chi-square survival function is computed through the regularized
incomplete gamma function with the classic series / continued-fraction
split (Cephes-style), accurate to well below 1e-10 absolute error.
"""

import math

import numpy as np

from .errors import SingularMatrixError

# All matrices in this package are (p+1) or 2(p+1) square; anything bigger
# than this is a caller bug, not a workload.
MAX_DIM = 64

# Relative pivot threshold below which a matrix is declared singular.
PIVOT_RTOL = 1e-12

_MACHEP = 2.220446049250313e-16
_MAX_ITER = 800


def invert(m):
    """Invert a square matrix by Gauss-Jordan elimination with partial pivoting.

    Parameters
    ----------
    m : array_like
        Square matrix with finite entries, dimension at most ``MAX_DIM``.

    Returns
    -------
    ndarray
        The inverse of ``m``.

    Raises
    ------
    SingularMatrixError
        If any pivot magnitude falls below ``PIVOT_RTOL`` times the largest
        absolute entry of the input. The error carries the pivot index.
    """
    a = np.array(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0 or n > MAX_DIM:
        raise ValueError(f"matrix dimension {n} outside supported range 1..{MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")

    scale = np.max(np.abs(a))
    threshold = PIVOT_RTOL * scale
    inv = np.eye(n)

    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(a[col:, col])))
        pivot = a[pivot_row, col]
        if abs(pivot) <= threshold:
            raise SingularMatrixError(col)
        if pivot_row != col:
            a[[col, pivot_row]] = a[[pivot_row, col]]
            inv[[col, pivot_row]] = inv[[pivot_row, col]]
        a[col] /= pivot
        inv[col] /= pivot
        for row in range(n):
            if row != col and a[row, col] != 0.0:
                factor = a[row, col]
                a[row] -= factor * a[col]
                inv[row] -= factor * inv[col]
    return inv


def _regularized_lower_series(a, x):
    """Regularized lower incomplete gamma P(a, x) by power series."""
    if x <= 0.0:
        return 0.0
    ax = a * math.log(x) - x - math.lgamma(a)
    if ax < -708.0:  # exp underflow
        return 0.0 if x < a else 1.0
    ax = math.exp(ax)
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if term <= total * _MACHEP:
            break
    return total * ax


def _regularized_upper_cf(a, x):
    """Regularized upper incomplete gamma Q(a, x) by continued fraction."""
    ax = a * math.log(x) - x - math.lgamma(a)
    if ax < -708.0:
        return 0.0
    ax = math.exp(ax)
    # Lentz-style evaluation of the Legendre continued fraction.
    big = 4.503599627370496e15
    biginv = 2.22044604925031308085e-16
    y = 1.0 - a
    z = x + y + 1.0
    c = 0.0
    pkm2, qkm2 = 1.0, x
    pkm1, qkm1 = x + 1.0, z * x
    ans = pkm1 / qkm1
    for _ in range(_MAX_ITER):
        c += 1.0
        y += 1.0
        z += 2.0
        yc = y * c
        pk = pkm1 * z - pkm2 * yc
        qk = qkm1 * z - qkm2 * yc
        if qk != 0.0:
            r = pk / qk
            t = abs((ans - r) / r)
            ans = r
        else:
            t = 1.0
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk
        if abs(pk) > big:
            pkm2 *= biginv
            pkm1 *= biginv
            qkm2 *= biginv
            qkm1 *= biginv
        if t <= _MACHEP:
            break
    return ans * ax


def chi_square_survival(x, df):
    """Upper tail probability P(X > x) for X ~ chi-square with ``df`` dof.

    Uses the series expansion of the lower incomplete gamma for
    ``x < df + 1`` and the continued fraction for the upper tail otherwise.
    """
    if df < 1 or int(df) != df:
        raise ValueError(f"degrees of freedom must be a positive integer, got {df}")
    if x < 0.0:
        raise ValueError(f"chi-square statistic must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    a = 0.5 * df
    s = 0.5 * x
    if x < df + 1.0:
        return min(1.0, max(0.0, 1.0 - _regularized_lower_series(a, s)))
    return min(1.0, max(0.0, _regularized_upper_cf(a, s)))


def chi_square_quantile(prob, df):
    """Quantile x with P(X <= x) = prob for X ~ chi-square with ``df`` dof.

    Solved by bisection on the survival function to absolute tolerance 1e-9.
    """
    if not 0.0 < prob < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {prob}")
    target = 1.0 - prob
    lo, hi = 0.0, max(2.0 * df, 20.0)
    while chi_square_survival(hi, df) > target:
        hi *= 2.0
        if hi > 1e9:
            raise ValueError("quantile bracket expansion failed")
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if chi_square_survival(mid, df) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
