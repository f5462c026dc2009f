"""Factor-once / solve-many for dense symmetric indefinite matrices.

Correlation matrices built from the negative-power model have off-diagonal
entries close to -1 and are not positive definite, so Cholesky is not an
option. We use the Bunch-Kaufman LDL' factorization from LAPACK
(``?sytrf`` / ``?sytrs`` / ``?sycon``), which pivots with 1x1 and 2x2 blocks.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import lapack

SINGULAR_RTOL = 1e-12
TOL_SOLVE = 1e-9


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a pivot of the LDL' factorization is numerically zero."""

    def __init__(self, pivot: int, magnitude: float, threshold: float):
        self.pivot = pivot
        self.magnitude = magnitude
        self.threshold = threshold
        super().__init__(
            f"matrix is numerically singular: pivot {pivot} has magnitude "
            f"{magnitude:.3e} < {threshold:.3e}"
        )


class Factorization:
    """Immutable LDL' factorization of a symmetric matrix.

    Instances are safe to share between threads: :meth:`solve` never writes
    to the stored factors.

    Attributes
    ----------
    n : int
        Matrix order.
    condition : float
        LAPACK estimate of the 1-norm condition number.
    """

    __slots__ = ("n", "condition", "_ldu", "_ipiv")

    def __init__(self, ldu: np.ndarray, ipiv: np.ndarray, condition: float):
        ldu.setflags(write=False)
        ipiv.setflags(write=False)
        self._ldu = ldu
        self._ipiv = ipiv
        self.n = ldu.shape[0]
        self.condition = condition

    def solve(self, b) -> np.ndarray:
        return solve(self, b)

    def __repr__(self):
        return f"Factorization(n={self.n}, condition={self.condition:.3g})"


def _pivot_magnitudes(ldu: np.ndarray, ipiv: np.ndarray) -> np.ndarray:
    """Smallest |eigenvalue| of each diagonal block of D, indexed per row."""
    n = ldu.shape[0]
    mags = np.empty(n)
    k = 0
    while k < n:
        if ipiv[k] > 0:
            mags[k] = abs(ldu[k, k])
            k += 1
        else:
            block = np.array([[ldu[k, k], ldu[k + 1, k]], [ldu[k + 1, k], ldu[k + 1, k + 1]]])
            mags[k : k + 2] = np.abs(np.linalg.eigvalsh(block)).min()
            k += 2
    return mags


def factor(a) -> Factorization:
    """Factor a symmetric (possibly indefinite) matrix.

    Raises
    ------
    ValueError
        If ``a`` is not square or not exactly symmetric.
    SingularMatrixError
        If some pivot is smaller than ``1e-12 * max|a_ij|``.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    threshold = SINGULAR_RTOL * np.abs(a).max()
    anorm = np.abs(a).sum(axis=0).max()
    ldu, ipiv, info = lapack.dsytrf(a, lower=1)
    if info < 0:  # pragma: no cover - argument error inside LAPACK
        raise RuntimeError(f"dsytrf: illegal argument {-info}")
    mags = _pivot_magnitudes(ldu, ipiv)
    bad = np.flatnonzero(~(mags >= threshold))
    if info > 0 or bad.size or threshold == 0:
        k = int(bad[0]) if bad.size else max(info - 1, 0)
        raise SingularMatrixError(k, float(mags[k]), float(threshold))
    rcond, info = lapack.dsycon(ldu, ipiv, anorm, lower=1)
    condition = 1.0 / rcond if rcond > 0 else np.inf
    return Factorization(ldu, ipiv, float(condition))


def solve(f: Factorization, b) -> np.ndarray:
    """Solve ``A x = b`` for a vector or for the columns of an n x k array."""
    b = np.asarray(b, dtype=float)
    if b.shape[:1] != (f.n,) or b.ndim > 2:
        raise ValueError(f"right-hand side of shape {b.shape} does not match n={f.n}")
    rhs = b.reshape(f.n, -1)
    if rhs.shape[1] == 0:
        return np.empty_like(b)
    x, info = lapack.dsytrs(f._ldu, f._ipiv, rhs, lower=1)
    if info != 0:  # pragma: no cover
        raise RuntimeError(f"dsytrs: illegal argument {-info}")
    return x.reshape(b.shape)


def quad_form(f: Factorization, u, w) -> float:
    """u' A^{-1} w."""
    u = np.asarray(u, dtype=float)
    if u.shape != (f.n,):
        raise ValueError(f"left vector of shape {u.shape} does not match n={f.n}")
    return float(u @ solve(f, w))
