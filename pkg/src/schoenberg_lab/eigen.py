"""Eigenvalues of a dense real nonsymmetric matrix.

Parlett-Reinsch balancing, Householder reduction to upper Hessenberg form and
the Francis implicit double-shift QR iteration with deflation. Only
eigenvalues are computed; transformations act on the active window alone.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["ConvergenceError", "balance", "hessenberg", "eigvals", "MAX_DIM"]

MAX_DIM = 2000
_EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    """The QR iteration did not converge within its iteration cap."""


def balance(A: np.ndarray, radix: float = 2.0) -> np.ndarray:
    """Diagonal similarity scaling that equalizes row and column norms."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    sqrdx = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            c = np.abs(A[:, i]).sum() - abs(A[i, i])
            r = np.abs(A[i, :]).sum() - abs(A[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                A[i, :] /= f
                A[:, i] *= f
    return A


def _house(x: np.ndarray) -> tuple[np.ndarray, float]:
    alpha = math.sqrt(float(x @ x))
    if alpha == 0.0:
        return x, 0.0
    v = x.copy()
    v[0] += math.copysign(alpha, x[0])
    return v, 2.0 / float(v @ v)


def hessenberg(A: np.ndarray) -> np.ndarray:
    """Upper Hessenberg matrix orthogonally similar to ``A``."""
    H = np.array(A, dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        v, beta = _house(H[k + 1 :, k].copy())
        if beta == 0.0:
            continue
        H[k + 1 :, k:] -= beta * np.outer(v, v @ H[k + 1 :, k:])
        H[:, k + 1 :] -= beta * np.outer(H[:, k + 1 :] @ v, v)
        H[k + 2 :, k] = 0.0
    return H


def _eig2(a: float, b: float, c: float, d: float) -> tuple[complex, complex]:
    mid = 0.5 * (a + d)
    p = 0.5 * (a - d)
    disc = p * p + b * c
    if disc >= 0.0:
        root = math.sqrt(disc)
        big = mid + math.copysign(root, mid)
        small = (a * d - b * c) / big if big != 0.0 else mid - root
        return complex(big), complex(small)
    root = math.sqrt(-disc)
    return complex(mid, root), complex(mid, -root)


def _francis_step(H: np.ndarray, lo: int, hi: int, s: float, t: float) -> None:
    # shifts enter only through their sum s and product t
    x = H[lo, lo] * H[lo, lo] + H[lo, lo + 1] * H[lo + 1, lo] - s * H[lo, lo] + t
    y = H[lo + 1, lo] * (H[lo, lo] + H[lo + 1, lo + 1] - s)
    z = H[lo + 1, lo] * H[lo + 2, lo + 1]
    for k in range(lo, hi - 1):
        v, beta = _house(np.array([x, y, z]))
        if beta != 0.0:
            q = max(lo, k - 1)
            blk = H[k : k + 3, q : hi + 1]
            blk -= beta * np.outer(v, v @ blk)
            r = min(k + 3, hi)
            blk = H[lo : r + 1, k : k + 3]
            blk -= beta * np.outer(blk @ v, v)
            if k > lo:
                H[k + 1, k - 1] = H[k + 2, k - 1] = 0.0
        x = H[k + 1, k]
        y = H[k + 2, k]
        if k < hi - 2:
            z = H[k + 3, k]
    v, beta = _house(np.array([x, y]))
    if beta != 0.0:
        blk = H[hi - 1 : hi + 1, hi - 2 : hi + 1]
        blk -= beta * np.outer(v, v @ blk)
        blk = H[lo : hi + 1, hi - 1 : hi + 1]
        blk -= beta * np.outer(blk @ v, v)
        H[hi, hi - 2] = 0.0


def _hqr(H: np.ndarray, max_iter: int) -> np.ndarray:
    n = H.shape[0]
    eig = np.zeros(n, dtype=complex)
    anorm = np.abs(H).sum() or 1.0
    hi = n - 1
    its = 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            s = abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            if s == 0.0:
                s = anorm
            if abs(H[lo, lo - 1]) <= _EPS * s:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1

        if lo == hi:
            eig[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            eig[hi - 1], eig[hi] = _eig2(
                H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi]
            )
            hi -= 2
            its = 0
            continue

        if its >= max_iter:
            raise ConvergenceError(
                f"QR iteration did not converge after {max_iter} sweeps "
                f"({hi + 1} eigenvalues outstanding)"
            )
        its += 1
        if its % 10 == 0:
            # exceptional shift to break cycles
            w = abs(H[hi, hi - 1]) + abs(H[hi - 1, hi - 2])
            a = 0.75 * w + H[hi, hi]
            s, t = 2.0 * a, a * a + 0.4375 * w * w
        else:
            s = H[hi - 1, hi - 1] + H[hi, hi]
            t = H[hi - 1, hi - 1] * H[hi, hi] - H[hi - 1, hi] * H[hi, hi - 1]
        _francis_step(H, lo, hi, s, t)
    return eig


def eigvals(A, *, balanced: bool = True, max_iter: int = 60) -> np.ndarray:
    """All eigenvalues of a real square matrix, sorted by descending modulus.

    Ties in modulus are ordered by descending real, then imaginary part.

    Raises:
        ValueError: non-square, non-finite, or larger than ``MAX_DIM``.
        ConvergenceError: more than ``max_iter`` QR sweeps for one eigenvalue.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {A.shape[0]} exceeds the cap of {MAX_DIM}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if A.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    H = hessenberg(balance(A) if balanced else A)
    lam = _hqr(H, max_iter)
    order = np.lexsort((-lam.imag, -lam.real, -np.abs(lam)))
    return lam[order]
