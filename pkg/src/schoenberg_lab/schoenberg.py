"""The Schoenberg operator ``S f = sum_j f(xi_j) N_j``, its iterates and their limit.

After one application everything lives in the spline space, so iterates are
computed in coefficient space: ``S^m f`` has coefficients ``N^(m-1) c`` with
``c_j = f(xi_j)`` and ``N`` the collocation matrix ``N[i, j] = N_j(xi_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bspline import SplineFunction, basis_matrix, sup_grid
from .knots import KnotVector, greville_nodes

__all__ = [
    "CollocationMatrix",
    "apply",
    "collocation_matrix",
    "iterate",
    "iterate_by_resampling",
    "iterate_coefficients",
    "limit_operator",
    "iterate_distance",
    "iterate_distances",
]


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    values = np.asarray(f(x), dtype=float)
    values = np.broadcast_to(values, x.shape).astype(float)
    if not np.all(np.isfinite(values)):
        raise ValueError("function returned non-finite values at the sample points")
    return values


@dataclass(frozen=True, eq=False)
class CollocationMatrix:
    """Basis values at the Greville nodes; row ``i`` is ``N_j(xi_i)`` over ``j``."""

    kv: KnotVector
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def apply(kv: KnotVector, f: Callable) -> SplineFunction:
    """``S f`` as a spline with coefficients ``f(xi_j)``."""
    return SplineFunction(kv, _sample(f, greville_nodes(kv)))


def collocation_matrix(kv: KnotVector) -> CollocationMatrix:
    N = basis_matrix(kv, greville_nodes(kv))
    N.flags.writeable = False
    return CollocationMatrix(kv, N)


def iterate_coefficients(kv: KnotVector, f: Callable, m_max: int) -> np.ndarray:
    """Coefficients of ``S^m f`` for ``m = 1..m_max``, one row per ``m``."""
    if m_max < 1:
        raise ValueError("m must be >= 1")
    N = collocation_matrix(kv).entries
    out = np.empty((m_max, kv.dim))
    out[0] = _sample(f, greville_nodes(kv))
    for m in range(1, m_max):
        out[m] = N @ out[m - 1]
    return out


def iterate(kv: KnotVector, f: Callable, m: int) -> SplineFunction:
    """``S^m f``, computed as ``N^(m-1)`` applied to the first coefficients."""
    return SplineFunction(kv, iterate_coefficients(kv, f, m)[-1])


def iterate_by_resampling(kv: KnotVector, f: Callable, m: int) -> SplineFunction:
    """``S^m f`` by repeatedly evaluating the previous spline; a cross-check for :func:`iterate`."""
    if m < 1:
        raise ValueError("m must be >= 1")
    s = apply(kv, f)
    for _ in range(m - 1):
        s = apply(kv, s)
    return s


def limit_operator(f: Callable) -> Callable:
    """``(L f)(x) = f(0) + (f(1) - f(0)) x``."""
    f0 = float(_sample(f, np.array([0.0]))[0])
    f1 = float(_sample(f, np.array([1.0]))[0])

    def affine(x):
        return f0 + (f1 - f0) * np.asarray(x, dtype=float)

    return affine


def iterate_distances(
    kv: KnotVector, f: Callable, m_max: int, grid: int = 10_001
) -> np.ndarray:
    """Grid sup-distance ``||S^m f - L f||`` for ``m = 1..m_max``.

    ``L f`` is affine, hence reproduced exactly by the coefficients
    ``(L f)(xi_j)``; the difference is evaluated as a single spline.
    """
    coeffs = iterate_coefficients(kv, f, m_max)
    xi = greville_nodes(kv)
    diff = coeffs - limit_operator(f)(xi)
    B = basis_matrix(kv, sup_grid(kv, grid))
    return np.max(np.abs(B @ diff.T), axis=0)


def iterate_distance(kv: KnotVector, f: Callable, m: int, grid: int = 10_001) -> float:
    return float(iterate_distances(kv, f, m, grid)[-1])

