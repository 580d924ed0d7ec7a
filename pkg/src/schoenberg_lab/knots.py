"""Clamped knot partitions of [0, 1], Greville nodes and mesh statistics.

Indexing follows the usual convention for the variation-diminishing
operator: knots are ``x_{-k}, ..., x_{n+k}`` with ``x_{-k} = ... = x_0 = 0``
and ``x_n = ... = x_{n+k} = 1``. Internally the knots live in a flat tuple
where ``x_j`` sits at position ``j + k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "KnotVector",
    "MeshStats",
    "make_knot_vector",
    "uniform_knot_vector",
    "geometric_knot_vector",
    "random_knot_vector",
    "bernstein_knot_vector",
    "greville_nodes",
    "mesh_stats",
]


@dataclass(frozen=True)
class KnotVector:
    """Knot sequence of a degree-``degree`` spline space on ``n`` mesh intervals.

    Use :func:`make_knot_vector` or one of the family constructors; they
    validate the interior knots. Degree 0 is allowed here only so that
    derivatives of degree-1 splines have somewhere to live.
    """

    degree: int
    n: int
    knots: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.knots) != self.n + 2 * self.degree + 1:
            raise ValueError(
                f"expected {self.n + 2 * self.degree + 1} knots, got {len(self.knots)}"
            )

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.knots, dtype=float)

    @property
    def interior(self) -> tuple[float, ...]:
        k = self.degree
        return self.knots[k + 1 : k + self.n]

    @property
    def dim(self) -> int:
        """Dimension ``n + k`` of the spline space."""
        return self.n + self.degree

    def knot(self, j: int) -> float:
        """Return ``x_j`` for ``-k <= j <= n + k``."""
        if not -self.degree <= j <= self.n + self.degree:
            raise IndexError(f"knot index {j} out of range")
        return self.knots[j + self.degree]

    def with_degree(self, degree: int) -> KnotVector:
        """Same partition, different degree (boundary multiplicity ``degree + 1``)."""
        if degree < 0:
            raise ValueError("degree must be non-negative")
        return _build(self.interior, degree)


@dataclass(frozen=True)
class MeshStats:
    delta_min: float
    delta_max: float


def _build(interior: Sequence[float], degree: int) -> KnotVector:
    interior = tuple(float(v) for v in interior)
    knots = (0.0,) * (degree + 1) + interior + (1.0,) * (degree + 1)
    return KnotVector(degree=degree, n=len(interior) + 1, knots=knots)


def make_knot_vector(interior: Sequence[float], degree: int) -> KnotVector:
    """Build the clamped knot vector with the given simple interior knots.

    Raises:
        ValueError: if ``degree < 1``, an interior knot is outside ``(0, 1)``,
            or the interior knots are not strictly increasing.
    """
    if int(degree) != degree or degree < 1:
        raise ValueError(f"degree must be an integer >= 1, got {degree!r}")
    values = [float(v) for v in interior]
    for v in values:
        if not 0.0 < v < 1.0:
            raise ValueError(f"interior knot {v!r} not in the open interval (0, 1)")
    for a, b in zip(values, values[1:]):
        if not a < b:
            raise ValueError(f"interior knots must be strictly increasing ({a!r}, {b!r})")
    return _build(values, int(degree))


def uniform_knot_vector(n: int, k: int) -> KnotVector:
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    return make_knot_vector([j / n for j in range(1, n)], k)


def bernstein_knot_vector(k: int) -> KnotVector:
    """Single-interval partition; the operator reduces to the Bernstein operator."""
    return uniform_knot_vector(1, k)


def geometric_knot_vector(n: int, k: int, q: float = 0.5) -> KnotVector:
    """Interior knots ``1 - q**i`` for ``i = 1..n-1``, accumulating toward 1."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"ratio q must lie in (0, 1), got {q!r}")
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    return make_knot_vector([1.0 - q**i for i in range(1, n)], k)


def random_knot_vector(n: int, k: int, seed: int = 0) -> KnotVector:
    """Sorted uniform interior knots drawn from a generator seeded by ``(seed, n)``."""
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    rng = np.random.default_rng([seed, n])
    while True:
        interior = np.sort(rng.uniform(0.0, 1.0, size=n - 1))
        if interior.size == 0 or (np.all(np.diff(interior) > 0) and interior[0] > 0):
            return make_knot_vector(interior.tolist(), k)


def greville_nodes(kv: KnotVector) -> np.ndarray:
    """Greville nodes ``xi_j = (x_{j+1} + ... + x_{j+k}) / k`` for ``j = -k..n-1``."""
    k = kv.degree
    if k < 1:
        raise ValueError("Greville nodes need degree >= 1")
    t = kv.array
    # sliding window sums over t[p+1 : p+k+1], p = 0..n+k-1
    xi = np.array([t[p + 1 : p + k + 1].sum() / k for p in range(kv.dim)])
    xi.flags.writeable = False
    return xi


def mesh_stats(kv: KnotVector) -> MeshStats:
    """Smallest and largest positive knot gap (the clamped boundary gaps are zero)."""
    gaps = np.diff(kv.array)
    gaps = gaps[gaps > 0]
    return MeshStats(delta_min=float(gaps.min()), delta_max=float(gaps.max()))
