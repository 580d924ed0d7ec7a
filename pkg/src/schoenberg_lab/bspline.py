"""Normalized B-splines on clamped knot vectors and spline functions over them.

Two independent evaluators are provided. :func:`basis_matrix` (and the scalar
:func:`eval_basis`) run the two-term degree-raising recursion in floating
point. :func:`eval_basis_divdiff` evaluates the truncated-power divided
difference definition in exact rational arithmetic and is meant as an oracle.

Evaluation at ``x = 1`` always returns the left limit, so that the last basis
function equals 1 there and every other one vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .knots import KnotVector, greville_nodes

__all__ = [
    "SplineFunction",
    "BasisConditionEstimate",
    "basis_matrix",
    "eval_basis",
    "eval_basis_divdiff",
    "eval_spline",
    "derivative",
    "derivative_power",
    "sup_grid",
    "sup_norm",
    "basis_condition_upper",
    "estimate_basis_condition",
]


def _check_points(x: np.ndarray) -> None:
    if x.size and (np.any(x < 0.0) or np.any(x > 1.0) or np.any(np.isnan(x))):
        raise ValueError("evaluation points must lie in [0, 1]")


def basis_matrix(kv: KnotVector, x) -> np.ndarray:
    """Values of all ``n + k`` basis functions at the points ``x``.

    Returns an array of shape ``(len(x), n + k)`` whose column ``j + k`` holds
    ``N_{j,k}``. Rows sum to one.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    _check_points(x)
    t = kv.array
    k = kv.degree
    n_int = t.size - 1

    # degree 0: indicator of [t_i, t_{i+1}); x = 1 goes to the last nonempty cell
    span = np.searchsorted(t, x, side="right") - 1
    span = np.minimum(span, k + kv.n - 1)
    B = np.zeros((x.size, n_int))
    B[np.arange(x.size), span] = 1.0

    xc = x[:, None]
    for d in range(1, k + 1):
        m = n_int - d
        lo, hi = t[:m], t[d : d + m]
        lo1, hi1 = t[1 : 1 + m], t[d + 1 : d + 1 + m]
        den_l = hi - lo
        den_r = hi1 - lo1
        # 0/0 := 0 on zero-length supports
        inv_l = np.divide(1.0, den_l, out=np.zeros_like(den_l), where=den_l > 0)
        inv_r = np.divide(1.0, den_r, out=np.zeros_like(den_r), where=den_r > 0)
        B = (xc - lo) * inv_l * B[:, :m] + (hi1 - xc) * inv_r * B[:, 1 : m + 1]
    return B


def _check_index(kv: KnotVector, j: int) -> None:
    if not -kv.degree <= j <= kv.n - 1:
        raise IndexError(f"basis index {j} outside [-{kv.degree}, {kv.n - 1}]")


def eval_basis(kv: KnotVector, j: int, x: float) -> float:
    """``N_{j,k}(x)`` via the degree-raising recursion."""
    _check_index(kv, j)
    return float(basis_matrix(kv, [x])[0, j + kv.degree])


def eval_basis_divdiff(kv: KnotVector, j: int, x: float) -> float:
    """``N_{j,k}(x) = (x_{j+k+1} - x_j) [x_j, ..., x_{j+k+1}] (. - x)_+^k``.

    The divided difference is taken in exact rational arithmetic on the
    binary values of the knots and of ``x``; repeated knots use the confluent
    (derivative) form. The order-0 truncated power is 0 at its kink except at
    ``x = 1``, where it is 1 so the result is the left limit.
    """
    _check_index(kv, j)
    if not 0.0 <= x <= 1.0:
        raise ValueError("evaluation point must lie in [0, 1]")
    k = kv.degree
    pts = [Fraction(v) for v in kv.knots[j + k : j + 2 * k + 2]]
    X = Fraction(float(x))
    kink = 1 if x == 1.0 else 0

    def taylor(u: Fraction, order: int) -> Fraction:
        # g^(order)(u) / order!  for  g(u) = (u - X)_+^k
        d = u - X
        e = k - order
        if d > 0:
            return comb(k, order) * d**e
        if d < 0 or e > 0:
            return Fraction(0)
        return Fraction(kink)

    table = [taylor(u, 0) for u in pts]
    for level in range(1, len(pts)):
        table = [
            taylor(pts[i], level)
            if pts[i + level] == pts[i]
            else (table[i + 1] - table[i]) / (pts[i + level] - pts[i])
            for i in range(len(pts) - level)
        ]
    return float((pts[-1] - pts[0]) * table[0])


@dataclass(frozen=True, eq=False)
class SplineFunction:
    """``s = sum_j c_j N_{j,k}`` over the basis of ``kv``."""

    kv: KnotVector
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (self.kv.dim,):
            raise ValueError(f"expected {self.kv.dim} coefficients, got shape {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.kv.degree

    def __call__(self, x):
        return eval_spline(self, x)


def eval_spline(s: SplineFunction, x):
    """Evaluate ``s`` at a scalar or an array of points in ``[0, 1]``."""
    values = basis_matrix(s.kv, x) @ s.coeffs
    if np.ndim(x) == 0:
        return float(values[0])
    return values.reshape(np.shape(x))


def derivative(s: SplineFunction) -> SplineFunction:
    """First derivative as a degree ``k - 1`` spline on the same partition.

    Coefficients are ``(c_j - c_{j-1}) / (xi_j - xi_{j-1})`` for
    ``j = 1-k..n-1``. A degree-1 input gives a piecewise-constant (degree 0)
    result.
    """
    if s.degree < 1:
        raise ValueError("cannot differentiate a degree-0 spline")
    xi = greville_nodes(s.kv)
    dc = np.diff(s.coeffs) / np.diff(xi)
    return SplineFunction(s.kv.with_degree(s.degree - 1), dc)


def derivative_power(s: SplineFunction, l: int) -> SplineFunction:
    """``D^l s`` for ``1 <= l < k``."""
    if not 1 <= l < s.degree:
        raise ValueError(f"need 1 <= l < k = {s.degree}, got l = {l}")
    for _ in range(l):
        s = derivative(s)
    return s


def sup_grid(kv: KnotVector, grid: int = 10_001) -> np.ndarray:
    """Uniform grid on ``[0, 1]`` joined with the knots and Greville nodes."""
    if grid < 2:
        raise ValueError("grid needs at least 2 points")
    parts = [np.linspace(0.0, 1.0, grid), kv.array]
    if kv.degree >= 1:
        parts.append(greville_nodes(kv))
    return np.unique(np.concatenate(parts))


def sup_norm(values: np.ndarray) -> float:
    return float(np.max(np.abs(values))) if np.size(values) else 0.0


def basis_condition_upper(k: int) -> float:
    """Literature upper bound ``k * 2**k`` for the sup-norm basis condition number."""
    return float(k * 2**k)


@dataclass(frozen=True)
class BasisConditionEstimate:
    lower_estimate: float
    certified_upper: float


def estimate_basis_condition(
    kv: KnotVector,
    trials: int = 256,
    grid: int | None = None,
    seed: int = 0,
    extra: Sequence[np.ndarray] = (),
) -> BasisConditionEstimate:
    """Sample ``||c|| / ||sum c_j N_j||`` to bound the basis condition from below.

    Candidates: the all-ones vector, both alternating sign patterns,
    ``trials`` random sign vectors, ``trials`` uniform random vectors, every
    unit spike and every alternating window ``(-1)**(j-i)`` for
    ``|j - i| <= w <= k``, plus anything in ``extra``. Full-length sign
    vectors alone always give 1 because a clamped spline interpolates its
    first and last coefficient. The spline sup-norm is taken on
    :func:`sup_grid`, which can only underestimate it, so the estimate may
    exceed the true value by the grid error.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dim = kv.dim
    grid = max(10_001, 10 * dim) if grid is None else grid
    if grid < 10 * dim:
        raise ValueError(f"grid must have at least {10 * dim} points")
    B = basis_matrix(kv, sup_grid(kv, grid))

    rng = np.random.default_rng(seed)
    idx = np.arange(dim)
    alt = np.where(idx % 2 == 0, 1.0, -1.0)
    cands = [np.ones(dim), alt, -alt]
    cands.extend(rng.choice([-1.0, 1.0], size=(trials, dim)))
    cands.extend(rng.uniform(-1.0, 1.0, size=(trials, dim)))
    for i in range(dim):
        for w in range(kv.degree + 1):
            cands.append(np.where(np.abs(idx - i) <= w, alt * alt[i], 0.0))
    cands.extend(np.asarray(c, dtype=float) for c in extra)
    C = np.array(cands).T
    ratios = np.max(np.abs(C), axis=0) / np.max(np.abs(B @ C), axis=0)
    return BasisConditionEstimate(
        lower_estimate=float(ratios.max()),
        certified_upper=basis_condition_upper(kv.degree),
    )
