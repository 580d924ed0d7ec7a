"""Two-sided estimates of the approximation error ``||f - S f||`` by moduli of smoothness.

Lower side: with ``M(t) = 1 / (2^r (1 + d_k t^r / (delta_min^r (1 - gamma))))``,
``M(t) omega_r(f, t) <= ||f - S f||``. At ``t = delta_min ((1 - gamma) / d_k)^(1/r)``
the constant is exactly ``2^-(r+1)``.

Upper side: ``||f - S f|| <= 3/2 omega_2(f, sqrt(min{1/(2k), (k+1) delta_max^2 / 12}))``.

All certified checks use ``d_k = k 2^k``; the sampled per-knot-vector estimate
is reported alongside but never used in a verdict.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .bspline import basis_condition_upper, estimate_basis_condition, sup_grid
from .knots import KnotVector, mesh_stats
from .schoenberg import apply
from .smoothness import H_STEPS, X_STEPS, modulus
from .spectral import PROJECTOR_FLAG, spectrum

__all__ = [
    "HypothesisError",
    "GridConfig",
    "Verdict",
    "BoundsReport",
    "approximation_error",
    "lower_bound_constant",
    "corollary_delta",
    "beutel_upper_scale",
    "equivalence_report",
]

SLACK = 1e-8
REFINE = 4


class HypothesisError(ValueError):
    """Inputs violate the hypotheses under which the bounds are stated."""


@dataclass(frozen=True)
class GridConfig:
    grid: int = 10_001
    h_steps: int = H_STEPS
    x_steps: int = X_STEPS

    def refined(self, factor: int = REFINE) -> GridConfig:
        return GridConfig(
            (self.grid - 1) * factor + 1, self.h_steps * factor, self.x_steps * factor
        )


@dataclass(frozen=True)
class Verdict:
    name: str
    status: str  # "pass" | "fail" | "inconclusive"
    lhs: float
    rhs: float
    margin: float
    refined: bool = False


@dataclass
class BoundsReport:
    function: str
    n: int
    k: int
    delta_min: float
    delta_max: float
    gamma: float
    tol_one: float
    dk_used: float
    dk_empirical: float
    r: int
    t: float
    approx_error: float
    omega_r_t: float
    lower_constant: float
    lower_constant_empirical: float
    corollary_delta: float
    corollary_constant: float
    omega_r_delta: float
    beutel_t: float
    beutel_clamped: bool
    omega_2_beutel: float
    grid: GridConfig
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.status == "pass" for v in self.verdicts)

    def to_dict(self) -> dict:
        return asdict(self)


def approximation_error(kv: KnotVector, f: Callable, grid: int = 10_001) -> float:
    """``max |f(x) - S f(x)|`` over a uniform grid joined with the knots and Greville nodes."""
    x = sup_grid(kv, grid)
    s = apply(kv, f)
    fx = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return float(np.max(np.abs(fx - s(x))))


def _check_common(kv: KnotVector, r: int, gamma: float, dk: float) -> None:
    if r < 2:
        raise HypothesisError(f"requires r >= 2, got r = {r}")
    if kv.degree <= r:
        raise HypothesisError(f"requires k > r, got k = {kv.degree}, r = {r}")
    if not 0.0 <= gamma < 1.0:
        raise HypothesisError(f"spectral gap must satisfy 0 <= gamma < 1, got {gamma!r}")
    if not dk > 0:
        raise ValueError("d_k must be positive")


def lower_bound_constant(
    kv: KnotVector, r: int, t: float, gamma: float, dk: float
) -> float:
    """``M = 1 / (2^r (1 + dk t^r / (delta_min^r (1 - gamma))))``."""
    _check_common(kv, r, gamma, dk)
    if not 0.0 < t <= 1.0 / r:
        raise ValueError(f"t must lie in (0, 1/r], got {t!r}")
    dmin = mesh_stats(kv).delta_min
    return 1.0 / (2.0**r * (1.0 + dk * t**r / (dmin**r * (1.0 - gamma))))


def corollary_delta(kv: KnotVector, r: int, gamma: float, dk: float) -> float:
    """``delta_min ((1 - gamma) / dk)^(1/r)``; there ``M = 2^-(r+1)``."""
    _check_common(kv, r, gamma, dk)
    return mesh_stats(kv).delta_min * ((1.0 - gamma) / dk) ** (1.0 / r)


def beutel_upper_scale(kv: KnotVector) -> float:
    """``sqrt(min{1/(2k), (k+1) delta_max^2 / 12})``."""
    k = kv.degree
    dmax = mesh_stats(kv).delta_max
    return float(np.sqrt(min(1.0 / (2 * k), (k + 1) * dmax**2 / 12.0)))


def _verdict(name: str, compute: Callable[[GridConfig], tuple[float, float]], cfg: GridConfig) -> Verdict:
    # compute(cfg) -> (lhs, rhs) of the claim lhs <= rhs
    lhs, rhs = compute(cfg)
    if rhs - lhs >= -SLACK:
        return Verdict(name, "pass", lhs, rhs, rhs - lhs)
    lhs2, rhs2 = compute(cfg.refined())
    margin = rhs2 - lhs2
    if margin >= -SLACK:
        return Verdict(name, "pass", lhs2, rhs2, margin, refined=True)
    grid_effect = abs(lhs2 - lhs) + abs(rhs2 - rhs)
    status = "inconclusive" if grid_effect >= abs(margin) else "fail"
    return Verdict(name, status, lhs2, rhs2, margin, refined=True)


def equivalence_report(
    kv: KnotVector,
    f: Callable,
    r: int = 2,
    t: float | None = None,
    grid: GridConfig = GridConfig(),
    tol_one: float = 1e-8,
    name: str | None = None,
    dk_trials: int = 256,
    seed: int = 0,
) -> BoundsReport:
    """Evaluate both sides of the equivalence for ``f`` on ``kv``.

    Verdicts:

    * ``lower_corollary``: ``2^-(r+1) omega_r(f, delta) <= ||f - S f||``
    * ``upper_beutel``: ``||f - S f|| <= 3/2 omega_2(f, beutel_t)``
    * ``lower_at_t``: ``M(t) omega_r(f, t) <= ||f - S f||`` at the requested ``t``
      (default ``1/r``)

    A claim failing by more than ``1e-8`` is recomputed on grids refined
    4-fold; it is ``inconclusive`` if the refinement moved the two sides by
    more than the remaining violation.

    Raises:
        HypothesisError: ``k = 1`` (projector case) or ``k <= r``.
    """
    sp = spectrum(kv, tol_one)
    if PROJECTOR_FLAG in sp.flags:
        raise HypothesisError(PROJECTOR_FLAG)
    dk = basis_condition_upper(kv.degree)
    _check_common(kv, r, sp.gamma, dk)
    t = 1.0 / r if t is None else float(t)
    stats = mesh_stats(kv)

    delta = corollary_delta(kv, r, sp.gamma, dk)
    m_delta = lower_bound_constant(kv, r, delta, sp.gamma, dk)
    m_t = lower_bound_constant(kv, r, t, sp.gamma, dk)
    dk_emp = estimate_basis_condition(kv, trials=dk_trials, seed=seed).lower_estimate
    m_t_emp = lower_bound_constant(kv, r, t, sp.gamma, dk_emp)
    bt = beutel_upper_scale(kv)
    clamped = bt > 0.5
    bt = min(bt, 0.5)

    def err(cfg: GridConfig) -> float:
        return approximation_error(kv, f, cfg.grid)

    def omega(cfg: GridConfig, order: int, scale: float) -> float:
        return modulus(f, order, scale, cfg.h_steps, cfg.x_steps).value

    verdicts = [
        _verdict("lower_corollary", lambda c: (m_delta * omega(c, r, delta), err(c)), grid),
        _verdict("upper_beutel", lambda c: (err(c), 1.5 * omega(c, 2, bt)), grid),
        _verdict("lower_at_t", lambda c: (m_t * omega(c, r, t), err(c)), grid),
    ]
    return BoundsReport(
        function=name or getattr(f, "name", getattr(f, "__name__", "f")),
        n=kv.n,
        k=kv.degree,
        delta_min=stats.delta_min,
        delta_max=stats.delta_max,
        gamma=sp.gamma,
        tol_one=tol_one,
        dk_used=dk,
        dk_empirical=dk_emp,
        r=r,
        t=t,
        approx_error=err(grid),
        omega_r_t=omega(grid, r, t),
        lower_constant=m_t,
        lower_constant_empirical=m_t_emp,
        corollary_delta=delta,
        corollary_constant=m_delta,
        omega_r_delta=omega(grid, r, delta),
        beutel_t=bt,
        beutel_clamped=clamped,
        omega_2_beutel=omega(grid, 2, bt),
        grid=grid,
        verdicts=verdicts,
    )
