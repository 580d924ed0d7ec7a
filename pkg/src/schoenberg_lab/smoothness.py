"""Forward differences and the classical r-th modulus of smoothness on [0, 1]."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable

import numpy as np

__all__ = ["ModulusEstimate", "forward_difference", "modulus", "H_STEPS", "X_STEPS"]

H_STEPS = 64
X_STEPS = 4096
_EPS = np.finfo(float).eps
_TINY = np.finfo(float).smallest_subnormal


@dataclass(frozen=True)
class ModulusEstimate:
    """Grid value of ``omega_r(f, t)``.

    A maximum over a subset of the admissible ``(h, x)`` pairs, with each
    difference shrunk by its rounding-error bound, so it does not exceed the
    true supremum.
    """

    value: float
    r: int
    t: float
    h_grid_size: int
    x_grid_size: int


def _weights(r: int) -> np.ndarray:
    return np.array([(-1) ** (r - l) * comb(r, l) for l in range(r + 1)], dtype=float)


def forward_difference(f: Callable, x, h: float, r: int):
    """``sum_{l=0}^{r} (-1)^(r-l) C(r, l) f(x + l h)``.

    Raises:
        ValueError: ``r < 1``, ``h <= 0``, or a stencil leaving ``[0, 1]``.
    """
    if r < 1:
        raise ValueError("order r must be >= 1")
    if not h > 0:
        raise ValueError("step h must be positive")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0) or np.any(xa + r * h > 1.0 + 1e-15):
        raise ValueError("stencil x, x + h, ..., x + r h must stay inside [0, 1]")
    w = _weights(r)
    pts = np.minimum(xa[..., None] + h * np.arange(r + 1), 1.0)
    vals = np.asarray(f(pts), dtype=float)
    out = vals @ w
    return float(out) if np.ndim(x) == 0 else out


def modulus(
    f: Callable,
    r: int,
    t: float,
    h_steps: int = H_STEPS,
    x_steps: int = X_STEPS,
) -> ModulusEstimate:
    """Grid estimate of ``omega_r(f, t) = sup_{0<h<=t} sup_x |Delta_h^r f(x)|``.

    Steps ``h = t i / h_steps`` for ``i = 1..h_steps`` (the endpoint ``h = t``
    is included; the difference is continuous in ``h``), and for each step
    ``x_steps + 1`` equispaced points of ``[0, 1 - r h]``.

    Each ``|Delta|`` is reduced by ``(r + 3) eps sum_l |w_l f(x + l h)|``, a
    bound on the error from rounding the stencil points, evaluating ``f`` to
    within an ulp, and summing (plus an absolute term for subnormal
    underflow); the result is clipped at 0.
    """
    if r < 1:
        raise ValueError("order r must be >= 1")
    if not 0.0 < t <= 1.0 / r:
        raise ValueError(f"t must lie in (0, 1/r] = (0, {1.0 / r}], got {t!r}")
    if h_steps < 1 or x_steps < 1:
        raise ValueError("grid sizes must be positive")
    w = _weights(r)
    best = 0.0
    for i in range(1, h_steps + 1):
        h = t * i / h_steps
        x = np.linspace(0.0, max(1.0 - r * h, 0.0), x_steps + 1)
        pts = np.minimum(x[:, None] + h * np.arange(r + 1), 1.0)
        fv = np.asarray(f(pts), dtype=float)
        err = (r + 3) * (_EPS * (np.abs(fv) @ np.abs(w)) + _TINY * np.abs(w).sum())
        best = max(best, float(np.max(np.abs(fv @ w) - err)))
    return ModulusEstimate(best, r, float(t), h_steps, x_steps)
