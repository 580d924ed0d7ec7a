"""Spectrum of the collocation matrix, spectral gap, Gershgorin discs and decay fits."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .eigen import eigvals
from .knots import KnotVector
from .schoenberg import CollocationMatrix, collocation_matrix, iterate_distances

__all__ = [
    "PROJECTOR_FLAG",
    "SpectrumResult",
    "GershgorinDiscs",
    "FixedVectorReport",
    "DecayFit",
    "eigenvalues",
    "spectrum",
    "gershgorin_discs",
    "verify_fixed_vectors",
    "decay_rate_estimate",
]

PROJECTOR_FLAG = "projector case: iterate-convergence hypotheses not met (k = 1)"
AMBIGUOUS_FLAG = "gap numerically ambiguous: eigenvalue modulus within tol_one of 1"
MULTIPLICITY_FLAG = "anomaly: eigenvalue 1 has multiplicity above 2"

DECAY_FLOOR = 1e-13


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    eigenvalues: np.ndarray
    gamma: float
    one_multiplicity: int
    tol_one: float
    gamma_eigenvalue: complex | None = None
    flags: tuple[str, ...] = ()

    @property
    def is_projector(self) -> bool:
        return PROJECTOR_FLAG in self.flags


@dataclass(frozen=True, eq=False)
class GershgorinDiscs:
    centers: np.ndarray
    radii: np.ndarray

    def __iter__(self):
        return iter(zip(self.centers.tolist(), self.radii.tolist()))

    def __len__(self) -> int:
        return len(self.centers)

    def distance(self, lam: complex) -> float:
        """Distance from ``lam`` to the union of the closed discs (0 if inside)."""
        gaps = np.abs(lam - self.centers) - self.radii
        return float(max(gaps.min(), 0.0))

    def contains_all(self, lams, slack: float = 1e-9) -> bool:
        return all(self.distance(lam) <= slack for lam in lams)


@dataclass(frozen=True)
class FixedVectorReport:
    constant_residual: float
    linear_residual: float
    tol: float = 1e-12

    @property
    def ok(self) -> bool:
        return self.constant_residual <= self.tol and self.linear_residual <= self.tol


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit ``log d_m ~ log C + m log rho`` over the usable range.

    ``intercept`` is ``exp(log C)``, an empirical stand-in for the constant in
    the geometric decay bound; it is not a certified value.
    """

    rho: float
    r_squared: float
    intercept: float
    m_used: tuple[int, ...] = field(default=())


def _as_array(N) -> np.ndarray:
    return N.entries if isinstance(N, CollocationMatrix) else np.asarray(N, dtype=float)


def eigenvalues(N) -> np.ndarray:
    """All eigenvalues of the collocation matrix, descending modulus."""
    return eigvals(_as_array(N))


def spectrum(kv: KnotVector, tol_one: float = 1e-8) -> SpectrumResult:
    """Eigenvalues of ``N`` and the gap ``gamma = max{|lam| : |lam - 1| > tol_one}``."""
    if not 0.0 < tol_one <= 0.1:
        raise ValueError("tol_one must lie in (0, 0.1]")
    lam = eigenvalues(collocation_matrix(kv))
    near_one = np.abs(lam - 1.0) <= tol_one
    rest = lam[~near_one]
    flags = []
    if rest.size:
        idx = int(np.argmax(np.abs(rest)))
        gamma, arg = float(abs(rest[idx])), complex(rest[idx])
    else:
        gamma, arg = 0.0, None
    if np.any((np.abs(rest) > 1.0 - tol_one)):
        flags.append(AMBIGUOUS_FLAG)
    mult = int(near_one.sum())
    if kv.degree == 1:
        flags.append(PROJECTOR_FLAG)
    elif mult > 2:
        flags.append(MULTIPLICITY_FLAG)
    return SpectrumResult(lam, gamma, mult, tol_one, arg, tuple(flags))


def gershgorin_discs(N) -> GershgorinDiscs:
    """Row discs: center ``N[j, j]``, radius the off-diagonal absolute row sum."""
    A = _as_array(N)
    centers = np.diag(A).copy()
    radii = np.abs(A).sum(axis=1) - np.abs(centers)
    return GershgorinDiscs(centers, radii)


def verify_fixed_vectors(N, xi) -> FixedVectorReport:
    """Residuals ``||N 1 - 1||`` and ``||N xi - xi||`` in the max norm."""
    A = _as_array(N)
    xi = np.asarray(xi, dtype=float)
    if A.shape != (xi.size, xi.size):
        raise ValueError("matrix and node dimensions disagree")
    ones = np.ones_like(xi)
    return FixedVectorReport(
        constant_residual=float(np.max(np.abs(A @ ones - ones))),
        linear_residual=float(np.max(np.abs(A @ xi - xi))),
    )


def decay_rate_estimate(
    kv: KnotVector,
    f: Callable,
    m_min: int = 5,
    m_max: int = 40,
    grid: int = 10_001,
) -> DecayFit:
    """Fit the geometric rate at which ``||S^m f - L f||`` decays.

    Distances at or below ``1e-13`` are dropped from the tail before fitting.

    Raises:
        ValueError: ``k < 2``, a range shorter than 5 steps, ``f`` already
            fixed at ``m_min``, or fewer than 3 usable points.
    """
    if kv.degree < 2:
        raise ValueError("decay fits need k >= 2; for k = 1 the operator is a projector")
    if m_min < 1 or m_max - m_min < 5:
        raise ValueError("need m_min >= 1 and m_max - m_min >= 5")
    d = iterate_distances(kv, f, m_max, grid)[m_min - 1 :]
    if d[0] <= DECAY_FLOOR:
        raise ValueError("f is numerically fixed by the operator; nothing to fit")
    usable = np.nonzero(d <= DECAY_FLOOR)[0]
    stop = int(usable[0]) if usable.size else d.size
    if stop < 3:
        raise ValueError(f"only {stop} distances above {DECAY_FLOOR:g}; need at least 3")
    m = np.arange(m_min, m_min + stop, dtype=float)
    y = np.log(d[:stop])
    slope, icpt = np.polyfit(m, y, 1)
    resid = y - (slope * m + icpt)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(
        rho=float(np.exp(slope)),
        r_squared=r2,
        intercept=float(np.exp(icpt)),
        m_used=tuple(int(v) for v in m),
    )
