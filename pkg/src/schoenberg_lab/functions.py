"""Registry of continuous test functions on [0, 1].

Functions are referred to by name, optionally followed by parameters, e.g.
``"abs_kink"``, ``"abs_kink:0.3"`` or ``"power:1.5"``. All callables accept
scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .knots import KnotVector, greville_nodes

__all__ = [
    "FunctionSpec",
    "TestFunction",
    "REGISTRY",
    "DEFAULT_NAMES",
    "parse_function",
    "resolve",
    "nullspace_polynomial",
]

Func = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    parameters: tuple[float, ...] = ()

    def __str__(self) -> str:
        if not self.parameters:
            return self.name
        return f"{self.name}:{','.join(repr(p) for p in self.parameters)}"


@dataclass(frozen=True)
class TestFunction:
    """A resolved registry entry.

    ``derivatives`` maps an order ``r`` to the analytic ``r``-th derivative
    where one is known.
    """

    spec: FunctionSpec
    f: Func
    derivatives: dict[int, Func] = field(default_factory=dict)

    __test__ = False  # keep pytest from collecting this class

    @property
    def name(self) -> str:
        return str(self.spec)

    def __call__(self, x):
        return self.f(x)


def _const(c: float = 1.0) -> TestFunction:
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))  # noqa: E731
    return TestFunction(
        FunctionSpec("constant", (c,)),
        lambda x: np.full_like(np.asarray(x, dtype=float), c),
        {1: zero, 2: zero, 3: zero},
    )


def _identity() -> TestFunction:
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))  # noqa: E731
    return TestFunction(
        FunctionSpec("identity"),
        lambda x: np.asarray(x, dtype=float),
        {1: lambda x: np.ones_like(np.asarray(x, dtype=float)), 2: zero, 3: zero},
    )


def _square() -> TestFunction:
    return TestFunction(
        FunctionSpec("square"),
        lambda x: np.asarray(x, dtype=float) ** 2,
        {
            1: lambda x: 2.0 * np.asarray(x, dtype=float),
            2: lambda x: np.full_like(np.asarray(x, dtype=float), 2.0),
            3: lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        },
    )


def _cube() -> TestFunction:
    return TestFunction(
        FunctionSpec("cube"),
        lambda x: np.asarray(x, dtype=float) ** 3,
        {
            1: lambda x: 3.0 * np.asarray(x, dtype=float) ** 2,
            2: lambda x: 6.0 * np.asarray(x, dtype=float),
            3: lambda x: np.full_like(np.asarray(x, dtype=float), 6.0),
        },
    )


def _abs_kink(c: float = 0.5) -> TestFunction:
    return TestFunction(
        FunctionSpec("abs_kink", (c,)), lambda x: np.abs(np.asarray(x, dtype=float) - c)
    )


def _sqrt() -> TestFunction:
    return TestFunction(FunctionSpec("sqrt"), lambda x: np.sqrt(np.asarray(x, dtype=float)))


def _sin_pi() -> TestFunction:
    return TestFunction(
        FunctionSpec("sin_pi"),
        lambda x: np.sin(np.pi * np.asarray(x, dtype=float)),
        {
            1: lambda x: np.pi * np.cos(np.pi * np.asarray(x, dtype=float)),
            2: lambda x: -(np.pi**2) * np.sin(np.pi * np.asarray(x, dtype=float)),
            3: lambda x: -(np.pi**3) * np.cos(np.pi * np.asarray(x, dtype=float)),
        },
    )


def _power(a: float = 1.5) -> TestFunction:
    if a <= 0:
        raise ValueError("power exponent must be positive")
    return TestFunction(
        FunctionSpec("power", (a,)), lambda x: np.asarray(x, dtype=float) ** a
    )


def _runge(a: float = 25.0) -> TestFunction:
    return TestFunction(
        FunctionSpec("runge", (a,)),
        lambda x: 1.0 / (1.0 + a * (np.asarray(x, dtype=float) - 0.5) ** 2),
    )


def nullspace_polynomial(kv: KnotVector) -> TestFunction:
    """``prod_i (x - xi_i)`` over all Greville nodes; the operator maps it to 0."""
    xi = greville_nodes(kv)

    def f(x):
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        for node in xi:
            out = out * (x - node)
        return out

    return TestFunction(FunctionSpec("nullspace"), f)


REGISTRY: dict[str, Callable[..., TestFunction]] = {
    "constant": _const,
    "identity": _identity,
    "square": _square,
    "cube": _cube,
    "abs_kink": _abs_kink,
    "sqrt": _sqrt,
    "sin_pi": _sin_pi,
    "power": _power,
    "runge": _runge,
}

# "nullspace" is resolved per knot vector
DEFAULT_NAMES = (*REGISTRY, "nullspace")


def parse_function(text: str) -> FunctionSpec:
    """Parse ``name`` or ``name:p1,p2`` into a :class:`FunctionSpec`."""
    name, _, params = text.partition(":")
    name = name.strip()
    if name not in DEFAULT_NAMES:
        raise KeyError(f"unknown function {name!r}; choose from {', '.join(DEFAULT_NAMES)}")
    values = tuple(float(p) for p in params.split(",")) if params.strip() else ()
    return FunctionSpec(name, values)


def resolve(spec: FunctionSpec | str, kv: KnotVector | None = None) -> TestFunction:
    if isinstance(spec, str):
        spec = parse_function(spec)
    if spec.name == "nullspace":
        if kv is None:
            raise ValueError("the nullspace polynomial needs a knot vector")
        if spec.parameters:
            raise ValueError("nullspace takes no parameters")
        return nullspace_polynomial(kv)
    try:
        return REGISTRY[spec.name](*spec.parameters)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {spec.name!r}: {spec.parameters}") from exc
