from math import comb

import numpy as np
import pytest

from schoenberg_lab.knots import geometric_knot_vector, uniform_knot_vector


def acceptance_kvs():
    """Uniform n in {1,2,4,8,16}, k in 1..5, plus geometric q=0.5, n=8, k=3."""
    cases = {f"uniform-n{n}-k{k}": uniform_knot_vector(n, k) for n in (1, 2, 4, 8, 16) for k in range(1, 6)}
    cases["geometric-n8-k3"] = geometric_knot_vector(8, 3, 0.5)
    return cases


def bernstein_poly(k, i, x):
    """Independent binomial formula C(k,i) x^i (1-x)^(k-i)."""
    x = np.asarray(x, dtype=float)
    return comb(k, i) * x**i * (1.0 - x) ** (k - i)


@pytest.fixture
def rng():
    return np.random.default_rng(20140210)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
