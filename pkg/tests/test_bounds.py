from math import comb, sqrt

import numpy as np
import pytest

from schoenberg_lab.bounds import (
    GridConfig,
    HypothesisError,
    approximation_error,
    beutel_upper_scale,
    corollary_delta,
    equivalence_report,
    lower_bound_constant,
)
from schoenberg_lab.bspline import basis_condition_upper
from schoenberg_lab.functions import REGISTRY, resolve
from schoenberg_lab.knots import bernstein_knot_vector, make_knot_vector, uniform_knot_vector
from schoenberg_lab.smoothness import modulus
from schoenberg_lab.spectral import spectrum

QUARTER = uniform_knot_vector(4, 3)  # delta_min = delta_max = 1/4
FAST = GridConfig(grid=4001, h_steps=32, x_steps=2048)


class TestApproximationError:
    def test_linear_is_zero(self):
        for kv in (QUARTER, make_knot_vector([0.2, 0.7], 4), bernstein_knot_vector(5)):
            assert approximation_error(kv, lambda x: 0.3 * x - 7) <= 1e-13

    def test_bernstein_square(self):
        # oracle: explicit binomial sum on a finer grid than the library uses
        x = np.linspace(0, 1, 30_001)
        sx = sum(comb(3, j) * x**j * (1 - x) ** (3 - j) * (j / 3) ** 2 for j in range(4))
        oracle = np.max(np.abs(sx - x**2))
        assert oracle == pytest.approx(1 / 12, abs=1e-9)
        assert approximation_error(bernstein_knot_vector(3), resolve("square")) == pytest.approx(1 / 12, abs=1e-9)

    def test_piecewise_linear_square(self):
        x = np.linspace(0, 1, 20_001)
        oracle = np.max(np.abs(np.interp(x, [0, 0.5, 1], [0, 0.25, 1]) - x**2))
        assert oracle == pytest.approx(1 / 16, abs=1e-9)
        assert approximation_error(uniform_knot_vector(2, 1), resolve("square")) == pytest.approx(1 / 16, abs=1e-9)


class TestConstants:
    def test_corollary_value(self):
        delta = corollary_delta(QUARTER, 2, 2 / 3, 24)
        assert delta == pytest.approx(0.25 * sqrt(1 / 72), rel=1e-14)
        assert delta == pytest.approx(0.029463, abs=1e-6)
        assert lower_bound_constant(QUARTER, 2, delta, 2 / 3, 24) == pytest.approx(1 / 8, rel=1e-14)

    @pytest.mark.parametrize("r, k", [(2, 3), (2, 5), (3, 4), (4, 6)])
    def test_corollary_gives_half_of_max(self, r, k):
        kv = uniform_knot_vector(5, k)
        delta = corollary_delta(kv, r, 0.9, basis_condition_upper(k))
        assert delta <= 0.2
        assert lower_bound_constant(kv, r, delta, 0.9, basis_condition_upper(k)) == pytest.approx(2.0 ** -(r + 1))

    def test_small_t_limit(self):
        assert lower_bound_constant(QUARTER, 2, 1e-12, 0.9, 24) == pytest.approx(0.25, rel=1e-12)
        assert lower_bound_constant(uniform_knot_vector(4, 4), 3, 1e-12, 0.9, 64) == pytest.approx(0.125, rel=1e-12)

    def test_monotone(self):
        ts = np.linspace(0.01, 0.5, 20)
        m = [lower_bound_constant(QUARTER, 2, t, 0.9, 24) for t in ts]
        assert np.all(np.diff(m) < 0) and max(m) <= 0.25
        m_dk = [lower_bound_constant(QUARTER, 2, 0.1, 0.9, dk) for dk in (2, 8, 24, 100)]
        assert np.all(np.diff(m_dk) < 0)
        kvs = [uniform_knot_vector(n, 3) for n in (16, 8, 4, 2)]  # delta_min increasing
        m_d = [lower_bound_constant(kv, 2, 0.1, 0.9, 24) for kv in kvs]
        assert np.all(np.diff(m_d) > 0)

    def test_delta_limits(self):
        assert corollary_delta(QUARTER, 2, 0.9, 1e12) < 1e-6
        assert corollary_delta(QUARTER, 2, 1 - 1e-14, 24) < 1e-6
        assert corollary_delta(QUARTER, 2, 0.0, 1.0) == pytest.approx(0.25)

    def test_guards(self):
        with pytest.raises(HypothesisError):
            lower_bound_constant(QUARTER, 2, 0.1, 1.0, 24)
        with pytest.raises(HypothesisError):
            lower_bound_constant(uniform_knot_vector(4, 2), 2, 0.1, 0.5, 8)
        with pytest.raises(HypothesisError):
            corollary_delta(QUARTER, 3, 0.5, 24)
        with pytest.raises(ValueError):
            lower_bound_constant(QUARTER, 2, 0.6, 0.5, 24)

    def test_beutel_scale(self):
        assert beutel_upper_scale(QUARTER) == pytest.approx(sqrt(1 / 48), rel=1e-14)
        assert beutel_upper_scale(QUARTER) == pytest.approx(0.14434, abs=1e-5)
        for k in (2, 3, 6, 10):
            want = sqrt(min(1 / (2 * k), (k + 1) / 12))
            assert beutel_upper_scale(bernstein_knot_vector(k)) == pytest.approx(want, rel=1e-14)


class TestEquivalenceReport:
    def test_linear_trivial(self):
        rep = equivalence_report(QUARTER, resolve("identity"), grid=FAST, dk_trials=8)
        assert rep.approx_error <= 1e-13
        assert rep.omega_r_t == 0.0
        assert rep.passed

    def test_bernstein_square(self):
        rep = equivalence_report(bernstein_knot_vector(3), resolve("square"), grid=FAST, dk_trials=8)
        delta = sqrt(1 / 72)  # delta_min = 1, gamma = 2/3, d_3 = 24
        assert rep.corollary_delta == pytest.approx(delta, rel=1e-8)
        assert rep.corollary_constant == pytest.approx(1 / 8, rel=1e-8)
        # independent recomputation: omega_2(x^2, delta) = 2 delta^2
        lhs = 2 * delta**2 / 8
        v = {v.name: v for v in rep.verdicts}["lower_corollary"]
        assert v.status == "pass"
        assert v.lhs == pytest.approx(lhs, rel=1e-8)
        assert v.rhs == pytest.approx(1 / 12, abs=1e-9)
        assert v.margin == pytest.approx(1 / 12 - 1 / 288, rel=1e-6)

    @pytest.mark.parametrize("name", sorted(REGISTRY))
    @pytest.mark.parametrize("n", [2, 4])
    def test_registry_passes_with_half_delta(self, name, n):
        kv = uniform_knot_vector(n, 3)
        f = resolve(name)
        sp = spectrum(kv)
        delta = corollary_delta(kv, 2, sp.gamma, 24)
        err = approximation_error(kv, f, FAST.grid)
        for t in (delta, delta / 2):
            m = lower_bound_constant(kv, 2, t, sp.gamma, 24)
            assert m * modulus(f, 2, t, FAST.h_steps, FAST.x_steps).value <= err + 1e-8

    def test_fields(self):
        rep = equivalence_report(uniform_knot_vector(8, 4), resolve("runge"), grid=FAST, dk_trials=8)
        assert rep.dk_used == 64
        assert 1 <= rep.dk_empirical <= 64
        assert rep.lower_constant_empirical >= rep.lower_constant
        assert 0 < rep.lower_constant <= 0.25
        assert rep.corollary_delta <= rep.delta_min
        assert rep.t == 0.5 and not rep.beutel_clamped
        assert [v.name for v in rep.verdicts] == ["lower_corollary", "upper_beutel", "lower_at_t"]
        d = rep.to_dict()
        assert d["function"] == "runge:25.0" and d["k"] == 4

    def test_guards(self):
        with pytest.raises(HypothesisError, match="projector"):
            equivalence_report(uniform_knot_vector(4, 1), resolve("square"), grid=FAST)
        with pytest.raises(HypothesisError):
            equivalence_report(uniform_knot_vector(4, 2), resolve("square"), grid=FAST)
        with pytest.raises(HypothesisError):
            equivalence_report(QUARTER, resolve("square"), r=3, grid=FAST)
