from math import comb

import numpy as np
import pytest

from conftest import bernstein_poly
from schoenberg_lab.bspline import sup_grid
from schoenberg_lab.functions import DEFAULT_NAMES, nullspace_polynomial, parse_function, resolve
from schoenberg_lab.knots import (
    bernstein_knot_vector,
    geometric_knot_vector,
    greville_nodes,
    make_knot_vector,
    uniform_knot_vector,
)
from schoenberg_lab.schoenberg import (
    apply,
    collocation_matrix,
    iterate,
    iterate_by_resampling,
    iterate_coefficients,
    iterate_distance,
    iterate_distances,
    limit_operator,
)

KVS = [
    uniform_knot_vector(4, 3),
    make_knot_vector([0.1, 0.2, 0.65], 2),
    geometric_knot_vector(6, 4),
    bernstein_knot_vector(5),
]
X = np.linspace(0, 1, 2001)


class TestApply:
    @pytest.mark.parametrize("kv", KVS)
    def test_reproduces_affine(self, kv):
        np.testing.assert_allclose(apply(kv, lambda x: np.ones_like(x))(X), 1.0, atol=1e-13)
        np.testing.assert_allclose(apply(kv, lambda x: x)(X), X, atol=1e-13)

    @pytest.mark.parametrize("kv", KVS)
    def test_nullspace_polynomial_is_annihilated(self, kv):
        s = apply(kv, nullspace_polynomial(kv))
        assert np.max(np.abs(s(X))) <= 1e-10
        # the polynomial itself is not zero
        assert np.max(np.abs(nullspace_polynomial(kv)(X))) > 0

    @pytest.mark.parametrize("kv", KVS)
    def test_interpolates_endpoints(self, kv):
        f = resolve("runge")
        s = apply(kv, f)
        assert s(0.0) == pytest.approx(f(0.0), abs=1e-15)
        assert s(1.0) == pytest.approx(f(1.0), abs=1e-15)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            apply(uniform_knot_vector(3, 2), lambda x: np.full_like(x, np.nan))

    @pytest.mark.parametrize("kv", KVS)
    def test_positivity(self, kv, rng):
        xi = greville_nodes(kv)
        g_vals = rng.uniform(0, 1, size=xi.size)
        f = lambda x: np.interp(x, xi, g_vals)  # noqa: E731
        g = lambda x: np.interp(x, xi, g_vals) + 0.1 * x  # noqa: E731
        assert np.all(apply(kv, g)(X) - apply(kv, f)(X) >= -1e-14)

    @pytest.mark.parametrize("kv", KVS)
    @pytest.mark.parametrize("name", DEFAULT_NAMES)
    def test_norm_bound(self, kv, name):
        f = resolve(name, kv)
        x = sup_grid(kv, 2001)
        assert np.max(np.abs(apply(kv, f)(x))) <= np.max(np.abs(f(x))) + 1e-14


class TestCollocation:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_linear_is_identity(self, n):
        N = collocation_matrix(uniform_knot_vector(n, 1)).entries
        np.testing.assert_allclose(N, np.eye(n + 1), atol=1e-12)

    def test_bernstein_cubic(self):
        N = collocation_matrix(bernstein_knot_vector(3)).entries
        want = np.array([[bernstein_poly(3, i, x) for i in range(4)] for x in (0, 1 / 3, 2 / 3, 1)])
        np.testing.assert_allclose(N, want, atol=1e-15)
        np.testing.assert_array_equal(N[0], [1, 0, 0, 0])
        np.testing.assert_array_equal(N[-1], [0, 0, 0, 1])

    @pytest.mark.parametrize("kv", KVS)
    def test_row_stochastic(self, kv):
        N = collocation_matrix(kv).entries
        assert N.min() >= 0
        np.testing.assert_allclose(N.sum(axis=1), 1.0, atol=1e-12)


class TestIterates:
    def test_first_iterate_is_apply(self):
        kv = uniform_knot_vector(4, 3)
        f = resolve("sqrt")
        np.testing.assert_array_equal(iterate(kv, f, 1).coeffs, apply(kv, f).coeffs)

    @pytest.mark.parametrize("kv", KVS)
    def test_linear_is_fixed(self, kv):
        f = lambda x: 2 * x - 1  # noqa: E731
        for m in (1, 5, 40):
            np.testing.assert_allclose(iterate(kv, f, m)(X), 2 * X - 1, atol=1e-12)

    def test_linear_splines_are_projector(self):
        kv = uniform_knot_vector(5, 1)
        f = resolve("runge")
        np.testing.assert_allclose(iterate(kv, f, 2).coeffs, iterate(kv, f, 1).coeffs, atol=1e-15)
        np.testing.assert_allclose(iterate(kv, f, 9).coeffs, iterate(kv, f, 1).coeffs, atol=1e-15)

    @pytest.mark.parametrize("kv", KVS)
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_matrix_route_matches_resampling(self, kv, m):
        f = resolve("abs_kink")
        np.testing.assert_allclose(
            iterate(kv, f, m).coeffs, iterate_by_resampling(kv, f, m).coeffs, atol=1e-13
        )

    @pytest.mark.parametrize("kv", KVS)
    def test_consecutive_coefficients(self, kv):
        N = collocation_matrix(kv).entries
        C = iterate_coefficients(kv, resolve("sin_pi"), 12)
        for m in range(11):
            np.testing.assert_allclose(C[m + 1], N @ C[m], atol=1e-12)

    @pytest.mark.parametrize("kv", KVS)
    def test_endpoints_fixed(self, kv):
        f = resolve("power")
        for m in (1, 4, 17):
            s = iterate(kv, f, m)
            assert s(0.0) == pytest.approx(0.0, abs=1e-14)
            assert s(1.0) == pytest.approx(1.0, abs=1e-14)

    def test_bad_m(self):
        with pytest.raises(ValueError):
            iterate(uniform_knot_vector(3, 2), resolve("square"), 0)


class TestLimit:
    def test_examples(self):
        np.testing.assert_allclose(limit_operator(lambda x: x**2)(X), X)
        np.testing.assert_allclose(limit_operator(lambda x: 3 - 2 * x)(X), 3 - 2 * X)
        np.testing.assert_allclose(limit_operator(resolve("sin_pi"))(X), 0, atol=1e-15)

    def test_distance_linear_is_zero(self):
        kv = uniform_knot_vector(4, 3)
        assert np.all(iterate_distances(kv, lambda x: 4 * x + 1, 10) <= 1e-13)

    def test_bernstein_square_distance(self):
        # B_3(x^2) = x^2 + x(1-x)/3, hence S^m x^2 - x = (2/3)^m (x^2 - x); oracle below
        # uses explicit binomial matrix powers, not the library collocation matrix
        k = 3
        P = np.array([[comb(k, j) * (i / k) ** j * (1 - i / k) ** (k - j) for j in range(k + 1)] for i in range(k + 1)])
        xi = np.arange(k + 1) / k
        grid = np.linspace(0, 1, 10_001)
        V = np.column_stack([bernstein_poly(k, j, grid) for j in range(k + 1)])
        c = xi**2
        kv = bernstein_knot_vector(3)
        d = iterate_distances(kv, resolve("square"), 20)
        for m in range(1, 21):
            cm = np.linalg.matrix_power(P, m - 1) @ c
            oracle = np.max(np.abs(V @ cm - grid))
            assert d[m - 1] == pytest.approx(oracle, rel=1e-12, abs=1e-16)
            assert d[m - 1] == pytest.approx((2 / 3) ** m / 4, rel=1e-10)
        assert np.all(np.diff(d) <= 0)

    @pytest.mark.parametrize("name", ["square", "abs_kink", "sqrt", "sin_pi", "runge", "power", "cube"])
    def test_distance_tends_to_zero(self, name):
        kv = uniform_knot_vector(3, 2)
        f = resolve(name)
        assert iterate_distance(kv, f, 400) < 1e-3 * max(iterate_distance(kv, f, 1), 1e-300)


class TestRegistry:
    def test_parse(self):
        assert parse_function("abs_kink:0.3").parameters == (0.3,)
        assert str(parse_function("power:2.5")) == "power:2.5"
        with pytest.raises(KeyError):
            parse_function("nope")

    def test_nullspace_requires_kv(self):
        with pytest.raises(ValueError):
            resolve("nullspace")

    def test_parametrized(self):
        f = resolve("abs_kink:0.25")
        assert f(0.0) == 0.25
        with pytest.raises(ValueError):
            resolve("square:1,2")
