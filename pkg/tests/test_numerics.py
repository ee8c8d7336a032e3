"""Special functions, quadrature, and linear algebra against independent oracles."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circbound.numerics import (
    DomainError,
    QuadratureError,
    QuadratureSpec,
    SingularMatrixError,
    bessel_i0,
    bessel_i1,
    dirichlet_kernel,
    integrate,
    normal_tail,
    regularized_lower_gamma,
    spd_solve,
    valley_fill,
)

from conftest import bessel_series_oracle, dirichlet_sum_oracle


class TestBessel:
    def test_i0_at_zero(self):
        assert bessel_i0(0.0) == 1.0

    def test_i1_at_zero(self):
        assert bessel_i1(0.0) == 0.0

    @pytest.mark.parametrize("x", [0.5, 1.0, 5.0, 10.0, 14.9, 15.0, 20.0, 100.0, 500.0])
    def test_i0_vs_series_oracle(self, x):
        assert bessel_i0(x) == pytest.approx(bessel_series_oracle(x, 0), rel=1e-12)

    @pytest.mark.parametrize("x", [0.5, 1.0, 5.0, 10.0, 14.9, 15.0, 20.0, 100.0, 500.0])
    def test_i1_vs_series_oracle(self, x):
        assert bessel_i1(x) == pytest.approx(bessel_series_oracle(x, 1), rel=1e-12)

    @pytest.mark.parametrize("x", [1e-6, 1e-5, 1e-4])
    def test_i1_small_argument_limit(self, x):
        assert bessel_i1(x) == pytest.approx(x / 2.0, rel=1e-8)

    @pytest.mark.parametrize("bad", [-1.0, -1e-12, math.nan, math.inf, 500.001])
    def test_domain_errors(self, bad):
        with pytest.raises(DomainError):
            bessel_i0(bad)
        with pytest.raises(DomainError):
            bessel_i1(bad)

    @given(st.floats(min_value=1e-3, max_value=100.0))
    @settings(max_examples=200, deadline=None)
    def test_ratio_in_unit_interval(self, x):
        r = bessel_i1(x) / bessel_i0(x)
        assert 0.0 < r < 1.0

    def test_ratio_strictly_increasing(self):
        xs = np.linspace(0.01, 100.0, 500)
        ratios = [bessel_i1(x) / bessel_i0(x) for x in xs]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))


class TestDirichletKernel:
    def test_at_zero(self):
        assert dirichlet_kernel(0.0, 20) == 20.0

    def test_at_pi_even_count(self):
        assert dirichlet_kernel(math.pi, 20) == pytest.approx(0.0, abs=1e-12)

    def test_closed_form_vs_direct_sum(self):
        h = 0.3 * math.pi
        assert dirichlet_kernel(h, 20) == pytest.approx(
            dirichlet_sum_oracle(h, 20), abs=1e-12
        )

    @given(
        st.floats(min_value=-2.0 * math.pi, max_value=2.0 * math.pi),
        st.integers(min_value=1, max_value=200),
    )
    @settings(max_examples=1000, deadline=None)
    def test_matches_direct_sum_everywhere(self, h, K):
        assert dirichlet_kernel(h, K) == pytest.approx(
            dirichlet_sum_oracle(h, K), abs=1e-10
        )

    @given(
        st.floats(min_value=0.0, max_value=2.0 * math.pi),
        st.integers(min_value=1, max_value=100),
    )
    @settings(max_examples=300, deadline=None)
    def test_even_in_offset(self, h, K):
        assert dirichlet_kernel(h, K) == pytest.approx(
            dirichlet_kernel(-h, K), abs=1e-10
        )

    @given(
        st.floats(min_value=-math.pi, max_value=math.pi),
        st.integers(min_value=1, max_value=100),
    )
    @settings(max_examples=300, deadline=None)
    def test_two_pi_periodic(self, h, K):
        assert dirichlet_kernel(h + 2.0 * math.pi, K) == pytest.approx(
            dirichlet_kernel(h, K), abs=1e-8
        )

    def test_singular_points_fall_back_to_sum(self):
        # exact multiples of 2 pi are 0/0 in the closed form
        for m in (1, 2):
            assert dirichlet_kernel(2.0 * math.pi * m, 17) == pytest.approx(17.0)

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            dirichlet_kernel(math.nan, 5)
        with pytest.raises(DomainError):
            dirichlet_kernel(0.5, 0)


class TestIntegrate:
    def test_constant(self):
        got = integrate(lambda t: np.full_like(t, 3.0), -1.0, 2.5)
        assert got == pytest.approx(10.5, rel=1e-14)

    def test_cosine_quarter_period(self):
        got = integrate(np.cos, 0.0, math.pi / 2.0)
        assert got == pytest.approx(1.0, rel=1e-10)

    def test_empty_interval(self):
        assert integrate(np.cos, 1.0, 1.0) == 0.0

    def test_reversed_interval_rejected(self):
        with pytest.raises(DomainError):
            integrate(np.cos, 1.0, 0.0)

    def test_nonconvergence_signalled(self):
        spec = QuadratureSpec(node_count=16, rel_tol=1e-10)
        with pytest.raises(QuadratureError):
            integrate(lambda t: np.cos(5.0e4 * t), 0.0, 1.0, spec)

    def test_node_doubling_stability(self):
        coarse = integrate(lambda t: np.exp(np.cos(t)), -math.pi, math.pi,
                           QuadratureSpec(node_count=16))
        fine = integrate(lambda t: np.exp(np.cos(t)), -math.pi, math.pi,
                         QuadratureSpec(node_count=64))
        assert coarse == pytest.approx(fine, rel=1e-10)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(node_count=8)
        with pytest.raises(ValueError):
            QuadratureSpec(rel_tol=1e-3)


class TestNormalTail:
    def test_at_zero(self):
        assert normal_tail(0.0) == 0.5

    def test_far_tail(self):
        assert normal_tail(40.0) == pytest.approx(0.0, abs=1e-12)

    def test_vs_density_quadrature(self):
        density = lambda t: np.exp(-0.5 * t**2) / math.sqrt(2.0 * math.pi)
        want = integrate(density, 1.0, 40.0)
        assert normal_tail(1.0) == pytest.approx(want, rel=1e-9)

    def test_symmetry(self):
        for z in (0.3, 1.7, 2.5):
            assert normal_tail(z) + normal_tail(-z) == pytest.approx(1.0, abs=1e-14)


class TestRegularizedLowerGamma:
    def test_at_zero(self):
        assert regularized_lower_gamma(1.5, 0.0) == 0.0

    def test_total_mass(self):
        assert regularized_lower_gamma(1.5, 60.0) == pytest.approx(1.0, abs=1e-10)

    def test_vs_quadrature_oracle(self):
        from scipy.integrate import quad

        # Gamma(1.5) = sqrt(pi)/2 exactly; adaptive quadrature handles the
        # integrable sqrt singularity at the origin
        val, _ = quad(lambda t: math.exp(-t) * math.sqrt(t), 0.0, 1.0,
                      epsabs=1e-13, epsrel=1e-12)
        want = val / (math.sqrt(math.pi) / 2.0)
        assert regularized_lower_gamma(1.5, 1.0) == pytest.approx(want, rel=1e-9)

    def test_monotone_in_upper_limit(self):
        zs = np.linspace(0.0, 30.0, 200)
        vals = [regularized_lower_gamma(1.5, z) for z in zs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            regularized_lower_gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            regularized_lower_gamma(1.5, -0.1)


class TestSpdSolve:
    def test_identity(self):
        v = np.array([1.0, -2.0, 3.0])
        assert np.allclose(spd_solve(np.eye(3), v), v)

    def test_scaled_identity(self):
        v = np.array([4.0, 8.0])
        assert np.allclose(spd_solve(2.0 * np.eye(2), v), v / 2.0)

    def test_random_spd_residual(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((5, 5))
        m = a @ a.T + 5.0 * np.eye(5)
        v = rng.standard_normal(5)
        x = spd_solve(m, v)
        assert np.linalg.norm(m @ x - v) <= 1e-8 * np.linalg.norm(v)

    def test_extreme_diagonal_scaling(self):
        # healthy matrices whose diagonal spans hundreds of orders of
        # magnitude must still solve accurately
        d = np.array([1e-150, 1.0, 1e150])
        m = np.diag(d)
        m[0, 1] = m[1, 0] = 1e-76
        v = np.array([1e-150, 1.0, 1e150])
        x = spd_solve(m, v)
        assert np.linalg.norm(m @ x - v) <= 1e-8 * np.linalg.norm(v)

    def test_singular_matrix_reports_index(self):
        m = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(SingularMatrixError) as exc:
            spd_solve(m, np.array([1.0, 1.0]))
        assert exc.value.index == 1

    def test_asymmetric_rejected(self):
        m = np.array([[1.0, 0.5], [0.3, 1.0]])
        with pytest.raises(DomainError):
            spd_solve(m, np.array([1.0, 1.0]))

    def test_nonpositive_diagonal_rejected(self):
        m = np.array([[1.0, 0.0], [0.0, -1.0]])
        with pytest.raises(SingularMatrixError):
            spd_solve(m, np.array([1.0, 1.0]))


class TestValleyFill:
    def test_hand_example(self):
        assert valley_fill(np.array([3.0, 1.0, 2.0, 0.0])).tolist() == [3.0, 2.0, 2.0, 0.0]

    def test_non_increasing_fixed_point(self):
        f = np.array([5.0, 4.0, 4.0, 1.0])
        assert valley_fill(f).tolist() == f.tolist()

    def test_constant_fixed_point(self):
        f = np.full(7, 2.5)
        assert valley_fill(f).tolist() == f.tolist()

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            valley_fill(np.array([]))

    @given(
        st.lists(
            st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
            min_size=1,
            max_size=50,
        )
    )
    @settings(max_examples=300, deadline=None)
    def test_properties(self, values):
        f = np.array(values)
        out = valley_fill(f)
        assert np.all(np.diff(out) <= 0.0)          # non-increasing
        assert np.all(out >= f)                     # pointwise dominates input
        assert np.allclose(valley_fill(out), out)   # idempotent
