import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catqng.phase_space import (
    TWO_OVER_PI,
    CatParams,
    Moments,
    ParameterError,
    PhasePoint,
    cat_wigner,
    convolve_wigner_quadrature,
    evolved_moments,
    initial_moments,
    loss_convolution,
    lossy_cat_wigner,
    mean_field,
)

alphas = st.floats(0.05, 2.0)
xis = st.sampled_from([-1.0, 0.0, 1.0, 0.5, -2.0])
epsilons = st.floats(0.0, 1.0)
coords = st.floats(-3.0, 3.0)


def vacuum_w(lam):
    return TWO_OVER_PI * np.exp(-2.0 * np.abs(lam) ** 2)


class TestCatParams:
    def test_odd_even_constructors(self):
        assert CatParams.odd(1.0) == CatParams(1.0, -1.0)
        assert CatParams.even(1.0) == CatParams(1.0, 1.0)

    def test_norm(self):
        cat = CatParams(1.0, -1.0)
        assert cat.norm_sq == pytest.approx(2.0 - 2.0 * math.exp(-2.0), rel=1e-15)
        assert cat.norm == pytest.approx(math.sqrt(cat.norm_sq))

    def test_degenerate_odd_cat_rejected(self):
        with pytest.raises(ParameterError):
            CatParams(0.0, -1.0)
        with pytest.raises(ParameterError):
            CatParams(1e-7, -1.0)

    @pytest.mark.parametrize("alpha,xi", [(math.nan, 1.0), (1.0, math.inf)])
    def test_non_finite_rejected(self, alpha, xi):
        with pytest.raises(ParameterError):
            CatParams(alpha, xi)

    def test_phase_point(self):
        assert complex(PhasePoint(0.3, -0.2)) == 0.3 - 0.2j


class TestWigner:
    def test_odd_origin(self):
        assert cat_wigner(CatParams(1.0, -1.0), 0.0) == pytest.approx(-TWO_OVER_PI, abs=1e-15)

    def test_even_origin(self):
        assert cat_wigner(CatParams(1.0, 1.0), 0.0) == pytest.approx(TWO_OVER_PI, abs=1e-15)

    @pytest.mark.parametrize("lam", [0.0, 0.4 - 0.1j, 1.2j, PhasePoint(-0.5, 0.7)])
    def test_alpha_zero_is_vacuum(self, lam):
        expected = vacuum_w(complex(lam))
        assert cat_wigner(CatParams(0.0, 1.0), lam) == pytest.approx(expected, abs=1e-15)

    def test_even_cat_value_matches_fock_reference(self):
        # displaced-parity evaluation in a 40-level Fock space
        assert cat_wigner(CatParams(1.0, 1.0), 0.3 + 0.2j) == pytest.approx(0.4071703163032132, abs=1e-12)

    def test_lossy_odd_cat_matches_quadrature_reference(self):
        # direct 2D quadrature of the loss kernel against the pure-state Wigner function
        assert lossy_cat_wigner(CatParams(1.0, -1.0), 0.7, 0.0) == pytest.approx(0.22250917848480362, abs=1e-12)

    def test_lossy_even_cat_matches_fock_reference(self):
        # Kraus loss plus displaced parity in a 60-level Fock space
        value = lossy_cat_wigner(CatParams(1.5, 1.0), 0.3, 0.5j)
        assert value == pytest.approx(-0.06353629183712887, abs=1e-12)

    @pytest.mark.parametrize("cat", [CatParams(1.0, -1.0), CatParams(1.7, 1.0), CatParams(0.4, 0.3)])
    def test_full_loss_gives_vacuum(self, cat):
        lam = np.array([0.0, 0.5 + 0.5j, -1.0j])
        np.testing.assert_allclose(lossy_cat_wigner(cat, 1.0, lam), vacuum_w(lam), atol=1e-15)

    def test_no_loss_equals_pure(self):
        cat = CatParams(1.3, -1.0)
        lam = np.linspace(-2, 2, 7)[:, None] + 1j * np.linspace(-2, 2, 5)
        np.testing.assert_array_equal(lossy_cat_wigner(cat, 0.0, lam), cat_wigner(cat, lam))

    def test_vectorised_shape(self):
        lam = np.zeros((3, 4), dtype=complex)
        assert lossy_cat_wigner(CatParams(1.0, 1.0), 0.2, lam).shape == (3, 4)

    @pytest.mark.parametrize("eps", [-0.1, 1.1, math.nan])
    def test_bad_epsilon(self, eps):
        with pytest.raises(ParameterError):
            lossy_cat_wigner(CatParams(1.0, 1.0), eps, 0.0)

    @pytest.mark.parametrize("cat,eps", [(CatParams(1.0, -1.0), 0.0), (CatParams(1.5, 1.0), 0.4),
                                         (CatParams(0.7, 0.0), 0.9)])
    def test_normalisation(self, cat, eps):
        x = np.linspace(-8, 8, 641)
        grid = x[:, None] + 1j * x[None, :]
        h = x[1] - x[0]
        assert np.sum(lossy_cat_wigner(cat, eps, grid)) * h * h == pytest.approx(1.0, abs=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(alphas, xis, epsilons, coords, coords)
    def test_bounded_by_two_over_pi(self, alpha, xi, eps, x, p):
        w = lossy_cat_wigner(CatParams(alpha, xi), eps, complex(x, p))
        assert abs(w) <= TWO_OVER_PI * (1 + 1e-12)

    @settings(max_examples=60, deadline=None)
    @given(alphas, epsilons, coords, coords)
    def test_reflection_symmetry(self, alpha, eps, x, p):
        for xi in (-1.0, 1.0):
            cat = CatParams(alpha, xi)
            w = lossy_cat_wigner(cat, eps, complex(x, p))
            assert lossy_cat_wigner(cat, eps, complex(-x, p)) == pytest.approx(w, abs=1e-14)
            assert lossy_cat_wigner(cat, eps, complex(x, -p)) == pytest.approx(w, abs=1e-14)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.1, 2.0), st.sampled_from([-1.0, 0.0, 1.0]), st.floats(0.02, 1.0),
           st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
    def test_closed_form_matches_quadrature(self, alpha, xi, eps, x, p):
        cat = CatParams(alpha, xi)
        lam = complex(x, p)
        assert abs(lossy_cat_wigner(cat, eps, lam) - convolve_wigner_quadrature(cat, eps, lam)) < 1e-8


class TestLossConvolution:
    def test_vacuum_fixed_point(self):
        assert convolve_wigner_quadrature(CatParams(0.0, 1.0), 0.5, 0.0) == pytest.approx(TWO_OVER_PI, abs=1e-12)

    def test_requires_positive_loss(self):
        with pytest.raises(ParameterError):
            loss_convolution(vacuum_w, 0.0, 0.0, half_width=6.0)

    @settings(max_examples=10, deadline=None)
    @given(st.floats(0.2, 1.8), st.sampled_from([-1.0, 1.0]), st.floats(0.05, 0.9), st.floats(0.05, 0.9),
           st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
    def test_semigroup(self, alpha, xi, e1, e2, x, p):
        cat = CatParams(alpha, xi)
        lam = complex(x, p)
        twice = loss_convolution(lambda z: lossy_cat_wigner(cat, e1, z), e2, lam,
                                 half_width=alpha + 6.0, max_frequency=4.0 * alpha)
        once = lossy_cat_wigner(cat, 1.0 - (1.0 - e1) * (1.0 - e2), lam)
        assert abs(twice - once) < 1e-8


class TestMoments:
    def test_vacuum(self):
        assert initial_moments(CatParams(0.0, 1.0)) == Moments(0.0, 0.0)

    def test_odd_cat(self):
        m = initial_moments(CatParams(1.0, -1.0))
        assert m.nbar == pytest.approx(1.0 / math.tanh(1.0), rel=1e-14)
        assert m.a2 == pytest.approx(1.0, rel=1e-15)

    def test_even_cat(self):
        assert initial_moments(CatParams(1.0, 1.0)).nbar == pytest.approx(math.tanh(1.0), rel=1e-14)

    def test_evolution(self):
        m0 = Moments(1.0 / math.tanh(1.0), 1.0)
        assert evolved_moments(m0, 0.0) == m0
        assert evolved_moments(m0, 1.0) == Moments(0.0, 0.0)
        m = evolved_moments(m0, 0.4)
        assert m.nbar == pytest.approx(0.6 / math.tanh(1.0), rel=1e-15)
        assert m.a2 == pytest.approx(0.6, rel=1e-15)

    def test_mean_field_vanishes_for_parity_cats(self):
        assert mean_field(CatParams(1.2, 1.0)) == pytest.approx(0.0, abs=1e-15)
        assert mean_field(CatParams(1.2, 0.0), 0.36) == pytest.approx(-0.8 * 1.2, rel=1e-14)

    @settings(max_examples=50, deadline=None)
    @given(alphas, xis, epsilons)
    def test_moments_physical(self, alpha, xi, eps):
        m = evolved_moments(initial_moments(CatParams(alpha, xi)), eps)
        # Cauchy-Schwarz: |<a^2>| <= <a^dag a> + 1/2 keeps the quadrature variances positive
        assert m.nbar >= 0
        assert abs(m.a2) <= m.nbar + 0.5
