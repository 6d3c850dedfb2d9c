import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import k0

from nlw_strichartz.errors import AccuracyError, DomainError
from nlw_strichartz.sobolev import (DEFAULT_GRID, SPHERE_VOLUME, DataPair, FrequencyGrid,
                                    RadialProfile, gaussian_profile, load_profile,
                                    pair_inner, pair_norm_sq, profile_from_samples,
                                    radial_fourier, rational_profile, save_profile,
                                    sobolev_inner, sobolev_norm_sq, tail_coefficients,
                                    theta_pair, unit_theta_pair, zero_pair, zero_profile)

RHO = np.array([0.05, 0.4, 1.0, 3.7, 9.0])


def fourier_by_quad(f, rho):
    """Independent oracle: QUADPACK's Fourier-integral routine (QAWF)."""
    return np.array([4 * np.pi / p * quad(lambda r: r * f(r), 0, np.inf, weight="sin",
                                          wvar=p, limlst=200)[0] for p in rho])


EXACT = {
    1: lambda p: 4 * np.pi**2 * np.exp(-p) / p,
    2: lambda p: 4 * np.pi**2 * np.exp(-p),
    3: lambda p: 2 * np.pi**2 * (1 + p) * np.exp(-p),
}


@pytest.mark.parametrize("k", [1, 2, 3])
def test_rational_transforms(k):
    f = rational_profile(k)
    assert np.allclose(radial_fourier(f, RHO), EXACT[k](RHO), rtol=1e-12)
    # QUADPACK agrees to its own (lower) accuracy
    assert np.allclose(radial_fourier(f, RHO), fourier_by_quad(f, RHO), rtol=1e-6)


def test_shifted_rational_exercises_remainder():
    # 1/(a^2 + r^2) has transform 2 pi^2 exp(-a rho)/rho; for a != 1 the
    # tail model is inexact and the panel integral carries the remainder
    a = np.sqrt(2.0)
    f = RadialProfile(lambda r: 1.0 / (a * a + r * r), "rational")
    assert np.allclose(radial_fourier(f, RHO), 2 * np.pi**2 * np.exp(-a * RHO) / RHO,
                       rtol=1e-9, atol=1e-13)


def test_odd_large_r_terms_match_quadpack():
    # slices of nonlinear fields decay with odd powers of 1/r
    f = RadialProfile(lambda r: 1.0 / (1.0 + r * r) ** 1.5, "rational")
    assert np.allclose(radial_fourier(f, RHO), fourier_by_quad(f, RHO), rtol=1e-6)
    # closed form 4 pi K0(rho)
    assert np.allclose(radial_fourier(f, RHO), 4 * np.pi * k0(RHO), rtol=1e-9)


def test_gaussian_transform():
    f = gaussian_profile(1.0, 1.0)
    assert np.allclose(radial_fourier(f, RHO), np.pi**1.5 * np.exp(-RHO**2 / 4), atol=1e-12)


def test_tail_coefficients_of_known_expansion():
    # 2/(1+r^2) = 2 r^-2 - 2 r^-4 + ...
    coef = tail_coefficients(rational_profile(1))
    assert np.allclose(coef, [2.0, 0.0, -2.0, 0.0, 2.0], atol=1e-6)


@pytest.mark.parametrize("theta", [0.0, np.pi / 3, np.pi / 2, 2.0])
def test_theta_pair_norm(theta):
    assert np.isclose(pair_norm_sq(theta_pair(theta)), SPHERE_VOLUME, rtol=1e-10)


def test_unit_theta_pair_has_norm_delta():
    assert np.isclose(pair_norm_sq(unit_theta_pair(0.7, 0.3)), 0.09, rtol=1e-10)


def test_component_norms():
    assert np.isclose(sobolev_norm_sq(rational_profile(1), 0.5), SPHERE_VOLUME, rtol=1e-10)
    assert np.isclose(sobolev_norm_sq(rational_profile(2), -0.5), SPHERE_VOLUME, rtol=1e-10)
    # (1+r^2)^{-3/2} has H^{1/2} norm^2 = 8/3 (from 4 pi K0)
    f = RadialProfile(lambda r: (1.0 + r * r) ** -1.5, "rational")
    assert np.isclose(sobolev_norm_sq(f, 0.5), 8.0 / 3.0, rtol=1e-10)


def test_square_multiplies_transform_by_rho():
    f0 = rational_profile(1)
    big = radial_fourier(f0)
    mask = np.abs(big) > 1e-12 * np.abs(big).max()
    lhs = radial_fourier(f0.power(2))[mask]
    rhs = (DEFAULT_GRID.nodes * big)[mask]
    assert np.allclose(lhs, rhs, rtol=1e-8)


def test_grid_refinement_is_stable():
    d = theta_pair(0.4)
    assert np.isclose(pair_norm_sq(d, DEFAULT_GRID.refined()), pair_norm_sq(d), rtol=1e-11)


@settings(max_examples=10, deadline=None)
@given(st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi), st.floats(-3, 3))
def test_pair_inner_is_symmetric_bilinear(ta, tb, c):
    a, b = theta_pair(ta), theta_pair(tb)
    ab = pair_inner(a, b)
    assert np.isclose(ab, pair_inner(b, a), rtol=1e-12, atol=1e-12)
    # for this family the inner product is |S^3| cos(ta - tb)
    assert np.isclose(ab, SPHERE_VOLUME * np.cos(ta - tb), atol=1e-9)
    assert np.isclose(pair_inner(a.scaled(c), b), c * ab, atol=1e-9)


def test_zero_objects():
    assert pair_norm_sq(zero_pair()) == 0.0
    assert sobolev_inner(zero_profile(), rational_profile(1), 0.5) == 0.0
    assert np.all(radial_fourier(zero_profile()) == 0.0)


def test_sample_round_trip(tmp_path):
    r = np.geomspace(1e-3, 200.0, 400)
    f0 = rational_profile(1)
    path = tmp_path / "f0.txt"
    save_profile(path, f0, r)
    g = load_profile(path)
    x = np.array([0.0, 0.5, 3.0, 50.0, 400.0])
    assert np.allclose(g(x), f0(x), rtol=1e-5, atol=1e-7)
    assert np.isclose(sobolev_norm_sq(g, 0.5), SPHERE_VOLUME, rtol=1e-4)


def test_errors():
    with pytest.raises(DomainError):
        RadialProfile(np.cos, "bogus")
    with pytest.raises(DomainError):
        RadialProfile(np.cos, "compact")
    with pytest.raises(DomainError):
        sobolev_inner(rational_profile(1), rational_profile(1), 0.3)
    with pytest.raises(DomainError):
        radial_fourier(rational_profile(1), np.array([0.0, 1.0]))
    with pytest.raises(DomainError):
        profile_from_samples([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(AccuracyError):
        radial_fourier(rational_profile(1), tol=1e-30, refinements=0)


def test_frequency_grid_integrates_exponential():
    g = FrequencyGrid()
    assert np.isclose(np.sum(g.weights * np.exp(-g.nodes)), 1.0, rtol=1e-12)


def test_profile_arithmetic():
    f = rational_profile(1) + gaussian_profile(2.0)
    x = np.array([0.0, 1.0, 2.0])
    assert np.allclose(f(x), 2 / (1 + x**2) + 2 * np.exp(-x**2))
    assert f.decay == "rational"
    d = DataPair(rational_profile(1), zero_profile()) - theta_pair(0.0)
    assert pair_norm_sq(d) < 1e-20
