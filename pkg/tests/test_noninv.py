import numpy as np
import pytest

from nlw_strichartz.errors import AccuracyError, DomainError
from nlw_strichartz.noninv import (FlowSnapshot, boost_derivative_radial,
                                   boost_derivative_stencil, dt_norm_fd, dt_norm_formula,
                                   inverse_half_laplacian, snapshot)
from nlw_strichartz.picard import SolverConfig, solve
from nlw_strichartz.sobolev import rational_profile, zero_profile


def field(theta, sigma, delta, anchor="past"):
    return solve(None, SolverConfig(sigma=sigma, delta=delta, theta=theta, anchor=anchor)).field


def rel(a, b):
    return abs(a - b) / abs(a)


def test_formula_matches_finite_difference_at_time_zero():
    f = field(np.pi / 4, 1, 0.3)
    formula = dt_norm_formula(snapshot(f, 0.0), 1)
    assert rel(formula, dt_norm_fd(np.pi / 4, 1, 0.3, t0=0.0, field=f)) < 1e-4


@pytest.mark.parametrize("theta", [0.0, np.pi / 2])
def test_formula_matches_finite_difference_later(theta):
    f = field(theta, -1, 0.2)
    formula = dt_norm_formula(snapshot(f, 0.25), -1)
    assert rel(formula, dt_norm_fd(theta, -1, 0.2, t0=0.25, field=f)) < 1e-4


def test_zero_velocity_and_linear_flow():
    s = FlowSnapshot(0.0, rational_profile(1), zero_profile())
    assert dt_norm_formula(s, 1) == 0.0
    f = field(0.7, 1, 0.3)
    assert dt_norm_formula(snapshot(f, 0.1), 0) == 0.0
    linear = field(0.7, 0, 0.3)
    assert abs(dt_norm_fd(0.7, 0, 0.3, t0=0.1, field=linear)) < 1e-10


def test_theta_zero_time_zero_data_are_stationary():
    f = field(0.0, 1, 0.3, anchor="zero")
    assert abs(dt_norm_formula(snapshot(f, 0.0), 1)) < 1e-8
    assert abs(dt_norm_fd(0.0, 1, 0.3, t0=0.0, field=f)) < 1e-8


def test_odd_in_sigma():
    s = snapshot(field(np.pi / 4, 1, 0.3), 0.2)
    assert dt_norm_formula(s, -1) == -dt_norm_formula(s, 1)
    plus = dt_norm_fd(np.pi / 4, 1, 0.3, t0=0.0, anchor="zero")
    minus = dt_norm_fd(np.pi / 4, -1, 0.3, t0=0.0, anchor="zero")
    assert rel(plus, -minus) < 1e-6


def test_explicit_data_value():
    # u = eps f0, u_t = eps f0^3 gives 2 eps^4 ||f0^3||^2 in H^{-1/2},
    # and f0^3 = 8/(1+r^2)^3 has transform 2 pi^2 (1+rho) e^{-rho}, so
    # ||f0^3||^2 = 2 pi^2 * int rho (1+rho)^2 e^{-2 rho} = 9 pi^2 / 4
    eps = 0.1
    f0 = rational_profile(1)
    s = FlowSnapshot(0.0, f0.scaled(eps), f0.power(3).scaled(eps))
    assert np.isclose(dt_norm_formula(s, 1), 2 * eps**4 * 9 * np.pi**2 / 4, rtol=1e-10)


def test_inverse_half_laplacian_closed_form():
    r = np.array([0.0, 0.3, 1.0, 4.0, 9.0])
    expected = 1 / (1 + r**2) + 2 / (1 + r**2) ** 2
    assert np.allclose(inverse_half_laplacian(rational_profile(3), r), expected, atol=1e-9)


def test_boost_derivative_vanishes_for_radial_data():
    s = snapshot(field(0.3, 1, 0.3), 0.0)
    assert boost_derivative_radial(s, 1) == 0.0
    assert abs(boost_derivative_stencil(s, 1)) < 1e-10
    assert boost_derivative_stencil(s, 0) == 0.0


def test_step_validation():
    f = field(0.3, 1, 0.2)
    with pytest.raises(DomainError):
        dt_norm_fd(0.3, 1, 0.2, h=0.0, field=f)
    with pytest.raises(AccuracyError):
        dt_norm_fd(0.3, 1, 0.2, h=1e-9, field=f)
