import numpy as np
import pytest
from scipy.integrate import dblquad

from nlw_strichartz.coords import HALF_PI, PenrosePoint
from nlw_strichartz.duhamel import (SourceField, antibox_cubic, goursat_solve, theta_source,
                                    wtheta_exact)
from nlw_strichartz.errors import InvariantError
from nlw_strichartz.penrose import theta_field


def source(theta, y, z):
    return np.sin(z - y) * np.cos(y + z - theta) ** 3


def test_closed_form_against_nested_quadrature():
    value = wtheta_exact(0.0, PenrosePoint(0.0, HALF_PI))
    assert np.isclose(value, 3 * np.pi / 8, rtol=1e-14)
    ref, _ = dblquad(lambda z, y: source(0.0, y, z), -HALF_PI, 0.0, -HALF_PI, HALF_PI,
                     epsabs=1e-13, epsrel=1e-13)
    assert np.isclose(value, ref, rtol=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.9, np.pi / 2])
def test_closed_form_at_random_points(theta):
    rng = np.random.default_rng(3)
    for xm, xp in rng.uniform(-HALF_PI, HALF_PI, (4, 2)):
        ref, _ = dblquad(lambda z, y: source(theta, y, z), -HALF_PI, xm, -HALF_PI, xp,
                         epsabs=1e-13, epsrel=1e-12)
        assert np.isclose(wtheta_exact(theta, PenrosePoint(xm, xp)), ref, atol=1e-12)


@pytest.mark.parametrize("n", [96, 192])
def test_goursat_matches_closed_form(n):
    theta = 0.7
    w = goursat_solve(theta_source(theta, n))
    xm, xp = w.grid.mesh
    exact = wtheta_exact(theta, PenrosePoint(xm, xp))
    # the swap-odd projection of the bare integral is what the solver returns
    exact = 0.5 * (exact - exact.T)
    assert np.abs(w.values - exact).max() < 1e-13


def test_solution_satisfies_equation_and_boundary_conditions():
    n = 48
    s = theta_source(0.3, n)
    w = goursat_solve(s)
    d = w.grid.differentiation
    assert np.allclose(d @ w.values @ d.T, s.values, atol=1e-9)
    edge = w.grid.interpolation(np.array([-HALF_PI]))
    assert np.abs(edge @ w.values).max() < 1e-13
    assert np.abs(np.diag(w.values)).max() < 1e-15


def test_antibox_cubic_uses_the_cubic_source():
    f = theta_field(1.2, 64)
    assert np.allclose(antibox_cubic(f).values, goursat_solve(theta_source(1.2, 64)).values,
                       atol=1e-13)


def test_source_must_be_swap_odd():
    with pytest.raises(InvariantError):
        SourceField(16, np.ones((16, 16)))
