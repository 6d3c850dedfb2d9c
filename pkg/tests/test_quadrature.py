import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import polynomial as P

from nlw_strichartz.quadrature import (barycentric_weights, differentiation_matrix,
                                       gauss_legendre, integration_matrix,
                                       interpolation_matrix)


@pytest.mark.parametrize("n", [4, 9, 32])
def test_gauss_rule_exact_to_degree_2n_minus_1(n):
    a, b = -0.3, 2.1
    x, w = gauss_legendre(n, a, b)
    coef = np.arange(1, 2 * n + 1, dtype=float) / (2 * n)
    exact = P.polyval(b, P.polyint(coef)) - P.polyval(a, P.polyint(coef))
    assert np.isclose(w @ P.polyval(x, coef), exact, rtol=1e-13)


def test_integration_matrix_on_monomials():
    n = 20
    a, b = -np.pi / 2, np.pi / 2
    x, _ = gauss_legendre(n, a, b)
    q = integration_matrix(n, a, b)
    for k in range(n):
        expected = (x ** (k + 1) - a ** (k + 1)) / (k + 1)
        assert np.allclose(q @ x**k, expected, atol=1e-12 * max(1.0, abs(a) ** (k + 1)))


def test_differentiation_matrix_is_exact_for_polynomials():
    n = 16
    x, _ = gauss_legendre(n)
    d = differentiation_matrix(x, barycentric_weights(n))
    coef = np.linspace(1.0, -2.0, n)
    assert np.allclose(d @ P.polyval(x, coef), P.polyval(x, P.polyder(coef)), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=12))
def test_interpolation_reproduces_polynomials(targets):
    n = 12
    x, _ = gauss_legendre(n)
    coef = np.cos(np.arange(n))
    mat = interpolation_matrix(x, barycentric_weights(n), targets)
    assert np.allclose(mat @ P.polyval(x, coef), P.polyval(np.array(targets), coef), atol=1e-12)


def test_interpolation_at_nodes_is_identity():
    n = 10
    x, _ = gauss_legendre(n)
    assert np.array_equal(interpolation_matrix(x, barycentric_weights(n), x), np.eye(n))
