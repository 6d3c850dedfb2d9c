"""Gauss-Legendre machinery on an interval: nodes, spectral integration,
differentiation and barycentric interpolation matrices."""

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre


@lru_cache(maxsize=32)
def _reference(n):
    x, w = legendre.leggauss(n)
    # barycentric weights of the Legendre nodes, up to a common factor
    bw = (-1.0) ** np.arange(n) * np.sqrt((1.0 - x**2) * w)
    return x, w, bw


def gauss_legendre(n, a=-1.0, b=1.0):
    """Return ``(nodes, weights)`` of the n-point Gauss-Legendre rule on [a, b]."""
    x, w, _ = _reference(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@lru_cache(maxsize=32)
def _integration_reference(n):
    x, w, _ = _reference(n)
    vander = legendre.legvander(x, n - 1)
    # Legendre coefficients of the Lagrange basis, exact by Gauss quadrature
    coef = (vander * w[:, None]).T * ((2 * np.arange(n) + 1) / 2.0)[:, None]
    prim = np.zeros((n, n))
    for m in range(n):
        e = np.zeros(n)
        e[m] = 1.0
        prim[:, m] = legendre.legval(x, legendre.legint(e, lbnd=-1))
    q = prim @ coef
    q.setflags(write=False)
    return q


def integration_matrix(n, a=-1.0, b=1.0):
    """Matrix Q with ``(Q @ f)[i] ~ integral of f from a to x_i``.

    Integrates the degree n-1 interpolant of the nodal values exactly, so the
    result is spectrally accurate and vanishes identically at the lower limit.
    """
    return 0.5 * (b - a) * _integration_reference(n)


def differentiation_matrix(nodes, bary):
    """Spectral differentiation matrix for the interpolant on ``nodes``."""
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    d = (bary[None, :] / bary[:, None]) / diff
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


def interpolation_matrix(nodes, bary, targets):
    """Rows evaluate the polynomial interpolant on ``nodes`` at ``targets``."""
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    diff = targets[:, None] - nodes[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    mat = bary[None, :] / diff
    mat /= mat.sum(axis=1, keepdims=True)
    hit = exact.any(axis=1)
    if hit.any():
        mat[hit] = exact[hit].astype(float)
    return mat


def barycentric_weights(n):
    return _reference(n)[2]
