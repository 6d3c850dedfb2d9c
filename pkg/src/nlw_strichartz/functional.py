"""The sextic functional ``S(w) = integral of w^3 times the retarded
solution of box W = w^3`` and the sharp constants of the expansion.

Two independent evaluations of ``S(v_theta)`` are provided: :func:`scal`
runs the operator pipeline (cubic source, Goursat solve, pairing on the
Gauss grid) while :func:`scal_quadrature4` integrates the nested quadruple
integral directly with Chebyshev (Clenshaw-Curtis) machinery.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev

from .duhamel import antibox_cubic
from .errors import DomainError

SPHERE_VOLUME = 2.0 * np.pi**2
MIN_QUADRATURE_NODES = 32


@dataclass(frozen=True)
class ConstantsTable:
    """Sharp constants of the linear and second-order problems."""

    s0: float = 3.0 / (16.0 * np.pi)
    sphere_volume: float = SPHERE_VOLUME
    s1_focusing: float = 29.0 / (2**10 * np.pi**3)
    s1_defocusing: float = 5.0 / (2**10 * np.pi**3)
    provenance: dict = field(default_factory=lambda: {
        "s0": "3/(16 pi), sharp linear L4 Strichartz constant",
        "sphere_volume": "2 pi^2, area of the unit 3-sphere",
        "s1_focusing": "29/(2^10 pi^3) = S(v_0)/|S^3|^3",
        "s1_defocusing": "5/(2^10 pi^3) = S(v_pi/2)/|S^3|^3",
    })

    def s1(self, sigma):
        if sigma > 0:
            return self.s1_focusing
        if sigma < 0:
            return self.s1_defocusing
        raise DomainError("the second-order constant needs sigma = +1 or -1")

    def as_dict(self):
        return {"s0": self.s0, "sphere_volume": self.sphere_volume,
                "s1_focusing": self.s1_focusing, "s1_defocusing": self.s1_defocusing}


CONSTANTS = ConstantsTable()


class PhaseAngle(float):
    """An angle reduced to ``[0, 2 pi)``."""

    def __new__(cls, theta):
        value = float(np.mod(float(theta), 2.0 * np.pi))
        if value >= 2.0 * np.pi:
            value = 0.0
        return super().__new__(cls, value)


def scal(field):
    """``S(u)`` for the solution represented by ``field``.

    Equals ``4 pi`` times the full-square integral of
    ``(U^3 / sin^2 R) * W`` where ``W`` is the Goursat solution with the
    same cubic source.
    """
    grid = field.grid
    source = grid.divide_sin2(field.values**3)
    w = antibox_cubic(field)
    return 4.0 * np.pi * grid.integrate(source * w.values)


def scal_closed_form(theta):
    """``S(v_theta) = pi^3 (24 cos^2 theta + 5) / 128``."""
    return np.pi**3 * (24.0 * np.cos(theta) ** 2 + 5.0) / 128.0


@lru_cache(maxsize=8)
def _chebyshev_rule(n):
    """Chebyshev extreme points on [-1, 1], Clenshaw-Curtis weights and the
    cumulative integration matrix (integral from -1)."""
    x = np.cos(np.pi * np.arange(n) / (n - 1))[::-1]
    vander = chebyshev.chebvander(x, n - 1)
    inv = np.linalg.inv(vander)
    k = np.arange(n)
    moments = np.zeros(n)
    even = k[k % 2 == 0]
    moments[even] = 2.0 / (1.0 - even**2.0)
    weights = inv.T @ moments
    # antiderivative of each basis polynomial, evaluated at the nodes
    integ = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        integ[:, j] = chebyshev.chebval(x, chebyshev.chebint(e, lbnd=-1.0))
    return x, weights, integ @ inv


def scal_quadrature4(theta, n=200):
    """``S(v_theta)`` as a nested quadruple integral.

    Computes ``4 pi`` times the integral over the square of
    ``F(X) * int_{Y <= Xm, Z <= Xp} F(Y, Z)`` with
    ``F(Y, Z) = sin(Z - Y) cos^3(Y + Z - theta)``, using a Chebyshev
    cumulative integral for the inner part and Clenshaw-Curtis for the
    outer one.
    """
    if n < MIN_QUADRATURE_NODES:
        raise DomainError(f"need at least {MIN_QUADRATURE_NODES} nodes, got {n}")
    x, w, cum = _chebyshev_rule(int(n))
    half = 0.5 * np.pi
    y = half * x
    ym, yp = np.meshgrid(y, y, indexing="ij")
    f = np.sin(yp - ym) * np.cos(yp + ym - theta) ** 3
    inner = half**2 * (cum @ f @ cum.T)
    return 4.0 * np.pi * half**2 * float(w @ (f * inner) @ w)


def best_theta(sigma):
    """The phase maximizing ``sigma * S(v_theta)``: 0 if focusing, pi/2 otherwise."""
    if sigma > 0:
        return PhaseAngle(0.0)
    if sigma < 0:
        return PhaseAngle(0.5 * np.pi)
    raise DomainError("sigma = 0 is the linear equation; no best phase")


def s1_from_closed_form(sigma):
    """``S(v_theta*) / |S^3|^3`` at the best phase."""
    return scal_closed_form(best_theta(sigma)) / SPHERE_VOLUME**3


def i_expansion(delta, sigma, constants=CONSTANTS):
    """Two-term expansion ``S0 delta^4 + sigma S1(sigma) delta^6``."""
    if delta < 0:
        raise DomainError("delta must be nonnegative")
    return constants.s0 * delta**4 + np.sign(sigma) * constants.s1(sigma) * delta**6
