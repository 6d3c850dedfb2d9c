"""The retarded Duhamel operator in Penrose variables.

Inverting the wave operator with zero data at past null infinity amounts to
the characteristic (Goursat) problem ``d- d+ W = s`` with ``W = 0`` on
``Xm = -pi/2``. For a swap-odd source the bare double integral

    W(Xm, Xp) = int_{-pi/2}^{Xm} int_{-pi/2}^{Xp} s(Y, Z) dZ dY

also vanishes on the diagonal, so no free boundary functions are needed.
On the Gauss grid the double integral is ``Q S Q^T`` with the spectral
integration matrix ``Q``.
"""

import numpy as np

from .coords import HALF_PI
from .errors import InvariantError
from .penrose import Field, SquareGrid, antisymmetry_defect, square_grid

SOURCE_ANTISYMMETRY_TOL = 1e-12


class SourceField:
    """Right-hand side of ``d- d+ W = s`` sampled on a square grid."""

    def __init__(self, grid, values):
        if not isinstance(grid, SquareGrid):
            grid = square_grid(grid)
        values = np.array(values, dtype=float)
        scale = max(1.0, float(np.abs(values).max())) if values.size else 1.0
        defect = antisymmetry_defect(values)
        if defect > SOURCE_ANTISYMMETRY_TOL * scale:
            raise InvariantError(f"source is not swap-odd (defect {defect:.2e})")
        # remove rounding-level asymmetry so the solution is exactly swap-odd
        values = 0.5 * (values - values.T)
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @classmethod
    def from_function(cls, grid, func):
        if not isinstance(grid, SquareGrid):
            grid = square_grid(grid)
        xm, xp = grid.mesh
        return cls(grid, func(xm, xp))


def theta_source(theta, grid):
    """The cubic source ``sin(Xp - Xm) cos^3(Xp + Xm - theta)`` of the theta family."""
    return SourceField.from_function(
        grid, lambda xm, xp: np.sin(xp - xm) * np.cos(xp + xm - theta) ** 3)


def goursat_solve(s):
    """Solve ``d- d+ W = s`` with ``W = 0`` on ``Xm = -pi/2`` and on the diagonal."""
    q = s.grid.integration
    w = q @ s.values @ q.T
    return Field(s.grid, 0.5 * (w - w.T), check=False)


def cubic_source(field):
    """``U^3 / sin(R)^2`` with the removable diagonal value 0."""
    return SourceField(field.grid, field.grid.divide_sin2(field.values**3))


def antibox_cubic(field):
    """``sin(R)`` times the Penrose transform of the retarded solution of ``box w = u^3``."""
    return goursat_solve(cubic_source(field))


def _box_integral(p, q, c, a, b):
    """Integral of ``sin(p Y + q Z + c)`` over ``[-pi/2, a] x [-pi/2, b]``."""
    lo = -HALF_PI
    if p == 0 and q == 0:
        return (a - lo) * (b - lo) * np.sin(c)
    if p == 0:
        return -(a - lo) / q * (np.cos(q * b + c) - np.cos(q * lo + c))
    if q == 0:
        return -(b - lo) / p * (np.cos(p * a + c) - np.cos(p * lo + c))
    return -(np.sin(p * a + q * b + c) - np.sin(p * lo + q * b + c)
             - np.sin(p * a + q * lo + c) + np.sin(p * lo + q * lo + c)) / (p * q)


def wtheta_exact(theta, q):
    """Closed form of the Goursat solution for the theta-family source.

    Uses the expansion
    ``sin(Z-Y) cos^3(Y+Z-theta) = 3/8 [sin(2Z-theta) + sin(theta-2Y)]
    + 1/8 [sin(2Y+4Z-3 theta) + sin(3 theta-4Y-2Z)]``
    and integrates each term exactly; ``Y`` pairs with ``Xm`` and ``Z`` with
    ``Xp``.
    """
    a = np.asarray(q.Xm, dtype=float)
    b = np.asarray(q.Xp, dtype=float)
    terms = ((0.375, 0, 2, -theta), (0.375, -2, 0, theta),
             (0.125, 2, 4, -3 * theta), (0.125, -4, -2, 3 * theta))
    return sum(k * _box_integral(p, qq, c, a, b) for k, p, qq, c in terms)
