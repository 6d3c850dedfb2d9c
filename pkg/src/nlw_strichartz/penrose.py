"""Fields on the Penrose square, lifting of radial data, linear evolution
and spacetime norms.

A radial solution ``u(t, r)`` is represented by ``U = sin(R) V`` where
``u = Omega V`` and ``Omega = 2 cos(Xp) cos(Xm)``; since ``r Omega = sin R``
this is simply ``U = r u`` written in the coordinates ``(Xm, Xp)``. The
wave equation for ``u`` becomes the flat equation ``d+ d- U = 0``.

Fields are sampled on the full square ``[-pi/2, pi/2]^2`` using the
antisymmetric extension ``U(Xp, Xm) = -U(Xm, Xp)``.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from numpy.polynomial import Chebyshev

from .coords import HALF_PI
from .errors import AccuracyError, DomainError, InvariantError
from .quadrature import (barycentric_weights, differentiation_matrix, gauss_legendre,
                         integration_matrix, interpolation_matrix)
from .sobolev import RadialProfile

MIN_NODES = 16
DEFAULT_NODES = 96
ANTISYMMETRY_TOL = 1e-10


class SquareGrid:
    """Tensor Gauss-Legendre grid on ``[-pi/2, pi/2]^2``.

    Use :func:`square_grid` to obtain cached instances.
    """

    def __init__(self, n):
        if int(n) != n or n < MIN_NODES:
            raise DomainError(f"grid needs at least {MIN_NODES} nodes per axis, got {n!r}")
        self.n = int(n)
        nodes, weights = gauss_legendre(self.n, -HALF_PI, HALF_PI)
        for arr in (nodes, weights):
            arr.setflags(write=False)
        self.nodes = nodes
        self.weights = weights

    def __repr__(self):
        return f"SquareGrid(n={self.n})"

    @cached_property
    def bary(self):
        return barycentric_weights(self.n)

    @cached_property
    def integration(self):
        """``(Q @ f)[i]`` approximates the integral of f from -pi/2 to node i."""
        return integration_matrix(self.n, -HALF_PI, HALF_PI)

    @cached_property
    def differentiation(self):
        return differentiation_matrix(self.nodes, self.bary)

    def interpolation(self, x):
        return interpolation_matrix(self.nodes, self.bary, x)

    @cached_property
    def mesh(self):
        """``(Xm, Xp)`` arrays with ``Xm`` varying along rows."""
        return np.meshgrid(self.nodes, self.nodes, indexing="ij")

    @cached_property
    def sin_r(self):
        xm, xp = self.mesh
        return np.sin(xp - xm)

    @cached_property
    def off_diagonal(self):
        return ~np.eye(self.n, dtype=bool)

    def divide_sin2(self, values):
        """``values / sin(R)^2`` with the removable diagonal set to zero."""
        out = np.zeros_like(values)
        mask = self.off_diagonal
        out[mask] = values[mask] / self.sin_r[mask] ** 2
        return out

    def integrate(self, values):
        """Tensor Gauss rule over the full square."""
        return float(self.weights @ values @ self.weights)


@lru_cache(maxsize=16)
def square_grid(n=DEFAULT_NODES):
    return SquareGrid(n)


class Field:
    """A sampled Penrose-side unknown ``U(Xm_i, Xp_j)`` on a square grid."""

    def __init__(self, grid, values, check=True):
        if not isinstance(grid, SquareGrid):
            grid = square_grid(grid)
        values = np.array(values, dtype=float)
        if values.shape != (grid.n, grid.n):
            raise DomainError(f"expected {grid.n}x{grid.n} values, got {values.shape}")
        if check:
            if not np.all(np.isfinite(values)):
                raise AccuracyError("field contains non-finite values")
            defect = antisymmetry_defect(values)
            if defect > ANTISYMMETRY_TOL * max(1.0, float(np.abs(values).max())):
                raise InvariantError(f"field is not swap-odd (defect {defect:.2e})")
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    def __repr__(self):
        return f"Field(n={self.grid.n}, sup={self.sup():.3e})"

    @classmethod
    def zeros(cls, grid):
        if not isinstance(grid, SquareGrid):
            grid = square_grid(grid)
        return cls(grid, np.zeros((grid.n, grid.n)), check=False)

    @classmethod
    def from_function(cls, grid, func):
        """Sample ``func(Xm, Xp)`` on the grid."""
        if not isinstance(grid, SquareGrid):
            grid = square_grid(grid)
        xm, xp = grid.mesh
        return cls(grid, func(xm, xp))

    def _compatible(self, other):
        if other.grid.n != self.grid.n:
            raise DomainError("fields live on different grids")

    def __add__(self, other):
        self._compatible(other)
        return Field(self.grid, self.values + other.values, check=False)

    def __sub__(self, other):
        self._compatible(other)
        return Field(self.grid, self.values - other.values, check=False)

    def __mul__(self, c):
        return Field(self.grid, float(c) * self.values, check=False)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def sup(self):
        return float(np.abs(self.values).max())

    def evaluate(self, xm, xp):
        """Interpolate U at the points ``(xm[k], xp[k])``."""
        xm, xp = np.broadcast_arrays(np.asarray(xm, float), np.asarray(xp, float))
        shape = xm.shape
        a = self.grid.interpolation(xm.ravel())
        b = self.grid.interpolation(xp.ravel())
        return np.sum((a @ self.values) * b, axis=1).reshape(shape)

    def d_plus(self):
        """Nodal values of the derivative along Xp."""
        return self.values @ self.grid.differentiation.T

    def d_minus(self):
        """Nodal values of the derivative along Xm."""
        return self.grid.differentiation @ self.values

    def d_time(self):
        """The field ``d_t U`` (derivative at fixed r in Minkowski time)."""
        xm, xp = self.grid.mesh
        vals = np.cos(xp) ** 2 * self.d_plus() + np.cos(xm) ** 2 * self.d_minus()
        return Field(self.grid, 0.5 * (vals - vals.T), check=False)

    def symmetrized(self):
        """Project onto the swap-odd subspace."""
        return Field(self.grid, 0.5 * (self.values - self.values.T), check=False)

    def dump(self, path):
        """Write the text format: ``n``, the nodes, then ``n`` rows (fixed Xm)."""
        with open(path, "w") as fh:
            fh.write(f"{self.grid.n}\n")
            fh.write(" ".join(f"{x:.17g}" for x in self.grid.nodes) + "\n")
            for row in self.values:
                fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
        try:
            n = int(lines[0])
            nodes = np.array(lines[1].split(), dtype=float)
            values = np.array([ln.split() for ln in lines[2:]], dtype=float)
        except (IndexError, ValueError) as exc:
            raise DomainError(f"malformed field file: {exc}") from exc
        grid = square_grid(n)
        if nodes.shape != (n,) or not np.allclose(nodes, grid.nodes, rtol=0, atol=1e-14):
            raise DomainError("field file nodes do not match the Gauss-Legendre grid")
        return cls(grid, values)


def antisymmetry_defect(values):
    values = np.asarray(values)
    return float(np.abs(values + values.T).max())


@dataclass(frozen=True, eq=False)
class CauchyData:
    """Data ``psi0 = sin(R) V`` and ``psi1 = sin(R) d_T V`` on ``T = 0``.

    Both are vectorized callables on ``[0, pi]`` vanishing at the endpoints.
    """

    psi0: object
    psi1: object

    def __post_init__(self):
        ends = np.array([0.0, np.pi])
        for name in ("psi0", "psi1"):
            vals = np.asarray(getattr(self, name)(ends), dtype=float)
            if not np.all(np.abs(vals) <= 1e-10):
                raise InvariantError(f"{name} must vanish at R = 0 and R = pi, got {vals}")


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def zero_cauchy():
    return CauchyData(_zero, _zero)


def _lifted(profile, weight):
    if profile.is_zero:
        return _zero

    def psi(R):
        R = np.asarray(R, dtype=float)
        out = np.zeros_like(R)
        inside = (R > 0.0) & (R < np.pi)
        r = np.tan(0.5 * R[inside])
        out[inside] = weight(r) * profile(r)
        return out

    return psi


def lift_data(d):
    """Cauchy data on the cylinder for Minkowski data ``d`` at ``t = 0``.

    With ``r = tan(R/2)`` one has ``sin R / (1 + cos R) = r`` and
    ``sin R / (1 + cos R)^2 = r (1 + r^2) / 2``, which are used directly so
    that the lift stays well conditioned near ``R = pi``.
    """
    return CauchyData(
        _lifted(d.f0, lambda r: r),
        _lifted(d.f1, lambda r: 0.5 * r * (1.0 + r * r)),
    )


def _odd_antiderivative(psi1, degree):
    """``Psi(s) = int_0^|s| psi1`` as a callable, via a Chebyshev interpolant."""
    if psi1 is _zero:
        return _zero
    series = Chebyshev.interpolate(psi1, degree, domain=[0.0, np.pi])
    prim = series.integ(lbnd=0.0)

    def big_psi(s):
        return prim(np.minimum(np.abs(s), np.pi))

    return big_psi


def linear_evolve(c, grid=DEFAULT_NODES):
    """Solve the flat 1+1 wave equation for ``U`` from Cauchy data.

    d'Alembert's formula with odd extensions in R gives
    ``U = A(Xp) - A(Xm)`` with ``A(X) = [psi0~(2X) + Psi1(2X)] / 2``, where
    ``psi0~`` is the odd extension of ``psi0`` and ``Psi1`` is the (even)
    antiderivative of the odd extension of ``psi1``.
    """
    if not isinstance(grid, SquareGrid):
        grid = square_grid(grid)
    big_psi = _odd_antiderivative(c.psi1, 4 * grid.n)

    def odd_psi0(s):
        return np.sign(s) * c.psi0(np.minimum(np.abs(s), np.pi))

    s = 2.0 * grid.nodes
    a = 0.5 * (odd_psi0(s) + big_psi(s))
    return Field(grid, a[None, :] - a[:, None], check=False)


def evolve_pair(d, grid=DEFAULT_NODES):
    """Shorthand for ``linear_evolve(lift_data(d), grid)``."""
    return linear_evolve(lift_data(d), grid)


def l4_norm4(field):
    """``||u||^4`` in ``L^4(R^{1+3})`` computed on the Penrose square.

    The Minkowski integral equals ``8 pi`` times the integral of
    ``U^4 / sin(R)^2`` over the triangle, i.e. ``4 pi`` times the integral
    over the full square of the swap-even integrand.
    """
    grid = field.grid
    integrand = grid.divide_sin2(field.values**4)
    if not np.all(np.isfinite(integrand)):
        raise AccuracyError("non-finite L4 integrand")
    return 4.0 * np.pi * grid.integrate(integrand)


def _radial_slice(field, t0, r):
    """``U(t0, r) / r`` with the axis value taken as the R-derivative."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radii must be nonnegative")
    xm, xp = np.arctan(t0 - r), np.arctan(t0 + r)
    if np.any(np.abs(xm) >= HALF_PI) or np.any(np.abs(xp) >= HALF_PI):
        raise DomainError("sampling point maps onto the boundary of the triangle")
    out = np.empty_like(r)
    small = r < 1e-8
    big = ~small
    out[big] = field.evaluate(xm[big], xp[big]) / r[big]
    if np.any(small):
        # d/dr U at r = 0 equals cos^2(X) (d+ - d-) U on the diagonal
        x = np.full(int(small.sum()), np.arctan(t0))
        dr = Field(field.grid, field.d_plus() - field.d_minus(), check=False)
        out[small] = np.cos(x) ** 2 * dr.evaluate(x, x)
    return out


def _field_profile(field, t0, label):
    """Profile ``r -> U(t0, r) / r`` backed by a Chebyshev series in ``arctan r``.

    Along the slice, ``h(phi) = U(t0, tan phi) / sin(phi)`` is even and
    analytic on ``[-pi/2, pi/2]``; it is interpolated once on an even number
    of Chebyshev points (so the axis is never a node) and the profile is
    ``h(phi) cos(phi)``.
    """
    npts = 4 * field.grid.n

    def h(phi):
        r = np.tan(phi)
        xm, xp = np.arctan(t0 - r), np.arctan(t0 + r)
        return field.evaluate(xm, xp) / np.sin(phi)

    series = Chebyshev.interpolate(h, npts - 1, domain=[-HALF_PI, HALF_PI])

    def func(r):
        phi = np.arctan(np.asarray(r, dtype=float))
        return series(phi) * np.cos(phi)

    return RadialProfile(func, "rational", name=label)


def sample_minkowski(field, t0, rgrid=None):
    """Minkowski data ``(u(t0, .), d_t u(t0, .))`` of a field.

    Returns two :class:`~nlw_strichartz.sobolev.RadialProfile` objects that
    evaluate the field by spectral interpolation. If ``rgrid`` is given, it
    is validated (all radii must map inside the open triangle) and the
    sampled arrays are returned as well.
    """
    if abs(np.arctan(t0)) >= HALF_PI:
        raise DomainError("time slice outside the triangle")
    u = _field_profile(field, t0, f"u({t0:g})")
    ut = _field_profile(field.d_time(), t0, f"u_t({t0:g})")
    if rgrid is None:
        return u, ut
    rgrid = np.asarray(rgrid, dtype=float)
    return u, ut, _radial_slice(field, t0, rgrid), _radial_slice(field.d_time(), t0, rgrid)


def theta_field(theta, grid=DEFAULT_NODES, amplitude=1.0):
    """Closed-form linear field ``amplitude * sin(Xp - Xm) cos(Xp + Xm - theta)``."""
    return Field.from_function(
        grid, lambda xm, xp: amplitude * np.sin(xp - xm) * np.cos(xp + xm - theta))
