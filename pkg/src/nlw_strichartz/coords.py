"""Lorentz boosts, Poincare-dilation maps and the Penrose compactification
of radial Minkowski space.

Points of Minkowski space are 4-vectors ``(t, x1, x2, x3)``. The Penrose map
sends the radial half-plane ``(t, r)`` to the triangle
``-pi/2 <= Xm <= Xp <= pi/2`` via ``X(-/+) = arctan(t -/+ r)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

#: tolerance (radians) used for triangle-boundary membership
BOUNDARY_TOL = 1e-12

HALF_PI = 0.5 * np.pi


def _gamma(speed):
    if not abs(speed) < 1.0:
        raise DomainError(f"boost speed must satisfy |beta| < 1, got {speed!r}")
    return 1.0 / np.sqrt(1.0 - speed * speed)


@dataclass(frozen=True)
class BoostParams:
    """Boost velocity ``beta`` (a 3-vector with ``|beta| < 1``)."""

    beta: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        beta = tuple(float(b) for b in np.broadcast_to(self.beta, (3,)))
        object.__setattr__(self, "beta", beta)
        _gamma(self.speed)

    @property
    def speed(self):
        return float(np.linalg.norm(self.beta))

    @property
    def gamma(self):
        return _gamma(self.speed)


@dataclass(frozen=True)
class PoincareParams:
    """Parameters of ``(t, x) -> L^beta(lam (t - t0), lam (x - x0))``."""

    lam: float = 1.0
    boost: BoostParams = field(default_factory=BoostParams)
    t0: float = 0.0
    x0: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"dilation must be positive, got {self.lam!r}")
        if not isinstance(self.boost, BoostParams):
            object.__setattr__(self, "boost", BoostParams(self.boost))
        x0 = tuple(float(v) for v in np.broadcast_to(self.x0, (3,)))
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def is_radial(self):
        """True when the map commutes with spatial rotations."""
        return self.boost.speed == 0.0 and not any(self.x0)


@dataclass(frozen=True)
class NullCoords:
    xm: float
    xp: float

    def __post_init__(self):
        if np.any(np.asarray(self.xm) > np.asarray(self.xp)):
            raise DomainError("null coordinates require xm <= xp (r >= 0)")


@dataclass(frozen=True)
class PenrosePoint:
    Xm: float
    Xp: float

    @property
    def T(self):
        return self.Xp + self.Xm

    @property
    def R(self):
        return self.Xp - self.Xm


def null_coords(t, r):
    return NullCoords(np.subtract(t, r), np.add(t, r))


def boost_matrix(alpha):
    """4x4 matrix of the boost with speed ``alpha`` along the x1 axis."""
    g = _gamma(alpha)
    mat = np.eye(4)
    mat[0, 0] = mat[1, 1] = g
    mat[0, 1] = mat[1, 0] = -g * alpha
    return mat


def apply_boost(alpha, p):
    """Boost the 4-point(s) ``p`` along x1 with speed ``alpha``.

    ``p`` may have shape ``(4,)`` or ``(..., 4)``.
    """
    return np.asarray(p, dtype=float) @ boost_matrix(alpha).T


def _rotation_to(direction):
    """Orthogonal 3x3 matrix whose first column is ``direction``."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    # complete d to an orthonormal basis with a Householder reflection
    e1 = np.array([1.0, 0.0, 0.0])
    v = d - e1
    if np.linalg.norm(v) < 1e-15:
        return np.eye(3)
    v /= np.linalg.norm(v)
    return np.eye(3) - 2.0 * np.outer(v, v)


def general_boost_matrix(boost):
    """Boost along an arbitrary direction, by rotation conjugation of the x1 boost."""
    if not isinstance(boost, BoostParams):
        boost = BoostParams(boost)
    speed = boost.speed
    if speed == 0.0:
        return np.eye(4)
    rot = np.eye(4)
    rot[1:, 1:] = _rotation_to(boost.beta)
    return rot @ boost_matrix(speed) @ rot.T


def apply_poincare(params, p):
    """Apply ``L^beta(lam (t - t0), lam (x - x0))`` to 4-point(s) ``p``."""
    p = np.asarray(p, dtype=float)
    shift = np.concatenate(([params.t0], params.x0))
    return (params.lam * (p - shift)) @ general_boost_matrix(params.boost).T


def minkowski_form(p):
    p = np.asarray(p, dtype=float)
    return p[..., 0] ** 2 - np.sum(p[..., 1:] ** 2, axis=-1)


def penrose_forward(t, r):
    """Map ``(t, r)`` to the Penrose triangle."""
    if np.any(np.asarray(r) < 0):
        raise DomainError("radius must be nonnegative")
    return PenrosePoint(np.arctan(np.subtract(t, r)), np.arctan(np.add(t, r)))


def penrose_inverse(q):
    """Inverse of :func:`penrose_forward` on the open triangle; returns ``(t, r)``."""
    xm, xp = np.asarray(q.Xm, dtype=float), np.asarray(q.Xp, dtype=float)
    if np.any(np.abs(xm) >= HALF_PI - BOUNDARY_TOL) or np.any(np.abs(xp) >= HALF_PI - BOUNDARY_TOL):
        raise DomainError("point on the boundary of the triangle maps to infinity")
    if np.any(xm > xp + BOUNDARY_TOL):
        raise DomainError("point lies outside the triangle (Xm > Xp)")
    tp, tm = np.tan(xp), np.tan(xm)
    return 0.5 * (tp + tm), 0.5 * (tp - tm)


def in_triangle(q, tol=BOUNDARY_TOL):
    xm, xp = np.asarray(q.Xm), np.asarray(q.Xp)
    return (xm >= -HALF_PI - tol) & (xp <= HALF_PI + tol) & (xm <= xp + tol)


def conformal_factor(q):
    """The factor ``2 cos Xp cos Xm`` relating Minkowski and cylinder metrics."""
    if not np.all(in_triangle(q)):
        raise DomainError("point lies outside the closed triangle")
    return 2.0 * _cos_clamped(q.Xp) * _cos_clamped(q.Xm)


def _cos_clamped(x):
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) >= HALF_PI - BOUNDARY_TOL, 0.0, np.cos(x))
