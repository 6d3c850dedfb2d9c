"""Projection onto the radial slice of the maximizer manifold.

The radial, unboosted part of the manifold is parameterized by amplitude
``c``, dilation ``lam``, phase ``theta`` and time translation ``t0``:

    Gamma_p = c * (data at t = 0 of  lam * v_theta(lam (t - t0), lam x)).

In the complex Fourier representation ``Z = F0 + i F1 / rho`` used by
:mod:`nlw_strichartz.sobolev` these points are simply

    Z_p(rho) = c * 4 pi^2 exp(-rho / lam) exp(i (theta + t0 rho)) / (lam rho),

so phase rotation and time translation act unitarily by multiplication and
the norm is ``c |S^3|^(1/2)`` for every ``p``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize

from .errors import AccuracyError, DomainError
from .sobolev import (DEFAULT_GRID, SPHERE_VOLUME, DataPair, RadialProfile,
                      pair_inner_transformed, pair_transform)

START_PHASES = (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi)
GRAM_STEP = 1e-4
TANGENT_STEP = 1e-6


@dataclass(frozen=True)
class ManifoldParams:
    c: float = 1.0
    lam: float = 1.0
    theta: float = 0.0
    t0: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError("dilation lam must be positive")
        if not self.c >= 0:
            raise DomainError("amplitude c must be nonnegative")

    def as_array(self):
        return np.array([self.c, self.lam, self.theta, self.t0])

    @classmethod
    def from_array(cls, x):
        return cls(float(x[0]), float(x[1]), float(x[2]), float(x[3]))


def _v_theta(theta, t, r):
    """``v_theta(t, r) = 2 Re(e^{-i theta} / D)`` and its time derivative."""
    d = (1.0 - 1j * t) ** 2 + r * r
    phase = np.exp(-1j * theta)
    return 2.0 * np.real(phase / d), 2.0 * np.real(phase * (2j + 2.0 * t) / d**2)


def gamma_apply(p):
    """The data pair ``Gamma_p`` as closed-form radial profiles."""
    c, lam, theta, t0 = p.c, p.lam, p.theta, p.t0

    def f0(r):
        return c * lam * _v_theta(theta, -lam * t0, lam * np.asarray(r, float))[0]

    def f1(r):
        return c * lam**2 * _v_theta(theta, -lam * t0, lam * np.asarray(r, float))[1]

    return DataPair(RadialProfile(f0, "rational", name="gamma.f0"),
                    RadialProfile(f1, "rational", name="gamma.f1"))


def gamma_transform(x, grid=DEFAULT_GRID):
    """Fourier representation ``Z`` of ``Gamma_p`` for a parameter array ``x``."""
    c, lam, theta, t0 = x
    rho = grid.nodes
    return c * 4.0 * np.pi**2 * np.exp(-rho / lam + 1j * (theta + t0 * rho)) / (lam * rho)


def _norm_weights(grid):
    return np.sqrt(grid.weights * grid.nodes**3 / SPHERE_VOLUME)


def _distance(zd, x, grid):
    diff = zd - gamma_transform(x, grid)
    return float(np.sqrt(pair_inner_transformed(diff, diff, grid)))


def tangent_vectors(x, grid=DEFAULT_GRID, h=TANGENT_STEP):
    """Central-difference derivatives of ``Z_p`` in ``(c, lam, theta, t0)``."""
    x = np.asarray(x, dtype=float)
    out = []
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        out.append((gamma_transform(x + e, grid) - gamma_transform(x - e, grid)) / (2.0 * h))
    return out


@dataclass
class ProjectionResult:
    params: ManifoldParams
    residual: float
    orthogonality: float
    stagnated: bool
    data_norm: float


def _orthogonality(zd, x, residual, grid):
    diff = zd - gamma_transform(x, grid)
    norm_diff = np.sqrt(pair_inner_transformed(diff, diff, grid))
    norm_d = np.sqrt(pair_inner_transformed(zd, zd, grid))
    if norm_diff <= 1e-10 * norm_d:
        # the data lie on the manifold; the normalized pairing is 0/0
        return 0.0
    worst = 0.0
    for t in tangent_vectors(x, grid):
        nt = np.sqrt(pair_inner_transformed(t, t, grid))
        if nt == 0:
            continue
        worst = max(worst, abs(pair_inner_transformed(diff, t, grid)) / (norm_diff * nt))
    return float(worst)


def _unpack(y):
    return np.array([y[0], np.exp(y[1]), y[2], y[3]])


def project_radial(d, init=None, grid=DEFAULT_GRID, max_evals=2000):
    """Nearest point of the radial manifold slice to the data ``d``.

    Nelder-Mead in ``(c, log lam, theta, t0)`` from four phase seeds, each
    followed by a Gauss-Newton polish of the weighted residual vector.
    ``d`` may be a :class:`DataPair` or its precomputed Fourier
    representation.
    """
    zd = d if isinstance(d, np.ndarray) else pair_transform(d, grid)
    norm_d = np.sqrt(pair_inner_transformed(zd, zd, grid))
    if not norm_d > 0:
        raise DomainError("cannot project the zero pair")
    base = init if init is not None else ManifoldParams(norm_d / np.sqrt(SPHERE_VOLUME))
    weights = _norm_weights(grid)

    def objective(y):
        return _distance(zd, _unpack(y), grid) ** 2

    def residuals(y):
        diff = weights * (zd - gamma_transform(_unpack(y), grid))
        return np.concatenate([diff.real, diff.imag])

    best = None
    stagnated = False
    seeds = START_PHASES if init is None else (base.theta,) + START_PHASES
    for phase in seeds:
        y0 = np.array([base.c, np.log(base.lam), phase, base.t0])
        simplex = y0 + np.vstack([np.zeros(4), 0.1 * np.eye(4)])
        nm = minimize(objective, y0, method="Nelder-Mead",
                      options={"maxfev": max_evals, "xatol": 1e-10, "fatol": 1e-22,
                               "initial_simplex": simplex})
        ls = least_squares(residuals, nm.x, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        y = ls.x if ls.cost * 2 <= nm.fun else nm.x
        val = _distance(zd, _unpack(y), grid)
        if best is None or val < best[0]:
            best = (val, y)
            stagnated = not (nm.success or ls.success)
    val, y = best
    x = _unpack(y)
    if x[0] < 0:
        x = np.array([-x[0], x[1], x[2] + np.pi, x[3]])
    x[2] = np.mod(x[2], 2.0 * np.pi)
    params = ManifoldParams.from_array(x)
    return ProjectionResult(params, val, _orthogonality(zd, x, val, grid), stagnated, norm_d)


@dataclass
class GramResult:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    hessian_block: np.ndarray
    order: tuple = ("lam", "theta", "t0", "c")


def gram_matrix(at=ManifoldParams(), grid=DEFAULT_GRID, h=GRAM_STEP, tol=1e-6):
    """Gram matrix of the tangent vectors at ``at`` in the pair inner product.

    Rows and columns are ordered ``(lam, theta, t0, c)``; ``c`` is the radial
    amplitude direction. Derivatives are central differences with step
    ``h``. Because ``lam``, ``theta`` and ``t0`` act unitarily, the block of
    those three also equals ``-<Gamma, d_i d_j Gamma>``; the two evaluations
    are compared and a discrepancy above ``tol`` (relative) raises
    :class:`AccuracyError` as a finite-difference noise detector.
    """
    x = at.as_array()
    order = (1, 2, 3, 0)
    tangents = tangent_vectors(x, grid, h)
    vecs = [tangents[i] for i in order]
    g = np.array([[pair_inner_transformed(a, b, grid) for b in vecs] for a in vecs])
    z = gamma_transform(x, grid)
    hess = np.empty((3, 3))
    for a, i in enumerate(order[:3]):
        for b, j in enumerate(order[:3]):
            ei = np.zeros(4)
            ej = np.zeros(4)
            ei[i] = h
            ej[j] = h
            mixed = (gamma_transform(x + ei + ej, grid) - gamma_transform(x + ei - ej, grid)
                     - gamma_transform(x - ei + ej, grid)
                     + gamma_transform(x - ei - ej, grid)) / (4.0 * h * h)
            hess[a, b] = -pair_inner_transformed(z, mixed, grid)
    scale = np.abs(g[:3, :3]).max()
    defect = np.abs(hess - g[:3, :3]).max() / scale
    if defect > tol:
        raise AccuracyError(f"finite-difference Gram entries disagree by {defect:.2e}")
    return GramResult(g, np.linalg.eigvalsh(g), hess)
