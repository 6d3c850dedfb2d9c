"""Small-data solutions of ``u_tt - Laplacian u = sigma u^3`` by Picard
iteration in Penrose variables, and the measurements built on them.

The fixed-point map is ``U -> U_lin + sigma * antibox_cubic(U)`` where
``U_lin`` is the free solution with the given data. With the default
``anchor="past"`` the data are scattering data at past infinity, which is
what the expansion of the maximal Strichartz norm is about. With
``anchor="zero"`` the free solution matching the Duhamel term at ``t = 0``
is subtracted on every step, so the data are ordinary Cauchy data at
``t = 0``.
"""

from dataclasses import dataclass, field
from math import isfinite

import numpy as np

from .errors import ConfigError, DivergenceError, DomainError, NumericError
from .functional import CONSTANTS, SPHERE_VOLUME, PhaseAngle, scal_closed_form
from .duhamel import antibox_cubic
from .penrose import DEFAULT_NODES, Field, evolve_pair, l4_norm4, square_grid
from .sobolev import unit_theta_pair

ANCHORS = ("past", "zero")


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of a Picard solve.

    ``sigma`` is the sign of the nonlinearity (0 gives the free flow),
    ``delta`` the data norm used by the theta-family helpers, and
    ``ratio_limit`` the largest tolerated ratio of successive updates once
    the iteration has settled (larger ratios are treated as loss of
    contraction).
    """

    sigma: int = 1
    delta: float = 0.2
    theta: float = 0.0
    grid_n: int = DEFAULT_NODES
    fp_tol: float = 1e-12
    max_iter: int = 60
    anchor: str = "past"
    ratio_limit: float = 0.9

    def __post_init__(self):
        if self.sigma not in (-1, 0, 1):
            raise ConfigError(f"sigma must be -1, 0 or 1, got {self.sigma!r}")
        if not self.delta >= 0:
            raise ConfigError("delta must be nonnegative")
        if not self.fp_tol > 0:
            raise ConfigError("fp_tol must be positive")
        if int(self.max_iter) < 1:
            raise ConfigError("max_iter must be at least 1")
        if self.anchor not in ANCHORS:
            raise ConfigError(f"anchor must be one of {ANCHORS}")
        object.__setattr__(self, "theta", float(PhaseAngle(self.theta)))

    def with_(self, **changes):
        values = {k: getattr(self, k) for k in self.__dataclass_fields__}
        values.update(changes)
        return SolverConfig(**values)


@dataclass
class SolveReport:
    field: Field
    linear: Field
    iterations: int
    final_residual: float
    l4_norm4: float
    updates: list = field(default_factory=list)

    @property
    def contraction_ratios(self):
        u = np.asarray(self.updates)
        return u[1:] / u[:-1] if u.size > 1 else np.array([])


def _time_zero_free_part(w):
    """The free solution with the same data on ``T = 0`` as the field ``w``.

    Free swap-odd solutions are ``a(Xp) - a(Xm)``; matching value and time
    derivative on ``Xm = -Xp`` gives ``a(X) = w(-X, X)/2 + int_0^X dT w``.
    The Gauss nodes are symmetric, so ``w(-X_j, X_j)`` is a grid value.
    """
    grid = w.grid
    n = grid.n
    diag = np.arange(n)
    anti = diag[::-1]
    dt_w = 0.5 * (w.d_plus() + w.d_minus())
    g = w.values[anti, diag]
    h = dt_w[anti, diag]
    prim = grid.integration @ h
    at_zero = float((grid.interpolation(np.array([0.0])) @ prim)[0])
    a = 0.5 * g + (prim - at_zero)
    return Field(grid, a[None, :] - a[:, None], check=False)


def picard_map(u, lin, sigma, anchor="past"):
    """One application of the fixed-point map."""
    if sigma == 0:
        return lin
    w = antibox_cubic(u)
    if anchor == "zero":
        w = w - _time_zero_free_part(w)
    return lin + w * sigma


def solve(d=None, cfg=SolverConfig()):
    """Solve the cubic wave equation with data ``d`` by Picard iteration.

    If ``d`` is None the data ``delta * f_theta / |S^3|^(1/2)`` from ``cfg``
    are used.

    Raises
    ------
    DivergenceError
        If successive updates stop contracting or ``max_iter`` is reached.
    NumericError
        If a non-finite value appears.
    """
    if d is None:
        d = unit_theta_pair(cfg.theta, cfg.delta)
    grid = square_grid(cfg.grid_n)
    lin = evolve_pair(d, grid)
    return iterate(lin, cfg)


def iterate(lin, cfg):
    """Run the Picard iteration from a given free solution."""
    u = lin
    updates = []
    for k in range(1, int(cfg.max_iter) + 1):
        nxt = picard_map(u, lin, cfg.sigma, cfg.anchor)
        step = float(np.abs(nxt.values - u.values).max())
        if not isfinite(step):
            raise NumericError(f"non-finite update at iteration {k}")
        updates.append(step)
        u = nxt
        if step < cfg.fp_tol:
            return SolveReport(u, lin, k, step, l4_norm4(u), updates)
        if k > 1 and step > cfg.ratio_limit * updates[-2]:
            raise DivergenceError(
                f"updates no longer contract at iteration {k} "
                f"(ratio {step / updates[-2]:.3f}); data too large")
    raise DivergenceError(f"no convergence after {cfg.max_iter} iterations "
                          f"(last update {updates[-1]:.2e})")


def _family_solve(theta, sigma, delta, grid_n, fp_tol=1e-12):
    cfg = SolverConfig(sigma=sigma, delta=delta, theta=theta, grid_n=grid_n, fp_tol=fp_tol)
    return solve(None, cfg)


def _l4(field):
    return l4_norm4(field) ** 0.25


@dataclass
class OrderFit:
    slope1: float
    slope2: float
    deltas: np.ndarray
    err1: np.ndarray
    err2: np.ndarray


def order_fit(theta, sigma, deltas, grid_n=DEFAULT_NODES):
    """Log-log slopes of the first and second Picard remainders.

    ``err1 = ||Phi(h) - S h||`` should scale like ``delta^3`` and
    ``err2 = ||Phi(h) - S h - sigma antibox((S h)^3)||`` like ``delta^5``.
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size < 4:
        raise ConfigError("order_fit needs at least four deltas")
    if sigma == 0:
        raise DomainError("remainders vanish identically for sigma = 0")
    err1, err2 = [], []
    for delta in deltas:
        rep = _family_solve(theta, sigma, delta, grid_n)
        diff = rep.field - rep.linear
        err1.append(_l4(diff))
        err2.append(_l4(diff - antibox_cubic(rep.linear) * sigma))
    err1, err2 = np.array(err1), np.array(err2)
    logd = np.log(deltas)
    slope1 = np.polyfit(logd, np.log(err1), 1)[0]
    slope2 = np.polyfit(logd, np.log(err2), 1)[0]
    return OrderFit(float(slope1), float(slope2), deltas, err1, err2)


def family_norm4(theta, sigma, delta, grid_n=DEFAULT_NODES):
    """``N(delta, theta) = ||Phi(delta g_theta)||^4`` in ``L^4(R^{1+3})``."""
    return _family_solve(theta, sigma, delta, grid_n).l4_norm4


@dataclass
class ExpansionResult:
    c6_measured: float
    c8_bound: float
    deltas: np.ndarray
    norms: np.ndarray
    c6_estimates: np.ndarray
    c8_ratios: np.ndarray
    predicted_eq_factor4: float
    predicted_s1: float

    @property
    def c8_spread(self):
        r = self.c8_ratios
        return float((r.max() - r.min()) / abs(r.mean()))


def expansion_coefficient(theta, sigma, deltas, grid_n=DEFAULT_NODES):
    """Measure the ``delta^6`` coefficient of ``||Phi(delta g_theta)||^4``.

    For each delta, ``q(d) = (N(d) - S0 d^4) / d^6`` is evaluated at ``d``
    and ``d / sqrt 2``; assuming ``q = c6 + c8 d^2`` the Richardson value is
    ``2 q(d/sqrt 2) - q(d)``. The estimate at the smallest delta is
    reported. ``c8_ratios`` are ``(N - S0 d^4 - c6 d^6) / d^8`` per delta
    and ``c8_bound`` is their largest magnitude.
    """
    deltas = np.sort(np.asarray(deltas, dtype=float))
    if deltas.size < 5:
        raise ConfigError("expansion_coefficient needs at least five deltas")
    if sigma == 0:
        raise DomainError("sigma = 0 has no sextic term")
    s0 = CONSTANTS.s0

    def q(delta):
        return (family_norm4(theta, sigma, delta, grid_n) - s0 * delta**4) / delta**6

    qs = np.array([q(d) for d in deltas])
    qh = np.array([q(d / np.sqrt(2.0)) for d in deltas])
    estimates = 2.0 * qh - qs
    c6 = float(estimates[0])
    ratios = (qs - c6) / deltas**2
    norms = s0 * deltas**4 + qs * deltas**6
    s_theta = scal_closed_form(theta)
    return ExpansionResult(
        c6_measured=c6,
        c8_bound=float(np.abs(ratios).max()),
        deltas=deltas,
        norms=norms,
        c6_estimates=estimates,
        c8_ratios=ratios,
        predicted_eq_factor4=4.0 * sigma * s_theta / SPHERE_VOLUME**3,
        predicted_s1=sigma * s_theta / SPHERE_VOLUME**3,
    )


def candidate_max(delta, sigma, theta_grid=None, grid_n=DEFAULT_NODES):
    """Maximize ``N(delta, theta)`` over a grid of phases in ``[0, pi)``.

    Returns ``(theta_star, value, values)``.
    """
    if theta_grid is None:
        theta_grid = np.arange(16) * np.pi / 16
    theta_grid = np.asarray(theta_grid, dtype=float)
    values = np.array([family_norm4(t, sigma, delta, grid_n) for t in theta_grid])
    k = int(np.argmax(values))
    return float(theta_grid[k]), float(values[k]), values


def perturbation_residual(theta, sigma, delta, eps, grid_n=DEFAULT_NODES):
    """``||Phi((delta + eps) g) - (1 + eps/delta) Phi(delta g)||`` in ``L^4``.

    Compares the solution with enlarged data against the rescaled solution;
    the difference is expected to be of size ``eps delta^2``.
    """
    if delta <= 0:
        raise DomainError("delta must be positive")
    if eps == 0:
        return 0.0
    base = _family_solve(theta, sigma, delta, grid_n).field
    bigger = _family_solve(theta, sigma, delta + eps, grid_n).field
    return _l4(bigger - base * (1.0 + eps / delta))
