"""Homogeneous Sobolev norms of radial data pairs.

Conventions: the 3D Fourier transform is ``int f(x) exp(-i x.xi) dx``, which
for a radial profile reduces to

    F(rho) = (4 pi / rho) int_0^inf f(r) sin(rho r) r dr,

and ``||f||^2_{H^s} = (2 pi^2)^{-1} int_0^inf rho^(2s+2) F(rho)^2 drho``.
With these choices the pair ``(2/(1+r^2), 0)`` has squared norm ``2 pi^2``.

Profiles with algebraic decay are handled by subtracting an analytic tail
(a combination of ``1/(1+r^2)^k`` and ``1/(r (1+r^2)^k)``) fitted to the
large-r expansion, whose transforms are known in closed form; the remainder is integrated with
composite Gauss-Legendre panels no wider than the shortest half-period.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.interpolate import CubicSpline
from scipy.special import expi

from .errors import AccuracyError, DomainError
from .quadrature import gauss_legendre

SPHERE_VOLUME = 2.0 * np.pi**2

DECAY_CLASSES = ("rational", "compact", "schwartz")


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A radial function ``f(|x|)`` given by a vectorized callable.

    ``decay`` selects the transform strategy. ``support`` is the support
    radius for ``"compact"`` profiles and the truncation radius for
    ``"schwartz"`` ones.
    """

    func: object
    decay: str = "rational"
    support: float = None
    name: str = ""

    def __post_init__(self):
        if self.decay not in DECAY_CLASSES:
            raise DomainError(f"unknown decay class {self.decay!r}")
        if self.decay == "compact" and not (self.support and self.support > 0):
            raise DomainError("compact profiles need a positive support radius")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.broadcast_to(np.asarray(self.func(r), dtype=float), r.shape).copy()

    @property
    def is_zero(self):
        return self.name == "zero"

    def scaled(self, c):
        if self.is_zero or c == 0:
            return zero_profile()
        func = self.func
        return RadialProfile(lambda r: c * func(r), self.decay, self.support,
                             f"{c:g}*{self.name}" if self.name else "")

    def __add__(self, other):
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        decay = _weakest(self.decay, other.decay)
        support = None
        if decay != "rational":
            support = max(s for s in (self.support, other.support) if s is not None)
        f, g = self.func, other.func
        return RadialProfile(lambda r: f(r) + g(r), decay, support)

    def __mul__(self, c):
        return self.scaled(c)

    __rmul__ = __mul__

    def power(self, k):
        if self.is_zero:
            return self
        f = self.func
        return RadialProfile(lambda r: f(r) ** k, self.decay, self.support)

    def sample(self, r):
        return self(r)


def _weakest(a, b):
    order = {"compact": 0, "schwartz": 1, "rational": 2}
    return a if order[a] >= order[b] else b


def zero_profile():
    return RadialProfile(lambda r: np.zeros_like(r), "compact", 1.0, "zero")


def rational_profile(k, coef=1.0):
    """``coef * (2/(1+r^2))**k``."""
    return RadialProfile(lambda r: coef * (2.0 / (1.0 + r * r)) ** k, "rational",
                         name=f"{coef:g}*(2/(1+r^2))^{k}")


def gaussian_profile(coef=1.0, width=1.0):
    return RadialProfile(lambda r: coef * np.exp(-(r / width) ** 2), "schwartz",
                         support=12.0 * width, name=f"{coef:g}*gauss({width:g})")


def profile_from_samples(r, values, decay="rational"):
    """Interpolated profile through samples ``(r_i, f(r_i))``.

    Uses a cubic spline in ``log r``; beyond the last sample the profile
    continues as ``c/r^2`` (rational) or zero (compact/schwartz).
    """
    r = np.asarray(r, dtype=float)
    values = np.asarray(values, dtype=float)
    if r.ndim != 1 or r.shape != values.shape or r.size < 4:
        raise DomainError("need at least four (r, value) samples")
    if np.any(np.diff(r) <= 0):
        raise DomainError("sample radii must be strictly increasing")
    if r[0] <= 0:
        # keep the origin value through a tiny offset so log r is defined
        r0 = values[0]
        r, values = r[1:], values[1:]
    else:
        r0 = values[0]
    spline = CubicSpline(np.log(r), values)
    r_first, r_last, v_last = r[0], r[-1], values[-1]

    def func(x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        inner = (x >= r_first) & (x <= r_last)
        out[inner] = spline(np.log(x[inner]))
        small = x < r_first
        out[small] = r0 + (values[0] - r0) * (x[small] / r_first) ** 2
        big = x > r_last
        out[big] = v_last * (r_last / x[big]) ** 2 if decay == "rational" else 0.0
        return out

    support = r_last if decay != "rational" else None
    return RadialProfile(func, decay, support, name="samples")


def load_profile(path, decay="rational"):
    """Read a two-column text file ``r value`` into a profile."""
    data = np.loadtxt(path, ndmin=2)
    if data.shape[1] != 2:
        raise DomainError("profile file must have exactly two columns")
    return profile_from_samples(data[:, 0], data[:, 1], decay)


def save_profile(path, profile, r):
    r = np.asarray(r, dtype=float)
    np.savetxt(path, np.column_stack([r, profile(r)]), fmt="%.17g")


@dataclass(frozen=True, eq=False)
class DataPair:
    """Initial data ``(f0, f1)``: position in H^{1/2}, velocity in H^{-1/2}."""

    f0: RadialProfile
    f1: RadialProfile

    def scaled(self, c):
        return DataPair(self.f0.scaled(c), self.f1.scaled(c))

    def __add__(self, other):
        return DataPair(self.f0 + other.f0, self.f1 + other.f1)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def __mul__(self, c):
        return self.scaled(c)

    __rmul__ = __mul__


def zero_pair():
    return DataPair(zero_profile(), zero_profile())


def theta_pair(theta, amplitude=1.0):
    """``amplitude * (cos(theta) 2/(1+r^2), sin(theta) (2/(1+r^2))^2)``."""
    c, s = np.cos(theta), np.sin(theta)
    f0 = rational_profile(1, amplitude * c) if c != 0 else zero_profile()
    f1 = rational_profile(2, amplitude * s) if s != 0 else zero_profile()
    return DataPair(f0, f1)


def unit_theta_pair(theta, delta=1.0):
    """The pair ``delta * f_theta / |S^3|^(1/2)``, of norm ``delta``."""
    return theta_pair(theta, delta / np.sqrt(SPHERE_VOLUME))


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Quadrature for ``int_0^rho_max d rho`` via ``rho = scale tan(pi u / 2)``."""

    n: int = 400
    rho_max: float = 80.0
    scale: float = 1.0

    @cached_property
    def _rule(self):
        u_max = 2.0 / np.pi * np.arctan(self.rho_max / self.scale)
        u, wu = gauss_legendre(self.n, 0.0, u_max)
        arg = 0.5 * np.pi * u
        rho = self.scale * np.tan(arg)
        w = wu * self.scale * 0.5 * np.pi / np.cos(arg) ** 2
        return rho, w

    @property
    def nodes(self):
        return self._rule[0]

    @property
    def weights(self):
        return self._rule[1]

    def refined(self):
        return FrequencyGrid(2 * self.n, self.rho_max, self.scale)


DEFAULT_GRID = FrequencyGrid()


def _tail_transforms(rho):
    """Radial transforms of the five tail basis functions.

    The basis is ``1/(1+r^2)^k`` for k = 1, 2, 3 and ``1/(r (1+r^2)^k)``
    for k = 1, 2; the last two capture odd powers in the large-r expansion
    and have sine transforms expressible through the exponential integral.
    """
    e = np.exp(-rho)
    p = np.exp(-rho) * expi(rho) - np.exp(rho) * expi(-rho)
    m = np.exp(-rho) * expi(rho) + np.exp(rho) * expi(-rho)
    k = 4.0 * np.pi / rho
    return (
        2.0 * np.pi**2 * e / rho,
        np.pi**2 * e,
        0.25 * np.pi**2 * (1.0 + rho) * e,
        k * 0.5 * p,
        k * 0.25 * (rho * m + p),
    )


def tail_coefficients(f, z0=0.25, m=16):
    """Coefficients ``c0..c4`` of ``f(r) ~ sum_k c_k r^-(k+2)`` as r -> inf.

    Interpolates ``q(z) = f(1/z) / z^2`` on Chebyshev points of ``(0, z0]``
    and differentiates the interpolant at ``z = 0``. Only the leading
    coefficients need to be accurate: the subtracted model is transformed
    exactly, so fitting error merely slows the decay of the remainder.
    """
    k = np.arange(m)
    z = z0 * 0.5 * (1.0 + np.cos(np.pi * (k + 0.5) / m))
    q = f(1.0 / z) / z**2
    series = Chebyshev.fit(z, q, m - 1, domain=[0.0, z0])
    coef = np.empty(5)
    fact = 1.0
    for j in range(5):
        coef[j] = series(0.0) / fact
        series = series.deriv()
        fact *= j + 1
    return coef


def _panel_rule(r_end, width, order):
    npan = max(1, int(np.ceil(r_end / width)))
    x, w = gauss_legendre(order, 0.0, r_end / npan)
    starts = np.arange(npan) * (r_end / npan)
    return (starts[:, None] + x[None, :]).ravel(), np.tile(w, npan)


def _sine_integral(g, rho, r_end, order, width=0.5, chunk=8192):
    """``int_0^r_end g(r) sin(rho r) dr`` on panels resolving each frequency.

    Frequencies are processed in octave bands so that low frequencies do
    not pay for the panel density required by the highest one.
    """
    out = np.zeros_like(rho)
    top = max(float(rho.max()), np.pi)
    edges = [0.0]
    while edges[-1] < top:
        edges.append(np.pi if edges[-1] == 0.0 else 2.0 * edges[-1])
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (rho > lo) & (rho <= hi)
        if not np.any(sel):
            continue
        r, w = _panel_rule(r_end, min(width, np.pi / hi), order)
        wg = w * g(r)
        band = rho[sel]
        acc = np.zeros_like(band)
        for i in range(0, r.size, chunk):
            acc += np.sin(np.outer(band, r[i:i + chunk])) @ wg[i:i + chunk]
        out[sel] = acc
    return out


def radial_fourier(f, grid=DEFAULT_GRID, r_end=None, order=10, check=True, tol=1e-9,
                   refinements=4):
    """3D Fourier transform of a radial profile, sampled on the frequency grid.

    Parameters
    ----------
    f : RadialProfile
    grid : FrequencyGrid or array of frequencies
    r_end : float, optional
        Truncation radius of the remainder integral (default 120 for
        algebraic decay, the profile support otherwise).
    order : int
        Gauss points per panel.
    check : bool
        Recompute with ``order - 3`` points per panel; while the
        ``sqrt(rho)``-weighted relative change exceeds ``tol`` the panels are
        halved, up to ``refinements`` times, after which
        :class:`AccuracyError` is raised.
    """
    rho = grid.nodes if isinstance(grid, FrequencyGrid) else np.asarray(grid, dtype=float)
    if f.is_zero:
        return np.zeros_like(rho)
    if np.any(rho <= 0):
        raise DomainError("frequencies must be positive")

    if f.decay == "rational":
        c0, c1, c2, c3, c4 = tail_coefficients(f)
        a = c0
        b = c2 + a
        c = c4 + 2.0 * b - a
        d = c1
        e = c3 + d
        t1, t2, t3, t4, t5 = _tail_transforms(rho)
        model = a * t1 + b * t2 + c * t3 + d * t4 + e * t5

        def rem(r):
            s = 1.0 / (1.0 + r * r)
            # r times the model, written to stay finite at r = 0
            return r * f(r) - s * (r * (a + s * (b + s * c)) + d + s * e)

        end = 120.0 if r_end is None else r_end
    else:
        model = 0.0
        end = f.support if r_end is None else r_end

        def rem(r):
            return r * f(r)

    width = 0.5
    out = model + 4.0 * np.pi / rho * _sine_integral(rem, rho, end, order, width)
    if not check:
        return out
    # measure changes with the sqrt(rho) weight of the weaker norm, so that
    # noise at frequencies the norms cannot see is not flagged
    weight = np.sqrt(rho)
    for _ in range(refinements + 1):
        coarse = model + 4.0 * np.pi / rho * _sine_integral(rem, rho, end, order - 3, width)
        scale = np.max(np.abs(weight * out)) or 1.0
        err = np.max(np.abs(weight * (out - coarse))) / scale
        if err <= tol:
            return out
        width *= 0.5
        out = model + 4.0 * np.pi / rho * _sine_integral(rem, rho, end, order, width)
    raise AccuracyError(f"radial transform not converged (relative change {err:.2e})")


def _sobolev_weight(grid, s):
    rho, w = grid.nodes, grid.weights
    return w * rho ** (2.0 * s + 2.0) / SPHERE_VOLUME


def sobolev_inner(fa, fb, s, grid=DEFAULT_GRID, transforms=None):
    """Homogeneous H^s inner product of two radial profiles (s = +-1/2)."""
    if s not in (0.5, -0.5):
        raise DomainError("only s = +1/2 and s = -1/2 are supported")
    if fa.is_zero or fb.is_zero:
        return 0.0
    Fa = radial_fourier(fa, grid) if transforms is None else transforms[0]
    Fb = Fa if fb is fa and transforms is None else (
        radial_fourier(fb, grid) if transforms is None else transforms[1])
    return float(np.sum(_sobolev_weight(grid, s) * Fa * Fb))


def sobolev_norm_sq(f, s, grid=DEFAULT_GRID):
    return sobolev_inner(f, f, s, grid)


def pair_transform(d, grid=DEFAULT_GRID):
    """Complex Fourier representation ``F0 + i F1/rho`` of a data pair.

    In this form the pair inner product is
    ``(2 pi^2)^-1 int rho^3 Re(Za conj(Zb)) drho``.
    """
    rho = grid.nodes
    return radial_fourier(d.f0, grid) + 1j * radial_fourier(d.f1, grid) / rho


def pair_inner_transformed(za, zb, grid=DEFAULT_GRID):
    return float(np.sum(_sobolev_weight(grid, 0.5) * np.real(za * np.conj(zb))))


def pair_norm_sq(d, grid=DEFAULT_GRID):
    z = pair_transform(d, grid)
    return pair_inner_transformed(z, z, grid)


def pair_inner(a, b, grid=DEFAULT_GRID):
    return pair_inner_transformed(pair_transform(a, grid), pair_transform(b, grid), grid)
