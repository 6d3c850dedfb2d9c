"""Orthogonality of sequences of spacetime transformations and the decay of
mixed L^4 integrals between transformed solutions.

A transformation is ``Lambda(t, x) = L^beta(lam (t - t0), lam (x - x0))``;
a sequence is given by a mini-language of assignments such as
``"lambda=2^n, t=0"`` (see :func:`parse_sequence`).
"""

import re
from dataclasses import dataclass, field

import numpy as np

from .coords import BoostParams, PoincareParams, general_boost_matrix
from .errors import ConfigError, DomainError
from .penrose import Field, square_grid

DEFAULT_THRESHOLD = 1e3
MIXED_RTOL = 1e-9
MAX_MIXED_NODES = 1536
KINDS = ("lorentz", "rescaling", "angular", "translation", "none", "inconclusive")
KEYS = ("lambda", "t", "x1", "x2", "x3", "beta1", "beta2", "beta3", "ell", "phi")

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_POWER = re.compile(rf"^({_NUMBER})\^n$")
_LINEAR = re.compile(rf"^(?:({_NUMBER})\*)?n$")
_CONST = re.compile(rf"^{_NUMBER}$")


def parse_expr(text):
    """Compile ``const``, ``c^n`` or ``c*n`` (also bare ``n``) to a function of n."""
    s = text.strip().replace(" ", "")
    m = _POWER.match(s)
    if m:
        base = float(m.group(1))
        return lambda n: base ** n
    m = _LINEAR.match(s)
    if m:
        slope = float(m.group(1)) if m.group(1) else 1.0
        return lambda n: slope * n
    if _CONST.match(s):
        value = float(s)
        return lambda n: value
    raise ConfigError(f"cannot parse sequence expression {text!r}")


@dataclass
class TransformSequence:
    """A sequence ``n -> Lambda_n`` built from per-parameter expressions.

    ``ell`` (with optional direction angle ``phi`` in the x1-x2 plane) may
    be given instead of ``beta1..3``; it is the rapidity-like parameter with
    ``(ell^2 - 1) / (ell^2 + 1) = |beta|`` and is kept exact so that large
    values do not round ``|beta|`` to 1.
    """

    exprs: dict = field(default_factory=dict)
    text: str = ""

    def __post_init__(self):
        unknown = set(self.exprs) - set(KEYS)
        if unknown:
            raise ConfigError(f"unknown sequence parameters {sorted(unknown)}")
        if "ell" in self.exprs and any(k in self.exprs for k in ("beta1", "beta2", "beta3")):
            raise ConfigError("give either ell (and phi) or beta components, not both")
        self._f = {k: parse_expr(v) if isinstance(v, str) else v for k, v in self.exprs.items()}

    def _get(self, key, n, default=0.0):
        f = self._f.get(key)
        return float(f(n)) if f is not None else default

    def lam(self, n):
        value = self._get("lambda", n, 1.0)
        if not value > 0:
            raise DomainError(f"lambda_{n} = {value} is not positive")
        return value

    def t(self, n):
        return self._get("t", n)

    def x(self, n):
        return np.array([self._get(k, n) for k in ("x1", "x2", "x3")])

    def ell(self, n):
        if "ell" in self._f:
            value = self._get("ell", n)
            if value < 1:
                raise DomainError(f"ell_{n} = {value} is below 1")
            return value
        speed = float(np.linalg.norm(self.beta(n)))
        return float(np.sqrt((1.0 + speed) / (1.0 - speed)))

    def direction(self, n):
        """Unit boost direction, or None for zero boost."""
        if "ell" in self._f:
            if self.ell(n) == 1.0:
                return None
            phi = self._get("phi", n)
            return np.array([np.cos(phi), np.sin(phi), 0.0])
        b = self.beta(n)
        nb = np.linalg.norm(b)
        return b / nb if nb > 0 else None

    def beta(self, n):
        if "ell" in self._f:
            ell = self._get("ell", n)
            speed = 1.0 - 2.0 / (ell * ell + 1.0)
            d = self.direction(n)
            return np.zeros(3) if d is None else speed * d
        return np.array([self._get(k, n) for k in ("beta1", "beta2", "beta3")])

    def params(self, n):
        """The transformation ``Lambda_n`` as :class:`PoincareParams`."""
        return PoincareParams(self.lam(n), BoostParams(tuple(self.beta(n))), self.t(n),
                              tuple(self.x(n)))

    @property
    def radial(self):
        return not any(k in self._f for k in ("x1", "x2", "x3", "beta1", "beta2", "beta3", "ell"))


def parse_sequence(text):
    """Parse ``"key=expr, key=expr"`` (commas or semicolons) into a sequence."""
    exprs = {}
    for part in re.split(r"[,;]", text):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ConfigError(f"expected key=expr, got {part!r}")
        key, expr = (s.strip() for s in part.split("=", 1))
        if key in exprs:
            raise ConfigError(f"parameter {key!r} given twice")
        exprs[key] = expr
    return TransformSequence(exprs, text)


@dataclass
class OrthogonalityVerdict:
    kind: str
    witness: float
    indicators: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def _ratio_sum(p, q):
    return p / q + q / p


def indicator_sequences(a, b, n_max):
    """The four indicator sequences at ``n = 1..n_max``.

    Returns a dict of arrays plus side-condition flags: ``angular`` is NaN
    where a boost direction is undefined, ``translation`` is NaN where the
    dilations or boosts of the two sequences differ.
    """
    ns = np.arange(1, n_max + 1)
    out = {k: np.empty(ns.size) for k in ("lorentz", "rescaling", "angular", "translation")}
    for i, n in enumerate(ns):
        la, lb = a.lam(n), b.lam(n)
        ea, eb = a.ell(n), b.ell(n)
        out["lorentz"][i] = _ratio_sum(ea, eb)
        out["rescaling"][i] = _ratio_sum(la, lb)
        da, db = a.direction(n), b.direction(n)
        out["angular"][i] = np.nan if da is None or db is None else ea * np.linalg.norm(da - db)
        same = np.isclose(la, lb, rtol=1e-12, atol=0) and np.allclose(
            a.beta(n), b.beta(n), rtol=1e-12, atol=1e-15)
        if same:
            vec = la * np.concatenate(([a.t(n) - b.t(n)], a.x(n) - b.x(n)))
            out["translation"][i] = np.linalg.norm(general_boost_matrix(BoostParams(tuple(a.beta(n)))) @ vec)
        else:
            out["translation"][i] = np.nan
    return ns, out


def _diverges(seq, threshold):
    if np.any(np.isnan(seq)):
        return False
    half = seq[len(seq) // 2:]
    return bool(seq[-1] > threshold and np.all(np.diff(half) > 0))


def _bounded(seq, threshold):
    finite = seq[~np.isnan(seq)]
    return bool(finite.size == 0 or np.max(finite) <= threshold)


def classify(a, b, n_max=32, grow_threshold=DEFAULT_THRESHOLD):
    """Decide which orthogonality property (if any) the pair satisfies.

    A property holds when its indicator exceeds ``grow_threshold`` at
    ``n_max`` and increases strictly over the last half of the range. The
    angular property additionally requires comparable dilations and
    ``ell`` values (their ratio sums stay below the threshold); the
    translation property requires equal dilations and boosts.
    """
    if n_max < 8:
        raise ConfigError("classify needs n_max >= 8")
    ns, ind = indicator_sequences(a, b, n_max)
    notes = []
    comparable = _bounded(ind["rescaling"], grow_threshold) and _bounded(ind["lorentz"], grow_threshold)
    if np.all(np.isnan(ind["angular"])):
        notes.append("angular skipped: zero boost, direction undefined")
    elif np.any(np.isnan(ind["angular"])):
        notes.append("angular undefined at some n (zero boost)")
    if np.all(np.isnan(ind["translation"])):
        notes.append("translation skipped: dilations or boosts differ")

    checks = [
        ("lorentz", _diverges(ind["lorentz"], grow_threshold)),
        ("rescaling", _diverges(ind["rescaling"], grow_threshold)),
        ("angular", comparable and _diverges(ind["angular"], grow_threshold)),
        ("translation", _diverges(ind["translation"], grow_threshold)),
    ]
    for kind, holds in checks:
        if holds:
            return OrthogonalityVerdict(kind, float(ind[kind][-1]), ind, notes)
    if all(_bounded(ind[k], grow_threshold) for k in ind):
        last = max(float(np.nanmax(v)) if not np.all(np.isnan(v)) else 0.0 for v in ind.values())
        return OrthogonalityVerdict("none", last, ind, notes)
    worst = max(ind, key=lambda k: np.nan_to_num(ind[k][-1], nan=-np.inf))
    notes.append(f"{worst} exceeds the threshold without monotone growth")
    return OrthogonalityVerdict("inconclusive", float(ind[worst][-1]), ind, notes)


def _mapped_nodes(nodes, mu, tau):
    return np.arctan(mu * np.tan(nodes) + tau)


def mixed_integral(w1, w2, mu, tau, alpha, nodes=None):
    """``int |w1|^alpha |mu w2(mu t + tau, mu x)|^(4 - alpha) dt dx``.

    In Penrose variables the dilation and time shift act separately on each
    null coordinate, ``X' = arctan(mu tan X + tau)``, and ``U -> U(X')`` is
    exactly the rescaled solution (the factor ``mu`` cancels against
    ``r``). Both fields are evaluated by interpolation on a Gauss grid with
    ``nodes`` points per axis (default: the grid of ``w1``).
    """
    grid = square_grid(nodes or w1.grid.n)
    own = w1.grid.interpolation(grid.nodes)
    mapped = w2.grid.interpolation(_mapped_nodes(grid.nodes, mu, tau))
    u1 = own @ w1.values @ own.T
    u2 = mapped @ w2.values @ mapped.T
    integrand = np.abs(u1) ** alpha * np.abs(u2) ** (4.0 - alpha)
    return 4.0 * np.pi * grid.integrate(grid.divide_sin2(integrand))


def converged_mixed_integral(w1, w2, mu, tau, alpha, rtol=MIXED_RTOL, max_nodes=MAX_MIXED_NODES):
    """:func:`mixed_integral` on doubled grids until the value settles.

    The resampled field can develop layers of width ``~1/mu`` or
    ``~1/|tau|`` near the edges of the square; the quadrature grid is
    doubled (starting from twice the field grid) until two successive values
    agree to ``rtol``. Returns ``(value, nodes, converged)``.
    """
    m = 2 * w1.grid.n
    prev = mixed_integral(w1, w2, mu, tau, alpha, m)
    while 2 * m <= max_nodes:
        m *= 2
        value = mixed_integral(w1, w2, mu, tau, alpha, m)
        if abs(value - prev) <= rtol * abs(value):
            return value, m, True
        prev = value
    return prev, m, False


@dataclass
class DecayResult:
    n: np.ndarray
    values: np.ndarray
    frames: list
    nodes: list
    converged: np.ndarray


def mixed_l4_decay(w1, w2, a, b, alpha, n_list, rtol=MIXED_RTOL, max_nodes=MAX_MIXED_NODES):
    """Mixed integrals ``int |lam1 w1(Lambda1)|^alpha |lam2 w2(Lambda2)|^(4-alpha)``.

    Sequences must consist of dilations and time translations. The
    integral is invariant under a common transformation, so it is computed
    in the rest frame of one factor with the other resampled:

    * ``alpha = 4`` (``alpha = 0``) uses the frame of ``w1`` (``w2``), so the
      single remaining norm is exactly invariant;
    * otherwise the frame with the larger dilation is used, so that the
      resampled factor is spread out rather than concentrated.

    ``converged`` flags entries whose grid refinement hit ``max_nodes``.
    """
    if not (a.radial and b.radial):
        raise DomainError("mixed_l4_decay supports dilations and time translations only")
    if not 0.0 <= alpha <= 4.0:
        raise DomainError("alpha must lie in [0, 4]")
    if not isinstance(w1, Field) or not isinstance(w2, Field):
        raise DomainError("w1 and w2 must be Penrose fields")
    values, frames, nodes, ok = [], [], [], []
    for n in n_list:
        l1, l2 = a.lam(n), b.lam(n)
        t1, t2 = a.t(n), b.t(n)
        if alpha == 4.0 or (alpha != 0.0 and l1 >= l2):
            v, m, c = converged_mixed_integral(w1, w2, l2 / l1, l2 * (t1 - t2), alpha, rtol, max_nodes)
            frames.append(1)
        else:
            v, m, c = converged_mixed_integral(w2, w1, l1 / l2, l1 * (t2 - t1), 4.0 - alpha,
                                               rtol, max_nodes)
            frames.append(2)
        values.append(v)
        nodes.append(m)
        ok.append(c)
    return DecayResult(np.asarray(list(n_list)), np.array(values), frames, nodes, np.array(ok))
