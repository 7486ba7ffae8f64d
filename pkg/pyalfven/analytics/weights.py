# Standard:
import logging
from dataclasses import dataclass, field, replace

# External:
import numpy as np
from scipy import integrate, special
from scipy.signal import fftconvolve

# Internal:
from ..fields.grid import Grid
from ..fields.interpolation import interpolate_data
from ..utils.errors import QuadratureError

# Constants:
from ..utils.constants import (DEFAULT_C0, DEFAULT_DELTA, HERMITE_NODES, QUAD_TOL, TRUNCATION_RADIUS,
                               WEIGHT_UNDERFLOW, ESTIMATOR_SLACK)
from ..utils.mappings import WEIGHT_KINDS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightSpec:
    """
    Closed family of positive weight functions ``h(t, X)``.

    Notes
    -----
    1. Kinds:
       - ``unit``: ``h = 1``.
       - ``powerf0``: ``f₀(x₁) = (C₀ + x₁²)^{-(1+δ)/2}``.
       - ``phi1``: ``(ε² + x₁² + x₂²)^{-(1+δ)/2}``; ``phi0``: ``(ε² + x₂²)^{-δ/2}``.
       - ``heat``: ``H(τ)base`` with ``τ = t0 + 2μ₁t`` and ``H(τ)`` the Gaussian of variance ``2τ`` per axis.
       - ``shifted``: ``base(t, X + sign·B₀t)``, so ``sign = +1`` is ``f₊``.
       - ``convg``: ``g(t, X) = ∫ base₊(t, Y) base₋(t, Y) / (1 + |X - Y|^{d+1}) dY``.
    2. ``heat`` of ``phi1`` / ``phi0`` is evaluated in closed form (Kummer functions); any other base uses
       Gauss–Hermite quadrature. The closed forms use the exact singular base, ``ε`` only enters direct evaluations.
    3. ``B₀ = (1, 0, ..., 0)``.
    """
    # Data Class Attributes:
    kind: str = 'unit'
    c0: float = DEFAULT_C0
    delta: float = DEFAULT_DELTA
    eps: float = 0.0
    mu1: float = 0.0
    t0: float = 0.0
    sign: int = 1
    base: 'WeightSpec | None' = field(default=None)

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise KeyError(f"Input Error: unknown weight kind '{self.kind}'.")
        if self.kind == 'powerf0' and not (self.c0 > 1.0 and 0.0 < self.delta < 1.0):
            raise ValueError(f"Input Error: powerf0 needs C₀ > 1 and δ ∈ (0,1), got C₀={self.c0}, δ={self.delta}.")
        if self.kind in ('phi1', 'phi0') and not 0.0 < self.delta < 0.5:
            raise ValueError(f"Input Error: {self.kind} needs δ ∈ (0,1/2), got δ={self.delta}.")
        if self.kind in ('heat', 'shifted', 'convg') and self.base is None:
            raise ValueError(f"Input Error: '{self.kind}' weights need a base weight.")
        if self.kind == 'shifted' and self.sign not in (1, -1):
            raise ValueError(f"Input Error: shift sign must be ±1, got {self.sign}.")
        if self.mu1 < 0.0 or self.t0 < 0.0:
            raise ValueError("Input Error: heat parameters μ₁ and t0 must be nonnegative.")

    # ------------------------------------------------------------------------------------------------------------------
    # Constructors:
    # ------------------------------------------------------------------------------------------------------------------
    @classmethod
    def unit(cls) -> 'WeightSpec':
        return cls(kind='unit')

    @classmethod
    def power_f0(cls, c0: float = DEFAULT_C0, delta: float = DEFAULT_DELTA) -> 'WeightSpec':
        return cls(kind='powerf0', c0=c0, delta=delta)

    @classmethod
    def phi1(cls, delta: float = DEFAULT_DELTA, eps: float = 0.0) -> 'WeightSpec':
        return cls(kind='phi1', delta=delta, eps=eps)

    @classmethod
    def phi0(cls, delta: float = DEFAULT_DELTA, eps: float = 0.0) -> 'WeightSpec':
        return cls(kind='phi0', delta=delta, eps=eps)

    @classmethod
    def heat_evolved(cls, base: 'WeightSpec', mu1: float, t0: float = 1.0) -> 'WeightSpec':
        return cls(kind='heat', base=base, mu1=mu1, t0=t0)

    @classmethod
    def shifted(cls, base: 'WeightSpec', sign: int) -> 'WeightSpec':
        return cls(kind='shifted', base=base, sign=sign)

    @classmethod
    def conv_g(cls, base: 'WeightSpec') -> 'WeightSpec':
        return cls(kind='convg', base=base)

    @classmethod
    def viscous_f(cls, mu1: float, delta: float = DEFAULT_DELTA) -> 'WeightSpec':
        """``f(t) = H(1 + 2μ₁t)φ₁``."""
        return cls.heat_evolved(cls.phi1(delta), mu1=mu1, t0=1.0)

    @classmethod
    def viscous_f1(cls, mu1: float, delta: float = DEFAULT_DELTA) -> 'WeightSpec':
        """``f₁(t) = H(1 + 2μ₁t)φ₀``."""
        return cls.heat_evolved(cls.phi0(delta), mu1=mu1, t0=1.0)

    # ------------------------------------------------------------------------------------------------------------------
    # Canonical text form:
    # ------------------------------------------------------------------------------------------------------------------
    def to_text(self) -> str:
        """
        Canonical text, e.g. ``powerf0:c0=2,delta=0.25`` or ``heat(phi1:delta=0.25,eps=0):mu1=1,t0=1``.
        """
        params = ','.join(f"{name}={_fmt(getattr(self, name))}" for name in WEIGHT_KINDS[self.kind])
        head = self.kind if self.base is None else f"{self.kind}({self.base.to_text()})"
        return f"{head}:{params}" if params else head

    @classmethod
    def from_text(cls, text: str) -> 'WeightSpec':
        """Parses the canonical text form (whitespace-insensitive)."""
        text = ''.join(text.split())
        base = None
        if '(' in text:
            kind, rest = text.split('(', 1)
            depth, close = 1, None
            for i, ch in enumerate(rest):
                depth += {'(': 1, ')': -1}.get(ch, 0)
                if depth == 0:
                    close = i
                    break
            if close is None:
                raise ValueError(f"Input Error: unbalanced parentheses in weight text '{text}'.")
            base = cls.from_text(rest[:close])
            tail = rest[close + 1:]
            params = tail[1:] if tail.startswith(':') else tail
        else:
            kind, _, params = text.partition(':')
        if kind not in WEIGHT_KINDS:
            raise KeyError(f"Input Error: unknown weight kind '{kind}'.")

        values = {}
        for item in filter(None, params.split(',')):
            name, _, raw = item.partition('=')
            if name not in WEIGHT_KINDS[kind]:
                raise ValueError(f"Input Error: weight kind '{kind}' takes no parameter '{name}'.")
            values[name] = int(float(raw)) if name == 'sign' else float(raw)
        return cls(kind=kind, base=base, **values)

    # ------------------------------------------------------------------------------------------------------------------
    # Properties:
    # ------------------------------------------------------------------------------------------------------------------
    @property
    def x_only(self) -> bool:
        """Whether the weight depends on ``x₁`` (and time) only."""
        if self.kind in ('unit', 'powerf0'):
            return True
        if self.kind in ('phi1', 'phi0'):
            return False
        return self.base.x_only

    @property
    def heat_rate(self) -> float:
        """The diffusion rate ``μ₁`` of the innermost heat evolution (0 if none)."""
        if self.kind == 'heat':
            return self.mu1
        return self.base.heat_rate if self.base is not None else 0.0

    def with_eps(self, eps: float) -> 'WeightSpec':
        """Copy with every direct φ-regularization set to ``eps``."""
        base = self.base.with_eps(eps) if self.base is not None else None
        return replace(self, eps=eps if self.kind in ('phi1', 'phi0') else self.eps, base=base)


def _fmt(value) -> str:
    return str(value) if isinstance(value, int) else np.format_float_positional(float(value), trim='-')


def unit_b0(d: int) -> np.ndarray:
    """``B₀ = (1, 0, ..., 0)`` in ``d`` dimensions."""
    b = np.zeros(d)
    b[0] = 1.0
    return b


def _shift(X: np.ndarray, vector: np.ndarray) -> np.ndarray:
    return X + vector.reshape((-1,) + (1,) * (X.ndim - 1))


"""
----------------------------------------------------------------------------------------------------
Evaluation
----------------------------------------------------------------------------------------------------
"""
def evaluate(h: WeightSpec, t: float, X) -> np.ndarray:
    """
    Evaluates a weight pointwise.

    Parameters
    ----------
    h : WeightSpec
        Weight of interest.

    t : float
        Time argument (ignored by static kinds).

    X : array-like
        Points of shape ``(d, ...)``.

    Returns
    -------
    np.ndarray
        Weight values of shape ``X.shape[1:]``.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    if h.kind == 'unit':
        return np.ones(X.shape[1:])
    if h.kind == 'powerf0':
        return (h.c0 + X[0] ** 2) ** (-(1.0 + h.delta) / 2.0)
    if h.kind == 'phi1':
        return (h.eps ** 2 + X[0] ** 2 + X[1] ** 2) ** (-(1.0 + h.delta) / 2.0)
    if h.kind == 'phi0':
        return (h.eps ** 2 + X[1] ** 2) ** (-h.delta / 2.0)
    if h.kind == 'shifted':
        return evaluate(h.base, t, _shift(X, h.sign * t * unit_b0(d)))
    if h.kind == 'heat':
        return heat_weight(h.base, h.t0 + 2.0 * h.mu1 * t, t, X)
    return g_weight(h.base, t, X)


def heat_weight(base: WeightSpec, tau: float, t: float, X: np.ndarray, nodes: int = HERMITE_NODES) -> np.ndarray:
    """
    ``H(τ)base`` at ``X``.

    Notes
    -----
    1. With ``σ² = 2τ`` and ``ρ² = x₁² + x₂²``:
       - ``H(τ)|x₂|^{-δ} = σ^{-δ} 2^{-δ/2} Γ((1-δ)/2)/√π · ₁F₁(δ/2; 1/2; -x₂²/(2σ²))``
       - ``H(τ)ρ^{-(1+δ)} = σ^{-(1+δ)} 2^{-(1+δ)/2} Γ((1-δ)/2) · ₁F₁((1+δ)/2; 1; -ρ²/(2σ²))``
    2. ``τ = 0`` returns the (regularized) base itself.
    """
    if tau <= 0.0:
        return evaluate(base, t, X)
    var = 2.0 * tau
    if base.kind == 'phi0':
        dl = base.delta
        scale = var ** (-dl / 2.0) * 2.0 ** (-dl / 2.0) * special.gamma((1.0 - dl) / 2.0) / np.sqrt(np.pi)
        return scale * special.hyp1f1(dl / 2.0, 0.5, -X[1] ** 2 / (2.0 * var))
    if base.kind == 'phi1':
        a = (1.0 + base.delta) / 2.0
        scale = var ** (-a) * 2.0 ** (-a) * special.gamma((1.0 - base.delta) / 2.0)
        return scale * special.hyp1f1(a, 1.0, -(X[0] ** 2 + X[1] ** 2) / (2.0 * var))
    return gauss_hermite_heat(lambda Y: evaluate(base, t, Y), tau, X, nodes=nodes)


def gauss_hermite_heat(func, tau: float, X: np.ndarray, nodes: int = HERMITE_NODES) -> np.ndarray:
    """
    Tensor Gauss–Hermite rule for ``H(τ)func(X) = π^{-d/2} Σ w f(X - 2√τ W)``.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    w_nodes, w_weights = special.roots_hermite(nodes)
    mesh = np.meshgrid(*[w_nodes] * d, indexing='ij')
    weights = np.prod(np.meshgrid(*[w_weights] * d, indexing='ij'), axis=0).ravel() / np.pi ** (d / 2.0)
    offsets = 2.0 * np.sqrt(tau) * np.stack([m.ravel() for m in mesh])
    flat = X.reshape(d, -1)
    points = flat[:, None, :] - offsets[:, :, None]
    values = func(points)
    return np.tensordot(weights, values, axes=1).reshape(X.shape[1:])


def kernel_tail_mass(d: int, radius: float) -> float:
    """``∫_{|Z| > radius} dZ / (1 + |Z|^{d+1})`` by adaptive quadrature."""
    surface = 2.0 * np.pi if d == 2 else 4.0 * np.pi
    value, err = integrate.quad(lambda r: r ** (d - 1) / (1.0 + r ** (d + 1)), radius, np.inf, epsabs=QUAD_TOL)
    if err > 1e-6:
        raise QuadratureError("kernel tail mass", err)
    return surface * value


def _lattice(d: int, radius: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss–Legendre tensor lattice on ``[-radius, radius]^d``."""
    x, w = special.roots_legendre(order)
    edges = np.linspace(-radius, radius, panels + 1)
    half = (edges[1] - edges[0]) / 2.0
    nodes = ((edges[:-1] + edges[1:]) / 2.0)[:, None] + half * x[None, :]
    weights = np.broadcast_to(half * w, nodes.shape)
    mesh = np.meshgrid(*[nodes.ravel()] * d, indexing='ij')
    wmesh = np.meshgrid(*[weights.ravel()] * d, indexing='ij')
    return np.stack([m.ravel() for m in mesh]), np.prod(wmesh, axis=0).ravel()


def g_radius(f: WeightSpec, t: float) -> float:
    """Local quadrature radius ``8·max(1, √(1 + μ₁t))``."""
    return TRUNCATION_RADIUS * max(1.0, np.sqrt(1.0 + f.heat_rate * t))


def kernel_average(func, X, radius: float, order: int = 4, chunk: int = 256) -> np.ndarray:
    """
    ``∫ func(Y) / (1 + |X - Y|^{d+1}) dY`` by local quadrature plus a tail estimate.

    Notes
    -----
    1. Composite Gauss–Legendre quadrature on the cube of half-width ``radius`` around each point, unit panels.
    2. Beyond the cube the largest integrand value on the outer lattice layer times the kernel mass outside the
       inscribed ball is added; this bounds the tail whenever ``func`` does not increase away from ``X``.

    Parameters
    ----------
    func : callable
        Maps points of shape ``(d, ...)`` to values of shape ``(...)``.

    X : array-like
        Points of shape ``(d, ...)``.

    radius : float
        Half-width of the local cube.

    order : int, default=4
        Gauss–Legendre nodes per unit panel.

    chunk : int, default=256
        Points processed per vectorized batch.

    Returns
    -------
    np.ndarray
        Kernel averages at the points.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    offsets, weights = _lattice(d, radius, int(np.ceil(2 * radius)), order)
    kernel = weights / (1.0 + np.sqrt(np.sum(offsets ** 2, axis=0)) ** (d + 1))
    outer = np.max(np.abs(offsets), axis=0) >= np.max(np.abs(offsets)) - 1e-12
    tail_mass = kernel_tail_mass(d, radius)

    flat = X.reshape(d, -1)
    out = np.empty(flat.shape[1])
    for start in range(0, flat.shape[1], chunk):
        values = func(flat[:, None, start:start + chunk] + offsets[:, :, None])
        out[start:start + chunk] = kernel @ values + tail_mass * values[outer].max(axis=0)
    return out.reshape(X.shape[1:])


def g_weight(f: WeightSpec, t: float, X, order: int = 4) -> np.ndarray:
    """
    The convolution weight ``g(t, X) = ∫ f(t, Y + B₀t) f(t, Y - B₀t) / (1 + |X - Y|^{d+1}) dY``.

    Parameters
    ----------
    f : WeightSpec
        The base weight ``f`` (static or heat-evolved).

    t : float
        Time.

    X : array-like
        Points of shape ``(d, ...)``.

    order : int, default=4
        Gauss–Legendre nodes per unit panel.

    Returns
    -------
    np.ndarray
        ``g`` at the points.
    """
    X = np.asarray(X, dtype=float)
    b = t * unit_b0(X.shape[0])
    return kernel_average(lambda Y: evaluate(f, t, _shift(Y, b)) * evaluate(f, t, _shift(Y, -b)),
                          X, g_radius(f, t), order=order)


def g_weight_grid(f: WeightSpec, t: float, grid: Grid) -> np.ndarray:
    """
    ``g(t, ·)`` at the nodes of ``grid`` by one FFT convolution on a padded free-space lattice.

    Notes
    -----
    1. The lattice has the grid spacing and covers the grid's bounding box plus ``g_radius`` on every side; the
       integration runs over all of ``ℝ^d`` regardless of the grid geometry.
    2. Every lattice pair is included; beyond the lattice the largest boundary-layer value times the kernel mass
       outside ``g_radius`` is added.
    """
    d, h = grid.d, grid.spacing
    pad = int(np.ceil(g_radius(f, t) / h))
    counts = [grid.shape[k] + 2 * pad for k in range(d)]
    axes = [grid.origins[k] + h * (np.arange(counts[k]) - pad) for k in range(d)]
    Y = np.stack(np.meshgrid(*axes, indexing='ij'))
    b = t * unit_b0(d)
    product = evaluate(f, t, _shift(Y, b)) * evaluate(f, t, _shift(Y, -b))

    offs = [h * np.arange(-(n - 1), n) for n in counts]
    Z = np.stack(np.meshgrid(*offs, indexing='ij'))
    stencil = h ** d / (1.0 + np.sqrt(np.sum(Z ** 2, axis=0)) ** (d + 1))
    smooth = fftconvolve(product, stencil, mode='same')

    layer = max(np.max(np.abs(np.moveaxis(product, k, 0)[[0, -1]])) for k in range(d))
    core = tuple(slice(pad, pad + grid.shape[k]) for k in range(d))
    return smooth[core] + layer * kernel_tail_mass(d, pad * h)


def sample(h: WeightSpec, grid: Grid, t: float = 0.0) -> np.ndarray:
    """
    Weight values at every node of ``grid``.

    Raises
    ------
    ValueError
        If the weight underflows ``1e-300`` anywhere on the grid.
    """
    if h.kind == 'convg':
        values = g_weight_grid(h.base, t, grid)
    else:
        values = np.broadcast_to(evaluate(h, t, grid.coordinates), grid.shape)
    if np.min(values) < WEIGHT_UNDERFLOW:
        raise ValueError(f"Input Error: weight '{h.to_text()}' underflows on the grid (min {np.min(values):.3e}).")
    return np.asarray(values, dtype=float)


"""
----------------------------------------------------------------------------------------------------
Structural Checks
----------------------------------------------------------------------------------------------------
"""
@dataclass(frozen=True)
class WeightCheckReport:
    """
    Outcome of one sampled weight condition.

    Parameters
    ----------
    condition : str
        Condition identifier (e.g. 'ass-f:delta').

    value : float
        Sampled supremum of the relevant functional.

    bound : float
        The bound it must respect.

    slack : float, default=0.05
        Relative slack allowed on top of ``bound``.

    details : dict
        Auxiliary sampled quantities.
    """
    # Data Class Attributes:
    condition: str
    value: float
    bound: float
    slack: float = ESTIMATOR_SLACK
    details: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.bound * (1.0 + self.slack))


def delta_T(f: WeightSpec, T: float, t: float = 0.0, lattice=None) -> float:
    """
    ``δ(T) = sup_Y ∫_{-T}^{T} f(Y + 2B₀s) ds`` over a sample lattice of ``Y``.

    Parameters
    ----------
    f : WeightSpec
        Weight of interest (evaluated at time ``t``).

    T : float
        Half-length of the time window, ``T > 0``.

    t : float, default=0.0
        Time at which a time-dependent weight is frozen.

    lattice : np.ndarray | None
        Sample points ``(d, m)``; default is the cube ``[-4, 4]^2`` with spacing 0.5.

    Returns
    -------
    float
        Sampled ``δ(T)``.

    Raises
    ------
    QuadratureError
        If the line integrals do not converge.
    """
    if not T > 0:
        raise ValueError(f"Input Error: δ(T) needs T > 0, got T={T}.")
    if lattice is None:
        axis = np.linspace(-4.0, 4.0, 17)
        lattice = np.stack([m.ravel() for m in np.meshgrid(axis, axis, indexing='ij')])
    b = unit_b0(lattice.shape[0])
    value, err = integrate.quad_vec(lambda s: evaluate(f, t, _shift(lattice, 2.0 * s * b)), -T, T,
                                    epsabs=1e-9, epsrel=1e-8, limit=400)
    if err > 1e-6 * max(1.0, np.max(value)):
        raise QuadratureError("δ(T) line integrals", err)
    return float(np.max(value))


def delta_limit(f: WeightSpec) -> float:
    """``lim_{T→∞} δ(T) = ½∫f₀`` for the power family."""
    if f.kind != 'powerf0':
        raise ValueError("Input Error: the closed-form δ(∞) exists for powerf0 weights only.")
    a = (1.0 + f.delta) / 2.0
    return 0.5 * f.c0 ** (-f.delta / 2.0) * np.sqrt(np.pi) * special.gamma(f.delta / 2.0) / special.gamma(a)


def doubling_ratio(f: WeightSpec, radius: float = 2.0, extent: float = 40.0, samples: int = 8001) -> float:
    """
    ``sup_{|X-Y| ≤ radius} f(X)/f(Y)`` for weights depending on ``x₁`` only.
    """
    if not f.x_only:
        raise ValueError("Input Error: the doubling scan needs a weight depending on x₁ only.")
    x = np.linspace(-extent, extent, samples)
    shifts = np.linspace(-radius, radius, 41)
    X = np.stack([x, np.zeros_like(x)])
    fx = evaluate(f, 0.0, X)
    ratios = [fx / evaluate(f, 0.0, _shift(X, np.array([s, 0.0]))) for s in shifts]
    return float(np.max(ratios))


def check_ass_f(f: WeightSpec, C1: float, T: float = 100.0, order: int = 4) -> list[WeightCheckReport]:
    """
    Samples the three lines of the one-directional decay condition on ``f``.

    Notes
    -----
    1. Line 1: ``δ(T) ≤ C₁`` (``T`` large stands in for the supremum over ``T``).
    2. Line 2: ``∫ f(Y)/(1 + |X - Y|^{d+1}) dY ≤ C₁ f(X)``, sampled along the ``x₁`` axis.
    3. Line 3: ``f(X) ≤ 2 f(Y)`` for ``|X - Y| ≤ 2``.

    Parameters
    ----------
    f : WeightSpec
        A ``powerf0`` weight.

    C1 : float
        The constant to check against.

    T : float, default=100.0
        Window used for line 1.

    order : int, default=4
        Gauss–Legendre nodes per panel in the line-2 quadrature.

    Returns
    -------
    list[WeightCheckReport]
        Reports for the three lines.
    """
    if f.kind != 'powerf0':
        raise ValueError("Input Error: check_ass_f applies to powerf0 weights.")
    x1 = np.linspace(-24.0, 24.0, 25)
    X = np.stack([x1, np.zeros_like(x1)])
    conv = kernel_average(lambda Y: evaluate(f, 0.0, Y), X, TRUNCATION_RADIUS, order=order)
    line2 = float(np.max(conv / evaluate(f, 0.0, X)))
    return [
        WeightCheckReport('ass-f:delta', delta_T(f, T), C1, details={'T': T, 'limit': delta_limit(f)}),
        WeightCheckReport('ass-f:convolution', line2, C1),
        WeightCheckReport('ass-f:doubling', doubling_ratio(f), 2.0, slack=0.0),
    ]


def comparability(h: WeightSpec, t: float = 0.0, radius: float = 2.0, extent: float = 12.0,
                  step: float = 0.5) -> float:
    """
    ``sup h(X)/h(Y)`` over sampled pairs with ``|X - Y| ≤ radius``.
    """
    axis = np.arange(-extent, extent + step / 2, step)
    X = np.stack([m.ravel() for m in np.meshgrid(axis, axis, indexing='ij')])
    angles = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
    hx = evaluate(h, t, X)
    worst = 1.0
    for r in (radius / 2.0, radius):
        for a in angles:
            Y = _shift(X, r * np.array([np.cos(a), np.sin(a)]))
            worst = max(worst, float(np.max(hx / evaluate(h, t, Y))))
    return worst


def check_lemma33(f: WeightSpec, t: float, T: float, order: int = 4) -> WeightCheckReport:
    """
    Samples the three lines of the ``g`` lemma for a static weight ``f``.

    Notes
    -----
    1. Line 1: ``f(X + B₀t) f(X - B₀t) ≤ C g(t, X)``.
    2. Line 2: ``g(t, X) ≤ C (1 + |X - Y|)^{d+1} g(t, Y)``.
    3. Line 3: ``∫_{-T}^{T} g(s, X ± B₀s) ds ≤ C δ(T) f(X)`` (8-point Gauss–Legendre in ``s``).
    4. ``value`` is the largest of the three sampled constants; each is kept in ``details``.
    """
    x1 = np.linspace(-12.0, 12.0, 9)
    X = np.stack([x1, np.full_like(x1, 0.5)])
    b = t * unit_b0(2)
    g = g_weight(f, t, X, order=order)
    line1 = float(np.max(evaluate(f, t, _shift(X, b)) * evaluate(f, t, _shift(X, -b)) / g))

    Y = _shift(X, np.array([3.0, 0.0]))
    gy = g_weight(f, t, Y, order=order)
    line2 = float(np.max(g / (gy * 4.0 ** 3)))

    nodes, weights = special.roots_legendre(8)
    s_nodes, s_weights = T * nodes, T * weights
    line3 = 0.0
    for sign in (1, -1):
        total = sum(w * g_weight(f, s, _shift(X, sign * s * unit_b0(2)), order=order)
                    for s, w in zip(s_nodes, s_weights))
        line3 = max(line3, float(np.max(total / (delta_T(f, T) * evaluate(f, 0.0, X)))))
    value = max(line1, line2, line3)
    return WeightCheckReport('lemma-g', value, np.inf, details={'line1': line1, 'line2': line2, 'line3': line3})


def check_w2(pair: tuple[str, str], sign: int, mu1: float, T: float, delta: float = DEFAULT_DELTA,
             c0_inv: float = np.inf, n_times: int = 8, hermite: int = 12, extent: float = 8.0) -> WeightCheckReport:
    """
    Samples the three lines of the transport-diffusion weight property for a registered ``(f̂, h)`` pair.

    Notes
    -----
    1. Pairs: ``('f', 'g')``, ``('f1', 'f-')`` (minus sign) and ``('f1', 'f+')`` (plus sign), with
       ``f(t) = H(1 + 2μ₁t)φ₁`` and ``f₁(t) = H(1 + 2μ₁t)φ₀``.
    2. Line 1, ``∫₀ᵗ H(2μ₁(t-s)) h_±(s, X) ds ≤ c₀⁻¹ f̂(t, X)``. For ``h = f∓`` the heat flow acts exactly and the
       integrand reduces to ``f(t, X ± 2B₀s)`` (adaptive quadrature). For ``h = g`` the heat flow is a
       ``hermite``-node Gauss–Hermite rule on an interpolated FFT sample of ``g(s)`` at ``n_times`` Gauss–Legendre
       times.
    3. Line 2, ``∫₀ᵀ f(t, X ± 2B₀t) dt ≤ c₀⁻¹``.
    4. Line 3, ``H(2μ₁(t-s)) f̂(s) ≤ c₀⁻¹ f̂(t)`` by Gauss–Hermite against the closed form.

    Parameters
    ----------
    pair : tuple[str, str]
        Registered pair.

    sign : int
        ±1, the sign of the property.

    mu1 : float
        Diffusion rate ``μ₁ > 0``.

    T : float
        Time horizon.

    delta : float, default=0.25
        Decay exponent of ``φ₁``, ``φ₀``.

    c0_inv : float, default=inf
        Bound to report against; ``inf`` makes the check "finite".

    n_times, hermite : int
        Lattice sizes of the ``(f, g)`` line-1 evaluation.

    extent : float, default=8.0
        Half-width of the sampled ``X`` lattice.

    Returns
    -------
    WeightCheckReport
        ``value`` is the largest sampled ratio over the three lines.
    """
    if pair not in (('f', 'g'), ('f1', 'f-'), ('f1', 'f+')):
        raise ValueError(f"Input Error: unregistered weight pair {pair}.")
    if pair[0] == 'f1' and pair[1] != ('f-' if sign < 0 else 'f+'):
        raise ValueError(f"Input Error: pair {pair} belongs to the opposite sign.")
    f = WeightSpec.viscous_f(mu1, delta)
    f1 = WeightSpec.viscous_f1(mu1, delta)
    f_hat = f if pair[0] == 'f' else f1
    axis = np.linspace(-extent, extent, 5)
    X = np.stack([m.ravel() for m in np.meshgrid(axis, axis, indexing='ij')])
    b = unit_b0(2)
    times = T * np.arange(1, 5) / 4.0

    line1 = 0.0
    for t in times:
        if pair[0] == 'f1':
            total, _ = integrate.quad_vec(lambda s: evaluate(f, t, _shift(X, sign * 2.0 * s * b)), 0.0, t,
                                          epsabs=1e-10, epsrel=1e-8)
        else:
            total = _heat_integral_g(f, t, X, sign, mu1, n_times, hermite)
        line1 = max(line1, float(np.max(total / evaluate(f_hat, t, X))))

    line2, _ = integrate.quad_vec(lambda s: evaluate(f, s, _shift(X, sign * 2.0 * s * b)), 0.0, T,
                                  epsabs=1e-10, epsrel=1e-8)
    line2 = float(np.max(line2))

    line3 = 0.0
    for t in times:
        for s in (0.0, t / 2.0):
            smoothed = gauss_hermite_heat(lambda Y: evaluate(f_hat, s, Y), 2.0 * mu1 * (t - s), X)
            line3 = max(line3, float(np.max(smoothed / evaluate(f_hat, t, X))))
    value = max(line1, line2, line3)
    return WeightCheckReport(f"W2:{pair[0]},{pair[1]}", value, c0_inv,
                             details={'line1': line1, 'line2': line2, 'line3': line3})


def _heat_integral_g(f: WeightSpec, t: float, X: np.ndarray, sign: int, mu1: float, n_times: int,
                     hermite: int) -> np.ndarray:
    """``∫₀ᵗ H(2μ₁(t-s)) g(s, · ± B₀s)(X) ds`` on a Gauss–Legendre time lattice."""
    nodes, weights = special.roots_legendre(n_times)
    s_nodes, s_weights = t * (nodes + 1.0) / 2.0, t * weights / 2.0
    reach = float(np.max(np.abs(X))) + t + 6.0 * np.sqrt(2.0 * mu1 * t + 1.0)
    helper = Grid(d=2, L=2.0 * np.ceil(reach / 2.0), N=int(8 * np.ceil(reach / 2.0)))
    total = np.zeros(X.shape[1:])
    for s, w in zip(s_nodes, s_weights):
        g = g_weight_grid(f, s, helper)
        shifted = lambda Y, s=s, g=g: interpolate_data(g, helper, _shift(Y, sign * s * unit_b0(2)))[0]
        total += w * gauss_hermite_heat(shifted, 2.0 * mu1 * (t - s), X, nodes=hermite)
    return total


def check_sandwich(which: str, mu1: float, delta: float = DEFAULT_DELTA, T: float = 10.0) -> WeightCheckReport:
    """
    Samples ``C⁻¹ min(φ_k(X), (1+μ₁t)^{-(k+δ)/2}) ≤ f̂(t, X) ≤ C min(...)`` for ``f̂ = f`` (k=1) or ``f₁`` (k=0).

    Returns
    -------
    WeightCheckReport
        ``value`` is the smallest admissible ``C``.
    """
    k = {'f': 1, 'f1': 0}[which]
    spec = WeightSpec.viscous_f(mu1, delta) if k else WeightSpec.viscous_f1(mu1, delta)
    base = WeightSpec.phi1(delta) if k else WeightSpec.phi0(delta)
    axis = np.concatenate([-np.geomspace(0.05, 40.0, 12)[::-1], [0.0], np.geomspace(0.05, 40.0, 12)])
    X = np.stack([m.ravel() for m in np.meshgrid(axis, axis, indexing='ij')])
    worst = 1.0
    for t in np.concatenate([[0.0], np.geomspace(0.1, T, 6)]):
        bound = np.minimum(evaluate(base, t, X), (1.0 + mu1 * t) ** (-(k + delta) / 2.0))
        ratio = evaluate(spec, t, X) / bound
        worst = max(worst, float(np.max(ratio)), float(1.0 / np.min(ratio)))
    return WeightCheckReport(f"sandwich:{which}", worst, np.inf)


def ball_average(func, X: np.ndarray, R: float, radial: int = 16, angular: int = 32) -> np.ndarray:
    """
    ``R^{-d} ∫_{B(X,R)} func(Y) dY`` in d = 2 by Gauss–Legendre in radius and the trapezoid rule in angle.
    """
    nodes, weights = special.roots_legendre(radial)
    r = R * (nodes + 1.0) / 2.0
    wr = R * weights / 2.0 * r
    a = np.linspace(0.0, 2.0 * np.pi, angular, endpoint=False)
    wa = 2.0 * np.pi / angular
    offsets = np.stack([np.outer(r, np.cos(a)).ravel(), np.outer(r, np.sin(a)).ravel()])
    w = np.repeat(wr, angular) * wa
    values = func(X[:, None, :] + offsets[:, :, None])
    return (w @ values) / R ** 2


def check_f2(h: WeightSpec, t: float, R: float, mu1: float, delta: float = DEFAULT_DELTA,
             X: np.ndarray | None = None) -> WeightCheckReport:
    """
    Samples ``R^{-d} ∫_{B(X,R)} h(Y) f₁(t,Y) dY ≤ C h(X) min(R^{-δ}, (1+μ₁t)^{-δ/2})``.

    Notes
    -----
    1. Default samples combine a coarse lattice with the annulus ``2√(1+μ₁t) ≤ |x₂| ≤ 2R`` where the bound is
       tightest for ``h = f(t)``.

    Returns
    -------
    WeightCheckReport
        ``value`` is the sampled constant ``C``.
    """
    f1 = WeightSpec.viscous_f1(mu1, delta)
    if X is None:
        axis = np.linspace(-16.0, 16.0, 9)
        lattice = np.stack([m.ravel() for m in np.meshgrid(axis, axis, indexing='ij')])
        lo, hi = 2.0 * np.sqrt(1.0 + mu1 * t), max(2.0 * R, 2.0 * np.sqrt(1.0 + mu1 * t) + 1.0)
        x2 = np.linspace(lo, hi, 5)
        annulus = np.stack([np.zeros_like(x2), x2])
        X = np.concatenate([lattice, annulus], axis=1)
    avg = ball_average(lambda Y: evaluate(h, t, Y) * evaluate(f1, t, Y), X, R)
    scale = evaluate(h, t, X) * min(R ** (-delta), (1.0 + mu1 * t) ** (-delta / 2.0))
    return WeightCheckReport(f"f2:{h.kind}", float(np.max(avg / scale)), np.inf)
