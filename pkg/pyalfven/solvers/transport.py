# Standard:
import logging
import math
from dataclasses import dataclass

# External:
import numpy as np
from scipy.integrate import trapezoid

# Internal:
from ..analytics.holder import norm_0alpha, seminorm_alpha
from ..analytics.weights import WeightSpec, evaluate
from ..fields.core import Field, FieldHistory, MatrixField, VectorField
from ..fields.calculus import flux_divergence, vector_gradient
from ..fields.grid import Grid
from ..fields.interpolation import interpolate_data
from ..operators.heat import heat_apply
from ..utils.errors import CFLViolation

# Constants:
from ..utils.constants import B0, CFL_FRACTION, DEFAULT_ALPHA, MAX_SUBSTEPS, ODE_TOL, TIME_SLICES

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowMap:
    """
    Characteristic map ``Φ(s, t, X)`` of a drift sampled at the grid nodes.

    Notes
    -----
    1. ``positions[:, node] = Φ(s, t, X_node)``; periodic coordinates are left unwrapped.
    2. ``jacobian[i, j] = ∂_iΦ^j`` integrated along with the positions by the variational equation.

    Parameters
    ----------
    s, t : float
        Start and end time.

    grid : Grid
        Grid of the seed nodes.

    positions : np.ndarray
        Shape ``(d, *grid.shape)``.

    jacobian : np.ndarray
        Shape ``(d, d, *grid.shape)``.

    substeps : int
        RK4 substeps taken.
    """
    # Data Class Attributes:
    s: float
    t: float
    grid: Grid
    positions: np.ndarray
    jacobian: np.ndarray
    substeps: int = 0

    @property
    def determinant(self) -> np.ndarray:
        return np.linalg.det(np.moveaxis(self.jacobian, (0, 1), (-2, -1)))

    @property
    def displacement(self) -> np.ndarray:
        return self.positions - self.grid.coordinates

    def position_field(self) -> VectorField:
        """Positions as a vector field (the serialized form of a map)."""
        return VectorField(self.grid, self.positions)

    def jacobian_field(self) -> MatrixField:
        return MatrixField(self.grid, self.jacobian)

    def identity_deviation(self) -> float:
        """``|∇Φ - Id|₀`` (Frobenius per node)."""
        eye = np.eye(self.grid.d).reshape((self.grid.d, self.grid.d) + (1,) * self.grid.d)
        return float(np.sqrt(np.sum((self.jacobian - eye) ** 2, axis=(0, 1))).max())


def _history(Z) -> FieldHistory:
    return Z if isinstance(Z, FieldHistory) else FieldHistory.constant(Z)


def _gradient_history(Z: FieldHistory) -> FieldHistory:
    return FieldHistory(times=Z.times, slices=tuple(vector_gradient(z) for z in Z.slices))


def substep_bound(Z: FieldHistory, dt: float = math.inf, tol: float = ODE_TOL) -> float:
    """
    RK4 substep ``min(0.5 Δ/|Z|₀, dt, tol^{1/4}/max|∇Z|)`` over all stored slices.
    """
    grid = Z.grid
    speed = max(z.max_abs() for z in Z.slices)
    shear = max(vector_gradient(z).max_abs() for z in Z.slices)
    bound = dt
    if speed > 0:
        bound = min(bound, CFL_FRACTION * grid.spacing / speed)
    if shear > 0:
        bound = min(bound, tol ** 0.25 / shear)
    return bound


def _rk4_path(Z: FieldHistory, gradZ: FieldHistory, times: list[float], points: np.ndarray, h_max: float,
              with_jacobian: bool = True):
    """
    Integrates ``dX/dτ = Z(τ, X)`` (and ``dJ/dτ = J (∇Z∘X)``) through the monotone ``times``.

    Returns
    -------
    tuple[list[np.ndarray], np.ndarray | None, int]
        Positions at every entry of ``times``, the final jacobian and the number of substeps.
    """
    grid = Z.grid
    d = grid.d
    X = np.array(points, dtype=float)
    J = np.broadcast_to(np.eye(d).reshape((d, d) + (1,) * (X.ndim - 1)), (d, d) + X.shape[1:]).copy() \
        if with_jacobian else None
    clamped = 0

    def rhs(tau, X, J):
        nonlocal clamped
        v, c = interpolate_data(Z.data_at(tau), grid, X)
        clamped += c
        if J is None:
            return v, None
        G, _ = interpolate_data(gradZ.data_at(tau), grid, X)
        return v, np.einsum('ia...,aj...->ij...', J, G)

    path, total = [X.copy()], 0
    for t0, t1 in zip(times[:-1], times[1:]):
        span = t1 - t0
        n = max(1, int(math.ceil(abs(span) / h_max - 1e-12))) if span else 0
        if n > MAX_SUBSTEPS:
            raise CFLViolation(f"CFL Error: {n} substeps needed over [{t0:.4g}, {t1:.4g}] (cap {MAX_SUBSTEPS}).")
        h = span / n if n else 0.0
        for m in range(n):
            tau = t0 + m * h
            k1, l1 = rhs(tau, X, J)
            k2, l2 = rhs(tau + h / 2, X + h / 2 * k1, None if J is None else J + h / 2 * l1)
            k3, l3 = rhs(tau + h / 2, X + h / 2 * k2, None if J is None else J + h / 2 * l2)
            k4, l4 = rhs(tau + h, X + h * k3, None if J is None else J + h * l3)
            X = X + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            if J is not None:
                J = J + h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4)
        total += n
        path.append(X.copy())
    if clamped:
        logger.debug("Characteristics clamped %d coordinate evaluations to the box.", clamped)
    return path, J, total


def flow_points(Z, s: float, t: float, points, dt: float = math.inf, tol: float = ODE_TOL,
                with_jacobian: bool = True) -> tuple[np.ndarray, np.ndarray | None]:
    """
    Integrates ``d/dτ Φ(s, τ, X) = Z(τ, Φ(s, τ, X))`` from ``τ = s`` to ``τ = t`` for arbitrary seeds.

    Parameters
    ----------
    Z : VectorField | FieldHistory
        Drift, linear in time between stored slices.

    s, t : float
        Start and end time (``t < s`` integrates backwards).

    points : array-like
        Seeds of shape ``(d, ...)``.

    dt : float, optional
        Substep cap.

    tol : float, default=1e-8
        ODE tolerance entering the substep bound.

    with_jacobian : bool, default=True
        Whether to integrate ``∇Φ`` alongside.

    Returns
    -------
    tuple[np.ndarray, np.ndarray | None]
        End positions and jacobian.
    """
    Z = _history(Z)
    gradZ = _gradient_history(Z) if with_jacobian else None
    path, J, _ = _rk4_path(Z, gradZ, [s, t], np.asarray(points, dtype=float), substep_bound(Z, dt, tol), with_jacobian)
    return path[-1], J


def flow(Z, s: float, t: float, grid: Grid = None, dt: float = math.inf, tol: float = ODE_TOL) -> FlowMap:
    """
    Computes the characteristic map ``Φ(s, t, ·)`` at every node by fixed-substep RK4.

    Notes
    -----
    1. The substep is ``min(0.5 Δ/|Z|₀, dt, tol^{1/4}/max|∇Z|)``; the map is bitwise reproducible.
    2. ``Φ(s, s, X) = X`` exactly; constant drifts give exact translations.

    Raises
    ------
    CFLViolation
        If more than ``MAX_SUBSTEPS`` substeps are needed.
    """
    Z = _history(Z)
    grid = grid or Z.grid
    gradZ = _gradient_history(Z)
    path, J, n = _rk4_path(Z, gradZ, [s, t], grid.coordinates, substep_bound(Z, dt, tol))
    return FlowMap(s=s, t=t, grid=grid, positions=path[-1], jacobian=J, substeps=n)


def compose(outer: FlowMap, inner: FlowMap, Z, dt: float = math.inf, tol: float = ODE_TOL) -> np.ndarray:
    """``Φ(r, t) ∘ Φ(s, r)`` at the nodes, re-integrating from the inner map's end positions."""
    if not math.isclose(inner.t, outer.s):
        raise ValueError("Input Error: maps do not chain (inner end time differs from outer start time).")
    positions, _ = flow_points(Z, outer.s, outer.t, inner.positions, dt, tol, with_jacobian=False)
    return positions


"""
----------------------------------------------------------------------------------------------------
Flow Bounds
----------------------------------------------------------------------------------------------------
"""
@dataclass(frozen=True)
class FlowBoundsReport:
    """
    Measured map regularity against ``e^{A₀} - 1``, ``e^{A₀}`` and ``2A₀e^{(2+α)A₀}``.

    Parameters
    ----------
    A0 : float
        ``sup_τ |∇Z(τ)|_{0,α;h(τ)} · sup_X ∫ h(τ, Φ(s, τ, X)) dτ`` by trapezoid over time slices.

    deviation, gradient, semi : float
        Measured ``|∇Φ - Id|₀``, ``|∇Φ|₀`` and ``[∇Φ]_α``.

    displacement : float
        ``max |Φ(s, t, X) + B₀(t - s) - X|``.
    """
    # Data Class Attributes:
    A0: float
    deviation: float
    gradient: float
    semi: float
    displacement: float
    alpha: float = DEFAULT_ALPHA

    @property
    def bounds(self) -> tuple[float, float, float]:
        A = self.A0
        return math.expm1(A), math.exp(A), 2.0 * A * math.exp((2.0 + self.alpha) * A)

    @property
    def ratios(self) -> tuple[float, float, float]:
        measured = (self.deviation, self.gradient, self.semi)
        return tuple(m / b if b > 0 else (0.0 if m <= 1e-12 else math.inf) for m, b in zip(measured, self.bounds))

    @property
    def passed(self) -> bool:
        return all(r <= 1.0 for r in self.ratios)


def flow_bounds(fmap: FlowMap, Z, h: WeightSpec = None, alpha: float = DEFAULT_ALPHA, seed: int = 0,
                slices: int = TIME_SLICES) -> FlowBoundsReport:
    """
    Measures ``|∇Φ - Id|₀``, ``|∇Φ|₀`` and ``[∇Φ]_α`` of a map together with the constant ``A₀`` of its drift.

    Notes
    -----
    1. The weighted norm ``|∇Z(τ)|_{0,α;h(τ)}`` and the weight along trajectories are sampled on ``slices + 1``
       equally spaced times; the time integral is a trapezoid sum and the supremum over ``τ`` a sample maximum.
    """
    Z = _history(Z)
    grid = fmap.grid
    d = grid.d
    times = list(np.linspace(fmap.s, fmap.t, slices + 1))
    path, _, _ = _rk4_path(Z, None, times, grid.coordinates, substep_bound(Z), with_jacobian=False)

    norms, along = [], []
    for tau, X in zip(times, path):
        gz = vector_gradient(Z.at(tau))
        norms.append(norm_0alpha(gz, None if h is None else h, alpha, seed=seed, t=tau))
        along.append(np.ones(grid.shape) if h is None else evaluate(h, tau, X))
    integral = trapezoid(np.stack(along), x=times, axis=0) if len(times) > 1 else np.zeros(grid.shape)
    A0 = max(norms) * float(np.abs(integral).max())

    b0 = np.zeros(d)
    b0[:B0.size] = B0[:d]
    shift = (fmap.t - fmap.s) * b0.reshape((d,) + (1,) * d)
    return FlowBoundsReport(
        A0=A0,
        deviation=fmap.identity_deviation(),
        gradient=float(fmap.jacobian_field().max_abs()),
        semi=seminorm_alpha(fmap.jacobian_field(), None, alpha, seed),
        displacement=float(np.sqrt(np.sum((fmap.displacement + shift) ** 2, axis=0)).max()),
        alpha=alpha,
    )


"""
----------------------------------------------------------------------------------------------------
Transport Solutions
----------------------------------------------------------------------------------------------------
"""
def _source_at(src, t: float, grid: Grid) -> np.ndarray | float:
    if src is None:
        return 0.0
    if isinstance(src, FieldHistory):
        return src.data_at(t)
    if isinstance(src, Field):
        return src.data
    if callable(src):
        value = src(t)
        return value.data if isinstance(value, Field) else value
    return np.asarray(src, dtype=float)


def transport_solve(u0: Field, Z, F=None, t: float = 1.0, s: float = 0.0, intervals: int = None,
                    dt: float = math.inf, tol: float = ODE_TOL) -> Field:
    """
    Semi-Lagrangian solution ``u(t, X) = u₀(Φ(t, s, X)) + ∫_s^t F(τ, Φ(t, τ, X)) dτ``.

    Notes
    -----
    1. Back-trajectories start at the nodes at time ``t`` and are recorded at the Simpson nodes in ``τ``; values
       are read off by cubic interpolation.
    2. ``intervals`` (even) sets the Simpson resolution; by default one interval per stored slice of ``F``
       (at least two).

    Parameters
    ----------
    u0 : Field
        Data at time ``s``.

    Z : VectorField | FieldHistory
        Divergence-free drift.

    F : Field | FieldHistory | callable, optional
        Source, sampled at the Simpson nodes.

    t : float, default=1.0
        Target time.

    s : float, default=0.0
        Initial time.

    Returns
    -------
    Field
        ``u(t)``, same type as ``u0``.
    """
    Z = _history(Z)
    grid = u0.grid
    if intervals is None:
        count = len(F.times) if isinstance(F, FieldHistory) else 1
        intervals = max(2, count + count % 2)
    if intervals % 2:
        intervals += 1
    taus = list(np.linspace(t, s, intervals + 1))
    path, _, _ = _rk4_path(Z, None, taus, grid.coordinates, substep_bound(Z, dt, tol), with_jacobian=False)

    values, _ = interpolate_data(u0.data, grid, path[-1])
    if F is not None and t != s:
        weights = np.ones(intervals + 1)
        weights[1:-1:2], weights[2:-1:2] = 4.0, 2.0
        step = (t - s) / intervals
        for w, tau, X in zip(weights, taus, path):
            f_tau = np.broadcast_to(_source_at(F, tau, grid), u0.data.shape)
            sampled, _ = interpolate_data(np.asarray(f_tau), grid, X)
            values = values + w * step / 3.0 * sampled
    return u0._new(values)


def transport_diffusion_step(u: Field, Z, gamma: float, F1=None, F2=None, G=None, dt: float = 0.1, t: float = 0.0,
                             tol: float = ODE_TOL) -> Field:
    """
    One Strang step of ``∂_tu + Z·∇u - γΔu + F₁ + F₂ + ∂_iG^i = 0`` over ``[t, t + dt]``.

    Notes
    -----
    1. Half step of ``H(γ dt/2)``, a full semi-Lagrangian transport step with source ``-(F₁ + F₂ + ∂_iG^i)``
       integrated by Simpson's rule on the midpoint back-trajectory, then another half heat step.
    2. Sources may be fields (frozen over the step), histories, or callables of time; ``G`` carries the flux
       direction first, shape ``(d, *lead, *grid.shape)``.
    3. ``γ = 0`` reduces to pure transport; ``Z = 0`` with no sources to ``H(γ dt)``.

    Parameters
    ----------
    u : Field
        State at time ``t``.

    Z : VectorField | FieldHistory
        Drift.

    gamma : float
        Diffusivity ``γ ≥ 0``.

    F1, F2 : Field | FieldHistory | callable, optional
        Zeroth-order sources.

    G : np.ndarray | callable, optional
        Flux whose divergence is a source.

    dt : float, default=0.1
        Step length.

    t : float, default=0.0
        Step start time.

    Returns
    -------
    Field
        State at ``t + dt``.
    """
    if gamma < 0:
        raise ValueError(f"Input Error: diffusivity must be nonnegative, got γ={gamma}.")
    Z = _history(Z)
    grid = u.grid
    v = heat_apply(u, gamma, dt / 2.0)

    def source(tau: float) -> np.ndarray:
        total = np.zeros(u.data.shape)
        for F in (F1, F2):
            if F is not None:
                total = total - _source_at(F, tau, grid)
        if G is not None:
            total = total - flux_divergence(np.asarray(_source_at(G, tau, grid)), grid)
        return total

    taus = [t + dt, t + dt / 2.0, t]
    path, _, _ = _rk4_path(Z, None, taus, grid.coordinates, substep_bound(Z, dt / 2.0, tol), with_jacobian=False)
    values, _ = interpolate_data(v.data, grid, path[-1])
    if F1 is not None or F2 is not None or G is not None:
        for w, tau, X in zip((1.0, 4.0, 1.0), taus, path):
            sampled, _ = interpolate_data(source(tau), grid, X)
            values = values + w * dt / 6.0 * sampled
    return heat_apply(u._new(values), gamma, dt / 2.0)
