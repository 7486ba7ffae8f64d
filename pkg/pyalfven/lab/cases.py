# Standard:
import logging
import math

# External:
import numpy as np
from scipy.integrate import trapezoid

# Internal:
from ..analytics.holder import grad_field, norm_0alpha, norm_c1alpha, seminorm_alpha, sup_weighted
from ..analytics.weights import (WeightSpec, check_f2, check_lemma33, check_w2, delta_T, evaluate, kernel_average,
                                 sample)
from ..fields.calculus import derivative, divergence, gradient, hessian, laplacian, vector_gradient
from ..fields.core import Field, FieldHistory, ScalarField
from ..fields.extension import StripField, even_extend, extend_vector, odd_extend, restrict
from ..fields.grid import Grid
from ..fields.interpolation import interpolate
from ..operators.heat import heat_apply
from ..operators.kernels import heat_kernel, heat_kernel_derivatives
from ..operators.pressure import T1, Tij, pressure_I, pressure_divergence_defect, ring_divergence_sum, witness
from ..operators.riesz import riesz_commutator, riesz_second
from ..solvers.initial import initial_pair
from ..solvers.mhd import b0_field, viscous_solve
from ..solvers.transport import flow, flow_bounds, transport_diffusion_step, transport_solve
from ..utils.errors import PreconditionError
from .trials import TrialSpec, smooth_coefficients, trial_field

# Constants:
from ..utils.constants import DEFAULT_ALPHA, DEFAULT_DELTA, DEFAULT_MU1, TIME_SLICES, TRUNCATION_RADIUS

logger = logging.getLogger(__name__)

ALPHA = DEFAULT_ALPHA
DELTA = DEFAULT_DELTA
MU1 = DEFAULT_MU1

# Weights of the static cases; C₀ = 4 keeps the power weight doubling-comparable at distance 2.
H_POWER = WeightSpec.power_f0(4.0, DELTA)
H_PHI = WeightSpec.phi1(DELTA, eps=1.0)

# Gates:
SMALLNESS_GATE = 0.5
DRIFT_GATE = 0.1
COEFFICIENT_GATE = 0.2


def _children(seed: int, count: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(count)


def _rng(seed: int) -> np.random.Generator:
    """Generator for the scalar parameters of a trial (times, scales), independent of its fields."""
    return np.random.default_rng([seed, 1])


def _draw(spec: TrialSpec, grid: Grid, child) -> Field:
    return trial_field(spec, grid, child)


def _drift(grid: Grid, child, amplitude: float, envelope: WeightSpec = H_POWER):
    """``(z, Z)`` with ``z`` a small solenoidal trial and ``Z = z - B₀``."""
    z = _draw(TrialSpec('solenoidal', envelope=envelope, amplitude=amplitude), grid, child)
    return z, z - b0_field(grid)


"""
----------------------------------------------------------------------------------------------------
Hölder Calculus
----------------------------------------------------------------------------------------------------
"""
def product_law(grid: Grid, seed: int) -> tuple[float, float]:
    a, b = _children(seed, 2)
    u = _draw(TrialSpec(envelope=H_POWER), grid, a)
    w = _draw(TrialSpec(envelope=H_PHI), grid, b)
    hu, hw = sample(H_POWER, grid), sample(H_PHI, grid)
    lhs = norm_c1alpha(u * w, hu * hw, ALPHA).norm1
    rhs = norm_c1alpha(u, hu, ALPHA).norm1 * norm_c1alpha(w, hw, ALPHA).norm1
    return lhs, rhs


def _composed(grid: Grid, seed: int):
    a, b = _children(seed, 2)
    u = _draw(TrialSpec(envelope=H_POWER), grid, a)
    z, _ = _drift(grid, b, 0.3)
    fmap = flow(z, 0.0, 1.0, grid)
    composed = ScalarField(grid, interpolate(u, fmap.positions))
    h_phi = np.broadcast_to(evaluate(H_POWER, 0.0, fmap.positions), grid.shape)
    return u, fmap, composed, h_phi


def composition(grid: Grid, seed: int) -> tuple[float, float]:
    u, fmap, composed, h_phi = _composed(grid, seed)
    stretch = max(fmap.jacobian_field().max_abs() ** ALPHA, 1.0)
    return norm_0alpha(composed, h_phi, ALPHA), norm_0alpha(u, H_POWER, ALPHA) * stretch


def scaled_composition(grid: Grid, seed: int) -> tuple[float, float]:
    u, fmap, composed, h_phi = _composed(grid, seed)
    R = float(_rng(seed).uniform(0.5, 2.0))
    jac = fmap.jacobian_field()
    stretch = max(jac.max_abs() ** ALPHA, 1.0) * max(norm_0alpha(jac, None, ALPHA, R), 1.0)
    lhs = norm_c1alpha(composed, h_phi, ALPHA, R).norm1
    return lhs, norm_c1alpha(u, H_POWER, ALPHA, R).norm1 * stretch


def _phi_alpha(R: float) -> float:
    return max(R, R ** (1.0 + ALPHA))


def time_integral(grid: Grid, seed: int, gamma: float = 1.0, t: float = 1.0, k: int = 1) -> tuple[float, float]:
    """
    ``u(s) = H(γs)u₀`` on ``TIME_SLICES + 1`` times; the integral is a trapezoid sum and the supremum a sample maximum.
    """
    u0 = _draw(TrialSpec(envelope=H_POWER), grid, seed)
    times = np.linspace(0.0, t, TIME_SLICES + 1)
    slices = [heat_apply(u0, gamma, s) for s in times]
    integral = ScalarField(grid, trapezoid(np.stack([u.data for u in slices]), x=times, axis=0))
    lhs = norm_c1alpha(integral, H_POWER, ALPHA, math.sqrt(k + gamma * t)).norm1

    hu = sample(H_POWER, grid)
    terms = []
    for s, u in zip(times, slices):
        grad = grad_field(u)
        scale = _phi_alpha(math.sqrt(k + gamma * s))
        terms.append(math.sqrt(gamma * s * gamma * (t - s)) * norm_0alpha(u, hu, ALPHA)
                     + scale * (gamma * (t - s)) ** (1.0 - ALPHA / 2.0) * sup_weighted(grad, hu)
                     + scale * (gamma * (t - s)) ** ((3.0 - ALPHA) / 2.0) * seminorm_alpha(grad, hu, 1.0))
    return lhs, max(terms) / gamma


def interpolation_inequality(grid: Grid, seed: int) -> tuple[float, float]:
    u = _draw(TrialSpec(envelope=H_POWER), grid, seed)
    hu = sample(H_POWER, grid)
    lhs = seminorm_alpha(u, hu, ALPHA)
    rhs = seminorm_alpha(u, hu, 1.0) ** ALPHA * sup_weighted(u, hu) ** (1.0 - ALPHA)
    return lhs, rhs


def schauder(grid: Grid, seed: int) -> tuple[float, float]:
    u = _draw(TrialSpec(envelope=H_POWER), grid, seed)
    R = float(_rng(seed).uniform(0.5, 2.0))
    hu = sample(H_POWER, grid)
    lhs = norm_0alpha(hessian(u), hu, ALPHA, R)
    rhs = norm_0alpha(gradient(u), hu, ALPHA) * min(R ** (ALPHA - 1.0), 1.0 / R) + norm_0alpha(laplacian(u), hu, ALPHA, R)
    return lhs, rhs


"""
----------------------------------------------------------------------------------------------------
Strip Extension
----------------------------------------------------------------------------------------------------
"""
def even_extension(grid: Grid, seed: int) -> tuple[float, float]:
    f = _draw(TrialSpec(envelope=H_POWER, parity='even'), grid, seed)
    extended = even_extend(StripField(f, 'even'))
    return norm_0alpha(extended, H_POWER, ALPHA), norm_0alpha(f, H_POWER, ALPHA)


def odd_extension(grid: Grid, seed: int) -> tuple[float, float]:
    f = _draw(TrialSpec(envelope=H_POWER, parity='odd'), grid, seed)
    extended = odd_extend(StripField(f, 'odd'))
    return norm_0alpha(extended, H_POWER, ALPHA), norm_0alpha(f, H_POWER, ALPHA)


def _mirror(q: ScalarField) -> ScalarField:
    return even_extend(StripField(restrict(q), 'even'))


def extension_products(grid: Grid, seed: int) -> tuple[float, float]:
    """
    Evenness of the extended quadratic terms, measured as ``max|q - T_e(q|_Ω)|`` against ``max|q|``.
    """
    a, b = _children(seed, 2)
    u = extend_vector(_draw(TrialSpec('vector', envelope=H_POWER), grid, a))
    w = extend_vector(_draw(TrialSpec('vector', envelope=H_POWER), grid, b))
    ext = u.grid
    du, dw = vector_gradient(u).data, vector_gradient(w).data
    quantities = [np.einsum('ij...,ji...->...', du, dw), np.trace(du) * np.trace(dw)]
    transport = np.einsum('j...,ji...->i...', u.data, dw)
    quantities += [transport[i] for i in range(ext.d - 1)]
    quantities += [u.data[i] * np.trace(dw) for i in range(ext.d - 1)]

    residual, scale = 0.0, 0.0
    for q in quantities:
        field = ScalarField(ext, q)
        residual = max(residual, (field - _mirror(field)).max_abs())
        scale = max(scale, field.max_abs())
    return residual, scale


"""
----------------------------------------------------------------------------------------------------
Weights
----------------------------------------------------------------------------------------------------
"""
def g_lemma(grid: Grid, seed: int) -> tuple[float, float]:
    t = float(_rng(seed).uniform(0.5, 2.0))
    return check_lemma33(H_POWER, t, 2.0 * t).value, 1.0


def transport_diffusion_weights(grid: Grid, seed: int) -> tuple[float, float]:
    mu1 = float(_rng(seed).uniform(0.5, 2.0))
    pairs = ((('f', 'g'), 1), (('f1', 'f-'), -1), (('f1', 'f+'), 1))
    return max(check_w2(pair, sign, mu1, 2.0, DELTA).value for pair, sign in pairs), 1.0


def ball_weight(grid: Grid, seed: int) -> tuple[float, float]:
    rng = _rng(seed)
    t, R = float(rng.uniform(0.25, 2.0)), float(rng.uniform(0.5, 4.0))
    return check_f2(WeightSpec.viscous_f(MU1, DELTA), t, R, MU1, DELTA).value, 1.0


"""
----------------------------------------------------------------------------------------------------
Transport
----------------------------------------------------------------------------------------------------
"""
def flow_regularity(grid: Grid, seed: int) -> tuple[float, float]:
    _, Z = _drift(grid, seed, 0.2)
    report = flow_bounds(flow(Z, 0.0, 1.0, grid), Z, None, ALPHA)
    return max(report.ratios), 1.0


def transport_holder(grid: Grid, seed: int, t: float = 1.0) -> tuple[float, float]:
    a, b, c = _children(seed, 3)
    z, Z = _drift(grid, a, 0.2)
    u0 = _draw(TrialSpec(envelope=H_POWER), grid, b)
    F = _draw(TrialSpec(envelope=H_POWER, amplitude=0.5), grid, c)
    u = transport_solve(u0, Z, F, t=t)
    A0 = vector_gradient(z).max_abs() * t
    rhs = math.exp(ALPHA * A0) * (norm_0alpha(u0, None, ALPHA) + t * norm_0alpha(F, None, ALPHA))
    return norm_0alpha(u, None, ALPHA), rhs


def weighted_transport(grid: Grid, seed: int, T: float = 1.0, slices: int = 4) -> tuple[float, float]:
    """
    Weighted ``C^{1,α}`` transport with drift ``z₋ - B₀`` and a source shaped like ``g``.

    Raises
    ------
    PreconditionError
        If ``|z₋|_{1,α;f}·δ(T)`` is not below the smallness gate.
    """
    a, b, c = _children(seed, 3)
    f = H_POWER
    z, Z = _drift(grid, a, 0.01)
    dT = delta_T(f, T)
    smallness = norm_c1alpha(z, f, ALPHA).norm1 * dT
    if smallness >= SMALLNESS_GATE:
        raise PreconditionError('smallness', f"|z|·δ(T) = {smallness:.3g}")

    g = WeightSpec.conv_g(f)
    times = tuple(np.linspace(0.0, T, slices + 1))
    F0 = _draw(TrialSpec(), grid, c)
    F = FieldHistory(times, tuple(F0 * sample(g, grid, t) for t in times))
    u0 = _draw(TrialSpec(envelope=f), grid, b)
    f_plus = WeightSpec.shifted(f, 1)

    lhs = max(norm_c1alpha(transport_solve(u0, Z, F, t=t), f_plus, ALPHA, t=t).norm1 for t in times)
    source = max(norm_c1alpha(Fk, g, ALPHA, t=t).norm1 for t, Fk in zip(times, F.slices))
    return lhs, norm_c1alpha(u0, f, ALPHA).norm1 + dT * source


"""
----------------------------------------------------------------------------------------------------
Parabolic Estimates
----------------------------------------------------------------------------------------------------
"""
def _at(src, t: float):
    if src is None or isinstance(src, Field):
        return src
    return src.at(t)


def lambda_functional(k: int, times, gamma: float, f: WeightSpec, h: WeightSpec, F1=None, F2=None, G=None,
                      alpha: float = ALPHA, delta: float = DELTA) -> float:
    """
    The source functional ``Λ_k(T, F₁, F₂, G, f, h)`` for ``k ∈ {0, 1}``, as a maximum over the sampled ``t > 0``.

    Notes
    -----
    1. ``Λ₁`` scales with ``(1 + γt)^{1/2}``: ``|F₁|_{1,α;h,(1+γt)^{1/2}}
       + γ⁻¹((γt)^{1/2} + (γt)^{1+δ/2})|F₂|_{0,α;f} + γ⁻¹(1 + γt)^{1/2}|G|_{0,α;f,(1+γt)^{1/2}}``.
    2. ``Λ₀`` scales with ``(γt)^{1/2}``: ``|F₁|_{1,α;h,(γt)^{1/2}}
       + γ⁻¹((γt)^{1-α/2} + (γt)^{1+δ/2})|F₂|_{0,α;f} + γ⁻¹((γt)^{1/2} + (γt)^{(1-α)/2})|G|_{0,α;f,(γt)^{1/2}}``.
    3. Each source is a field (constant in time), a ``FieldHistory`` or ``None``.
    """
    if k not in (0, 1):
        raise ValueError(f"Input Error: Λ_k is defined for k ∈ {{0, 1}}, got k={k}.")
    if gamma <= 0:
        raise ValueError(f"Input Error: Λ_k needs γ > 0, got γ={gamma}.")
    best = 0.0
    for t in times:
        if t <= 0:
            continue
        gt = gamma * t
        R = math.sqrt(k + gt)
        total = 0.0
        F1_t, F2_t, G_t = _at(F1, t), _at(F2, t), _at(G, t)
        if F1_t is not None:
            total += norm_c1alpha(F1_t, h, alpha, R, t=t).norm1
        if F2_t is not None:
            growth = (math.sqrt(gt) if k else gt ** (1.0 - alpha / 2.0)) + gt ** (1.0 + delta / 2.0)
            total += growth / gamma * norm_0alpha(F2_t, f, alpha, t=t)
        if G_t is not None:
            growth = math.sqrt(1.0 + gt) if k else math.sqrt(gt) + gt ** ((1.0 - alpha) / 2.0)
            total += growth / gamma * norm_0alpha(G_t, f, alpha, R, t=t)
        best = max(best, total)
    return best


def parabolic_run(u0: ScalarField, a: np.ndarray, F1: ScalarField, gamma: float, T: float,
                  slices: int = TIME_SLICES) -> FieldHistory:
    """
    Forward Euler for ``∂_tu - γ∂_i(a_ij∂_ju) + F₁ = 0`` with a step of ``0.2Δ²/(γ max a)``; states at ``slices + 1``
    equally spaced times.
    """
    grid = u0.grid
    d = grid.d
    bound = 0.2 * grid.spacing ** 2 / (gamma * float(np.abs(a).max()))
    per_slice = max(1, int(math.ceil(T / slices / bound)))
    dt = T / (slices * per_slice)
    u = u0.data.copy()
    states = [u0]
    for _ in range(slices):
        for _ in range(per_slice):
            grad = np.stack([derivative(u, grid, j) for j in range(d)])
            flux = np.einsum('ij...,j...->i...', a, grad)
            u = u + dt * (gamma * sum(derivative(flux[i], grid, i) for i in range(d)) - F1.data)
        states.append(ScalarField(grid, u))
    return FieldHistory(tuple(np.linspace(0.0, T, slices + 1)), tuple(states))


def parabolic(grid: Grid, seed: int, gamma: float = 1.0, T: float = 1.0) -> tuple[float, float]:
    """
    Both lines of the variable-coefficient parabolic estimate with ``f = h = H(1 + 2γt)φ₁``; the worse ratio is kept.
    """
    a_seed, b, c = _children(seed, 3)
    f = WeightSpec.viscous_f(gamma, DELTA)
    a = smooth_coefficients(grid, 0.1, ALPHA, a_seed)
    eye = np.eye(grid.d).reshape((grid.d, grid.d) + (1,) * grid.d)
    coefficient = max(ScalarField(grid, a[i, j] - eye[i, j]).max_abs()
                      + (1.0 + gamma * T) ** (ALPHA / 2.0) * seminorm_alpha(ScalarField(grid, a[i, j]), None, ALPHA)
                      for i in range(grid.d) for j in range(grid.d))
    if coefficient > COEFFICIENT_GATE:
        raise PreconditionError('coefficients', f"|a - δ|₀ + (1+γT)^(α/2)[a]_α = {coefficient:.3g}")

    u0 = _draw(TrialSpec(envelope=f), grid, b)
    F1 = _draw(TrialSpec(envelope=f, amplitude=0.5), grid, c)
    history = parabolic_run(u0, a, F1, gamma, T)
    times = [t for t in history.times if t > 0]

    lhs1 = max(norm_c1alpha(history.at(t), f, ALPHA, math.sqrt(1.0 + gamma * t), t=t).norm1 for t in times)
    rhs1 = norm_c1alpha(u0, f, ALPHA, 1.0).norm1 + lambda_functional(1, times, gamma, f, f, F1=F1)
    lhs0 = max(norm_c1alpha(history.at(t), f, ALPHA, math.sqrt(gamma * t), t=t).norm1 for t in times)
    rhs0 = norm_0alpha(u0, f, ALPHA) + lambda_functional(0, times, gamma, f, f, F1=F1)
    return max(lhs1 / rhs1, lhs0 / rhs0), 1.0


def transport_diffusion(grid: Grid, seed: int, gamma: float = 1.0, T: float = 1.0) -> tuple[float, float]:
    """
    Weighted estimate for ``∂_tu + Z·∇u - γΔu + F₁ = 0`` with ``Z = z₋ - B₀``, output weight ``f̂₊`` and ``h = f̂``.

    Raises
    ------
    PreconditionError
        If ``|Z + B₀|_{1,α;f₋,(1+γt)^{1/2}}`` reaches the drift gate on a slice.
    """
    a, b, c = _children(seed, 3)
    f = WeightSpec.viscous_f(gamma, DELTA)
    f_plus, f_minus = WeightSpec.shifted(f, 1), WeightSpec.shifted(f, -1)
    z, Z = _drift(grid, a, 0.02, envelope=f)
    times = list(np.linspace(0.0, T, TIME_SLICES + 1))
    drift = max(norm_c1alpha(z, f_minus, ALPHA, math.sqrt(1.0 + gamma * t), t=t).norm1 for t in times)
    if drift >= DRIFT_GATE:
        raise PreconditionError('drift', f"|Z + B₀|_(1,α;f₋) = {drift:.3g}")

    u0 = _draw(TrialSpec(envelope=f), grid, b)
    F1 = _draw(TrialSpec(envelope=f, amplitude=0.5), grid, c)
    u, lhs = u0, 0.0
    for start, stop in zip(times[:-1], times[1:]):
        u = transport_diffusion_step(u, Z, gamma, F1=F1, dt=stop - start, t=start)
        lhs = max(lhs, norm_c1alpha(u, f_plus, ALPHA, math.sqrt(1.0 + gamma * stop), t=stop).norm1)
    rhs = norm_c1alpha(u0, f, ALPHA, 1.0).norm1 + lambda_functional(1, times, gamma, f_plus, f, F1=F1)
    return lhs, rhs


def viscous_split(grid: Grid, seed: int, T: float = 0.4) -> tuple[float, float]:
    """
    ``|z±⁽²⁾(t)|_{0,α;f₁(t),(μ₁t)^{1/2}} / (μ₁ min((μ₁t)^{-1/2}, (μ₁t)^{-(1-α)/2}) M±(t))`` along a short viscous run.
    """
    nu, mu = 1.5, 0.5
    mu1 = 0.5 * (nu + mu)
    z_plus, z_minus = initial_pair(grid, eps=1e-2, delta=DELTA, seed=seed)
    result = viscous_solve(z_plus, z_minus, nu, mu, T, dt=0.1, alpha=ALPHA, delta=DELTA, snapshots=4)
    f1 = WeightSpec.viscous_f1(mu1, DELTA)
    diag_times = result.diagnostics.times
    worst = 0.0
    for state in result.states:
        t = state.t
        if t <= 0:
            continue
        row = int(np.argmin(np.abs(diag_times - t)))
        scale = mu1 * min((mu1 * t) ** -0.5, (mu1 * t) ** (-(1.0 - ALPHA) / 2.0))
        for z2, M in ((state.z2_plus, result.diagnostics.M_plus[row]), (state.z2_minus, result.diagnostics.M_minus[row])):
            if M > 0:
                worst = max(worst, norm_0alpha(z2, f1, ALPHA, math.sqrt(mu1 * t), t=t) / (scale * M))
    return worst, 1.0


"""
----------------------------------------------------------------------------------------------------
Integral Operators
----------------------------------------------------------------------------------------------------
"""
def pressure_holder(grid: Grid, seed: int) -> tuple[float, float]:
    a, b = _children(seed, 2)
    u = _draw(TrialSpec('solenoidal', envelope=H_POWER), grid, a)
    w = _draw(TrialSpec('solenoidal', envelope=H_POWER), grid, b)
    lhs = norm_0alpha(pressure_I(u, w), None, ALPHA)
    return lhs, norm_0alpha(u, None, ALPHA) * norm_c1alpha(w, None, ALPHA).norm1


def pressure_divergence(grid: Grid, seed: int) -> tuple[float, float]:
    a, b = _children(seed, 2)
    u = _draw(TrialSpec('vector', envelope=H_POWER), grid, a)
    w = _draw(TrialSpec('vector', envelope=H_POWER), grid, b)
    lhs = pressure_divergence_defect(u, w).max_abs()
    rhs = u.max_abs() * divergence(w).max_abs() + w.max_abs() * divergence(u).max_abs()
    return lhs, rhs


def _kernel_weight(h: WeightSpec, grid: Grid) -> np.ndarray:
    """``g(X) = ∫h(Y)/(1 + |X - Y|^{d+1}) dY`` at the grid nodes."""
    X = grid.coordinates.reshape(grid.d, -1)
    values = kernel_average(lambda Y: evaluate(h, 0.0, Y), X, TRUNCATION_RADIUS)
    return np.asarray(values).reshape(grid.shape)


def integral_operators(grid: Grid, seed: int) -> tuple[float, float]:
    a, b = _children(seed, 2)
    u = _draw(TrialSpec(envelope=H_POWER), grid, a)
    w = _draw(TrialSpec(envelope=H_POWER), grid, b)
    first = norm_c1alpha(T1(u), H_POWER, ALPHA).norm1 / norm_0alpha(u, H_POWER, ALPHA)
    g = _kernel_weight(H_POWER, grid)
    second = norm_c1alpha(Tij(w, 0, 1), g, ALPHA).norm1 / sup_weighted(w, H_POWER)
    return max(first, second), 1.0


def telescoping(grid: Grid, seed: int, rings: int = 2) -> tuple[float, float]:
    """
    ``div Σ_{k≤N} B_k(u) = I*_{N+1} - I*_0`` on the torus, as ``max|residual|`` against ``max|I*_0|``.
    """
    u = _draw(TrialSpec(), grid, seed)
    rings_div = ring_divergence_sum(u, rings)
    outer = witness(u, 0)
    residual = rings_div - (witness(u, rings + 1) - outer)
    return residual.max_abs(), outer.max_abs()


def pressure_viscous(grid: Grid, seed: int) -> tuple[float, float]:
    a, b = _children(seed, 2)
    t = float(_rng(seed).uniform(0.25, 1.0))
    f = WeightSpec.viscous_f(MU1, DELTA)
    f_plus, f_minus = WeightSpec.shifted(f, 1), WeightSpec.shifted(f, -1)
    g = WeightSpec.conv_g(f)
    R = math.sqrt(1.0 + MU1 * t)
    u = _draw(TrialSpec('solenoidal', envelope=f_plus, t=t), grid, a)
    w = _draw(TrialSpec('solenoidal', envelope=f_minus, t=t), grid, b)
    lhs = norm_c1alpha(pressure_I(u, w), g, ALPHA, R, t=t).norm1
    rhs = norm_c1alpha(u, f_plus, ALPHA, R, t=t).norm1 * norm_c1alpha(w, f_minus, ALPHA, R, t=t).norm1
    return lhs, rhs


def pressure_unweighted(grid: Grid, seed: int) -> tuple[float, float]:
    a, b = _children(seed, 2)
    t = float(_rng(seed).uniform(0.25, 1.0))
    f_plus = WeightSpec.shifted(WeightSpec.viscous_f(MU1, DELTA), 1)
    R = math.sqrt(1.0 + MU1 * t)
    u = _draw(TrialSpec('solenoidal', envelope=H_POWER), grid, a)
    w = _draw(TrialSpec('solenoidal', envelope=f_plus, t=t), grid, b)
    lhs = norm_0alpha(pressure_I(u, w), f_plus, ALPHA, t=t)
    rhs = norm_0alpha(u, None, ALPHA, R) * norm_c1alpha(w, f_plus, ALPHA, R, t=t).norm1 / R
    return lhs, rhs


def riesz_bounds(grid: Grid, seed: int, i: int = 0, j: int = 1, k: int = 0) -> tuple[float, float]:
    """
    The commutator bound and the product bound for ``R_iR_j``; the worse ratio is kept.
    """
    a, b, c, e = _children(seed, 4)
    t = float(_rng(seed).uniform(0.25, 1.0))
    f = WeightSpec.viscous_f(MU1, DELTA)
    f_plus, f1 = WeightSpec.shifted(f, 1), WeightSpec.viscous_f1(MU1, DELTA)
    small, large = math.sqrt(MU1 * t), math.sqrt(1.0 + MU1 * t)

    u = _draw(TrialSpec(envelope=f_plus, t=t), grid, a)
    w = _draw(TrialSpec(envelope=f1, t=t), grid, b)
    commutator = riesz_commutator(u, w, i, j, k)
    first = norm_c1alpha(commutator, f_plus, ALPHA, small, t=t).norm1 \
        / (norm_c1alpha(u, f_plus, ALPHA, large, t=t).norm1 * norm_c1alpha(w, f1, ALPHA, small, t=t).norm1)

    p = _draw(TrialSpec(envelope=f1, t=t), grid, c)
    q = _draw(TrialSpec(envelope=f1, t=t), grid, e)
    factor = (1.0 + MU1 * t) ** (-DELTA / 2.0) * (1.0 + (MU1 * t) ** (-ALPHA / 2.0))
    second = norm_0alpha(riesz_second(p * q, i, j), f1, ALPHA, t=t) \
        / (factor * norm_0alpha(p, f1, ALPHA, small, t=t) * norm_0alpha(q, f1, ALPHA, small, t=t))
    return max(first, second), 1.0


"""
----------------------------------------------------------------------------------------------------
Heat Semigroup
----------------------------------------------------------------------------------------------------
"""
def _heat_weight(t: float) -> WeightSpec:
    """The static weight ``H(2t)h`` of ``H_POWER``."""
    return WeightSpec.heat_evolved(H_POWER, mu1=0.0, t0=2.0 * t)


def heat_derivatives(grid: Grid, seed: int) -> tuple[float, float]:
    t = float(_rng(seed).uniform(0.25, 1.0))
    u = _draw(TrialSpec(envelope=H_POWER), grid, seed)
    v = heat_apply(u, 1.0, t)
    hw = sample(_heat_weight(t), grid)
    lhs = max(sup_weighted(v, hw), math.sqrt(t) * sup_weighted(gradient(v), hw), t * sup_weighted(hessian(v), hw))
    return lhs, sup_weighted(u, H_POWER)


def heat_holder(grid: Grid, seed: int, k: float = 1.0) -> tuple[float, float]:
    t = float(_rng(seed).uniform(0.25, 1.0))
    u = _draw(TrialSpec(envelope=H_POWER), grid, seed)
    v = heat_apply(u, 1.0, t)
    lhs = norm_c1alpha(v, sample(_heat_weight(t), grid), ALPHA, math.sqrt(k + t)).norm1
    return lhs, norm_c1alpha(u, H_POWER, ALPHA, math.sqrt(k)).norm1


def heat_kernel_bounds(grid: Grid, seed: int) -> tuple[float, float]:
    t = float(_rng(seed).uniform(0.1, 2.0))
    X = grid.coordinates
    doubled = heat_kernel(2.0 * t, X)
    lhs = max(float(np.max(t ** (k / 2.0) * heat_kernel_derivatives(t, X, k) / doubled)) for k in (0, 1, 2))
    return lhs, 1.0
