# Standard:
import logging
import math
from dataclasses import dataclass, field

# External:
import numpy as np
import pandas as pd

# Internal:
from ..analytics.holder import norm_0alpha, norm_c1alpha
from ..analytics.trends import running_sup
from ..analytics.weights import WeightSpec, delta_T, unit_b0
from ..fields.calculus import advect, curl, divergence, row_divergence, vector_gradient
from ..fields.core import CurlField, Field, FieldHistory, VectorField, curl_pairs
from ..fields.extension import extend_vector, restrict
from ..fields.interpolation import interpolate_data
from ..operators.pressure import pressure_I
from ..operators.riesz import Pi1, Pi2
from ..operators.trace import TraceRecorder
from ..utils.errors import NumericalAbort
from ..utils.io import dump_state
from .transport import transport_diffusion_step, transport_solve

# Constants:
from ..utils.constants import (BLOWUP_FACTOR, DEFAULT_ALPHA, DEFAULT_C0, DEFAULT_DELTA, DIAGNOSTIC_COLS,
                               DIV_GUARD_FACTOR, REFINEMENT_DRIFT, TIME_SLICES)

logger = logging.getLogger(__name__)

DRIFT_CFL = 0.25
CURL_SOURCE_CFL = 0.5


def b0_field(grid) -> np.ndarray:
    """``B₀`` broadcast against ``(d, *grid.shape)``."""
    return unit_b0(grid.d).reshape((grid.d,) + (1,) * grid.d)


def energy(z_plus: VectorField, z_minus: VectorField) -> float:
    """``½∫(|z₊|² + |z₋|²) = ∫(|v|² + |b|²)`` by the nodal rule."""
    total = np.sum(z_plus.data ** 2) + np.sum(z_minus.data ** 2)
    return float(0.5 * total * z_plus.grid.cell_volume)


def div_residual(z_plus: VectorField, z_minus: VectorField) -> float:
    return max(divergence(z_plus).max_abs(), divergence(z_minus).max_abs())


"""
----------------------------------------------------------------------------------------------------
State and Diagnostics
----------------------------------------------------------------------------------------------------
"""
@dataclass(frozen=True)
class MhdState:
    """
    Elsässer fluctuations at one time, with the viscous decomposition when one is carried.

    Notes
    -----
    1. ``z₊ = Z₊ - B₀`` and ``z₋ = Z₋ + B₀``.
    2. Viscous states satisfy ``z± = z±⁽¹⁾ + div ψ±⁽²⁾`` and ``J± = J±⁽¹⁾ + curl div ψ±⁽²⁾``.

    Parameters
    ----------
    t : float
        Time.

    z_plus, z_minus : VectorField
        Fluctuations.

    nu, mu : float
        Viscosity and resistivity.

    z1_plus, z1_minus : VectorField, optional
        Transported part of the decomposition.

    J1_plus, J1_minus : CurlField, optional
        Vorticity of the transported part.

    psi2_plus, psi2_minus : CurlField, optional
        Stream functions of the cross-diffusion part.
    """
    # Data Class Attributes:
    t: float
    z_plus: VectorField
    z_minus: VectorField
    nu: float = 0.0
    mu: float = 0.0
    z1_plus: VectorField = None
    z1_minus: VectorField = None
    J1_plus: CurlField = None
    J1_minus: CurlField = None
    psi2_plus: CurlField = None
    psi2_minus: CurlField = None

    @property
    def mu1(self) -> float:
        return 0.5 * (self.nu + self.mu)

    @property
    def mu2(self) -> float:
        return 0.5 * (self.nu - self.mu)

    @property
    def grid(self):
        return self.z_plus.grid

    @property
    def is_viscous(self) -> bool:
        return self.psi2_plus is not None

    @property
    def z2_plus(self) -> VectorField:
        return row_divergence(self.psi2_plus)

    @property
    def z2_minus(self) -> VectorField:
        return row_divergence(self.psi2_minus)

    @property
    def J_plus(self) -> CurlField:
        return self.J1_plus + curl(self.z2_plus)

    @property
    def J_minus(self) -> CurlField:
        return self.J1_minus + curl(self.z2_minus)

    @property
    def div_residual(self) -> float:
        return div_residual(self.z_plus, self.z_minus)

    @property
    def energy(self) -> float:
        return energy(self.z_plus, self.z_minus)

    def reconstruction_residual(self) -> float:
        """``max|z± - z±⁽¹⁾ - div ψ±⁽²⁾|``."""
        if not self.is_viscous:
            return 0.0
        plus = (self.z_plus - self.z1_plus - self.z2_plus).max_abs()
        minus = (self.z_minus - self.z1_minus - self.z2_minus).max_abs()
        return max(plus, minus)

    def fields(self) -> dict[str, Field]:
        names = ['z_plus', 'z_minus', 'z1_plus', 'z1_minus', 'J1_plus', 'J1_minus', 'psi2_plus', 'psi2_minus']
        return {name: getattr(self, name) for name in names if getattr(self, name) is not None}


@dataclass
class MDiagnostics:
    """
    Per-slice bootstrap quantities ``M±(t)`` (running suprema over the history) with the divergence and energy
    ledger of a run.
    """
    # Data Class Attributes:
    rows: list = field(default_factory=list)

    def record(self, t: float, m_plus: float, m_minus: float, div: float, energy: float):
        if self.rows:
            m_plus = max(m_plus, self.rows[-1]['M_plus'])
            m_minus = max(m_minus, self.rows[-1]['M_minus'])
        self.rows.append({'t': t, 'M_plus': m_plus, 'M_minus': m_minus, 'div_residual': div, 'energy': energy})

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=DIAGNOSTIC_COLS)

    @property
    def times(self) -> np.ndarray:
        return np.array([r['t'] for r in self.rows])

    @property
    def M_plus(self) -> np.ndarray:
        return np.array([r['M_plus'] for r in self.rows])

    @property
    def M_minus(self) -> np.ndarray:
        return np.array([r['M_minus'] for r in self.rows])

    def __len__(self):
        return len(self.rows)


def _guard(state_fields: dict[str, Field], t: float, reference: float, dump_dir: str | None):
    """Aborts with a state dump if any field exceeds ``BLOWUP_FACTOR`` times the initial amplitude."""
    if reference <= 0:
        return
    worst = max(u.max_abs() for u in state_fields.values())
    if not math.isfinite(worst) or worst > BLOWUP_FACTOR * reference:
        path = dump_state(dump_dir, state_fields, t)
        raise NumericalAbort(f"field maximum {worst:.3e} exceeds {BLOWUP_FACTOR:g}x the initial {reference:.3e} "
                             f"at t={t:.4g}", path)


"""
----------------------------------------------------------------------------------------------------
Linear Reference
----------------------------------------------------------------------------------------------------
"""
def linear_alfven_reference(z0: Field, t: float, sign: int = 1) -> Field:
    """
    Linear Alfvén wave ``w(t, X) = z₀(X + sign·B₀t)`` by cubic interpolation.

    Notes
    -----
    1. ``sign = +1`` is the ``z₊`` wave (transported by ``-B₀``), ``sign = -1`` the ``z₋`` wave.
    """
    if sign not in (1, -1):
        raise ValueError(f"Input Error: wave sign must be ±1, got {sign}.")
    if t == 0:
        return z0
    grid = z0.grid
    values, _ = interpolate_data(z0.data, grid, grid.coordinates + sign * t * b0_field(grid))
    return z0._new(values)


"""
----------------------------------------------------------------------------------------------------
Ideal Picard Iteration
----------------------------------------------------------------------------------------------------
"""
@dataclass(frozen=True)
class PicardResult:
    """
    Outcome of the ideal Picard iteration.

    Attributes
    ----------
    iterates : list[tuple[FieldHistory, FieldHistory]]
        ``(z₊⁽ⁿ⁾, z₋⁽ⁿ⁾)`` for ``n = 1..n_iter`` on the strip at the time slices.

    diagnostics : MDiagnostics
        ``M±`` of the last iterate per slice.

    increments : pd.Series
        ``max_t (|z₊⁽ⁿ⁺¹⁾ - z₊⁽ⁿ⁾|_{0,α} + |z₋⁽ⁿ⁺¹⁾ - z₋⁽ⁿ⁾|_{0,α})`` indexed by ``n``.

    norms : pd.DataFrame
        ``sup_t`` of the weighted ``C^{1,α}`` norms per iterate.

    gate : float
        ``4C₁A₁δ(T)``; the iteration is covered by the contraction argument when it is below one.

    C2 : float
        Median of the per-iterate contraction estimates ``(e_n/e_{n-1})·n/(2T)``.
    """
    # Data Class Attributes:
    iterates: list
    diagnostics: MDiagnostics
    increments: pd.Series
    norms: pd.DataFrame
    gate: float
    A1: float
    C1: float
    delta_T: float
    C2: float

    @property
    def last(self) -> tuple[FieldHistory, FieldHistory]:
        return self.iterates[-1]


def _strip_weights(c0: float, delta: float) -> tuple[WeightSpec, WeightSpec, WeightSpec]:
    f0 = WeightSpec.power_f0(c0, delta)
    return f0, WeightSpec.shifted(f0, 1), WeightSpec.shifted(f0, -1)


def _contraction_estimates(increments: pd.Series, T: float) -> pd.Series:
    values = increments.to_numpy()
    ratios = [values[n] / values[n - 1] * n / (2.0 * T) if values[n - 1] > 0 else np.nan
              for n in range(1, len(values))]
    return pd.Series(ratios, index=increments.index[1:], name='C2', dtype=float)


def ideal_picard(z_plus0: VectorField, z_minus0: VectorField, T: float, n_iter: int = 4,
                 alpha: float = DEFAULT_ALPHA, delta: float = DEFAULT_DELTA, c0: float = DEFAULT_C0,
                 C1: float = 1.0, slices: int = TIME_SLICES, R: float = 1.0, seed: int = 0,
                 dump_dir: str = None, recorder: TraceRecorder = None) -> PicardResult:
    """
    Runs the Picard scheme of the ideal system on the strip.

    Notes
    -----
    1. ``z±⁽⁰⁾ = 0``; iterate ``n + 1`` solves ``∂_tz₊ + Z₋⁽ⁿ⁾·∇z₊ = I(z₊⁽ⁿ⁾, z₋⁽ⁿ⁾)`` (and the mirrored equation
       with drift ``Z₊⁽ⁿ⁾``) by ``transport_solve`` on the extended strip. Every iterate is stored at ``slices + 1``
       equally spaced times and the drift is linear in time between them.
    2. The pressure is always the operator ``I``, never a Poisson solve.
    3. ``M±`` use the shifted power weights ``f± = f₀(x₁ ± t)``; the gate ``4C₁A₁δ(T)`` uses
       ``A₁ = max |z±₀|_{1,α;f₀}`` and a smallness constant ``C₁`` measured separately (default 1).

    Parameters
    ----------
    z_plus0, z_minus0 : VectorField
        Strip data with vanishing normal component on both walls.

    T : float
        Final time.

    n_iter : int, default=4
        Number of iterates.

    Raises
    ------
    NumericalAbort
        If an iterate exceeds ``BLOWUP_FACTOR`` times the initial amplitude.
    """
    grid = z_plus0.grid
    if grid.geometry != 'strip' or z_minus0.grid != grid:
        raise ValueError("Input Error: ideal_picard needs both data fields on one strip grid.")
    if n_iter < 1 or T < 0:
        raise ValueError(f"Input Error: need n_iter >= 1 and T >= 0, got n_iter={n_iter}, T={T}.")

    f0, f_plus, f_minus = _strip_weights(c0, delta)
    A1 = max(norm_c1alpha(z, f0, alpha, seed=seed).norm1 for z in (z_plus0, z_minus0))
    dT = delta_T(f0, T) if T > 0 else 0.0
    gate = 4.0 * C1 * A1 * dT
    if gate >= 1.0:
        logger.warning("Smallness gate 4·C1·A1·δ(T) = %.3g is not below 1; contraction is not guaranteed.", gate)

    ext_plus, ext_minus = extend_vector(z_plus0), extend_vector(z_minus0)
    ext = ext_plus.grid
    b0 = b0_field(ext)
    times = tuple(np.linspace(0.0, T, slices + 1)) if T > 0 else (0.0,)
    reference = max(z_plus0.max_abs(), z_minus0.max_abs())

    zero = VectorField.zeros(ext)
    plus = FieldHistory(times, tuple(zero for _ in times))
    minus = FieldHistory(times, tuple(zero for _ in times))
    iterates, increments, norm_rows = [], [], []
    for n in range(n_iter):
        sources = FieldHistory(times, tuple(pressure_I(p, m, R, recorder) for p, m in zip(plus.slices, minus.slices)))
        drift_minus = FieldHistory(times, tuple(m - b0 for m in minus.slices))
        drift_plus = FieldHistory(times, tuple(p + b0 for p in plus.slices))
        new_plus, new_minus = [], []
        for k, t in enumerate(times):
            intervals = max(2, 2 * k)
            new_plus.append(transport_solve(ext_plus, drift_minus, sources, t=t, intervals=intervals))
            new_minus.append(transport_solve(ext_minus, drift_plus, sources, t=t, intervals=intervals))
            _guard({'z_plus': new_plus[-1], 'z_minus': new_minus[-1]}, t, reference, dump_dir)

        step = max(norm_0alpha(restrict(a - b), None, alpha, seed=seed) + norm_0alpha(restrict(c - e), None, alpha,
                                                                                          seed=seed)
                   for a, b, c, e in zip(new_plus, plus.slices, new_minus, minus.slices))
        increments.append(step)
        plus, minus = FieldHistory(times, tuple(new_plus)), FieldHistory(times, tuple(new_minus))
        strip_plus = FieldHistory(times, tuple(restrict(p) for p in plus.slices))
        strip_minus = FieldHistory(times, tuple(restrict(m) for m in minus.slices))
        iterates.append((strip_plus, strip_minus))

        diagnostics = MDiagnostics()
        for t, p, m in zip(times, strip_plus.slices, strip_minus.slices):
            diagnostics.record(t, norm_c1alpha(p, f_plus, alpha, seed=seed, t=t).norm1,
                               norm_c1alpha(m, f_minus, alpha, seed=seed, t=t).norm1, div_residual(p, m), energy(p, m))
        norm_rows.append({'n': n + 1, 'M_plus': diagnostics.M_plus[-1], 'M_minus': diagnostics.M_minus[-1]})
        logger.debug("Picard iterate %d: increment %.3e, M+ %.3e, M- %.3e.", n + 1, step, norm_rows[-1]['M_plus'],
                     norm_rows[-1]['M_minus'])

    increment_series = pd.Series(increments, index=pd.RangeIndex(len(increments), name='n'), name='increment')
    estimates = _contraction_estimates(increment_series, T) if T > 0 else pd.Series(dtype=float)
    C2 = float(np.nanmedian(estimates)) if estimates.notna().any() else 0.0
    return PicardResult(
        iterates=iterates,
        diagnostics=diagnostics,
        increments=increment_series,
        norms=pd.DataFrame(norm_rows, columns=['n', 'M_plus', 'M_minus']),
        gate=gate,
        A1=A1,
        C1=C1,
        delta_T=dT,
        C2=C2,
    )


"""
----------------------------------------------------------------------------------------------------
Viscous Decomposition Solver
----------------------------------------------------------------------------------------------------
"""
def cross_vorticity(v: VectorField, z: VectorField) -> CurlField:
    """``E^{jk}(v, z) = ∂_kv^i∂_iz^j - ∂_jv^i∂_iz^k``, the curl of ``v·∇z`` minus ``v·∇curl z``."""
    grid = z.grid
    P = np.einsum('ki...,ij...->kj...', vector_gradient(v).data, vector_gradient(z).data)
    return CurlField(grid, np.stack([P[k, j] - P[j, k] for j, k in curl_pairs(grid.d)]))


def macro_step(grid, amplitude: float, mu1: float, mu2: float, cap: float) -> float:
    """
    ``dt = min(0.25Δ/max|Z|, 0.5Δ²/μ₁ (only while μ₂ ≠ 0), cap)``.
    """
    h = grid.spacing
    dt = cap
    if amplitude > 0:
        dt = min(dt, DRIFT_CFL * h / amplitude)
    if mu2 != 0 and mu1 > 0:
        dt = min(dt, CURL_SOURCE_CFL * h * h / mu1)
    return dt


def _nonzero(*fields) -> bool:
    return all(f is not None and f.data.any() for f in fields)


def _advance(state: MhdState, dt: float, R: float, recorder: TraceRecorder) -> MhdState:
    """
    One macro step of the decomposed system with the cross terms lagged to the start of the step.
    """
    grid = state.grid
    mu1, mu2 = state.mu1, state.mu2
    b0 = b0_field(grid)
    z2 = {1: state.z2_plus, -1: state.z2_minus}
    z1 = {1: state.z1_plus, -1: state.z1_minus}
    J1 = {1: state.J1_plus, -1: state.J1_minus}
    psi = {1: state.psi2_plus, -1: state.psi2_minus}
    J_full = {1: state.J_plus, -1: state.J_minus}

    out = {}
    for sign in (1, -1):
        other = -sign
        drift = z1[other] - sign * b0

        # z⁽¹⁾:
        F1 = -pressure_I(z2[other], z1[sign], R, recorder) - pressure_I(z1[other], z1[sign], R, recorder)
        F2 = advect(z2[other], z1[sign]) if _nonzero(z2[other]) else None
        z1_new = transport_diffusion_step(z1[sign], drift, mu1, F1=F1, F2=F2, dt=dt, t=state.t)

        # J⁽¹⁾:
        E1 = cross_vorticity(z1[other], z1[sign])
        E2, G = None, None
        if _nonzero(z2[other]):
            E2 = cross_vorticity(z2[other], z1[sign])
            G = z2[other].data[:, None] * J1[sign].data[None]
        J1_new = transport_diffusion_step(J1[sign], drift, mu1, F1=E1, F2=E2, G=G, dt=dt, t=state.t)

        # ψ⁽²⁾:
        source = CurlField.zeros(grid)
        if _nonzero(psi[sign]):
            source = source + Pi2(z1[other], psi[sign], recorder)
        if _nonzero(z2[other], z2[sign]):
            source = source + Pi1(z2[other], z2[sign], recorder)
        if mu2 != 0:
            source = source - mu2 * J_full[other]
        psi_new = transport_diffusion_step(psi[sign], drift, mu1, F1=source if source.data.any() else None,
                                           dt=dt, t=state.t)
        out[sign] = (z1_new, J1_new, psi_new)

    z1p, J1p, psip = out[1]
    z1m, J1m, psim = out[-1]
    return MhdState(
        t=state.t + dt,
        z_plus=z1p + row_divergence(psip),
        z_minus=z1m + row_divergence(psim),
        nu=state.nu,
        mu=state.mu,
        z1_plus=z1p,
        z1_minus=z1m,
        J1_plus=J1p,
        J1_minus=J1m,
        psi2_plus=psip,
        psi2_minus=psim,
    )


def viscous_norms(state: MhdState, alpha: float = DEFAULT_ALPHA, delta: float = DEFAULT_DELTA,
                  seed: int = 0) -> tuple[float, float]:
    """
    ``|z±⁽¹⁾|_{1,α;f±,(1+μ₁t)^{1/2}} + |J±⁽¹⁾|_{1,α;f±,(μ₁t)^{1/2}} + μ₁⁻¹|ψ±⁽²⁾|_{1,α;f₁,(μ₁t)^{1/2}}`` at ``state.t``.

    Notes
    -----
    1. The small scale ``(μ₁t)^{1/2}`` is floored at the grid spacing, where the scaled norm is still resolved.
    """
    t, mu1 = state.t, state.mu1
    f = WeightSpec.viscous_f(mu1, delta)
    f1 = WeightSpec.viscous_f1(mu1, delta)
    large = math.sqrt(1.0 + mu1 * t)
    small = max(math.sqrt(mu1 * t), state.grid.spacing)
    values = []
    for sign, z1, J1, psi in ((1, state.z1_plus, state.J1_plus, state.psi2_plus),
                              (-1, state.z1_minus, state.J1_minus, state.psi2_minus)):
        weight = WeightSpec.shifted(f, sign)
        total = norm_c1alpha(z1, weight, alpha, large, seed, t).norm1
        total += norm_c1alpha(J1, weight, alpha, small, seed, t).norm1
        if psi.data.any():
            total += norm_c1alpha(psi, f1, alpha, small, seed, t).norm1 / mu1
        values.append(total)
    return values[0], values[1]


@dataclass(frozen=True)
class ViscousResult:
    """
    Outcome of a viscous run: the states at the snapshot times, the diagnostics and the step used.
    """
    # Data Class Attributes:
    states: list
    diagnostics: MDiagnostics
    dt: float
    steps: int

    @property
    def final(self) -> MhdState:
        return self.states[-1]


def viscous_solve(z_plus0: VectorField, z_minus0: VectorField, nu: float, mu: float, T: float, dt: float = 0.1,
                  alpha: float = DEFAULT_ALPHA, delta: float = DEFAULT_DELTA, R: float = 1.0, seed: int = 0,
                  snapshots: int = TIME_SLICES, dump_dir: str = None,
                  recorder: TraceRecorder = None) -> ViscousResult:
    """
    Integrates the decomposed viscous system ``z± = z±⁽¹⁾ + div ψ±⁽²⁾`` up to time ``T``.

    Notes
    -----
    1. Per macro step, for each sign: (a) ``z±⁽¹⁾`` by ``transport_diffusion_step`` with drift ``Z∓⁽¹⁾``,
       ``γ = μ₁``, sources ``-I(z∓⁽²⁾, z±⁽¹⁾) - I(z∓⁽¹⁾, z±⁽¹⁾)`` and ``z∓⁽²⁾·∇z±⁽¹⁾``; (b) ``J±⁽¹⁾`` with
       sources ``E(z∓⁽¹⁾, z±⁽¹⁾)``, ``E(z∓⁽²⁾, z±⁽¹⁾)`` and the flux ``z∓⁽²⁾J±⁽¹⁾``; (c) ``ψ±⁽²⁾`` with source
       ``Π₂(z∓⁽¹⁾, z±⁽²⁾) + Π₁(z∓⁽²⁾, z±⁽²⁾) - μ₂J∓``; (d) ``z±⁽²⁾ = div ψ±⁽²⁾`` and ``z± = z±⁽¹⁾ + z±⁽²⁾``.
       Cross terms are lagged to the start of the step.
    2. ``ψ±⁽²⁾`` starts at zero, so ``μ₂ = 0`` keeps it at zero.
    3. ``M±`` is recorded after every step; states are kept at ``snapshots + 1`` equally spaced times.

    Parameters
    ----------
    z_plus0, z_minus0 : VectorField
        Solenoidal data on a free box or a torus.

    nu, mu : float
        Viscosity and resistivity with ``ν + μ > 0``.

    T : float
        Final time.

    dt : float, default=0.1
        Step cap; the step used also obeys the drift and curl-source conditions of ``macro_step``.

    Raises
    ------
    NumericalAbort
        On blow-up or when the divergence residual exceeds ``DIV_GUARD_FACTOR`` times its discretization estimate.
    """
    grid = z_plus0.grid
    if grid.is_strip:
        raise ValueError("Input Error: viscous_solve runs on a free box or a torus, not on the strip.")
    if z_minus0.grid != grid:
        raise ValueError("Input Error: viscous data fields live on different grids.")
    if nu < 0 or mu < 0 or nu + mu <= 0:
        raise ValueError(f"Input Error: need ν, μ >= 0 with ν + μ > 0, got ν={nu}, μ={mu}.")

    state = MhdState(t=0.0, z_plus=z_plus0, z_minus=z_minus0, nu=nu, mu=mu, z1_plus=z_plus0, z1_minus=z_minus0,
                     J1_plus=curl(z_plus0), J1_minus=curl(z_minus0), psi2_plus=CurlField.zeros(grid),
                     psi2_minus=CurlField.zeros(grid))
    if state.mu2 != 0:
        logger.info("Cross-diffusion ratio μ2/μ1 = %.3g.", state.mu2 / state.mu1)

    reference = max(z_plus0.max_abs(), z_minus0.max_abs())
    div0 = state.div_residual
    scale = max(div0, reference * grid.spacing ** 3)
    step = macro_step(grid, 1.0 + reference, state.mu1, state.mu2, dt)
    steps = int(math.ceil(T / step - 1e-12)) if T > 0 else 0
    step = T / steps if steps else 0.0
    marks = set(np.round(np.linspace(0, steps, min(snapshots, steps) + 1)).astype(int)) if steps else {0}

    diagnostics = MDiagnostics()
    diagnostics.record(0.0, *viscous_norms(state, alpha, delta, seed), div0, state.energy)
    states = [state]
    for n in range(1, steps + 1):
        state = _advance(state, step, R, recorder)
        _guard(state.fields(), state.t, reference, dump_dir)
        residual = state.div_residual
        if residual > DIV_GUARD_FACTOR * scale * (1 + n):
            path = dump_state(dump_dir, state.fields(), state.t)
            raise NumericalAbort(f"divergence residual {residual:.3e} exceeds the guard at t={state.t:.4g}", path)
        diagnostics.record(state.t, *viscous_norms(state, alpha, delta, seed), residual, state.energy)
        if n in marks:
            states.append(state)
        logger.debug("Viscous step %d/%d: t=%.4g, div %.3e, energy %.6e.", n, steps, state.t, residual, state.energy)
    return ViscousResult(states=states, diagnostics=diagnostics, dt=step, steps=steps)


"""
----------------------------------------------------------------------------------------------------
Bootstrap Check
----------------------------------------------------------------------------------------------------
"""
@dataclass(frozen=True)
class BootstrapReport:
    """
    Smallest constants ``C`` making ``M±(s) ≤ C(M±(0) + (M±(s) + μ₂/μ₁)M∓(s))`` hold along a trajectory.

    Attributes
    ----------
    C_plus, C_minus : float
        Fitted constants of the two inequalities.

    eps : float
        ``max M±(0) + |μ₂|/μ₁``.

    C_refined : float | None
        The same constant fitted on a refined run, when one was supplied.
    """
    # Data Class Attributes:
    C_plus: float
    C_minus: float
    eps: float
    C_refined: float = None

    @property
    def C(self) -> float:
        return max(self.C_plus, self.C_minus)

    @property
    def gate(self) -> float:
        """``C²ε``, which the continuity argument needs below ``1/2``."""
        return self.C ** 2 * self.eps

    @property
    def drift(self) -> float:
        if self.C_refined is None or self.C == 0:
            return 0.0
        return abs(self.C_refined - self.C) / self.C

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.C) and self.gate < 0.5 and self.drift <= REFINEMENT_DRIFT)


def _fit_constant(own: np.ndarray, other: np.ndarray, ratio: float) -> float:
    rhs = own[0] + (own + abs(ratio)) * other
    lhs = own
    safe = np.where(rhs > 0, rhs, 1.0)
    fitted = np.where(rhs > 0, lhs / safe, np.where(lhs > 0, np.inf, 0.0))
    return float(fitted.max()) if fitted.size else 0.0


def bootstrap_check(diag: MDiagnostics, mu1: float, mu2: float, refined: MDiagnostics = None) -> BootstrapReport:
    """
    Fits the bootstrap inequalities along a completed run.

    Notes
    -----
    1. Both inequalities are fitted on the running suprema ``M±``; zero data gives ``C = 0``.
    2. With ``refined`` (the same run at ``Δ/2``) the constant must agree within the refinement drift.
    """
    if not len(diag):
        raise ValueError("Input Error: bootstrap_check needs a completed run.")
    if mu1 <= 0:
        raise ValueError(f"Input Error: bootstrap_check needs μ₁ > 0, got {mu1}.")
    ratio = mu2 / mu1
    plus, minus = running_sup(pd.Series(diag.M_plus)).to_numpy(), running_sup(pd.Series(diag.M_minus)).to_numpy()
    C_plus = _fit_constant(plus, minus, ratio)
    C_minus = _fit_constant(minus, plus, ratio)
    C_refined = None
    if refined is not None:
        rp, rm = refined.M_plus, refined.M_minus
        C_refined = max(_fit_constant(rp, rm, ratio), _fit_constant(rm, rp, ratio))
    eps = max(plus[0], minus[0]) + abs(ratio)
    report = BootstrapReport(C_plus=C_plus, C_minus=C_minus, eps=eps, C_refined=C_refined)
    logger.info("Bootstrap fit: C=%.3g, eps=%.3g, C²ε=%.3g.", report.C, eps, report.gate)
    return report
