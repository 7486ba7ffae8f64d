# Standard:
import logging
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

# External:
import numpy as np
import pandas as pd

# Internal:
from ..fields.grid import Grid
from ..utils.errors import PreconditionError
from . import cases

# Constants:
from ..utils.constants import ESTIMATOR_SLACK, LEMMA_REPORT_COLS, MAX_GENERATOR_ATTEMPTS, REFINEMENT_DRIFT

logger = logging.getLogger(__name__)

# Ratios below this floor are rounding-level; refinement drift is measured against it.
DRIFT_FLOOR = 1e-8


@dataclass(frozen=True)
class InequalityCase:
    """
    One registered inequality: an evaluator of ``(lhs, constant-free rhs)`` on a grid plus its anchor display.

    Parameters
    ----------
    id : str
        Registry id, e.g. 'L5.7'.

    anchor : str
        The inequality as displayed, verbatim.

    evaluator : Callable[[Grid, int], tuple[float, float]]
        Draws one trial from a seed and returns both sides.

    tags : tuple[str, ...]
        Filter tags.

    geometry, d, L, N :
        Coarse grid of the case; the refined grid halves its spacing.

    max_trials : int | None
        Cap on trials for expensive cases (weight quadratures, solver runs).

    bounds : tuple[float | None, float | None]
        Hard bounds on ``max_ratio`` for equalities and constant-one inequalities.
    """
    # Data Class Attributes:
    id: str
    anchor: str
    evaluator: Callable[[Grid, int], tuple[float, float]]
    tags: tuple = ()
    geometry: str = 'free-box'
    d: int = 2
    L: float = 4.0
    N: int = 32
    max_trials: int | None = None
    bounds: tuple = (None, None)

    @property
    def grid(self) -> Grid:
        return Grid(d=self.d, L=self.L, N=self.N, geometry=self.geometry)

    def matches(self, text: str) -> bool:
        """A filter term selects a case by exact id, id prefix or tag."""
        return self.id == text or self.id.startswith(text) or text in self.tags


@dataclass(frozen=True)
class InequalityReport:
    """
    Result of one case over its trial ensemble.

    Attributes
    ----------
    max_ratio : float
        Largest ``lhs/rhs`` over the trials on the coarse grid.

    ratio_refined : float
        ``lhs/rhs`` of the worst trial on the refined grid.

    passed : bool
        Finite, refinement-stable and within the case bounds.

    seed : int
        Trial seed of the worst trial, which replays it exactly.

    wall_ms : float
        Wall time; zero unless timing was requested.
    """
    # Data Class Attributes:
    id: str
    trials: int
    max_ratio: float
    ratio_refined: float
    passed: bool
    seed: int
    wall_ms: float = 0.0
    ratios: tuple = field(default=(), compare=False, repr=False)

    @property
    def drift(self) -> float:
        return self.ratio_refined / max(self.max_ratio, DRIFT_FLOOR)

    def to_row(self) -> dict:
        values = [self.id, self.trials, self.max_ratio, self.ratio_refined, self.passed, self.seed, self.wall_ms]
        return dict(zip(LEMMA_REPORT_COLS, values))


"""
----------------------------------------------------------------------------------------------------
Registry
----------------------------------------------------------------------------------------------------
"""
SLACK_HI = 1.0 + ESTIMATOR_SLACK

REGISTERED_CASES = (
    InequalityCase('L2.1-product', '|uw|_{k,α;h₁h₂} ≤ C|u|_{k,α;h₁}|w|_{k,α;h₂}',
                   cases.product_law, ('holder',)),
    InequalityCase('L2.2', '|u∘Φ|_{0,α;h∘Φ} ≤ |u|_{0,α;h}max(|∇Φ|₀^α, 1)',
                   cases.composition, ('holder', 'transport')),
    InequalityCase('L2.3', '|∫₀ᵗu(s)ds|_{1,α;h,√(k+γt)} ≤ Cγ⁻¹sup_s(...), φ_α(R)=max(R,R^{1+α})',
                   cases.time_integral, ('holder',)),
    InequalityCase('L2.4', '|u∘Φ|_{1,α;h∘Φ,R} ≤ |u|_{1,α;h,R}max(|∇Φ|₀^α,1)max(|∇Φ|_{0,α;1,R},1)',
                   cases.scaled_composition, ('holder', 'transport')),
    InequalityCase('L2.5-even', '|T_ef|_{0,α;h} = |f|_{0,α;h,Ω}',
                   cases.even_extension, ('extension', 'identity'), geometry='strip', bounds=(0.95, SLACK_HI)),
    InequalityCase('L2.5-odd', '|f|_{0,α;h,Ω} ≤ |T_of|_{0,α;h} ≤ 2|f|_{0,α;h,Ω}',
                   cases.odd_extension, ('extension',), geometry='strip', bounds=(0.95, 2.0 * SLACK_HI)),
    InequalityCase('L3.3', 'f₊f₋ ≤ Cg, g(t,X) ≤ C(1+|X-Y|)^{d+1}g(t,Y), ∫g(s,X±B₀s)ds ≤ Cδ(T)f(X)',
                   cases.g_lemma, ('weights',), max_trials=2),
    InequalityCase('L3.4', '|∇Φ-Id|₀ ≤ e^{A₀}-1, |∇Φ|₀ ≤ e^{A₀}, [∇Φ]_α ≤ 2A₀e^{(2+α)A₀}',
                   cases.flow_regularity, ('transport',), bounds=(None, 1.0)),
    InequalityCase('L3.5', '|u(t)|_{0,α} ≤ e^{αA₀}(|u₀|_{0,α} + ∫|F|_{0,α})',
                   cases.transport_holder, ('transport',)),
    InequalityCase('P3.6', '|u|_{1,α;f₊,T} ≤ C(|u₀|_{1,α;f} + δ(T)|F|_{1,α;g,T})',
                   cases.weighted_transport, ('transport', 'weights'), max_trials=4),
    InequalityCase('L3.7', '∂_iū^j∂_jw̄^i = T_e(∂_iu^j∂_jw^i), ū^j∂_jw̄^i = T_e(u^j∂_jw^i)',
                   cases.extension_products, ('extension', 'identity'), geometry='strip', bounds=(None, 1e-10)),
    InequalityCase('E3.12', '|I(u,w)|_{0,α} ≤ C|u|_{0,α}|w|_{1,α}',
                   cases.pressure_holder, ('pressure',)),
    InequalityCase('E3.13', '|div I(u,w) - g(u,w)|₀ ≤ C(|u|₀|div w|₀ + |w|₀|div u|₀)',
                   cases.pressure_divergence, ('pressure',)),
    InequalityCase('P4.1', 'sup|u(t)|_{1,α;f(t),(1+γt)^{1/2}} ≤ C(|u(0)|_{1,α;f(0),1} + Λ₁(T,F₁,F₂,G,f,h))',
                   cases.parabolic, ('parabolic',), max_trials=4),
    InequalityCase('P4.2', 'sup|u(t)|_{1,α;f̂₊(t),(k+γt)^{1/2}} ≤ C(|u₀|_{1,α;f̂(0),k} + Λ_k(T,F₁,F₂,G,f̂₊,h))',
                   cases.transport_diffusion, ('transport', 'parabolic'), max_trials=4),
    InequalityCase('L4.3', '∫₀ᵗH(2γ(t-s))h±(s)ds ≤ c₀⁻¹f̂(t), ∫₀ᵀf(t,X±2B₀t)dt ≤ c₀⁻¹, H(2γ(t-s))f̂(s) ≤ c₀⁻¹f̂(t)',
                   cases.transport_diffusion_weights, ('weights',), max_trials=2),
    InequalityCase('L4.5', '|z±⁽²⁾(t)|_{0,α;f₁(t),(μ₁t)^{1/2}} ≤ Cμ₁min((μ₁t)^{-1/2},(μ₁t)^{-(1-α)/2})M±(t)',
                   cases.viscous_split, ('solver',), max_trials=2),
    InequalityCase('L5.1', '|T₁u|_{1,α;h} ≤ C|u|_{0,α;h}, |T_ijw|_{1,α;g} ≤ C|w|_{0;h}',
                   cases.integral_operators, ('pressure',)),
    InequalityCase('L5.2', 'div(T₁u + T_ijw^{ij}) + u = ∫∇N·∇θ u - ∫∂_i∂_j(∇N·∇θ)w^{ij}',
                   cases.telescoping, ('pressure', 'identity'), geometry='periodic-torus'),
    InequalityCase('E5.4', '|I(u,w)|_{1,α;g(t),(1+μ₁t)^{1/2}} ≤ C|u|_{1,α;f₊(t),(1+μ₁t)^{1/2}}|w|_{1,α;f₋(t),(1+μ₁t)^{1/2}}',
                   cases.pressure_viscous, ('pressure',), max_trials=8),
    InequalityCase('E5.5', '|I(u,w)|_{0,α;f±} ≤ C|u|_{0,α;1,(1+γt)^{1/2}}|w|_{1,α;f±,(1+γt)^{1/2}}(1+γt)^{-1/2}',
                   cases.pressure_unweighted, ('pressure',)),
    InequalityCase('L5.3', '|∇^kH(t)u|_{0;H(2t)h} ≤ Ct^{-k/2}|u|_{0;h}',
                   cases.heat_derivatives, ('heat',)),
    InequalityCase('L5.4', '|H(t)u|_{1,α;H(2t)h,√(k+t)} ≤ C|u|_{1,α;h,√k}',
                   cases.heat_holder, ('heat',)),
    InequalityCase('E5.6-kernel', '|∇^kK(t)| ≤ Ct^{-k/2}K(2t)',
                   cases.heat_kernel_bounds, ('heat',)),
    InequalityCase('L5.5', 'R^{-d}∫_{B(X,R)}h(Y)f₁(t,Y)dY ≤ Ch(X)min(R^{-δ},(1+μ₁t)^{-δ/2})',
                   cases.ball_weight, ('weights',), max_trials=4),
    InequalityCase('P5.6', '|[u,R_iR_j]∂_kw|_{1,α;f±(t),(μ₁t)^{1/2}} ≤ C|u|_{1,α;f±(t),(1+μ₁t)^{1/2}}|w|_{1,α;f₁(t),(μ₁t)^{1/2}}',
                   cases.riesz_bounds, ('riesz',), max_trials=8),
    InequalityCase('L5.7', '|∇²u|_{0,α;h,R} ≤ C(|∇u|_{0,α;h}min(R^{-1+α},R^{-1}) + |Δu|_{0,α;h,R})',
                   cases.schauder, ('holder',)),
    InequalityCase('E5.7', '[u]_{α;h} ≤ [u]_{1;h}^α|u|_{0;h}^{1-α}',
                   cases.interpolation_inequality, ('holder', 'identity'), bounds=(None, SLACK_HI)),
)

CASES = {case.id: case for case in REGISTERED_CASES}


def get_case(case_id: str) -> InequalityCase:
    try:
        return CASES[case_id]
    except KeyError:
        raise KeyError(f"Input Error: unknown registry id '{case_id}'.") from None


def select_cases(filter: str = '') -> list[InequalityCase]:
    """
    Cases matching a comma-separated filter (ids, id prefixes or tags); an empty filter selects the whole registry.

    Raises
    ------
    KeyError
        If a filter term matches nothing.
    """
    terms = [term.strip() for term in filter.split(',') if term.strip()]
    if not terms:
        return list(REGISTERED_CASES)
    for term in terms:
        if not any(case.matches(term) for case in REGISTERED_CASES):
            raise KeyError(f"Input Error: filter term '{term}' matches no registered case.")
    return [case for case in REGISTERED_CASES if any(case.matches(term) for term in terms)]


def list_cases() -> list[str]:
    """One ``id<TAB>anchor`` line per registered case."""
    return [f"{case.id}\t{case.anchor}" for case in REGISTERED_CASES]


"""
----------------------------------------------------------------------------------------------------
Running Cases
----------------------------------------------------------------------------------------------------
"""
def trial_seeds(case_id: str, n_trials: int, seed: int) -> list[int]:
    """Per-trial seeds from ``(seed, crc32(id))``, independent across cases and stable across runs."""
    state = np.random.SeedSequence([seed, zlib.crc32(case_id.encode())]).generate_state(n_trials)
    return [int(s) for s in state]


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf


def _evaluate(case: InequalityCase, grid: Grid, seed: int) -> tuple[float, int]:
    """
    Ratio of one trial, redrawing up to ``MAX_GENERATOR_ATTEMPTS`` times when the draw violates a gate.

    Returns
    -------
    tuple[float, int]
        The ratio and the seed that produced it.
    """
    gate = None
    for attempt in range(MAX_GENERATOR_ATTEMPTS):
        trial = seed if attempt == 0 else int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])
        try:
            return _ratio(*case.evaluator(grid, trial)), trial
        except PreconditionError as error:
            gate = error.gate
            logger.debug("Case %s: draw %d violates gate '%s'.", case.id, trial, gate)
    raise PreconditionError(gate, f"case {case.id} found no admissible draw in {MAX_GENERATOR_ATTEMPTS} attempts")


def run_case(case_id: str, n_trials: int = 32, seed: int = 0, threads: int = 1, timing: bool = False,
             grid: Grid = None) -> InequalityReport:
    """
    Evaluates one registered inequality over a seeded trial ensemble.

    Notes
    -----
    1. The coarse grid is the case grid (or ``grid``); the worst trial is replayed on ``grid.refined()``.
    2. Passing means a finite ratio, ``ratio_refined ≤ 1.2·max(max_ratio, 1e-8)`` and the case bounds; the
       inequality constants themselves are never prescribed.
    3. Trials may run on ``threads`` workers; ratios are merged in seed order, so the report does not depend on it.

    Parameters
    ----------
    case_id : str
        Registered id.

    n_trials : int, default=32
        Trial count (capped by the case's ``max_trials``).

    seed : int, default=0
        Ensemble seed.

    threads : int, default=1
        Worker threads.

    timing : bool, default=False
        Whether to record wall time (off by default, so reports are byte-reproducible).

    Returns
    -------
    InequalityReport
        The case result.

    Raises
    ------
    KeyError
        If ``case_id`` is not registered.

    PreconditionError
        If a trial finds no admissible draw.
    """
    case = get_case(case_id)
    if n_trials < 1:
        raise ValueError(f"Input Error: need at least one trial, got {n_trials}.")
    count = min(n_trials, case.max_trials or n_trials)
    coarse = grid or case.grid
    seeds = trial_seeds(case_id, count, seed)
    started = time.perf_counter()

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda s: _evaluate(case, coarse, s), seeds))
    else:
        outcomes = [_evaluate(case, coarse, s) for s in seeds]
    ratios = [r for r, _ in outcomes]
    worst = int(np.argmax(ratios))
    max_ratio, worst_seed = outcomes[worst]
    refined, _ = _evaluate(case, coarse.refined(), worst_seed)

    lo, hi = case.bounds
    passed = bool(np.isfinite(max_ratio) and np.isfinite(refined)
                  and refined <= (1.0 + REFINEMENT_DRIFT) * max(max_ratio, DRIFT_FLOOR)
                  and (lo is None or min(ratios) >= lo)
                  and (hi is None or max(max_ratio, refined) <= hi))
    wall_ms = 1e3 * (time.perf_counter() - started) if timing else 0.0
    logger.info("Case %s: %d trials, max ratio %.4g, refined %.4g, %s.", case_id, count, max_ratio, refined,
                'pass' if passed else 'FAIL')
    return InequalityReport(id=case_id, trials=count, max_ratio=float(max_ratio), ratio_refined=float(refined),
                            passed=passed, seed=worst_seed, wall_ms=wall_ms, ratios=tuple(ratios))


def run_suite(filter: str = '', n_trials: int = 32, seed: int = 0, threads: int = 1,
              timing: bool = False) -> pd.DataFrame:
    """
    Runs every case matching ``filter``; one row per case in registry order with ``LEMMA_REPORT_COLS``.
    """
    selected = select_cases(filter)
    reports = [run_case(case.id, n_trials, seed, threads, timing) for case in selected]
    return reports_to_frame(reports)


def reports_to_frame(reports: list[InequalityReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in reports], columns=LEMMA_REPORT_COLS)
