# Standard:
import logging
from dataclasses import dataclass

# External:
import numpy as np

# Internal:
from ..analytics.holder import seminorm_alpha, sup_weighted
from ..analytics.weights import WeightSpec, sample
from ..fields.core import Field, ScalarField, VectorField
from ..fields.grid import Grid
from ..solvers.initial import band_limited, stream_velocity
from ..utils.errors import PreconditionError

logger = logging.getLogger(__name__)

TRIAL_KINDS = ('scalar', 'vector', 'solenoidal')


@dataclass(frozen=True)
class TrialSpec:
    """
    Recipe for random trial fields.

    Notes
    -----
    1. A trial is a band-limited random sum times the envelope ``h`` (regularized to ``ε = 1`` when ``h`` is one of
       the singular ``φ`` weights), rescaled so that ``|u|_{0;h} = amplitude``.
    2. Solenoidal trials differentiate a random stream function, so ``div u`` vanishes to rounding.
    3. On strip grids ``parity`` fixes the extension type of scalar trials; vector trials always take even tangential
       and odd normal components.

    Parameters
    ----------
    kind : str, default='scalar'
        'scalar', 'vector' or 'solenoidal'.

    k_max : float, default=1.0
        Band limit.

    envelope : WeightSpec | None
        Envelope and normalization weight; ``None`` is the unit weight.

    t : float, default=0.0
        Time at which a time-dependent envelope is sampled.

    parity : str, default='odd'
        Strip parity of scalar trials.

    amplitude : float, default=1.0
        Target ``|u|_{0;h}``.
    """
    # Data Class Attributes:
    kind: str = 'scalar'
    k_max: float = 1.0
    envelope: WeightSpec | None = None
    t: float = 0.0
    parity: str = 'odd'
    amplitude: float = 1.0

    def __post_init__(self):
        if self.kind not in TRIAL_KINDS:
            raise ValueError(f"Input Error: unknown trial kind '{self.kind}'.")
        if self.parity not in ('even', 'odd'):
            raise ValueError(f"Input Error: parity must be 'even' or 'odd', got '{self.parity}'.")
        if self.k_max <= 0 or self.amplitude < 0:
            raise ValueError("Input Error: trial band limit must be positive and amplitude nonnegative.")


def envelope_values(spec: TrialSpec, grid: Grid) -> np.ndarray:
    """Envelope samples; the singular ``φ`` weights are regularized so products stay bounded."""
    if spec.envelope is None:
        return np.ones(grid.shape)
    return sample(spec.envelope.with_eps(1.0), grid, spec.t)


def trial_field(spec: TrialSpec, grid: Grid, seed: int | np.random.SeedSequence = 0) -> Field:
    """
    Draws one trial field.

    Raises
    ------
    PreconditionError
        If the draw vanishes on the grid (no admissible modes, or an unlucky all-zero draw).
    """
    rng = np.random.default_rng(seed)
    env = envelope_values(spec, grid)
    if spec.kind == 'scalar':
        u = ScalarField(grid, band_limited(grid, spec.k_max, rng, spec.parity) * env)
    elif spec.kind == 'vector':
        parities = ['even'] * (grid.d - 1) + ['odd'] if grid.is_strip else ['odd'] * grid.d
        u = VectorField(grid, np.stack([band_limited(grid, spec.k_max, rng, p) * env for p in parities]))
    else:
        u = stream_velocity(band_limited(grid, spec.k_max, rng, 'odd') * env, grid)

    scale = sup_weighted(u, spec.envelope, spec.t)
    if not np.isfinite(scale) or scale == 0.0:
        raise PreconditionError('nonzero draw', f"{spec.kind} trial with k_max={spec.k_max} vanishes on the grid")
    return u * (spec.amplitude / scale)


def trial_fields(spec: TrialSpec, grid: Grid, seed: int | np.random.SeedSequence = 0, count: int = 1) -> list[Field]:
    """
    ``count`` independent trials drawn from spawned children of one seed.
    """
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    children = seed.spawn(count)
    return [trial_field(spec, grid, child) for child in children]


def smooth_coefficients(grid: Grid, eps0: float, alpha: float, seed: int | np.random.SeedSequence = 0) -> np.ndarray:
    """
    Symmetric coefficients ``a_ij = δ_ij + ε₀ s_ij`` with ``|s_ij|₀ + [s_ij]_α ≤ 1`` for every entry.
    """
    rng = np.random.default_rng(seed)
    d = grid.d
    a = np.zeros((d, d) + grid.shape)
    for i in range(d):
        for j in range(i, d):
            s = ScalarField(grid, band_limited(grid, 1.0, rng, 'even'))
            s = s / (s.max_abs() + seminorm_alpha(s, None, alpha))
            a[i, j] = a[j, i] = eps0 * s.data
        a[i, i] += 1.0
    return a
