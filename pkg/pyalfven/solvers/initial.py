# Standard:
import logging

# External:
import numpy as np

# Internal:
from ..fields.calculus import derivative
from ..fields.core import VectorField
from ..fields.grid import Grid

# Constants:
from ..utils.constants import DEFAULT_DELTA

logger = logging.getLogger(__name__)


def _axis_basis(grid: Grid, axis: int, k_max: float, parity: str = 'odd') -> tuple[np.ndarray, np.ndarray]:
    """
    1D basis functions along one axis with their wavenumbers.

    Notes
    -----
    1. Box and torus axes carry ``cos(πmx/L)`` and ``sin(πmx/L)``, periodic on ``[-L, L)``.
    2. The strip-normal axis carries ``sin(πmy)``, ``m ≥ 1``, vanishing on ``y = 0`` and ``y = 1`` for odd parity,
       and ``cos(πmy)``, ``m ≥ 0``, with vanishing normal derivative for even parity.
    3. Strip-normal wavenumbers are counted from the lowest admissible mode, so ``sin(πy)`` passes any band.
    """
    x = grid.axis(axis)
    if grid.is_strip and axis == grid.d - 1:
        count = max(1, int(np.floor(k_max / np.pi)))
        if parity == 'even':
            m = np.arange(count + 1)
            return np.cos(np.pi * np.outer(m, x)), np.pi * m
        m = np.arange(1, count + 1)
        return np.sin(np.pi * np.outer(m, x)), np.pi * (m - 1)

    count = int(np.floor(k_max * grid.L / np.pi))
    k = np.pi * np.arange(count + 1) / grid.L
    cos = np.cos(np.outer(k, x))
    sin = np.sin(np.outer(k[1:], x))
    return np.vstack([cos, sin]), np.concatenate([k, k[1:]])


def band_limited(grid: Grid, k_max: float, rng: np.random.Generator, parity: str = 'odd') -> np.ndarray:
    """
    Random band-limited scalar samples ``Σ c_m Π_a b_{m_a}(x_a)`` with Gaussian ``c_m`` and ``|k_m| ≤ k_max``.
    """
    if parity not in ('even', 'odd'):
        raise ValueError(f"Input Error: parity must be 'even' or 'odd', got '{parity}'.")
    bases, norms = zip(*[_axis_basis(grid, a, k_max, parity) for a in range(grid.d)])
    k2 = sum(np.meshgrid(*[n ** 2 for n in norms], indexing='ij'))
    coeff = rng.standard_normal(k2.shape) * (k2 <= k_max ** 2 + 1e-12)
    out = coeff
    for basis in bases:
        out = np.tensordot(out, basis, axes=([0], [0]))
    return out


def envelope(grid: Grid, delta: float = DEFAULT_DELTA) -> np.ndarray:
    """
    ``⟨(x₁, x₂)⟩^{-(1+δ)}`` over the unbounded horizontal directions; ``1`` on the torus.

    Notes
    -----
    1. On strip geometries only the box axes enter, so the strip-normal coordinate is never weighted.
    """
    if grid.geometry == 'periodic-torus':
        return np.ones(grid.shape)
    X = grid.coordinates
    axes = range(grid.d - 1) if grid.is_strip else range(min(2, grid.d))
    return (1.0 + sum(X[a] ** 2 for a in axes)) ** (-(1.0 + delta) / 2.0)


def stream_velocity(stream: np.ndarray, grid: Grid) -> VectorField:
    """
    ``z = (∂₂s, -∂₁s, 0, ...)``, solenoidal to rounding since the difference operators of distinct axes commute.
    """
    last = grid.d - 1
    comps = [np.zeros(grid.shape) for _ in range(grid.d)]
    comps[0] = derivative(stream, grid, last)
    comps[last] = -derivative(stream, grid, 0)
    if grid.is_strip:
        comps[last][..., 0] = 0.0
        comps[last][..., -1] = 0.0
    return VectorField(grid, np.stack(comps))


def random_solenoidal(grid: Grid, eps: float = 1e-2, delta: float = DEFAULT_DELTA, k_max: float = 1.0,
                      seed: int | np.random.SeedSequence = 0) -> VectorField:
    """
    Band-limited divergence-free data with ``max|z| = ε``.

    Notes
    -----
    1. A random stream function is multiplied by ``envelope`` and differentiated, so the data decays like
       ``⟨(x₁, x₂)⟩^{-(1+δ)}`` and the weighted norms at ``t = 0`` are finite.
    2. On the strip the normal component vanishes on both walls, as the symmetric extension requires.

    Parameters
    ----------
    grid : Grid
        Target grid.

    eps : float, default=1e-2
        Amplitude ``max|z|``; ``0`` gives zero data.

    delta : float, default=0.25
        Envelope decay.

    k_max : float, default=1.0
        Largest wavenumber of the stream function.

    seed : int | SeedSequence, default=0
        Seed of the coefficient draw.

    Returns
    -------
    VectorField
        Solenoidal data on ``grid``.
    """
    if eps == 0:
        return VectorField.zeros(grid)
    rng = np.random.default_rng(seed)
    stream = band_limited(grid, k_max, rng) * envelope(grid, delta)
    z = stream_velocity(stream, grid)
    scale = z.max_abs()
    if scale == 0:
        raise ValueError(f"Input Error: k_max={k_max} admits no modes on this grid.")
    return z * (eps / scale)


def initial_pair(grid: Grid, eps: float = 1e-2, delta: float = DEFAULT_DELTA, seed: int = 0,
                 k_max: float = 1.0) -> tuple[VectorField, VectorField]:
    """Independent ``(z₊₀, z₋₀)`` drawn from spawned children of one seed."""
    plus, minus = np.random.SeedSequence(seed).spawn(2)
    logger.debug("Initial data: eps=%.3g, delta=%.3g, seed=%d, k_max=%.3g.", eps, delta, seed, k_max)
    return (random_solenoidal(grid, eps, delta, k_max, plus),
            random_solenoidal(grid, eps, delta, k_max, minus))
