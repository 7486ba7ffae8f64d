# Standard:
import logging
import math

# External:
import numpy as np
from scipy import fft, ndimage

# Internal:
from ..fields.core import Field
from ..fields.grid import Grid
from .trace import TraceRecorder, traced

# Constants:
from ..utils.constants import HEAT_MASS_TOL, HEAT_TRUNCATION_SIGMAS

logger = logging.getLogger(__name__)


def heat_stencil(h: float, tau: float) -> tuple[np.ndarray, float]:
    """
    Point-sampled 1D heat kernel ``(4πτ)^{-1/2} e^{-x²/4τ}`` truncated at 8 standard deviations.

    Returns
    -------
    tuple[np.ndarray, float]
        Normalized weights (summing to one) and the raw discrete mass ``h Σ K(τ, x_m)`` before normalization.
    """
    sigma = math.sqrt(2.0 * tau)
    half = max(1, int(math.ceil(HEAT_TRUNCATION_SIGMAS * sigma / h)))
    x = h * np.arange(-half, half + 1)
    g = np.exp(-x ** 2 / (4.0 * tau))
    raw = h * g.sum() / math.sqrt(4.0 * math.pi * tau)
    return g / g.sum(), float(raw)


def heat_mass(grid: Grid, tau: float) -> float:
    """
    Discrete mass of the heat stencil used by ``heat_apply`` on ``grid``: the product of per-axis raw masses on free
    axes (periodic axes use the exact symbol, whose zero mode is one).
    """
    if tau <= 0.0:
        return 1.0
    mass = 1.0
    for periodic in grid.periodic:
        if not periodic:
            mass *= heat_stencil(grid.spacing, tau)[1]
    return mass


def heat_apply(u: Field, gamma: float, t: float, recorder: TraceRecorder = None) -> Field:
    """
    Applies the heat semigroup ``H(γt)u = K(γt) * u`` componentwise.

    Notes
    -----
    1. Periodic axes multiply by the exact symbol ``exp(-γt ξ²)``; free axes convolve with the normalized sampled
       kernel of ``heat_stencil`` (zero outside the box). The kernel is separable, so axes are treated one at a time.
    2. ``γt = 0`` is the identity. A kernel narrower than the grid spacing is logged as under-resolved.
    3. Strip fields must be extended first.

    Parameters
    ----------
    u : Field
        Field of interest.

    gamma : float
        Diffusivity.

    t : float
        Elapsed time.

    recorder : TraceRecorder, optional
        Operator trace sink.

    Returns
    -------
    Field
        ``H(γt)u``, same type and grid as ``u``.
    """
    tau = gamma * t
    if tau < 0.0:
        raise ValueError(f"Input Error: heat_apply needs γt >= 0, got {tau:.3g}.")
    if tau == 0.0:
        return u
    grid = u.grid
    if grid.geometry == 'strip':
        raise ValueError("Input Error: extend strip fields before applying the heat semigroup.")
    h = grid.spacing
    if math.sqrt(2.0 * tau) < h:
        logger.warning("Heat kernel under-resolved: σ=%.3e below Δ=%.3e.", math.sqrt(2.0 * tau), h)

    with traced(recorder, 'heat', R=math.sqrt(2.0 * tau)) as info:
        data = u.data
        weights, raw = None, 1.0
        for axis, periodic in enumerate(grid.periodic):
            ax = data.ndim - grid.d + axis
            n = data.shape[ax]
            if periodic:
                xi = 2.0 * np.pi * fft.rfftfreq(n, d=h)
                shape = [1] * data.ndim
                shape[ax] = xi.size
                data = fft.irfft(fft.rfft(data, axis=ax) * np.exp(-tau * xi ** 2).reshape(shape), n=n, axis=ax)
            else:
                if weights is None:
                    weights, raw = heat_stencil(h, tau)
                data = ndimage.convolve1d(data, weights, axis=ax, mode='constant', cval=0.0)
        info['coarse_tail'] = abs(1.0 - raw)
        if info['coarse_tail'] > HEAT_MASS_TOL:
            logger.warning("Heat stencil mass %.12g differs from one by more than %.0e; weights were renormalized.", raw,
                           HEAT_MASS_TOL)
    return u._new(data)
