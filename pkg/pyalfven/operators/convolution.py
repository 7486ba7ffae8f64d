# Standard:
import math

# External:
import numpy as np
from scipy import fft
from scipy.special import roots_legendre

# Internal:
from ..fields.grid import Grid
from ..fields.calculus import derivative

# Constants:
from ..utils.constants import LEGENDRE_NEAR, LEGENDRE_FAR, NEAR_CELLS

CHUNK_CELLS = 4096


def stencil_extent(grid: Grid, radius: float) -> tuple[int, ...]:
    """
    Per-axis half-width (in cells) of a stencil covering ``|offset| ≤ radius``.

    Notes
    -----
    1. Free axes are capped at ``n - 1`` (larger offsets cannot pair two nodes); periodic axes at ``n`` so that a
       full period on each side is folded in.
    """
    want = int(math.ceil(radius / grid.spacing)) + 1
    return tuple(min(want, n if p else n - 1) for n, p in zip(grid.shape, grid.periodic))


def _cell_integrals(kernel, centres: np.ndarray, h: float, order: int) -> np.ndarray:
    """
    Tensor Gauss-Legendre integrals of ``kernel`` over the cells of side ``h`` centred at ``centres`` ``(d, n)``.
    """
    d, n = centres.shape
    x, w = roots_legendre(order)
    x, w = 0.5 * h * x, 0.5 * h * w
    sub = np.stack(np.meshgrid(*[x] * d, indexing='ij')).reshape(d, -1)
    weights = np.prod(np.stack(np.meshgrid(*[w] * d, indexing='ij')).reshape(d, -1), axis=0)

    out = None
    for start in range(0, n, CHUNK_CELLS):
        block = centres[:, start:start + CHUNK_CELLS]
        values = kernel(block[:, :, None] + sub[:, None, :])
        part = np.sum(values * weights, axis=-1)
        if out is None:
            out = np.empty(part.shape[:-1] + (n,))
        out[..., start:start + block.shape[1]] = part
    return out


def cell_stencil(kernel, grid: Grid, extent: tuple[int, ...], centre=None) -> np.ndarray:
    """
    Cell-integrated kernel stencil ``S[m] = ∫_{cell(m)} K(Y) dY`` over the offsets ``|m_a| ≤ extent_a``.

    Notes
    -----
    1. Cells within ``NEAR_CELLS`` of the origin use an 8-point Gauss-Legendre rule per axis, the rest a 4-point rule.
    2. ``centre``, when given, replaces the origin cell (e.g. an analytic value for a singular kernel).

    Parameters
    ----------
    kernel : callable
        Maps points ``(d, ...)`` to values ``(*comp, ...)``.

    grid : Grid
        Grid providing the spacing.

    extent : tuple[int, ...]
        Half-widths in cells per axis.

    centre : float | np.ndarray, optional
        Replacement for the origin cell.

    Returns
    -------
    np.ndarray
        Stencil of shape ``(*comp, 2e_0+1, ..., 2e_{d-1}+1)``.
    """
    d, h = grid.d, grid.spacing
    axes = [np.arange(-e, e + 1) for e in extent]
    offsets = np.stack(np.meshgrid(*axes, indexing='ij')).reshape(d, -1)
    near = np.max(np.abs(offsets), axis=0) <= NEAR_CELLS
    centres = offsets * h

    parts = {}
    for mask, order in ((near, LEGENDRE_NEAR), (~near, LEGENDRE_FAR)):
        if np.any(mask):
            parts[order] = (mask, _cell_integrals(kernel, centres[:, mask], h, order))
    comp = next(iter(parts.values()))[1].shape[:-1]
    flat = np.zeros(comp + (offsets.shape[1],))
    for mask, values in parts.values():
        flat[..., mask] = values

    stencil = flat.reshape(comp + tuple(2 * e + 1 for e in extent))
    if centre is not None:
        stencil[(Ellipsis,) + tuple(extent)] = centre
    return stencil


def _fft_shape(grid: Grid, extent: tuple[int, ...]) -> tuple[int, ...]:
    shape = []
    for n, e, periodic in zip(grid.shape, extent, grid.periodic):
        shape.append(n if periodic else fft.next_fast_len(n + min(e, n - 1), real=True))
    return tuple(shape)


def _stencil_spectrum(stencil: np.ndarray, grid: Grid, extent: tuple[int, ...], padded: tuple[int, ...]) -> np.ndarray:
    d = grid.d
    comp = stencil.shape[:stencil.ndim - d]
    arr = np.zeros(comp + padded)
    index = [np.mod(np.arange(-e, e + 1), p) for e, p in zip(extent, padded)]
    np.add.at(arr, (Ellipsis,) + np.ix_(*index), stencil)
    return fft.rfftn(arr, s=padded, axes=tuple(range(-d, 0)))


def apply_stencil(data: np.ndarray, stencil: np.ndarray, grid: Grid, extent: tuple[int, ...], key=None) -> np.ndarray:
    """
    Discrete convolution ``out[X] = Σ_Y S(X - Y) data[Y]`` by FFT.

    Notes
    -----
    1. Free axes are zero padded so no wraparound occurs; periodic axes fold the stencil modulo the period.
    2. With stencil components ``(*comp)`` and data components ``(*lead)`` the result has shape
       ``(*comp, *lead, *grid.shape)``.
    3. ``key`` memoizes the stencil spectrum on the grid.
    """
    d = grid.d
    padded = _fft_shape(grid, extent)
    axes = tuple(range(-d, 0))
    if key is None:
        spectrum = _stencil_spectrum(stencil, grid, extent, padded)
    else:
        spectrum = grid.cached(('spectrum', key, padded), lambda: _stencil_spectrum(stencil, grid, extent, padded))

    lead = data.shape[:data.ndim - d]
    data_hat = fft.rfftn(data, s=padded, axes=axes)
    comp = spectrum.shape[:spectrum.ndim - d]
    product = spectrum.reshape(comp + (1,) * len(lead) + spectrum.shape[len(comp):]) * data_hat
    out = fft.irfftn(product, s=padded, axes=axes)
    return out[(Ellipsis,) + tuple(slice(0, n) for n in grid.shape)]


def cell_average(data: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Second-order correction of point samples used against cell-integrated stencils, ``w - (Δ²/24) Δ_h w``.
    """
    lap = sum(derivative(derivative(data, grid, a), grid, a) for a in range(grid.d))
    return data - grid.spacing ** 2 / 24.0 * lap


def convolve(data: np.ndarray, kernel, grid: Grid, radius: float, key, subtract: bool = False,
             smooth: bool = True) -> np.ndarray:
    """
    Quadrature of ``∫K(X - Y) w(Y) dY`` over the grid from a cached cell-integrated stencil.

    Parameters
    ----------
    data : np.ndarray
        Nodal samples ``(*lead, *grid.shape)``.

    kernel : callable
        Kernel as accepted by ``cell_stencil``.

    grid : Grid
        Grid of ``data``.

    radius : float
        Support radius of the kernel (or the truncation radius for unbounded kernels).

    key : hashable
        Identifies the kernel for memoization.

    subtract : bool, default=False
        Use the subtraction form ``∫K(X - Y)(w(Y) - w(X)) dY``; exact for constants.

    smooth : bool, default=True
        Apply the ``cell_average`` correction to ``data`` first.

    Returns
    -------
    np.ndarray
        Values of shape ``(*comp, *lead, *grid.shape)``.
    """
    extent = stencil_extent(grid, radius)
    stencil = grid.cached(('stencil', key, extent), lambda: cell_stencil(kernel, grid, extent))
    source = cell_average(data, grid) if smooth else data
    out = apply_stencil(source, stencil, grid, extent, key=(key, extent))
    if subtract:
        mass = np.sum(stencil, axis=tuple(range(-grid.d, 0)))
        comp = mass.shape
        out = out - mass.reshape(comp + (1,) * data.ndim) * source
    return out


def stencil_for(kernel, grid: Grid, radius: float, key) -> tuple[np.ndarray, tuple[int, ...]]:
    """The cached stencil and its extent, as used by ``convolve``."""
    extent = stencil_extent(grid, radius)
    return grid.cached(('stencil', key, extent), lambda: cell_stencil(kernel, grid, extent)), extent
