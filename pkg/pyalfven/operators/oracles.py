"""
Fourier-symbol reference operators on the periodic torus, used to cross-check the quadrature operators.
"""
# External:
import numpy as np
from scipy import fft

# Internal:
from ..fields.core import CurlField, ScalarField, VectorField, curl_pairs
from ..fields.grid import Grid


def wavenumbers(grid: Grid) -> np.ndarray:
    """Angular wavenumbers ``ξ`` of shape ``(d, *grid.shape)`` in FFT order."""
    if grid.geometry != 'periodic-torus':
        raise ValueError(f"Input Error: Fourier oracles need a periodic torus, got '{grid.geometry}'.")
    return grid.cached('wavenumbers', lambda: np.stack(np.meshgrid(
        *[2.0 * np.pi * fft.fftfreq(n, d=grid.spacing) for n in grid.shape], indexing='ij')))


def _apply(data: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    d = symbol.ndim
    axes = tuple(range(-d, 0))
    return np.real(fft.ifftn(symbol * fft.fftn(data, axes=axes), axes=axes))


def riesz_fft(w: ScalarField, i: int, j: int) -> ScalarField:
    """``R_iR_j w`` with symbol ``-ξ_iξ_j / |ξ|²`` (zero mode dropped)."""
    xi = wavenumbers(w.grid)
    norm2 = np.sum(xi ** 2, axis=0)
    symbol = np.where(norm2 > 0, -xi[i] * xi[j] / np.where(norm2 > 0, norm2, 1.0), 0.0)
    return ScalarField(w.grid, _apply(w.data, symbol))


def derivative_fft(data: np.ndarray, grid: Grid, axis: int) -> np.ndarray:
    xi = wavenumbers(grid)
    return _apply(data, 1j * xi[axis])


def inverse_laplacian_fft(data: np.ndarray, grid: Grid) -> np.ndarray:
    """``Δ⁻¹`` with the zero mode dropped."""
    norm2 = np.sum(wavenumbers(grid) ** 2, axis=0)
    return _apply(data, np.where(norm2 > 0, -1.0 / np.where(norm2 > 0, norm2, 1.0), 0.0))


def commutator_fft(u: ScalarField, w: ScalarField, i: int, j: int, k: int | None = None) -> ScalarField:
    """``u R_iR_j(∂_kw) - R_iR_j(u ∂_kw)`` by spectral differentiation and symbols."""
    grid = u.grid
    f = w.data if k is None else derivative_fft(w.data, grid, k)
    out = u.data * riesz_fft(ScalarField(grid, f), i, j).data - riesz_fft(ScalarField(grid, u.data * f), i, j).data
    return ScalarField(grid, out)


def _curl(z: np.ndarray, grid: Grid) -> np.ndarray:
    return np.stack([derivative_fft(z[j], grid, k) - derivative_fft(z[k], grid, j) for j, k in curl_pairs(grid.d)])


def pi1_fft(u: VectorField, w: VectorField) -> CurlField:
    """``Δ⁻¹ curl div(u ⊗ w)`` spectrally."""
    grid = u.grid
    d = grid.d
    div = np.stack([sum(derivative_fft(u.data[i] * w.data[j], grid, i) for i in range(d)) for j in range(d)])
    return CurlField(grid, np.stack([inverse_laplacian_fft(c, grid) for c in _curl(div, grid)]))


def pi2_fft(u: VectorField, w: VectorField) -> CurlField:
    """``Δ⁻¹curl(u·∇w) - u·∇(Δ⁻¹curl w)`` spectrally."""
    grid = u.grid
    d = grid.d
    adv = np.stack([sum(u.data[i] * derivative_fft(w.data[j], grid, i) for i in range(d)) for j in range(d)])
    first = np.stack([inverse_laplacian_fft(c, grid) for c in _curl(adv, grid)])
    stream = np.stack([inverse_laplacian_fft(c, grid) for c in _curl(w.data, grid)])
    second = np.stack([sum(u.data[i] * derivative_fft(s, grid, i) for i in range(d)) for s in stream])
    return CurlField(grid, first - second)


def heat_fft(u: ScalarField, tau: float) -> ScalarField:
    """``H(τ)u`` with symbol ``exp(-τ|ξ|²)``."""
    xi = wavenumbers(u.grid)
    return ScalarField(u.grid, _apply(u.data, np.exp(-tau * np.sum(xi ** 2, axis=0))))


def pressure_fft(u: VectorField, w: VectorField) -> VectorField:
    """``-∇p`` with ``-Δp = ∂_iu^j∂_jw^i``, i.e. ``∇Δ⁻¹(∂_iu^j∂_jw^i)`` with spectral derivatives."""
    grid = u.grid
    d = grid.d
    g = sum(derivative_fft(u.data[j], grid, i) * derivative_fft(w.data[i], grid, j) for i in range(d) for j in range(d))
    phi = inverse_laplacian_fft(g, grid)
    return VectorField(grid, np.stack([derivative_fft(phi, grid, a) for a in range(d)]))
