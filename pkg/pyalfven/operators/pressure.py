# Standard:
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

# External:
import numpy as np
import pandas as pd
from scipy import fft, stats

# Internal:
from ..fields.core import ScalarField, VectorField
from ..fields.calculus import derivative, gradient, vector_gradient, divergence
from ..fields.grid import Grid
from .convolution import (apply_stencil, cell_average, cell_stencil, convolve, stencil_extent, stencil_for,
                          _fft_shape, _stencil_spectrum)
from .kernels import (CutoffProfile, core_gradN, far_pressure, fd_derivative, log_centre_cell, ring_gradN,
                      ring_riesz, surface_area, theta_moment, witness_kernel)
from .trace import TraceRecorder, traced

# Constants:
from ..utils.mappings import KERNEL_FAMILIES

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DyadicLadder:
    """
    Range of dyadic rings resolved on a grid for one kernel family.

    Notes
    -----
    1. ``gradN-theta`` rings are ``φ_k`` supported on ``[2^{-k-1}R, 2^{1-k}R]`` for ``k = n_min..n_max``; the finest ring
       keeps ``2^{-n_max} R ≥ 2Δ``.
    2. ``riesz`` rings are ``φ_n`` supported on ``[2^{-n-1}, 2^{1-n}]``, with ``2^{-n_max} ≥ 2Δ`` and ``2^{-n_min} ≤ 2L``.
    3. ``divergence-witness`` rings ``φ*_k`` follow the ``gradN-theta`` bounds with ``R = 1``.

    Parameters
    ----------
    family : str
        One of ``KERNEL_FAMILIES``.

    n_min, n_max : int
        Inclusive ring index range; empty when ``n_max < n_min``.

    R : float
        Scale of the ``gradN-theta`` family.
    """
    # Data Class Attributes:
    family: str
    n_min: int
    n_max: int
    R: float = 1.0

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise KeyError(f"Unknown kernel family '{self.family}'.")

    @classmethod
    def for_grid(cls, grid: Grid, family: str, R: float = 1.0) -> 'DyadicLadder':
        h = grid.spacing
        if family == 'riesz':
            n_max = int(math.floor(math.log2(1.0 / (2.0 * h))))
            n_min = int(math.ceil(1.0 - math.log2(grid.L)))
            return cls(family, n_min, n_max)
        if R < h:
            raise ValueError(f"Input Error: near-field scale R={R:.3g} is below the grid spacing {h:.3g}.")
        return cls(family, 0, int(math.floor(math.log2(R / (2.0 * h)))), R)

    @property
    def rings(self) -> range:
        return range(self.n_min, self.n_max + 1)

    @property
    def core_radius(self) -> float:
        """Scale ``ρ`` of the unresolved core ``θ(|X|/ρ)`` below the finest ring."""
        return self.R * 2.0 ** (-(self.n_max + 1))

    def outer_radius(self, n: int) -> float:
        return self.R * 2.0 ** (1 - n)

    def kernel(self, n: int):
        """Ring kernel ``n`` as a callable on points ``(d, ...)``."""
        if self.family == 'gradN-theta':
            return lambda X: ring_gradN(X, n, self.R)
        if self.family == 'riesz':
            return lambda X: ring_riesz(X, n)
        return lambda X: witness_kernel(X, n)


"""
----------------------------------------------------------------------------------------------------
Kernel Diagnostics
----------------------------------------------------------------------------------------------------
"""
def ring_mean(grid: Grid, ladder: DyadicLadder, n: int) -> float:
    """
    Discrete mean of ring ``n`` relative to its discrete L¹ mass, ``|Σ S| / Σ |S|`` per component.
    """
    stencil, _ = stencil_for(ladder.kernel(n), grid, ladder.outer_radius(n),
                             key=(ladder.family, 'ring', n, ladder.R))
    axes = tuple(range(-grid.d, 0))
    mass = np.sum(np.abs(stencil), axis=axes)
    return float(np.max(np.abs(np.sum(stencil, axis=axes)) / np.where(mass > 0, mass, 1.0)))


def _magnitude(arr: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(arr ** 2, axis=tuple(range(arr.ndim - 1))))


def _polar_nodes(inner: float, outer: float, radial: int = 96, angular: int = 128) -> tuple[np.ndarray, np.ndarray]:
    """Polar quadrature points ``(2, radial*angular)`` and weights over an annulus in the plane."""
    x, w = np.polynomial.legendre.leggauss(radial)
    r = 0.5 * (outer - inner) * x + 0.5 * (outer + inner)
    wr = 0.5 * (outer - inner) * w * r
    phi = 2.0 * np.pi * np.arange(angular) / angular
    R, P = np.meshgrid(r, phi, indexing='ij')
    points = np.stack([R * np.cos(P), R * np.sin(P)]).reshape(2, -1)
    weights = (wr[:, None] * np.full(angular, 2.0 * np.pi / angular)[None, :]).reshape(-1)
    return points, weights


def ring_l1_profile(ks, alpha: float = 0.5, family: str = 'gradN-theta') -> pd.DataFrame:
    """
    L¹ moments of the planar ring kernels by polar quadrature.

    Notes
    -----
    1. Columns ``l1 = ∫|φ_k|``, ``grad = ∫|∇φ_k||X|^α`` and ``hess = ∫|∇²φ_k||X|^α``; derivatives are fourth-order
       differences of the analytic kernel with a step proportional to the ring scale.
    2. The expected scalings are ``2^{-k}``, ``2^{-kα}`` and ``2^{k(1-α)}``; the normalized columns ``l1_scaled``,
       ``grad_scaled`` and ``hess_scaled`` should stay bounded in ``k``.

    Parameters
    ----------
    ks : iterable of int
        Ring indices.

    alpha : float, default=0.5
        Hölder exponent of the moments.

    family : str, default='gradN-theta'
        Kernel family (``R = 1``).

    Returns
    -------
    pd.DataFrame
        One row per ring, indexed by ``k``.
    """
    ladder = DyadicLadder(family, min(ks), max(ks))
    rows = []
    for k in ks:
        kernel = ladder.kernel(k)
        inner, outer = 2.0 ** (-k - 1), 2.0 ** (1 - k)
        points, weights = _polar_nodes(inner, outer)
        step = 1e-3 * inner
        r_alpha = np.sqrt(np.sum(points ** 2, axis=0)) ** alpha

        values = kernel(points)
        grads = np.stack([fd_derivative(kernel, points, a, step) for a in range(2)])
        hess = np.stack([fd_derivative(lambda X, a=a: fd_derivative(kernel, X, a, step), points, b, step)
                         for a in range(2) for b in range(2)])
        l1 = float(np.sum(_magnitude(values) * weights))
        grad = float(np.sum(_magnitude(grads) * r_alpha * weights))
        hessian = float(np.sum(_magnitude(hess) * r_alpha * weights))
        rows.append([k, l1, grad, hessian, l1 * 2.0 ** k, grad * 2.0 ** (k * alpha), hessian * 2.0 ** (-k * (1 - alpha))])
    return pd.DataFrame(rows, columns=['k', 'l1', 'grad', 'hess', 'l1_scaled', 'grad_scaled', 'hess_scaled']).set_index('k')


@lru_cache(maxsize=8)
def kernel_decay_constant(d: int = 2, R: float = 1.0, samples: int = 400) -> float:
    """
    ``sup |∂_i∂_j[∇N(1 - θ(|X|/R))]^m| (1 + |X|^{d+1})`` sampled along rays, the decay constant of the far kernel.
    """
    r = np.geomspace(R, 1e3 * R, samples)
    phi = np.linspace(0.0, np.pi / 2.0, 33)
    Rg, P = np.meshgrid(r, phi, indexing='ij')
    if d == 2:
        X = np.stack([Rg * np.cos(P), Rg * np.sin(P)])
    else:
        X = np.stack([Rg * np.cos(P), Rg * np.sin(P) / math.sqrt(2.0), Rg * np.sin(P) / math.sqrt(2.0)])
    K = np.abs(far_pressure(X, R)).max(axis=(0, 1, 2))
    return float(np.max(K * (1.0 + Rg ** (d + 1))))


def _boundary_layer_max(data: np.ndarray, grid: Grid) -> float:
    """Maximum magnitude on the outermost node layer of every free axis (zero when all axes are periodic)."""
    out = 0.0
    for axis, periodic in enumerate(grid.periodic):
        if periodic:
            continue
        ax = data.ndim - grid.d + axis
        edges = np.take(data, [0, data.shape[ax] - 1], axis=ax)
        out = max(out, float(np.abs(edges).max()))
    return out


"""
----------------------------------------------------------------------------------------------------
Near And Far Fields
----------------------------------------------------------------------------------------------------
"""
def T1(u: ScalarField, R: float = 1.0, recorder: TraceRecorder = None) -> VectorField:
    """
    Near-field Newton operator ``T₁u(X) = ∫∇N(X - Y) θ(|X - Y|/R) u(Y) dY``.

    Notes
    -----
    1. The resolved rings ``k = 0..k_max`` are summed into one kernel ``∇N(θ(r/R) - θ(r/ρ))`` and applied in the
       subtraction form ``∫φ(X - Y)(u(Y) - u(X)) dY``, so constants map to zero ring by ring.
    2. The unresolved core ``∇N θ(r/ρ)`` contributes ``-(ρ² m₁ / d) ∇u`` with ``m₁ = ∫θ(s) s ds``.

    Parameters
    ----------
    u : ScalarField
        Field of interest (decaying on a free box, or periodic).

    R : float, default=1.0
        Cutoff scale; must be at least the grid spacing.

    recorder : TraceRecorder, optional
        Operator trace sink.

    Returns
    -------
    VectorField
        ``T₁u``.
    """
    grid = u.grid
    ladder = DyadicLadder.for_grid(grid, 'gradN-theta', R)
    rho = ladder.core_radius
    d = grid.d

    with traced(recorder, 'T1', R=R, n_min=ladder.n_min, n_max=ladder.n_max) as info:
        if ladder.n_max >= 0:
            kernel = lambda X: core_gradN(X, R) - core_gradN(X, rho)
            rings = convolve(u.data, kernel, grid, 2.0 * R, key=('T1', R), subtract=True)
        else:
            rings = np.zeros((d,) + grid.shape)
        core = -(rho ** 2 * theta_moment(1) / d) * gradient(u).data
        info['fine_tail'] = float(np.abs(core).max()) if core.size else 0.0
    return VectorField(grid, rings + core)


def _far_stencil(grid: Grid, R: float):
    radius = 4.0 * grid.L + 2.0 * R
    stencil, extent = stencil_for(lambda X: far_pressure(X, R), grid, radius, key=('Tij', R))
    return stencil, extent


def _far_contract(products: np.ndarray, grid: Grid, R: float) -> np.ndarray:
    """``Σ_ij ∫∂_i∂_j[∇N(1 - θ(|·|/R))](X - Y) P_ij(Y) dY`` for products ``P`` of shape ``(d, d, *shape)``."""
    d = grid.d
    stencil, extent = _far_stencil(grid, R)
    padded = _fft_shape(grid, extent)
    axes = tuple(range(-d, 0))
    spectrum = grid.cached(('spectrum', ('Tij', R), padded), lambda: _stencil_spectrum(stencil, grid, extent, padded))
    data_hat = fft.rfftn(cell_average(products, grid), s=padded, axes=axes)
    out_hat = np.einsum('ijm...,ij...->m...', spectrum, data_hat)
    out = fft.irfftn(out_hat, s=padded, axes=axes)
    return out[(Ellipsis,) + tuple(slice(0, n) for n in grid.shape)]


def Tij(w: ScalarField, i: int, j: int, R: float = 1.0, recorder: TraceRecorder = None) -> VectorField:
    """
    Far-field operator ``T_ij w(X) = ∫∂_i∂_j(∇N(X - Y)(1 - θ(|X - Y|/R))) w(Y) dY``.

    Notes
    -----
    1. The kernel is bounded by ``C / (1 + |X|^{d+1})`` and is integrated over the whole box; the part of the
       domain outside the box is bounded by the boundary-layer magnitude of ``w`` times ``C ω_d / L``.
    """
    grid = w.grid
    d = grid.d
    with traced(recorder, 'Tij', R=R) as info:
        products = np.zeros((d, d) + grid.shape)
        products[i, j] = w.data
        out = _far_contract(products, grid, R)
        info['coarse_tail'] = _boundary_layer_max(w.data, grid) * kernel_decay_constant(d, R) * surface_area(d) / grid.L
    return VectorField(grid, out)


def _check_pair(u: VectorField, w: VectorField):
    if u.grid != w.grid:
        raise ValueError("Input Error: pressure operands live on different grids.")
    if u.grid.geometry == 'strip':
        raise ValueError("Input Error: extend strip fields before applying the pressure operator.")


def _quadratic_source(u: VectorField, w: VectorField) -> np.ndarray:
    """``∂_i u^j ∂_j w^i - ∂_j u^j ∂_i w^i``."""
    du = vector_gradient(u).data
    dw = vector_gradient(w).data
    return np.einsum('ij...,ji...->...', du, dw) - np.trace(du) * np.trace(dw)


def pressure_I(u: VectorField, w: VectorField, R: float = 1.0, recorder: TraceRecorder = None) -> VectorField:
    """
    The pressure operator ``I(u, w) = T₁(∂_iu^j∂_jw^i - ∂_ju^j∂_iw^i) + T_ij(u^iw^j)``, i.e. ``-∇p``.

    Notes
    -----
    1. Symmetric in ``(u, w)`` and independent of the cutoff scale ``R`` for solenoidal operands.
    2. Strip fields must arrive extended; both operands must share one grid.

    Parameters
    ----------
    u, w : VectorField
        Operands.

    R : float, default=1.0
        Cutoff scale of the near/far split.

    recorder : TraceRecorder, optional
        Operator trace sink.

    Returns
    -------
    VectorField
        ``I(u, w)``.
    """
    _check_pair(u, w)
    grid = u.grid
    if not (u.data.any() and w.data.any()):
        return VectorField.zeros(grid)

    near = T1(ScalarField(grid, _quadratic_source(u, w)), R, recorder)
    with traced(recorder, 'Tij', R=R) as info:
        products = u.data[:, None] * w.data[None, :]
        far = _far_contract(products, grid, R)
        info['coarse_tail'] = _boundary_layer_max(products, grid) * kernel_decay_constant(grid.d, R) \
            * surface_area(grid.d) / grid.L
    return near + VectorField(grid, far)


def pressure_divergence_defect(u: VectorField, w: VectorField, R: float = 1.0) -> ScalarField:
    """
    ``div I(u, w) - (∂_iu^j∂_jw^i - ∂_iu^i∂_jw^j)``, which vanishes for solenoidal operands up to discretization.
    """
    return divergence(pressure_I(u, w, R)) - ScalarField(u.grid, _quadratic_source(u, w))


def pressure_potential(u: VectorField, w: VectorField, recorder: TraceRecorder = None) -> ScalarField:
    """
    Scalar potential ``I*(u, w) = θ₁(|·|) * g + θ_ij * (u^iw^j)`` with ``∇I* = I(u, w)`` at cutoff scale one.

    Notes
    -----
    1. ``θ₁`` carries the logarithmic singularity of ``N`` in d = 2; its origin cell uses the closed-form integral
       of ``ln r`` over a square.
    2. ``θ_ij`` decays like ``|X|^{-d}``, so ``I*`` may grow logarithmically; the growth is reported by
       ``log_growth_fit`` and never clamped.
    """
    _check_pair(u, w)
    grid = u.grid
    d, h = grid.d, grid.spacing
    if not (u.data.any() and w.data.any()):
        return ScalarField.zeros(grid)
    profile = CutoffProfile.build(d)

    with traced(recorder, 'I*', R=1.0) as info:
        centre = None
        if d == 2:
            centre = log_centre_cell(0.5 * h) / (2.0 * np.pi) - profile.c * h ** 2
        extent = stencil_extent(grid, 2.0)
        theta1 = grid.cached(('stencil', 'theta1', extent),
                             lambda: cell_stencil(lambda X: profile.theta1(np.sqrt(np.sum(X ** 2, axis=0))), grid,
                                                  extent, centre=centre))
        g = cell_average(_quadratic_source(u, w), grid)
        near = apply_stencil(g, theta1, grid, extent, key=('theta1', extent))

        far_extent = stencil_extent(grid, 4.0 * grid.L + 2.0)
        theta_ij = grid.cached(('stencil', 'theta_ij', far_extent),
                               lambda: cell_stencil(profile.theta_ij, grid, far_extent))
        padded = _fft_shape(grid, far_extent)
        axes = tuple(range(-d, 0))
        spectrum = grid.cached(('spectrum', 'theta_ij', padded),
                               lambda: _stencil_spectrum(theta_ij, grid, far_extent, padded))
        products = cell_average(u.data[:, None] * w.data[None, :], grid)
        far_hat = np.einsum('ij...,ij...->...', spectrum, fft.rfftn(products, s=padded, axes=axes))
        far = fft.irfftn(far_hat, s=padded, axes=axes)[tuple(slice(0, n) for n in grid.shape)]
        info['coarse_tail'] = _boundary_layer_max(products, grid)
    return ScalarField(grid, near + far)


def log_growth_fit(p: ScalarField) -> tuple[float, float]:
    """
    Fits ``|p| ≈ c ln(2 + |x₁|) + c′`` along the first axis through the grid centre row.

    Returns
    -------
    tuple[float, float]
        Slope ``c`` and intercept ``c′`` of the least-squares fit.
    """
    grid = p.grid
    x = grid.axis(0)
    index = tuple([slice(None)] + [int(np.argmin(np.abs(grid.axis(k)))) for k in range(1, grid.d)])
    fit = stats.linregress(np.log(2.0 + np.abs(x)), np.abs(p.values[index]))
    return float(fit.slope), float(fit.intercept)


"""
----------------------------------------------------------------------------------------------------
Telescoping Witness
----------------------------------------------------------------------------------------------------
"""
def witness(u: ScalarField, n: int) -> ScalarField:
    """
    ``I*_n(X) = ∫φ*_n(X - Y)(u(Y) - u(X)) dY`` with the nonnegative unit-mass ring ``φ*_n = -N_r 2^n θ′(2^n r)``.

    Notes
    -----
    1. ``div Σ_{k=0}^{N} B_k(u) = I*_{N+1} - I*_0`` where ``B_k`` are the ``gradN-theta`` rings in subtraction form.
    2. Applied without the smooth-data correction so merely Hölder data are handled.
    """
    grid = u.grid
    out = convolve(u.data, lambda X: witness_kernel(X, n), grid, 2.0 ** (1 - n), key=('witness', n),
                   subtract=True, smooth=False)
    return ScalarField(grid, out)


def witness_point(u: ScalarField, n: int, index: tuple[int, ...]) -> float:
    """``I*_n`` at a single node, by a direct dot product with the ring stencil."""
    grid = u.grid
    stencil, extent = stencil_for(lambda X: witness_kernel(X, n), grid, 2.0 ** (1 - n), key=('witness', n))
    values = u.values
    window = []
    for axis, (i, e) in enumerate(zip(index, extent)):
        idx = i - np.arange(-e, e + 1)
        if grid.periodic[axis]:
            idx = np.mod(idx, grid.shape[axis])
        elif idx.min() < 0 or idx.max() >= grid.shape[axis]:
            raise ValueError("Input Error: witness ring leaves the box at the requested node.")
        window.append(idx)
    local = values[np.ix_(*window)]
    return float(np.sum(stencil * (local - values[tuple(index)])))


def ring_divergence_sum(u: ScalarField, N: int) -> ScalarField:
    """``div Σ_{k=0}^{N} B_k(u)`` with ``B_k(u) = ∫φ_k(X - Y)(u(Y) - u(X)) dY`` at unit scale."""
    grid = u.grid
    kernel = lambda X: core_gradN(X, 1.0) - core_gradN(X, 2.0 ** (-(N + 1)))
    rings = convolve(u.data, kernel, grid, 2.0, key=('rings', N), subtract=True, smooth=False)
    return ScalarField(grid, sum(derivative(rings[a], grid, a) for a in range(grid.d)))
