# Standard:
import logging
import math
from functools import lru_cache

# External:
import numpy as np
from scipy import fft
from scipy.special import jv, roots_legendre, spherical_jn

# Internal:
from ..fields.core import CurlField, ScalarField, VectorField, curl_pairs
from ..fields.calculus import derivative
from ..fields.grid import Grid
from .convolution import convolve
from .kernels import fd_derivative, newton_hessian, theta, theta_moment
from .pressure import DyadicLadder
from .trace import TraceRecorder, traced

logger = logging.getLogger(__name__)

TAIL_WARNING = 1e-2


def _window_kernel(i: int, j: int, inner: float, outer: float):
    """``K_ij(X)(θ(|X|/outer) - θ(|X|/inner))``: the ring sum between two cutoff scales."""
    def kernel(X):
        r = np.sqrt(np.sum(X ** 2, axis=0))
        K = newton_hessian(np.where(r > 0, X, 1.0))[i, j]
        return np.where(r > 0, K, 0.0) * (theta(r / outer) - theta(r / inner))
    return kernel


def _far_kernel(i: int, j: int, inner: float, extent: float):
    """``K_ij(X)(1 - θ(|X|/inner))`` cut off smoothly beyond ``extent``."""
    return _window_kernel(i, j, inner, extent)


def _moment_contraction(A: np.ndarray, i: int, j: int, d: int, rho: float) -> np.ndarray:
    """
    ``Σ_ab M_ijab A_ab`` with ``M_ijab = ∫K_ij(Y) θ(|Y|/ρ) Y_aY_b dY`` for a symmetric tensor field ``A`` ``(d, d, ...)``.
    """
    scale = rho ** 2 * theta_moment(1)
    trace = np.trace(A)
    delta = 1.0 if i == j else 0.0
    return scale * (delta * trace / d - (delta * trace + 2.0 * A[i, j]) / (d + 2))


@lru_cache(maxsize=32)
def _radial_table(d: int, a: float, kmax: float, samples: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """
    Tabulates ``J(k) = ∫₀² θ(s) J₂(k a s) / s ds`` (d = 2) or with ``j₂`` (d = 3) on ``[0, kmax]``.
    """
    nodes, weights = roots_legendre(256)
    s = np.concatenate([0.5 * (nodes + 1.0), 0.5 * (nodes + 3.0)])
    w = np.concatenate([0.5 * weights, 0.5 * weights]) * theta(np.concatenate([0.5 * (nodes + 1.0), 0.5 * (nodes + 3.0)]))
    k = np.linspace(0.0, kmax, samples)
    arg = np.outer(k * a, s)
    bessel = jv(2, arg) if d == 2 else spherical_jn(2, arg)
    return k, (bessel / s) @ w


def _far_symbol(grid: Grid, i: int, j: int, a: float) -> np.ndarray:
    """
    Fourier multiplier of ``-K_ij(1 - θ(|·|/a)) *`` on the torus: ``-(ξ̂_iξ̂_j - δ_ij/d)(1 - d J(|ξ|))``, zero mode dropped.
    """
    def build():
        d = grid.d
        freqs = [2.0 * np.pi * fft.fftfreq(n, d=grid.spacing) for n in grid.shape[:-1]]
        freqs.append(2.0 * np.pi * fft.rfftfreq(grid.shape[-1], d=grid.spacing))
        xi = np.stack(np.meshgrid(*freqs, indexing='ij'))
        norm = np.sqrt(np.sum(xi ** 2, axis=0))
        safe = np.where(norm > 0, norm, 1.0)
        table_k, table_J = _radial_table(d, a, float(norm.max()) * (1.0 + 1e-9))
        J = np.interp(norm, table_k, table_J)
        delta = 1.0 if i == j else 0.0
        symbol = -(xi[i] * xi[j] / safe ** 2 - delta / d) * (1.0 - d * J)
        return np.where(norm > 0, symbol, 0.0)
    return grid.cached(('riesz-far-symbol', i, j, a), build)


def riesz_ladder(grid: Grid) -> DyadicLadder:
    return DyadicLadder.for_grid(grid, 'riesz')


def _ring_convolution(data: np.ndarray, grid: Grid, ladder: DyadicLadder, i: int, j: int, subtract: bool) -> np.ndarray:
    """``(φ_near * data)`` with ``φ_near = Σ_{n_min}^{n_max} φ_n``."""
    inner = 2.0 ** (-(ladder.n_max + 1))
    outer = 2.0 ** (-ladder.n_min)
    if ladder.n_max < ladder.n_min:
        return np.zeros_like(data)
    return convolve(data, _window_kernel(i, j, inner, outer), grid, 2.0 * outer,
                    key=('riesz-near', i, j, ladder.n_min, ladder.n_max), subtract=subtract)


def _far_apply(data: np.ndarray, grid: Grid, ladder: DyadicLadder, i: int, j: int) -> np.ndarray:
    """
    Contribution ``-(K_ij(1 - θ(2^{n_min}|·|)) * data)`` of the rings coarser than the ladder.

    Notes
    -----
    1. On the torus the periodic sum is taken exactly through the Fourier multiplier; elsewhere the far kernel is
       integrated over the box (periodic axes folded), with a smooth cutoff at four box half-widths.
    """
    a = 2.0 ** (-ladder.n_min)
    if grid.geometry == 'periodic-torus':
        d = grid.d
        axes = tuple(range(-d, 0))
        symbol = _far_symbol(grid, i, j, a)
        return fft.irfftn(symbol * fft.rfftn(data, axes=axes), s=grid.shape, axes=axes)
    extent = 2.0 * grid.L * math.sqrt(grid.d)
    return -convolve(data, _far_kernel(i, j, a, extent), grid, 2.0 * extent,
                     key=('riesz-far', i, j, ladder.n_min, extent))


def riesz_second(w: ScalarField, i: int, j: int, recorder: TraceRecorder = None) -> ScalarField:
    """
    Second-order Riesz transform ``R_iR_j w = Σ_n R^n_ij(w) - δ_ij/d w`` with ``R^n_ij(w) = -φ_n * w``.

    Notes
    -----
    1. Rings ``n_min..n_max`` of the grid's ``DyadicLadder`` are summed into one kernel and applied in subtraction
       form (each ring has zero mean).
    2. The sub-grid core closes by its second moment, ``-½ M_ijab ∂_a∂_b w``; coarse rings are handled spectrally on
       the torus and by direct box quadrature otherwise.
    3. ``R_iR_j`` has Fourier symbol ``-ξ_iξ_j / |ξ|²``, so ``Σ_i R_iR_i w = -w`` for mean-free ``w``.

    Parameters
    ----------
    w : ScalarField
        Field of interest.

    i, j : int
        Transform indices.

    recorder : TraceRecorder, optional
        Operator trace sink.

    Returns
    -------
    ScalarField
        ``R_iR_j w``.
    """
    grid = w.grid
    d = grid.d
    if not w.data.any():
        return ScalarField.zeros(grid)
    ladder = riesz_ladder(grid)
    rho = 2.0 ** (-(ladder.n_max + 1))

    with traced(recorder, 'riesz', R=1.0, n_min=ladder.n_min, n_max=ladder.n_max) as info:
        near = -_ring_convolution(w.data, grid, ladder, i, j, subtract=True)
        hess = np.stack([np.stack([derivative(derivative(w.data, grid, a), grid, b) for b in range(d)])
                         for a in range(d)])
        core = -0.5 * _moment_contraction(hess, i, j, d, rho)
        far = _far_apply(w.data, grid, ladder, i, j)
        delta = 1.0 if i == j else 0.0
        out = near + core + far - delta / d * w.data

        info['fine_tail'] = float(np.abs(core).max())
        info['coarse_tail'] = 0.0 if grid.geometry == 'periodic-torus' else float(np.abs(w.data[..., [0, -1]]).max())
        scale = float(np.abs(out).max())
        if scale > 0 and info['fine_tail'] > TAIL_WARNING * scale:
            logger.warning("Riesz ladder core closure is %.2e of the result; the field is under-resolved.",
                           info['fine_tail'] / scale)
    return ScalarField(grid, out)


def _source(w: ScalarField, k: int | None) -> np.ndarray:
    return w.data if k is None else derivative(w.data, w.grid, k)


def riesz_commutator(u: ScalarField, w: ScalarField, i: int, j: int, k: int | None = None, form: str = 'parts',
                     recorder: TraceRecorder = None) -> ScalarField:
    """
    Commutator ``[u, R_iR_j]∂_kw = u R_iR_j(∂_kw) - R_iR_j(u ∂_kw) = Σ_n ∫φ_n(X - Y)(u(Y) - u(X)) ∂_kw(Y) dY``.

    Notes
    -----
    1. ``form='parts'`` moves ``∂_k`` onto the resolved ring kernel:
       ``∫∂_kφ(X - Y)(u(Y) - u(X))w(Y) dY - ∫φ(X - Y)∂_ku(Y)w(Y) dY``. ``form='gradient'`` differentiates ``w`` on the
       grid instead; the two agree up to discretization and serve as a cross-check.
    2. ``k=None`` drops the derivative, giving ``[u, R_iR_j]w``.
    3. The ``δ_ij/d`` terms cancel in the commutator, so it vanishes identically for constant ``u``.
    """
    if form not in ('parts', 'gradient'):
        raise ValueError(f"Input Error: unknown commutator form '{form}'.")
    if u.grid != w.grid:
        raise ValueError("Input Error: commutator operands live on different grids.")
    grid = u.grid
    d = grid.d
    if not (w.data.any() and np.ptp(u.data) > 0):
        return ScalarField.zeros(grid)
    ladder = riesz_ladder(grid)
    rho = 2.0 ** (-(ladder.n_max + 1))
    inner, outer = rho, 2.0 ** (-ladder.n_min)
    f = _source(w, k)
    uf = u.data * f

    with traced(recorder, 'commutator', R=1.0, n_min=ladder.n_min, n_max=ladder.n_max) as info:
        if k is None or form == 'gradient':
            near = _ring_convolution(uf, grid, ladder, i, j, False) - u.data * _ring_convolution(f, grid, ladder, i, j, False)
        else:
            base = _window_kernel(i, j, inner, outer)
            step = 1e-3 * grid.spacing
            dkernel = lambda X: fd_derivative(base, X, k, step)
            key = ('riesz-near-d', i, j, k, ladder.n_min, ladder.n_max)
            conv_d = lambda data: convolve(data, dkernel, grid, 2.0 * outer, key=key)
            du = derivative(u.data, grid, k)
            near = conv_d(u.data * w.data) - u.data * conv_d(w.data) \
                - _ring_convolution(du * w.data, grid, ladder, i, j, False)

        grad_u = np.stack([derivative(u.data, grid, a) for a in range(d)])
        grad_f = np.stack([derivative(f, grid, a) for a in range(d)])
        hess_u = np.stack([np.stack([derivative(grad_u[a], grid, b) for b in range(d)]) for a in range(d)])
        cross = 0.5 * (grad_u[:, None] * grad_f[None, :] + grad_u[None, :] * grad_f[:, None])
        core = _moment_contraction(0.5 * hess_u * f + cross, i, j, d, rho)

        far = u.data * _far_apply(f, grid, ladder, i, j) - _far_apply(uf, grid, ladder, i, j)
        info['fine_tail'] = float(np.abs(core).max())
    return ScalarField(grid, near + core + far)


"""
----------------------------------------------------------------------------------------------------
Stream Function Operators
----------------------------------------------------------------------------------------------------
"""
def Pi1(u: VectorField, w: VectorField, recorder: TraceRecorder = None) -> CurlField:
    """
    ``Π₁(u, w) = Δ⁻¹ curl div(u ⊗ w)`` with entries ``-R_kR_i(u^iw^j) + R_jR_i(u^iw^k)`` (summed over ``i``).
    """
    if u.grid != w.grid:
        raise ValueError("Input Error: Π₁ operands live on different grids.")
    grid = u.grid
    d = grid.d
    entries = []
    for j, k in curl_pairs(d):
        entry = np.zeros(grid.shape)
        for i in range(d):
            entry -= riesz_second(ScalarField(grid, u.data[i] * w.data[j]), k, i, recorder).data
            entry += riesz_second(ScalarField(grid, u.data[i] * w.data[k]), j, i, recorder).data
        entries.append(entry)
    return CurlField(grid, np.stack(entries))


def Pi2(u: VectorField, w: VectorField | CurlField, recorder: TraceRecorder = None) -> CurlField:
    """
    ``Π₂(u, w) = Δ⁻¹curl(u·∇w) - u·∇(Δ⁻¹curl w)`` with entries ``[u^i, R_iR_k]w^j - [u^i, R_iR_j]w^k``.

    Notes
    -----
    1. The commutator form equals the definition for solenoidal ``u``.
    2. When ``w`` is given as a stream function ``ψ`` (a ``CurlField``), ``w^j = Σ_m ∂_mψ^{jm}`` and every commutator
       acts on ``∂_mψ^{jm}`` in the integrated-by-parts form.
    """
    if u.grid != w.grid:
        raise ValueError("Input Error: Π₂ operands live on different grids.")
    grid = u.grid
    d = grid.d

    def term(j: int, k: int) -> np.ndarray:
        out = np.zeros(grid.shape)
        for i in range(d):
            ui = ScalarField(grid, u.data[i])
            if isinstance(w, CurlField):
                for m in range(d):
                    if m != j:
                        out += riesz_commutator(ui, ScalarField(grid, w.entry(j, m)), i, k, m, recorder=recorder).data
            else:
                out += riesz_commutator(ui, ScalarField(grid, w.data[j]), i, k, None, recorder=recorder).data
        return out

    return CurlField(grid, np.stack([term(j, k) - term(k, j) for j, k in curl_pairs(d)]))
