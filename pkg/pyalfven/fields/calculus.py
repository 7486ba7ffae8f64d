# External:
import numpy as np

# Internal:
from .grid import Grid
from .core import Field, ScalarField, VectorField, MatrixField, CurlField, curl_pairs

# Constants:
CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
EDGE_0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
EDGE_1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def derivative(data: np.ndarray, grid: Grid, axis: int) -> np.ndarray:
    """
    Fourth-order first derivative of nodal samples along one grid axis.

    Notes
    -----
    1. ``axis`` counts grid axes; leading component axes of ``data`` are skipped automatically.
    2. Periodic axes use the 5-point central stencil with wraparound; other axes use it in the interior and the
       one-sided fourth-order stencils on the two outermost nodes at each end.

    Parameters
    ----------
    data : np.ndarray
        Array of shape ``(*lead, *grid.shape)``.

    grid : Grid
        Grid the samples live on.

    axis : int
        Grid axis to differentiate along.

    Returns
    -------
    np.ndarray
        Derivative samples with the shape of ``data``.
    """
    ax = data.ndim - grid.d + axis
    h = grid.spacing
    if grid.periodic[axis]:
        return sum(c * np.roll(data, -s, axis=ax) for c, s in zip(CENTRAL, range(-2, 3)) if c) / h

    n = data.shape[ax]
    f = np.moveaxis(data, ax, 0)
    out = np.empty_like(f)
    out[2:n - 2] = (f[0:n - 4] - 8.0 * f[1:n - 3] + 8.0 * f[3:n - 1] - f[4:n]) / 12.0
    out[0] = np.tensordot(EDGE_0, f[0:5], axes=1)
    out[1] = np.tensordot(EDGE_1, f[0:5], axes=1)
    out[n - 1] = -np.tensordot(EDGE_0, f[n - 1:n - 6:-1], axes=1)
    out[n - 2] = -np.tensordot(EDGE_1, f[n - 1:n - 6:-1], axes=1)
    return np.moveaxis(out / h, 0, ax)


def gradient(u: ScalarField) -> VectorField:
    """
    Computes ``∇u`` with fourth-order differences.

    Parameters
    ----------
    u : ScalarField
        Field of interest.

    Returns
    -------
    VectorField
        Components ``∂_i u``.
    """
    return VectorField(u.grid, np.stack([derivative(u.data, u.grid, i) for i in range(u.grid.d)]))


def divergence(z: VectorField) -> ScalarField:
    """Computes ``div z = Σ_i ∂_i z^i``."""
    return ScalarField(z.grid, sum(derivative(z.data[i], z.grid, i) for i in range(z.grid.d)))


def vector_gradient(z: VectorField) -> MatrixField:
    """``∇z`` with entries ``[i, j] = ∂_i z^j``."""
    return MatrixField(z.grid, np.stack([derivative(z.data, z.grid, i) for i in range(z.grid.d)]))


def curl(z: VectorField) -> CurlField:
    """
    Computes ``curl z`` with entries ``(j, k) = ∂_k z^j - ∂_j z^k``.

    Notes
    -----
    1. In d = 2 the single entry is ``∂_2 z^1 - ∂_1 z^2``, so the rotation ``(-x_2, x_1)`` gives ``-2``.
    """
    grid = z.grid
    entries = [derivative(z.data[j], grid, k) - derivative(z.data[k], grid, j) for j, k in curl_pairs(grid.d)]
    return CurlField(grid, np.stack(entries))


def row_divergence(psi: CurlField) -> VectorField:
    """
    Row-wise divergence of an antisymmetric matrix field, ``(div ψ)^j = Σ_k ∂_k ψ^{jk}``.
    """
    grid = psi.grid
    rows = [sum(derivative(psi.entry(j, k), grid, k) for k in range(grid.d) if k != j) for j in range(grid.d)]
    return VectorField(grid, np.stack(rows))


def laplacian(u: Field) -> Field:
    """Componentwise ``Δu`` as the divergence of the fourth-order gradient."""
    grid = u.grid
    return u._new(sum(derivative(derivative(u.data, grid, i), grid, i) for i in range(grid.d)))


def hessian(u: ScalarField) -> MatrixField:
    """``∇²u`` as gradient-of-gradient."""
    return vector_gradient(gradient(u))


def advect(z: VectorField, u: Field) -> Field:
    """Directional derivative ``(z·∇)u``, componentwise in ``u``."""
    grid = u.grid
    return u._new(sum(z.data[i] * derivative(u.data, grid, i) for i in range(grid.d)))


def flux_divergence(G: np.ndarray, grid: Grid) -> np.ndarray:
    """
    ``Σ_i ∂_i G^i`` for a flux stored with the direction index first, shape ``(d, *lead, *grid.shape)``.
    """
    return sum(derivative(G[i], grid, i) for i in range(grid.d))
