# Standard:
import logging
from itertools import product

# External:
import numpy as np

# Internal:
from .grid import Grid
from .core import Field

# Constants:
from ..utils.constants import SNAP_TOL

logger = logging.getLogger(__name__)


def lagrange_weights(t: np.ndarray) -> np.ndarray:
    """
    Cubic Lagrange weights on the local nodes ``0, 1, 2, 3`` evaluated at ``t``.

    Returns
    -------
    np.ndarray
        Array of shape ``(4, *t.shape)``; exact 0/1 weights at integer ``t``.
    """
    return np.stack([
        -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0,
        t * (t - 2.0) * (t - 3.0) / 2.0,
        -t * (t - 1.0) * (t - 3.0) / 2.0,
        t * (t - 1.0) * (t - 2.0) / 6.0,
    ])


def fold_strip(y: np.ndarray) -> np.ndarray:
    """``ρ₀(y) = min_n |y - 2n|``, the distance to the nearest even integer."""
    return np.abs(y - 2.0 * np.round(y / 2.0))


def _axis_stencil(x: np.ndarray, grid: Grid, axis: int) -> tuple[np.ndarray, np.ndarray, int]:
    """
    Base indices, local offsets and clamp count along one axis.
    """
    n = grid.shape[axis]
    s = (x - grid.origins[axis]) / grid.spacing
    near = np.round(s)
    s = np.where(np.abs(s - near) < SNAP_TOL, near, s)

    if grid.periodic[axis]:
        base = np.floor(s).astype(int) - 1
        return base, s - base, 0

    clamped = int(np.count_nonzero((s < -SNAP_TOL) | (s > n - 1 + SNAP_TOL)))
    s = np.clip(s, 0.0, n - 1.0)
    base = np.clip(np.floor(s).astype(int) - 1, 0, n - 4)
    return base, s - base, clamped


def interpolate_data(data: np.ndarray, grid: Grid, points: np.ndarray) -> tuple[np.ndarray, int]:
    """
    Tensor-product cubic interpolation of nodal data at arbitrary points.

    Notes
    -----
    1. Periodic axes wrap; a non-extended strip folds its last coordinate through ``ρ₀`` first.
    2. Free axes clamp points outside the box to the boundary and count them.

    Parameters
    ----------
    data : np.ndarray
        Nodal samples of shape ``(*lead, *grid.shape)``.

    grid : Grid
        Grid of ``data``.

    points : np.ndarray
        Query coordinates of shape ``(d, *pshape)``.

    Returns
    -------
    tuple[np.ndarray, int]
        Values of shape ``(*lead, *pshape)`` and the number of clamped coordinates.
    """
    d = grid.d
    points = np.asarray(points, dtype=float)
    if grid.geometry == 'strip':
        points = points.copy()
        points[-1] = fold_strip(points[-1])

    bases, weights, clamped = [], [], 0
    for axis in range(d):
        base, t, c = _axis_stencil(points[axis], grid, axis)
        bases.append(base)
        weights.append(lagrange_weights(t))
        clamped += c

    lead = data.shape[:data.ndim - d]
    out = np.zeros(lead + points.shape[1:])
    for offsets in product(range(4), repeat=d):
        index, w = [], 1.0
        for axis, o in enumerate(offsets):
            idx = bases[axis] + o
            index.append(np.mod(idx, grid.shape[axis]) if grid.periodic[axis] else idx)
            w = w * weights[axis][o]
        out += w * data[(Ellipsis,) + tuple(index)]
    return out, clamped


def interpolate(u: Field, points) -> np.ndarray:
    """
    Evaluates a field at arbitrary points by cubic interpolation.

    Notes
    -----
    1. Exact at nodes and on polynomials of per-axis degree at most three.
    2. Free-box points outside the box take the boundary-clamped value; the count is logged as a warning.

    Parameters
    ----------
    u : Field
        Field of interest (all components are interpolated).

    points : array-like
        Coordinates of shape ``(d, ...)``.

    Returns
    -------
    np.ndarray
        Interpolated values of shape ``(*lead, ...)``.
    """
    values, clamped = interpolate_data(u.data, u.grid, np.asarray(points, dtype=float))
    if clamped:
        logger.warning("Interpolation clamped %d out-of-box coordinate(s) to the boundary.", clamped)
    return values
