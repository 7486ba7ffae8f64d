# Standard:
import logging
from dataclasses import dataclass, asdict
from itertools import product

# External:
import numpy as np
import pandas as pd
from scipy.stats import qmc

# Internal:
from ..fields.grid import Grid
from ..fields.core import Field, ScalarField, VectorField
from ..fields.calculus import derivative
from .weights import WeightSpec, sample

# Constants:
from ..utils.constants import (DEFAULT_ALPHA, NEAR_RADIUS, FAR_PARTNERS, EXHAUSTIVE_MAX_N, WEIGHT_UNDERFLOW,
                               HOLDER_COLS)

logger = logging.getLogger(__name__)

# Weyl increments (fractional parts of sqrt(2), sqrt(3), sqrt(5)):
WEYL = np.array([0.41421356237309515, 0.7320508075688772, 0.2360679774997898])


@dataclass(frozen=True)
class HolderReport:
    """
    Weighted Hölder quantities of one field against one weight.

    Attributes
    ----------
    sup_weighted : float
        ``|u|_{0;h} = max |u|/h``.

    semi_alpha : float
        ``[u]_{α;h}``.

    grad_sup : float
        ``|∇u|_{0;h}``.

    grad_semi_alpha : float
        ``[∇u]_{α;h}``.

    lip_semi : float
        ``[u]_{1;h}`` (the seminorm with exponent 1).

    alpha : float
        Hölder exponent.

    R : float
        Scale parameter; ``0`` selects the unscaled norms.

    pairs_used : int
        Node pairs evaluated by the seminorm estimator (per seminorm).
    """
    # Data Class Attributes:
    sup_weighted: float
    semi_alpha: float
    grad_sup: float
    grad_semi_alpha: float
    lip_semi: float
    alpha: float
    R: float
    pairs_used: int

    @property
    def norm0(self) -> float:
        """``|u|_{0,α;h,R} = |u|_{0;h} + R^α[u]_{α;h}`` (``R = 0``: unscaled)."""
        return self.sup_weighted + self._scale_alpha * self.semi_alpha

    @property
    def grad_norm0(self) -> float:
        """``|∇u|_{0,α;h,R}``."""
        return self.grad_sup + self._scale_alpha * self.grad_semi_alpha

    @property
    def norm1(self) -> float:
        """``|u|_{1,α;h,R} = |u|_{0,α;h} + max(R, R^{1-α})|∇u|_{0,α;h,R}`` (``R = 0``: unscaled)."""
        unscaled0 = self.sup_weighted + self.semi_alpha
        factor = 1.0 if self.R == 0 else max(self.R, self.R ** (1.0 - self.alpha))
        return unscaled0 + factor * self.grad_norm0

    @property
    def _scale_alpha(self) -> float:
        return 1.0 if self.R == 0 else self.R ** self.alpha

    def to_row(self) -> dict:
        """One CSV row in the fixed column order ``sup, semi, grad_sup, grad_semi, lip, alpha, R, pairs``."""
        values = [self.sup_weighted, self.semi_alpha, self.grad_sup, self.grad_semi_alpha, self.lip_semi,
                  self.alpha, self.R, self.pairs_used]
        return dict(zip(HOLDER_COLS, values))


def reports_to_frame(reports: list[HolderReport], index=None) -> pd.DataFrame:
    """Stacks reports into a ``DataFrame`` with the fixed column order."""
    return pd.DataFrame([r.to_row() for r in reports], columns=HOLDER_COLS, index=index)


"""
----------------------------------------------------------------------------------------------------
Pair Schedule
----------------------------------------------------------------------------------------------------
"""
def _near_offsets(d: int) -> np.ndarray:
    """Half of the ``5^d`` neighbourhood: offsets that are lexicographically positive."""
    span = range(-NEAR_RADIUS, NEAR_RADIUS + 1)
    offsets = [o for o in product(span, repeat=d) if o > (0,) * d]
    return np.array(offsets, dtype=int)


def pair_schedule(grid: Grid, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """
    Deterministic node pairs for seminorm estimation.

    Notes
    -----
    1. Grids with ``N ≤ 16`` use every unordered pair.
    2. Otherwise each node is paired with half of its ``5^d`` neighbourhood (wrapping on periodic axes, skipped past
       free edges) and with ``64`` far partners: one scrambled Halton draw of the seed, rotated per node by a Weyl
       shift of its flat index. The schedule depends only on the grid and the seed.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        Flat node indices ``(first, second)`` of each pair.
    """
    def build():
        shape = np.array(grid.shape)
        n = grid.size
        if grid.N <= EXHAUSTIVE_MAX_N:
            first, second = np.triu_indices(n, k=1)
            return first, second

        index = np.indices(grid.shape).reshape(grid.d, -1)
        firsts, seconds = [], []
        for o in _near_offsets(grid.d):
            partner = index + o[:, None]
            valid = np.ones(n, dtype=bool)
            for k in range(grid.d):
                if grid.periodic[k]:
                    partner[k] %= shape[k]
                else:
                    valid &= (partner[k] >= 0) & (partner[k] < shape[k])
            firsts.append(np.flatnonzero(valid))
            seconds.append(np.ravel_multi_index(tuple(partner[:, valid]), grid.shape))

        draw = qmc.Halton(d=grid.d, scramble=True, seed=seed).random(FAR_PARTNERS)
        weyl = np.outer(np.arange(n), WEYL[:grid.d]) % 1.0
        for u in draw:
            cell = np.floor(((u[None, :] + weyl) % 1.0) * shape[None, :]).astype(int)
            partner = np.ravel_multi_index(tuple(cell.T), grid.shape)
            keep = partner != np.arange(n)
            firsts.append(np.flatnonzero(keep))
            seconds.append(partner[keep])
        return np.concatenate(firsts), np.concatenate(seconds)

    return grid.cached(('pairs', seed), build)


def pair_distances(grid: Grid, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Euclidean pair distances, minimal image on periodic axes."""
    coords = grid.coordinates.reshape(grid.d, -1)
    delta = coords[:, first] - coords[:, second]
    for k, period in enumerate(grid.periods):
        if period is not None:
            delta[k] -= period * np.round(delta[k] / period)
    return np.sqrt(np.sum(delta ** 2, axis=0))


"""
----------------------------------------------------------------------------------------------------
Norms
----------------------------------------------------------------------------------------------------
"""
def weight_values(h, grid: Grid, t: float = 0.0) -> np.ndarray:
    """
    Weight samples on ``grid`` from a ``WeightSpec``, an array or ``None`` (unit weight).
    """
    if h is None:
        return np.ones(grid.shape)
    if isinstance(h, WeightSpec):
        return sample(h, grid, t)
    values = np.broadcast_to(np.asarray(h, dtype=float), grid.shape)
    if np.min(values) < WEIGHT_UNDERFLOW:
        raise ValueError(f"Input Error: weight underflows on the grid (min {np.min(values):.3e}).")
    return values


def _flat(u) -> tuple[np.ndarray, Grid]:
    """Field data as ``(ncomp, nodes)``."""
    if isinstance(u, Field):
        return u.data.reshape(-1, u.grid.size), u.grid
    raise TypeError("Input Error: expected a field.")


def sup_weighted(u: Field, h=None, t: float = 0.0) -> float:
    """
    Computes ``|u|_{0;h} = max_X |u(X)|/h(X)``.

    Parameters
    ----------
    u : Field
        Field of interest; multi-component fields use the Euclidean node norm.

    h : WeightSpec | np.ndarray | None
        Weight (``None`` is the unit weight).

    t : float, default=0.0
        Time at which a ``WeightSpec`` is sampled.

    Returns
    -------
    float
        Weighted supremum.
    """
    data, grid = _flat(u)
    weights = weight_values(h, grid, t).ravel()
    return float(np.max(np.sqrt(np.sum(data ** 2, axis=0)) / weights))


def seminorm_alpha(u: Field, h=None, alpha: float = DEFAULT_ALPHA, seed: int = 0, t: float = 0.0,
                   chunk: int = 1 << 20) -> float:
    """
    Estimates ``[u]_{α;h} = sup |u(X) - u(Y)| / ((h(X) + h(Y)) |X - Y|^α)`` over the pair schedule.

    Notes
    -----
    1. The estimate is a lower bound of the continuum supremum; it is exact over all pairs when ``N ≤ 16``.
    2. ``alpha = 1`` gives the Lipschitz seminorm ``[u]_{1;h}``.

    Parameters
    ----------
    u : Field
        Field of interest.

    h : WeightSpec | np.ndarray | None
        Weight.

    alpha : float, default=0.5
        Exponent in ``(0, 1]``.

    seed : int, default=0
        Seed of the far-partner draw.

    t : float, default=0.0
        Time at which a ``WeightSpec`` is sampled.

    chunk : int
        Pairs processed per vectorized batch.

    Returns
    -------
    float
        Seminorm estimate.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"Input Error: Hölder exponent must lie in (0, 1], got α={alpha}.")
    data, grid = _flat(u)
    weights = weight_values(h, grid, t).ravel()
    first, second = pair_schedule(grid, seed)
    best = 0.0
    for start in range(0, first.size, chunk):
        i, j = first[start:start + chunk], second[start:start + chunk]
        diff = np.sqrt(np.sum((data[:, i] - data[:, j]) ** 2, axis=0))
        denom = (weights[i] + weights[j]) * pair_distances(grid, i, j) ** alpha
        best = max(best, float(np.max(diff / denom, initial=0.0)))
    return best


def grad_field(u: Field) -> Field:
    """Gradient of any field; the derivative index is the leading axis of the result."""
    grid = u.grid
    stacked = np.stack([derivative(u.data, grid, i) for i in range(grid.d)])
    if isinstance(u, ScalarField):
        return VectorField(grid, stacked)
    return _Stacked(grid, stacked)


class _Stacked(Field):
    """Multi-index field of arbitrary leading shape (gradients of vector and curl fields)."""

    def __init__(self, grid: Grid, data: np.ndarray):
        self.lead_ndim = data.ndim - grid.d
        data = np.array(data, dtype=float)
        data.flags.writeable = False
        self.grid = grid
        self.data = data

    def _new(self, data):
        return _Stacked(self.grid, data)


def norm_c1alpha(u: Field, h=None, alpha: float = DEFAULT_ALPHA, R: float = 0.0, seed: int = 0,
                 t: float = 0.0) -> HolderReport:
    """
    Computes the full weighted ``C^{1,α}`` report of a field.

    Parameters
    ----------
    u : Field
        Field of interest.

    h : WeightSpec | np.ndarray | None
        Weight.

    alpha : float, default=0.5
        Hölder exponent in ``(0, 1)``.

    R : float, default=0.0
        Scale parameter; ``R = 0`` gives the unscaled norm.

    seed : int, default=0
        Seed of the pair schedule.

    t : float, default=0.0
        Time at which a ``WeightSpec`` is sampled.

    Returns
    -------
    HolderReport
        Report whose ``norm0`` / ``norm1`` reconstruct the scaled norms.
    """
    if R < 0:
        raise ValueError(f"Input Error: scale parameter must be nonnegative, got R={R}.")
    weights = weight_values(h, u.grid, t)
    grad = grad_field(u)
    first, _ = pair_schedule(u.grid, seed)
    return HolderReport(
        sup_weighted=sup_weighted(u, weights),
        semi_alpha=seminorm_alpha(u, weights, alpha, seed),
        grad_sup=sup_weighted(grad, weights),
        grad_semi_alpha=seminorm_alpha(grad, weights, alpha, seed),
        lip_semi=seminorm_alpha(u, weights, 1.0, seed),
        alpha=alpha,
        R=R,
        pairs_used=int(first.size),
    )


def norm_0alpha(u: Field, h=None, alpha: float = DEFAULT_ALPHA, R: float = 0.0, seed: int = 0,
                t: float = 0.0) -> float:
    """``|u|_{0,α;h,R}`` without the gradient terms."""
    weights = weight_values(h, u.grid, t)
    scale = 1.0 if R == 0 else R ** alpha
    return sup_weighted(u, weights) + scale * seminorm_alpha(u, weights, alpha, seed)


def brute_force_seminorm(u: Field, h=None, alpha: float = DEFAULT_ALPHA) -> float:
    """Exhaustive all-pairs seminorm, for small grids."""
    data, grid = _flat(u)
    weights = weight_values(h, grid).ravel()
    first, second = np.triu_indices(grid.size, k=1)
    diff = np.sqrt(np.sum((data[:, first] - data[:, second]) ** 2, axis=0))
    denom = (weights[first] + weights[second]) * pair_distances(grid, first, second) ** alpha
    return float(np.max(diff / denom))
