# Standard:
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

# External:
import numpy as np

# Internal:
from .grid import Grid


class Field:
    """
    Immutable samples of a (possibly multi-component) function on a ``Grid``.

    Notes
    -----
    1. ``data`` has shape ``(*lead, *grid.shape)``; subclasses fix the leading axes.
    2. Arrays are copied on construction and marked read-only; every operation returns a new field.
    3. Arithmetic with scalars, arrays broadcastable to ``data`` and fields of the same class on the same grid is
       supported.
    """
    lead_ndim: int = 0

    def __init__(self, grid: Grid, data: np.ndarray):
        data = np.array(data, dtype=float)
        expected = self._lead_shape(grid) + grid.shape
        if data.shape != expected:
            raise ValueError(f"Input Error: {type(self).__name__} expects shape {expected}, got {data.shape}.")
        if not np.all(np.isfinite(data)):
            raise ValueError(f"Input Error: {type(self).__name__} contains non-finite values.")
        data.flags.writeable = False
        self.grid = grid
        self.data = data

    @staticmethod
    def _lead_shape(grid: Grid) -> tuple[int, ...]:
        return ()

    def _new(self, data: np.ndarray):
        return type(self)(self.grid, data)

    def _other(self, other):
        if isinstance(other, Field):
            if type(other) is not type(self) or other.grid != self.grid:
                raise ValueError("Input Error: field arithmetic requires equal field types on one grid.")
            return other.data
        return other

    def __add__(self, other):
        return self._new(self.data + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(self.data - self._other(other))

    def __rsub__(self, other):
        return self._new(self._other(other) - self.data)

    def __mul__(self, other):
        return self._new(self.data * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._new(self.data / self._other(other))

    def __neg__(self):
        return self._new(-self.data)

    def max_abs(self) -> float:
        """Maximum over nodes of the pointwise Euclidean (Frobenius) magnitude."""
        return float(self.magnitude().max()) if self.data.size else 0.0

    def magnitude(self) -> np.ndarray:
        if self.lead_ndim == 0:
            return np.abs(self.data)
        return np.sqrt(np.sum(self.data ** 2, axis=tuple(range(self.lead_ndim))))

    def components_flat(self) -> np.ndarray:
        """Data reshaped to ``(ncomp, *grid.shape)``."""
        return self.data.reshape((-1,) + self.grid.shape)

    def __repr__(self):
        return f"{type(self).__name__}(grid={self.grid!r}, max_abs={self.max_abs():.4g})"


class ScalarField(Field):
    """Scalar samples, one value per node."""

    @property
    def values(self) -> np.ndarray:
        return self.data

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[..., np.ndarray]) -> 'ScalarField':
        """Samples ``func(*coordinates)`` at every node."""
        return cls(grid, np.broadcast_to(func(*grid.coordinates), grid.shape))

    @classmethod
    def zeros(cls, grid: Grid) -> 'ScalarField':
        return cls(grid, np.zeros(grid.shape))


class VectorField(Field):
    """``d`` components sharing one grid; ``data[i]`` is component ``i``."""
    lead_ndim = 1

    @staticmethod
    def _lead_shape(grid: Grid) -> tuple[int, ...]:
        return (grid.d,)

    @property
    def components(self) -> list[ScalarField]:
        return [ScalarField(self.grid, c) for c in self.data]

    def component(self, i: int) -> ScalarField:
        return ScalarField(self.grid, self.data[i])

    @classmethod
    def from_components(cls, components: list[ScalarField]) -> 'VectorField':
        grids = {c.grid for c in components}
        if len(grids) != 1:
            raise ValueError("Input Error: vector components must share one grid.")
        return cls(components[0].grid, np.stack([c.data for c in components]))

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[..., list]) -> 'VectorField':
        values = func(*grid.coordinates)
        return cls(grid, np.stack([np.broadcast_to(v, grid.shape) for v in values]))

    @classmethod
    def zeros(cls, grid: Grid) -> 'VectorField':
        return cls(grid, np.zeros((grid.d,) + grid.shape))

    def dot(self, other: 'VectorField') -> ScalarField:
        return ScalarField(self.grid, np.sum(self.data * self._other(other), axis=0))


class MatrixField(Field):
    """``d x d`` matrix samples, e.g. ``∇z`` with ``data[i, j] = ∂_i z^j``."""
    lead_ndim = 2

    @staticmethod
    def _lead_shape(grid: Grid) -> tuple[int, ...]:
        return (grid.d, grid.d)


def curl_pairs(d: int) -> list[tuple[int, int]]:
    """Upper-triangle index pairs ``(j, k)``, ``j < k``, stored by a ``CurlField``."""
    return list(combinations(range(d), 2))


class CurlField(Field):
    """
    Antisymmetric matrix field stored by its upper triangle.

    Notes
    -----
    1. Entry ``(j, k)`` with ``j < k`` is stored; ``(k, j)`` is its negative and ``(j, j)`` vanishes.
    2. One entry for ``d = 2``, three for ``d = 3`` (pairs (0,1), (0,2), (1,2)).
    """
    lead_ndim = 1

    @staticmethod
    def _lead_shape(grid: Grid) -> tuple[int, ...]:
        return (len(curl_pairs(grid.d)),)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return curl_pairs(self.grid.d)

    @property
    def entries(self) -> list[ScalarField]:
        return [ScalarField(self.grid, e) for e in self.data]

    def entry(self, j: int, k: int) -> np.ndarray:
        """Entry ``(j, k)`` as an array, antisymmetry applied."""
        if j == k:
            return np.zeros(self.grid.shape)
        if j < k:
            return self.data[self.pairs.index((j, k))]
        return -self.data[self.pairs.index((k, j))]

    def as_matrix(self) -> MatrixField:
        d = self.grid.d
        return MatrixField(self.grid, np.stack([np.stack([self.entry(j, k) for k in range(d)]) for j in range(d)]))

    @classmethod
    def from_matrix(cls, grid: Grid, matrix: np.ndarray) -> 'CurlField':
        """Upper triangle of ``matrix`` (shape ``(d, d, *shape)``); antisymmetry is assumed."""
        return cls(grid, np.stack([matrix[j, k] for j, k in curl_pairs(grid.d)]))

    @classmethod
    def zeros(cls, grid: Grid) -> 'CurlField':
        return cls(grid, np.zeros((len(curl_pairs(grid.d)),) + grid.shape))


@dataclass(frozen=True)
class FieldHistory:
    """
    Time-indexed field slices with linear interpolation in time.

    Parameters
    ----------
    times : tuple[float, ...]
        Strictly increasing slice times.

    slices : tuple[Field, ...]
        Field samples at ``times``, all of one type on one grid.
    """
    # Data Class Attributes:
    times: tuple
    slices: tuple

    def __post_init__(self):
        if len(self.times) != len(self.slices) or not self.slices:
            raise ValueError("Input Error: history needs one slice per time and at least one slice.")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("Input Error: history times must increase strictly.")

    @classmethod
    def constant(cls, f: Field) -> 'FieldHistory':
        return cls(times=(0.0,), slices=(f,))

    @property
    def grid(self) -> Grid:
        return self.slices[0].grid

    def data_at(self, t: float) -> np.ndarray:
        """Linearly interpolated data at time ``t`` (clamped outside the stored range)."""
        times = np.asarray(self.times)
        if len(times) == 1 or t <= times[0]:
            return self.slices[0].data
        if t >= times[-1]:
            return self.slices[-1].data
        k = int(np.searchsorted(times, t, side='right') - 1)
        w = (t - times[k]) / (times[k + 1] - times[k])
        if w == 0.0:
            return self.slices[k].data
        return (1.0 - w) * self.slices[k].data + w * self.slices[k + 1].data

    def at(self, t: float) -> Field:
        return self.slices[0]._new(self.data_at(t))
