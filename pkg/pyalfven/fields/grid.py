# Standard:
from dataclasses import dataclass, field
from functools import cached_property

# External:
import numpy as np

# Constants:
from ..utils.constants import MIN_POINTS
from ..utils.mappings import GEOMETRY_TAGS, LAST_AXIS_PERIODIC


@dataclass(frozen=True)
class Grid:
    """
    Uniform grid over a truncated box, a torus, the strip or the extended strip.

    Notes
    -----
    1. Nodes along a box axis are ``x_i = -L + i*Δ`` for ``i = 0..N-1`` with ``Δ = 2L/N``, so the origin is a node
       whenever ``N`` is even.
    2. ``strip`` keeps the last axis on ``[0, 1]`` with nodes ``y_j = j*Δ`` for ``j = 0..M`` (``M = 1/Δ``), i.e. a node on
       each boundary. ``extended-strip`` stores ``j = 0..2M-1`` and identifies ``y`` with ``y + 2``.
    3. ``periodic-torus`` identifies ``x`` with ``x + 2L`` on every axis.

    Parameters
    ----------
    d : int
        Spatial dimension (2 or 3).

    L : float
        Box half-width.

    N : int
        Points per box axis.

    geometry : str
        One of 'free-box', 'periodic-torus', 'strip', 'extended-strip'.
    """
    # Data Class Attributes:
    d: int
    L: float
    N: int
    geometry: str = 'free-box'
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError(f"Input Error: dimension must be 2 or 3, got d={self.d}.")
        if self.geometry not in GEOMETRY_TAGS:
            raise ValueError(f"Input Error: unknown geometry '{self.geometry}'.")
        if self.N < MIN_POINTS:
            raise ValueError(f"Input Error: need N >= {MIN_POINTS} points per axis, got N={self.N}.")
        if not self.L > 0:
            raise ValueError(f"Input Error: half-width must be positive, got L={self.L}.")
        if self.is_strip:
            m = 1.0 / self.spacing
            if abs(m - round(m)) > 1e-9:
                raise ValueError(f"Input Error: strip geometry needs 1/Δ integral, got 1/Δ={m:.6g}.")

    def __hash__(self):
        return hash((self.d, float(self.L), self.N, self.geometry))

    # ------------------------------------------------------------------------------------------------------------------
    # Geometry:
    # ------------------------------------------------------------------------------------------------------------------
    @property
    def spacing(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def is_strip(self) -> bool:
        return self.geometry in ('strip', 'extended-strip')

    @property
    def strip_points(self) -> int:
        """Number of strip cells ``M = 1/Δ`` across the unit height."""
        return int(round(1.0 / self.spacing))

    @property
    def periodic(self) -> tuple[bool, ...]:
        """Per-axis periodicity flags."""
        box_axes = self.geometry == 'periodic-torus'
        return tuple([box_axes] * (self.d - 1) + [LAST_AXIS_PERIODIC[self.geometry]])

    @property
    def shape(self) -> tuple[int, ...]:
        last = {'strip': self.strip_points + 1, 'extended-strip': 2 * self.strip_points}.get(self.geometry, self.N)
        return tuple([self.N] * (self.d - 1) + [last])

    @property
    def origins(self) -> tuple[float, ...]:
        """Coordinate of node index 0 per axis."""
        return tuple([-self.L] * (self.d - 1) + [0.0 if self.is_strip else -self.L])

    @property
    def periods(self) -> tuple[float | None, ...]:
        """Identification length per axis, ``None`` on non-periodic axes."""
        out = []
        for axis, flag in enumerate(self.periodic):
            if not flag:
                out.append(None)
            elif self.geometry == 'extended-strip' and axis == self.d - 1:
                out.append(2.0)
            else:
                out.append(2.0 * self.L)
        return tuple(out)

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.d

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def axis(self, k: int) -> np.ndarray:
        """1D node coordinates along axis ``k``."""
        return self.origins[k] + self.spacing * np.arange(self.shape[k])

    @cached_property
    def coordinates(self) -> np.ndarray:
        """
        Node coordinates stacked as an array of shape ``(d, *shape)`` (read-only).
        """
        mesh = np.stack(np.meshgrid(*[self.axis(k) for k in range(self.d)], indexing='ij'))
        mesh.flags.writeable = False
        return mesh

    # ------------------------------------------------------------------------------------------------------------------
    # Related grids:
    # ------------------------------------------------------------------------------------------------------------------
    def extended(self) -> 'Grid':
        """The y-period-2 grid carrying symmetric extensions of strip fields."""
        if self.geometry != 'strip':
            raise ValueError(f"Input Error: only strip grids extend, got '{self.geometry}'.")
        return Grid(d=self.d, L=self.L, N=self.N, geometry='extended-strip')

    def strip(self) -> 'Grid':
        """The strip grid whose extension is this grid."""
        if self.geometry != 'extended-strip':
            raise ValueError(f"Input Error: only extended-strip grids restrict, got '{self.geometry}'.")
        return Grid(d=self.d, L=self.L, N=self.N, geometry='strip')

    def refined(self) -> 'Grid':
        """Same domain with half the spacing."""
        return Grid(d=self.d, L=self.L, N=2 * self.N, geometry=self.geometry)

    def cached(self, key, factory):
        """
        Memoizes grid-dependent quantities (stencils, quadrature tables) on the grid itself.
        """
        if key not in self._cache:
            self._cache[key] = factory()
        return self._cache[key]
