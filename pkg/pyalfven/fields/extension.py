# Standard:
import logging
from dataclasses import dataclass

# External:
import numpy as np

# Internal:
from .core import ScalarField, VectorField
from .interpolation import fold_strip

# Constants:
from ..utils.constants import TRACE_TOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StripField:
    """
    A scalar field on strip geometry tagged with the parity of its intended extension.

    Parameters
    ----------
    field : ScalarField
        Samples on a ``strip`` grid.

    parity : str
        'even' or 'odd'. Odd fields must vanish on ``y = 0`` and ``y = 1``.
    """
    # Data Class Attributes:
    field: ScalarField
    parity: str = 'even'

    def __post_init__(self):
        if self.field.grid.geometry != 'strip':
            raise ValueError(f"Input Error: StripField needs strip geometry, got '{self.field.grid.geometry}'.")
        if self.parity not in ('even', 'odd'):
            raise ValueError(f"Input Error: parity must be 'even' or 'odd', got '{self.parity}'.")

    @property
    def boundary_trace(self) -> float:
        """Relative boundary trace ``max_{y∈{0,1}} |f| / max |f|``."""
        values = self.field.values
        scale = np.abs(values).max()
        if scale == 0.0:
            return 0.0
        return float(max(np.abs(values[..., 0]).max(), np.abs(values[..., -1]).max()) / scale)


def reflect(X) -> np.ndarray:
    """
    Maps points onto the strip by ``(x, y) -> (x, ρ₀(y))``.

    Parameters
    ----------
    X : array-like
        Coordinates with the strip-normal coordinate last, shape ``(d,)`` or ``(d, ...)``.

    Returns
    -------
    np.ndarray
        Reflected coordinates, same shape.
    """
    out = np.array(X, dtype=float)
    out[-1] = fold_strip(out[-1])
    return out


def _mirror_index(grid) -> tuple[np.ndarray, np.ndarray]:
    """Strip row index and sign for each extended-grid row of the normal axis."""
    M = grid.strip_points
    j = np.arange(2 * M)
    source = np.where(j <= M, j, 2 * M - j)
    sign = np.where(j <= M, 1.0, -1.0)
    return source, sign


def subtract_trace(f: ScalarField) -> tuple[ScalarField, float]:
    """
    Removes the linear-in-y interpolant of the boundary traces.

    Returns
    -------
    tuple[ScalarField, float]
        Corrected field and the maximum magnitude of the correction.
    """
    values = f.values
    y = f.grid.axis(f.grid.d - 1)
    correction = values[..., :1] * (1.0 - y) + values[..., -1:] * y
    return ScalarField(f.grid, values - correction), float(np.abs(correction).max())


def even_extend(f: StripField) -> ScalarField:
    """
    Even extension ``T_e f`` onto the extended strip, ``T_e f(x, 2n ± y) = f(x, y)``.

    Parameters
    ----------
    f : StripField
        Even-tagged strip field.

    Returns
    -------
    ScalarField
        Samples on the ``extended-strip`` grid.
    """
    if f.parity != 'even':
        raise ValueError("Input Error: even_extend needs an even-tagged StripField.")
    grid = f.field.grid
    source, _ = _mirror_index(grid)
    return ScalarField(grid.extended(), f.field.values[..., source])


def odd_extend(f: StripField, subtract: bool = False) -> ScalarField:
    """
    Odd extension ``T_o f`` onto the extended strip, ``T_o f(x, 2n - y) = -f(x, y)``.

    Notes
    -----
    1. The boundary trace must vanish to ``1e-12`` relative. With ``subtract=True`` the linear-in-y interpolant of
       the traces is removed first and its magnitude logged.

    Parameters
    ----------
    f : StripField
        Odd-tagged strip field.

    subtract : bool, default=False
        Whether to subtract a nonzero boundary trace instead of rejecting it.

    Returns
    -------
    ScalarField
        Samples on the ``extended-strip`` grid.
    """
    if f.parity != 'odd':
        raise ValueError("Input Error: odd_extend needs an odd-tagged StripField.")
    field = f.field
    trace = f.boundary_trace
    if trace > TRACE_TOL:
        if not subtract:
            raise ValueError(f"Input Error: odd extension needs zero boundary trace, measured {trace:.3e} relative.")
        field, magnitude = subtract_trace(field)
        logger.info("Subtracted boundary trace of magnitude %.3e before odd extension.", magnitude)

    grid = field.grid
    source, sign = _mirror_index(grid)
    values = field.values[..., source] * sign
    values[..., grid.strip_points] = 0.0
    return ScalarField(grid.extended(), values)


def extend_vector(z: VectorField, subtract: bool = False) -> VectorField:
    """
    Vector extension ``T z = (T_e z^1, ..., T_e z^{d-1}, T_o z^d)`` of a strip field.
    """
    parts = [even_extend(StripField(c, 'even')) for c in z.components[:-1]]
    parts.append(odd_extend(StripField(z.components[-1], 'odd'), subtract=subtract))
    return VectorField.from_components(parts)


def restrict(u):
    """
    Restriction of an extended-strip field (any field type) back to the strip nodes ``y ∈ [0, 1]``.
    """
    grid = u.grid.strip()
    return type(u)(grid, u.data[..., :grid.strip_points + 1])
