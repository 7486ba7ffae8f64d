# Standard:
import json
import logging
import os
import struct
from importlib import metadata

# External:
import numpy as np
import pandas as pd

# Internal:
from ..fields.core import CurlField, Field, MatrixField, ScalarField, VectorField, curl_pairs
from ..fields.grid import Grid

# Constants:
from .mappings import GEOMETRY_TAGS, TAG_GEOMETRIES

logger = logging.getLogger(__name__)

MAGIC = b'AFLD'
HEADER = struct.Struct('<4sIIdIII')


def package_version() -> str:
    try:
        return metadata.version('pyalfven')
    except metadata.PackageNotFoundError:
        return '0+unknown'


def _field_class(grid: Grid, ncomp: int):
    d = grid.d
    if ncomp == 1:
        return ScalarField
    if ncomp == d:
        return VectorField
    if ncomp == d * d:
        return MatrixField
    if ncomp == len(curl_pairs(d)):
        return CurlField
    raise ValueError(f"Input Error: {ncomp} components do not match any field type in d={d}.")


"""
----------------------------------------------------------------------------------------------------
Field Files
----------------------------------------------------------------------------------------------------
"""
def write_field(path: str, u: Field) -> str:
    """
    Writes a field as a 32-byte header followed by its float64 payload (little endian, C order).

    Notes
    -----
    1. The header is ``b"AFLD"``, ``d``, ``N``, ``L``, the geometry tag, the component count and a reserved word.
    2. In ``d = 3`` a ``CurlField`` and a ``VectorField`` both carry three components; files read back as
       ``VectorField`` unless ``kind`` is given to ``read_field``.
    """
    grid = u.grid
    flat = u.components_flat()
    header = HEADER.pack(MAGIC, grid.d, grid.N, float(grid.L), GEOMETRY_TAGS[grid.geometry], flat.shape[0], 0)
    with open(path, 'wb') as handle:
        handle.write(header)
        handle.write(np.ascontiguousarray(flat, dtype='<f8').tobytes())
    return path


def read_field(path: str, kind: type = None) -> Field:
    """
    Reads a field file written by ``write_field``.

    Raises
    ------
    ValueError
        If the magic, the geometry tag or the payload length is wrong.
    """
    with open(path, 'rb') as handle:
        raw = handle.read()
    if len(raw) < HEADER.size:
        raise ValueError(f"Input Error: '{path}' is shorter than a field header.")
    magic, d, N, L, tag, ncomp, _ = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"Input Error: '{path}' is not a field file (magic {magic!r}).")
    if tag not in TAG_GEOMETRIES:
        raise ValueError(f"Input Error: '{path}' has unknown geometry tag {tag}.")
    grid = Grid(d=d, L=L, N=N, geometry=TAG_GEOMETRIES[tag])
    payload = np.frombuffer(raw, dtype='<f8', offset=HEADER.size)
    if payload.size != ncomp * grid.size:
        raise ValueError(f"Input Error: '{path}' payload has {payload.size} values, expected {ncomp * grid.size}.")
    cls = kind or _field_class(grid, ncomp)
    lead = cls._lead_shape(grid)
    return cls(grid, payload.reshape(lead + grid.shape))


def field_to_frame(u: Field) -> pd.DataFrame:
    """Node coordinates ``x0..x{d-1}`` followed by one column ``c0..`` per component."""
    grid = u.grid
    columns = {f"x{k}": grid.coordinates[k].ravel() for k in range(grid.d)}
    for c, comp in enumerate(u.components_flat()):
        columns[f"c{c}"] = comp.ravel()
    return pd.DataFrame(columns)


def write_field_csv(path: str, u: Field) -> str:
    field_to_frame(u).to_csv(path, index=False, float_format='%.17g')
    return path


"""
----------------------------------------------------------------------------------------------------
Run Outputs
----------------------------------------------------------------------------------------------------
"""
def write_frame(path: str, frame: pd.DataFrame) -> str:
    """CSV with full float precision, so identical runs give identical bytes."""
    frame.to_csv(path, index=False, float_format='%.17g', lineterminator='\n')
    return path


def write_manifest(directory: str, config, outputs: list[str], extra: dict = None) -> str:
    """
    Writes ``manifest.json``: the canonical run config plus package version and output list.
    """
    os.makedirs(directory, exist_ok=True)
    manifest = {
        'config': config.to_dict(),
        'version': package_version(),
        'outputs': sorted(os.path.basename(p) for p in outputs),
    }
    if extra:
        manifest['summary'] = extra
    path = os.path.join(directory, 'manifest.json')
    with open(path, 'w') as handle:
        handle.write(json.dumps(manifest, sort_keys=True, separators=(',', ':'), default=float) + '\n')
    return path


def dump_state(directory: str | None, fields: dict[str, Field], t: float) -> str | None:
    """
    Writes every field of an aborted state to ``directory/abort-<name>.afld``; returns the directory or ``None``.
    """
    if directory is None:
        return None
    try:
        os.makedirs(directory, exist_ok=True)
        for name, u in fields.items():
            write_field(os.path.join(directory, f"abort-{name}.afld"), u)
        with open(os.path.join(directory, 'abort.json'), 'w') as handle:
            handle.write(json.dumps({'t': t, 'fields': sorted(fields)}, sort_keys=True) + '\n')
    except OSError as error:
        logger.error("State dump to '%s' failed: %s", directory, error)
        return None
    return directory
