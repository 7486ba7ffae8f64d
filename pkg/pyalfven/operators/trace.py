# Standard:
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

# External:
import pandas as pd

# Constants:
from ..utils.constants import TRACE_COLS


@dataclass
class TraceRecorder:
    """
    Collects one row per operator invocation for the performance harness.

    Notes
    -----
    1. Rows carry ``op, R, n_min, n_max, fine_tail, coarse_tail, wall_ms`` (``TRACE_COLS``).
    2. ``wall_ms`` is the only nondeterministic column; ``to_frame(timing=False)`` drops it.
    """
    # Data Class Attributes:
    rows: list = field(default_factory=list)

    def record(self, op: str, R: float = float('nan'), n_min: int = 0, n_max: int = 0, fine_tail: float = 0.0,
               coarse_tail: float = 0.0, wall_ms: float = 0.0):
        self.rows.append([op, float(R), int(n_min), int(n_max), float(fine_tail), float(coarse_tail), float(wall_ms)])

    @contextmanager
    def timed(self, op: str, **fields):
        """
        Times the enclosed block; the yielded dict may be updated with tail bounds before the row is written.
        """
        start = time.perf_counter()
        info = dict(fields)
        yield info
        self.record(op, wall_ms=1e3 * (time.perf_counter() - start), **info)

    def to_frame(self, timing: bool = True) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows, columns=TRACE_COLS)
        return frame if timing else frame.drop(columns='wall_ms')

    def to_csv(self, path: str):
        self.to_frame().to_csv(path, index=False)


@contextmanager
def traced(recorder: TraceRecorder | None, op: str, **fields):
    """Like ``recorder.timed`` but a no-op when ``recorder`` is None."""
    if recorder is None:
        yield dict(fields)
    else:
        with recorder.timed(op, **fields) as info:
            yield info
