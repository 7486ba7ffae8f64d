# Standard:
import json
from dataclasses import dataclass, asdict, fields, replace

# Internal:
from .errors import ConfigError

# Constants:
from .constants import DEFAULT_ALPHA, DEFAULT_DELTA, DEFAULT_C0, MIN_POINTS
from .mappings import GEOMETRY_TAGS

COMMANDS = ('verify', 'solve-ideal', 'solve-viscous', 'norms', 'weights-check', 'list-cases')
VISCOUS_COMMANDS = ('solve-viscous',)


@dataclass(frozen=True)
class RunConfig:
    """
    Container holding everything needed to reproduce one command-line run.

    Notes
    -----
    1. ``to_json`` is canonical (sorted keys, compact separators, trailing newline) so a parsed config
       round-trips byte-identically.
    2. Validation runs on construction and names the violated constraint.

    Parameters
    ----------
    command : str
        One of 'verify', 'solve-ideal', 'solve-viscous', 'norms', 'weights-check', 'list-cases'.

    d, L, N, geometry :
        Grid parameters.

    nu, mu : float
        Viscosity and resistivity.

    T, dt : float
        Final time and macro step cap.

    delta, alpha, eps, c0 : float
        Weight decay, Hölder exponent, data amplitude and power-weight offset.

    seed : int
        Seed of every random draw.

    n_iter, n_trials : int
        Picard iterations and lemma-lab trials per case.

    filter : str
        Lemma-lab case filter.

    out : str
        Output directory.

    threads : int
        Worker threads (never affects results).

    weight : str
        Weight in canonical text form, for ``norms`` and ``weights-check``.

    field : str
        Optional field file for ``norms``.
    """
    # Data Class Attributes:
    command: str = 'verify'
    d: int = 2
    L: float = 16.0
    N: int = 128
    geometry: str = 'free-box'
    nu: float = 0.01
    mu: float = 0.005
    T: float = 5.0
    dt: float = 0.1
    delta: float = DEFAULT_DELTA
    alpha: float = DEFAULT_ALPHA
    eps: float = 1e-2
    c0: float = DEFAULT_C0
    seed: int = 0
    n_iter: int = 4
    n_trials: int = 32
    filter: str = ''
    out: str = 'out'
    threads: int = 1
    weight: str = 'powerf0:c0=2,delta=0.25'
    field: str = ''

    def __post_init__(self):
        self.validate()

    def validate(self):
        """
        Checks every named constraint, raising ``ConfigError`` on the first violation.
        """
        if self.command not in COMMANDS:
            raise ConfigError(f"Config Error: unknown command '{self.command}' (expected one of {', '.join(COMMANDS)}).")
        if self.geometry not in GEOMETRY_TAGS:
            raise ConfigError(f"Config Error: unknown geometry '{self.geometry}'.")
        if self.d not in (2, 3):
            raise ConfigError(f"Config Error: constraint 'd in {{2, 3}}' violated (d={self.d}).")
        if self.N < MIN_POINTS or self.L <= 0:
            raise ConfigError(f"Config Error: constraint 'N >= {MIN_POINTS} and L > 0' violated (N={self.N}, L={self.L}).")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"Config Error: constraint '0 < alpha < 1' violated (alpha={self.alpha}).")
        if self.delta <= 0:
            raise ConfigError(f"Config Error: constraint 'delta > 0' violated (delta={self.delta}).")
        if self.command in VISCOUS_COMMANDS and not 0.0 < self.delta < 0.5:
            raise ConfigError(f"Config Error: constraint '0 < delta < 1/2' for viscous runs violated (delta={self.delta}).")
        if self.nu < 0 or self.mu < 0:
            raise ConfigError(f"Config Error: constraint 'nu, mu >= 0' violated (nu={self.nu}, mu={self.mu}).")
        if self.command in VISCOUS_COMMANDS and self.nu + self.mu <= 0:
            raise ConfigError("Config Error: constraint 'mu1 = (nu + mu)/2 > 0' for viscous runs violated.")
        if self.T < 0 or self.dt <= 0:
            raise ConfigError(f"Config Error: constraint 'T >= 0 and dt > 0' violated (T={self.T}, dt={self.dt}).")
        if self.n_iter < 1 or self.n_trials < 1 or self.threads < 1:
            raise ConfigError("Config Error: constraint 'n_iter, n_trials, threads >= 1' violated.")
        if self.c0 <= 0:
            raise ConfigError(f"Config Error: constraint 'c0 > 0' violated (c0={self.c0}).")
        if self.command == 'solve-ideal' and self.geometry != 'strip':
            raise ConfigError(f"Config Error: constraint 'solve-ideal needs strip geometry' violated ({self.geometry}).")

    @property
    def mu1(self) -> float:
        return 0.5 * (self.nu + self.mu)

    @property
    def mu2(self) -> float:
        return 0.5 * (self.nu - self.mu)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':')) + '\n'

    @classmethod
    def from_dict(cls, data: dict) -> 'RunConfig':
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Config Error: unknown field(s) {', '.join(unknown)}.")
        try:
            return cls(**data)
        except TypeError as error:
            raise ConfigError(f"Config Error: {error}") from error

    @classmethod
    def from_json(cls, text: str) -> 'RunConfig':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as error:
            raise ConfigError(f"Config Error: malformed JSON ({error.msg} at line {error.lineno}).") from error
        if not isinstance(data, dict):
            raise ConfigError("Config Error: top-level JSON value must be an object.")
        return cls.from_dict(data)

    def with_overrides(self, **overrides) -> 'RunConfig':
        """Copy with the given fields replaced; ``None`` values are ignored so unset flags keep the config value."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        known = {f.name for f in fields(self)}
        unknown = sorted(set(changes) - known)
        if unknown:
            raise ConfigError(f"Config Error: unknown field(s) {', '.join(unknown)}.")
        return replace(self, **changes)
