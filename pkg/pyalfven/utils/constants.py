# External:
import numpy as np

# Physics Defaults:
DEFAULT_ALPHA = 0.5
DEFAULT_DELTA = 0.25
DEFAULT_C0 = 2.0
DEFAULT_MU1 = 1.0
B0 = np.array([1.0, 0.0])

# Grid Related:
MIN_POINTS = 8
SNAP_TOL = 1e-9

# Holder Estimator:
NEAR_RADIUS = 2
FAR_PARTNERS = 64
EXHAUSTIVE_MAX_N = 16
ESTIMATOR_SLACK = 0.05

# Quadrature Related:
HERMITE_NODES = 32
LEGENDRE_NEAR = 8
LEGENDRE_FAR = 4
NEAR_CELLS = 4
QUAD_TOL = 1e-10
CUTOFF_RESIDUAL_TOL = 1e-10
WEIGHT_UNDERFLOW = 1e-300
TRUNCATION_RADIUS = 8.0
HEAT_TRUNCATION_SIGMAS = 8.0
HEAT_MASS_TOL = 1e-8

# Transport Related:
ODE_TOL = 1e-8
CFL_FRACTION = 0.5
MAX_SUBSTEPS = 100_000

# Extension Related:
TRACE_TOL = 1e-12

# Solver Guards:
BLOWUP_FACTOR = 1e3
DIV_GUARD_FACTOR = 100.0

# Lemma Lab:
REFINEMENT_DRIFT = 0.2
MAX_GENERATOR_ATTEMPTS = 100
TIME_SLICES = 8
WEIGHT_C1 = 8.0

# Report Columns:
HOLDER_COLS = ['sup', 'semi', 'grad_sup', 'grad_semi', 'lip', 'alpha', 'R', 'pairs']
LEMMA_REPORT_COLS = ['id', 'trials', 'max_ratio', 'ratio_refined', 'pass', 'seed', 'wall_ms']
DIAGNOSTIC_COLS = ['t', 'M_plus', 'M_minus', 'div_residual', 'energy']
TRACE_COLS = ['op', 'R', 'n_min', 'n_max', 'fine_tail', 'coarse_tail', 'wall_ms']
WEIGHT_REPORT_COLS = ['condition', 'value', 'bound', 'pass']
NORM_COLS = ['weight', 'norm0', 'norm1'] + HOLDER_COLS

# Exit Codes:
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_ABORT = 3
