"""
Global settings and configuration for skewsym
"""

from pathlib import Path

# Application info
APP_NAME = "skewsym"
VERSION = "1.0.0"
DESCRIPTION = "Symmetries of Julia sets of polynomial skew products"
SCHEMA_VERSION = "skewsym-report/1"

# Paths
PROJECT_ROOT = Path(__file__).parent.parent
DEFAULT_OUT_DIR = Path("skewsym-out")

# Exact pipeline
ITERATE_BUDGET = 200_000  # max terms of a symbolic iterate
SCALE_PRECISION = 30  # mpmath digits for c1, c2
RATIONALIZE_DENOMINATOR = 10**6

# Oracle
ORACLE_MAX_ORDER = 12
ORACLE_DEPTH = 4

# Numerics
N_MAX = 64
N_MAX_LIMIT = 4096
GREEN_TOL = 1e-10
BAILOUT_RADIUS = 1e12
BAND_TOL = 0.01
BURN_IN = 64
ROOT_TOL = 1e-12
ROOT_MAX_ITER = 500
PHI_DEGENERATE_EPS = 1e-9
VERIFY_FIBER_POINTS = 8  # w samples per base sample
VERIFY_FIBER_RADIUS = 3.0
IRRATIONAL_CANDIDATES = 8  # seeded non-torsion angles for the leading-fiber filter
OFF_JULIA_GREEN = 1e-3  # G_p above this puts a point clearly outside K_p
UNIT_CIRCLE_TOL = 1e-6

# Parallel work
MAX_WORKERS = 8

# Run configuration state; keys double as the config-file keys
CONFIG = {
    # Sampling
    "seed": 0,
    "samples": 2000,
    "verify_samples": 512,

    # Tolerances
    "tol": 1e-3,
    "filter_tol": 1e-6,
    "green_tol": GREEN_TOL,
    "band_tol": BAND_TOL,

    # Exact pipeline
    "max_order": ORACLE_MAX_ORDER,
    "depth": ORACLE_DEPTH,
    "candidate_max_order": 64,
    "iterate_budget": ITERATE_BUDGET,
    "precision": SCALE_PRECISION,
    "elements_listing_limit": 64,

    # Numeric evaluator
    "n_max": N_MAX,
    "n_max_limit": N_MAX_LIMIT,
    "bailout": BAILOUT_RADIUS,
    "burn_in": BURN_IN,

    # Compactness thresholds
    "eps_near": 0.02,
    "eps_far": 0.1,

    # Rendering
    "resolution": 512,
    "window_width": 4.0,

    # Parallelism
    "max_workers": MAX_WORKERS,

    # Reporting
    "strict": False,
    "timestamp": True,
}

# Validation bounds
VALIDATION = {
    "resolution": (8, 8192),
    "max_order": (1, 64),
    "depth": (1, 8),
    "precision": (15, 200),
    "max_workers": (1, 64),
}

SUBCOMMANDS = ["normalize", "symmetries", "classify", "render", "verify", "report"]

# Exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_UNCERTAIN = 2
