"""Base configuration with stable defaults.

These settings should not change often and are safe for all environments.
"""

from pathlib import Path

# Project root directory
BASE_DIR = Path(__file__).parent.parent.absolute()

# Environment variable namespace
ENV_PREFIX = "GROUPOID_QM_"

# Runtime defaults
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_CSV_FLOAT_FORMAT = "%.16e"  # 17 significant digits
DEFAULT_FLOW_WORKERS = 1

# Numerics defaults
DEFAULT_ATOL = 1e-12
DEFAULT_NULL_SPACE_RTOL = 1e-10
DEFAULT_PSD_TOL = 1e-10
DEFAULT_OBSERVABLE_TOL = 1e-12
DEFAULT_UNITARY_TOL = 1e-12
DEFAULT_RK4_STEP = 1e-3

# Profiles
LIBRARY_PROFILE = "library"
CLI_PROFILE = "cli"

__all__ = [
    "BASE_DIR",
    "ENV_PREFIX",
    "DEFAULT_LOG_LEVEL",
    "DEFAULT_CSV_FLOAT_FORMAT",
    "DEFAULT_FLOW_WORKERS",
    "DEFAULT_ATOL",
    "DEFAULT_NULL_SPACE_RTOL",
    "DEFAULT_PSD_TOL",
    "DEFAULT_OBSERVABLE_TOL",
    "DEFAULT_UNITARY_TOL",
    "DEFAULT_RK4_STEP",
    "LIBRARY_PROFILE",
    "CLI_PROFILE",
]
