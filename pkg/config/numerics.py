"""Numerics configuration - default tolerances.

Reads tolerance overrides from namespaced environment variables.
"""

import os

from .base import (
    CLI_PROFILE,
    DEFAULT_ATOL,
    DEFAULT_NULL_SPACE_RTOL,
    DEFAULT_OBSERVABLE_TOL,
    DEFAULT_PSD_TOL,
    DEFAULT_RK4_STEP,
    DEFAULT_UNITARY_TOL,
    ENV_PREFIX,
)
from .schema import NumericsConfig


def _env_float(name, default, use_env=True):
    """Read a float environment variable."""
    if not use_env:
        return default
    value = os.environ.get(ENV_PREFIX + name)
    if value is None:
        return default
    try:
        return float(value)
    except ValueError:
        return default


def get_numerics_config(profile="library") -> NumericsConfig:
    """
    Build numerics configuration from environment variables.

    Returns:
        NumericsConfig instance
    """
    use_env = profile != CLI_PROFILE
    return NumericsConfig(
        atol=_env_float("ATOL", DEFAULT_ATOL, use_env),
        null_space_rtol=_env_float("NULL_SPACE_RTOL", DEFAULT_NULL_SPACE_RTOL, use_env),
        psd_tol=_env_float("PSD_TOL", DEFAULT_PSD_TOL, use_env),
        observable_tol=_env_float("OBSERVABLE_TOL", DEFAULT_OBSERVABLE_TOL, use_env),
        unitary_tol=_env_float("UNITARY_TOL", DEFAULT_UNITARY_TOL, use_env),
        rk4_step=_env_float("RK4_STEP", DEFAULT_RK4_STEP, use_env),
    )


__all__ = ["get_numerics_config", "_env_float"]
