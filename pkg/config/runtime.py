"""Runtime configuration - environment-driven settings.

Reads environment variables and applies defaults. The CLI profile ignores the
environment entirely so that command-line runs depend on their flags only.
"""

import os

from .base import (
    CLI_PROFILE,
    DEFAULT_CSV_FLOAT_FORMAT,
    DEFAULT_FLOW_WORKERS,
    DEFAULT_LOG_LEVEL,
    ENV_PREFIX,
)
from .schema import RuntimeConfig


def _env_str(name, default, use_env=True):
    """Read a string environment variable."""
    if not use_env:
        return default
    return os.environ.get(ENV_PREFIX + name, default)


def _env_int(name, default, use_env=True):
    """Read an integer environment variable."""
    if not use_env:
        return default
    value = os.environ.get(ENV_PREFIX + name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        return default


def get_runtime_config(profile="library") -> RuntimeConfig:
    """
    Build runtime configuration from environment variables.

    Args:
        profile: Config profile name ("library" or "cli"). The cli profile
                 skips the environment.

    Returns:
        RuntimeConfig instance
    """
    use_env = profile != CLI_PROFILE
    return RuntimeConfig(
        profile=profile,
        log_level=_env_str("LOG_LEVEL", DEFAULT_LOG_LEVEL, use_env),
        csv_float_format=DEFAULT_CSV_FLOAT_FORMAT,
        flow_workers=_env_int("FLOW_WORKERS", DEFAULT_FLOW_WORKERS, use_env),
    )


__all__ = ["get_runtime_config", "_env_str", "_env_int"]
