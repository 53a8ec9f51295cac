"""Configuration package with layered settings.

Provides a centralized `get_config()` function that returns an AppConfig singleton.
"""

import threading

from .base import CLI_PROFILE, LIBRARY_PROFILE
from .numerics import get_numerics_config
from .runtime import get_runtime_config
from .schema import AppConfig, NumericsConfig, RuntimeConfig

# Singleton cache
_config_cache = None
_config_lock = threading.Lock()
_config_name = LIBRARY_PROFILE


def set_config_name(name: str) -> None:
    """
    Set the config profile name ("library" or "cli").

    This must be called before `get_config()` if using a non-default profile.
    """
    global _config_name, _config_cache
    if name not in (LIBRARY_PROFILE, CLI_PROFILE):
        raise ValueError(f"Unknown config profile: {name}")
    with _config_lock:
        _config_name = name
        _config_cache = None  # Invalidate cache


def get_config() -> AppConfig:
    """
    Get the application configuration (singleton).

    Returns:
        AppConfig instance with runtime and numerics settings
    """
    global _config_cache

    if _config_cache is not None:
        return _config_cache

    with _config_lock:
        if _config_cache is None:
            _config_cache = AppConfig(
                runtime=get_runtime_config(profile=_config_name),
                numerics=get_numerics_config(profile=_config_name),
            )

    return _config_cache


__all__ = [
    "get_config",
    "set_config_name",
    "RuntimeConfig",
    "NumericsConfig",
    "AppConfig",
]
