"""Configuration schema dataclasses.

Minimal dataclasses for runtime and numerics configuration.
"""

from dataclasses import dataclass, field

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class RuntimeConfig:
    """Runtime configuration - environment-driven settings."""

    profile: str = "library"

    # Logging
    log_level: str = "WARNING"

    # Output
    csv_float_format: str = "%.16e"

    # Time-series evaluation
    flow_workers: int = 1

    def __post_init__(self):
        """Validate after initialization."""
        self.log_level = str(self.log_level).upper()
        if self.log_level not in _LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}")
        if self.flow_workers < 1:
            raise ValueError("FLOW_WORKERS must be >= 1")
        try:
            self.csv_float_format % 1.0
        except (TypeError, ValueError) as exc:
            raise ValueError("CSV_FLOAT_FORMAT must be a %-style float format") from exc


@dataclass
class NumericsConfig:
    """Numeric tolerances used when callers do not pass their own."""

    atol: float = 1e-12
    null_space_rtol: float = 1e-10
    psd_tol: float = 1e-10
    observable_tol: float = 1e-12
    unitary_tol: float = 1e-12
    rk4_step: float = 1e-3

    def __post_init__(self):
        """Validate after initialization."""
        for name in ("atol", "null_space_rtol", "psd_tol", "observable_tol", "unitary_tol"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name.upper()} must be >= 0")
        if self.rk4_step <= 0:
            raise ValueError("RK4_STEP must be > 0")


@dataclass
class AppConfig:
    """Top-level application configuration."""

    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
