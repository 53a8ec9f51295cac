"""Report dataclasses returned by checks and integrators.

Checks return these instead of raising so callers can inspect every defect.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .models import complex_pairs


@dataclass(frozen=True)
class Violation:
    """One failed groupoid axiom instance."""

    kind: str  # typing | associativity | unit | inverse
    transitions: Tuple[int, ...]
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "transitions": list(self.transitions), "message": self.message}


@dataclass
class ValidationReport:
    """Result of an exhaustive axiom scan."""

    n_events: int
    n_transitions: int
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {violation.kind for violation in self.violations}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "n_events": self.n_events,
            "n_transitions": self.n_transitions,
            "violations": [violation.to_dict() for violation in self.violations],
        }


@dataclass(frozen=True)
class NormReport:
    """Operator norm of π(f)."""

    value: float
    method: str
    faithful: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "method": self.method, "faithful": self.faithful}


@dataclass(frozen=True)
class StateCheck:
    """Diagnostics of a positivity/normalization check."""

    ok: bool
    min_eigenvalue: float
    normalization_defect: float
    hermiticity_defect: float
    positive: bool = True

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "min_eigenvalue": self.min_eigenvalue,
            "normalization_defect": self.normalization_defect,
            "hermiticity_defect": self.hermiticity_defect,
            "positive": self.positive,
        }


@dataclass(frozen=True)
class MapCheckReport:
    """Worst defects found while sampling a candidate positive normalized map."""

    ok: bool
    samples: int
    normalization_defect: float
    min_eigenvalue: float
    worst_sample: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "samples": self.samples,
            "normalization_defect": self.normalization_defect,
            "min_eigenvalue": self.min_eigenvalue,
            "worst_sample": self.worst_sample,
        }


@dataclass(frozen=True, eq=False)
class HeisenbergSeries:
    """Coefficients f(t_k) along a time grid, one row per grid point."""

    times: np.ndarray
    coeffs: np.ndarray
    step: float
    max_flow_deviation: Optional[float] = None

    def column(self, alpha: int) -> np.ndarray:
        return self.coeffs[:, alpha]


@dataclass(frozen=True, eq=False)
class ClassicalSeries:
    """Values p(τ_k) or f(τ_k) on events along a time grid."""

    times: np.ndarray
    values: np.ndarray
    kind: str = "state"

    def totals(self) -> np.ndarray:
        return self.values.sum(axis=1)


@dataclass(frozen=True)
class CompoundMeasurement:
    """⟨b′|c′⟩ together with the resulting selective measurement symbol."""

    amplitude: complex
    probability: float
    symbol: Tuple[int, int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "amplitude": complex_pairs(np.array([self.amplitude]))[0],
            "probability": self.probability,
            "symbol": list(self.symbol),
        }


__all__ = [
    "Violation",
    "ValidationReport",
    "NormReport",
    "StateCheck",
    "MapCheckReport",
    "HeisenbergSeries",
    "ClassicalSeries",
    "CompoundMeasurement",
]
