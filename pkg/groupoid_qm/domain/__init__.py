"""Domain models package."""

from .models import (
    AlgebraElement,
    ClassicalObservable,
    DensityMatrix,
    FiniteGroupoid,
    FrameChange,
    GnsData,
    GroupoidSpec,
    Hamiltonian,
    Kernel,
    MarkovGenerator,
    Operator,
    OscillatorTruncation,
    PauliCoordinates,
    State,
    Transition,
)
from .reports import (
    ClassicalSeries,
    CompoundMeasurement,
    HeisenbergSeries,
    MapCheckReport,
    NormReport,
    StateCheck,
    ValidationReport,
    Violation,
)

__all__ = [
    "AlgebraElement",
    "ClassicalObservable",
    "DensityMatrix",
    "FiniteGroupoid",
    "FrameChange",
    "GnsData",
    "GroupoidSpec",
    "Hamiltonian",
    "Kernel",
    "MarkovGenerator",
    "Operator",
    "OscillatorTruncation",
    "PauliCoordinates",
    "State",
    "Transition",
    "ClassicalSeries",
    "CompoundMeasurement",
    "HeisenbergSeries",
    "MapCheckReport",
    "NormReport",
    "StateCheck",
    "ValidationReport",
    "Violation",
]
