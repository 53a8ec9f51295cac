"""Domain models for finite groupoids and their amplitude algebras.

Immutable dataclasses holding groupoid tables, algebra elements, operators,
states and the physical parameter records of the worked systems. Operations
on them live in `groupoid_qm.services`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from numbers import Number
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from groupoid_qm.errors import (
    BindingError,
    InvalidSpecError,
    ParameterError,
    PreconditionError,
    RangeError,
)

GROUPOID_KINDS = ("pair", "graph", "pair_times_group", "explicit")


def _frozen_array(values: Any, dtype: Any) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


def complex_pairs(values: np.ndarray) -> List[List[float]]:
    """Flatten complex numbers into [re, im] pairs for JSON output."""
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).ravel()]


@dataclass(frozen=True)
class Transition:
    """A transition α: source → target."""

    source: int
    target: int
    label: str

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dict for JSON serialization."""
        return {"source": self.source, "target": self.target, "label": self.label}


@dataclass(frozen=True)
class GroupoidSpec:
    """Declarative description of a groupoid, as read from JSON."""

    kind: str
    n: Optional[int] = None
    m: Optional[int] = None
    edges: Tuple[Tuple[int, int], ...] = ()
    tables: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if self.kind not in GROUPOID_KINDS:
            raise InvalidSpecError(
                f"Unknown groupoid kind: {self.kind!r}. Must be one of {', '.join(GROUPOID_KINDS)}",
                field="kind",
            )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dict for JSON serialization."""
        payload: Dict[str, Any] = {"kind": self.kind}
        if self.kind == "explicit":
            payload["tables"] = self.tables
            return payload
        payload["n"] = self.n
        if self.kind == "graph":
            payload["edges"] = [list(edge) for edge in self.edges]
        if self.kind == "pair_times_group":
            payload["m"] = self.m
        return payload


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """Events, transitions and the partial composition table.

    compose_table[beta, alpha] holds the index of β∘α, or -1 where the pair is
    not composed. Tables are not checked against the groupoid axioms here;
    `groupoid_core.validate` reports violations as data.
    """

    events: Tuple[str, ...]
    transitions: Tuple[Transition, ...]
    unit_of: np.ndarray
    inverse_of: np.ndarray
    compose_table: np.ndarray
    kind: str = "explicit"
    spec: Optional[GroupoidSpec] = None

    def __post_init__(self):
        n_events = len(self.events)
        n_transitions = len(self.transitions)
        if n_events == 0:
            raise InvalidSpecError("A groupoid needs at least one event", field="events")
        object.__setattr__(self, "events", tuple(str(label) for label in self.events))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "unit_of", _frozen_array(self.unit_of, np.int64))
        object.__setattr__(self, "inverse_of", _frozen_array(self.inverse_of, np.int64))
        object.__setattr__(self, "compose_table", _frozen_array(self.compose_table, np.int64))

        for index, transition in enumerate(self.transitions):
            if not (0 <= transition.source < n_events and 0 <= transition.target < n_events):
                raise InvalidSpecError(
                    f"Transition {index} has an endpoint outside 0..{n_events - 1}",
                    field=f"transitions[{index}]",
                )
        if self.unit_of.shape != (n_events,):
            raise InvalidSpecError(f"units must list {n_events} entries", field="units")
        if self.inverse_of.shape != (n_transitions,):
            raise InvalidSpecError(f"inverse must list {n_transitions} entries", field="inverse")
        if self.compose_table.shape != (n_transitions, n_transitions):
            raise InvalidSpecError(
                f"compose table must be {n_transitions}x{n_transitions}", field="compose"
            )
        for name, array in (("units", self.unit_of), ("inverse", self.inverse_of)):
            if array.size and (array.min() < 0 or array.max() >= n_transitions):
                raise InvalidSpecError(f"{name} refers to a missing transition", field=name)
        if self.compose_table.size and (
            self.compose_table.min() < -1 or self.compose_table.max() >= n_transitions
        ):
            raise InvalidSpecError("compose refers to a missing transition", field="compose")

    @property
    def n_events(self) -> int:
        return len(self.events)

    @property
    def n_transitions(self) -> int:
        return len(self.transitions)

    @cached_property
    def sources(self) -> np.ndarray:
        return _frozen_array([t.source for t in self.transitions], np.int64)

    @cached_property
    def targets(self) -> np.ndarray:
        return _frozen_array([t.target for t in self.transitions], np.int64)

    @cached_property
    def composable(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Index arrays (beta, alpha, beta∘alpha) over every defined table cell."""
        beta, alpha = np.nonzero(self.compose_table >= 0)
        result = self.compose_table[beta, alpha]
        return (
            _frozen_array(beta, np.int64),
            _frozen_array(alpha, np.int64),
            _frozen_array(result, np.int64),
        )

    @cached_property
    def is_principal(self) -> bool:
        """True when every hom-set G(a, a′) has at most one transition."""
        keys = self.targets * self.n_events + self.sources
        return len(np.unique(keys)) == self.n_transitions

    @cached_property
    def is_pair(self) -> bool:
        """True when the groupoid is the pair groupoid on its events."""
        return self.is_principal and self.n_transitions == self.n_events**2

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha1()
        digest.update(np.int64(self.n_events).tobytes())
        for array in (self.sources, self.targets, self.unit_of, self.inverse_of, self.compose_table):
            digest.update(np.ascontiguousarray(array, dtype=np.int64).tobytes())
        return digest.hexdigest()

    @cached_property
    def _label_index(self) -> Dict[str, int]:
        return {t.label: index for index, t in enumerate(self.transitions)}

    def transition_index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise RangeError(f"No transition labelled {label!r}") from None

    def event_index(self, label: str) -> int:
        try:
            return self.events.index(str(label))
        except ValueError:
            raise RangeError(f"No event labelled {label!r}") from None

    def check_event(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.n_events:
            raise RangeError(f"Event {a!r} out of range 0..{self.n_events - 1}")
        return int(a)

    def check_transition(self, alpha: int) -> int:
        if not isinstance(alpha, (int, np.integer)) or not 0 <= alpha < self.n_transitions:
            raise RangeError(f"Transition {alpha!r} out of range 0..{self.n_transitions - 1}")
        return int(alpha)

    def to_dict(self) -> Dict[str, Any]:
        """Explicit-table form, loadable through the explicit spec kind."""
        beta, alpha, result = self.composable
        return {
            "events": list(self.events),
            "transitions": [t.to_dict() for t in self.transitions],
            "units": self.unit_of.tolist(),
            "inverse": self.inverse_of.tolist(),
            "compose": [[int(b), int(a), int(r)] for b, a, r in zip(beta, alpha, result)],
        }


def require_same_groupoid(*items: Any) -> FiniteGroupoid:
    """Return the shared groupoid of the items or raise BindingError."""
    groupoid = items[0].groupoid
    for item in items[1:]:
        other = item.groupoid
        if other is not groupoid and other.fingerprint != groupoid.fingerprint:
            raise BindingError(
                "Objects are bound to different groupoids "
                f"({groupoid.fingerprint[:8]} vs {other.fingerprint[:8]})"
            )
    return groupoid


def _coefficient_array(groupoid: FiniteGroupoid, coeffs: Any, what: str) -> np.ndarray:
    array = np.array(coeffs, dtype=np.complex128, copy=True).reshape(-1)
    if array.shape != (groupoid.n_transitions,):
        raise InvalidSpecError(
            f"{what} has {array.size} coefficients but the groupoid has "
            f"{groupoid.n_transitions} transitions",
            field="coeffs",
        )
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An amplitude f: G → ℂ stored densely in transition order."""

    groupoid: FiniteGroupoid
    coeffs: np.ndarray

    # numpy scalars defer to __rmul__
    __array_ufunc__ = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coefficient_array(self.groupoid, self.coeffs, "Element"))

    def __getitem__(self, alpha: int) -> complex:
        return complex(self.coeffs[self.groupoid.check_transition(alpha)])

    def _combine(self, other: "AlgebraElement", sign: float) -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        require_same_groupoid(self, other)
        return AlgebraElement(self.groupoid, self.coeffs + sign * other.coeffs)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, 1.0)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, -1.0)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.groupoid, -self.coeffs)

    def __mul__(self, scalar: Number) -> "AlgebraElement":
        if not isinstance(scalar, Number):
            return NotImplemented
        return AlgebraElement(self.groupoid, complex(scalar) * self.coeffs)

    __rmul__ = __mul__

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dict for JSON serialization."""
        return {"coeffs": complex_pairs(self.coeffs)}


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense complex matrix over the event basis."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128, copy=True)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidSpecError(f"Operator must be square, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def adjoint(self) -> "Operator":
        return Operator(self.entries.conj().T)

    def to_dict(self) -> Dict[str, Any]:
        """Row-major [[ [re, im], ... ], ...] layout."""
        return {"entries": [complex_pairs(row) for row in self.entries]}


@dataclass(frozen=True, eq=False)
class State:
    """Linear functional ρ(f) = Σ_α coeffs(α) f(α).

    Positivity is not enforced on construction; see `states.is_state`.
    """

    groupoid: FiniteGroupoid
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coefficient_array(self.groupoid, self.coeffs, "State"))

    def __call__(self, f: AlgebraElement) -> complex:
        require_same_groupoid(self, f)
        return complex(np.dot(self.coeffs, f.coeffs))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dict for JSON serialization."""
        return {"coeffs": complex_pairs(self.coeffs)}


def hermiticity_defect(element: AlgebraElement) -> float:
    """max |f − f*| over the coefficients."""
    starred = np.conj(element.coeffs[element.groupoid.inverse_of])
    if element.coeffs.size == 0:
        return 0.0
    return float(np.max(np.abs(element.coeffs - starred)))


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """A real (self-adjoint) generator h* = h."""

    h: AlgebraElement
    tol: Optional[float] = None

    def __post_init__(self):
        if not np.all(np.isfinite(self.h.coeffs)):
            raise ParameterError("Hamiltonian coefficients must be finite")
        tol = get_config().numerics.observable_tol if self.tol is None else self.tol
        defect = hermiticity_defect(self.h)
        if defect > tol:
            raise PreconditionError(
                f"Hamiltonian must be an observable: max |h - h*| = {defect:.3e} > {tol:.1e}"
            )

    @property
    def groupoid(self) -> FiniteGroupoid:
        return self.h.groupoid


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Self-adjoint, non-negative, trace-one matrix."""

    entries: np.ndarray
    tol: Optional[float] = None

    def __post_init__(self):
        numerics = get_config().numerics
        entries = np.array(self.entries, dtype=np.complex128, copy=True)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise PreconditionError(f"Density matrix must be square, got shape {entries.shape}")
        adjoint_defect = float(np.max(np.abs(entries - entries.conj().T)))
        if adjoint_defect > numerics.observable_tol:
            raise PreconditionError(f"Density matrix is not self-adjoint (defect {adjoint_defect:.3e})")
        trace_defect = abs(np.trace(entries) - 1.0)
        if trace_defect > numerics.atol:
            raise PreconditionError(f"Density matrix trace differs from 1 by {trace_defect:.3e}")
        psd_tol = numerics.psd_tol if self.tol is None else self.tol
        min_eigenvalue = float(np.linalg.eigvalsh(0.5 * (entries + entries.conj().T)).min())
        if min_eigenvalue < -psd_tol:
            raise PreconditionError(f"Density matrix has negative eigenvalue {min_eigenvalue:.3e}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def to_dict(self) -> Dict[str, Any]:
        return {"entries": [complex_pairs(row) for row in self.entries]}


@dataclass(frozen=True, eq=False)
class GnsData:
    """Quotient F(G)/J_ρ in coordinates q = V_rᴴ c.

    range_basis (V_r) holds orthonormal eigenvectors of the Gram matrix for its
    nonzero eigenvalues; ideal_basis spans the Gelfand ideal.
    """

    state: State
    dim: int
    ideal_basis: np.ndarray
    range_basis: np.ndarray
    quotient_map: np.ndarray
    inner_product: np.ndarray
    cyclic_vector: np.ndarray

    def rep(self, f: AlgebraElement) -> Operator:
        """π_ρ(f)(g + J_ρ) = f⋆g + J_ρ in quotient coordinates."""
        from groupoid_qm.services.algebra import left_multiplication_matrix

        require_same_groupoid(self.state, f)
        left = left_multiplication_matrix(f)
        return Operator(self.quotient_map @ left @ self.range_basis)

    def inner(self, u: np.ndarray, v: np.ndarray) -> complex:
        return complex(np.conj(u) @ self.inner_product @ v)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "ideal_rank": int(self.ideal_basis.shape[1]),
            "cyclic_vector": complex_pairs(self.cyclic_vector),
        }


@dataclass(frozen=True, eq=False)
class ClassicalObservable:
    """A function on events (the classical subalgebra)."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, copy=True).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class Kernel:
    """Real transition-rate kernel k(x, y) with zero diagonal."""

    k: np.ndarray

    def __post_init__(self):
        k = np.array(self.k, dtype=np.float64, copy=True)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise ParameterError(f"Kernel must be square, got shape {k.shape}")
        if np.any(np.diag(k) != 0.0):
            raise ParameterError("Kernel diagonal must vanish")
        k.setflags(write=False)
        object.__setattr__(self, "k", k)


@dataclass(frozen=True, eq=False)
class MarkovGenerator:
    """Generator K of dp/dτ = K p, with its conservation diagnostics."""

    K: np.ndarray
    mode: str
    column_sum_defect: float
    warning: Optional[str] = None

    @property
    def conserves_probability(self) -> bool:
        return self.warning is None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "K": np.asarray(self.K, dtype=float).tolist(),
            "column_sum_defect": self.column_sum_defect,
            "warning": self.warning,
        }


@dataclass(frozen=True)
class PauliCoordinates:
    """x₀ I + x·σ."""

    x0: float
    x1: float
    x2: float
    x3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3], dtype=np.float64)


@dataclass(frozen=True)
class OscillatorTruncation:
    """Levels 0..N−1 of the oscillator."""

    N: int

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise ParameterError(f"Oscillator truncation needs N >= 2, got {self.N!r}")


@dataclass(frozen=True, eq=False)
class FrameChange:
    """Unitary U implementing Φ(A) = U A U†."""

    U: np.ndarray
    tol: Optional[float] = None

    def __post_init__(self):
        U = np.array(self.U, dtype=np.complex128, copy=True)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ParameterError(f"Frame unitary must be square, got shape {U.shape}")
        tol = get_config().numerics.unitary_tol if self.tol is None else self.tol
        defect = float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))
        if defect > tol:
            raise ParameterError(f"Frame matrix is not unitary: max |U†U - I| = {defect:.3e}")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)

    @property
    def dim(self) -> int:
        return self.U.shape[0]


__all__ = [
    "GROUPOID_KINDS",
    "Transition",
    "GroupoidSpec",
    "FiniteGroupoid",
    "AlgebraElement",
    "Operator",
    "State",
    "Hamiltonian",
    "DensityMatrix",
    "GnsData",
    "ClassicalObservable",
    "Kernel",
    "MarkovGenerator",
    "PauliCoordinates",
    "OscillatorTruncation",
    "FrameChange",
    "complex_pairs",
    "hermiticity_defect",
    "require_same_groupoid",
]
