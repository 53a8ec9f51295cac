"""The extended singleton: a qubit as the pair groupoid on {+, −}.

Transitions in storage order: 1₊, 1₋, α: + → −, α⁻¹: − → +. An observable
reads f(1₊) = x₀ + x₃, f(1₋) = x₀ − x₃, f(α) = x₁ + ix₂, f(α⁻¹) = x₁ − ix₂,
so that π(f) = x₀ I + x·σ.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from config import get_config
from groupoid_qm.domain.models import (
    AlgebraElement,
    FiniteGroupoid,
    Hamiltonian,
    PauliCoordinates,
    Transition,
    hermiticity_defect,
)
from groupoid_qm.errors import PreconditionError
from groupoid_qm.services.algebra import convolve, delta
from groupoid_qm.services.groupoid_core import build_pair_groupoid

PLUS, MINUS = 0, 1
UNIT_PLUS, UNIT_MINUS, ALPHA, ALPHA_INV = 0, 1, 2, 3

EVENT_LABELS = ("+", "-")
TRANSITION_LABELS = ("1+", "1-", "alpha", "alpha^-1")

SIGMA = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)

# (i, j, k): e_i e_j = e_k, read left to right (δ_{e_j} ⋆ δ_{e_i} = δ_{e_k}); None is 0
STRUCTURE_RELATIONS: Tuple[Tuple[int, int, Optional[int]], ...] = (
    (UNIT_PLUS, UNIT_PLUS, UNIT_PLUS),
    (UNIT_MINUS, UNIT_MINUS, UNIT_MINUS),
    (UNIT_PLUS, UNIT_MINUS, None),
    (ALPHA, ALPHA_INV, UNIT_PLUS),
    (ALPHA_INV, ALPHA, UNIT_MINUS),
    (ALPHA, ALPHA, None),
    (ALPHA_INV, ALPHA_INV, None),
    (UNIT_PLUS, ALPHA, ALPHA),
    (ALPHA_INV, UNIT_PLUS, ALPHA_INV),
    (UNIT_PLUS, ALPHA_INV, None),
    (ALPHA, UNIT_MINUS, ALPHA),
    (UNIT_MINUS, ALPHA, None),
)


def qubit() -> FiniteGroupoid:
    base = build_pair_groupoid(2)
    transitions = tuple(
        Transition(source=t.source, target=t.target, label=label)
        for t, label in zip(base.transitions, TRANSITION_LABELS)
    )
    return FiniteGroupoid(
        events=EVENT_LABELS,
        transitions=transitions,
        unit_of=base.unit_of,
        inverse_of=base.inverse_of,
        compose_table=base.compose_table,
        kind=base.kind,
        spec=base.spec,
    )


def structure_product(g: FiniteGroupoid, i: int, j: int) -> AlgebraElement:
    """e_i e_j in left-to-right order."""
    return convolve(delta(g, j), delta(g, i))


def structure_relations_hold(g: FiniteGroupoid) -> List[bool]:
    results = []
    for i, j, k in STRUCTURE_RELATIONS:
        expected = np.zeros(g.n_transitions, dtype=np.complex128)
        if k is not None:
            expected[k] = 1.0
        results.append(bool(np.array_equal(structure_product(g, i, j).coeffs, expected)))
    return results


def pauli_matrix(x: PauliCoordinates) -> np.ndarray:
    return sum(c * sigma for c, sigma in zip(x.as_array(), SIGMA))


def pauli_compose(x: PauliCoordinates, g: Optional[FiniteGroupoid] = None) -> AlgebraElement:
    g = g or qubit()
    coeffs = np.array(
        [x.x0 + x.x3, x.x0 - x.x3, x.x1 + 1j * x.x2, x.x1 - 1j * x.x2],
        dtype=np.complex128,
    )
    return AlgebraElement(g, coeffs)


def pauli_decompose(f: AlgebraElement, tol: Optional[float] = None) -> PauliCoordinates:
    """
    Raises:
        PreconditionError: If f is not an observable.
    """
    if tol is None:
        tol = get_config().numerics.observable_tol
    defect = hermiticity_defect(f)
    if defect > tol:
        raise PreconditionError(f"pauli_decompose needs an observable (max |f - f*| = {defect:.3e})")
    plus, minus, alpha = f.coeffs[UNIT_PLUS], f.coeffs[UNIT_MINUS], f.coeffs[ALPHA]
    return PauliCoordinates(
        x0=float((plus + minus).real / 2),
        x1=float(alpha.real),
        x2=float(alpha.imag),
        x3=float((plus - minus).real / 2),
    )


@dataclass(frozen=True)
class QubitAmplitudes:
    """(f₊, f₋, f_α, f_{α⁻¹}) of a not necessarily real amplitude."""

    plus: complex
    minus: complex
    alpha: complex
    alpha_inv: complex

    @classmethod
    def from_element(cls, f: AlgebraElement) -> "QubitAmplitudes":
        return cls(*(complex(c) for c in f.coeffs))

    def to_element(self, g: Optional[FiniteGroupoid] = None) -> AlgebraElement:
        return AlgebraElement(g or qubit(), [self.plus, self.minus, self.alpha, self.alpha_inv])


def qubit_eom_rhs(
    h: PauliCoordinates, f: Union[QubitAmplitudes, AlgebraElement]
) -> Tuple[complex, complex, complex, complex]:
    """
    (ḟ₊, ḟ₋, ḟ_α, ḟ_{α⁻¹}) for df/dt = i[f, h], with h_z = h₁ + ih₂.
    """
    if isinstance(f, AlgebraElement):
        f = QubitAmplitudes.from_element(f)
    hz = complex(h.x1, h.x2)
    h3 = h.x3
    return (
        1j * (f.alpha_inv * hz - hz.conjugate() * f.alpha),
        1j * (hz.conjugate() * f.alpha - f.alpha_inv * hz),
        1j * ((f.minus - f.plus) * hz + 2 * h3 * f.alpha),
        1j * ((f.plus - f.minus) * hz.conjugate() - 2 * h3 * f.alpha_inv),
    )


def qubit_hamiltonian(h: PauliCoordinates, g: Optional[FiniteGroupoid] = None) -> Hamiltonian:
    return Hamiltonian(pauli_compose(h, g))


def qubit_decay_hamiltonian(gamma: float, epsilon: float = 1.0, g: Optional[FiniteGroupoid] = None) -> Hamiltonian:
    """h_ε = i εγ/2 (δ_α − δ_{α⁻¹}); π(h_ε) = (εγ/2) σ₂."""
    g = g or qubit()
    coeffs = np.zeros(4, dtype=np.complex128)
    coeffs[ALPHA] = 0.5j * epsilon * gamma
    coeffs[ALPHA_INV] = -0.5j * epsilon * gamma
    return Hamiltonian(AlgebraElement(g, coeffs))


__all__ = [
    "PLUS",
    "MINUS",
    "UNIT_PLUS",
    "UNIT_MINUS",
    "ALPHA",
    "ALPHA_INV",
    "SIGMA",
    "STRUCTURE_RELATIONS",
    "qubit",
    "structure_product",
    "structure_relations_hold",
    "pauli_matrix",
    "pauli_compose",
    "pauli_decompose",
    "QubitAmplitudes",
    "qubit_eom_rhs",
    "qubit_hamiltonian",
    "qubit_decay_hamiltonian",
]
