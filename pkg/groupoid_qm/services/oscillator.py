"""N-level truncation of the harmonic oscillator on the pair groupoid of levels.

Transition (n, m) runs m → n. The ladder function a lives on (n, n + 1) with
value √(n+1). Truncation breaks [a, a*] = 1 at the top level only:
[a, a*] has coefficient 1 on 1_n for n ≤ N−2 and −(N−1) on 1_{N−1}.
"""

from __future__ import annotations

from typing import Optional, Tuple, Union

import numpy as np

from groupoid_qm.domain.models import AlgebraElement, FiniteGroupoid, Hamiltonian, OscillatorTruncation
from groupoid_qm.services.algebra import involution, unit
from groupoid_qm.services.groupoid_core import build_pair_groupoid, hom_set

Levels = Union[int, OscillatorTruncation]


def _levels(N: Levels) -> int:
    if isinstance(N, OscillatorTruncation):
        return N.N
    return OscillatorTruncation(N).N


def oscillator(N: Levels) -> FiniteGroupoid:
    """
    Raises:
        ParameterError: If N < 2.
    """
    return build_pair_groupoid(_levels(N))


def _on_groupoid(N: Levels, g: Optional[FiniteGroupoid] = None) -> FiniteGroupoid:
    levels = _levels(N)
    return oscillator(levels) if g is None else g


def ladder(N: Levels, g: Optional[FiniteGroupoid] = None) -> Tuple[AlgebraElement, AlgebraElement]:
    """(a, a*) with a(n, n+1) = √(n+1), so π(a)|n+1⟩ = √(n+1)|n⟩."""
    g = _on_groupoid(N, g)
    coeffs = np.zeros(g.n_transitions, dtype=np.complex128)
    for n in range(g.n_events - 1):
        (lowering,) = hom_set(g, n + 1, n)
        coeffs[lowering] = np.sqrt(n + 1)
    a = AlgebraElement(g, coeffs)
    return a, involution(a)


def number_element(N: Levels, g: Optional[FiniteGroupoid] = None) -> AlgebraElement:
    """Σ_n n δ_{1_n}; equals a*⋆a up to rounding."""
    g = _on_groupoid(N, g)
    coeffs = np.zeros(g.n_transitions, dtype=np.complex128)
    coeffs[g.unit_of] = np.arange(g.n_events)
    return AlgebraElement(g, coeffs)


def oscillator_hamiltonian(
    N: Levels,
    omega: float = 1.0,
    f: complex = 0.0,
    beta: float = 0.5,
    g: Optional[FiniteGroupoid] = None,
) -> Hamiltonian:
    """
    h = ω a*⋆a + f a* + f̄ a + β.

    The number term is built on the diagonal directly, so with f = 0 the
    spectrum of π(h) is exactly {ωn + β}.
    """
    g = _on_groupoid(N, g)
    a, a_star = ladder(N, g)
    f = complex(f)
    h = float(omega) * number_element(N, g) + f * a_star + f.conjugate() * a + float(beta) * unit(g)
    return Hamiltonian(h)


def position_momentum(N: Levels, g: Optional[FiniteGroupoid] = None) -> Tuple[AlgebraElement, AlgebraElement]:
    """q = (a + a*)/√2 and p = i(a* − a)/√2, giving [q, p] = i on the interior."""
    a, a_star = ladder(N, g)
    root = np.sqrt(2.0)
    q = (1.0 / root) * (a + a_star)
    p = (1j / root) * (a_star - a)
    return q, p


__all__ = [
    "oscillator",
    "ladder",
    "number_element",
    "oscillator_hamiltonian",
    "position_momentum",
]
