"""Quantum-to-classical limit: kernels, Markov generators and classical evolution.

After rescaling time τ = εt, the first-order part h1 of a Hamiltonian h_ε
yields the kernel k(x, y) = −2 Σ_{α: x→y} Im h1(α) and the generator
K_ij = k_ij − δ_ij Σ_l k_il driving dp/dτ = K p.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from config import get_config
from groupoid_qm.domain.models import (
    AlgebraElement,
    ClassicalObservable,
    FiniteGroupoid,
    Kernel,
    MarkovGenerator,
)
from groupoid_qm.domain.reports import ClassicalSeries
from groupoid_qm.errors import BindingError, ParameterError, PreconditionError
from groupoid_qm.services.dynamics import check_time_grid

logger = logging.getLogger(__name__)

GENERATOR_MODES = ("paper_literal", "symmetric_rates")
EVOLUTION_KINDS = ("state", "observable")


def _non_unit_mask(g: FiniteGroupoid) -> np.ndarray:
    mask = np.ones(g.n_transitions, dtype=bool)
    mask[g.unit_of] = False
    return mask


def is_classical(f: AlgebraElement, tol: Optional[float] = None) -> bool:
    """True iff f is supported on the unit transitions (within tol)."""
    if tol is None:
        tol = get_config().numerics.atol
    if tol < 0:
        raise ParameterError(f"tol must be >= 0, got {tol}")
    off_units = f.coeffs[_non_unit_mask(f.groupoid)]
    return off_units.size == 0 or float(np.max(np.abs(off_units))) <= tol


def classical_element(g: FiniteGroupoid, values: Sequence[complex]) -> AlgebraElement:
    """Embed a function on events as Σ_a values[a] δ_{1_a}."""
    values = np.asarray(values, dtype=np.complex128).reshape(-1)
    if values.shape != (g.n_events,):
        raise ParameterError(f"Expected {g.n_events} event values, got {values.size}")
    coeffs = np.zeros(g.n_transitions, dtype=np.complex128)
    coeffs[g.unit_of] = values
    return AlgebraElement(g, coeffs)


def classical_restriction(f: AlgebraElement) -> ClassicalObservable:
    """Values of f on the units 1_a, in event order."""
    return ClassicalObservable(f.coeffs[f.groupoid.unit_of])


def kernel_from_hamiltonian(g: FiniteGroupoid, h1: AlgebraElement, tol: Optional[float] = None) -> Kernel:
    """
    k(x, y) = −2 Σ_{α: x→y} Im h1(α), zero diagonal.

    Raises:
        PreconditionError: If h1 has weight on a unit transition.
    """
    if h1.groupoid is not g and h1.groupoid.fingerprint != g.fingerprint:
        raise BindingError("h1 is bound to a different groupoid")
    if tol is None:
        tol = get_config().numerics.atol
    on_units = np.abs(h1.coeffs[g.unit_of])
    if on_units.size and float(on_units.max()) > tol:
        raise PreconditionError("h1 must vanish on unit transitions (first-order part lives off Ω)")

    k = np.zeros((g.n_events, g.n_events), dtype=np.float64)
    mask = _non_unit_mask(g)
    np.add.at(k, (g.sources[mask], g.targets[mask]), -2.0 * h1.coeffs[mask].imag)
    # isotropy loops carry no rate
    np.fill_diagonal(k, 0.0)
    return Kernel(k)


def markov_generator(kernel: Kernel, mode: str = "symmetric_rates") -> MarkovGenerator:
    """
    Assemble K_ij = r_ij − δ_ij Σ_l r_il.

    Args:
        mode: "paper_literal" uses r = k as given and reports any nonzero
            column sums; "symmetric_rates" uses r_ij = (|k_ij| + |k_ji|)/2,
            which equals |k| for kernels with |k_ij| = |k_ji| and always
            conserves probability.

    Raises:
        ParameterError: Unknown mode.
    """
    if mode not in GENERATOR_MODES:
        raise ParameterError(f"Unknown generator mode: {mode!r}. Must be one of {', '.join(GENERATOR_MODES)}")
    if mode == "symmetric_rates":
        magnitude = np.abs(kernel.k)
        rates = 0.5 * (magnitude + magnitude.T)
    else:
        rates = kernel.k.copy()

    generator = rates - np.diag(rates.sum(axis=1))
    defect = float(np.max(np.abs(generator.sum(axis=0)))) if generator.size else 0.0
    warning = None
    if defect > get_config().numerics.atol:
        warning = f"column sums do not vanish (max {defect:.3e}); total probability is not conserved"
        logger.warning("Markov generator (%s): %s", mode, warning)
    return MarkovGenerator(K=generator, mode=mode, column_sum_defect=defect, warning=warning)


def classical_evolve(
    generator: MarkovGenerator,
    p0: ClassicalObservable,
    t_grid: Sequence[float],
    kind: str = "state",
) -> ClassicalSeries:
    """
    p(τ) = exp((τ − τ₀)K) p0 on each grid point, with p0 the value at τ₀ = t_grid[0].

    Observables follow the same equation df/dτ = K f without the
    probability-vector precondition.

    Raises:
        PreconditionError: If a state is not a real probability vector.
        ParameterError: Unknown kind, mismatched sizes or a bad time grid.
    """
    if kind not in EVOLUTION_KINDS:
        raise ParameterError(f"Unknown evolution kind: {kind!r}")
    K = np.asarray(generator.K, dtype=np.float64)
    values = np.asarray(p0.values)
    if values.shape != (K.shape[0],):
        raise ParameterError(f"Initial vector has {values.size} entries, generator has {K.shape[0]}")
    if kind == "state":
        atol = get_config().numerics.atol
        if np.iscomplexobj(values):
            if np.any(np.abs(values.imag) > atol):
                raise PreconditionError(
                    f"Initial probabilities must be real, got max |Im p0| = {float(np.max(np.abs(values.imag))):.3e}"
                )
            values = values.real
        values = values.astype(np.float64)
        if np.any(values < -atol) or abs(values.sum() - 1.0) > atol:
            raise PreconditionError("Initial probabilities must be nonnegative and sum to 1")
    times = check_time_grid(t_grid)
    rows = [linalg.expm((tau - times[0]) * K) @ values for tau in times]
    return ClassicalSeries(times=times, values=np.array(rows), kind=kind)


def rescale_time(t: float, epsilon: float) -> float:
    """τ = εt."""
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be > 0, got {epsilon}")
    return epsilon * t


__all__ = [
    "GENERATOR_MODES",
    "EVOLUTION_KINDS",
    "is_classical",
    "classical_element",
    "classical_restriction",
    "kernel_from_hamiltonian",
    "markov_generator",
    "classical_evolve",
    "rescale_time",
]
