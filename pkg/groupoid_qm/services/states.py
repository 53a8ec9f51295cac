"""States on F(G), the GNS construction and the isotropy action.

A state is stored as weights w with ρ(f) = Σ_α w(α) f(α). Its Gram matrix
M_{αβ} = ρ(δ_α* ⋆ δ_β) = w(α⁻¹∘β) (zero when t(α) ≠ t(β)) carries positivity
and the GNS quotient.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from config import get_config
from groupoid_qm.domain.models import (
    AlgebraElement,
    DensityMatrix,
    FiniteGroupoid,
    GnsData,
    Operator,
    State,
    require_same_groupoid,
)
from groupoid_qm.domain.reports import StateCheck
from groupoid_qm.errors import ParameterError, PreconditionError
from groupoid_qm.services.algebra import delta, unit
from groupoid_qm.services.groupoid_core import (
    hom_set,
    isotropy_group,
    require_connected,
    sprays,
)

logger = logging.getLogger(__name__)


def rho_event(g: FiniteGroupoid, a: int) -> State:
    """ρ_a(f) = f(1_a)."""
    coeffs = np.zeros(g.n_transitions, dtype=np.complex128)
    coeffs[g.unit_of[g.check_event(a)]] = 1.0
    return State(g, coeffs)


def rho_inner(g: FiniteGroupoid, a: int) -> State:
    """
    ρ_a^inner(f) = (1/|G_a|) Σ_{α∈G_a} f(α), the mean of f over the isotropy group.

    Positive, but ρ(1) = 1/|G_a|; `normalize` turns it into a state.
    """
    isotropy = isotropy_group(g, a)
    coeffs = np.zeros(g.n_transitions, dtype=np.complex128)
    coeffs[isotropy] = 1.0 / len(isotropy)
    return State(g, coeffs)


def evaluate(rho: State, f: AlgebraElement) -> complex:
    return rho(f)


def gram_matrix(rho: State) -> np.ndarray:
    """M_{αβ} = ρ(δ_α* ⋆ δ_β)."""
    g = rho.groupoid
    products = g.compose_table[g.inverse_of[:, None], np.arange(g.n_transitions)[None, :]]
    return np.where(products >= 0, rho.coeffs[np.maximum(products, 0)], 0.0)


def is_state(rho: State, tol: Optional[float] = None) -> StateCheck:
    """
    Check positivity of the Gram form and ρ(unit) = 1.

    Args:
        tol: Allowed negative eigenvalue of the Gram matrix; defaults to the
            configured psd_tol.
    """
    numerics = get_config().numerics
    if tol is None:
        tol = numerics.psd_tol
    if tol < 0:
        raise ParameterError(f"tol must be >= 0, got {tol}")
    gram = gram_matrix(rho)
    hermiticity = float(np.max(np.abs(gram - gram.conj().T))) if gram.size else 0.0
    min_eigenvalue = float(np.linalg.eigvalsh(0.5 * (gram + gram.conj().T)).min())
    normalization = abs(rho(unit(rho.groupoid)) - 1.0)
    positive = min_eigenvalue >= -tol and hermiticity <= tol
    return StateCheck(
        ok=bool(positive and normalization <= numerics.atol),
        min_eigenvalue=min_eigenvalue,
        normalization_defect=float(normalization),
        hermiticity_defect=hermiticity,
        positive=bool(positive),
    )


def normalize(rho: State) -> State:
    """
    ρ / ρ(1).

    Raises:
        PreconditionError: If ρ(1) is not a positive real number.
    """
    total = rho(unit(rho.groupoid))
    if abs(total.imag) > get_config().numerics.atol or total.real <= 0:
        raise PreconditionError(f"Cannot normalize a functional with ρ(1) = {total:.3g}")
    return State(rho.groupoid, rho.coeffs / total.real)


def convex_mix(states: Sequence[State], weights: Sequence[float]) -> State:
    """
    Σ_i p_i ρ_i for probability weights p.

    Raises:
        ParameterError: If the weights are not a probability vector.
    """
    if not states or len(states) != len(weights):
        raise ParameterError("convex_mix needs one weight per state")
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > get_config().numerics.atol:
        raise ParameterError(f"Mixing weights must be nonnegative and sum to 1, got {weights.tolist()}")
    g = require_same_groupoid(*states)
    return State(g, sum(p * rho.coeffs for p, rho in zip(weights, states)))


def state_pushforward(phi: Callable[[AlgebraElement], AlgebraElement], rho: State) -> State:
    """Dual action Φ*(ρ)(f) = ρ(Φ(f)), evaluated on the δ basis."""
    g = rho.groupoid
    return State(g, [rho(phi(delta(g, alpha))) for alpha in range(g.n_transitions)])


def _require_pair(g: FiniteGroupoid, what: str) -> None:
    if not g.is_pair:
        raise PreconditionError(f"{what} needs a pair groupoid")


def state_from_density(g: FiniteGroupoid, density: DensityMatrix) -> State:
    """ρ(f) = Tr(ρ̂ π(f)), i.e. w(α) = ρ̂[s(α), t(α)]."""
    _require_pair(g, "state_from_density")
    if density.dim != g.n_events:
        raise PreconditionError(f"Density matrix dimension {density.dim} != {g.n_events} events")
    return State(g, density.entries[g.sources, g.targets])


def density_from_state(rho: State) -> DensityMatrix:
    g = rho.groupoid
    _require_pair(g, "density_from_state")
    entries = np.zeros((g.n_events, g.n_events), dtype=np.complex128)
    entries[g.sources, g.targets] = rho.coeffs
    return DensityMatrix(entries)


def gns_construct(rho: State, tol: Optional[float] = None) -> GnsData:
    """
    GNS quotient of F(G) by the Gelfand ideal J_ρ = {f | ρ(f*⋆f) = 0}.

    Gram eigenvalues at or below null_space_rtol × (largest eigenvalue) span
    the ideal. Quotient coordinates are q = V_rᴴ c with inner product
    diag(nonzero eigenvalues).

    Positive functionals with ρ(1) ≠ 1 are accepted; the cyclic vector then
    has squared norm ρ(1).

    Raises:
        PreconditionError: If rho is not positive.
    """
    check = is_state(rho, tol)
    if not check.positive:
        raise PreconditionError(
            "gns_construct needs a positive functional: "
            f"min Gram eigenvalue {check.min_eigenvalue:.3e}, "
            f"hermiticity defect {check.hermiticity_defect:.3e}"
        )
    if not check.ok:
        logger.info(
            "GNS construction on an unnormalized functional (|ρ(1) - 1| = %.3e)",
            check.normalization_defect,
        )
    gram = gram_matrix(rho)
    eigenvalues, eigenvectors = linalg.eigh(0.5 * (gram + gram.conj().T))
    largest = float(np.max(np.abs(eigenvalues)))
    keep = eigenvalues > get_config().numerics.null_space_rtol * largest

    range_basis = eigenvectors[:, keep]
    quotient_map = range_basis.conj().T
    data = GnsData(
        state=rho,
        dim=int(keep.sum()),
        ideal_basis=eigenvectors[:, ~keep],
        range_basis=range_basis,
        quotient_map=quotient_map,
        inner_product=np.diag(eigenvalues[keep]).astype(np.complex128),
        cyclic_vector=quotient_map @ unit(rho.groupoid).coeffs,
    )
    logger.debug("GNS construction: dim %d, ideal rank %d", data.dim, data.ideal_basis.shape[1])
    return data


def orthonormal_rep(gns: GnsData, f: AlgebraElement) -> Operator:
    """π_ρ(f) in coordinates where the quotient inner product is the identity."""
    root = np.sqrt(np.diag(gns.inner_product).real)
    return Operator((root[:, None] * gns.rep(f).entries) / root[None, :])


def gns_intertwiner(gns: GnsData, a: int) -> np.ndarray:
    """
    Unitary U with U π_ρ(f) U† = π(f) for ρ = ρ_a on a pair groupoid.

    U is expressed against `orthonormal_rep`; row a′ is the orthonormal
    coordinate vector of δ_{(a′, a)} + J_ρ.
    """
    g = gns.state.groupoid
    _require_pair(g, "gns_intertwiner")
    if not np.allclose(gns.state.coeffs, rho_event(g, a).coeffs):
        raise PreconditionError(f"gns_intertwiner applies to the state ρ_{a}")
    root = np.sqrt(np.diag(gns.inner_product).real)
    rows = []
    for a_prime in range(g.n_events):
        (beta,) = hom_set(g, a, a_prime)
        rows.append(root * (gns.quotient_map @ delta(g, beta).coeffs))
    return np.conj(np.array(rows))


def isotropy_action(g: FiniteGroupoid, a: int) -> Dict[int, Operator]:
    """
    [μ_a(γ)ψ](α) = ψ(α∘γ) on functions over G₊(a), basis in G₊(a) order.

    μ(γ)μ(γ′) = μ(γ∘γ′).
    """
    plus, _ = sprays(g, a)
    position = {alpha: i for i, alpha in enumerate(plus)}
    action: Dict[int, Operator] = {}
    for gamma in isotropy_group(g, a):
        matrix = np.zeros((len(plus), len(plus)), dtype=np.complex128)
        for i, alpha in enumerate(plus):
            matrix[i, position[int(g.compose_table[alpha, gamma])]] = 1.0
        action[gamma] = Operator(matrix)
    return action


def trivial_component_projector(g: FiniteGroupoid, a: int) -> Operator:
    """P = (1/|G_a|) Σ_γ μ_a(γ), the projector onto G_a-invariant functions."""
    action = isotropy_action(g, a)
    return Operator(sum(op.entries for op in action.values()) / len(action))


def theorem1_isometry(
    g: FiniteGroupoid, a: int, phi: Sequence[complex], psi: Sequence[complex]
) -> Tuple[complex, complex]:
    """
    Compare the ρ_a inner product of G_a-averaged functions with the event-space
    inner product of their projections to Ω.

    ψ̃(α) = (1/√|G_a|) Σ_γ ψ(α∘γ); the projection sends ψ̃ to
    a′ ↦ (1/√|G_a|) Σ_{α: a→a′} ψ̃(α).

    Returns:
        (lhs, rhs)

    Raises:
        ComponentError: If g is not connected.
        ParameterError: If phi or psi are not functions on G₊(a).
    """
    require_connected(g)
    plus, _ = sprays(g, a)
    phi = np.asarray(phi, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128)
    for name, values in (("phi", phi), ("psi", psi)):
        if values.shape != (len(plus),):
            raise ParameterError(f"{name} must have one value per transition in G₊({a}) ({len(plus)})")

    action = isotropy_action(g, a)
    order = len(action)
    averaging = sum(op.entries for op in action.values()) / np.sqrt(order)
    phi_avg = averaging @ phi
    psi_avg = averaging @ psi
    lhs = complex(np.vdot(phi_avg, psi_avg))

    targets = g.targets[plus]
    phi_events = np.zeros(g.n_events, dtype=np.complex128)
    psi_events = np.zeros(g.n_events, dtype=np.complex128)
    np.add.at(phi_events, targets, phi_avg / np.sqrt(order))
    np.add.at(psi_events, targets, psi_avg / np.sqrt(order))
    rhs = complex(np.vdot(phi_events, psi_events))
    return lhs, rhs


__all__ = [
    "rho_event",
    "rho_inner",
    "evaluate",
    "gram_matrix",
    "is_state",
    "normalize",
    "convex_mix",
    "state_pushforward",
    "state_from_density",
    "density_from_state",
    "gns_construct",
    "orthonormal_rep",
    "gns_intertwiner",
    "isotropy_action",
    "trivial_component_projector",
    "theorem1_isometry",
]
