"""Closed-system dynamics generated by inner derivations.

Sign convention: df/dt = i[f, h], so in any faithful representation
A(t) = e^{−iHt} A e^{iHt}. Density matrices obey dρ̂/dt = i[ρ̂, H].
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy import linalg

from config import get_config
from groupoid_qm.domain.models import (
    AlgebraElement,
    DensityMatrix,
    FiniteGroupoid,
    Hamiltonian,
    Operator,
    State,
    require_same_groupoid,
)
from groupoid_qm.domain.reports import HeisenbergSeries, MapCheckReport
from groupoid_qm.errors import ParameterError, PreconditionError
from groupoid_qm.services.algebra import (
    convolve,
    involution,
    left_multiplication_matrix,
    right_multiplication_matrix,
    unit,
)
from groupoid_qm.services.representation import element_from_matrix, fundamental_rep

logger = logging.getLogger(__name__)


def check_time_grid(t_grid: Sequence[float]) -> np.ndarray:
    times = np.asarray(t_grid, dtype=np.float64).reshape(-1)
    if times.size == 0:
        raise ParameterError("Time grid must not be empty")
    if np.any(np.diff(times) <= 0):
        raise ParameterError("Time grid must be strictly increasing")
    return times


def derivation(h: Hamiltonian, f: AlgebraElement) -> AlgebraElement:
    """D_h f = i(f⋆h − h⋆f)."""
    require_same_groupoid(h, f)
    return 1j * (convolve(f, h.h) - convolve(h.h, f))


def derivation_matrix(h: Hamiltonian) -> np.ndarray:
    """D_h acting on coefficient space."""
    return 1j * (right_multiplication_matrix(h.h) - left_multiplication_matrix(h.h))


def flow_operator(h: Hamiltonian, t: float) -> np.ndarray:
    """Φ_t = exp(t D_h), by scaling and squaring with a Padé approximant."""
    return linalg.expm(float(t) * derivation_matrix(h))


def flow(h: Hamiltonian, t: float, f: AlgebraElement) -> AlgebraElement:
    require_same_groupoid(h, f)
    return AlgebraElement(f.groupoid, flow_operator(h, t) @ f.coeffs)


def flow_series(
    h: Hamiltonian, f: AlgebraElement, t_grid: Sequence[float], workers: Optional[int] = None
) -> HeisenbergSeries:
    """
    Flow evaluated at every grid point, measured from t_grid[0].

    Grid points are independent, so they are spread over a thread pool; the
    result order follows the grid.
    """
    require_same_groupoid(h, f)
    times = check_time_grid(t_grid)
    generator = derivation_matrix(h)
    workers = workers or get_config().runtime.flow_workers

    def at(t: float) -> np.ndarray:
        return linalg.expm((t - times[0]) * generator) @ f.coeffs

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(at, times))
    else:
        rows = [at(t) for t in times]
    return HeisenbergSeries(times=times, coeffs=np.array(rows), step=0.0, max_flow_deviation=0.0)


def conjugation_flow(h: Hamiltonian, t: float, f: AlgebraElement) -> AlgebraElement:
    """e^{−iHt} π(f) e^{iHt} pulled back through π (principal groupoids only)."""
    require_same_groupoid(h, f)
    hamiltonian = fundamental_rep(h.h).entries
    propagator = linalg.expm(-1j * float(t) * hamiltonian)
    conjugated = propagator @ fundamental_rep(f).entries @ propagator.conj().T
    return element_from_matrix(f.groupoid, conjugated, tol=1e-9)


def _rk4_step(generator: np.ndarray, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = generator @ y
    k2 = generator @ (y + 0.5 * dt * k1)
    k3 = generator @ (y + 0.5 * dt * k2)
    k4 = generator @ (y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def heisenberg_integrate(
    h: Hamiltonian,
    f0: AlgebraElement,
    t_grid: Sequence[float],
    step: Optional[float] = None,
    compare_with_flow: bool = True,
) -> HeisenbergSeries:
    """
    Integrate df/dt = i[f, h] with classical fixed-step RK4.

    f0 is the value at t_grid[0]. Each grid interval is split into equal
    substeps no longer than `step`.

    Returns:
        HeisenbergSeries; max_flow_deviation is the largest coefficient
        difference against the exact flow when compare_with_flow is set.
    """
    require_same_groupoid(h, f0)
    times = check_time_grid(t_grid)
    if step is None:
        step = get_config().numerics.rk4_step
    if step <= 0:
        raise ParameterError(f"step must be > 0, got {step}")

    generator = derivation_matrix(h)
    y = f0.coeffs.copy()
    rows: List[np.ndarray] = [y.copy()]
    for start, stop in zip(times[:-1], times[1:]):
        substeps = max(1, math.ceil((stop - start) / step - 1e-12))
        dt = (stop - start) / substeps
        for _ in range(substeps):
            y = _rk4_step(generator, y, dt)
        rows.append(y.copy())
    coeffs = np.array(rows)

    deviation = None
    if compare_with_flow:
        exact = np.array([linalg.expm((t - times[0]) * generator) @ f0.coeffs for t in times])
        deviation = float(np.max(np.abs(exact - coeffs)))
        logger.debug("RK4 vs flow: max deviation %.3e over %d grid points", deviation, times.size)
    return HeisenbergSeries(times=times, coeffs=coeffs, step=float(step), max_flow_deviation=deviation)


def _require_self_adjoint(H: Operator) -> None:
    defect = float(np.max(np.abs(H.entries - H.entries.conj().T)))
    if defect > get_config().numerics.observable_tol:
        raise PreconditionError(f"Hamiltonian operator is not self-adjoint (defect {defect:.3e})")


def density_rate(H: Operator, rho: DensityMatrix) -> np.ndarray:
    """dρ̂/dt = i[ρ̂, H]."""
    _require_self_adjoint(H)
    if H.dim != rho.dim:
        raise PreconditionError(f"Dimension mismatch: H is {H.dim}, ρ̂ is {rho.dim}")
    return 1j * (rho.entries @ H.entries - H.entries @ rho.entries)


def evolve_density(H: Operator, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """
    Landau–von Neumann evolution ρ̂(t) = e^{−iHt} ρ̂₀ e^{iHt}.

    Raises:
        PreconditionError: If H is not self-adjoint.
    """
    _require_self_adjoint(H)
    if H.dim != rho0.dim:
        raise PreconditionError(f"Dimension mismatch: H is {H.dim}, ρ̂ is {rho0.dim}")
    propagator = linalg.expm(-1j * float(t) * H.entries)
    evolved = propagator @ rho0.entries @ propagator.conj().T
    # rounding in e^{−iHt} grows with ‖H‖t; restore self-adjointness and unit trace
    evolved = 0.5 * (evolved + evolved.conj().T)
    trace = float(np.trace(evolved).real)
    if abs(trace - 1.0) > get_config().numerics.atol:
        logger.debug("evolve_density: trace drifted by %.3e at t=%g, renormalizing", trace - 1.0, t)
    return DensityMatrix(evolved / trace)


def evolve_state(h: Hamiltonian, t: float, rho: State) -> State:
    """Schrödinger-picture dual Φ_t*(ρ)(f) = ρ(Φ_t f)."""
    require_same_groupoid(h, rho)
    return State(rho.groupoid, flow_operator(h, t).T @ rho.coeffs)


def check_positive_normalized_map(
    phi: Callable[[AlgebraElement], AlgebraElement],
    g: FiniteGroupoid,
    samples: int,
    seed: int = 0,
    tol: Optional[float] = None,
) -> MapCheckReport:
    """
    Sample random f and test Φ(1) = 1 and π(Φ(f*⋆f)) ≥ 0.

    Returns:
        MapCheckReport with the worst normalization defect and the most
        negative (relative) eigenvalue seen.
    """
    if samples < 1:
        raise ParameterError(f"samples must be >= 1, got {samples}")
    numerics = get_config().numerics
    if tol is None:
        tol = numerics.psd_tol

    identity = unit(g)
    normalization = float(np.max(np.abs(phi(identity).coeffs - identity.coeffs)))

    rng = np.random.default_rng(seed)
    worst = np.inf
    worst_sample = None
    for index in range(samples):
        f = AlgebraElement(g, rng.normal(size=g.n_transitions) + 1j * rng.normal(size=g.n_transitions))
        image = fundamental_rep(phi(convolve(involution(f), f))).entries
        scale = max(1.0, float(np.max(np.abs(image))))
        eigenvalue = float(np.linalg.eigvalsh(0.5 * (image + image.conj().T)).min()) / scale
        if eigenvalue < worst:
            worst, worst_sample = eigenvalue, index

    ok = normalization <= numerics.atol and worst >= -tol
    if not ok:
        logger.info(
            "Map failed positivity/normalization check: defect %.3e, min eigenvalue %.3e",
            normalization,
            worst,
        )
    return MapCheckReport(
        ok=bool(ok),
        samples=samples,
        normalization_defect=normalization,
        min_eigenvalue=float(worst),
        worst_sample=worst_sample,
    )


__all__ = [
    "derivation",
    "derivation_matrix",
    "flow_operator",
    "flow",
    "flow_series",
    "check_time_grid",
    "conjugation_flow",
    "heisenberg_integrate",
    "density_rate",
    "evolve_density",
    "evolve_state",
    "check_positive_normalized_map",
]
