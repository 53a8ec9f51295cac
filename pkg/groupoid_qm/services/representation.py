"""Fundamental representation π on the event Hilbert space.

π(f)|a⟩ = Σ_α f(α) δ(s(α), a) |t(α)⟩, so entry (a′, a) of π(f) sums f over the
transitions a → a′.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from config import get_config
from groupoid_qm.domain.models import (
    AlgebraElement,
    FiniteGroupoid,
    Operator,
    hermiticity_defect,
)
from groupoid_qm.domain.reports import NormReport
from groupoid_qm.errors import ParameterError, PreconditionError
from groupoid_qm.services.groupoid_core import hom_set, isotropy_group

logger = logging.getLogger(__name__)

NORM_METHOD = "largest singular value (Gram eigen-decomposition)"


def fundamental_rep(f: AlgebraElement) -> Operator:
    g = f.groupoid
    matrix = np.zeros((g.n_events, g.n_events), dtype=np.complex128)
    np.add.at(matrix, (g.targets, g.sources), f.coeffs)
    return Operator(matrix)


def amplitude(f: AlgebraElement, a: int, a_prime: int) -> complex:
    """⟨a′|π(f)|a⟩ = Σ_{α: a→a′} f(α)."""
    return complex(f.coeffs[hom_set(f.groupoid, a, a_prime)].sum())


def expected_value(f: AlgebraElement, a: int) -> complex:
    """⟨f⟩_a = Σ_{α∈G_a} f(α)."""
    return complex(f.coeffs[isotropy_group(f.groupoid, a)].sum())


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value via the eigenvalues of the Gram matrix AᴴA."""
    gram = matrix.conj().T @ matrix
    largest = float(np.linalg.eigvalsh(0.5 * (gram + gram.conj().T)).max())
    return float(np.sqrt(max(largest, 0.0)))


def cstar_norm(f: AlgebraElement) -> NormReport:
    """
    ‖f‖ = ‖π(f)‖.

    On groupoids with nontrivial isotropy π is not faithful and the value is
    only a seminorm; the report says so.
    """
    value = operator_norm(fundamental_rep(f).entries)
    if f.groupoid.is_principal:
        return NormReport(value=value, method=NORM_METHOD, faithful=True)
    logger.warning("cstar_norm on a groupoid with isotropy: reporting the seminorm induced by π")
    return NormReport(
        value=value,
        method=f"{NORM_METHOD}; seminorm, fundamental representation not faithful",
        faithful=False,
    )


def is_observable(f: AlgebraElement, tol: Optional[float] = None) -> bool:
    """True iff max |f − f*| ≤ tol."""
    if tol is None:
        tol = get_config().numerics.observable_tol
    if tol < 0:
        raise ParameterError(f"tol must be >= 0, got {tol}")
    return hermiticity_defect(f) <= tol


def element_from_matrix(g: FiniteGroupoid, matrix: np.ndarray, tol: Optional[float] = None) -> AlgebraElement:
    """
    Inverse of π on a principal groupoid.

    Raises:
        PreconditionError: If π is not injective on g, or the matrix has
            weight on an entry with no transition behind it.
    """
    if not g.is_principal:
        raise PreconditionError("π is not injective on groupoids with nontrivial isotropy")
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (g.n_events, g.n_events):
        raise PreconditionError(f"Expected a {g.n_events}x{g.n_events} matrix, got {matrix.shape}")
    if tol is None:
        tol = get_config().numerics.atol
    outside = np.ones(matrix.shape, dtype=bool)
    outside[g.targets, g.sources] = False
    if outside.any():
        leak = float(np.max(np.abs(matrix[outside])))
        scale = max(1.0, float(np.max(np.abs(matrix))))
        if leak > tol * scale:
            raise PreconditionError(f"Matrix has weight {leak:.3e} outside the groupoid's support")
    return AlgebraElement(g, matrix[g.targets, g.sources])


__all__ = [
    "NORM_METHOD",
    "fundamental_rep",
    "amplitude",
    "expected_value",
    "operator_norm",
    "cstar_norm",
    "is_observable",
    "element_from_matrix",
]
