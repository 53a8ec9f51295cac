"""The *-algebra F(G) of amplitudes under convolution.

(f⋆g)(γ) = Σ_{α∘β=γ} f(α) g(β), f*(γ) = conj(f(γ⁻¹)), unit = indicator of the
unit transitions.
"""

from __future__ import annotations

import logging
from numbers import Number
from typing import Any, Optional

import numpy as np

from groupoid_qm.domain.models import AlgebraElement, FiniteGroupoid, require_same_groupoid
from groupoid_qm.errors import ParameterError
from groupoid_qm.services.groupoid_core import isotropy_group, sprays

logger = logging.getLogger(__name__)

# Constructor-built kinds whose tables are known to satisfy the axioms and to
# have at most one transition per (target, source).
_MATRIX_KINDS = ("pair", "graph")

CONVOLUTION_METHODS = ("auto", "table", "matrix")


def element(g: FiniteGroupoid, coeffs: Any) -> AlgebraElement:
    return AlgebraElement(g, coeffs)


def zero(g: FiniteGroupoid) -> AlgebraElement:
    return AlgebraElement(g, np.zeros(g.n_transitions, dtype=np.complex128))


def delta(g: FiniteGroupoid, alpha: int) -> AlgebraElement:
    coeffs = np.zeros(g.n_transitions, dtype=np.complex128)
    coeffs[g.check_transition(alpha)] = 1.0
    return AlgebraElement(g, coeffs)


def unit(g: FiniteGroupoid) -> AlgebraElement:
    coeffs = np.zeros(g.n_transitions, dtype=np.complex128)
    coeffs[g.unit_of] = 1.0
    return AlgebraElement(g, coeffs)


def _indicator(g: FiniteGroupoid, members) -> AlgebraElement:
    coeffs = np.zeros(g.n_transitions, dtype=np.complex128)
    coeffs[list(members)] = 1.0
    return AlgebraElement(g, coeffs)


def distinguished(g: FiniteGroupoid, which: str, arg: Optional[int] = None) -> AlgebraElement:
    """
    Named indicator elements.

    Args:
        which: "incidence", "char_isotropy", "char_spray_plus",
            "char_spray_minus" or "delta".
        arg: Event id for the characteristic elements, transition id for delta.

    Raises:
        ParameterError: Unknown name or missing argument.
        RangeError: Invalid event or transition id.
    """
    if which == "incidence":
        return _indicator(g, range(g.n_transitions))
    if arg is None:
        raise ParameterError(f"distinguished element {which!r} needs an argument")
    if which == "delta":
        return delta(g, arg)
    if which == "char_isotropy":
        return _indicator(g, isotropy_group(g, arg))
    if which == "char_spray_plus":
        return _indicator(g, sprays(g, arg)[0])
    if which == "char_spray_minus":
        return _indicator(g, sprays(g, arg)[1])
    raise ParameterError(
        f"Unknown distinguished element: {which!r}. Must be one of "
        "incidence, char_isotropy, char_spray_plus, char_spray_minus, delta."
    )


def coefficient_matrix(f: AlgebraElement) -> np.ndarray:
    """F[t(α), s(α)] = f(α); only meaningful on principal groupoids."""
    g = f.groupoid
    matrix = np.zeros((g.n_events, g.n_events), dtype=np.complex128)
    matrix[g.targets, g.sources] = f.coeffs
    return matrix


def _convolve_table(f: AlgebraElement, h: AlgebraElement) -> np.ndarray:
    beta, alpha, result = f.groupoid.composable
    out = np.zeros(f.groupoid.n_transitions, dtype=np.complex128)
    np.add.at(out, result, f.coeffs[beta] * h.coeffs[alpha])
    return out


def _convolve_matrix(f: AlgebraElement, h: AlgebraElement) -> np.ndarray:
    g = f.groupoid
    product = coefficient_matrix(f) @ coefficient_matrix(h)
    return product[g.targets, g.sources]


def convolve(f: AlgebraElement, h: AlgebraElement, method: str = "auto") -> AlgebraElement:
    """
    Convolution product f⋆h.

    Args:
        method: "table" sums over the composition table, "matrix" multiplies
            coefficient matrices (pair and graph groupoids only), "auto" picks
            the matrix path when it applies.

    Raises:
        BindingError: If f and h live on different groupoids.
        ParameterError: Unknown method, or matrix path on an unsupported groupoid.
    """
    g = require_same_groupoid(f, h)
    if method not in CONVOLUTION_METHODS:
        raise ParameterError(f"Unknown convolution method: {method!r}")
    matrix_ok = g.kind in _MATRIX_KINDS
    if method == "matrix" and not matrix_ok:
        raise ParameterError(f"Matrix convolution needs a pair or graph groupoid, got {g.kind}")
    if method == "matrix" or (method == "auto" and matrix_ok):
        return AlgebraElement(g, _convolve_matrix(f, h))
    return AlgebraElement(g, _convolve_table(f, h))


def involution(f: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(f.groupoid, np.conj(f.coeffs[f.groupoid.inverse_of]))


def pairing(f: AlgebraElement, x: AlgebraElement) -> complex:
    """⟨f, 𝛂⟩ = Σ_α f(α) c_α for 𝛂 = Σ_α c_α α (bilinear, no conjugation)."""
    require_same_groupoid(f, x)
    return complex(np.dot(f.coeffs, x.coeffs))


def add(f: AlgebraElement, h: AlgebraElement) -> AlgebraElement:
    return f + h


def scale(f: AlgebraElement, c: Number) -> AlgebraElement:
    return complex(c) * f


def commutator(f: AlgebraElement, h: AlgebraElement) -> AlgebraElement:
    """[f, h] = f⋆h − h⋆f."""
    return convolve(f, h) - convolve(h, f)


def left_multiplication_matrix(f: AlgebraElement) -> np.ndarray:
    """Matrix L_f on coefficient space with L_f c = coeffs of f⋆c."""
    g = f.groupoid
    beta, alpha, result = g.composable
    matrix = np.zeros((g.n_transitions, g.n_transitions), dtype=np.complex128)
    np.add.at(matrix, (result, alpha), f.coeffs[beta])
    return matrix


def right_multiplication_matrix(f: AlgebraElement) -> np.ndarray:
    """Matrix R_f on coefficient space with R_f c = coeffs of c⋆f."""
    g = f.groupoid
    beta, alpha, result = g.composable
    matrix = np.zeros((g.n_transitions, g.n_transitions), dtype=np.complex128)
    np.add.at(matrix, (result, beta), f.coeffs[alpha])
    return matrix


__all__ = [
    "CONVOLUTION_METHODS",
    "element",
    "zero",
    "delta",
    "unit",
    "distinguished",
    "coefficient_matrix",
    "convolve",
    "involution",
    "pairing",
    "add",
    "scale",
    "commutator",
    "left_multiplication_matrix",
    "right_multiplication_matrix",
]
