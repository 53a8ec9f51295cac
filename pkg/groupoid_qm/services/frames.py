"""Frame changes and compound selective measurements on pair groupoids.

A frame change is Φ(f) = π⁻¹(U π(f) U†). Selective measurements M(a′, b′)
compose by M(a′, b′) M(c′, d′) = ⟨b′|c′⟩ M(a′, d′), where the overlap is read
off the frame unitaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from groupoid_qm.domain.models import AlgebraElement, FiniteGroupoid, FrameChange
from groupoid_qm.domain.reports import CompoundMeasurement
from groupoid_qm.errors import ParameterError, RangeError, UnsupportedFrameError
from groupoid_qm.services.algebra import delta
from groupoid_qm.services.representation import element_from_matrix, fundamental_rep

COMPUTATIONAL = "computational"
ROTATED = "rotated"
FRAMES = (COMPUTATIONAL, ROTATED)


def hadamard_frame() -> FrameChange:
    return FrameChange(np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0))


def _check_frame(tau: FrameChange, g: FiniteGroupoid) -> None:
    if not g.is_pair:
        raise UnsupportedFrameError(f"Frame changes need a pair groupoid, got a {g.kind} groupoid")
    if tau.dim != g.n_events:
        raise UnsupportedFrameError(f"Frame unitary is {tau.dim}x{tau.dim} but the groupoid has {g.n_events} events")


def frame_change(tau: FrameChange, f: AlgebraElement) -> AlgebraElement:
    """
    Raises:
        UnsupportedFrameError: If f does not live on a pair groupoid of matching size.
    """
    _check_frame(tau, f.groupoid)
    conjugated = tau.U @ fundamental_rep(f).entries @ tau.U.conj().T
    return element_from_matrix(f.groupoid, conjugated)


def expansion_coefficients(tau: FrameChange, g: FiniteGroupoid, beta: int) -> np.ndarray:
    """c(β, ·) with τ(β) = Σ_α c(β, α) α."""
    return frame_change(tau, delta(g, beta)).coeffs


def _check_events(tau: FrameChange, *events: int) -> None:
    for event in events:
        if not isinstance(event, (int, np.integer)) or not 0 <= event < tau.dim:
            raise RangeError(f"Event {event!r} out of range 0..{tau.dim - 1}")


def overlap(tau: FrameChange, b: int, b_frame: str, c: int, c_frame: str) -> complex:
    """⟨b|c⟩ between basis vectors of the computational frame and the U-rotated one."""
    _check_events(tau, b, c)
    for frame in (b_frame, c_frame):
        if frame not in FRAMES:
            raise ParameterError(f"Unknown frame: {frame!r}. Must be one of {', '.join(FRAMES)}")
    if b_frame == c_frame:
        return complex(b == c)
    if b_frame == COMPUTATIONAL:
        return complex(tau.U[b, c])
    return complex(np.conj(tau.U[c, b]))


@dataclass(frozen=True)
class SelectiveMeasurement:
    """weight · M(left, right), each end tagged with its frame."""

    left: int
    right: int
    left_frame: str = COMPUTATIONAL
    right_frame: str = COMPUTATIONAL
    weight: complex = 1.0


def compose_measurements(
    tau: FrameChange, first: SelectiveMeasurement, second: SelectiveMeasurement
) -> SelectiveMeasurement:
    """M(a′, b′) M(c′, d′) = ⟨b′|c′⟩ M(a′, d′)."""
    amplitude = overlap(tau, first.right, first.right_frame, second.left, second.left_frame)
    return SelectiveMeasurement(
        left=first.left,
        right=second.right,
        left_frame=first.left_frame,
        right_frame=second.right_frame,
        weight=complex(first.weight) * complex(second.weight) * amplitude,
    )


def compound_measurement(tau: FrameChange, a: int, b_prime: int, c_prime: int, d: int) -> CompoundMeasurement:
    """M(a, b′) in the computational frame followed by M(c′, d) in the rotated frame."""
    _check_events(tau, a, d)
    product = compose_measurements(
        tau,
        SelectiveMeasurement(a, b_prime, COMPUTATIONAL, COMPUTATIONAL),
        SelectiveMeasurement(c_prime, d, ROTATED, ROTATED),
    )
    return CompoundMeasurement(
        amplitude=product.weight,
        probability=float(abs(product.weight) ** 2),
        symbol=(product.left, product.right),
    )


__all__ = [
    "COMPUTATIONAL",
    "ROTATED",
    "FRAMES",
    "hadamard_frame",
    "frame_change",
    "expansion_coefficients",
    "overlap",
    "SelectiveMeasurement",
    "compose_measurements",
    "compound_measurement",
]
