import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_qm.domain.models import PauliCoordinates
from groupoid_qm.errors import PreconditionError
from groupoid_qm.services.algebra import convolve, delta, element
from groupoid_qm.services.dynamics import derivation, flow
from groupoid_qm.services.qubit import (
    ALPHA,
    ALPHA_INV,
    SIGMA,
    STRUCTURE_RELATIONS,
    UNIT_MINUS,
    UNIT_PLUS,
    QubitAmplitudes,
    pauli_compose,
    pauli_decompose,
    pauli_matrix,
    qubit,
    qubit_decay_hamiltonian,
    qubit_eom_rhs,
    qubit_hamiltonian,
    structure_product,
    structure_relations_hold,
)
from groupoid_qm.services.representation import fundamental_rep

_coordinate = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
pauli_coordinates = st.builds(PauliCoordinates, _coordinate, _coordinate, _coordinate, _coordinate)


class TestStructure:
    def test_labels(self, qubit_groupoid):
        assert qubit_groupoid.events == ("+", "-")
        assert qubit_groupoid.transition_index("alpha") == ALPHA
        assert qubit_groupoid.transition_index("alpha^-1") == ALPHA_INV

    def test_all_relations_hold(self, qubit_groupoid):
        assert len(STRUCTURE_RELATIONS) == 12
        assert structure_relations_hold(qubit_groupoid) == [True] * 12

    def test_products_read_left_to_right(self, qubit_groupoid):
        assert structure_product(qubit_groupoid, ALPHA, ALPHA_INV).coeffs.tolist() == [1, 0, 0, 0]
        assert structure_product(qubit_groupoid, ALPHA_INV, ALPHA).coeffs.tolist() == [0, 1, 0, 0]
        assert structure_product(qubit_groupoid, UNIT_PLUS, ALPHA).coeffs.tolist() == [0, 0, 1, 0]
        assert not structure_product(qubit_groupoid, UNIT_MINUS, ALPHA).coeffs.any()

    def test_fingerprint_ignores_labels(self):
        from groupoid_qm.services.groupoid_core import build_pair_groupoid

        assert qubit().fingerprint == build_pair_groupoid(2).fingerprint


class TestPauli:
    def test_matrices_match_fundamental_rep(self, qubit_groupoid):
        for index, sigma in enumerate(SIGMA):
            x = PauliCoordinates(*np.eye(4)[index])
            np.testing.assert_array_equal(fundamental_rep(pauli_compose(x, qubit_groupoid)).entries, sigma)

    @settings(max_examples=50, deadline=None)
    @given(pauli_coordinates)
    def test_compose_then_decompose(self, x):
        f = pauli_compose(x)
        back = pauli_decompose(f)
        np.testing.assert_allclose(back.as_array(), x.as_array(), atol=1e-14)
        np.testing.assert_allclose(fundamental_rep(f).entries, pauli_matrix(x), atol=1e-14)

    def test_decompose_needs_an_observable(self, qubit_groupoid):
        with pytest.raises(PreconditionError):
            pauli_decompose(1j * delta(qubit_groupoid, UNIT_PLUS))

    def test_products_follow_the_pauli_algebra(self, qubit_groupoid):
        s1 = pauli_compose(PauliCoordinates(0, 1, 0, 0), qubit_groupoid)
        s2 = pauli_compose(PauliCoordinates(0, 0, 1, 0), qubit_groupoid)
        s3 = pauli_compose(PauliCoordinates(0, 0, 0, 1), qubit_groupoid)
        np.testing.assert_allclose(convolve(s1, s2).coeffs, (1j * s3).coeffs)
        np.testing.assert_allclose(convolve(s1, s1).coeffs, [1, 1, 0, 0])


class TestAmplitudes:
    def test_round_trip(self, qubit_groupoid):
        amplitudes = QubitAmplitudes(1.0, -0.5j, 2.0 + 1.0j, 0.25)
        f = amplitudes.to_element(qubit_groupoid)
        assert QubitAmplitudes.from_element(f) == amplitudes


class TestEquationsOfMotion:
    def test_rhs_matches_the_derivation(self, qubit_groupoid, rng):
        for _ in range(100):
            h = PauliCoordinates(*rng.normal(size=4))
            f = element(qubit_groupoid, rng.normal(size=4) + 1j * rng.normal(size=4))
            expected = derivation(qubit_hamiltonian(h, qubit_groupoid), f).coeffs
            np.testing.assert_allclose(qubit_eom_rhs(h, f), expected, atol=1e-13)

    def test_rhs_accepts_amplitudes(self, qubit_groupoid):
        h = PauliCoordinates(0.0, 0.0, 0.0, 1.5)
        rates = qubit_eom_rhs(h, QubitAmplitudes(0.0, 0.0, 1.0, 0.0))
        assert rates == pytest.approx((0.0, 0.0, 3.0j, 0.0))

    def test_diagonal_hamiltonian_keeps_populations(self, qubit_groupoid):
        h = PauliCoordinates(0.3, 0.0, 0.0, -1.0)
        plus_rate, minus_rate, _, _ = qubit_eom_rhs(h, QubitAmplitudes(0.2, 0.8, 0.5 - 0.1j, 0.5 + 0.1j))
        assert plus_rate == 0
        assert minus_rate == 0


class TestDecay:
    def test_decay_hamiltonian(self, qubit_groupoid):
        h = qubit_decay_hamiltonian(0.4, epsilon=0.5, g=qubit_groupoid)
        np.testing.assert_allclose(fundamental_rep(h.h).entries, 0.1 * SIGMA[2])

    @pytest.mark.parametrize("gamma", [0.2, 1.0, 3.0])
    def test_transition_amplitude_decays_until_first_zero(self, qubit_groupoid, gamma):
        h = qubit_decay_hamiltonian(gamma, g=qubit_groupoid)
        f = pauli_compose(PauliCoordinates(0.0, 1.0, 0.0, 0.0), qubit_groupoid)
        first_zero = np.pi / (2 * gamma)
        times = np.linspace(0.0, first_zero, 40, endpoint=False)
        magnitudes = [abs(flow(h, t, f)[ALPHA]) for t in times]
        assert np.all(np.diff(magnitudes) < 0)
        assert abs(flow(h, first_zero, f)[ALPHA]) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("gamma", [0.4, 1.0, 2.5])
    def test_population_imbalance_drains_the_transition_amplitude(self, qubit_groupoid, gamma):
        h = qubit_decay_hamiltonian(gamma, g=qubit_groupoid)
        f = pauli_compose(PauliCoordinates(0.0, 0.6, 0.0, -0.4), qubit_groupoid)
        assert (f[UNIT_MINUS] - f[UNIT_PLUS]).real > 0
        rate = qubit_eom_rhs(pauli_decompose(h.h), f)[ALPHA]
        assert rate == pytest.approx(-0.5 * gamma * (f[UNIT_MINUS] - f[UNIT_PLUS]), abs=1e-14)
        first_zero = np.arctan(1.5) / gamma
        times = np.linspace(0.0, first_zero, 40, endpoint=False)
        magnitudes = [abs(flow(h, t, f)[ALPHA]) for t in times]
        assert np.all(np.diff(magnitudes) < 0)
        expected = 0.6 * np.cos(gamma * times) - 0.4 * np.sin(gamma * times)
        np.testing.assert_allclose([flow(h, t, f)[ALPHA] for t in times], expected, atol=1e-12)
        assert abs(flow(h, first_zero, f)[ALPHA]) == pytest.approx(0.0, abs=1e-12)

    def test_x2_is_constant(self, qubit_groupoid, rng):
        h = qubit_decay_hamiltonian(1.7, g=qubit_groupoid)
        f = pauli_compose(PauliCoordinates(*rng.normal(size=4)), qubit_groupoid)
        x2 = pauli_decompose(f).x2
        for t in np.linspace(0.0, 4.0, 9):
            assert pauli_decompose(flow(h, t, f), tol=1e-10).x2 == pytest.approx(x2, abs=1e-12)
