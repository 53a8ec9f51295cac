import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_qm.domain.models import DensityMatrix, Hamiltonian, Operator, PauliCoordinates
from groupoid_qm.errors import BindingError, ParameterError, PreconditionError
from groupoid_qm.services.algebra import convolve, element, involution, unit
from groupoid_qm.services.dynamics import (
    check_positive_normalized_map,
    conjugation_flow,
    density_rate,
    derivation,
    derivation_matrix,
    evolve_density,
    evolve_state,
    flow,
    flow_operator,
    flow_series,
    heisenberg_integrate,
)
from groupoid_qm.services.qubit import (
    ALPHA,
    UNIT_MINUS,
    UNIT_PLUS,
    pauli_compose,
    qubit_decay_hamiltonian,
    qubit_hamiltonian,
)
from groupoid_qm.services.representation import element_from_matrix, fundamental_rep
from groupoid_qm.services.states import rho_event

from .strategies import groupoid_with_elements, isotropy_groupoids, pair_groupoids

_groupoids = st.one_of(pair_groupoids(3), isotropy_groupoids())


def _random_hamiltonian(g, rng, scale=1.0):
    raw = rng.uniform(-scale, scale, size=g.n_transitions) + 1j * rng.uniform(-scale, scale, size=g.n_transitions)
    f = element(g, raw)
    return Hamiltonian(0.5 * (f + involution(f)))


def _random_element(g, rng):
    return element(g, rng.normal(size=g.n_transitions) + 1j * rng.normal(size=g.n_transitions))


def _random_pauli(rng, scale=1.0):
    return PauliCoordinates(*rng.uniform(-scale, scale, size=4))


class TestDerivation:
    def test_unit_and_generator_are_constant(self, pair3, ptg22, rng):
        for g in (pair3, ptg22):
            h = _random_hamiltonian(g, rng)
            np.testing.assert_allclose(derivation(h, unit(g)).coeffs, 0.0, atol=1e-14)
            np.testing.assert_allclose(derivation(h, h.h).coeffs, 0.0, atol=1e-13)

    def test_rejects_foreign_elements(self, pair3, qubit_groupoid):
        h = qubit_hamiltonian(PauliCoordinates(0.0, 1.0, 0.0, 0.0), qubit_groupoid)
        with pytest.raises(BindingError):
            derivation(h, unit(pair3))

    def test_hamiltonian_must_be_real(self, qubit_groupoid):
        with pytest.raises(PreconditionError):
            Hamiltonian(1j * unit(qubit_groupoid))

    @pytest.mark.parametrize("bad", [np.nan, np.inf])
    def test_hamiltonian_must_be_finite(self, qubit_groupoid, bad):
        with pytest.raises(ParameterError):
            Hamiltonian(element(qubit_groupoid, [bad, 0.0, 0.0, 0.0]))

    def test_matrix_form_matches_the_derivation(self, ptg22, rng):
        h = _random_hamiltonian(ptg22, rng)
        f = _random_element(ptg22, rng)
        np.testing.assert_allclose(derivation_matrix(h) @ f.coeffs, derivation(h, f).coeffs, atol=1e-12)

    def test_flow_operator_is_the_exponential(self, pair3, rng):
        h = _random_hamiltonian(pair3, rng)
        np.testing.assert_allclose(flow_operator(h, 0.0), np.eye(9), atol=1e-14)
        f = _random_element(pair3, rng)
        np.testing.assert_allclose(flow_operator(h, 0.7) @ f.coeffs, flow(h, 0.7, f).coeffs, atol=1e-12)
        np.testing.assert_allclose(flow_operator(h, -0.7) @ flow_operator(h, 0.7), np.eye(9), atol=1e-10)


class TestFlow:
    def test_zero_time_is_identity(self, ptg22, rng):
        h = _random_hamiltonian(ptg22, rng)
        f = _random_element(ptg22, rng)
        np.testing.assert_allclose(flow(h, 0.0, f).coeffs, f.coeffs, atol=1e-15)

    def test_group_property(self, pair3, rng):
        h = _random_hamiltonian(pair3, rng)
        f = _random_element(pair3, rng)
        np.testing.assert_allclose(
            flow(h, 0.4, flow(h, 0.9, f)).coeffs, flow(h, 1.3, f).coeffs, atol=1e-12
        )

    def test_diagonal_hamiltonian_freezes_populations(self, qubit_groupoid, rng):
        for _ in range(10):
            x0, x3 = rng.uniform(-2, 2, size=2)
            h = qubit_hamiltonian(PauliCoordinates(x0, 0.0, 0.0, x3), qubit_groupoid)
            f = pauli_compose(_random_pauli(rng), qubit_groupoid)
            for t in np.linspace(0.0, 5.0, 11):
                evolved = flow(h, t, f)
                assert abs(evolved[UNIT_PLUS] - f[UNIT_PLUS]) <= 1e-12
                assert abs(evolved[UNIT_MINUS] - f[UNIT_MINUS]) <= 1e-12

    def test_trace_is_conserved(self, qubit_groupoid, rng):
        for _ in range(50):
            h = qubit_hamiltonian(_random_pauli(rng), qubit_groupoid)
            f = _random_element(qubit_groupoid, rng)
            trace = np.trace(fundamental_rep(f).entries)
            for t in (0.5, 2.0, 5.0):
                assert np.trace(fundamental_rep(flow(h, t, f)).entries) == pytest.approx(trace, abs=1e-10)

    def test_flow_is_a_star_automorphism(self, pair3, rng):
        h = _random_hamiltonian(pair3, rng)
        f = _random_element(pair3, rng)
        np.testing.assert_allclose(
            flow(h, 1.1, involution(f)).coeffs, involution(flow(h, 1.1, f)).coeffs, atol=1e-12
        )

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_conjugation(self, n, rng):
        from groupoid_qm.services.groupoid_core import build_pair_groupoid

        g = build_pair_groupoid(n)
        h = _random_hamiltonian(g, rng)
        f = _random_element(g, rng)
        for t in (0.3, 1.7):
            np.testing.assert_allclose(conjugation_flow(h, t, f).coeffs, flow(h, t, f).coeffs, atol=1e-10)

    def test_decay_hamiltonian_rotates_in_the_x1_x3_plane(self, qubit_groupoid):
        nu = 0.35
        h = qubit_decay_hamiltonian(2 * nu, g=qubit_groupoid)
        f = pauli_compose(PauliCoordinates(0.0, 0.6, -0.25, 0.8), qubit_groupoid)
        t = 0.9
        evolved = flow(h, t, f)
        x1 = 0.6 * np.cos(2 * nu * t) + 0.8 * np.sin(2 * nu * t)
        x3 = 0.8 * np.cos(2 * nu * t) - 0.6 * np.sin(2 * nu * t)
        expected = pauli_compose(PauliCoordinates(0.0, x1, -0.25, x3), qubit_groupoid)
        np.testing.assert_allclose(evolved.coeffs, expected.coeffs, atol=1e-12)


def _hermitian_part(f):
    return Hamiltonian(0.5 * (f + involution(f)))


class TestDynamicalLaws:
    @settings(max_examples=40, deadline=None)
    @given(groupoid_with_elements(_groupoids, count=3), st.floats(min_value=-2.0, max_value=2.0))
    def test_flow_preserves_products_and_involution(self, drawn, t):
        _, raw, f, g = drawn
        h = _hermitian_part(raw)
        np.testing.assert_allclose(
            flow(h, t, convolve(f, g)).coeffs,
            convolve(flow(h, t, f), flow(h, t, g)).coeffs,
            rtol=1e-9,
            atol=1e-8,
        )
        np.testing.assert_allclose(
            flow(h, t, involution(f)).coeffs, involution(flow(h, t, f)).coeffs, rtol=1e-9, atol=1e-9
        )

    @settings(max_examples=40, deadline=None)
    @given(groupoid_with_elements(_groupoids, count=3))
    def test_derivation_is_a_star_derivation(self, drawn):
        _, raw, f, g = drawn
        h = _hermitian_part(raw)
        np.testing.assert_allclose(
            derivation(h, convolve(f, g)).coeffs,
            (convolve(derivation(h, f), g) + convolve(f, derivation(h, g))).coeffs,
            atol=1e-9,
        )
        np.testing.assert_allclose(
            derivation(h, involution(f)).coeffs, involution(derivation(h, f)).coeffs, atol=1e-12
        )

    @settings(max_examples=30, deadline=None)
    @given(groupoid_with_elements(_groupoids, count=2), st.floats(min_value=-1.0, max_value=1.0))
    def test_richardson_derivative_matches_the_equation_of_motion(self, drawn, t):
        _, raw, f = drawn
        h = _hermitian_part(raw)
        s = 1e-4

        def central(step):
            return (flow(h, t + step, f).coeffs - flow(h, t - step, f).coeffs) / (2 * step)

        richardson = (4 * central(s / 2) - central(s)) / 3
        np.testing.assert_allclose(richardson, derivation(h, flow(h, t, f)).coeffs, rtol=1e-7, atol=1e-6)


class TestFlowSeries:
    def test_threads_and_serial_agree(self, ptg22, rng):
        h = _random_hamiltonian(ptg22, rng)
        f = _random_element(ptg22, rng)
        grid = np.linspace(1.0, 3.0, 9)
        serial = flow_series(h, f, grid, workers=1)
        threaded = flow_series(h, f, grid, workers=2)
        np.testing.assert_array_equal(serial.times, grid)
        np.testing.assert_allclose(threaded.coeffs, serial.coeffs, atol=1e-15)
        for row, t in zip(serial.coeffs, grid):
            np.testing.assert_allclose(row, flow(h, t - grid[0], f).coeffs, atol=1e-12)

    @pytest.mark.parametrize("grid", [[], [1.0, 0.0], [0.0, 0.5, 0.5]])
    def test_bad_grids(self, qubit_groupoid, grid):
        h = qubit_hamiltonian(PauliCoordinates(0.0, 1.0, 0.0, 0.0), qubit_groupoid)
        with pytest.raises(ParameterError):
            flow_series(h, unit(qubit_groupoid), grid)
        with pytest.raises(ParameterError):
            heisenberg_integrate(h, unit(qubit_groupoid), grid)


class TestHeisenbergIntegrate:
    def test_rk4_tracks_the_exact_flow(self, qubit_groupoid, rng):
        grid = np.linspace(0.0, 5.0, 11)
        for _ in range(50):
            h = qubit_hamiltonian(_random_pauli(rng), qubit_groupoid)
            f0 = pauli_compose(_random_pauli(rng), qubit_groupoid)
            series = heisenberg_integrate(h, f0, grid, step=1e-3)
            assert series.max_flow_deviation <= 1e-8
            for row in series.coeffs:
                assert row[UNIT_PLUS] + row[UNIT_MINUS] == pytest.approx(
                    f0[UNIT_PLUS] + f0[UNIT_MINUS], abs=1e-10
                )

    def test_first_row_is_the_initial_value(self, pair3, rng):
        h = _random_hamiltonian(pair3, rng)
        f0 = _random_element(pair3, rng)
        series = heisenberg_integrate(h, f0, [0.0, 0.25], step=0.01, compare_with_flow=False)
        np.testing.assert_array_equal(series.coeffs[0], f0.coeffs)
        assert series.max_flow_deviation is None
        assert series.column(0).shape == (2,)

    def test_step_must_be_positive(self, qubit_groupoid):
        h = qubit_hamiltonian(PauliCoordinates(0.0, 1.0, 0.0, 0.0), qubit_groupoid)
        with pytest.raises(ParameterError):
            heisenberg_integrate(h, unit(qubit_groupoid), [0.0, 1.0], step=0.0)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=-1.5, max_value=1.5), st.floats(min_value=-1.5, max_value=1.5))
    def test_rotation_keeps_the_bloch_length(self, h1, h3):
        h = qubit_hamiltonian(PauliCoordinates(0.0, h1, 0.0, h3))
        f0 = pauli_compose(PauliCoordinates(0.0, 0.3, 0.4, 0.5), h.groupoid)
        series = heisenberg_integrate(h, f0, np.linspace(0.0, 1.0, 5), step=1e-2)
        for row in series.coeffs:
            length = np.sqrt(abs(row[ALPHA]) ** 2 + (0.5 * (row[UNIT_PLUS] - row[UNIT_MINUS]).real) ** 2)
            assert length == pytest.approx(np.sqrt(0.5), abs=1e-7)


class TestDensityEvolution:
    def test_landau_von_neumann_rate(self, qubit_groupoid, rng):
        for _ in range(20):
            p1 = float(rng.uniform(0.0, 1.0))
            gamma = float(rng.uniform(0.1, 3.0))
            H = fundamental_rep(qubit_decay_hamiltonian(gamma, g=qubit_groupoid).h)
            rate = density_rate(H, DensityMatrix(np.diag([p1, 1.0 - p1])))
            off_diagonal = (p1 - (1.0 - p1)) * gamma / 2
            np.testing.assert_allclose(rate, [[0.0, off_diagonal], [off_diagonal, 0.0]], atol=1e-12)

    def test_rate_is_the_derivative_of_the_evolution(self, rng):
        H = Operator(np.array([[0.4, 0.2 - 0.7j], [0.2 + 0.7j, -1.1]]))
        rho = DensityMatrix(np.array([[0.6, 0.1 + 0.2j], [0.1 - 0.2j, 0.4]]))
        eps = 1e-6
        forward = evolve_density(H, rho, eps).entries
        backward = evolve_density(H, rho, -eps).entries
        np.testing.assert_allclose((forward - backward) / (2 * eps), density_rate(H, rho), atol=1e-8)

    def test_evolution_preserves_density_properties(self, rng):
        raw = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        H = Operator(raw + raw.conj().T)
        rho0 = DensityMatrix(np.diag([0.5, 0.3, 0.2]))
        for t in (0.1, 1.0, 10.0):
            rho = evolve_density(H, rho0, t)
            assert np.trace(rho.entries).real == pytest.approx(1.0, abs=1e-12)
            np.testing.assert_allclose(np.linalg.eigvalsh(rho.entries), [0.2, 0.3, 0.5], atol=1e-10)

    @pytest.mark.parametrize("t", [1.0, 10.0, 100.0, 1000.0])
    def test_long_time_evolution_with_a_large_hamiltonian(self, rng, t):
        raw = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
        H = Operator(30.0 * (raw + raw.conj().T))
        populations = rng.dirichlet(np.ones(12))
        rho = evolve_density(H, DensityMatrix(np.diag(populations)), t)
        assert np.trace(rho.entries).real == pytest.approx(1.0, abs=1e-13)
        np.testing.assert_allclose(np.linalg.eigvalsh(rho.entries), np.sort(populations), atol=1e-9)

    def test_rejects_non_self_adjoint_and_mismatched(self):
        rho = DensityMatrix(np.eye(2) / 2)
        with pytest.raises(PreconditionError):
            evolve_density(Operator(np.array([[0.0, 1.0], [0.0, 0.0]])), rho, 1.0)
        with pytest.raises(PreconditionError):
            density_rate(Operator(np.eye(3)), rho)


class TestStateEvolution:
    def test_schrodinger_dual(self, pair3, rng):
        h = _random_hamiltonian(pair3, rng)
        rho = rho_event(pair3, 1)
        evolved = evolve_state(h, 0.8, rho)
        for _ in range(10):
            f = _random_element(pair3, rng)
            assert evolved(f) == pytest.approx(rho(flow(h, 0.8, f)), abs=1e-12)

    def test_evolved_point_state_stays_normalized(self, qubit_groupoid):
        h = qubit_decay_hamiltonian(1.0, g=qubit_groupoid)
        rho = evolve_state(h, 2.0, rho_event(qubit_groupoid, 0))
        assert rho(unit(qubit_groupoid)) == pytest.approx(1.0, abs=1e-12)


class TestMapCheck:
    def test_flow_is_positive_and_normalized(self, pair3, rng):
        h = _random_hamiltonian(pair3, rng)
        report = check_positive_normalized_map(lambda f: flow(h, 0.7, f), pair3, samples=30)
        assert report
        assert report.normalization_defect <= 1e-12
        assert report.to_dict()["samples"] == 30

    def test_negation_fails(self, qubit_groupoid):
        report = check_positive_normalized_map(lambda f: -f, qubit_groupoid, samples=5, seed=3)
        assert not report.ok
        assert report.normalization_defect == pytest.approx(2.0)
        assert report.min_eigenvalue < 0
        assert report.worst_sample is not None

    def test_sample_count(self, qubit_groupoid):
        with pytest.raises(ParameterError):
            check_positive_normalized_map(lambda f: f, qubit_groupoid, samples=0)


def test_element_from_matrix_round_trip_of_hamiltonian(pair3, rng):
    h = _random_hamiltonian(pair3, rng)
    np.testing.assert_allclose(
        element_from_matrix(pair3, fundamental_rep(h.h).entries).coeffs, h.h.coeffs, atol=1e-15
    )
