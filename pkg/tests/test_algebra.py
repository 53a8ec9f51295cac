import numpy as np
import pytest
from hypothesis import given, settings

from groupoid_qm.domain.models import AlgebraElement
from groupoid_qm.errors import BindingError, ParameterError
from groupoid_qm.services.algebra import (
    add,
    commutator,
    convolve,
    delta,
    distinguished,
    element,
    involution,
    left_multiplication_matrix,
    pairing,
    right_multiplication_matrix,
    scale,
    unit,
    zero,
)
from groupoid_qm.services.groupoid_core import (
    build_pair_groupoid,
    build_pair_times_group,
    hom_set,
    isotropy_group,
    with_compose_entry,
)
from groupoid_qm.services.oscillator import ladder
from groupoid_qm.services.qubit import ALPHA, ALPHA_INV, UNIT_MINUS, UNIT_PLUS, pauli_compose
from groupoid_qm.domain.models import PauliCoordinates

from .strategies import elements, groupoid_with_elements, isotropy_groupoids, pair_groupoids


def _transition(g, target, source):
    (alpha,) = hom_set(g, source, target)
    return alpha


class TestConvolution:
    def test_single_factorization(self, pair3):
        product = convolve(delta(pair3, _transition(pair3, 2, 1)), delta(pair3, _transition(pair3, 1, 0)))
        np.testing.assert_array_equal(product.coeffs, delta(pair3, _transition(pair3, 2, 0)).coeffs)

    def test_qubit_nilpotent(self, qubit_groupoid):
        product = convolve(delta(qubit_groupoid, ALPHA), delta(qubit_groupoid, ALPHA))
        np.testing.assert_array_equal(product.coeffs, zero(qubit_groupoid).coeffs)

    def test_unit_is_neutral(self, pair3, rng):
        f = element(pair3, rng.normal(size=9) + 1j * rng.normal(size=9))
        np.testing.assert_allclose(convolve(unit(pair3), f).coeffs, f.coeffs, atol=1e-15)
        np.testing.assert_allclose(convolve(f, unit(pair3)).coeffs, f.coeffs, atol=1e-15)

    def test_unit_is_idempotent(self, qubit_groupoid):
        u = unit(qubit_groupoid)
        np.testing.assert_array_equal(convolve(u, u).coeffs, u.coeffs)
        assert np.count_nonzero(unit(build_pair_groupoid(5)).coeffs) == 5

    @settings(max_examples=50, deadline=None)
    @given(groupoid_with_elements(pair_groupoids(4)))
    def test_matrix_and_table_paths_agree(self, drawn):
        _, f, h = drawn
        np.testing.assert_allclose(
            convolve(f, h, method="matrix").coeffs,
            convolve(f, h, method="table").coeffs,
            atol=1e-12,
        )

    def test_matrix_path_refuses_isotropy(self, ptg22):
        with pytest.raises(ParameterError):
            convolve(unit(ptg22), unit(ptg22), method="matrix")
        with pytest.raises(ParameterError):
            convolve(unit(ptg22), unit(ptg22), method="fft")

    def test_binding_is_checked(self, pair3, qubit_groupoid):
        with pytest.raises(BindingError):
            convolve(unit(pair3), unit(qubit_groupoid))

    def test_same_tables_interoperate(self):
        a = build_pair_groupoid(3)
        b = build_pair_groupoid(3)
        np.testing.assert_array_equal(convolve(unit(a), unit(b)).coeffs, unit(a).coeffs)

    def test_invalid_tables_use_the_table_path(self, qubit_groupoid):
        broken = with_compose_entry(qubit_groupoid, ALPHA, ALPHA, UNIT_PLUS)
        product = convolve(delta(broken, ALPHA), delta(broken, ALPHA))
        assert product[UNIT_PLUS] == 1.0


class TestAlgebraProperties:
    @settings(max_examples=60, deadline=None)
    @given(groupoid_with_elements(isotropy_groupoids(), count=3))
    def test_associativity(self, drawn):
        _, f, g, h = drawn
        left = convolve(convolve(f, g), h).coeffs
        right = convolve(f, convolve(g, h)).coeffs
        np.testing.assert_allclose(left, right, atol=1e-12 * (1 + np.abs(left).max()))

    @settings(max_examples=60, deadline=None)
    @given(groupoid_with_elements(isotropy_groupoids()))
    def test_involution_reverses_products(self, drawn):
        _, f, g = drawn
        np.testing.assert_allclose(
            involution(convolve(f, g)).coeffs,
            convolve(involution(g), involution(f)).coeffs,
            atol=1e-12,
        )

    def test_with_200_seeded_elements(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 9))
            g = build_pair_groupoid(n)
            f, h = (element(g, rng.normal(size=n * n) + 1j * rng.normal(size=n * n)) for _ in range(2))
            np.testing.assert_allclose(
                involution(convolve(f, h)).coeffs,
                convolve(involution(h), involution(f)).coeffs,
                atol=1e-11,
            )

    @settings(max_examples=30, deadline=None)
    @given(pair_groupoids(4).flatmap(elements))
    def test_involution_is_an_involution(self, f):
        np.testing.assert_array_equal(involution(involution(f)).coeffs, f.coeffs)


class TestInvolution:
    def test_delta_alpha(self, qubit_groupoid):
        np.testing.assert_array_equal(
            involution(delta(qubit_groupoid, ALPHA)).coeffs, delta(qubit_groupoid, ALPHA_INV).coeffs
        )

    def test_hermitean_qubit_element_is_fixed(self, qubit_groupoid):
        f = pauli_compose(PauliCoordinates(0.3, -1.2, 0.7, 2.0), qubit_groupoid)
        np.testing.assert_array_equal(involution(f).coeffs, f.coeffs)

    def test_imaginary_unit(self, qubit_groupoid):
        f = scale(delta(qubit_groupoid, UNIT_MINUS), 1j)
        assert involution(f)[UNIT_MINUS] == -1j


class TestDistinguished:
    def test_incidence_times_unit_is_spray(self, qubit_groupoid):
        product = convolve(distinguished(qubit_groupoid, "incidence"), delta(qubit_groupoid, UNIT_PLUS))
        np.testing.assert_array_equal(
            product.coeffs, distinguished(qubit_groupoid, "char_spray_plus", 0).coeffs
        )

    def test_sandwiched_incidence_is_isotropy(self, ptg22):
        one = delta(ptg22, int(ptg22.unit_of[0]))
        product = convolve(convolve(one, distinguished(ptg22, "incidence")), one)
        np.testing.assert_array_equal(product.coeffs, distinguished(ptg22, "char_isotropy", 0).coeffs)

    def test_pair_isotropy_is_unit_delta(self, pair3):
        for a in range(3):
            np.testing.assert_array_equal(
                distinguished(pair3, "char_isotropy", a).coeffs, delta(pair3, int(pair3.unit_of[a])).coeffs
            )

    def test_spray_minus(self, qubit_groupoid):
        f = distinguished(qubit_groupoid, "char_spray_minus", 0)
        assert f.coeffs.tolist() == [1, 0, 0, 1]

    def test_unknown_or_missing_argument(self, pair3):
        with pytest.raises(ParameterError):
            distinguished(pair3, "char_isotropy")
        with pytest.raises(ParameterError):
            distinguished(pair3, "everything", 0)


class TestPairingAndCommutator:
    def test_pairing(self, pair3, rng):
        f = element(pair3, rng.normal(size=9))
        assert pairing(unit(pair3), delta(pair3, 0)) == 1
        assert pairing(f, distinguished(pair3, "incidence")) == pytest.approx(f.coeffs.sum())

    def test_pairing_reads_x1(self, qubit_groupoid):
        f = pauli_compose(PauliCoordinates(0.5, 1.25, -0.5, 0.0), qubit_groupoid)
        indicator = delta(qubit_groupoid, ALPHA) + delta(qubit_groupoid, ALPHA_INV)
        assert pairing(f, indicator) == pytest.approx(2 * 1.25)

    def test_self_commutator_vanishes(self, ptg22, rng):
        f = element(ptg22, rng.normal(size=8) + 1j * rng.normal(size=8))
        np.testing.assert_allclose(commutator(f, f).coeffs, 0.0, atol=1e-14)

    def test_orthogonal_idempotents_commute(self, pair3):
        assert not commutator(delta(pair3, 0), delta(pair3, 1)).coeffs.any()

    def test_oscillator_commutator_on_interior(self):
        a, a_star = ladder(5)
        g = a.groupoid
        bracket = commutator(a, a_star)
        expected = np.zeros(g.n_transitions, dtype=complex)
        expected[g.unit_of[:4]] = 1.0
        expected[g.unit_of[4]] = -4.0
        np.testing.assert_allclose(bracket.coeffs, expected, atol=1e-12)

    def test_isotropy_group_algebra_is_commutative(self):
        g = build_pair_times_group(1, 3)
        generators = [delta(g, alpha) for alpha in isotropy_group(g, 0)]
        for f in generators:
            for h in generators:
                assert not commutator(f, h).coeffs.any()


def test_element_validates_length(pair3):
    from groupoid_qm.errors import InvalidSpecError

    with pytest.raises(InvalidSpecError):
        AlgebraElement(pair3, [1.0, 2.0])


class TestMultiplicationMatrices:
    def test_left_and_right_match_convolution(self, ptg22, rng):
        for _ in range(10):
            f = element(ptg22, rng.normal(size=8) + 1j * rng.normal(size=8))
            h = element(ptg22, rng.normal(size=8) + 1j * rng.normal(size=8))
            np.testing.assert_allclose(left_multiplication_matrix(f) @ h.coeffs, convolve(f, h).coeffs, atol=1e-12)
            np.testing.assert_allclose(right_multiplication_matrix(f) @ h.coeffs, convolve(h, f).coeffs, atol=1e-12)

    def test_unit_acts_as_identity(self, pair3):
        np.testing.assert_array_equal(left_multiplication_matrix(unit(pair3)), np.eye(9))
        np.testing.assert_array_equal(right_multiplication_matrix(unit(pair3)), np.eye(9))

    def test_add_and_scale(self, qubit_groupoid):
        total = add(delta(qubit_groupoid, UNIT_PLUS), scale(delta(qubit_groupoid, ALPHA), 2j))
        np.testing.assert_array_equal(total.coeffs, [1, 0, 2j, 0])
