import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from HigherSpin.clifford import (CliffordError, ExactScalar, Multivector, blade_from_indices, clifford_conjugate,
                                 gamma_half, geometric_product, sphere_area, vector_embed)

from .strategies import multivectors, pi


def e(*indices, dim=3):
    return Multivector.basis(dim, *indices)


def test_generators_square_to_minus_one():
    for i in range(1, 4):
        assert e(i) * e(i) == Multivector.scalar(3, -1)


def test_generators_anticommute():
    assert e(1) * e(2) == -(e(2) * e(1))
    assert e(2, 1) == -e(1, 2)


def test_blade_order_sign():
    assert blade_from_indices([2, 1]) == (-1, 0b011)
    assert blade_from_indices([1, 1]) == (-1, 0)


def test_involution_signs():
    assert e(1).reversion() == e(1)
    assert e(1, 2).reversion() == -e(1, 2)
    assert e(1, 2, 3).reversion() == -e(1, 2, 3)
    assert e(1).conjugate() == -e(1)
    assert e(1, 2).conjugate() == -e(1, 2)
    assert e(1, 2, 3).conjugate() == e(1, 2, 3)


@settings(max_examples=40, deadline=None)
@given(multivectors(), multivectors(), multivectors())
def test_product_is_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=40, deadline=None)
@given(multivectors(), multivectors())
def test_involutions_reverse_products(a, b):
    assert (a * b).reversion() == b.reversion() * a.reversion()
    assert (a * b).conjugate() == b.conjugate() * a.conjugate()


def test_vector_inverse():
    v = e(1) * 3 + e(2) * 4
    assert v.inverse() == v * Fraction(-1, 25)
    assert v * v.inverse() == Multivector.scalar(3, 1)


def test_non_versor_has_no_inverse():
    with pytest.raises(CliffordError):
        (Multivector.scalar(3, 1) + e(1, 2, 3)).inverse()


def test_exact_scalar_arithmetic():
    assert pi(2) + pi(3) == pi(5)
    assert pi(1, Fraction(1, 2)) * pi(1, Fraction(1, 2)) == pi(1)
    assert (pi(4) / pi(2)) == ExactScalar(2)
    assert float(pi(1)) == pytest.approx(math.pi)
    assert pi(1) + 0.5 == pytest.approx(math.pi + 0.5)


def test_exact_scalar_rational_part():
    assert ExactScalar(Fraction(3, 4)).rational == Fraction(3, 4)
    with pytest.raises(CliffordError):
        pi(1).rational


def test_gamma_and_sphere_area():
    assert gamma_half(1) == pi(1, Fraction(1, 2))
    assert gamma_half(4) == ExactScalar(1)
    assert sphere_area(2) == pi(2)
    assert sphere_area(3) == pi(4)
    assert sphere_area(4) == pi(2, 2)
    assert sphere_area(5) == pi(Fraction(8, 3), 2)


def test_text_form_round_trip():
    a = Multivector(3, {0b101: pi(Fraction(3, 2), Fraction(1, 2)), 0: -1})
    assert str(a) == '-1*e{} + 3/2*pi^(1/2)*e{1,3}'
    assert Multivector.parse('3/2*pi^(1/2)*e{1,3} + -1*e{}', 3) == a


def test_parse_respects_index_order():
    assert Multivector.parse('1*e{2,1}', 3) == -e(1, 2)


def test_float_coefficients_collapse_exact_ones():
    a = Multivector(3, {0: pi(1)}) + Multivector(3, {0: 1.0})
    assert a.scalar_part() == pytest.approx(math.pi + 1)


def test_vector_embed_accepts_arrays():
    v = vector_embed([np.array([1., 2.]), np.array([0., 1.]), np.zeros(2)], 3)
    assert np.allclose(v.coeffs[0b001], [1., 2.])
    assert 0b100 not in v.coeffs


def test_dimension_bounds():
    with pytest.raises(CliffordError):
        Multivector(0)
    with pytest.raises(CliffordError):
        Multivector(2, {0b100: 1})
    with pytest.raises(CliffordError):
        e(1) * Multivector.basis(4, 1)


def test_product_and_conjugation_functions():
    a = e(1) + e(2, 3) * 2
    assert geometric_product(a, e(1)) == a * e(1)
    assert clifford_conjugate(a) == a.conjugate()
    assert clifford_conjugate(a) == -e(1) - e(2, 3) * 2
