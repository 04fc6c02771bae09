from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from HigherSpin.clifford import Multivector
from HigherSpin.polynomials import (CliffPoly, EvalPoint, PolynomialError, RadialFunction, homogeneous_component,
                                    kelvin_images, monomials, poly_arith, substitute_kelvin)

from .strategies import polynomials


def var(name, i, dim=3):
    return CliffPoly.variable(dim, name, i)


def test_vector_variable_squares_to_minus_norm():
    u = CliffPoly.vector(3, 'u')
    assert u * u == -CliffPoly.norm_squared(3, 'u')


def test_products_keep_factor_order():
    u, x = CliffPoly.vector(3, 'u'), CliffPoly.vector(3, 'x')
    assert u * x + x * u == CliffPoly.inner(3, 'u', 'x') * -2
    assert u * x != x * u


def test_derivative():
    p = var('x', 1) ** 2 * var('u', 1)
    assert p.derivative('x', 1) == var('x', 1) * var('u', 1) * 2
    assert p.derivative('v', 2).is_zero


def test_rename_moves_exponents():
    p = var('u', 1) * var('u', 2) * var('x', 3)
    q = p.rename('u', 'v')
    assert q == var('v', 1) * var('v', 2) * var('x', 3)
    assert not q.depends_on('u')
    with pytest.raises(PolynomialError):
        (p * var('v', 1)).rename('u', 'v')


def test_shift():
    x1 = var('x', 1)
    assert (x1 * x1).shift('x', [1, 0, 0]) == x1 * x1 + x1 * 2 + 1
    assert x1.shift('x', [0, 0, 0], Fraction(1, 2)) == x1 * Fraction(1, 2)


def test_substitute_requires_scalar_images():
    with pytest.raises(PolynomialError):
        var('x', 1).substitute('x', [CliffPoly.vector(3, 'u')] * 3)


def test_evaluate_partial_with_arrays():
    p = var('x', 1) * var('x', 2) * Multivector.basis(3, 1)
    values = p.evaluate_partial('x', [np.array([1., 2.]), np.array([3., 4.]), np.zeros(2)])
    assert np.allclose(values.to_multivector().coeffs[0b001], [3., 8.])


def test_exact_evaluation():
    p = var('x', 1) * var('u', 2) * 3 + Multivector.basis(3, 1, 2)
    value = p.evaluate(EvalPoint.at(3, x=(Fraction(1, 2),), u=(0, 4)))
    assert value == Multivector(3, {0: 6, 0b011: 1})


def test_exact_points_reject_floats():
    with pytest.raises(PolynomialError):
        EvalPoint.at(3, x=(0.5,))


def test_monomials():
    assert len(monomials(3, 2)) == 6
    assert monomials(2, 1) == [(1, 0), (0, 1)]
    assert monomials(3, -1) == []


def test_text_form_round_trip():
    p = var('x', 1) * var('u', 2) * Multivector.basis(3, 1, 3) * Fraction(-2, 3) + 5
    assert CliffPoly.parse(str(p), 3) == p
    r = RadialFunction(3, {Fraction(-3, 2): p})
    assert RadialFunction.parse(str(r), 3) == r


@settings(max_examples=30, deadline=None)
@given(polynomials(), polynomials())
def test_sum_and_product_are_consistent(p, q):
    assert (p + q) - q == p
    assert (p + q) * q == p * q + q * q


def test_radial_normalization_folds_integer_powers():
    r = RadialFunction(3, {1: CliffPoly.constant(3)})
    assert set(r.terms) == {Fraction(0)}
    assert r.to_poly() == CliffPoly.norm_squared(3, 'x')
    half = RadialFunction.radial(3, Fraction(3, 2))
    assert set(half.terms) == {Fraction(1, 2)}


def test_radial_weights_multiply():
    a = RadialFunction.radial(3, Fraction(-1, 2))
    assert a * a == RadialFunction.radial(3, -1)
    assert (a * a).is_polynomial() is False


def test_radial_derivative():
    r = RadialFunction.radial(3, Fraction(-1, 2))
    assert r.derivative('x', 1) == RadialFunction(3, {Fraction(-3, 2): -var('x', 1)})


def test_x_homogeneity():
    assert RadialFunction.radial(3, Fraction(-1, 2)).x_homogeneity() == -1
    assert RadialFunction(3, {Fraction(-3, 2): var('x', 1)}).x_homogeneity() == -2
    assert RadialFunction.from_poly(var('x', 1) + 1).x_homogeneity() is None


def test_radial_evaluation():
    r = RadialFunction.radial(3, Fraction(-1, 2))
    assert r.evaluate(EvalPoint.at(3, x=(3, 4))) == Multivector.scalar(3, Fraction(1, 5))
    with pytest.raises(PolynomialError):
        r.evaluate(EvalPoint.at(3))
    with pytest.raises(PolynomialError):
        r.evaluate(EvalPoint.at(3, x=(1, 1)))


def test_restrict_to_sphere():
    r = RadialFunction(3, {Fraction(-3, 2): var('x', 1)})
    assert r.restrict_to_sphere(2) == var('x', 1) * Fraction(1, 4)


def test_kelvin_substitution_reflects_u():
    u1 = substitute_kelvin(var('u', 1), 'u')
    assert u1.evaluate(EvalPoint.at(3, x=(1,), u=(1,))) == Multivector.scalar(3, -1)
    assert u1.evaluate(EvalPoint.at(3, x=(0, 2), u=(1,))) == Multivector.scalar(3, 1)
    assert len(kelvin_images(3, 'v')) == 3
    with pytest.raises(PolynomialError):
        substitute_kelvin(var('x', 1), 'u')


def test_kelvin_substitution_preserves_norm():
    norm = substitute_kelvin(CliffPoly.norm_squared(3, 'u'), 'u')
    assert norm == CliffPoly.norm_squared(3, 'u')


def test_dimension_mismatch():
    with pytest.raises(PolynomialError):
        var('x', 1) + CliffPoly.variable(4, 'x', 1)


def test_arithmetic_and_components():
    p, q = var('x', 1) * var('u', 1), var('u', 2) + 1
    assert poly_arith(p, q, 'add') == p + q
    assert poly_arith(p, q, 'mul') == p * q
    with pytest.raises(PolynomialError):
        poly_arith(p, q, 'div')
    mixed = var('x', 1) * var('x', 2) + var('x', 3) + 7
    assert homogeneous_component(mixed, 'x', 1) == var('x', 3)
    assert homogeneous_component(mixed, 'x', 0) == CliffPoly.constant(3, 7)


def test_square_root_of_the_norm():
    r = RadialFunction.radial(3, Fraction(1, 2))
    assert r.evaluate(EvalPoint.at(3, x=(3, 4, 0))) == Multivector.scalar(3, 5)


@settings(max_examples=30, deadline=None)
@given(polynomials())
def test_mixed_partials_commute(p):
    assert p.derivative('x', 1).derivative('u', 2) == p.derivative('u', 2).derivative('x', 1)
    assert p.derivative('x', 1).derivative('x', 3) == p.derivative('x', 3).derivative('x', 1)


@settings(max_examples=30, deadline=None)
@given(polynomials(), polynomials())
def test_evaluation_is_multiplicative(p, q):
    pt = EvalPoint.at(3, x=(Fraction(1, 2), -1, 2), u=(3, Fraction(-2, 3), 1))
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)


@settings(max_examples=30, deadline=None)
@given(polynomials(xdeg=3))
def test_homogeneous_components_sum_to_the_polynomial(p):
    total = CliffPoly.zero(3)
    for d in range(p.degree('x') + 1):
        total = total + homogeneous_component(p, 'x', d)
    assert total == p


@settings(max_examples=20, deadline=None)
@given(polynomials(xdeg=0))
def test_kelvin_substitution_is_an_involution_on_the_sphere(p):
    once = substitute_kelvin(p, 'u').restrict_to_sphere(1)
    twice = once.substitute('u', [image.restrict_to_sphere(1) for image in kelvin_images(3, 'u')])
    for zeta in [(Fraction(3, 5), Fraction(4, 5), 0), (0, 0, 1), (Fraction(2, 3), Fraction(-1, 3), Fraction(2, 3))]:
        pt = EvalPoint.at(3, x=zeta, u=(1, 2, -1))
        assert twice.evaluate(pt) == p.evaluate(pt)
