from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from HigherSpin.calculus import (CalculusError, OperatorSpec, apply, apply_pipeline, domain_check,
                                 factorization_residual, monogenic_shift_residual, operator, parse_pipeline,
                                 range_check, verify_commutation, verify_decomposition, verify_projection_algebra,
                                 verify_vector_identities)
from HigherSpin.clifford import Multivector
from HigherSpin.polynomials import CliffPoly, RadialFunction, random_poly
from HigherSpin.spaces import basis, fueter_polynomials

from .strategies import polynomials


def var(name, i, dim=3):
    return CliffPoly.variable(dim, name, i)


def x_poly(m, rng, xdeg=2):
    return random_poly(m, {'x': range(xdeg + 1)}, rng, terms=2)


def test_dirac_of_vector_variable():
    u = CliffPoly.vector(3, 'u')
    assert apply(OperatorSpec('Du', 3), u) == CliffPoly.constant(3, -3)
    assert apply(OperatorSpec('Du', 3, side='right'), u) == CliffPoly.constant(3, -3)


def test_dirac_squares_to_minus_laplacian(rng):
    f = random_poly(3, {'x': range(4)}, rng)
    dx = operator('Dx', 3)
    assert dx(dx(f)) == -apply(OperatorSpec('Delta_x', 3), f)


def test_scalar_operators():
    assert apply(OperatorSpec('Delta_x', 3), CliffPoly.norm_squared(3, 'x')) == CliffPoly.constant(3, 6)
    p = var('u', 1) ** 2 * var('u', 2)
    assert apply(OperatorSpec('Euler_u', 3), p) == p * 3
    assert apply(OperatorSpec('u_dot_Dx', 3), var('x', 2)) == var('u', 2)


def test_operators_act_on_radial_functions():
    r = RadialFunction.radial(5, Fraction(-3, 2))
    assert apply(OperatorSpec('Delta_x', 5), r).is_zero


def test_projections_split_a_harmonic():
    u1 = var('u', 1)
    plus = apply(OperatorSpec('Pk_plus', 3, 1), u1)
    minus = apply(OperatorSpec('Pk_minus', 3, 1), u1)
    assert plus + minus == u1
    assert plus == u1 + CliffPoly.vector(3, 'u') * Multivector.basis(3, 1) * Fraction(1, 3)
    assert domain_check(plus, 'Mk', 3, 1).ok
    assert domain_check(minus, 'uMk1', 3, 1).ok
    assert not domain_check(minus, 'Mk', 3, 1).ok


def test_domain_check_needs_homogeneity():
    with pytest.raises(CalculusError):
        domain_check(var('u', 1) + 1, 'Hk', 3, 1)


def test_spec_validation():
    with pytest.raises(CalculusError):
        OperatorSpec('Tk', 3, 0)
    with pytest.raises(CalculusError):
        OperatorSpec('Nabla', 3, 1)
    with pytest.raises(CalculusError):
        OperatorSpec('Dx', 3, side='middle')
    with pytest.raises(CalculusError):
        OperatorSpec('D2', 4, 0).c4


def test_pipelines():
    specs = parse_pipeline('Tk* . Rk . Pk+', 3, 1)
    assert [s.name for s in specs] == ['Tk_star', 'Rk', 'Pk_plus']
    f = var('u', 1) * var('x', 1) * var('x', 2)
    manual = apply(specs[0], apply(specs[1], apply(specs[2], f)))
    assert apply_pipeline(specs, f) == manual
    with pytest.raises(CalculusError):
        parse_pipeline('  ', 3, 1)


def test_right_operators_mirror_left_ones(rng):
    f = random_poly(3, {'x': range(3), 'u': [1]}, rng)
    right = apply(OperatorSpec('Dx', 3, side='right'), f)
    assert right == apply(OperatorSpec('Dx', 3), f.reversion()).reversion()


@pytest.mark.parametrize('m,k', [(3, 1), (3, 2), (5, 1)])
def test_decomposition_identities(m, k, rng):
    for h in basis(m, k, 'Hk').elements[:3]:
        f = h * x_poly(m, rng)
        assert verify_decomposition(m, k, f).is_zero
        assert factorization_residual(m, k, f).is_zero


def test_decomposition_at_k_zero(rng):
    f = x_poly(3, rng, xdeg=3)
    assert verify_decomposition(3, 0, f).is_zero


def test_decomposition_rejects_non_harmonic_input():
    with pytest.raises(CalculusError):
        verify_decomposition(3, 2, var('u', 1) ** 2 * var('x', 1), Fraction(1))


@pytest.mark.parametrize('m,k', [(3, 1), (3, 2), (4, 1)])
def test_commutation_relations(m, k, rng):
    for b in basis(m, k, 'uMk1').elements:
        assert verify_commutation(m, k, b * x_poly(m, rng))[0].is_zero
    for b in basis(m, k, 'Mk').elements:
        assert verify_commutation(m, k, b * x_poly(m, rng))[1].is_zero


@pytest.mark.parametrize('name,kind', [('Rk', 'Mk'), ('Tk_star', 'Mk'), ('Tk', 'uMk1'), ('Qk', 'uMk1')])
def test_operator_ranges(name, kind, rng):
    for b in basis(3, 2, kind).elements:
        assert range_check(3, 2, b * x_poly(3, rng), name).ok


@settings(max_examples=25, deadline=None)
@given(polynomials())
def test_vector_identities(f):
    assert all(r.is_zero for r in verify_vector_identities(3, f))


def test_projection_algebra():
    for h in basis(4, 2, 'Hk').elements:
        assert all(r.is_zero for r in verify_projection_algebra(4, 2, h).values())


@pytest.mark.parametrize('m,k', [(3, 1), (3, 3), (5, 2)])
def test_monogenic_shift(m, k):
    for p in fueter_polynomials(m, k - 1):
        assert monogenic_shift_residual(m, k, p).is_zero


def test_operator_dimension_mismatch():
    with pytest.raises(CalculusError):
        apply(OperatorSpec('Dx', 4), var('x', 1))


def test_float_coefficients_pass_through():
    f = var('x', 1) * var('x', 1) * 0.5
    out = apply(OperatorSpec('Delta_x', 3), f)
    assert np.isclose(float(out.to_multivector().scalar_part()), 1.)
