import math
from fractions import Fraction

import numpy as np
import pytest

from HigherSpin.clifford import Multivector
from HigherSpin.geometry import (GeometryError, MobiusGenerator, QuadratureRule, conformal_invariance_residual,
                                 integrate_ball_x, integrate_boundary_sphere_x, integrate_sphere_u, kelvin_average,
                                 rotation_pairing_residual, stokes_residual)
from HigherSpin.kernels import build_kernel
from HigherSpin.polynomials import CliffPoly
from HigherSpin.spaces import basis

from .strategies import pi


def var(name, i, dim=3):
    return CliffPoly.variable(dim, name, i)


@pytest.mark.parametrize('m', [2, 3, 5])
def test_product_gauss_rule(m):
    nodes, weights = QuadratureRule(m, 'product_gauss', 6).sphere
    assert np.allclose(np.linalg.norm(nodes, axis=1), 1.)
    assert np.sum(weights) == pytest.approx(2 * math.pi ** (m / 2) / math.gamma(m / 2))


def test_sphere_integrals_exact_and_float():
    f = var('u', 1) ** 4
    assert integrate_sphere_u(f, QuadratureRule(3)) == Multivector.scalar(3, pi(Fraction(4, 5)))
    approx = integrate_sphere_u(f, QuadratureRule(3, 'product_gauss', 6))
    assert float(approx.scalar_part()) == pytest.approx(4 * math.pi / 5)


def test_sphere_integration_rejects_x():
    with pytest.raises(GeometryError):
        integrate_sphere_u(var('x', 1), QuadratureRule(3))


def test_ball_integrals_exact_and_float():
    f = var('x', 1) ** 2
    assert integrate_ball_x(f, (0, 0, 0), 1, QuadratureRule(3)) == Multivector.scalar(3, pi(Fraction(4, 15)))
    approx = integrate_ball_x(f, (0, 0, 0), 1, QuadratureRule(3, 'product_gauss', 8))
    assert float(approx.scalar_part()) == pytest.approx(4 * math.pi / 15)


def test_boundary_integrals_of_constants():
    one = CliffPoly.constant(3)
    rule = QuadratureRule(3)
    assert integrate_boundary_sphere_x(one, (0, 0, 0), 2, rule, orientation=None) == \
        Multivector.scalar(3, pi(16))
    assert integrate_boundary_sphere_x(one, (1, 0, 0), 1, rule, orientation=None) == Multivector.scalar(3, pi(4))
    assert integrate_boundary_sphere_x(one, (0, 0, 0), 1, rule).is_zero


def test_boundary_flux_of_the_position_vector():
    x = CliffPoly.vector(3, 'x')
    assert integrate_boundary_sphere_x(x, (0, 0, 0), 1, QuadratureRule(3)) == Multivector.scalar(3, pi(-4))


def test_cauchy_kernel_reproduces_constants():
    e0 = build_kernel(3, 0, 'Ek').right
    value = integrate_boundary_sphere_x(e0, (0, 0, 0), Fraction(1, 2), QuadratureRule(3), pole=(0, 0, 0),
                                        density=CliffPoly.constant(3), pair_u=True)
    assert value == Multivector.scalar(3, 1)


def test_boundary_rejects_bad_input():
    one = CliffPoly.constant(3)
    with pytest.raises(GeometryError):
        integrate_boundary_sphere_x(one, (0, 0, 0), 1, QuadratureRule(3), orientation='sideways')
    with pytest.raises(GeometryError):
        integrate_boundary_sphere_x(one, (0, 0), 1, QuadratureRule(3))
    with pytest.raises(GeometryError):
        integrate_boundary_sphere_x(one, (0, 0, 0), 1, QuadratureRule(3), pole=(1, 0, 0))


def test_rule_validation():
    with pytest.raises(GeometryError):
        QuadratureRule(3, 'monte_carlo')
    with pytest.raises(GeometryError):
        QuadratureRule(1)
    assert 'no nodes' in QuadratureRule(3).export()
    table = QuadratureRule(2, 'product_gauss', 2).export().splitlines()
    assert len(table) == 1 + 4


def test_underresolved_rule_warns():
    with pytest.warns(UserWarning):
        QuadratureRule(3, 'product_gauss', 2).check_degree(5)


def test_kelvin_average():
    assert kelvin_average(var('u', 1), 3) == var('u', 1) * Fraction(1, 3)
    with pytest.raises(GeometryError):
        kelvin_average(var('x', 1), 3)


@pytest.mark.parametrize('which,kinds', [('Rk', ('Mk', 'Mk')), ('Tk', ('uMk1', 'Mk')), ('Qk', ('uMk1', 'uMk1'))])
def test_stokes_formulas(which, kinds):
    right, left = (basis(3, 1, kind).elements for kind in kinds)
    g = right[0].reversion() * var('x', 1) * var('x', 2)
    f = left[-1] * (var('x', 2) + var('x', 3) * var('x', 3))
    assert stokes_residual(3, 1, g, f, which).is_zero


@pytest.mark.slow
@pytest.mark.parametrize('which,kinds', [('Rk', ('Mk', 'Mk')), ('Tk', ('uMk1', 'Mk')), ('Qk', ('uMk1', 'uMk1'))])
def test_stokes_formulas_m5(which, kinds):
    right, left = (basis(5, 1, kind).elements for kind in kinds)
    g = right[0].reversion() * CliffPoly.variable(5, 'x', 1) * CliffPoly.variable(5, 'x', 4)
    f = left[-1] * (CliffPoly.variable(5, 'x', 2) + CliffPoly.variable(5, 'x', 5) ** 2)
    assert stokes_residual(5, 1, g, f, which).is_zero


def test_stokes_needs_a_known_operator():
    with pytest.raises(GeometryError):
        stokes_residual(3, 1, CliffPoly.constant(3), CliffPoly.constant(3), 'Dx')


def test_generator_validation():
    with pytest.raises(GeometryError):
        MobiusGenerator.dilation(3, 0)
    with pytest.raises(GeometryError):
        MobiusGenerator.translation(3, (1, 0))
    with pytest.raises(GeometryError):
        MobiusGenerator.rotation_from_vectors(3, (1, 1, 0), (0, 0, 1))
    with pytest.raises(GeometryError):
        MobiusGenerator.rotation(3, Multivector.basis(3, 1))


def test_generator_maps():
    assert MobiusGenerator.dilation(3, 2).phi()[0] == var('x', 1) * 4
    assert MobiusGenerator.translation(3, (1, 0, 0)).phi()[0] == var('x', 1) + 1
    quarter = MobiusGenerator.rotation_from_vectors(3, (1, 0, 0), (0, 1, 0))
    assert quarter.u_prime() is not None
    assert MobiusGenerator.dilation(3, 2).u_prime() is None


def _scalar_test_function():
    return var('u', 1) * var('x', 1) * var('x', 2)


@pytest.mark.parametrize('generator', [MobiusGenerator.translation(3, (1, Fraction(-1, 2), 0)),
                                       MobiusGenerator.dilation(3, 2),
                                       MobiusGenerator.rotation_from_vectors(3, (1, 0, 0), (0, 1, 0))])
def test_conformal_invariance(generator):
    f = _scalar_test_function()
    assert conformal_invariance_residual(3, 1, generator, f, 'D2').is_zero


@pytest.mark.parametrize('which', ['RkAk', 'QkBk'])
def test_intertwining_under_translation(which):
    g = MobiusGenerator.translation(3, (0, 1, 1))
    assert conformal_invariance_residual(3, 1, g, _scalar_test_function(), which).is_zero


@pytest.mark.slow
@pytest.mark.parametrize('which', ['RkAk', 'QkBk', 'D2'])
def test_intertwining_under_inversion(which):
    g = MobiusGenerator.inversion(3)
    assert conformal_invariance_residual(3, 1, g, _scalar_test_function(), which).is_zero


def test_conformal_check_needs_scalar_functions():
    with pytest.raises(GeometryError):
        conformal_invariance_residual(3, 1, MobiusGenerator.dilation(3, 2),
                                      var('x', 1) * Multivector.basis(3, 1), 'D2')


def test_rotation_preserves_the_sphere_pairing():
    g = MobiusGenerator.rotation_from_vectors(3, (Fraction(3, 5), Fraction(4, 5), 0), (0, 0, 1))
    elements = basis(3, 2, 'Mk').elements
    assert rotation_pairing_residual(elements[0].reversion(), elements[-1], g).is_zero
    with pytest.raises(GeometryError):
        rotation_pairing_residual(elements[0], elements[0], MobiusGenerator.dilation(3, 2))
