from fractions import Fraction

import pytest

from HigherSpin.polynomials import CliffPoly, RadialFunction
from HigherSpin.kernels import (EXACT, KernelConstants, KernelError, a_k, annihilation_check, build_kernel,
                                h_constant, homogeneity_defect, kernel_factorization_residual, swapped_residual,
                                verify_fundamental_relations)

from .strategies import pi


def test_constants():
    assert a_k(3, 1) == Fraction(1, 3)
    assert a_k(5, 2) == Fraction(3, 7)
    assert h_constant(5, 0) == pi(Fraction(-1, 8), -2)
    with pytest.raises(KernelError):
        h_constant(4, 1)


def test_kernel_constants():
    assert EXACT.exact
    scaled = KernelConstants(a_scale=Fraction(101, 100))
    assert not scaled.exact
    assert scaled.a(3, 1) == Fraction(101, 300)
    assert KernelConstants(omega_scale=Fraction(2)).omega(3) == pi(8)


def test_constant_degree_kernels():
    x = CliffPoly.vector(3, 'x')
    e0 = build_kernel(3, 0, 'Ek')
    assert e0.value == RadialFunction(3, {Fraction(-3, 2): x}) * pi(Fraction(1, 16), -2)
    h0 = build_kernel(5, 0, 'Hk')
    assert h0.value == RadialFunction.radial(5, Fraction(-3, 2)) * (pi(Fraction(-1, 8), -2) / pi(Fraction(8, 3), 2))


def test_build_kernel_preconditions():
    with pytest.raises(KernelError):
        build_kernel(3, 1, 'Hk')
    with pytest.raises(KernelError):
        build_kernel(3, 0, 'Fk')
    with pytest.raises(KernelError):
        build_kernel(4, 1, 'Hk', allow_low_dimension=True)
    with pytest.raises(KernelError):
        build_kernel(3, 1, 'Gk')
    assert build_kernel(3, 1, 'Hk', allow_low_dimension=True).kind == 'Hk'


@pytest.mark.parametrize('m,k,kind', [(3, 1, 'Ek'), (3, 2, 'Ek'), (3, 1, 'Fk'), (4, 1, 'Fk'), (5, 1, 'Hk')])
def test_kernels_are_homogeneous(m, k, kind):
    sol = build_kernel(m, k, kind)
    assert homogeneity_defect(sol) == 0
    assert sol.x_homogeneity() == (2 - m if kind == 'Hk' else 1 - m)


@pytest.mark.parametrize('m,k,kind', [(3, 1, 'Ek'), (3, 2, 'Ek'), (3, 1, 'Fk'), (5, 1, 'Ek'), (5, 1, 'Hk')])
def test_kernels_are_annihilated(m, k, kind):
    assert annihilation_check(build_kernel(m, k, kind)).is_zero


@pytest.mark.parametrize('m,k,kind', [(3, 1, 'Ek'), (3, 1, 'Fk'), (5, 1, 'Hk')])
def test_swapped_forms_agree(m, k, kind):
    assert swapped_residual(build_kernel(m, k, kind)).is_zero


def test_right_forms():
    e, f, h = (build_kernel(5, 1, kind) for kind in ('Ek', 'Fk', 'Hk'))
    assert e.right == e.value.conjugate()
    assert f.right == -f.value.conjugate()
    assert h.right == h.value


def test_fundamental_relations():
    ar, br = verify_fundamental_relations(5, 1)
    assert ar.is_zero
    assert br.is_zero
    assert kernel_factorization_residual(5, 1).is_zero


@pytest.mark.parametrize('target', ['a_scale', 'omega_scale', 'h_scale'])
def test_perturbed_constants_break_the_relations(target):
    constants = KernelConstants(**{target: Fraction(101, 100)})
    ar, br = verify_fundamental_relations(5, 1, constants)
    assert not (ar.is_zero and br.is_zero)


def test_fundamental_relations_need_m5():
    with pytest.raises(KernelError):
        verify_fundamental_relations(3, 1)


@pytest.mark.slow
def test_fundamental_relations_m6():
    assert all(r.is_zero for r in verify_fundamental_relations(6, 1))
    assert kernel_factorization_residual(6, 1).is_zero


@pytest.mark.slow
def test_fundamental_relations_m6_k2():
    assert all(r.is_zero for r in verify_fundamental_relations(6, 2))
    assert kernel_factorization_residual(6, 2).is_zero
