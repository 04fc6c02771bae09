"""
Fundamental solutions E_k, F_k of the first order operators and H_k of 𝒟₂, assembled from the
reproducing kernels with exact constants, and the right-acting A_k, B_k that connect them.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Tuple

from .calculus import OperatorSpec, apply, denominator
from .clifford import ExactScalar, gamma_half, sphere_area
from .polynomials import CliffPoly, RadialFunction, substitute_kelvin
from .spaces import reproducing_kernel

logger = logging.getLogger(__name__)

KINDS = ('Ek', 'Fk', 'Hk')

# operator annihilating each kernel from the right away from the pole
Annihilators = {'Ek': 'Rk', 'Fk': 'Qk', 'Hk': 'D2'}


class KernelError(AssertionError):
    def __init__(self, message: str, meta: Any = None):
        super().__init__(message)
        self.message = message
        self.meta = meta


def a_k(m: int, k: int) -> Fraction:
    return Fraction(m - 2) / denominator(m + 2 * k - 2)


def h_constant(m: int, k: int) -> ExactScalar:
    """(m+2k−4) Γ(m/2−1) / (4 (4−m) π^{m/2})."""
    if m == 4:
        raise KernelError('the H_k constant is singular at m=4')
    return gamma_half(m - 2) * ExactScalar.pi_power(Fraction(-m, 2), Fraction(m + 2 * k - 4, 4 * (4 - m)))


@dataclass(frozen=True)
class KernelConstants:
    a_scale: Fraction = Fraction(1)
    omega_scale: Fraction = Fraction(1)
    h_scale: Fraction = Fraction(1)
    c4_scale: Fraction = Fraction(1)

    def a(self, m: int, k: int) -> Fraction:
        return a_k(m, k) * self.a_scale

    def omega(self, m: int) -> ExactScalar:
        return sphere_area(m) * self.omega_scale

    def h(self, m: int, k: int) -> ExactScalar:
        return h_constant(m, k) * self.h_scale

    @property
    def exact(self) -> bool:
        return all(s == 1 for s in (self.a_scale, self.omega_scale, self.h_scale, self.c4_scale))


EXACT = KernelConstants()


def _weight(m: int, q: Fraction) -> RadialFunction:
    return RadialFunction.radial(m, q)


@dataclass
class FundamentalSolution:
    m: int
    k: int
    kind: str
    value: RadialFunction
    constant: ExactScalar
    constants: KernelConstants = field(default=EXACT, repr=False)

    @property
    def right(self) -> RadialFunction:
        """
            The kernel as produced by the right operators from H_k: conj(E_k), −conj(F_k) and H_k itself.
            These are the forms annihilated from the right and paired against dσ_x f.
        """
        if self.kind == 'Ek':
            return self.value.conjugate()
        if self.kind == 'Fk':
            return -self.value.conjugate()
        return self.value

    def x_homogeneity(self) -> Fraction:
        return self.value.x_homogeneity()

    def __str__(self) -> str:
        return str(self.value)


def build_kernel(m: int, k: int, kind: str, constants: KernelConstants = EXACT,
                 allow_low_dimension: bool = False) -> FundamentalSolution:
    if kind not in KINDS:
        raise KernelError(f'unknown kernel {kind!r}')
    if m < 3 or k < 0:
        raise KernelError(f'invalid parameters m={m}, k={k}')
    if kind == 'Fk' and k < 1:
        raise KernelError('F_k needs k >= 1')
    if kind == 'Hk':
        if m == 4:
            raise KernelError('the H_k constant is singular at m=4')
        if m < 5 and not allow_low_dimension:
            raise KernelError('m<5 for H_k')

    x = CliffPoly.vector(m, 'x')
    if kind == 'Ek':
        constant = 1 / (constants.omega(m) * constants.a(m, k))
        z = substitute_kelvin(reproducing_kernel(m, k, 'Z1').kernel, 'u')
        value = x * _weight(m, Fraction(-m, 2)) * z * constant
    elif kind == 'Fk':
        constant = -1 / (constants.omega(m) * constants.a(m, k))
        z = substitute_kelvin(reproducing_kernel(m, k - 1, 'Z1').kernel, 'u')
        value = CliffPoly.vector(m, 'u') * x * _weight(m, Fraction(-m, 2)) * z * CliffPoly.vector(m, 'v') * constant
    else:
        constant = constants.h(m, k)
        z = substitute_kelvin(reproducing_kernel(m, k, 'Z2').kernel, 'u')
        value = _weight(m, Fraction(2 - m, 2)) * z * constant
    logger.debug(f'{kind} for m={m}, k={k}: {len(value.terms)} radial classes')
    return FundamentalSolution(m, k, kind, value, ExactScalar.coerce(constant), constants)


def swapped_form(sol: FundamentalSolution) -> RadialFunction:
    m, k = sol.m, sol.k
    x = CliffPoly.vector(m, 'x')
    if sol.kind == 'Ek':
        z = substitute_kelvin(reproducing_kernel(m, k, 'Z1').kernel, 'v')
        return z * x * _weight(m, Fraction(-m, 2)) * sol.constant
    if sol.kind == 'Fk':
        z = substitute_kelvin(reproducing_kernel(m, k - 1, 'Z1').kernel, 'v')
        return CliffPoly.vector(m, 'u') * z * x * _weight(m, Fraction(-m, 2)) * CliffPoly.vector(m, 'v') * \
            sol.constant
    z = substitute_kelvin(reproducing_kernel(m, k, 'Z2').kernel, 'v')
    return _weight(m, Fraction(2 - m, 2)) * z * sol.constant


def swapped_residual(sol: FundamentalSolution) -> RadialFunction:
    return sol.value - swapped_form(sol)


def verify_fundamental_relations(m: int, k: int, constants: KernelConstants = EXACT) \
        -> Tuple[RadialFunction, RadialFunction]:
    """H_k A_{k,r} − E_k and H_k B_{k,r} − F_k, both taken in the right-kernel form."""
    if m < 5 or k < 1:
        raise KernelError(f'the fundamental relations are checked for m >= 5 and k >= 1, got m={m}, k={k}')
    h = build_kernel(m, k, 'Hk', constants).right
    e = build_kernel(m, k, 'Ek', constants).right
    f = build_kernel(m, k, 'Fk', constants).right
    ar = apply(OperatorSpec('Ak_r', m, k, c4_scale=constants.c4_scale), h)
    br = apply(OperatorSpec('Bk_r', m, k, c4_scale=constants.c4_scale), h)
    return ar - e, br - f


def annihilation_check(sol: FundamentalSolution) -> RadialFunction:
    spec = OperatorSpec(Annihilators[sol.kind], sol.m, sol.k, 'right', sol.constants.c4_scale)
    return apply(spec, sol.right)


def kernel_factorization_residual(m: int, k: int, constants: KernelConstants = EXACT) -> RadialFunction:
    """(H_k)𝒟₂ − (H_kA_{k,r})R_k − (H_kB_{k,r})Q_k, all operators acting from the right."""
    h = build_kernel(m, k, 'Hk', constants).right
    spec: Dict[str, OperatorSpec] = {name: OperatorSpec(name, m, k, 'right', constants.c4_scale)
                                     for name in ('D2', 'Ak', 'Bk', 'Rk', 'Qk')}
    return apply(spec['D2'], h) - apply(spec['Rk'], apply(spec['Ak'], h)) - \
        apply(spec['Qk'], apply(spec['Bk'], h))


def homogeneity_defect(sol: FundamentalSolution) -> Fraction:
    degree = sol.x_homogeneity()
    if degree is None:
        raise KernelError(f'{sol.kind} is not homogeneous in x')
    return degree - (2 - sol.m if sol.kind == 'Hk' else 1 - sol.m)
