"""
Differential and projection operators acting on CliffPoly and RadialFunction, on either side.

Left operators act as written. Right operators are the mirror images f ↦ rev(Op(rev f)): Dirac
operators multiply e_i from the right and projections post-compose, and a right pipeline written
left to right is applied left to right.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from .clifford import Multivector
from .polynomials import CliffPoly, Function, RadialFunction

logger = logging.getLogger(__name__)


class CalculusError(AssertionError):
    def __init__(self, message: str, meta: Any = None):
        super().__init__(message)
        self.message = message
        self.meta = meta


OPERATOR_NAMES = ('Dx', 'Du', 'Delta_x', 'Euler_u', 'u_dot_Dx', 'Du_dot_Dx', 'Pk_plus', 'Pk_minus', 'p0', 'p1',
                  'Rk', 'Tk', 'Tk_star', 'Qk', 'D2', 'Ak', 'Bk', 'Ak_r', 'Bk_r')

# smallest admissible k; operators absent here accept any k >= 0
MinimalK = {'Pk_minus': 1, 'p0': 1, 'Tk': 1, 'Tk_star': 1, 'Qk': 1, 'Ak': 1, 'Bk': 1, 'Ak_r': 1, 'Bk_r': 1}

# names accepted in pipeline strings
Aliases = {'Pk+': 'Pk_plus', 'Pk-': 'Pk_minus', 'Tk*': 'Tk_star', 'Lx': 'Delta_x', 'Δx': 'Delta_x',
           'Eu': 'Euler_u', 'uDx': 'u_dot_Dx', 'DuDx': 'Du_dot_Dx', 'Ar': 'Ak_r', 'Br': 'Bk_r'}

SPACES = frozenset(['Hk', 'Mk', 'uMk1'])


@dataclass(frozen=True)
class OperatorSpec:
    name: str
    m: int
    k: int = 0
    side: str = 'left'
    c4_scale: Fraction = field(default=Fraction(1), compare=False)

    def __post_init__(self):
        if self.name not in OPERATOR_NAMES:
            raise CalculusError(f'unknown operator {self.name!r}')
        if self.side not in ('left', 'right'):
            raise CalculusError(f'unknown side {self.side!r}')
        if self.m < 1 or self.k < 0:
            raise CalculusError(f'invalid parameters m={self.m}, k={self.k}')
        if self.k < MinimalK.get(self.name, 0):
            raise CalculusError(f'{self.name} needs k >= {MinimalK[self.name]}, got k={self.k}')

    @property
    def acts_right(self) -> bool:
        return self.side == 'right' or self.name.endswith('_r')

    @property
    def c2(self) -> Fraction:
        return denominator(self.m + 2 * self.k - 2)

    @property
    def c4(self) -> Fraction:
        return denominator(self.m + 2 * self.k - 4) * self.c4_scale


def denominator(value: int) -> Fraction:
    if value == 0:
        raise CalculusError('operator denominator vanishes for these parameters')
    return Fraction(value)


# # # primitives, all acting from the left # # #

def _lift(f: Function) -> RadialFunction:
    return RadialFunction.lift(f)


def _lower(f: RadialFunction, like: Function) -> Function:
    return f.to_poly() if isinstance(like, CliffPoly) and f.is_polynomial() else f


def dirac(f: RadialFunction, var: str) -> RadialFunction:
    """Σ e_i ∂f/∂var_i."""
    return reduce(lambda acc, i: acc + Multivector.basis(f.dim, i) * f.derivative(var, i),
                  range(1, f.dim + 1), RadialFunction(f.dim))


def laplacian(f: RadialFunction, var: str) -> RadialFunction:
    return reduce(lambda acc, i: acc + f.derivative(var, i).derivative(var, i),
                  range(1, f.dim + 1), RadialFunction(f.dim))


def euler(f: RadialFunction, var: str) -> RadialFunction:
    return reduce(lambda acc, i: acc + CliffPoly.variable(f.dim, var, i) * f.derivative(var, i),
                  range(1, f.dim + 1), RadialFunction(f.dim))


def directional(f: RadialFunction, a: str, b: str) -> RadialFunction:
    """⟨a, D_b⟩ f = Σ a_i ∂f/∂b_i."""
    return euler(f, b) if a == b else \
        reduce(lambda acc, i: acc + CliffPoly.variable(f.dim, a, i) * f.derivative(b, i),
               range(1, f.dim + 1), RadialFunction(f.dim))


def mixed(f: RadialFunction) -> RadialFunction:
    """⟨D_u, D_x⟩ f = Σ ∂²f/∂u_i∂x_i."""
    return reduce(lambda acc, i: acc + f.derivative('x', i).derivative('u', i),
                  range(1, f.dim + 1), RadialFunction(f.dim))


def vector_multiply(f: RadialFunction, var: str) -> RadialFunction:
    return CliffPoly.vector(f.dim, var) * f


def norm_multiply(f: RadialFunction, var: str) -> RadialFunction:
    return CliffPoly.norm_squared(f.dim, var) * f


def projection(f: RadialFunction, m: int, k: int, sign: int = 1, var: str = 'u') -> RadialFunction:
    """P_k^+ (sign=1) or P_k^- (sign=-1) in the variable var, from the left."""
    shifted = vector_multiply(dirac(f, var), var) / denominator(m + 2 * k - 2)
    return f + shifted if sign > 0 else -shifted


def mirror(op: Callable[[RadialFunction], RadialFunction]) -> Callable[[RadialFunction], RadialFunction]:
    return lambda f: op(f.reversion()).reversion()


def right_projection(f: RadialFunction, m: int, k: int, sign: int = 1, var: str = 'u') -> RadialFunction:
    return mirror(lambda g: projection(g, m, k, sign, var))(f)


# # # operator table # # #

def _p_plus(f: RadialFunction, spec: OperatorSpec) -> RadialFunction:
    return projection(f, spec.m, spec.k, 1)


def _p_minus(f: RadialFunction, spec: OperatorSpec) -> RadialFunction:
    return projection(f, spec.m, spec.k, -1)


def _rk(f: RadialFunction, spec: OperatorSpec) -> RadialFunction:
    return _p_plus(dirac(f, 'x'), spec)


def _tk_star(f: RadialFunction, spec: OperatorSpec) -> RadialFunction:
    return _p_minus(dirac(f, 'x'), spec)


def _d2(f: RadialFunction, spec: OperatorSpec) -> RadialFunction:
    c2, c4 = spec.c2, spec.c4
    first = mixed(f)
    return laplacian(f, 'x') - directional(first, 'u', 'x') * Fraction(4) / c2 + \
        norm_multiply(mixed(first), 'u') * Fraction(4) / (c2 * c4)


def _ak(f: RadialFunction, spec: OperatorSpec) -> RadialFunction:
    return -_rk(_p_plus(f, spec), spec) + _rk(_p_minus(f, spec), spec) * (2 / spec.c4)


def _bk(f: RadialFunction, spec: OperatorSpec) -> RadialFunction:
    return -_tk_star(_p_plus(f, spec), spec) * (2 / spec.c4) - \
        _tk_star(_p_minus(f, spec), spec) * (Fraction(spec.m + 2 * spec.k) / spec.c4)


_table: Dict[str, Callable[[RadialFunction, OperatorSpec], RadialFunction]] = {
    'Dx': lambda f, spec: dirac(f, 'x'),
    'Du': lambda f, spec: dirac(f, 'u'),
    'Delta_x': lambda f, spec: laplacian(f, 'x'),
    'Euler_u': lambda f, spec: euler(f, 'u'),
    'u_dot_Dx': lambda f, spec: directional(f, 'u', 'x'),
    'Du_dot_Dx': lambda f, spec: mixed(f),
    'Pk_plus': _p_plus,
    'p1': _p_plus,
    'Pk_minus': _p_minus,
    'p0': lambda f, spec: -dirac(f, 'u') / spec.c2,
    # R_k and T_k share the raw formula P_k^+ D_x, T_k^* and Q_k share P_k^- D_x; they differ in domain
    'Rk': _rk,
    'Tk': _rk,
    'Tk_star': _tk_star,
    'Qk': _tk_star,
    'D2': _d2,
    'Ak': _ak,
    'Bk': _bk,
    'Ak_r': _ak,
    'Bk_r': _bk,
}


def apply(spec: OperatorSpec, f: Function) -> Function:
    if f.dim != spec.m:
        raise CalculusError(f'operator for m={spec.m} applied to a function of dimension {f.dim}')
    op = _table[spec.name]
    g = _lift(f)
    out = mirror(lambda h: op(h, spec))(g) if spec.acts_right else op(g, spec)
    return _lower(out, f)


def operator(name: str, m: int, k: int = 0, side: str = 'left', c4_scale: Fraction = Fraction(1)) \
        -> Callable[[Function], Function]:
    spec = OperatorSpec(name, m, k, side, c4_scale)
    return lambda f: apply(spec, f)


def parse_pipeline(text: str, m: int, k: int, side: str = 'left') -> List[OperatorSpec]:
    """Parses 'Tk* . Rk . Pk+' into specs in written order."""
    names = [part.strip() for part in re.split(r'\s*(?:\.|∘)\s*', text.strip()) if part.strip()]
    if not names:
        raise CalculusError(f'empty operator pipeline {text!r}')
    return [OperatorSpec(Aliases.get(name, name), m, k, side) for name in names]


def apply_pipeline(specs: Sequence[OperatorSpec], f: Function) -> Function:
    """Left pipelines apply right-to-left as composition; right pipelines apply in written order."""
    order = specs if specs and specs[0].acts_right else list(reversed(specs))
    return reduce(lambda acc, spec: apply(spec, acc), order, f)


# # # domain predicates # # #

class DomainCheck(NamedTuple):
    ok: bool
    residual: Function


def domain_check(f: Function, space: str, m: int, k: int, side: str = 'left') -> DomainCheck:
    if space not in SPACES:
        raise CalculusError(f'unknown space {space!r}')
    g = _lift(f)
    if not all(p.is_homogeneous('u', k) for p in g.terms.values()):
        raise CalculusError(f'input is not homogeneous of degree {k} in u', meta=str(f))
    if side == 'right':
        g = g.reversion()
    if space == 'Hk':
        residual = laplacian(g, 'u')
    elif space == 'Mk':
        residual = dirac(g, 'u')
    elif k == 0:
        residual = g
    else:
        # f = u g' with g' = -D_u f / (m + 2k - 2) monogenic
        quotient = -dirac(g, 'u') / denominator(m + 2 * k - 2)
        residual = (g - vector_multiply(quotient, 'u')) + dirac(quotient, 'u')
    if side == 'right':
        residual = residual.reversion()
    return DomainCheck(residual.is_zero, _lower(residual, f))


def range_check(m: int, k: int, f: Function, name: str) -> DomainCheck:
    """Checks the output space of R_k, T_k, T_k^*, Q_k against the operator diagram."""
    targets = {'Rk': 'Mk', 'Tk': 'Mk', 'Tk_star': 'uMk1', 'Qk': 'uMk1'}
    if name not in targets:
        raise CalculusError(f'no range assertion for {name!r}')
    return domain_check(apply(OperatorSpec(name, m, k), f), targets[name], m, k)


# # # identities # # #

class Decomposition(NamedTuple):
    eq5: Function
    eq6: Function
    eq7: Function

    @property
    def is_zero(self) -> bool:
        return all(r.is_zero for r in self)


def _require_harmonic(f: Function, m: int, k: int) -> None:
    check = domain_check(f, 'Hk', m, k)
    if not check.ok:
        raise CalculusError('input is not harmonic in u', meta=str(check.residual))


def verify_decomposition(m: int, k: int, f: Function, c4_scale: Fraction = Fraction(1)) -> Decomposition:
    """
        Compares 𝒟₂f with its three factorizations through R_k, T_k, T_k^*, Q_k: the two orderings
        of the mixed terms and the expansion through p_0, p_1 and R_{k-1}.
    """
    _require_harmonic(f, m, k)
    g = _lift(f)
    spec = OperatorSpec('D2', m, k, c4_scale=c4_scale)
    direct = _d2(g, spec)
    if k == 0:
        r0 = _rk(_rk(g, spec), spec)
        residual = direct + r0
        return Decomposition(*(_lower(residual, f),) * 3)
    c2, c4 = spec.c2, spec.c4
    plus, minus = _p_plus(g, spec), _p_minus(g, spec)
    r2_plus = _rk(_rk(plus, spec), spec)
    q2_minus = _tk_star(_tk_star(minus, spec), spec)
    last = q2_minus * (Fraction(m + 2 * k) / c4)

    eq5 = -r2_plus + _tk_star(_rk(plus, spec), spec) * (2 / c4) - \
        _rk(_tk_star(minus, spec), spec) * (2 / c4) - last
    eq6 = -r2_plus + _rk(_rk(minus, spec), spec) * (2 / c4) - \
        _tk_star(_tk_star(plus, spec), spec) * (2 / c4) - last

    lower = OperatorSpec('Rk', m, k - 1)
    p0 = -dirac(g, 'u') / c2
    r_p0 = _rk(p0, lower)
    eq7 = -r2_plus + vector_multiply(mixed(_rk(plus, spec)), 'u') * (4 / (c2 * c4)) - \
        vector_multiply(_rk(r_p0, lower), 'u') - \
        (directional(r_p0, 'u', 'x') - norm_multiply(mixed(r_p0), 'u') / c4) * (4 / c2)
    return Decomposition(*(_lower(direct - side, f) for side in (eq5, eq6, eq7)))


def verify_commutation(m: int, k: int, f: Function) -> Tuple[Function, Function]:
    """(T_k Q_k + R_k T_k) f and (T_k^* R_k + Q_k T_k^*) f."""
    g = _lift(f)
    spec = OperatorSpec('Tk', m, k)
    first = _rk(_tk_star(g, spec), spec) + _rk(_rk(g, spec), spec)
    second = _tk_star(_rk(g, spec), spec) + _tk_star(_tk_star(g, spec), spec)
    return _lower(first, f), _lower(second, f)


def verify_vector_identities(m: int, f: Function) -> Tuple[Function, Function]:
    """D_x(uf) + uD_xf + 2⟨u,D_x⟩f and D_u(uf) + mf + 2𝔼_uf + uD_uf, both identically zero."""
    g = _lift(f)
    if g.dim != m:
        raise CalculusError(f'function of dimension {g.dim} checked with m={m}')
    first = dirac(vector_multiply(g, 'u'), 'x') + vector_multiply(dirac(g, 'x'), 'u') + \
        directional(g, 'u', 'x') * 2
    second = dirac(vector_multiply(g, 'u'), 'u') + g * m + euler(g, 'u') * 2 + vector_multiply(dirac(g, 'u'), 'u')
    return _lower(first, f), _lower(second, f)


def verify_projection_algebra(m: int, k: int, f: Function) -> Dict[str, Function]:
    g = _lift(f)
    plus, minus = projection(g, m, k, 1), projection(g, m, k, -1)
    residuals = {'sum': plus + minus - g,
                 'plus_idempotent': projection(plus, m, k, 1) - plus,
                 'minus_idempotent': projection(minus, m, k, -1) - minus,
                 'orthogonal': projection(minus, m, k, 1)}
    return {name: _lower(r, f) for name, r in residuals.items()}


def monogenic_shift_residual(m: int, k: int, p: Function) -> Function:
    """D_u(u p) + (m + 2k - 2) p for p monogenic of degree k - 1 in u."""
    g = _lift(p)
    return _lower(dirac(vector_multiply(g, 'u'), 'u') + g * (m + 2 * k - 2), p)


def factorization_residual(m: int, k: int, f: Function, c4_scale: Fraction = Fraction(1)) -> Function:
    """𝒟₂f − (R_kA_kf + Q_kB_kf)."""
    g = _lift(f)
    spec = OperatorSpec('Ak', m, k, c4_scale=c4_scale)
    out = _d2(g, spec) - _rk(_ak(g, spec), spec) - _tk_star(_bk(g, spec), spec)
    return _lower(out, f)


def intertwined(name: str, m: int, k: int, c4_scale: Fraction = Fraction(1)) -> Callable[[Function], Function]:
    """The operators R_kA_k, Q_kB_k and 𝒟₂ as callables."""
    spec = OperatorSpec('D2' if name == 'D2' else 'Ak', m, k, c4_scale=c4_scale)
    ops: Dict[str, Callable[[RadialFunction], RadialFunction]] = {
        'RkAk': lambda g: _rk(_ak(g, spec), spec),
        'QkBk': lambda g: _tk_star(_bk(g, spec), spec),
        'D2': lambda g: _d2(g, spec)}
    if name not in ops:
        raise CalculusError(f'unknown intertwining operator {name!r}')
    return lambda f: _lower(ops[name](_lift(f)), f)


def residual_size(residual: Optional[Function]) -> float:
    return 0. if residual is None else residual.max_abs()
