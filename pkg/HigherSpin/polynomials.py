"""
Clifford-coefficient polynomials in the vector variables x, u, v and radial-weighted sums
Σ p_q(x, u, v) (x·x)^q with half-integer q.
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .clifford import ExactScalar, Multivector, is_zero_scalar

logger = logging.getLogger(__name__)

VARIABLES = ('x', 'u', 'v')

Key = Tuple[int, ...]


class PolynomialError(AssertionError):
    def __init__(self, message: str, meta: Any = None):
        super().__init__(message)
        self.message = message
        self.meta = meta


def _slot(dim: int, var: str) -> range:
    if var not in VARIABLES:
        raise PolynomialError(f'unknown variable {var!r}')
    start = VARIABLES.index(var) * dim
    return range(start, start + dim)


def _key(dim: int, exponents: Mapping[str, Sequence[int]]) -> Key:
    key = [0] * (3 * dim)
    for var, exps in exponents.items():
        if len(exps) != dim:
            raise PolynomialError(f'{var}-exponent {tuple(exps)} has the wrong length for m={dim}')
        for pos, e in zip(_slot(dim, var), exps):
            key[pos] = e
    return tuple(key)


def _coerce_coeff(dim: int, c: Any) -> Multivector:
    if isinstance(c, Multivector):
        if c.dim != dim:
            raise PolynomialError(f'coefficient of dimension {c.dim} in a polynomial of dimension {dim}')
        return c
    return Multivector.scalar(dim, c)


class CliffPoly:
    __slots__ = ('dim', 'terms')

    def __init__(self, dim: int, terms: Optional[Mapping[Key, Any]] = None):
        self.dim = dim
        clean: Dict[Key, Multivector] = {}
        for key, c in (terms or {}).items():
            if len(key) != 3 * dim or any(e < 0 for e in key):
                raise PolynomialError(f'malformed exponent key {key} for m={dim}')
            c = _coerce_coeff(dim, c)
            if c:
                clean[tuple(key)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, dim: int, terms: Dict[Key, Multivector]) -> 'CliffPoly':
        out = cls.__new__(cls)
        out.dim = dim
        out.terms = {k: c for k, c in terms.items() if c}
        return out

    # # # constructors # # #

    @staticmethod
    def zero(dim: int) -> 'CliffPoly':
        return CliffPoly(dim)

    @staticmethod
    def constant(dim: int, c: Any = 1) -> 'CliffPoly':
        return CliffPoly(dim, {(0,) * (3 * dim): c})

    @staticmethod
    def monomial(dim: int, exponents: Mapping[str, Sequence[int]], coeff: Any = 1) -> 'CliffPoly':
        return CliffPoly(dim, {_key(dim, exponents): coeff})

    @staticmethod
    def variable(dim: int, var: str, i: int) -> 'CliffPoly':
        """The coordinate var_i, 1-based."""
        if not 1 <= i <= dim:
            raise PolynomialError(f'index {i} outside 1..{dim}')
        key = [0] * (3 * dim)
        key[_slot(dim, var)[i - 1]] = 1
        return CliffPoly(dim, {tuple(key): 1})

    @staticmethod
    def vector(dim: int, var: str) -> 'CliffPoly':
        """The grade-1 polynomial Σ e_i var_i."""
        return _vector(dim, var)

    @staticmethod
    def norm_squared(dim: int, var: str) -> 'CliffPoly':
        return _norm_squared(dim, var)

    @staticmethod
    def inner(dim: int, a: str, b: str) -> 'CliffPoly':
        """⟨a, b⟩ = Σ a_i b_i for two variable names."""
        return sum((CliffPoly.variable(dim, a, i) * CliffPoly.variable(dim, b, i) for i in range(1, dim + 1)),
                   CliffPoly.zero(dim))

    # # # queries # # #

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def exponents(self, key: Key, var: str) -> Tuple[int, ...]:
        return tuple(key[p] for p in _slot(self.dim, var))

    def degree(self, var: str) -> int:
        slot = _slot(self.dim, var)
        return max((sum(key[p] for p in slot) for key in self.terms), default=0)

    def degrees(self, var: str) -> Tuple[int, ...]:
        slot = _slot(self.dim, var)
        return tuple(sorted({sum(key[p] for p in slot) for key in self.terms}))

    def is_homogeneous(self, var: str, k: int) -> bool:
        return self.degrees(var) in ((k,), ())

    def depends_on(self, var: str) -> bool:
        slot = _slot(self.dim, var)
        return any(key[p] for key in self.terms for p in slot)

    def is_scalar_valued(self) -> bool:
        return all(c.is_scalar() for c in self.terms.values())

    def is_constant(self) -> bool:
        return all(not any(key) for key in self.terms)

    def to_multivector(self) -> Multivector:
        if not self.is_constant():
            raise PolynomialError('polynomial is not constant', meta=str(self))
        return self.terms.get((0,) * (3 * self.dim), Multivector(self.dim))

    def max_abs(self) -> float:
        return max((c.max_abs() for c in self.terms.values()), default=0.)

    # # # arithmetic # # #

    def _check(self, other: Union['CliffPoly', 'RadialFunction']) -> None:
        if self.dim != other.dim:
            raise PolynomialError(f'dimension mismatch: {self.dim} vs {other.dim}')

    def __neg__(self) -> 'CliffPoly':
        return CliffPoly._raw(self.dim, {k: -c for k, c in self.terms.items()})

    def __add__(self, other: Any) -> 'CliffPoly':
        if isinstance(other, RadialFunction):
            return NotImplemented
        if not isinstance(other, CliffPoly):
            other = CliffPoly.constant(self.dim, other)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return CliffPoly._raw(self.dim, out)

    __radd__ = __add__

    def __sub__(self, other: Any) -> 'CliffPoly':
        if isinstance(other, RadialFunction):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> 'CliffPoly':
        return (-self) + other

    def __mul__(self, other: Any) -> 'CliffPoly':
        if isinstance(other, RadialFunction):
            return NotImplemented
        if isinstance(other, CliffPoly):
            self._check(other)
            out: Dict[Key, Multivector] = {}
            for ka, ca in self.terms.items():
                for kb, cb in other.terms.items():
                    key = tuple(a + b for a, b in zip(ka, kb))
                    term = ca * cb
                    out[key] = out[key] + term if key in out else term
            return CliffPoly._raw(self.dim, out)
        if isinstance(other, Multivector):
            return CliffPoly._raw(self.dim, {k: c * other for k, c in self.terms.items()})
        return CliffPoly._raw(self.dim, {k: c.scale(other) for k, c in self.terms.items()})

    def __rmul__(self, other: Any) -> 'CliffPoly':
        return CliffPoly._raw(self.dim, {k: other * c for k, c in self.terms.items()})

    def __truediv__(self, other: Any) -> 'CliffPoly':
        return CliffPoly._raw(self.dim, {k: c / other for k, c in self.terms.items()})

    def __pow__(self, n: int) -> 'CliffPoly':
        out = CliffPoly.constant(self.dim)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, RadialFunction):
            return other == self
        if isinstance(other, CliffPoly):
            return self.dim == other.dim and self.terms == other.terms
        if isinstance(other, (int, Fraction, ExactScalar, Multivector)):
            return self == CliffPoly.constant(self.dim, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.dim, tuple(sorted((k, hash(c)) for k, c in self.terms.items()))))

    # # # structure # # #

    def derivative(self, var: str, i: int) -> 'CliffPoly':
        """∂/∂var_i, 1-based."""
        pos = _slot(self.dim, var)[i - 1]
        out: Dict[Key, Multivector] = {}
        for key, c in self.terms.items():
            e = key[pos]
            if e:
                new = key[:pos] + (e - 1,) + key[pos + 1:]
                term = c.scale(e)
                out[new] = out[new] + term if new in out else term
        return CliffPoly._raw(self.dim, out)

    def homogeneous_component(self, var: str, k: int) -> 'CliffPoly':
        slot = _slot(self.dim, var)
        return CliffPoly._raw(self.dim, {key: c for key, c in self.terms.items() if sum(key[p] for p in slot) == k})

    def map_coefficients(self, fn: Callable[[Multivector], Multivector]) -> 'CliffPoly':
        return CliffPoly._raw(self.dim, {k: fn(c) for k, c in self.terms.items()})

    def reversion(self) -> 'CliffPoly':
        return self.map_coefficients(Multivector.reversion)

    def conjugate(self) -> 'CliffPoly':
        return self.map_coefficients(Multivector.conjugate)

    def grade_part(self, r: int) -> 'CliffPoly':
        return self.map_coefficients(lambda c: c.grade_part(r))

    def rename(self, src: str, dst: str) -> 'CliffPoly':
        """Moves every exponent of `src` onto `dst`; `dst` must be absent."""
        if self.depends_on(dst):
            raise PolynomialError(f'cannot rename {src} to {dst}: {dst} already occurs')
        ssl, dsl = _slot(self.dim, src), _slot(self.dim, dst)
        out = {}
        for key, c in self.terms.items():
            new = list(key)
            for s, d in zip(ssl, dsl):
                new[d], new[s] = key[s], 0
            out[tuple(new)] = c
        return CliffPoly._raw(self.dim, out)

    def split(self, var: str) -> Dict[Tuple[int, ...], Dict[Key, Multivector]]:
        slot = _slot(self.dim, var)
        groups: Dict[Tuple[int, ...], Dict[Key, Multivector]] = {}
        for key, c in self.terms.items():
            exps = tuple(key[p] for p in slot)
            rest = list(key)
            for p in slot:
                rest[p] = 0
            groups.setdefault(exps, {})[tuple(rest)] = c
        return groups

    def substitute(self, var: str, images: Sequence[Union['CliffPoly', 'RadialFunction']]) \
            -> Union['CliffPoly', 'RadialFunction']:
        """Replaces var_i by the scalar-valued images[i-1]."""
        if len(images) != self.dim:
            raise PolynomialError(f'expected {self.dim} images, got {len(images)}')
        if not all(img.is_scalar_valued() for img in images):
            raise PolynomialError('substituted images must be scalar valued')
        powers: Dict[Tuple[int, int], Any] = {}

        def power(i: int, e: int) -> Any:
            if (i, e) not in powers:
                powers[(i, e)] = CliffPoly.constant(self.dim) if e == 0 else power(i, e - 1) * images[i]
            return powers[(i, e)]

        total: Union[CliffPoly, RadialFunction] = CliffPoly.zero(self.dim)
        for exps, rest in self.split(var).items():
            factor: Any = CliffPoly.constant(self.dim)
            for i, e in enumerate(exps):
                if e:
                    factor = factor * power(i, e)
            total = total + factor * CliffPoly._raw(self.dim, rest)
        return total

    def shift(self, var: str, offset: Sequence[Any], scale: Any = 1) -> 'CliffPoly':
        """Substitutes var_i ↦ offset_i + scale · var_i."""
        images = [CliffPoly.constant(self.dim, o) + CliffPoly.variable(self.dim, var, i + 1) * scale
                  for i, o in enumerate(offset)]
        return self.substitute(var, images)

    def evaluate_partial(self, var: str, values: Sequence[Any]) -> 'CliffPoly':
        """Plugs values into var; values may be rationals, exact scalars, floats or numpy arrays."""
        if len(values) != self.dim:
            raise PolynomialError(f'expected {self.dim} values, got {len(values)}')
        cache: Dict[Tuple[int, ...], Any] = {}
        out: Dict[Key, Multivector] = {}
        for exps, rest in self.split(var).items():
            if exps not in cache:
                factor: Any = 1
                for value, e in zip(values, exps):
                    if e:
                        factor = factor * value ** e
                cache[exps] = factor
            factor = cache[exps]
            if is_zero_scalar(factor):
                continue
            for key, c in rest.items():
                term = c.scale(factor)
                out[key] = out[key] + term if key in out else term
        return CliffPoly._raw(self.dim, out)

    def evaluate(self, pt: 'EvalPoint') -> Multivector:
        out = self
        for var in VARIABLES:
            out = out.evaluate_partial(var, getattr(pt, var))
        return out.to_multivector()

    # # # text # # #

    def __repr__(self) -> str:
        return str(self)

    def __str__(self) -> str:
        atoms = []
        for key in sorted(self.terms):
            mon = ''.join(f'*{var}^({",".join(str(key[p]) for p in _slot(self.dim, var))})'
                          for var in VARIABLES if any(key[p] for p in _slot(self.dim, var)))
            atoms.extend(f'{atom}{mon}' for atom in str(self.terms[key]).split(' + '))
        return ' + '.join(atoms) if atoms else '0'

    def pretty(self) -> str:
        from .utils.printing import monomial
        atoms = []
        for key in sorted(self.terms):
            mon = ''.join(monomial(var, self.exponents(key, var)) for var in VARIABLES)
            coeff = self.terms[key].pretty()
            atoms.append(f'({coeff}){mon}' if mon else coeff)
        return ' + '.join(atoms) if atoms else '0'

    @staticmethod
    def parse(text: str, dim: int) -> 'CliffPoly':
        text = text.strip()
        if text == '0':
            return CliffPoly.zero(dim)
        out: Dict[Key, Multivector] = {}
        for atom in text.split(' + '):
            match = _POLY_ATOM.fullmatch(atom.strip())
            if match is None:
                raise PolynomialError(f'cannot parse polynomial atom {atom!r}')
            coeff = Multivector.parse(match.group(1), dim)
            exponents = {var: tuple(int(e) for e in exps.split(','))
                         for var, exps in _POLY_MONOMIAL.findall(match.group(2))}
            key = _key(dim, exponents)
            out[key] = out[key] + coeff if key in out else coeff
        return CliffPoly._raw(dim, out)


_POLY_ATOM = re.compile(r'(.+?\*e\{[\d,]*\})((?:\*[xuv]\^\([\d,]+\))*)')
_POLY_MONOMIAL = re.compile(r'\*([xuv])\^\(([\d,]+)\)')


@lru_cache(maxsize=None)
def _vector(dim: int, var: str) -> CliffPoly:
    return sum((CliffPoly.variable(dim, var, i) * Multivector.basis(dim, i) for i in range(1, dim + 1)),
               CliffPoly.zero(dim))


@lru_cache(maxsize=None)
def _norm_squared(dim: int, var: str) -> CliffPoly:
    return CliffPoly.inner(dim, var, var)


@lru_cache(maxsize=None)
def _rho_power(dim: int, n: int) -> CliffPoly:
    if n == 0:
        return CliffPoly.constant(dim)
    return _rho_power(dim, n - 1) * _norm_squared(dim, 'x')


def _normalize(dim: int, terms: Mapping[Any, CliffPoly]) -> Dict[Fraction, CliffPoly]:
    # One term per residue class of q mod 1, at the smallest exponent present; nonnegative
    # integer exponents fold into the polynomial and positive half-integers fold down to 1/2.
    classes: Dict[int, Dict[Fraction, CliffPoly]] = {}
    for q, p in terms.items():
        q = Fraction(q)
        if q.denominator not in (1, 2):
            raise PolynomialError(f'radial exponent {q} is not a half-integer')
        if p.dim != dim:
            raise PolynomialError(f'dimension mismatch: {p.dim} vs {dim}')
        if p.is_zero:
            continue
        group = classes.setdefault(q.denominator, {})
        group[q] = group[q] + p if q in group else p
    out: Dict[Fraction, CliffPoly] = {}
    for denominator, group in classes.items():
        floor = Fraction(0) if denominator == 1 else Fraction(1, 2)
        base = min(min(group), floor)
        total = CliffPoly.zero(dim)
        for q, p in group.items():
            shift = q - base
            total = total + (p if shift == 0 else p * _rho_power(dim, int(shift)))
        if total:
            out[base] = total
    return out


def _exact_sqrt(value: Fraction) -> Fraction:
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        raise PolynomialError(f'{value} has no rational square root')
    return Fraction(num, den)


def radial_value(rho: Any, q: Fraction) -> Any:
    """(x·x)^q at a point with x·x = rho."""
    if isinstance(rho, (int, Fraction)):
        rho = Fraction(rho)
        if rho == 0:
            if q < 0:
                raise PolynomialError('singular point: x = 0 with a negative radial exponent')
            return Fraction(0) if q > 0 else Fraction(1)
        if q.denominator == 1:
            return rho ** int(q)
        return _exact_sqrt(rho) ** int(2 * q)
    rho = np.asarray(rho, dtype=float)
    if q < 0 and not np.all(rho > 0):
        raise PolynomialError('singular point: x = 0 with a negative radial exponent')
    return np.power(rho, float(q))


class RadialFunction:
    """
        Σ p_q(x, u, v) · (x·x)^q, kept with at most one integer and one half-integer exponent.

        Differentiation, products and the u/v-side substitutions stay inside this class, which is
        the smallest one containing the fundamental solutions and their Kelvin-type arguments.
    """
    __slots__ = ('dim', 'terms')

    def __init__(self, dim: int, terms: Optional[Mapping[Any, CliffPoly]] = None):
        self.dim = dim
        self.terms: Dict[Fraction, CliffPoly] = _normalize(dim, terms or {})

    @staticmethod
    def from_poly(p: CliffPoly) -> 'RadialFunction':
        return RadialFunction(p.dim, {0: p})

    @staticmethod
    def radial(dim: int, q: Any, coeff: Any = 1) -> 'RadialFunction':
        """(x·x)^q."""
        return RadialFunction(dim, {Fraction(q): CliffPoly.constant(dim, coeff)})

    @staticmethod
    def lift(f: Union[CliffPoly, 'RadialFunction']) -> 'RadialFunction':
        return f if isinstance(f, RadialFunction) else RadialFunction.from_poly(f)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_polynomial(self) -> bool:
        return all(q == 0 for q in self.terms)

    def to_poly(self) -> CliffPoly:
        if not self.is_polynomial():
            raise PolynomialError('radial function carries nontrivial radial weights', meta=str(self))
        return self.terms.get(Fraction(0), CliffPoly.zero(self.dim))

    def is_scalar_valued(self) -> bool:
        return all(p.is_scalar_valued() for p in self.terms.values())

    def depends_on(self, var: str) -> bool:
        if var == 'x' and not self.is_polynomial():
            return True
        return any(p.depends_on(var) for p in self.terms.values())

    def degree(self, var: str) -> int:
        return max((p.degree(var) for p in self.terms.values()), default=0)

    def max_abs(self) -> float:
        return max((p.max_abs() for p in self.terms.values()), default=0.)

    def x_homogeneity(self) -> Optional[Fraction]:
        """The common degree |α_x| + 2q over all terms, or None when f is not x-homogeneous."""
        degrees = {q * 2 + d for q, p in self.terms.items() for d in p.degrees('x')}
        return degrees.pop() if len(degrees) == 1 else None

    # # # arithmetic # # #

    def _coerce(self, other: Any) -> 'RadialFunction':
        if isinstance(other, RadialFunction):
            if other.dim != self.dim:
                raise PolynomialError(f'dimension mismatch: {self.dim} vs {other.dim}')
            return other
        if isinstance(other, CliffPoly):
            if other.dim != self.dim:
                raise PolynomialError(f'dimension mismatch: {self.dim} vs {other.dim}')
            return RadialFunction.from_poly(other)
        return RadialFunction.from_poly(CliffPoly.constant(self.dim, other))

    def __neg__(self) -> 'RadialFunction':
        return self.map_polys(CliffPoly.__neg__)

    def __add__(self, other: Any) -> 'RadialFunction':
        other = self._coerce(other)
        merged = dict(self.terms)
        for q, p in other.terms.items():
            merged[q] = merged[q] + p if q in merged else p
        if merged.keys() == self.terms.keys() or merged.keys() == other.terms.keys():
            return RadialFunction._trusted(self.dim, merged)
        return RadialFunction(self.dim, merged)

    __radd__ = __add__

    def __sub__(self, other: Any) -> 'RadialFunction':
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> 'RadialFunction':
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> 'RadialFunction':
        if isinstance(other, (RadialFunction, CliffPoly)):
            other = self._coerce(other)
            out: Dict[Fraction, CliffPoly] = {}
            for qa, pa in self.terms.items():
                for qb, pb in other.terms.items():
                    q = qa + qb
                    out[q] = out[q] + pa * pb if q in out else pa * pb
            return RadialFunction(self.dim, out)
        return RadialFunction(self.dim, {q: p * other for q, p in self.terms.items()})

    def __rmul__(self, other: Any) -> 'RadialFunction':
        if isinstance(other, CliffPoly):
            return self._coerce(other) * self
        return RadialFunction(self.dim, {q: other * p for q, p in self.terms.items()})

    def __truediv__(self, other: Any) -> 'RadialFunction':
        return self.map_polys(lambda p: p / other)

    def __pow__(self, n: int) -> 'RadialFunction':
        out = RadialFunction.radial(self.dim, 0)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (RadialFunction, CliffPoly, Multivector, int, Fraction, ExactScalar)):
            return (self - self._coerce(other)).is_zero
        return NotImplemented

    __hash__ = None  # type: ignore

    @classmethod
    def _trusted(cls, dim: int, terms: Dict[Fraction, CliffPoly]) -> 'RadialFunction':
        out = cls.__new__(cls)
        out.dim = dim
        out.terms = {q: p for q, p in terms.items() if p}
        # exponents already normal; a cancelled leading term may leave a class empty, which is still normal
        return out

    # # # structure # # #

    def map_polys(self, fn: Callable[[CliffPoly], CliffPoly]) -> 'RadialFunction':
        """Applies a linear map commuting with x·x (anything acting on u, v or the values) termwise."""
        return RadialFunction(self.dim, {q: fn(p) for q, p in self.terms.items()})

    def derivative(self, var: str, i: int) -> 'RadialFunction':
        if var != 'x':
            return self.map_polys(lambda p: p.derivative(var, i))
        xi = CliffPoly.variable(self.dim, 'x', i)
        out: Dict[Fraction, CliffPoly] = {}
        for q, p in self.terms.items():
            dp = p.derivative('x', i)
            if dp:
                out[q] = out[q] + dp if q in out else dp
            if q:
                extra = xi * p * (2 * q)
                out[q - 1] = out[q - 1] + extra if q - 1 in out else extra
        return RadialFunction(self.dim, out)

    def reversion(self) -> 'RadialFunction':
        return self.map_polys(CliffPoly.reversion)

    def conjugate(self) -> 'RadialFunction':
        return self.map_polys(CliffPoly.conjugate)

    def homogeneous_component(self, var: str, k: int) -> 'RadialFunction':
        if var == 'x':
            raise PolynomialError('x-homogeneous components of radial functions are not separated')
        return self.map_polys(lambda p: p.homogeneous_component(var, k))

    def rename(self, src: str, dst: str) -> 'RadialFunction':
        if 'x' in (src, dst):
            raise PolynomialError('x cannot be renamed inside a radial function')
        return self.map_polys(lambda p: p.rename(src, dst))

    def substitute(self, var: str, images: Sequence[Union[CliffPoly, 'RadialFunction']]) -> 'RadialFunction':
        if var == 'x' and not self.is_polynomial():
            raise PolynomialError('x cannot be substituted under a radial weight')
        total = RadialFunction(self.dim)
        for q, p in self.terms.items():
            total = total + RadialFunction.radial(self.dim, q) * p.substitute(var, images)
        return total

    def evaluate_partial(self, var: str, values: Sequence[Any]) -> Union[CliffPoly, 'RadialFunction']:
        if var != 'x':
            return self.map_polys(lambda p: p.evaluate_partial(var, values))
        rho = sum((value * value for value in values[1:]), values[0] * values[0])
        total = CliffPoly.zero(self.dim)
        for q, p in self.terms.items():
            weight = radial_value(rho, q)
            total = total + p.evaluate_partial('x', values).map_coefficients(lambda c: c.scale(weight))
        return total

    def evaluate(self, pt: 'EvalPoint') -> Multivector:
        out = self.evaluate_partial('x', pt.x)
        return out.evaluate_partial('u', pt.u).evaluate_partial('v', pt.v).to_multivector()

    def restrict_to_sphere(self, radius: Any = 1) -> CliffPoly:
        """The restriction to x = radius·ζ with |ζ| = 1, written as a polynomial in ζ (the x slot)."""
        radius = Fraction(radius)
        slot = _slot(self.dim, 'x')
        out: Dict[Key, Multivector] = {}
        for q, p in self.terms.items():
            for key, c in p.terms.items():
                power = int(2 * q) + sum(key[s] for s in slot)
                term = c.scale(radius ** power)
                out[key] = out[key] + term if key in out else term
        return CliffPoly._raw(self.dim, out)

    # # # text # # #

    def __repr__(self) -> str:
        return str(self)

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        return ' + '.join(f'[{self.terms[q]}] * r^({q})' for q in sorted(self.terms))

    def pretty(self) -> str:
        from .utils.printing import radial
        if not self.terms:
            return '0'
        return ' + '.join(f'[{self.terms[q].pretty()}]{radial(q)}' for q in sorted(self.terms))

    @staticmethod
    def parse(text: str, dim: int) -> 'RadialFunction':
        text = text.strip()
        if text == '0':
            return RadialFunction(dim)
        terms = {}
        for poly, q in _RADIAL_TERM.findall(text):
            q = Fraction(q)
            p = CliffPoly.parse(poly, dim)
            terms[q] = terms[q] + p if q in terms else p
        if not terms:
            raise PolynomialError(f'cannot parse radial function {text!r}')
        return RadialFunction(dim, terms)


_RADIAL_TERM = re.compile(r'\[([^\]]*)\] \* r\^\((-?\d+(?:/\d+)?)\)')


Function = Union[CliffPoly, RadialFunction]


@dataclass(frozen=True)
class EvalPoint:
    x: Tuple[Any, ...]
    u: Tuple[Any, ...]
    v: Tuple[Any, ...]
    mode: str = 'exact'

    def __post_init__(self):
        if self.mode not in ('exact', 'float'):
            raise PolynomialError(f'unknown evaluation mode {self.mode!r}')
        if not len(self.x) == len(self.u) == len(self.v):
            raise PolynomialError('evaluation point coordinates have different lengths', meta=self)
        if self.mode == 'exact':
            if not all(isinstance(c, (int, Fraction)) for c in self.x + self.u + self.v):
                raise PolynomialError('exact evaluation needs rational coordinates', meta=self)
            object.__setattr__(self, 'x', tuple(Fraction(c) for c in self.x))
            object.__setattr__(self, 'u', tuple(Fraction(c) for c in self.u))
            object.__setattr__(self, 'v', tuple(Fraction(c) for c in self.v))
        else:
            object.__setattr__(self, 'x', tuple(float(c) for c in self.x))
            object.__setattr__(self, 'u', tuple(float(c) for c in self.u))
            object.__setattr__(self, 'v', tuple(float(c) for c in self.v))

    @staticmethod
    def at(dim: int, x: Sequence[Any] = (), u: Sequence[Any] = (), v: Sequence[Any] = (),
           mode: str = 'exact') -> 'EvalPoint':
        def pad(c: Sequence[Any]) -> Tuple[Any, ...]:
            return tuple(c) + (0,) * (dim - len(c))
        return EvalPoint(pad(x), pad(u), pad(v), mode)


def poly_arith(f: Function, g: Function, op: str) -> Function:
    if f.dim != g.dim:
        raise PolynomialError(f'dimension mismatch: {f.dim} vs {g.dim}')
    if op == 'add':
        return f + g
    if op == 'mul':
        return f * g
    raise PolynomialError(f'unknown operation {op!r}')


@lru_cache(maxsize=None)
def kelvin_images(dim: int, var: str = 'u') -> Tuple[RadialFunction, ...]:
    """The coordinates of x var x / (x·x) = var − 2⟨var, x⟩x/(x·x)."""
    rho = _norm_squared(dim, 'x')
    dot = CliffPoly.inner(dim, var, 'x')
    return tuple(RadialFunction(dim, {-1: rho * CliffPoly.variable(dim, var, i) -
                                      dot * CliffPoly.variable(dim, 'x', i) * 2})
                 for i in range(1, dim + 1))


def substitute_kelvin(f: Function, var: str = 'u') -> RadialFunction:
    if var == 'x':
        raise PolynomialError('the Kelvin-type substitution acts on u or v')
    if f.depends_on('x'):
        raise PolynomialError(f'expected a polynomial free of x, got {f}')
    if isinstance(f, RadialFunction):
        f = f.to_poly()
    return RadialFunction.lift(f.substitute(var, kelvin_images(f.dim, var)))


def evaluate(f: Function, pt: EvalPoint) -> Multivector:
    if len(pt.x) != f.dim:
        raise PolynomialError(f'point of dimension {len(pt.x)} for a function of dimension {f.dim}')
    return f.evaluate(pt)


def homogeneous_component(f: Function, var: str, k: int) -> Function:
    return f.homogeneous_component(var, k)


def monomials(dim: int, degree: int) -> List[Tuple[int, ...]]:
    """Exponent tuples of the given total degree in dim variables, lexicographically descending."""
    if degree < 0:
        return []
    return sorted((exps for exps in product(range(degree + 1), repeat=dim) if sum(exps) == degree), reverse=True)


def random_rational(rng: np.random.Generator, bound: int = 9) -> Fraction:
    num = int(rng.integers(1, bound + 1)) * (1 if rng.integers(0, 2) else -1)
    return Fraction(num, int(rng.integers(1, bound + 1)))


def random_multivector(dim: int, rng: np.random.Generator, blades: int = 2) -> Multivector:
    chosen = rng.choice(1 << dim, size=min(blades, 1 << dim), replace=False)
    return Multivector(dim, {int(b): random_rational(rng) for b in chosen})


def random_poly(dim: int, degrees: Mapping[str, Iterable[int]], rng: np.random.Generator, terms: int = 3,
                scalar: bool = False) -> CliffPoly:
    """A sparse random polynomial with one randomly chosen degree per variable in each term."""
    out = CliffPoly.zero(dim)
    for _ in range(terms):
        exponents = {}
        for var, choices in degrees.items():
            choices = list(choices)
            options = monomials(dim, int(rng.choice(choices)))
            exponents[var] = options[int(rng.integers(len(options)))]
        coeff = Multivector.scalar(dim, random_rational(rng)) if scalar else random_multivector(dim, rng)
        out = out + CliffPoly.monomial(dim, exponents, coeff)
    return out
