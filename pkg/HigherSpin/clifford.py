"""
Exact arithmetic in the real Clifford algebra Cl_m with e_i e_i = -1.

Scalars live in the field of rationals graded by half-integer powers of pi, which is closed
under every constant the kernels need (sphere areas, Gamma at half-integers).
Blades are stored as bitmasks: bit i-1 set means e_i is present.
"""

import logging
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

MAX_DIM = 10

Rational = Union[int, Fraction]


class CliffordError(AssertionError):
    def __init__(self, message: str, meta: Any = None):
        super().__init__(message)
        self.message = message
        self.meta = meta


def _is_numeric(x: Any) -> bool:
    return isinstance(x, (float, np.floating, np.ndarray))


def _is_scalar_like(x: Any) -> bool:
    return isinstance(x, (int, Fraction, ExactScalar)) or _is_numeric(x)


class ExactScalar:
    """
        A finite sum Σ q_j π^j with rational q_j and half-integer j.

        Interacts with floats and numpy arrays by collapsing to its numeric shadow, so multivectors
        with array-valued coefficients can be built on top of exact constants.
    """
    __slots__ = ('terms',)
    __array_ufunc__ = None

    def __init__(self, terms: Union[Rational, Mapping[Rational, Rational], None] = None):
        if terms is None:
            terms = {}
        elif isinstance(terms, (int, Fraction)):
            terms = {0: terms}
        clean: Dict[Fraction, Fraction] = {}
        for exponent, coeff in terms.items():
            exponent = Fraction(exponent)
            if exponent.denominator not in (1, 2):
                raise CliffordError(f'pi exponent {exponent} is not a half-integer')
            clean[exponent] = clean.get(exponent, Fraction(0)) + Fraction(coeff)
        self.terms: Tuple[Tuple[Fraction, Fraction], ...] = tuple(sorted((e, c) for e, c in clean.items() if c))

    @classmethod
    def _raw(cls, terms: Iterable[Tuple[Fraction, Fraction]]) -> 'ExactScalar':
        out = cls.__new__(cls)
        out.terms = tuple(terms)
        return out

    @staticmethod
    def pi_power(exponent: Rational, coeff: Rational = 1) -> 'ExactScalar':
        return ExactScalar({exponent: coeff})

    @staticmethod
    def coerce(x: Union['ExactScalar', Rational]) -> 'ExactScalar':
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactScalar(x)
        raise CliffordError(f'cannot coerce {type(x).__name__} into an exact scalar')

    def as_dict(self) -> Dict[Fraction, Fraction]:
        return dict(self.terms)

    @property
    def grades(self) -> Tuple[Fraction, ...]:
        return tuple(e for e, _ in self.terms)

    @property
    def rational(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and self.terms[0][0] == 0:
            return self.terms[0][1]
        raise CliffordError(f'{self} is not rational')

    @property
    def shadow(self) -> float:
        return float(sum(float(c) * math.pi ** float(e) for e, c in self.terms))

    def __float__(self) -> float:
        return self.shadow

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __neg__(self) -> 'ExactScalar':
        return ExactScalar._raw((e, -c) for e, c in self.terms)

    def __add__(self, other: Any) -> Any:
        if isinstance(other, ExactScalar):
            if not other.terms:
                return self
            if not self.terms:
                return other
            if len(self.terms) == 1 and len(other.terms) == 1 and self.terms[0][0] == other.terms[0][0]:
                coeff = self.terms[0][1] + other.terms[0][1]
                return ExactScalar._raw(((self.terms[0][0], coeff),) if coeff else ())
            merged = dict(self.terms)
            for e, c in other.terms:
                merged[e] = merged.get(e, Fraction(0)) + c
            return ExactScalar._raw(sorted((e, c) for e, c in merged.items() if c))
        if isinstance(other, (int, Fraction)):
            return self + ExactScalar(other)
        if _is_numeric(other):
            return self.shadow + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: Any) -> Any:
        return self + (-other)

    def __rsub__(self, other: Any) -> Any:
        return (-self) + other

    def __mul__(self, other: Any) -> Any:
        if isinstance(other, ExactScalar):
            if len(self.terms) == 1 and len(other.terms) == 1:
                (ea, ca), (eb, cb) = self.terms[0], other.terms[0]
                return ExactScalar._raw(((ea + eb, ca * cb),))
            out: Dict[Fraction, Fraction] = {}
            for ea, ca in self.terms:
                for eb, cb in other.terms:
                    out[ea + eb] = out.get(ea + eb, Fraction(0)) + ca * cb
            return ExactScalar._raw(sorted((e, c) for e, c in out.items() if c))
        if isinstance(other, (int, Fraction)):
            if not other:
                return ExactScalar._raw(())
            return ExactScalar._raw((e, c * other) for e, c in self.terms)
        if _is_numeric(other):
            return self.shadow * other
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> 'ExactScalar':
        if len(self.terms) != 1:
            raise CliffordError(f'only single-grade scalars are invertible, got {self}')
        e, c = self.terms[0]
        return ExactScalar._raw(((-e, 1 / c),))

    def __truediv__(self, other: Any) -> Any:
        if isinstance(other, ExactScalar):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError('division of an exact scalar by zero')
            return self * (1 / Fraction(other))
        if _is_numeric(other):
            return self.shadow / other
        return NotImplemented

    def __rtruediv__(self, other: Any) -> Any:
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        if _is_numeric(other):
            return other / self.shadow
        return NotImplemented

    def __pow__(self, n: int) -> 'ExactScalar':
        if len(self.terms) == 1:
            e, c = self.terms[0]
            return ExactScalar._raw(((e * n, c ** n),))
        if n < 0:
            raise CliffordError(f'negative power of multi-grade scalar {self}')
        out = ExactScalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, ExactScalar):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ExactScalar(other).terms
        if isinstance(other, (float, np.floating)):
            return self.shadow == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        return str(self)

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        return ' + '.join(_format_atom(c, e) for e, c in self.terms)

    @staticmethod
    def parse(text: str) -> 'ExactScalar':
        text = text.strip()
        if text == '0':
            return ExactScalar()
        out: Dict[Fraction, Fraction] = {}
        for atom in text.split(' + '):
            match = _SCALAR_ATOM.fullmatch(atom.strip())
            if match is None:
                raise CliffordError(f'cannot parse scalar atom {atom!r}')
            coeff, exponent = Fraction(match.group(1)), Fraction(match.group(2) or 0)
            out[exponent] = out.get(exponent, Fraction(0)) + coeff
        return ExactScalar(out)


_SCALAR_ATOM = re.compile(r'(-?\d+(?:/\d+)?)(?:\*pi\^\((-?\d+(?:/\d+)?)\))?')


def _format_atom(coeff: Fraction, exponent: Fraction) -> str:
    return f'{coeff}' if exponent == 0 else f'{coeff}*pi^({exponent})'


Scalar = Union[ExactScalar, float, np.ndarray]


def is_zero_scalar(c: Any) -> bool:
    if isinstance(c, np.ndarray):
        return not c.any()
    return not c


def to_scalar(c: Any) -> Scalar:
    if isinstance(c, (int, Fraction)):
        return ExactScalar(c)
    return c


def gamma_half(n: int) -> ExactScalar:
    """Γ(n/2) for a positive integer n."""
    if n <= 0:
        raise CliffordError(f'Γ({n}/2) is not defined here')
    if n % 2 == 0:
        return ExactScalar(math.factorial(n // 2 - 1))
    j = (n - 1) // 2
    return ExactScalar.pi_power(Fraction(1, 2), Fraction(math.factorial(2 * j), 4 ** j * math.factorial(j)))


@lru_cache(maxsize=None)
def sphere_area(m: int) -> ExactScalar:
    """ω_m: the area of the unit sphere S^{m-1} in R^m."""
    return ExactScalar.pi_power(Fraction(m, 2), 2) / gamma_half(m)


# # # Blades # # #

def blade_indices(blade: int) -> Tuple[int, ...]:
    return tuple(i + 1 for i in range(blade.bit_length()) if blade >> i & 1)


def blade_from_indices(indices: Iterable[int]) -> Tuple[int, int]:
    """Returns (sign, bitmask) of the product e_{i1}...e_{ir} in the given order."""
    sign, blade = 1, 0
    for i in indices:
        s, blade = _product_sign(blade, 1 << (i - 1)), blade ^ (1 << (i - 1))
        sign *= s
    return sign, blade


def grade_of(blade: int) -> int:
    return bin(blade).count('1')


@lru_cache(maxsize=None)
def _product_sign(a: int, b: int) -> int:
    swaps, rest = 0, a >> 1
    while rest:
        swaps += bin(rest & b).count('1')
        rest >>= 1
    # every shared index contributes e_i e_i = -1
    swaps += bin(a & b).count('1')
    return -1 if swaps & 1 else 1


def _reversion_sign(blade: int) -> int:
    r = grade_of(blade)
    return -1 if (r * (r - 1) // 2) & 1 else 1


def _conjugation_sign(blade: int) -> int:
    r = grade_of(blade)
    return -1 if (r * (r + 1) // 2) & 1 else 1


class Multivector:
    __slots__ = ('dim', 'coeffs')
    __array_ufunc__ = None

    def __init__(self, dim: int, coeffs: Union[Mapping[int, Any], None] = None):
        if not 1 <= dim <= MAX_DIM:
            raise CliffordError(f'dimension {dim} outside 1..{MAX_DIM}')
        self.dim = dim
        clean = {}
        for blade, c in (coeffs or {}).items():
            if blade < 0 or blade >> dim:
                raise CliffordError(f'blade {blade_indices(blade)} outside Cl_{dim}', meta=coeffs)
            c = to_scalar(c)
            if not is_zero_scalar(c):
                clean[blade] = c
        self.coeffs: Dict[int, Scalar] = clean

    @classmethod
    def _raw(cls, dim: int, coeffs: Dict[int, Scalar]) -> 'Multivector':
        out = cls.__new__(cls)
        out.dim = dim
        out.coeffs = {b: c for b, c in coeffs.items() if not is_zero_scalar(c)}
        return out

    @staticmethod
    def scalar(dim: int, c: Any = 1) -> 'Multivector':
        return Multivector(dim, {0: c})

    @staticmethod
    def basis(dim: int, *indices: int) -> 'Multivector':
        """The product e_{i1} e_{i2} ... in the order given."""
        if any(not 1 <= i <= dim for i in indices):
            raise CliffordError(f'basis indices {indices} outside 1..{dim}')
        sign, blade = blade_from_indices(indices)
        return Multivector(dim, {blade: sign})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def blades(self) -> List[Tuple[Tuple[int, ...], Scalar]]:
        return [(blade_indices(b), self.coeffs[b]) for b in sorted(self.coeffs, key=_blade_order)]

    def scalar_part(self) -> Scalar:
        return self.coeffs.get(0, ExactScalar())

    def grade_part(self, r: int) -> 'Multivector':
        return Multivector._raw(self.dim, {b: c for b, c in self.coeffs.items() if grade_of(b) == r})

    def grades(self) -> Tuple[int, ...]:
        return tuple(sorted({grade_of(b) for b in self.coeffs}))

    def is_scalar(self) -> bool:
        return all(b == 0 for b in self.coeffs)

    def vector_part(self) -> List[Scalar]:
        return [self.coeffs.get(1 << i, ExactScalar()) for i in range(self.dim)]

    def _check(self, other: 'Multivector') -> None:
        if self.dim != other.dim:
            raise CliffordError(f'dimension mismatch: {self.dim} vs {other.dim}')

    def __neg__(self) -> 'Multivector':
        return Multivector._raw(self.dim, {b: -c for b, c in self.coeffs.items()})

    def __add__(self, other: Any) -> 'Multivector':
        if not isinstance(other, Multivector):
            if not _is_scalar_like(other):
                return NotImplemented
            other = Multivector.scalar(self.dim, other)
        self._check(other)
        out = dict(self.coeffs)
        for b, c in other.coeffs.items():
            out[b] = out[b] + c if b in out else c
        return Multivector._raw(self.dim, out)

    __radd__ = __add__

    def __sub__(self, other: Any) -> 'Multivector':
        if not isinstance(other, Multivector) and not _is_scalar_like(other):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> 'Multivector':
        return (-self) + other

    def scale(self, c: Any) -> 'Multivector':
        c = to_scalar(c)
        if is_zero_scalar(c):
            return Multivector._raw(self.dim, {})
        return Multivector._raw(self.dim, {b: v * c for b, v in self.coeffs.items()})

    def __mul__(self, other: Any) -> 'Multivector':
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if not _is_scalar_like(other):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other: Any) -> 'Multivector':
        if not _is_scalar_like(other):
            return NotImplemented
        c = to_scalar(other)
        return Multivector._raw(self.dim, {b: c * v for b, v in self.coeffs.items()})

    def __truediv__(self, other: Any) -> 'Multivector':
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        if isinstance(other, ExactScalar):
            return self.scale(other.inverse())
        return Multivector._raw(self.dim, {b: v / other for b, v in self.coeffs.items()})

    def reversion(self) -> 'Multivector':
        return reversion(self)

    def conjugate(self) -> 'Multivector':
        return clifford_conjugate(self)

    def inverse(self) -> 'Multivector':
        """Inverse of a Clifford group element (vector, versor or nonzero scalar): conj(a) / (a conj(a))."""
        norm = self * self.conjugate()
        if not norm.is_scalar() or norm.is_zero:
            raise CliffordError(f'{self} is not invertible as a versor')
        return self.conjugate() / norm.scalar_part()

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(np.asarray(float(c) if isinstance(c, ExactScalar) else c))))
                    for c in self.coeffs.values()), default=0.)

    def to_numeric(self) -> 'Multivector':
        return Multivector._raw(self.dim, {b: float(c) if isinstance(c, ExactScalar) else c
                                           for b, c in self.coeffs.items()})

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, Multivector):
            return self.dim == other.dim and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, ExactScalar)):
            return self.coeffs == Multivector.scalar(self.dim, other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.dim, tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        return str(self)

    def __str__(self) -> str:
        atoms = []
        for indices, c in self.blades():
            blade = 'e{' + ','.join(map(str, indices)) + '}'
            if isinstance(c, ExactScalar):
                atoms.extend(f'{_format_atom(q, e)}*{blade}' for e, q in c.terms)
            else:
                atoms.append(f'{c!r}*{blade}')
        return ' + '.join(atoms) if atoms else '0'

    def pretty(self) -> str:
        from .utils.printing import blade, pi_power
        atoms = []
        for indices, c in self.blades():
            if isinstance(c, ExactScalar):
                atoms.extend(f'{q}{pi_power(e)}{"" if not indices else blade(indices)}' for e, q in c.terms)
            else:
                atoms.append(f'{c:g}{blade(indices) if indices else ""}')
        return ' + '.join(atoms) if atoms else '0'

    @staticmethod
    def parse(text: str, dim: int) -> 'Multivector':
        text = text.strip()
        if text == '0':
            return Multivector(dim)
        out: Dict[int, Any] = {}
        for atom in text.split(' + '):
            match = _MV_ATOM.fullmatch(atom.strip())
            if match is None:
                raise CliffordError(f'cannot parse multivector atom {atom!r}')
            scalar = ExactScalar.parse(match.group(1))
            indices = [int(i) for i in match.group(2).split(',') if i]
            sign, blade = blade_from_indices(indices)
            term = scalar * sign
            out[blade] = out[blade] + term if blade in out else term
        return Multivector(dim, out)


_MV_ATOM = re.compile(r'(.+)\*e\{([\d,]*)\}')


def _blade_order(blade: int) -> Tuple[int, Tuple[int, ...]]:
    return grade_of(blade), blade_indices(blade)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    out: Dict[int, Scalar] = {}
    for ba, ca in a.coeffs.items():
        for bb, cb in b.coeffs.items():
            blade = ba ^ bb
            term = ca * cb
            if _product_sign(ba, bb) < 0:
                term = -term
            out[blade] = out[blade] + term if blade in out else term
    return Multivector._raw(a.dim, out)


def reversion(a: Multivector) -> Multivector:
    return Multivector._raw(a.dim, {b: c if _reversion_sign(b) > 0 else -c for b, c in a.coeffs.items()})


def clifford_conjugate(a: Multivector) -> Multivector:
    return Multivector._raw(a.dim, {b: c if _conjugation_sign(b) > 0 else -c for b, c in a.coeffs.items()})


def vector_embed(coords: Sequence[Any], dim: Union[int, None] = None) -> Multivector:
    """Σ coords_i e_i."""
    if dim is not None and len(coords) != dim:
        raise CliffordError(f'expected {dim} coordinates, got {len(coords)}')
    if not 1 <= len(coords) <= MAX_DIM:
        raise CliffordError(f'cannot embed {len(coords)} coordinates')
    return Multivector(len(coords), {1 << i: c for i, c in enumerate(coords)})
