"""
Finite bases of the polynomial spaces 𝓗_k, 𝓜_k and u𝓜_{k-1} in the variable u, the sphere pairing,
and the reproducing kernels of 𝓗_k and 𝓜_k obtained from Gram solves.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from .calculus import projection, right_projection
from .clifford import ExactScalar, Multivector, _product_sign, gamma_half
from .polynomials import CliffPoly, Function, RadialFunction, monomials

logger = logging.getLogger(__name__)

KINDS = frozenset(['Hk', 'Mk', 'uMk1'])


class SpaceError(AssertionError):
    def __init__(self, message: str, meta: Any = None):
        super().__init__(message)
        self.message = message
        self.meta = meta


# # # exact linear algebra over QQ # # #

def _to_domain(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    return DomainMatrix([[QQ(c.numerator, c.denominator) for c in map(Fraction, row)] for row in rows],
                        (len(rows), ncols), QQ)


def _to_fractions(matrix: DomainMatrix) -> List[List[Fraction]]:
    return [[Fraction(int(e.p), int(e.q)) for e in row] for row in matrix.to_Matrix().tolist()]


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """A rational basis of {c : rows · c = 0}, one vector per free column of the reduced echelon form."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    reduced, pivots = _to_domain(rows, ncols).rref()
    entries = _to_fractions(reduced)
    basis = []
    for free in (j for j in range(ncols) if j not in pivots):
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for r, p in enumerate(pivots):
            vector[p] = -entries[r][free]
        basis.append(vector)
    return basis


def inverse(matrix: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(matrix)
    try:
        return _to_fractions(_to_domain(matrix, n).inv())
    except (DMNonInvertibleMatrixError, ZeroDivisionError) as error:
        raise SpaceError('singular Gram matrix', meta=str(error))


# # # sphere integration # # #

@lru_cache(maxsize=None)
def sphere_monomial_integral(alpha: Tuple[int, ...]) -> ExactScalar:
    """∫_{S^{m-1}} u^α dS = 2 Π Γ((α_i+1)/2) / Γ((|α|+m)/2), zero when some α_i is odd."""
    if any(a % 2 for a in alpha):
        return ExactScalar()
    out = ExactScalar(2)
    for a in alpha:
        out = out * gamma_half(a + 1)
    return out / gamma_half(sum(alpha) + len(alpha))


def sphere_integrate(f: Function, var: str = 'u') -> Function:
    """Exact integral of f over the unit sphere in var; the other variables stay symbolic."""
    if isinstance(f, RadialFunction):
        if var == 'x' and not f.is_polynomial():
            raise SpaceError('radial weights in x must be restricted before integrating over x')
        return f.map_polys(lambda p: sphere_integrate(p, var))
    out: Dict[Tuple[int, ...], Multivector] = {}
    for exps, rest in f.split(var).items():
        weight = sphere_monomial_integral(exps)
        if not weight:
            continue
        for key, c in rest.items():
            term = c.scale(weight)
            out[key] = out[key] + term if key in out else term
    return CliffPoly._raw(f.dim, out)


def pairing(f: Function, g: Function, var: str = 'u') -> Function:
    return sphere_integrate(f * g, var)


def sphere_inner_product(f: Function, g: Function) -> Union[Multivector, CliffPoly]:
    if isinstance(f, RadialFunction) or isinstance(g, RadialFunction):
        raise SpaceError('the sphere pairing takes polynomials')
    out = pairing(f, g, 'u')
    return out.to_multivector() if out.is_constant() else out


# # # bases # # #

@dataclass(frozen=True)
class SpaceBasis:
    m: int
    k: int
    kind: str
    elements: Tuple[CliffPoly, ...]
    harmonics: Tuple[CliffPoly, ...] = field(repr=False, default=())

    @property
    def module_rank(self) -> int:
        return len(self.elements)

    @property
    def dimension(self) -> int:
        return (1 << self.m) * len(self.elements)

    def clifford_span(self) -> List[CliffPoly]:
        return [b * Multivector(self.m, {blade: 1}) for b in self.elements for blade in range(1 << self.m)]

    def gram(self) -> List[List[Multivector]]:
        return [[sphere_inner_product(a, b) for b in self.elements] for a in self.elements]


def harmonic_polynomials(m: int, k: int) -> List[CliffPoly]:
    """Scalar harmonic polynomials of degree k in u: the nullspace of Δ_u on degree-k monomials."""
    monos = monomials(m, k)
    if k < 2:
        vectors = [[Fraction(int(i == j)) for j in range(len(monos))] for i in range(len(monos))]
    else:
        targets = {t: i for i, t in enumerate(monomials(m, k - 2))}
        rows = [[Fraction(0)] * len(monos) for _ in targets]
        for j, alpha in enumerate(monos):
            for i, a in enumerate(alpha):
                if a >= 2:
                    lowered = alpha[:i] + (a - 2,) + alpha[i + 1:]
                    rows[targets[lowered]][j] += a * (a - 1)
        vectors = nullspace(rows, len(monos))
    return [sum((CliffPoly.monomial(m, {'u': alpha}, c) for alpha, c in zip(monos, vector) if c),
                CliffPoly.zero(m)) for vector in vectors]


def fueter_variables(m: int) -> List[CliffPoly]:
    """z_j = u_j + u_1 e_1 e_j for j = 2..m, each left monogenic."""
    u1 = CliffPoly.variable(m, 'u', 1)
    return [CliffPoly.variable(m, 'u', j) + u1 * Multivector.basis(m, 1, j) for j in range(2, m + 1)]


def fueter_polynomials(m: int, k: int) -> List[CliffPoly]:
    """
        Symmetrized products of the Fueter variables: a free right-module basis of 𝓜_k whose members
        restrict to the monomials u_2^β_2 ... u_m^β_m on u_1 = 0.
    """
    z = fueter_variables(m)
    out = []
    for beta in monomials(m - 1, k):
        letters = [j for j, b in enumerate(beta) for _ in range(b)]
        orders = set(permutations(letters))
        total = CliffPoly.zero(m)
        for order in orders:
            term = CliffPoly.constant(m)
            for j in order:
                term = term * z[j]
            total = total + term
        out.append(total / len(orders))
    return out


def build_basis(m: int, k: int, kind: str) -> SpaceBasis:
    if m < 3:
        raise SpaceError(f'bases are built for m >= 3, got m={m}')
    if kind not in KINDS:
        raise SpaceError(f'unknown space {kind!r}')
    if k < 0 or (kind == 'uMk1' and k < 1):
        raise SpaceError(f'{kind} is not defined for k={k}')
    harmonics = tuple(harmonic_polynomials(m, k))
    if kind == 'Hk':
        elements = harmonics
    elif kind == 'Mk':
        elements = tuple(fueter_polynomials(m, k))
    else:
        u = CliffPoly.vector(m, 'u')
        elements = tuple(u * p for p in fueter_polynomials(m, k - 1))
    logger.debug(f'{kind} basis for m={m}, k={k}: {len(elements)} generators')
    return SpaceBasis(m, k, kind, elements, harmonics)


@lru_cache(maxsize=None)
def basis(m: int, k: int, kind: str) -> SpaceBasis:
    return build_basis(m, k, kind)


def coefficient_rank(elements: Sequence[CliffPoly]) -> int:
    columns: Dict[Tuple[Tuple[int, ...], int], int] = {}
    rows = []
    for p in elements:
        row: Dict[int, float] = {}
        for key, c in p.terms.items():
            for blade, value in c.coeffs.items():
                row[columns.setdefault((key, blade), len(columns))] = float(value)
        rows.append(row)
    matrix = np.zeros((len(rows), max(len(columns), 1)))
    for i, row in enumerate(rows):
        for j, value in row.items():
            matrix[i, j] = value
    return int(np.linalg.matrix_rank(matrix)) if rows else 0


def monogenic_dimension(m: int, k: int) -> int:
    """Real dimension of ker D_u on Cl_m-valued homogeneous polynomials of degree k, by numeric rank."""
    monos = monomials(m, k)
    if k == 0:
        return 1 << m
    targets = {t: i for i, t in enumerate(monomials(m, k - 1))}
    blades = 1 << m
    matrix = np.zeros((len(targets) * blades, len(monos) * blades))
    for j, alpha in enumerate(monos):
        for blade in range(blades):
            for i, a in enumerate(alpha):
                if a:
                    lowered = alpha[:i] + (a - 1,) + alpha[i + 1:]
                    row = targets[lowered] * blades + (blade ^ (1 << i))
                    matrix[row, j * blades + blade] += a * _product_sign(1 << i, blade)
    return matrix.shape[1] - int(np.linalg.matrix_rank(matrix))


# # # reproducing kernels # # #

def _rational_gram(elements: Sequence[CliffPoly]) -> Tuple[List[List[Fraction]], Fraction]:
    grade: Optional[Fraction] = None
    gram = []
    for a in elements:
        row = []
        for b in elements:
            value = sphere_inner_product(a, b)
            if not value.is_scalar():
                raise SpaceError('Gram entries of a scalar basis must be scalar', meta=str(value))
            scalar = value.scalar_part()
            if scalar:
                (entry_grade, coeff), = scalar.terms
                if grade is None:
                    grade = entry_grade
                elif grade != entry_grade:
                    raise SpaceError('Gram entries carry different powers of pi', meta=(grade, entry_grade))
                row.append(coeff)
            else:
                row.append(Fraction(0))
        gram.append(row)
    return gram, grade if grade is not None else Fraction(0)


@dataclass
class ReproducingKernel:
    m: int
    k: int
    kind: str
    kernel: CliffPoly
    gram: Tuple[Tuple[Fraction, ...], ...]
    grade: Fraction
    ansatz: Tuple[CliffPoly, ...] = field(default=(), repr=False)
    _nullity: Optional[int] = field(default=None, repr=False)

    def solution_space_dimension(self) -> int:
        if self._nullity is None:
            self._nullity = len(self.ansatz) - coefficient_rank(self.ansatz)
            logger.debug(f'{self.kind} ansatz for m={self.m}, k={self.k}: nullity {self._nullity}')
        return self._nullity


def reproduce_residual(kernel: CliffPoly, f: CliffPoly) -> Function:
    """∫ conj(Z(u,v)) f(u) dS(u) − f(v)."""
    return pairing(kernel.conjugate(), f, 'u') - f.rename('u', 'v')


def build_reproducing_kernel(space: SpaceBasis) -> ReproducingKernel:
    if space.kind not in ('Hk', 'Mk'):
        raise SpaceError(f'no reproducing kernel is built for {space.kind}')
    m, k = space.m, space.k
    harmonics = space.harmonics or tuple(harmonic_polynomials(m, k))
    gram, grade = _rational_gram(harmonics)
    gram_inverse = inverse(gram)
    scale = ExactScalar.pi_power(-grade)
    in_v = [h.rename('u', 'v') for h in harmonics]
    z2 = CliffPoly.zero(m)
    for i, hi in enumerate(harmonics):
        for j, hj in enumerate(in_v):
            if gram_inverse[i][j]:
                z2 = z2 + hi * hj * (scale * gram_inverse[i][j])
    if space.kind == 'Hk':
        kernel = z2
        ansatz = tuple(hi * hj for hi in harmonics for hj in in_v)
    else:
        # P^+ in v from the left and P^+ in u from the right select the monogenic part on both sides
        both = right_projection(projection(RadialFunction.from_poly(z2), m, k, 1, 'v'), m, k, 1, 'u')
        kernel = both.to_poly().conjugate()
        left_v = [projection(RadialFunction.from_poly(h), m, k, 1, 'v').to_poly() for h in in_v]
        right_u = [right_projection(RadialFunction.from_poly(h), m, k, 1, 'u').to_poly() for h in harmonics]
        ansatz = tuple(a * b for b in right_u for a in left_v)
    for f in space.elements:
        residual = reproduce_residual(kernel, f)
        if not residual.is_zero:
            raise SpaceError(f'{space.kind} kernel fails to reproduce a basis element', meta=str(residual))
    return ReproducingKernel(m, k, 'Z2' if space.kind == 'Hk' else 'Z1', kernel,
                             tuple(tuple(row) for row in gram), grade, ansatz)


@lru_cache(maxsize=None)
def reproducing_kernel(m: int, k: int, kind: str) -> ReproducingKernel:
    if kind not in ('Z1', 'Z2'):
        raise SpaceError(f'unknown kernel kind {kind!r}')
    return build_reproducing_kernel(basis(m, k, 'Mk' if kind == 'Z1' else 'Hk'))


def project(f: CliffPoly, space: SpaceBasis) -> CliffPoly:
    """
        Orthogonal projection onto the Clifford span of the basis under Sc ∫ conj(a) b dS(u).
        Onto 𝓜_k and u𝓜_{k-1} this is P_k^± after projecting onto 𝓗_k, the splitting being orthogonal.
    """
    if not f.is_homogeneous('u', space.k):
        raise SpaceError(f'input is not homogeneous of degree {space.k} in u')
    harmonics = space.harmonics or tuple(harmonic_polynomials(space.m, space.k))
    gram, grade = _rational_gram(harmonics)
    gram_inverse = inverse(gram)
    scale = ExactScalar.pi_power(-grade)
    moments = [pairing(h, f, 'u') for h in harmonics]
    out = CliffPoly.zero(space.m)
    for i, hi in enumerate(harmonics):
        for j, moment in enumerate(moments):
            if gram_inverse[i][j]:
                out = out + hi * moment * (scale * gram_inverse[i][j])
    if space.kind == 'Hk':
        return out
    sign = 1 if space.kind == 'Mk' else -1
    return projection(RadialFunction.from_poly(out), space.m, space.k, sign).to_poly()


def orthogonality_defects(m: int, k: int) -> List[Multivector]:
    """∫ p_{k-1}(u) u p_k(u) dS(u) over right monogenic p_{k-1} and left monogenic p_k generators."""
    if k < 1:
        raise SpaceError('the orthogonality relation needs k >= 1')
    u = CliffPoly.vector(m, 'u')
    left = fueter_polynomials(m, k)
    right = [p.reversion() for p in fueter_polynomials(m, k - 1)]
    return [sphere_inner_product(p * u, q) for p in right for q in left]


def gram_table(space: SpaceBasis) -> str:
    return '\n'.join('\t'.join(str(entry) for entry in row) for row in space.gram())


def harmonic_dimension(m: int, k: int) -> int:
    return len(harmonic_polynomials(m, k))


def expected_module_rank(m: int, k: int) -> int:
    return comb(m + k - 2, k)
