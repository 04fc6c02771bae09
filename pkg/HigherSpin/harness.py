"""
The verification suite: one check per identity or integral formula, run over (m, k) pairs and
written out as JSON lines plus a markdown summary.
"""

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .calculus import (CalculusError, OperatorSpec, apply, domain_check, factorization_residual,
                       monogenic_shift_residual, operator, range_check, right_projection, verify_commutation,
                       verify_decomposition, verify_projection_algebra, verify_vector_identities)
from .clifford import CliffordError, ExactScalar, Multivector
from .geometry import (GeometryError, MobiusGenerator, QuadratureRule, conformal_invariance_residual,
                       integrate_ball_x, integrate_boundary_sphere_x, kelvin_average, rotation_pairing_residual,
                       stokes_residual)
from .kernels import (EXACT, KernelConstants, KernelError, annihilation_check, build_kernel, homogeneity_defect,
                      kernel_factorization_residual, swapped_residual, verify_fundamental_relations)
from .polynomials import (CliffPoly, PolynomialError, RadialFunction, monomials, random_multivector,
                          random_poly, random_rational)
from .spaces import (SpaceError, basis, coefficient_rank, fueter_polynomials, monogenic_dimension, nullspace,
                     orthogonality_defects, reproduce_residual, reproducing_kernel)

logger = logging.getLogger(__name__)

CHECKS = ('clifford', 'spaces', 'kernels', 'decomposition', 'commutation', 'fundamental', 'stokes-rk', 'stokes-tk',
          'stokes-qk', 'conformal', 'lemma72', 'borel-pompeiu', 'green', 'reproduction')

DEFAULT_PAIRS = ((3, 1), (3, 2), (5, 1), (6, 1))

STATUSES = ('pass', 'fail', 'skip')

# constant each perturbation target scales
PerturbationTargets = {'a_k': 'a_scale', 'omega': 'omega_scale', 'h_constant': 'h_scale', 'c4': 'c4_scale'}

Residual = Union[CliffPoly, RadialFunction, Multivector, float, int]


class HarnessError(AssertionError):
    def __init__(self, message: str, meta: Any = None):
        super().__init__(message)
        self.message = message
        self.meta = meta


ModuleErrors = (CliffordError, PolynomialError, CalculusError, SpaceError, KernelError, GeometryError, HarnessError)


# # # configuration # # #

@dataclass(frozen=True)
class Perturbation:
    target: str
    factor: Fraction = Fraction(101, 100)

    def __post_init__(self):
        if self.target not in PerturbationTargets:
            raise HarnessError(f'unknown perturbation target {self.target!r}')
        object.__setattr__(self, 'factor', Fraction(self.factor))

    def constants(self) -> KernelConstants:
        return KernelConstants(**{PerturbationTargets[self.target]: self.factor})

    @staticmethod
    def parse(text: str) -> 'Perturbation':
        """'a_k' or 'a_k:101/100'."""
        target, _, factor = text.partition(':')
        return Perturbation(target, Fraction(factor) if factor else Fraction(101, 100))

    def __str__(self) -> str:
        return f'{self.target}:{self.factor}'


@dataclass(frozen=True)
class RunConfig:
    pairs: Tuple[Tuple[int, int], ...] = DEFAULT_PAIRS
    xdeg: int = 2
    mode: str = 'exact'
    tol: float = 1e-8
    quad_degree: int = 20
    seed: int = 0
    out: str = 'report.jsonl'
    jobs: int = 1
    perturbation: Optional[Perturbation] = None
    checks: Tuple[str, ...] = CHECKS

    def __post_init__(self):
        object.__setattr__(self, 'pairs', tuple((int(m), int(k)) for m, k in self.pairs))
        object.__setattr__(self, 'checks', tuple(self.checks))
        for m, k in self.pairs:
            if m < 3 or k < 0:
                raise HarnessError(f'invalid pair (m={m}, k={k}); m >= 3 and k >= 0 are required')
        if self.mode not in ('exact', 'float'):
            raise HarnessError(f'unknown mode {self.mode!r}')
        if not self.tol > 0:
            raise HarnessError(f'tolerance must be positive, got {self.tol}')
        if self.xdeg < 0 or self.quad_degree < 1 or self.jobs < 1:
            raise HarnessError('xdeg, quad_degree and jobs must be nonnegative, positive and positive')
        if 'decomposition' in self.checks and self.xdeg < 2:
            raise HarnessError('decomposition checks need xdeg >= 2')
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise HarnessError(f'unknown checks {sorted(unknown)}')

    @property
    def constants(self) -> KernelConstants:
        return EXACT if self.perturbation is None else self.perturbation.constants()

    def rule(self, m: int) -> QuadratureRule:
        return QuadratureRule(m, 'exact_polynomial' if self.mode == 'exact' else 'product_gauss', self.quad_degree)

    def rng(self, check: str, m: int, k: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, m, k, CHECKS.index(check)])


@dataclass
class CheckReport:
    check: str
    m: int
    k: int
    mode: str
    status: str
    residual: float
    elapsed_ms: float
    seed: int
    reason: Optional[str] = None

    def to_json(self) -> str:
        record = asdict(self)
        if self.reason is None:
            del record['reason']
        return json.dumps(record, ensure_ascii=False)

    @staticmethod
    def from_json(line: str) -> 'CheckReport':
        return CheckReport(**json.loads(line))


# # # residual bookkeeping # # #

def residual_size(r: Residual) -> float:
    if isinstance(r, (CliffPoly, RadialFunction, Multivector)):
        return r.max_abs()
    return abs(float(r))


def is_zero(r: Residual) -> bool:
    if isinstance(r, (CliffPoly, RadialFunction, Multivector)):
        return r.is_zero
    return r == 0


def judge(residuals: Sequence[Residual], mode: str, tol: float) -> Tuple[str, float]:
    size = max((residual_size(r) for r in residuals), default=0.)
    if mode == 'exact':
        return ('pass' if all(is_zero(r) for r in residuals) else 'fail'), size
    return ('pass' if size <= tol else 'fail'), size


def _poly(r: Union[Multivector, CliffPoly], m: int) -> CliffPoly:
    return CliffPoly.constant(m, r) if isinstance(r, Multivector) else r


# # # test functions # # #

def _x_poly(m: int, xdeg: int, rng: np.random.Generator, scalar: bool = False) -> CliffPoly:
    return random_poly(m, {'x': range(xdeg + 1)}, rng, terms=2, scalar=scalar)


def _sweep(elements: Sequence[CliffPoly], k: int, rng: np.random.Generator) -> List[CliffPoly]:
    """The whole basis for k <= 2, three random members beyond."""
    if k <= 2 or len(elements) <= 3:
        return list(elements)
    return [elements[int(i)] for i in sorted(rng.choice(len(elements), size=3, replace=False))]


def harmonic_test_functions(m: int, k: int, xdeg: int, rng: np.random.Generator) -> List[CliffPoly]:
    return [h * _x_poly(m, xdeg, rng) for h in _sweep(basis(m, k, 'Hk').elements, k, rng)]


def left_functions(m: int, k: int, kind: str, xdeg: int, rng: np.random.Generator) -> List[CliffPoly]:
    """b(u) p(x) with Clifford coefficients on the right, so left monogenicity in u survives."""
    return [b * _x_poly(m, xdeg, rng) for b in _sweep(basis(m, k, kind).elements, k, rng)]


def right_functions(m: int, k: int, kind: str, xdeg: int, rng: np.random.Generator) -> List[CliffPoly]:
    return [_x_poly(m, xdeg, rng) * b.reversion() for b in _sweep(basis(m, k, kind).elements, k, rng)]


def random_harmonic(m: int, k: int, rng: np.random.Generator) -> CliffPoly:
    """A random rational combination of the scalar 𝓗_k basis."""
    return sum((h * random_rational(rng) for h in basis(m, k, 'Hk').elements), CliffPoly.zero(m))


def d2_kernel_basis(m: int, k: int, xdeg: int, c4_scale: Fraction = Fraction(1)) -> List[CliffPoly]:
    """Scalar 𝓗_k-valued polynomials of x-degree <= xdeg annihilated by 𝒟₂, by an exact nullspace."""
    d2 = operator('D2', m, k, c4_scale=c4_scale)
    candidates = [h * CliffPoly.monomial(m, {'x': beta}) for d in range(xdeg + 1) for beta in monomials(m, d)
                  for h in basis(m, k, 'Hk').elements]
    images = [d2(c) for c in candidates]
    index = {key: i for i, key in enumerate(sorted({key for img in images for key in img.terms}))}
    rows = [[Fraction(0)] * len(candidates) for _ in index]
    for j, img in enumerate(images):
        for key, c in img.terms.items():
            rows[index[key]][j] = ExactScalar.coerce(c.scalar_part()).rational
    kernel = [sum((c * coeff for c, coeff in zip(candidates, vector) if coeff), CliffPoly.zero(m))
              for vector in nullspace(rows, len(candidates))]
    logger.debug(f'𝒟₂ kernel for m={m}, k={k}, xdeg={xdeg}: dimension {len(kernel)} of {len(candidates)}')
    return kernel


def build_d2_harmonic(m: int, k: int, xdeg: int, rng: np.random.Generator) -> CliffPoly:
    """A random Clifford-valued element of the 𝒟₂ kernel."""
    if m + 2 * k - 4 == 0:
        raise HarnessError(f'𝒟₂ is undefined for m={m}, k={k}')
    scalar = sum((b * random_rational(rng) for b in d2_kernel_basis(m, k, xdeg)), CliffPoly.zero(m))
    return scalar * random_multivector(m, rng)


# # # integral formulas # # #

def borel_pompeiu_defect(m: int, k: int, f: CliffPoly, center: Sequence[Any], radius: Any, pole: Sequence[Any],
                         rule: QuadratureRule, constants: KernelConstants = EXACT, volume: bool = True) -> CliffPoly:
    """
        The four boundary integrals over ∂B_R(center) with kernels centered at the pole, plus the volume
        term ∫(H_k, 𝒟₂f)_u, minus f(pole, v). Zero when the integral formula holds.
    """
    if m < 5:
        raise HarnessError('m<5 for H_k')
    if k < 1:
        raise HarnessError('the integral formula needs k >= 1')
    c4 = Fraction(m + 2 * k - 4) * constants.c4_scale
    h = build_kernel(m, k, 'Hk', constants).right
    e = build_kernel(m, k, 'Ek', constants).right
    fk = build_kernel(m, k, 'Fk', constants).right
    hp, hm = right_projection(h, m, k, 1), right_projection(h, m, k, -1)
    plus = apply(OperatorSpec('Pk_plus', m, k), f)
    minus = apply(OperatorSpec('Pk_minus', m, k), f)
    terms = [(hp - hm * (2 / c4), apply(OperatorSpec('Rk', m, k), plus)),
             (e, plus),
             (hp * (2 / c4) + hm * (Fraction(m + 2 * k) / c4), apply(OperatorSpec('Qk', m, k), minus)),
             (fk, minus)]
    total = CliffPoly.zero(m)
    for kernel, density in terms:
        if density:
            total = total + _poly(integrate_boundary_sphere_x(kernel, center, radius, rule, pole=pole,
                                                              density=density, pair_u=True), m)
    if volume:
        d2f = apply(OperatorSpec('D2', m, k, c4_scale=constants.c4_scale), f)
        if d2f:
            total = total + _poly(integrate_ball_x(h, center, radius, rule, pole=pole, density=d2f, pair_u=True), m)
    return total - f.evaluate_partial('x', list(pole)).rename('u', 'v')


def _pole_layout(m: int, centered: bool, mode: str) -> Tuple[Tuple[Any, ...], Tuple[Any, ...]]:
    """(center, pole) of the unit ball used by the integral formulas."""
    center = (Fraction(1, 2),) + (Fraction(0),) * (m - 1)
    if centered:
        return center, center
    pole = (Fraction(3, 4), Fraction(1, 4)) + (Fraction(0),) * (m - 2)
    return (center, tuple(float(p) for p in pole)) if mode == 'float' else (center, pole)


# # # checks # # #

Check = Callable[[int, int, RunConfig, np.random.Generator], List[Residual]]


def _require(condition: bool, reason: str) -> None:
    if not condition:
        raise HarnessError(reason)


def check_clifford(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    a, b, c = (random_multivector(m, rng, blades=3) for _ in range(3))
    vector = Multivector(m, {1 << i: random_rational(rng) for i in range(m)})
    out: List[Residual] = [(a * b) * c - a * (b * c),
                           (a * b).reversion() - b.reversion() * a.reversion(),
                           (a * b).conjugate() - b.conjugate() * a.conjugate(),
                           vector * vector.inverse() - Multivector.scalar(m, 1)]
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            ei, ej = Multivector.basis(m, i), Multivector.basis(m, j)
            out.append(ei * ej + ej * ei + Multivector.scalar(m, 2 * (i == j)))
    return out


def check_spaces(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    kinds = ('Hk', 'Mk', 'uMk1') if k >= 1 else ('Hk', 'Mk')
    spaces = {kind: basis(m, k, kind) for kind in kinds}
    out: List[Residual] = []
    for kind, space in spaces.items():
        out += [domain_check(b, kind, m, k).residual for b in space.elements]
        out.append(len(space.elements) - coefficient_rank(space.elements))
    for h in spaces['Hk'].elements:
        out += list(verify_projection_algebra(m, k, h).values())
        out.append(domain_check(apply(OperatorSpec('Pk_plus', m, k), h), 'Mk', m, k).residual)
        if k >= 1:
            out.append(domain_check(apply(OperatorSpec('Pk_minus', m, k), h), 'uMk1', m, k).residual)
    lower = spaces['uMk1'].dimension if k >= 1 else 0
    out.append(spaces['Hk'].dimension - spaces['Mk'].dimension - lower)
    out.append(spaces['Mk'].dimension - monogenic_dimension(m, k))
    z2, z1 = reproducing_kernel(m, k, 'Z2'), reproducing_kernel(m, k, 'Z1')
    out += [reproduce_residual(z2.kernel, h) for h in spaces['Hk'].elements]
    out += [reproduce_residual(z1.kernel, b) for b in spaces['Mk'].elements]
    logger.debug(f'Z1 ansatz solution space for m={m}, k={k}: {z1.solution_space_dimension()}')
    if k >= 1:
        out += orthogonality_defects(m, k)
        out += [monogenic_shift_residual(m, k, p) for p in fueter_polynomials(m, k - 1)]
    return out


def check_kernels(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    kinds = ['Ek'] + (['Fk'] if k >= 1 else []) + (['Hk'] if m >= 5 else [])
    out: List[Residual] = []
    for kind in kinds:
        sol = build_kernel(m, k, kind, cfg.constants)
        out += [annihilation_check(sol), swapped_residual(sol), homogeneity_defect(sol)]
    return out


def check_decomposition(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    scale = cfg.constants.c4_scale
    out: List[Residual] = []
    for f in harmonic_test_functions(m, k, cfg.xdeg, rng):
        out += list(verify_decomposition(m, k, f, scale))
        if k >= 1:
            out.append(factorization_residual(m, k, f, scale))
    return out


def check_commutation(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    _require(k >= 1, 'k=0 has no T_k, T_k^*, Q_k')
    monogenic = left_functions(m, k, 'Mk', cfg.xdeg, rng)
    shifted = left_functions(m, k, 'uMk1', cfg.xdeg, rng)
    out: List[Residual] = [verify_commutation(m, k, f)[0] for f in shifted]
    out += [verify_commutation(m, k, f)[1] for f in monogenic]
    out += [range_check(m, k, f, name).residual for f in monogenic for name in ('Rk', 'Tk_star')]
    out += [range_check(m, k, f, name).residual for f in shifted for name in ('Tk', 'Qk')]
    generic = random_poly(m, {'x': range(cfg.xdeg + 1), 'u': range(k + 1)}, rng)
    out += list(verify_vector_identities(m, generic))
    return out


def check_fundamental(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    _require(m >= 5, 'm<5 for H_k')
    _require(k >= 1, 'k=0 has no F_k')
    return list(verify_fundamental_relations(m, k, cfg.constants)) + \
        [kernel_factorization_residual(m, k, cfg.constants)]


def _stokes(which: str) -> Check:
    kinds = {'Rk': ('Mk', 'Mk'), 'Tk': ('uMk1', 'Mk'), 'Qk': ('uMk1', 'uMk1')}

    def check(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
        right_kind, left_kind = kinds[which]
        _require(k >= 1 or which == 'Rk', f'k=0 has no {which}')
        xdeg = min(cfg.xdeg + 1, 3)
        g = sum(right_functions(m, k, right_kind, xdeg, rng), CliffPoly.zero(m))
        f = sum(left_functions(m, k, left_kind, xdeg, rng), CliffPoly.zero(m))
        return [stokes_residual(m, k, g, f, which, cfg.rule(m))]
    return check


def conformal_generators(m: int) -> List[MobiusGenerator]:
    e1, e2, e3 = ([Fraction(int(i == j)) for i in range(m)] for j in range(3))
    tilted = [Fraction(3, 5), Fraction(4, 5)] + [Fraction(0)] * (m - 2)
    return [MobiusGenerator.translation(m, [Fraction(1), Fraction(-1, 2)] + [Fraction(0)] * (m - 2)),
            MobiusGenerator.rotation_from_vectors(m, e1, e2),
            MobiusGenerator.rotation_from_vectors(m, tilted, e3),
            MobiusGenerator.dilation(m, 2),
            MobiusGenerator.inversion(m)]


def check_conformal(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    f = random_harmonic(m, k, rng) * _x_poly(m, min(cfg.xdeg, 2), rng, scalar=True)
    which = ('RkAk', 'QkBk', 'D2') if k >= 1 else ('D2',)
    out: List[Residual] = []
    for g in conformal_generators(m):
        out += [conformal_invariance_residual(m, k, g, f, name, cfg.constants.c4_scale) for name in which]
        if g.kind == 'rotation':
            elements = basis(m, k, 'Mk').elements
            out.append(rotation_pairing_residual(elements[0].reversion(), elements[-1], g))
    return out


def check_lemma72(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    a = cfg.constants.a(m, k)
    return [kelvin_average(h, m) - h * a for h in basis(m, k, 'Hk').elements]


def check_borel_pompeiu(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    centered = cfg.mode == 'exact'
    center, pole = _pole_layout(m, centered, cfg.mode)
    x1 = CliffPoly.variable(m, 'x', 1)
    h = random_harmonic(m, k, rng)
    samples = [h * random_multivector(m, rng),
               h * x1 * x1,
               harmonic_test_functions(m, k, min(cfg.xdeg, 2), rng)[0]]
    return [borel_pompeiu_defect(m, k, f, center, 1, pole, cfg.rule(m), cfg.constants) for f in samples]


def check_green(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    _require(m >= 5, 'm<5 for H_k')
    f = build_d2_harmonic(m, k, min(cfg.xdeg, 2), rng)
    center, pole = _pole_layout(m, cfg.mode == 'exact', cfg.mode)
    return [apply(OperatorSpec('D2', m, k), f),
            borel_pompeiu_defect(m, k, f, center, 1, pole, cfg.rule(m), cfg.constants, volume=False)]


def _reproduction_pole(m: int) -> Tuple[Fraction, ...]:
    return (Fraction(1, 2),) + (Fraction(0),) * (m - 1)


def decay_defects(m: int, k: int, density: CliffPoly, rule: QuadratureRule, constants: KernelConstants = EXACT,
                  radii: Sequence[Fraction] = (Fraction(1, 2), Fraction(1, 4))) -> List[float]:
    """
        Sizes of the E_k reproduction defect for the density P_k^+f · x_1² on spheres of the given radii around
        the pole. The odd part of x_1 about the pole integrates out, so the defect is quadratic in the radius.
    """
    pole = _reproduction_pole(m)
    kernel = build_kernel(m, k, 'Ek', constants).right
    moving = density * CliffPoly.variable(m, 'x', 1) ** 2
    expected = moving.evaluate_partial('x', list(pole)).rename('u', 'v')
    return [residual_size(_poly(integrate_boundary_sphere_x(kernel, pole, radius, rule, pole=pole, density=moving,
                                                            pair_u=True), m) - expected)
            for radius in radii]


def check_reproduction(m: int, k: int, cfg: RunConfig, rng: np.random.Generator) -> List[Residual]:
    """
        Boundary pairings of E_k against P_k^+f and F_k against P_k^-f on spheres around the pole: exact
        reproduction for x-constant f at two radii, a nonzero defect that at least halves with the radius otherwise.
    """
    rule = cfg.rule(m)
    pole = _reproduction_pole(m)
    f = random_harmonic(m, k, rng) * random_multivector(m, rng)
    plus = apply(OperatorSpec('Pk_plus', m, k), f)
    pairs = [(build_kernel(m, k, 'Ek', cfg.constants).right, plus)]
    if k >= 1:
        pairs.append((build_kernel(m, k, 'Fk', cfg.constants).right, apply(OperatorSpec('Pk_minus', m, k), f)))
    out: List[Residual] = []
    for kernel, density in pairs:
        for radius in (Fraction(1), Fraction(1, 2)):
            value = integrate_boundary_sphere_x(kernel, pole, radius, rule, pole=pole, density=density, pair_u=True)
            out.append(_poly(value, m) - density.rename('u', 'v'))
    floor = cfg.tol if cfg.mode == 'float' else 0.
    outer, inner = decay_defects(m, k, plus, rule, cfg.constants)
    out.append(0 if floor < outer and inner <= outer / 2 * (1 + 1e-9) + floor else 1)
    return out


CHECK_TABLE: Dict[str, Check] = {
    'clifford': check_clifford,
    'spaces': check_spaces,
    'kernels': check_kernels,
    'decomposition': check_decomposition,
    'commutation': check_commutation,
    'fundamental': check_fundamental,
    'stokes-rk': _stokes('Rk'),
    'stokes-tk': _stokes('Tk'),
    'stokes-qk': _stokes('Qk'),
    'conformal': check_conformal,
    'lemma72': check_lemma72,
    'borel-pompeiu': check_borel_pompeiu,
    'green': check_green,
    'reproduction': check_reproduction,
}


# # # running # # #

class Verifier:
    def __init__(self, checks: Mapping[str, Check] = CHECK_TABLE):
        self.checks = checks

    def __call__(self, check: str, m: int, k: int, cfg: RunConfig, raise_errors: bool = False) -> CheckReport:
        if check not in self.checks:
            raise HarnessError(f'unknown check {check!r}')
        start = time.perf_counter()
        try:
            residuals = self.checks[check](m, k, cfg, cfg.rng(check, m, k))
        except ModuleErrors as error:
            if raise_errors:
                raise error
            elapsed = (time.perf_counter() - start) * 1000
            logger.info(f'{check} (m={m}, k={k}): skip, {error.message}')
            return CheckReport(check, m, k, cfg.mode, 'skip', 0., elapsed, cfg.seed, error.message)
        except Exception as error:
            if raise_errors:
                raise error
            elapsed = (time.perf_counter() - start) * 1000
            reason = f'{type(error).__name__}: {error}'
            logger.warning(f'{check} (m={m}, k={k}): fail, {reason}')
            return CheckReport(check, m, k, cfg.mode, 'fail', float('nan'), elapsed, cfg.seed, reason)
        status, size = judge(residuals, cfg.mode, cfg.tol)
        elapsed = (time.perf_counter() - start) * 1000
        logger.info(f'{check} (m={m}, k={k}): {status}, residual {size:.3g}, {elapsed:.0f} ms')
        return CheckReport(check, m, k, cfg.mode, status, size, elapsed, cfg.seed)


verifier = Verifier()


def _run_task(task: Tuple[str, int, int, RunConfig]) -> CheckReport:
    check, m, k, cfg = task
    return verifier(check, m, k, cfg)


def run_all(cfg: RunConfig) -> List[CheckReport]:
    tasks = [(check, m, k, cfg) for m, k in cfg.pairs for check in cfg.checks]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_run_task, tasks))
    return [_run_task(task) for task in tasks]


def run_borel_pompeiu(cfg: RunConfig, centered: bool, m: int = 5, k: int = 1) -> CheckReport:
    """The integral formula on B_1 with the pole at the center (exact) or off it (quadrature)."""
    mode = 'exact' if centered else 'float'
    local = RunConfig(pairs=((m, k),), xdeg=cfg.xdeg, mode=mode, tol=cfg.tol, quad_degree=cfg.quad_degree,
                      seed=cfg.seed, out=cfg.out, perturbation=cfg.perturbation, checks=('borel-pompeiu',))
    return verifier('borel-pompeiu', m, k, local)


def convergence_study(cfg: RunConfig, degrees: Sequence[int] = (6, 10, 20), m: int = 5, k: int = 1,
                      factor: float = 10.) -> Tuple[List[CheckReport], bool]:
    """Off-center integral formula under refined product Gauss rules; converged when each step gains factor."""
    reports = [run_borel_pompeiu(replace(cfg, quad_degree=degree), centered=False, m=m, k=k) for degree in degrees]
    residuals = [r.residual for r in reports]
    converged = all(fine * factor <= coarse for coarse, fine in zip(residuals, residuals[1:])) and \
        reports[-1].status == 'pass'
    logger.info(f'quadrature study m={m}, k={k}: ' +
                ', '.join(f'{d}: {r:.3g}' for d, r in zip(degrees, residuals)))
    return reports, converged


def run_eq_one_reproduction(cfg: RunConfig, m: int = 3, k: int = 1) -> CheckReport:
    return verifier('reproduction', m, k, cfg)


def exit_code(reports: Sequence[CheckReport]) -> int:
    return int(any(r.status == 'fail' for r in reports))


def summary(reports: Sequence[CheckReport]) -> str:
    counts = {status: sum(r.status == status for r in reports) for status in STATUSES}
    lines = ['| check | m | k | mode | status | residual | elapsed ms | reason |',
             '|---|---|---|---|---|---|---|---|']
    lines += [f'| {r.check} | {r.m} | {r.k} | {r.mode} | {r.status} | {r.residual:.3g} | {r.elapsed_ms:.0f} | '
              f'{r.reason or ""} |' for r in reports]
    lines += ['', ', '.join(f'{counts[s]} {s}' for s in STATUSES)]
    return '\n'.join(lines)


def write_reports(reports: Sequence[CheckReport], path: Union[str, Path]) -> Path:
    """Writes the JSON-lines report and a markdown summary next to it; returns the summary path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8') as f:
        for report in reports:
            f.write(report.to_json() + '\n')
    target = path.with_suffix('.md')
    target.write_text(summary(reports) + '\n', encoding='utf-8')
    return target
