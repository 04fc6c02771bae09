"""
Integration over spheres and balls, exact through the monomial sphere formula or by product Gauss
rules, and the four conformal generators with their weights.
"""

import logging
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Iterator, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .calculus import OperatorSpec, apply, intertwined
from .clifford import ExactScalar, Multivector, sphere_area, vector_embed
from .polynomials import CliffPoly, Function, Key, RadialFunction, _slot, kelvin_images
from .spaces import sphere_integrate, sphere_monomial_integral

logger = logging.getLogger(__name__)

RULES = frozenset(['exact_polynomial', 'product_gauss'])
ORIENTATIONS = (None, 'outer', 'inner')
CHUNK = 4096


class GeometryError(AssertionError):
    def __init__(self, message: str, meta: Any = None):
        super().__init__(message)
        self.message = message
        self.meta = meta


# # # quadrature # # #

@lru_cache(maxsize=None)
def _sphere_rule(n: int, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """Product Gauss nodes and weights on S^{n-1} ⊂ R^n, exact up to the given polynomial degree."""
    if n == 2:
        count = 2 * (degree // 2 + 1)
        phi = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(phi), np.sin(phi)], axis=1), np.full(count, 2 * np.pi / count)
    # ζ = (t, sqrt(1 - t²) η) with dS = (1 - t²)^{(n-3)/2} dt dS(η)
    alpha = (n - 3) / 2
    t, wt = roots_jacobi(degree // 2 + 1, alpha, alpha)
    sub_nodes, sub_weights = _sphere_rule(n - 1, degree)
    scale = np.sqrt(1 - t ** 2)
    nodes = np.concatenate([np.column_stack([np.full(len(sub_nodes), ti), si * sub_nodes])
                            for ti, si in zip(t, scale)])
    weights = np.concatenate([wi * sub_weights for wi in wt])
    return nodes, weights


@lru_cache(maxsize=None)
def _radial_rule(degree: int) -> Tuple[np.ndarray, np.ndarray]:
    tau, w = roots_legendre(degree // 2 + 1)
    return (tau + 1) / 2, w / 2


@dataclass(frozen=True)
class QuadratureRule:
    m: int
    kind: str = 'exact_polynomial'
    degree: int = 20

    def __post_init__(self):
        if self.kind not in RULES:
            raise GeometryError(f'unknown quadrature rule {self.kind!r}')
        if self.m < 2 or self.degree < 0:
            raise GeometryError(f'invalid rule parameters m={self.m}, degree={self.degree}')

    @property
    def exact(self) -> bool:
        return self.kind == 'exact_polynomial'

    @property
    def sphere(self) -> Tuple[np.ndarray, np.ndarray]:
        nodes, weights = _sphere_rule(self.m, self.degree)
        logger.debug(f'product Gauss rule on S^{self.m - 1}: {len(weights)} nodes, degree {self.degree}')
        return nodes, weights

    @property
    def radial(self) -> Tuple[np.ndarray, np.ndarray]:
        return _radial_rule(self.degree)

    def check_degree(self, degree: int) -> None:
        if not self.exact and degree > self.degree:
            warnings.warn(f'integrand degree {degree} exceeds the rule exactness {self.degree}', stacklevel=3)

    def export(self) -> str:
        if self.exact:
            return f'# exact_polynomial rule on S^{self.m - 1}: closed monomial formula, no nodes'
        nodes, weights = self.sphere
        lines = [f'# product_gauss rule on S^{self.m - 1}, degree {self.degree}, {len(weights)} nodes']
        lines += ['\t'.join(f'{c:.17g}' for c in node) + f'\t{w:.17g}' for node, w in zip(nodes, weights)]
        return '\n'.join(lines)


def _chunks(count: int) -> Iterator[slice]:
    for start in range(0, count, CHUNK):
        yield slice(start, min(start + CHUNK, count))


def _reduce(p: CliffPoly, weights: np.ndarray) -> CliffPoly:
    """Σ_j w_j p(node_j) for a polynomial whose coefficients are arrays over the nodes."""
    def collapse(c: Multivector) -> Multivector:
        out = {}
        for blade, value in c.coeffs.items():
            value = np.asarray(float(value) if isinstance(value, ExactScalar) else value, dtype=float)
            out[blade] = float(np.sum(weights * value)) if value.ndim else float(value) * float(np.sum(weights))
        return Multivector._raw(c.dim, out)
    return p.map_coefficients(collapse)


def _result(p: CliffPoly) -> Union[Multivector, CliffPoly]:
    return p.to_multivector() if p.is_constant() else p


def _offset(center: Sequence[Any], pole: Optional[Sequence[Any]]) -> Tuple[Fraction, ...]:
    origin = pole if pole is not None else (0,) * len(center)
    return tuple(Fraction(c) - Fraction(p) for c, p in zip(center, origin))


def _normal(m: int, orientation: str, coords: Optional[Sequence[np.ndarray]] = None) -> CliffPoly:
    """±ζ, symbolic in the x slot or at the given node coordinates."""
    sign = 1 if orientation == 'outer' else -1
    if coords is None:
        return CliffPoly.vector(m, 'x') * sign
    return CliffPoly.constant(m, vector_embed([sign * c for c in coords], m))


def _as_poly(f: Function) -> CliffPoly:
    if isinstance(f, RadialFunction):
        if not f.is_polynomial():
            raise GeometryError('density must be polynomial in x')
        return f.to_poly()
    return f


def integrate_sphere_u(f: Function, rule: QuadratureRule) -> Multivector:
    if isinstance(f, RadialFunction):
        f = _as_poly(f)
    if f.depends_on('x') or f.depends_on('v'):
        raise GeometryError('integrate_sphere_u takes a polynomial in u alone', meta=str(f))
    rule.check_degree(f.degree('u'))
    if rule.exact:
        return sphere_integrate(f, 'u').to_multivector()
    nodes, weights = rule.sphere
    total = CliffPoly.zero(f.dim)
    for part in _chunks(len(weights)):
        values = f.evaluate_partial('u', [nodes[part, i] for i in range(f.dim)])
        total = total + _reduce(values, weights[part])
    return total.to_multivector()


# # # boundary spheres # # #

def integrate_boundary_sphere_x(f: Function, center: Sequence[Any], radius: Any, rule: QuadratureRule,
                                pole: Optional[Sequence[Any]] = None, density: Optional[Function] = None,
                                orientation: Optional[str] = 'outer', pair_u: bool = False) \
        -> Union[Multivector, CliffPoly]:
    """
        ∫_{∂B_R(c)} f(x − pole) n(x) density(x) dσ(x), with the normal factor dropped when orientation is
        None and the u-pairing taken when pair_u is set. Without a pole f is read at x itself.
    """
    m = f.dim
    if orientation not in ORIENTATIONS:
        raise GeometryError(f'unknown orientation {orientation!r}')
    if len(center) != m:
        raise GeometryError(f'center of dimension {len(center)} for m={m}')
    offset = _offset(center, pole)
    if pole is not None and sum(o * o for o in offset) == Fraction(radius) ** 2:
        raise GeometryError('pole on the integration sphere', meta=(center, radius, pole))
    kernel = RadialFunction.lift(f)
    dens = None if density is None else _as_poly(density)
    if rule.exact:
        return _boundary_exact(kernel, dens, center, Fraction(radius), offset, orientation, pair_u)
    return _boundary_float(kernel, dens, center, float(radius), offset, orientation, pair_u, rule)


def _boundary_exact(kernel: RadialFunction, density: Optional[CliffPoly], center: Sequence[Any],
                    radius: Fraction, offset: Tuple[Fraction, ...], orientation: Optional[str],
                    pair_u: bool) -> Union[Multivector, CliffPoly]:
    m = kernel.dim
    if not any(offset):
        integrand = kernel.restrict_to_sphere(radius)
    elif kernel.is_polynomial():
        integrand = kernel.to_poly().shift('x', offset, radius)
    else:
        raise GeometryError('exact boundary integration needs the radial pole at the sphere center')
    if orientation is not None:
        integrand = integrand * _normal(m, orientation)
    if density is not None:
        integrand = integrand * density.shift('x', [Fraction(c) for c in center], radius)
    if pair_u:
        integrand = sphere_integrate(integrand, 'u')
    return _result(sphere_integrate(integrand, 'x') * radius ** (m - 1))


def _boundary_float(kernel: RadialFunction, density: Optional[CliffPoly], center: Sequence[Any], radius: float,
                    offset: Tuple[Fraction, ...], orientation: Optional[str], pair_u: bool,
                    rule: QuadratureRule) -> Union[Multivector, CliffPoly]:
    m = kernel.dim
    rule.check_degree(kernel.degree('x') + (0 if density is None else density.degree('x')) + 1)
    nodes, weights = rule.sphere
    shift = np.array([float(o) for o in offset])
    base = np.array([float(c) for c in center])
    total = CliffPoly.zero(m)
    for part in _chunks(len(weights)):
        zeta = nodes[part]
        integrand = kernel.evaluate_partial('x', list((shift + radius * zeta).T))
        if orientation is not None:
            integrand = integrand * _normal(m, orientation, list(zeta.T))
        if density is not None:
            integrand = integrand * density.evaluate_partial('x', list((base + radius * zeta).T))
        if pair_u:
            integrand = sphere_integrate(integrand, 'u')
        total = total + _reduce(integrand, weights[part])
    return _result(total * radius ** (m - 1))


# # # balls # # #

def integrate_ball_x(f: Function, center: Sequence[Any], radius: Any, rule: QuadratureRule,
                     pole: Optional[Sequence[Any]] = None, density: Optional[Function] = None,
                     pair_u: bool = False) -> Union[Multivector, CliffPoly]:
    """∫_{B_R(c)} f(x − pole) density(x) dx, optionally paired over u."""
    m = f.dim
    if len(center) != m:
        raise GeometryError(f'center of dimension {len(center)} for m={m}')
    offset = _offset(center, pole)
    if sum(o * o for o in offset) >= Fraction(radius) ** 2 and not RadialFunction.lift(f).is_polynomial():
        raise GeometryError('the radial pole must lie inside the ball', meta=(center, radius, pole))
    kernel = RadialFunction.lift(f)
    dens = None if density is None else _as_poly(density)
    if rule.exact:
        return _ball_exact(kernel, dens, center, Fraction(radius), offset, pair_u)
    return _ball_float(kernel, dens, center, float(radius), offset, pair_u, rule)


def _ball_exact(kernel: RadialFunction, density: Optional[CliffPoly], center: Sequence[Any], radius: Fraction,
                offset: Tuple[Fraction, ...], pair_u: bool) -> Union[Multivector, CliffPoly]:
    m = kernel.dim
    if any(offset):
        if not kernel.is_polynomial():
            raise GeometryError('exact ball integration needs the radial pole at the ball center')
        local = RadialFunction.from_poly(kernel.to_poly().shift('x', offset))
    else:
        local = kernel
    if density is not None:
        local = local * density.shift('x', [Fraction(c) for c in center])
    if pair_u:
        local = local.map_polys(lambda p: sphere_integrate(p, 'u'))
    slot = _slot(m, 'x')
    out: Dict[Key, Multivector] = {}
    for q, p in local.terms.items():
        for key, c in p.terms.items():
            alpha = tuple(key[s] for s in slot)
            angular = sphere_monomial_integral(alpha)
            if not angular:
                continue
            power = sum(alpha) + int(2 * q) + m
            if power <= 0:
                raise GeometryError(f'non-integrable radial exponent {q} at degree {sum(alpha)}')
            rest = list(key)
            for s in slot:
                rest[s] = 0
            rest = tuple(rest)
            term = c.scale(angular * (radius ** power / power))
            out[rest] = out[rest] + term if rest in out else term
    return _result(CliffPoly._raw(m, out))


def _ball_float(kernel: RadialFunction, density: Optional[CliffPoly], center: Sequence[Any], radius: float,
                offset: Tuple[Fraction, ...], pair_u: bool, rule: QuadratureRule) -> Union[Multivector, CliffPoly]:
    """
        Polar coordinates x = o + ρζ about the radial pole (about the center for polynomial kernels),
        with ρ running up to the ball boundary along ζ.
    """
    m = kernel.dim
    nodes, weights = rule.sphere
    taus, tau_weights = rule.radial
    base = np.array([float(c) for c in center])
    pole = base - np.array([float(o) for o in offset])
    origin = base if kernel.is_polynomial() else pole
    d = origin - base
    along = nodes @ d
    reach = -along + np.sqrt(along ** 2 - d @ d + radius ** 2)
    rule.check_degree(kernel.degree('x') + (0 if density is None else density.degree('x')) + m - 1)
    total = CliffPoly.zero(m)
    for tau, wt in zip(taus, tau_weights):
        rho = tau * reach
        jacobian = weights * wt * reach * rho ** (m - 1)
        for part in _chunks(len(weights)):
            points = origin + nodes[part] * rho[part, None]
            integrand = kernel.evaluate_partial('x', list((points - pole).T))
            if density is not None:
                integrand = integrand * density.evaluate_partial('x', list(points.T))
            if pair_u:
                integrand = sphere_integrate(integrand, 'u')
            total = total + _reduce(integrand, jacobian[part])
    return _result(total)


# # # lemmas on the sphere # # #

def kelvin_average(h: CliffPoly, m: int) -> CliffPoly:
    """(1/ω_m) ∫_{S^{m-1}} h(xux) dS(x), with xux = (x·x)u − 2⟨u,x⟩x."""
    if h.depends_on('x'):
        raise GeometryError('kelvin_average takes a polynomial free of x')
    rho = CliffPoly.norm_squared(m, 'x')
    dot = CliffPoly.inner(m, 'u', 'x')
    images = [rho * CliffPoly.variable(m, 'u', i) - dot * CliffPoly.variable(m, 'x', i) * 2 for i in range(1, m + 1)]
    return sphere_integrate(h.substitute('u', images), 'x') / sphere_area(m)


def stokes_residual(m: int, k: int, g: CliffPoly, f: CliffPoly, which: str, rule: Optional[QuadratureRule] = None,
                    center: Optional[Sequence[Any]] = None, radius: Any = 1) -> Union[Multivector, CliffPoly]:
    """
        ∫_B [(g Op_r, f)_u + (g, Op f)_u] dx − ∫_{∂B} (g, n f)_u dσ for Op in R_k, T_k (with T_k^* on f) and Q_k.
        g acts as a right 𝓜_k or u𝓜_{k-1} valued function, f as a left one.
    """
    pairs = {'Rk': ('Rk', 'Rk'), 'Tk': ('Tk', 'Tk_star'), 'Qk': ('Qk', 'Qk')}
    if which not in pairs:
        raise GeometryError(f'no Stokes formula for {which!r}')
    rule = rule or QuadratureRule(m)
    center = center if center is not None else (0,) * m
    right, left = pairs[which]
    g_op = apply(OperatorSpec(right, m, k, 'right'), g)
    f_op = apply(OperatorSpec(left, m, k), f)
    volume = integrate_ball_x(g_op * f + g * f_op, center, radius, rule, pair_u=True)
    boundary = integrate_boundary_sphere_x(g, center, radius, rule, density=f, pair_u=True)
    return volume - boundary


# # # conformal generators # # #

@dataclass(frozen=True)
class MobiusGenerator:
    """A Vahlen matrix (a, b, c, d) for one of translation, dilation, rotation or inversion."""
    kind: str
    m: int
    a: Multivector
    b: Multivector
    c: Multivector
    d: Multivector
    params: Tuple[Any, ...] = field(default=(), compare=False)

    @staticmethod
    def translation(m: int, offset: Sequence[Any]) -> 'MobiusGenerator':
        if len(offset) != m:
            raise GeometryError(f'translation vector of dimension {len(offset)} for m={m}')
        vec = Multivector(m, {1 << i: c for i, c in enumerate(offset)})
        one, zero = Multivector.scalar(m, 1), Multivector(m)
        return MobiusGenerator('translation', m, one, vec, zero, one, tuple(Fraction(c) for c in offset))

    @staticmethod
    def dilation(m: int, mu: Any) -> 'MobiusGenerator':
        """x ↦ μ²x, with Vahlen entries (μ, 0, 0, 1/μ)."""
        mu = Fraction(mu)
        if mu <= 0:
            raise GeometryError(f'dilation factor must be positive, got {mu}')
        zero = Multivector(m)
        return MobiusGenerator('dilation', m, Multivector.scalar(m, mu), zero, zero, Multivector.scalar(m, 1 / mu),
                               (mu,))

    @staticmethod
    def rotation(m: int, s: Multivector) -> 'MobiusGenerator':
        if any(len(indices) % 2 for indices, _ in s.blades()):
            raise GeometryError('rotation element must be even', meta=str(s))
        if s * s.reversion() != Multivector.scalar(m, 1):
            raise GeometryError('rotation element must satisfy s rev(s) = 1', meta=str(s))
        zero = Multivector(m)
        return MobiusGenerator('rotation', m, s, zero, zero, s, (s,))

    @staticmethod
    def rotation_from_vectors(m: int, first: Sequence[Any], second: Sequence[Any]) -> 'MobiusGenerator':
        vectors = []
        for coords in (first, second):
            if sum(Fraction(c) ** 2 for c in coords) != 1:
                raise GeometryError(f'{coords} is not a unit vector')
            vectors.append(Multivector(m, {1 << i: c for i, c in enumerate(coords)}))
        return MobiusGenerator.rotation(m, vectors[1] * vectors[0])

    @staticmethod
    def inversion(m: int) -> 'MobiusGenerator':
        """Vahlen (0, −1, 1, 0), so that φ(x) = −x^{-1} = x/‖x‖²."""
        one, zero = Multivector.scalar(m, 1), Multivector(m)
        return MobiusGenerator('inversion', m, zero, -one, one, zero)

    # # # induced maps # # #

    def _rotated(self, var: str) -> Tuple[CliffPoly, ...]:
        s = self.a
        columns = [(s * Multivector.basis(self.m, j) * s.reversion()).vector_part() for j in range(1, self.m + 1)]
        return tuple(sum((CliffPoly.variable(self.m, var, j + 1) * columns[j][i] for j in range(self.m)),
                         CliffPoly.zero(self.m)) for i in range(self.m))

    def phi(self) -> Tuple[Function, ...]:
        m = self.m
        xs = [CliffPoly.variable(m, 'x', i) for i in range(1, m + 1)]
        if self.kind == 'translation':
            return tuple(x + c for x, c in zip(xs, self.params))
        if self.kind == 'dilation':
            return tuple(x * self.params[0] ** 2 for x in xs)
        if self.kind == 'rotation':
            return self._rotated('x')
        return tuple(RadialFunction(m, {-1: x}) for x in xs)

    def u_prime(self) -> Optional[Tuple[Function, ...]]:
        """Coordinates of (cx+d) u rev(cx+d) / ‖cx+d‖², or None when u is left unchanged."""
        if self.kind in ('translation', 'dilation'):
            return None
        if self.kind == 'rotation':
            return self._rotated('u')
        return kelvin_images(self.m, 'u')

    def factor(self) -> CliffPoly:
        return CliffPoly.vector(self.m, 'x') * self.c + CliffPoly.constant(self.m, self.d)

    def norm_power(self, exponent: Fraction) -> Union[Fraction, RadialFunction]:
        if self.kind == 'inversion':
            return RadialFunction.radial(self.m, exponent)
        if self.kind == 'dilation':
            mu = self.params[0]
            if (2 * exponent).denominator != 1:
                raise GeometryError(f'dilation weight exponent {exponent} is not a half-integer')
            return mu ** int(-2 * exponent)
        return Fraction(1)

    def weight(self, which: str) -> Union[Fraction, RadialFunction]:
        """J_2 = ‖cx+d‖^{2−m} or J_{−2} = ‖cx+d‖^{−m−2}."""
        if which not in ('J2', 'Jminus2'):
            raise GeometryError(f'unknown conformal weight {which!r}')
        return self.norm_power(Fraction(2 - self.m if which == 'J2' else -self.m - 2, 2))

    def twist(self, h: Function) -> Function:
        w = self.factor()
        return w.conjugate() * h * w * self.norm_power(Fraction(-1))


def compose(f: Function, g: MobiusGenerator) -> Function:
    out = f
    if isinstance(out, RadialFunction) and out.is_polynomial():
        out = out.to_poly()
    if isinstance(out, RadialFunction):
        raise GeometryError('only polynomials are pulled back along a conformal map')
    out = out.substitute('x', g.phi())
    images = g.u_prime()
    if images is not None:
        out = out.substitute('u', images)
    return out


def mobius_transform_function(f: CliffPoly, g: MobiusGenerator, weight: str = 'J2') -> RadialFunction:
    """J_weight(φ, x) · f(φ(x), u′)."""
    if f.dim != g.m:
        raise GeometryError(f'generator for m={g.m} applied to a function of dimension {f.dim}')
    return RadialFunction.lift(compose(f, g) * g.weight(weight))


def conformal_invariance_residual(m: int, k: int, g: MobiusGenerator, f: CliffPoly, which: str,
                                  c4_scale: Fraction = Fraction(1)) -> Function:
    """J_{−2}^{-1} Op (J_2 f∘φ) − conj(cx+d) ((Op f)∘φ) (cx+d)/‖cx+d‖² for Op in R_kA_k, Q_kB_k, 𝒟₂."""
    if not f.is_scalar_valued():
        raise GeometryError('the conformal check takes scalar-valued functions')
    op: Callable[[Function], Function] = intertwined(which, m, k, c4_scale)
    lifted = op(mobius_transform_function(f, g, 'J2'))
    lhs = RadialFunction.lift(lifted) * g.norm_power(Fraction(m + 2, 2))
    rhs = g.twist(compose(op(f), g))
    return lhs - rhs


def rotation_pairing_residual(f: CliffPoly, h: CliffPoly, g: MobiusGenerator) -> Union[Multivector, CliffPoly]:
    """(f(su rev s), h(su rev s))_u − (f, h)_u."""
    if g.kind != 'rotation':
        raise GeometryError('pairing invariance is checked for rotations')
    images = g.u_prime()
    moved = sphere_integrate(f.substitute('u', images) * h.substitute('u', images), 'u')
    return _result(moved - sphere_integrate(f * h, 'u'))
