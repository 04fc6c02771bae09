from fractions import Fraction
from typing import Any, Iterable, Sequence

SUB = str.maketrans('0123456789-', '₀₁₂₃₄₅₆₇₈₉₋')
SUP = str.maketrans('0123456789-/', '⁰¹²³⁴⁵⁶⁷⁸⁹⁻ᐟ')


def subscript(x: Any) -> str:
    return str(x).translate(SUB)


def superscript(x: Any) -> str:
    return str(x).translate(SUP)


def blade(indices: Iterable[int]) -> str:
    indices = tuple(indices)
    if not indices:
        return '1'
    sep = '.' if any(i > 9 for i in indices) else ''
    return 'e' + sep.join(subscript(i) for i in indices)


def monomial(var: str, exponents: Sequence[int]) -> str:
    return ''.join(f'{var}{subscript(i + 1)}' + (superscript(e) if e > 1 else '')
                   for i, e in enumerate(exponents) if e)


def radial(q: Fraction) -> str:
    # r stands for x·x
    return '' if q == 0 else f'r{superscript(q)}'


def pi_power(j: Fraction) -> str:
    if j == 0:
        return ''
    return 'π' if j == 1 else f'π{superscript(j)}'


def operator(name: str, k: Any = 'k') -> str:
    base, star = (name[:-5], '*') if name.endswith('_star') else (name, '')
    base = base.rstrip('k')
    return f'{base}{subscript(k)}{star}'
