# cycle_index.py - Sparse cycle-index polynomials, two-colour substitution and Mobius inversion

import logging
import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import QQ, Poly, Rational, symbols

from models import (
    Bivariate, ComputationError, CycleIndex, CycleType, Monomial, SignedPermutation, VertexSet
)
from group_core import GroupAction, hyperoctahedral_action

logger = logging.getLogger(__name__)

_TERM_PATTERN = re.compile(r"^z(\d+)(?:\^(\d+))?$")
U1, U2 = symbols("u1 u2")


# --- Monomial Helpers ---

def multiply_monomials(*monos: Monomial) -> Monomial:
    exps: Dict[int, int] = {}
    for mono in monos:
        for var, exp in mono:
            exps[var] = exps.get(var, 0) + exp
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def power_monomial(mono: Monomial, k: int) -> Monomial:
    return tuple((var, exp * k) for var, exp in mono) if k else ()


def format_monomial(mono: Monomial) -> str:
    return " ".join(f"z{var}^{exp}" for var, exp in mono) or "1"


def parse_monomial(text: str) -> Monomial:
    tokens = text.replace("*", " ").split()
    if tokens == ["1"]:
        return ()
    exps: List[Tuple[int, int]] = []
    for token in tokens:
        match = _TERM_PATTERN.match(token)
        if not match:
            raise ComputationError("PARSE", f"unrecognised monomial factor '{token}'")
        exps.append((int(match.group(1)), int(match.group(2) or 1)))
    return multiply_monomials(tuple(exps))


# --- Construction ---

def cycle_index_from_types(type_counts: Iterable[Tuple[CycleType, int]], group_order: int) -> CycleIndex:
    terms: Dict[Monomial, Fraction] = {}
    for ctype, times in type_counts:
        mono = tuple(ctype.counts)
        terms[mono] = terms.get(mono, Fraction(0)) + Fraction(times, group_order)
    return CycleIndex(terms={m: c for m, c in terms.items() if c}, group_order=group_order)


def cycle_index_from_action(action: GroupAction, mask: int) -> CycleIndex:
    return cycle_index_from_types(action.cycle_types(mask), len(action))


def cycle_index_of_action(elements: Sequence[SignedPermutation], S: VertexSet) -> CycleIndex:
    """(1/|G|) sum of z^{c(g)} over the elements, c(g) the induced cycle type on S."""
    if not elements:
        raise ComputationError("NOT_STABILIZING", "empty element list")
    return cycle_index_from_action(GroupAction(S.n, elements), S.mask)


@lru_cache(maxsize=None)
def hypercube_cycle_index(n: int) -> CycleIndex:
    """Cycle index of B_n acting on the 2^n vertices of Q_n."""
    if n == 0:
        # the 0-cube is a single vertex fixed by the trivial group
        return CycleIndex(terms={((1, 1),): Fraction(1)}, group_order=1)
    action = hyperoctahedral_action(n)
    index = cycle_index_from_action(action, (1 << (1 << n)) - 1)
    logger.info(f"Cycle index of B_{n} on Q_{n}: {len(index.terms)} terms.")
    return index


# --- Substitution and Evaluation ---

def _color_sum(var: int) -> Poly:
    return Poly(U1 ** var + U2 ** var, U1, U2, domain=QQ)


def substitute_two_colors(Z: CycleIndex) -> Bivariate:
    """Replace every z_i by u_1^i + u_2^i and collect terms."""
    mass = Z.mass
    total = Poly(0, U1, U2, domain=QQ)
    for mono, coef in Z.terms.items():
        term = Poly(Rational(coef.numerator, coef.denominator), U1, U2, domain=QQ)
        for var, exp in mono:
            term = term * _color_sum(var) ** exp
        total = total + term
    coefficients: Dict[Tuple[int, int], Fraction] = {}
    for (p, q), c in sorted(total.terms()):
        if c == 0:
            continue
        coefficients[(p, q)] = Fraction(int(c.p), int(c.q))
    if Z.group_order is not None:
        bad = [pq for pq, c in coefficients.items() if c.denominator != 1]
        if bad:
            raise ComputationError("NON_INTEGRAL", f"group average expands to non-integral coefficients at u1^{bad[0][0]}")
    return Bivariate(coefficients=coefficients, mass=mass)


def coefficient(C: Bivariate, p: int, q: int) -> int:
    """[u_1^p u_2^q] C as an exact integer."""
    value = C.coefficients.get((p, q), Fraction(0))
    if value.denominator != 1:
        raise ComputationError("NON_INTEGRAL", f"coefficient of u1^{p} u2^{q} is {value}")
    return int(value)


def count_colorings(Z: CycleIndex, k: int) -> int:
    """Orbits of k-subsets under the group behind Z."""
    if k < 0 or k > Z.mass:
        return 0
    return coefficient(substitute_two_colors(Z), k, Z.mass - k)


def substitute_monomials(Z: CycleIndex, subst: Mapping[int, Monomial]) -> CycleIndex:
    terms: Dict[Monomial, Fraction] = {}
    for mono, coef in Z.terms.items():
        factors = []
        for var, exp in mono:
            if var not in subst:
                raise ComputationError("MISSING_SUBSTITUTION", f"no substitution given for z{var}")
            factors.append(power_monomial(subst[var], exp))
        image = multiply_monomials(*factors)
        terms[image] = terms.get(image, Fraction(0)) + coef
    return CycleIndex(terms={m: c for m, c in terms.items() if c})


def evaluate_all_ones(Z: CycleIndex) -> Fraction:
    return sum(Z.terms.values(), Fraction(0))


# --- Mobius Inversion ---

def divisors(m: int) -> List[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def mobius(m: int) -> int:
    if m < 1:
        raise ValueError("mobius is defined on positive integers")
    result, p = 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result


def mobius_cycle_counts(psi: Mapping[int, int], max_order: int) -> CycleType:
    """Cycle counts m_i = (1/i) sum_{j | i} mu(i/j) psi(j) from fixed-point counts psi(j) of g^j."""
    counts: Dict[int, int] = {}
    for i in range(1, max_order + 1):
        try:
            total = sum(mobius(i // j) * psi[j] for j in divisors(i))
        except KeyError as e:
            raise ComputationError("INCONSISTENT_PSI", f"fixed-point count of power {e.args[0]} is missing") from e
        if total < 0 or total % i:
            raise ComputationError(
                "INCONSISTENT_PSI", f"cycle count for length {i} is {Fraction(total, i)}",
                {"psi": dict(psi), "length": i},
            )
        if total:
            counts[i] = total // i
    return CycleType.from_mapping(counts)


# --- Serialization ---

def _dense_key(mono: Monomial, width: int) -> Tuple[int, ...]:
    exps = dict(mono)
    return tuple(exps.get(v, 0) for v in range(1, width + 1))


def sorted_terms(Z: CycleIndex) -> List[Tuple[Monomial, Fraction]]:
    width = max(Z.variables(), default=0)
    return sorted(Z.terms.items(), key=lambda item: _dense_key(item[0], width), reverse=True)


def format_cycle_index(Z: CycleIndex) -> str:
    """Canonical text form: one 'c * z1^a z2^b' line per monomial, z_1-heavy terms first."""
    return "\n".join(f"{coef} * {format_monomial(mono)}" for mono, coef in sorted_terms(Z))


def parse_cycle_index(text: str, group_order: Optional[int] = None) -> CycleIndex:
    terms: Dict[Monomial, Fraction] = {}
    for line in text.strip().splitlines():
        if not line.strip():
            continue
        coef_text, _, mono_text = line.partition("*")
        mono = parse_monomial(mono_text)
        terms[mono] = terms.get(mono, Fraction(0)) + Fraction(coef_text.strip())
    return CycleIndex(terms=terms, group_order=group_order)


def parse_polynomial(expr: str, denominator: int = 1) -> CycleIndex:
    """Parse '2 z1^2 z2 + 3 z2^2 + ...' and divide by the denominator."""
    terms: Dict[Monomial, Fraction] = {}
    for chunk in expr.split("+"):
        tokens = chunk.split()
        if not tokens:
            continue
        coef = 1
        if tokens[0].isdigit():
            coef = int(tokens[0])
            tokens = tokens[1:]
        mono = parse_monomial(" ".join(tokens) or "1")
        terms[mono] = terms.get(mono, Fraction(0)) + Fraction(coef, denominator)
    return CycleIndex(terms=terms, group_order=denominator)


def cycle_index_to_dict(Z: CycleIndex) -> Dict[str, str]:
    return {format_monomial(mono): str(coef) for mono, coef in sorted_terms(Z)}
