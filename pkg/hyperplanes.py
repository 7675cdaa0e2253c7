# hyperplanes.py - Spanned hyperplanes of Q_n: canonical forms, stabilizers and their cycle indices

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from math import factorial, gcd
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from models import (
    DEFAULT_DATA_DIR, AtlasRecord, BlockPartitionElement, ComputationError, CycleIndex, CycleType,
    GeneralHyperplane, HyperplaneType, Monomial, SignedPermutation, SpannedHyperplane,
    StabilizerDescription, VertexSet,
)
from group_core import GroupAction, enumerate_group, hyperoctahedral_action
from cycle_index import (
    cycle_index_from_action, hypercube_cycle_index, mobius_cycle_counts, multiply_monomials,
    substitute_monomials,
)
from oracle import affine_dimension, integer_determinant

logger = logging.getLogger(__name__)

Hyperplane = Union[GeneralHyperplane, SpannedHyperplane]

BUILTIN_MIN_VERTICES = 13
ATLAS_Q6_FILE = "atlas_q6.txt"


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# --- Vertices and the Group Action on Hyperplanes ---

def as_general(H: Hyperplane) -> GeneralHyperplane:
    if isinstance(H, SpannedHyperplane):
        return GeneralHyperplane(coeffs=H.coeffs + (0,) * (H.n - H.t), rhs=H.rhs)
    return H


def vertices_on(H: Hyperplane) -> VertexSet:
    G = as_general(H)
    mask = 0
    for v in range(1 << G.n):
        if sum(a for i, a in enumerate(G.coeffs) if v >> i & 1) == G.rhs:
            mask |= 1 << v
    return VertexSet(n=G.n, mask=mask)


@lru_cache(maxsize=None)
def vertex_count(H: SpannedHyperplane) -> int:
    return vertices_on(H).size


def transform_hyperplane(w: SignedPermutation, H: Hyperplane) -> GeneralHyperplane:
    """Image w(H): coefficient i becomes ±a_{pi(i)}, the rhs absorbs the negated coordinates."""
    G = as_general(H)
    if w.n != G.n:
        raise ComputationError("DIMENSION_MISMATCH", f"element acts on Q_{w.n}, hyperplane lives in Q_{G.n}")
    coeffs, rhs = [], G.rhs
    for i, p in enumerate(w.pi, start=1):
        a = G.coeffs[p - 1]
        if i in w.negated:
            coeffs.append(-a)
            rhs -= a
        else:
            coeffs.append(a)
    return GeneralHyperplane(coeffs=tuple(coeffs), rhs=rhs)


def normalize(H: GeneralHyperplane) -> GeneralHyperplane:
    """Divide by the content and make the first nonzero coefficient positive."""
    g = gcd(*H.coeffs, H.rhs)
    coeffs, rhs = [a // g for a in H.coeffs], H.rhs // g
    if next(a for a in coeffs if a) < 0:
        coeffs, rhs = [-a for a in coeffs], -rhs
    return GeneralHyperplane(coeffs=tuple(coeffs), rhs=rhs)


def same_hyperplane(a: Hyperplane, b: Hyperplane) -> bool:
    return normalize(as_general(a)) == normalize(as_general(b))


def is_spanned(H: Hyperplane) -> bool:
    S = vertices_on(H)
    return S.size > 0 and affine_dimension(S) == S.n - 1


# --- Canonical Form ---

def _canonical_form(G: GeneralHyperplane) -> SpannedHyperplane:
    rhs, coeffs = G.rhs, []
    for a in G.coeffs:
        if a < 0:
            # x -> 1 - x turns a*x = b into -a*x = b - a
            rhs -= a
            coeffs.append(-a)
        elif a > 0:
            coeffs.append(a)
    coeffs.sort()
    g = gcd(*coeffs, rhs)
    coeffs, rhs = [a // g for a in coeffs], rhs // g
    # complementing every support coordinate swaps b and sum(a) - b; ties keep b
    rhs = min(rhs, sum(coeffs) - rhs)
    return SpannedHyperplane(coeffs=tuple(coeffs), rhs=rhs, n=G.n)


def canonicalize(H: Hyperplane) -> SpannedHyperplane:
    G = as_general(H)
    if not is_spanned(G):
        raise ComputationError("NOT_SPANNED", f"hyperplane {G.coeffs} = {G.rhs} is not spanned by cube vertices")
    return _canonical_form(G)


# --- Enumeration of Representatives ---

def _cofactor_normal(rows: Sequence[Sequence[int]], n: int) -> Optional[Tuple[int, ...]]:
    """Normal of the linear hyperplane through n-1 vectors, None when they are dependent."""
    normal = []
    for j in range(n):
        minor = [[r[c] for c in range(n) if c != j] for r in rows]
        normal.append((-1) ** j * integer_determinant(minor))
    if not any(normal):
        return None
    g = gcd(*normal)
    normal = [a // g for a in normal]
    if next(a for a in normal if a) < 0:
        normal = [-a for a in normal]
    return tuple(normal)


@lru_cache(maxsize=None)
def _enumerate_spanned(n: int) -> Tuple[SpannedHyperplane, ...]:
    num_vertices = 1 << n
    vectors = [[(v >> i) & 1 for i in range(n)] for v in range(num_vertices)]
    # every class has a member through the origin, so n-1 further vertices fix it
    normals = set()
    for combo in combinations(range(1, num_vertices), n - 1):
        normal = _cofactor_normal([vectors[v] for v in combo], n)
        if normal is not None:
            normals.add(normal)
    logger.info(f"Q_{n}: {len(normals)} distinct hyperplanes through the origin.")

    action = hyperoctahedral_action(n)
    forms: Dict[SpannedHyperplane, int] = {}
    classes: Dict[int, SpannedHyperplane] = {}
    for normal in sorted(normals):
        form = _canonical_form(GeneralHyperplane(coeffs=normal, rhs=0))
        if form in forms:
            continue
        key, _ = action.canonical(vertices_on(form).mask)
        forms[form] = key
        known = classes.get(key)
        if known is None or (known.t, known.coeffs, known.rhs) > (form.t, form.coeffs, form.rhs):
            classes[key] = form
    reps = sorted(classes.values(), key=lambda H: (H.t, H.coeffs, H.rhs))
    for H in reps:
        if not is_spanned(H):
            raise ComputationError("NOT_SPANNED", f"enumerated form {H} fails the rank check")
    logger.info(f"Q_{n}: {len(reps)} classes of spanned hyperplanes from {len(forms)} canonical forms.")
    return tuple(reps)


def enumerate_spanned(n: int, expensive: bool = False) -> List[SpannedHyperplane]:
    """One canonical representative per B_n-class of spanned hyperplanes, ordered by (t, coeffs, rhs)."""
    if n < 1:
        raise ComputationError("UNSUPPORTED", f"n must be positive, got {n}")
    if n > 5 and not expensive:
        raise ComputationError("UNSUPPORTED", f"full enumeration for n={n} needs expensive mode")
    return list(_enumerate_spanned(n))


def builtin_representatives(n: int, min_vertices: int) -> List[SpannedHyperplane]:
    """Shipped Q_6 representatives with at least min_vertices vertices (min_vertices >= 13)."""
    if n != 6 or min_vertices < BUILTIN_MIN_VERTICES:
        raise ComputationError(
            "UNSUPPORTED", f"builtin representatives cover n=6 with min_vertices >= {BUILTIN_MIN_VERTICES}",
            {"n": n, "min_vertices": min_vertices},
        )
    records = _builtin_atlas()
    return [r.hyperplane for r in records if r.vertices >= min_vertices]


def spanned_representatives(n: int, min_vertices: int = 0, expensive: bool = False) -> List[SpannedHyperplane]:
    """Representatives with at least min_vertices vertices from enumeration or the shipped atlas."""
    if n <= 5 or expensive:
        reps = enumerate_spanned(n, expensive)
    else:
        reps = builtin_representatives(n, min_vertices)
    return [H for H in reps if vertex_count(H) >= min_vertices]


def max_coefficient(reps: Sequence[SpannedHyperplane]) -> int:
    return max((max(H.coeffs) for H in reps), default=0)


# --- Type and Stabilizer ---

def hyperplane_type(H: SpannedHyperplane) -> HyperplaneType:
    top = max(H.coeffs)
    return HyperplaneType(alpha=tuple(H.coeffs.count(i) for i in range(1, top + 1)))


def stabilizer_description(H: SpannedHyperplane) -> StabilizerDescription:
    return StabilizerDescription(alpha=hyperplane_type(H), delta=H.delta, n=H.n, t=H.t)


def _blocks(H: SpannedHyperplane) -> List[List[int]]:
    """Coordinate intervals holding equal coefficients, one per value 1..max."""
    blocks, start = [], 1
    for size in hyperplane_type(H).alpha:
        blocks.append(list(range(start, start + size)))
        start += size
    return blocks


def stabilizer_elements(H: SpannedHyperplane) -> List[SignedPermutation]:
    """F(H) as block permutations of the support (all-negative too when delta=1) times B_{n-t} on the rest."""
    t, n = H.t, H.n
    blocks = _blocks(H)
    head_signs = [()] + ([tuple(range(1, t + 1))] if H.delta else [])
    tail = enumerate_group(n - t)
    elements = []
    for images in product(*(permutations(block) for block in blocks)):
        head = [0] * t
        for block, image in zip(blocks, images):
            for src, dst in zip(block, image):
                head[src - 1] = dst
        for signs in head_signs:
            for w in tail:
                pi = tuple(head) + tuple(p + t for p in w.pi)
                negated = signs + tuple(i + t for i in w.negated)
                elements.append(SignedPermutation.model_construct(pi=pi, negated=negated))
    expected = stabilizer_description(H).order
    if len(elements) != expected:
        raise ComputationError("STABILIZER_ORDER", f"built {len(elements)} elements for {H}, expected {expected}")
    return elements


# --- Partitions and Block Elements ---

@lru_cache(maxsize=None)
def integer_partitions(m: int) -> Tuple[Tuple[int, ...], ...]:
    """Partitions of m with descending parts, in lexicographic order."""
    def build(remaining: int, largest: int) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, largest), 0, -1):
            for rest in build(remaining - part, part):
                yield (part,) + rest
    return tuple(sorted(build(m, m)))


def z_lambda(parts: Sequence[int]) -> int:
    """1^{m_1} m_1! 2^{m_2} m_2! ...: the centralizer order of a permutation of cycle type lambda."""
    out = 1
    for length, mult in CycleType.from_lengths(parts).counts:
        out *= length ** mult * factorial(mult)
    return out


def block_elements(H: SpannedHyperplane) -> Iterator[BlockPartitionElement]:
    """One positive element per tuple of block partitions, each followed by its negative twin when delta=1."""
    alpha = hyperplane_type(H).alpha
    for blocks in product(*(integer_partitions(a) for a in alpha)):
        yield BlockPartitionElement(blocks=blocks)
        if H.delta:
            yield BlockPartitionElement(blocks=blocks, negative=True)


def _check_element(H: SpannedHyperplane, elem: BlockPartitionElement) -> None:
    alpha = hyperplane_type(H).alpha
    if len(elem.blocks) != len(alpha) or any(sum(b) != a for b, a in zip(elem.blocks, alpha)):
        raise ComputationError("BLOCK_MISMATCH", f"block partitions {elem.blocks} do not match alpha={alpha}")
    if elem.negative and not H.delta:
        raise ComputationError("NEGATIVE_BRANCH", f"{H} has delta=0, so no all-negative symmetries")


def psi(H: SpannedHyperplane, elem: BlockPartitionElement) -> int:
    """Number of support vertices of H fixed by a block element."""
    _check_element(H, elem)
    if elem.negative:
        parts = elem.parts
        return 0 if any(p % 2 for p in parts) else 2 ** len(parts)
    # [x^b] prod_i prod_j (1 + x^{ij})^{m_ij}, truncated at degree b
    b = H.rhs
    poly = [1] + [0] * b
    for value, counts in enumerate(elem.block_counts(), start=1):
        for part, mult in counts.items():
            step = value * part
            for _ in range(mult):
                for d in range(b, step - 1, -1):
                    poly[d] += poly[d - step]
    return poly[b]


def power_block_element(elem: BlockPartitionElement, j: int) -> BlockPartitionElement:
    """Cycle type of the j-th power: a part i splits into gcd(i, j) parts of length i / gcd(i, j)."""
    if j < 1:
        raise ComputationError("UNSUPPORTED", f"power must be positive, got {j}")
    blocks = []
    for block in elem.blocks:
        parts = []
        for i in block:
            g = gcd(i, j)
            parts.extend([i // g] * g)
        blocks.append(tuple(sorted(parts, reverse=True)))
    return BlockPartitionElement(blocks=tuple(blocks), negative=elem.negative and j % 2 == 1)


def element_order_bound(elem: BlockPartitionElement) -> int:
    order = 1
    for part in elem.parts:
        order = _lcm(order, part)
    return 2 * order if elem.negative else order


def support_vertex_count(H: SpannedHyperplane) -> int:
    """|V_t(H)|: solutions on the support coordinates alone."""
    identity = BlockPartitionElement(blocks=tuple((1,) * a for a in hyperplane_type(H).alpha))
    return psi(H, identity)


def induced_counts(H: SpannedHyperplane, elem: BlockPartitionElement) -> CycleType:
    """Cycle type on V_t(H), recovered from fixed-point counts of all powers."""
    bound = element_order_bound(elem)
    values = {j: psi(H, power_block_element(elem, j)) for j in range(1, bound + 1)}
    counts = mobius_cycle_counts(values, bound)
    if counts.mass != support_vertex_count(H):
        raise ComputationError(
            "INCONSISTENT_PSI", f"induced cycles cover {counts.mass} of {support_vertex_count(H)} support vertices"
        )
    return counts


def f_monomials(elem: BlockPartitionElement, H: SpannedHyperplane,
                variables: Optional[Sequence[int]] = None) -> Dict[int, Monomial]:
    """z_j -> prod_i z_{lcm(i,j)}^{i j m_i / lcm(i,j)}: cycles of (element x j-cycle) on V_t(H) x Q_{n-t}."""
    counts = induced_counts(H, elem).as_dict()
    if variables is None:
        variables = hypercube_cycle_index(H.n - H.t).variables()
    out: Dict[int, Monomial] = {}
    for j in variables:
        factors = []
        for i, m in counts.items():
            length = _lcm(i, j)
            factors.append(((length, i * j * m // length),))
        out[j] = multiply_monomials(*factors)
    return out


# --- Cycle Indices of Hyperplanes ---

@lru_cache(maxsize=None)
def cycle_index_symbolic(H: SpannedHyperplane) -> CycleIndex:
    """Z_H from block partitions: (1/2^delta) sum over partition tuples of Z_{n-t}(f) / z_mu."""
    base = hypercube_cycle_index(H.n - H.t)
    variables = base.variables()
    terms: Dict[Monomial, Fraction] = {}
    for elem in block_elements(H):
        weight = Fraction(1, 2 ** H.delta)
        for block in elem.blocks:
            weight /= z_lambda(block)
        image = substitute_monomials(base, f_monomials(elem, H, variables))
        for mono, coef in image.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + weight * coef
    index = CycleIndex(terms={m: c for m, c in terms.items() if c}, group_order=stabilizer_description(H).order)
    logger.debug(f"Symbolic cycle index of {H} in Q_{H.n}: {len(index.terms)} terms.")
    return index


@lru_cache(maxsize=None)
def cycle_index_burnside(H: SpannedHyperplane) -> CycleIndex:
    """Z_H by direct cycle decomposition of every stabilizer element on V(H)."""
    action = GroupAction(H.n, stabilizer_elements(H))
    return cycle_index_from_action(action, vertices_on(H).mask)


# --- Atlas Files ---

def atlas_record(H: SpannedHyperplane, label: str) -> AtlasRecord:
    return AtlasRecord(
        label=label, hyperplane=H, alpha=hyperplane_type(H), delta=H.delta,
        vertices=vertex_count(H), stabilizer=stabilizer_description(H).order,
    )


def format_atlas(records: Sequence[AtlasRecord]) -> str:
    lines = []
    for r in records:
        H = r.hyperplane
        lines.append(
            f"label={r.label} n={H.n} coeffs={','.join(map(str, H.coeffs))} rhs={H.rhs} "
            f"alpha={r.alpha} delta={r.delta} vertices={r.vertices} stabilizer={r.stabilizer}"
        )
    return "\n".join(lines)


def _parse_atlas_line(line: str, lineno: int) -> AtlasRecord:
    try:
        fields = dict(token.split("=", 1) for token in line.split())
        H = SpannedHyperplane(
            coeffs=tuple(int(a) for a in fields["coeffs"].split(",")),
            rhs=int(fields["rhs"]), n=int(fields["n"]),
        )
        record = AtlasRecord(
            label=fields["label"], hyperplane=H,
            alpha=HyperplaneType(alpha=tuple(int(a) for a in fields["alpha"].split(","))),
            delta=int(fields["delta"]), vertices=int(fields["vertices"]), stabilizer=int(fields["stabilizer"]),
        )
    except (KeyError, ValueError) as e:
        raise ComputationError("PARSE", f"atlas line {lineno}: {e}") from e
    if not is_spanned(H):
        raise ComputationError("NOT_SPANNED", f"atlas line {lineno}: {H} is not spanned")
    computed = atlas_record(H, record.label)
    if computed != record:
        raise ComputationError(
            "PARSE", f"atlas line {lineno}: stored fields disagree with recomputed ones",
            {"stored": record.model_dump(mode="json"), "computed": computed.model_dump(mode="json")},
        )
    return record


def read_atlas(path: Path) -> List[AtlasRecord]:
    """Parse an atlas file, re-verifying every record against its hyperplane."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ComputationError("PARSE", f"cannot read atlas {path}: {e}") from e
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line and not line.startswith("#"):
            records.append(_parse_atlas_line(line, lineno))
    logger.debug(f"Read {len(records)} atlas records from {path}.")
    return records


@lru_cache(maxsize=None)
def _builtin_atlas() -> Tuple[AtlasRecord, ...]:
    return tuple(read_atlas(DEFAULT_DATA_DIR / ATLAS_Q6_FILE))
