# census.py - A_n(k), H_n(k) and F_n(k) across the high, mid and low vertex-count regimes

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from models import (
    CensusRegime, CensusRow, CensusTable, ComputationError, CycleIndex, IntersectionClass,
    SignedPermutation, SpannedHyperplane, VertexSet,
)
from group_core import act_on_set, from_cycles, hyperoctahedral_action, lex_key, popcount
from cycle_index import coefficient, count_colorings, cycle_index_from_action, hypercube_cycle_index, substitute_two_colors
from hyperplanes import builtin_representatives, cycle_index_symbolic, spanned_representatives, vertices_on
from oracle import affine_dimension
from index_store import BaseIndexStore, default_store

logger = logging.getLogger(__name__)


# --- Regimes ---

def regime(n: int, k: int) -> CensusRegime:
    """Counting rule that licenses row k; k <= n rows are zero by definition."""
    if k <= n:
        return CensusRegime.DEFINITION
    if k > 2 ** (n - 1):
        return CensusRegime.HIGH
    if 4 * k > 2 ** n:
        return CensusRegime.MID
    if 8 * k > 2 ** n:
        return CensusRegime.LOW
    return CensusRegime.UNKNOWN


def _check_window(n: int, k: int, shift: int, name: str) -> None:
    # 2^(n-shift) < k <= 2^(n-shift+1)
    if not (2 ** n < k * 2 ** shift <= 2 ** (n + 1)):
        raise ComputationError(
            "REGIME", f"{name} needs 2^{n - shift} < k <= 2^{n - shift + 1}, got n={n}, k={k}", {"n": n, "k": k}
        )


@lru_cache(maxsize=None)
def _a_table(n: int) -> Tuple[Tuple[int, int], ...]:
    C = substitute_two_colors(hypercube_cycle_index(n))
    size = 1 << n
    return tuple((k, coefficient(C, k, size - k)) for k in range(size + 1))


def a_table(n: int) -> Dict[int, int]:
    """A_n(k): B_n-classes of k-subsets of the cube vertices, k = 0..2^n."""
    return dict(_a_table(n))


# --- High and Mid Regimes ---

def f_high(n: int, k: int) -> int:
    if not 2 ** (n - 1) < k <= 2 ** n:
        raise ComputationError("REGIME", f"f_high needs 2^{n - 1} < k <= 2^{n}, got n={n}, k={k}")
    return a_table(n)[k]


def n_partial_mid(H: SpannedHyperplane, k: int) -> int:
    """Classes of k-subsets spanning an image of H: plain coefficient extraction from C_H."""
    _check_window(H.n, k, 2, "n_partial_mid")
    return count_colorings(cycle_index_symbolic(H), k)


def h_mid(n: int, k: int, expensive: bool = False) -> int:
    _check_window(n, k, 2, "h_mid")
    return sum(n_partial_mid(H, k) for H in spanned_representatives(n, k, expensive))


def f_mid(n: int, k: int, expensive: bool = False) -> int:
    return a_table(n)[k] - h_mid(n, k, expensive)


# --- Stabilizer Cycle Indices of Vertex Sets ---

def full_stabilizer_index(n: int, mask: int, store: Optional[BaseIndexStore] = None) -> CycleIndex:
    """Cycle index of the B_n-stabilizer of a vertex set acting on it, cached by canonical form."""
    store = store or default_store
    action = hyperoctahedral_action(n, store)
    canonical, _ = action.canonical(mask)
    key = ("full", n, canonical)
    index = store.get_cycle_index(key)
    if index is None:
        index = cycle_index_from_action(action.stabilizer(canonical), canonical)
        store.store_cycle_index(key, index)
    return index


def local_cycle_index(H: SpannedHyperplane, mask: int) -> CycleIndex:
    """Cycle index of the elements of F(H) that keep a subset of V(H) in place."""
    action = hyperoctahedral_action(H.n)
    fixing = action.stabilizer(vertices_on(H).mask)
    return cycle_index_from_action(fixing.stabilizer(mask), mask)


# --- Low Regime: Intersections H ∩ w(H) ---

@lru_cache(maxsize=None)
def _orbit(H: SpannedHyperplane) -> Tuple[Tuple[int, int], ...]:
    """(image of V(H), row of an element producing it), sorted by image."""
    return tuple(sorted(hyperoctahedral_action(H.n).orbit(vertices_on(H).mask).items()))


def _check_flat(ic: IntersectionClass) -> None:
    dim = affine_dimension(ic.vertex_set)
    if dim != ic.vertex_set.n - 2:
        raise ComputationError(
            "DIMENSION", f"intersection with {ic.vertex_count} vertices has dimension {dim}",
            {"mask": ic.vertex_set.mask},
        )


@lru_cache(maxsize=None)
def e_sets(H: SpannedHyperplane, k: int) -> Tuple[Tuple[IntersectionClass, ...], Tuple[IntersectionClass, ...]]:
    """Flats H ∩ w(H) with w(H) != H and at least k vertices, up to F(H) (first) and up to B_n (second).

    Each class keeps the w producing its source meet as ``image_element`` and an
    element of the declared group carrying that meet onto ``vertex_set`` as ``witness``.
    """
    _check_window(H.n, k, 3, "e_sets")
    n = H.n
    action = hyperoctahedral_action(n)
    base = vertices_on(H).mask
    fixing = action.stabilizer(base)
    e1: Dict[int, IntersectionClass] = {}
    e2: Dict[int, IntersectionClass] = {}
    for image, row in _orbit(H):
        meet = base & image
        if image == base or popcount(meet) < k:
            continue
        w = action.elements[row]
        local_mask, local_row = fixing.canonical(meet)
        if local_mask not in e1:
            e1[local_mask] = IntersectionClass(
                vertex_set=VertexSet(n=n, mask=local_mask), source=VertexSet(n=n, mask=meet),
                base=H, other=H, image_element=w, witness=fixing.elements[local_row], group="stabilizer",
                stabilizer=fixing.stabilizer(local_mask).elements,
            )
        full_mask, full_row = action.canonical(meet)
        if full_mask not in e2:
            e2[full_mask] = IntersectionClass(
                vertex_set=VertexSet(n=n, mask=full_mask), source=VertexSet(n=n, mask=meet),
                base=H, other=H, image_element=w, witness=action.elements[full_row], group="full",
                stabilizer=action.stabilizer(full_mask).elements,
            )
    first = tuple(sorted(e1.values(), key=lambda ic: lex_key(ic.vertex_set.mask)))
    second = tuple(sorted(e2.values(), key=lambda ic: lex_key(ic.vertex_set.mask)))
    for ic in first + second:
        _check_flat(ic)
    logger.debug(f"E-sets of {H} at k={k}: {len(first)} local, {len(second)} full classes.")
    return first, second


def intersection_cycle_indices(ic: IntersectionClass, H: SpannedHyperplane) -> Tuple[CycleIndex, CycleIndex]:
    """(local index under F(H) on the intersection, partial index under its full B_n-stabilizer)."""
    if ic.source.mask & ~vertices_on(H).mask:
        raise ComputationError("NOT_STABILIZING", f"intersection is not contained in {H}")
    return local_cycle_index(H, ic.source.mask), full_stabilizer_index(H.n, ic.vertex_set.mask)


@lru_cache(maxsize=None)
def n_partial_low(H: SpannedHyperplane, k: int) -> int:
    """Classes of k-subsets inside some image of H, correcting C_H for sets also lying in a second image."""
    e1, e2 = e_sets(H, k)
    total = count_colorings(cycle_index_symbolic(H), k)
    for ic in e1:
        local, _ = intersection_cycle_indices(ic, H)
        total -= count_colorings(local, k)
    for ic in e2:
        _, partial = intersection_cycle_indices(ic, H)
        total += count_colorings(partial, k)
    return total


# --- Low Regime: Overlaps Between Representatives ---

@lru_cache(maxsize=None)
def _pair_flats(Hi: SpannedHyperplane, Hj: SpannedHyperplane) -> Tuple[Tuple[int, int, int, int], ...]:
    """(canonical mask, source mask, image row, canonicalizing row) of each B_n-class of V(Hi) ∩ w(V(Hj)) above 2^(n-3) vertices."""
    n = Hi.n
    action = hyperoctahedral_action(n)
    base = vertices_on(Hi).mask
    threshold = 2 ** (n - 3)
    seen: Dict[int, Tuple[int, int, int, int]] = {}
    visited = set()
    for image, row in _orbit(Hj):
        meet = base & image
        if image == base or popcount(meet) <= threshold or meet in visited:
            continue
        visited.add(meet)
        canonical, canonical_row = action.canonical(meet)
        seen.setdefault(canonical, (canonical, meet, row, canonical_row))
    return tuple(sorted(seen.values(), key=lambda item: lex_key(item[0])))


def pair_flats(Hi: SpannedHyperplane, Hj: SpannedHyperplane, k: int) -> List[IntersectionClass]:
    """B_n-classes of flats Hi ∩ w(Hj) with at least k vertices."""
    if Hi.n != Hj.n:
        raise ComputationError("DIMENSION_MISMATCH", f"{Hi} and {Hj} live in different cubes")
    _check_window(Hi.n, k, 3, "pair_flats")
    action = hyperoctahedral_action(Hi.n)
    out = []
    for canonical, meet, row, canonical_row in _pair_flats(Hi, Hj):
        if popcount(canonical) < k:
            continue
        ic = IntersectionClass(
            vertex_set=VertexSet(n=Hi.n, mask=canonical), source=VertexSet(n=Hi.n, mask=meet),
            base=Hi, other=Hj, image_element=action.elements[row], witness=action.elements[canonical_row],
            group="full",
        )
        _check_flat(ic)
        out.append(ic)
    return out


def pair_overlap(Hi: SpannedHyperplane, Hj: SpannedHyperplane, k: int) -> int:
    """Classes of k-sets lying in an image of Hi and in an image of Hj."""
    return sum(count_colorings(full_stabilizer_index(Hi.n, ic.vertex_set.mask), k) for ic in pair_flats(Hi, Hj, k))


def _inside_some_image(H: SpannedHyperplane, mask: int) -> bool:
    images = np.array([image for image, _ in _orbit(H)], dtype=np.uint64)
    m = np.uint64(mask)
    return bool(np.any((images & m) == m))


def higher_overlap(H_list: Sequence[SpannedHyperplane], k: int) -> int:
    """m-fold term: flats of the first pair that also sit inside an image of every other hyperplane."""
    if len(H_list) < 2:
        raise ComputationError("UNSUPPORTED", "an overlap term needs at least two hyperplanes")
    total = 0
    for ic in pair_flats(H_list[0], H_list[1], k):
        if all(_inside_some_image(H, ic.vertex_set.mask) for H in H_list[2:]):
            total += count_colorings(full_stabilizer_index(ic.vertex_set.n, ic.vertex_set.mask), k)
    return total


def h_low(n: int, k: int, expensive: bool = False) -> int:
    """Inclusion-exclusion over the representatives; every overlap is a codimension-2 flat."""
    _check_window(n, k, 3, "h_low")
    reps = spanned_representatives(n, k, expensive)
    total = sum(n_partial_low(H, k) for H in reps)

    flats: Dict[int, int] = {}
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            for ic in pair_flats(reps[i], reps[j], k):
                if ic.vertex_set.mask not in flats:
                    flats[ic.vertex_set.mask] = count_colorings(full_stabilizer_index(n, ic.vertex_set.mask), k)
    containing = {
        mask: frozenset(i for i, H in enumerate(reps) if _inside_some_image(H, mask)) for mask in flats
    }

    terms: Dict[int, int] = {}

    # depth-first over index subsets, dropped as soon as no flat lies in all of them
    def extend(size: int, last: int, alive: List[int]) -> None:
        nonlocal total
        for nxt in range(last + 1, len(reps)):
            still = [mask for mask in alive if nxt in containing[mask]]
            if not still:
                continue
            if size + 1 >= 2:
                term = sum(flats[mask] for mask in still)
                total += (-1) ** size * term
                terms[size + 1] = terms.get(size + 1, 0) + term
            extend(size + 1, nxt, still)

    extend(0, -1, list(flats))
    logger.info(f"h_low(n={n}, k={k}): {len(reps)} hyperplanes, {len(flats)} flats, overlap terms {terms}.")
    return total


def f_low(n: int, k: int, expensive: bool = False) -> int:
    return a_table(n)[k] - h_low(n, k, expensive)


def h_low_q6_closed_form(k: int) -> int:
    """Hand-assembled H_6(k) for 13 <= k <= 16 from the known overlap structure of the 14 representatives."""
    if not 13 <= k <= 16:
        raise ComputationError("REGIME", f"closed form covers 13 <= k <= 16, got {k}")
    total = sum(count_colorings(cycle_index_symbolic(H), k) for H in builtin_representatives(6, 13))
    total -= count_colorings(hypercube_cycle_index(4), k)
    total -= 2 * count_colorings(cycle_index_symbolic(SpannedHyperplane(coeffs=(1, 1), rhs=1, n=5)), k)
    H62 = SpannedHyperplane(coeffs=(1, 1), rhs=1, n=6)
    total -= count_colorings(local_cycle_index(H62, flat_mask(H62, from_cycles(6, [[1, 3], [2, 4]]))), k)
    return total


def flat_mask(H: SpannedHyperplane, w: SignedPermutation) -> int:
    """Vertex set of H ∩ w(H)."""
    base = vertices_on(H)
    return base.mask & act_on_set(w, base).mask


# --- Per-Hyperplane Columns ---

def per_hyperplane_counts(n: int, k: int, expensive: bool = False) -> Dict[str, int]:
    """N_H(k) for every representative with at least k vertices, keyed 'coeffs|rhs'."""
    reg = regime(n, k)
    if reg is CensusRegime.MID:
        return {H.key(): n_partial_mid(H, k) for H in spanned_representatives(n, k, expensive)}
    if reg is CensusRegime.LOW:
        return {H.key(): n_partial_low(H, k) for H in spanned_representatives(n, k, expensive)}
    raise ComputationError("REGIME", f"per-hyperplane counts exist in the mid and low regimes only, got {reg.value}")


# --- Table Assembly ---

def _computed_row(n: int, k: int, A: int, per_hyperplane: bool, expensive: bool) -> Optional[CensusRow]:
    reg = regime(n, k)
    if reg is CensusRegime.DEFINITION:
        return CensusRow(n=n, k=k, A=A, H=A, F=0, regime=reg, provenance="F=0 since k <= n")
    if reg is CensusRegime.HIGH:
        return CensusRow(n=n, k=k, A=A, H=0, F=f_high(n, k), regime=reg, provenance="F=A since k > 2^(n-1)")
    if reg is CensusRegime.MID:
        counts = per_hyperplane_counts(n, k, expensive)
        H = sum(counts.values())
        return CensusRow(
            n=n, k=k, A=A, H=H, F=A - H, regime=reg, provenance=f"A minus {len(counts)} hyperplane counts",
            per_hyperplane=counts if per_hyperplane else {},
        )
    if reg is CensusRegime.LOW:
        try:
            H = h_low(n, k, expensive)
            counts = per_hyperplane_counts(n, k, expensive) if per_hyperplane else {}
        except ComputationError as e:
            if e.code != "UNSUPPORTED":
                raise
            logger.warning(f"Low regime for n={n}, k={k} not computable here: {e.message}")
            return None
        return CensusRow(
            n=n, k=k, A=A, H=H, F=A - H, regime=reg, provenance="inclusion-exclusion over hyperplane overlaps",
            per_hyperplane=counts,
        )
    return None


def assemble_table(
    n: int,
    external: Optional[Mapping[int, int]] = None,
    per_hyperplane: bool = False,
    ks: Optional[Iterable[int]] = None,
    expensive: bool = False,
    external_label: str = "external",
) -> CensusTable:
    """Rows k of the census, computed where a regime applies, else taken from external values or left unknown."""
    external = dict(external or {})
    A_values = a_table(n)
    size = 1 << n
    rows: List[CensusRow] = []
    for k in (range(size + 1) if ks is None else ks):
        if not 0 <= k <= size:
            raise ComputationError("REGIME", f"k={k} outside 0..{size}")
        A = A_values[k]
        row = _computed_row(n, k, A, per_hyperplane, expensive)
        given = external.get(k)
        if row is not None:
            if given is not None and given != row.F:
                raise ComputationError(
                    "EXTERNAL_CONFLICT", f"external F_{n}({k})={given} disagrees with computed {row.F}",
                    {"n": n, "k": k, "external": given, "computed": row.F},
                )
        elif given is not None:
            if not 0 <= given <= A:
                raise ComputationError("EXTERNAL_CONFLICT", f"external F_{n}({k})={given} outside 0..A={A}")
            row = CensusRow(n=n, k=k, A=A, H=A - given, F=given, regime=CensusRegime.EXTERNAL, provenance=external_label)
        else:
            row = CensusRow(n=n, k=k, A=A, regime=CensusRegime.UNKNOWN, provenance="no applicable regime")
        rows.append(row)
        logger.debug(f"n={n} k={k}: {row.regime.value} F={row.F}")
    return CensusTable(n=n, rows=rows)


def read_external_values(path: Path) -> Dict[int, int]:
    """k -> F_n(k) from a JSON object, an exported census JSON, or 'k F' text lines."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ComputationError("PARSE", f"cannot read external values {path}: {e}") from e
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
            if isinstance(data, dict) and "rows" in data:
                return {int(r["k"]): int(r["F"]) for r in data["rows"] if r.get("F") is not None}
            return {int(k): int(v) for k, v in data.items()}
        values = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                k, F = line.replace(",", " ").split()
                values[int(k)] = int(F)
        return values
    except (ValueError, KeyError, TypeError, AttributeError) as e:
        raise ComputationError("PARSE", f"malformed external values in {path}: {e}") from e
