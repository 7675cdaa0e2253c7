# oracle.py - Brute-force cross-checks: exact affine dimension, orbit census, subset orbits, vertex bounds

import logging
from itertools import combinations
from math import comb
from typing import Dict, List, Sequence, Tuple

import numpy as np

from models import (
    ClassificationRecord, ComputationError, IntersectionBoundReport, SignedPermutation, VertexSet
)
from group_core import GroupAction, hyperoctahedral_action, popcount

logger = logging.getLogger(__name__)

BRUTE_CENSUS_MAX_N = 4
SUBSET_ORBIT_MAX_SIZE = 24


# --- Exact Integer Linear Algebra ---

def integer_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    m = [list(row) for row in matrix]
    size = len(m)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[-1][-1]


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free elimination; every division is exact."""
    m = [list(row) for row in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(n_cols):
        pivot_row = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        pivot = m[rank][col]
        for r in range(rank + 1, n_rows):
            for c in range(col + 1, n_cols):
                m[r][c] = (m[r][c] * pivot - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = pivot
        rank += 1
        if rank == n_rows:
            break
    return rank


def vertex_bits(v: int, n: int) -> List[int]:
    return [(v >> i) & 1 for i in range(n)]


def affine_dimension(S: VertexSet) -> int:
    members = S.members()
    if not members:
        raise ComputationError("EMPTY_SET", "the affine hull of the empty set has no dimension")
    base = vertex_bits(members[0], S.n)
    diffs = [[x - y for x, y in zip(vertex_bits(v, S.n), base)] for v in members[1:]]
    return integer_rank(diffs)


# --- Exhaustive Census ---

def brute_census(n: int) -> List[ClassificationRecord]:
    """One record per B_n-orbit of vertex subsets of Q_n, empty set included."""
    if n > BRUTE_CENSUS_MAX_N:
        raise ComputationError("UNSUPPORTED", f"exhaustive census is limited to n <= {BRUTE_CENSUS_MAX_N}, got {n}")
    action = hyperoctahedral_action(n)
    size = 1 << (1 << n)
    seen = bytearray(size)
    records: List[ClassificationRecord] = []
    logger.info(f"Brute-force census of Q_{n}: {size} subsets under {len(action)} symmetries.")
    for mask in range(size):
        if seen[mask]:
            continue
        for image in np.unique(action.image_masks(mask)).tolist():
            seen[image] = 1
        canonical, _ = action.canonical(mask)
        S = VertexSet(n=n, mask=canonical)
        k = popcount(mask)
        dim = affine_dimension(S) if k else -1
        records.append(ClassificationRecord(vertex_set=S, k=k, dimension=dim, full_dimensional=(dim == n)))
    logger.info(f"Brute-force census of Q_{n}: {len(records)} orbits.")
    return records


def census_summary(records: Sequence[ClassificationRecord]) -> Dict[int, Tuple[int, int]]:
    """k -> (number of classes, number of full-dimensional classes)."""
    summary: Dict[int, Tuple[int, int]] = {}
    for rec in records:
        total, full = summary.get(rec.k, (0, 0))
        summary[rec.k] = (total + 1, full + int(rec.full_dimensional))
    return dict(sorted(summary.items()))


def dimension_witness_violations(records: Sequence[ClassificationRecord], n: int) -> List[str]:
    """Sets with more than 2^(n-s) members must have dimension at least n-s+1."""
    violations = []
    for rec in records:
        for s in range(1, n + 1):
            if rec.k > 2 ** (n - s) and rec.dimension < n - s + 1:
                violations.append(f"k={rec.k} mask={rec.vertex_set.mask:#x} dim={rec.dimension} < {n - s + 1}")
    return violations


# --- Subset Orbits Inside a Point Set ---

def brute_subset_orbits(S: VertexSet, G: Sequence[SignedPermutation], k: int, budget: int = 2_000_000) -> int:
    """Number of orbits of k-subsets of S under G, by direct enumeration."""
    members = S.members()
    if len(members) > SUBSET_ORBIT_MAX_SIZE:
        raise ComputationError("BUDGET_EXCEEDED", f"|S|={len(members)} exceeds {SUBSET_ORBIT_MAX_SIZE}")
    if comb(len(members), k) > budget:
        raise ComputationError(
            "BUDGET_EXCEEDED", f"C({len(members)},{k}) = {comb(len(members), k)} exceeds budget {budget}"
        )
    action = GroupAction(S.n, G)
    if not action.stabilizes(S.mask):
        raise ComputationError("NOT_STABILIZING", "an element of G moves S", {"mask": S.mask})
    seen = set()
    orbits = 0
    for combo in combinations(members, k):
        mask = 0
        for v in combo:
            mask |= 1 << v
        if mask in seen:
            continue
        seen.update(action.image_masks(mask).tolist())
        orbits += 1
    logger.debug(f"{orbits} orbits of {k}-subsets in a {len(members)}-point set under {len(action)} elements.")
    return orbits


# --- Vertex Bound for Intersections of Hyperplanes ---

def verify_intersection_bound(n: int, s: int, samples: int = 10000, seed: int = 20240101) -> IntersectionBoundReport:
    """Sample s hyperplanes with independent integer normals and count cube vertices on their intersection."""
    if not 1 <= s <= n:
        raise ComputationError("UNSUPPORTED", f"need 1 <= s <= n, got s={s}, n={n}")
    rng = np.random.default_rng(seed)
    num_vertices = 1 << n
    bits = (np.arange(num_vertices)[:, None] >> np.arange(n)) & 1
    report = IntersectionBoundReport(n=n, s=s, samples=samples, seed=seed, bound=2 ** (n - s))

    accepted = 0
    while accepted < samples:
        normals = rng.integers(-3, 4, size=(s, n))
        if integer_rank(normals.tolist()) < s:
            report.resampled += 1
            continue
        # anchor at a random vertex so the intersection is never empty
        anchor = bits[rng.integers(0, num_vertices)]
        rhs = normals @ anchor
        hits = int(np.all(bits @ normals.T == rhs, axis=1).sum())
        report.max_vertices_seen = max(report.max_vertices_seen, hits)
        if hits > report.bound:
            report.violations.append(f"normals={normals.tolist()} rhs={rhs.tolist()} meets {hits} vertices")
        accepted += 1

    # coordinate flats x_1 = ... = x_s = 0 attain the bound
    coordinate = np.eye(s, n, dtype=np.int64)
    report.sharpness_count = int(np.all(bits @ coordinate.T == 0, axis=1).sum())
    if report.violations:
        logger.error(f"Intersection bound violated for n={n}, s={s}: {len(report.violations)} samples.")
    return report
