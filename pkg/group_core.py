# group_core.py - Signed permutations, their action on cube vertices, orbits and stabilizers

import logging
from itertools import permutations
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from models import ComputationError, CycleType, SignedPermutation, VertexSet
from index_store import BaseIndexStore, default_store

logger = logging.getLogger(__name__)


# --- Element Construction ---

def identity(n: int) -> SignedPermutation:
    return SignedPermutation(pi=tuple(range(1, n + 1)))


def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> SignedPermutation:
    """Build an element from signed cycle notation.

    ``from_cycles(4, [[1], [-2, -3], [4]])`` is (1)(2̄3̄)(4): a cycle (a b c) sends
    a to b, and a negative entry marks a negated coordinate.
    """
    pi = list(range(1, n + 1))
    negated = set()
    for cycle in cycles:
        for pos, entry in enumerate(cycle):
            i, nxt = abs(entry), abs(cycle[(pos + 1) % len(cycle)])
            pi[i - 1] = nxt
            if entry < 0:
                negated.add(i)
    return SignedPermutation(pi=tuple(pi), negated=tuple(sorted(negated)))


def _check_vertex(w: SignedPermutation, v: int) -> None:
    if not 0 <= v < (1 << w.n):
        raise ComputationError("DIMENSION_MISMATCH", f"vertex {v} is not a vertex of Q_{w.n}")


def _check_same_n(a: int, b: int) -> None:
    if a != b:
        raise ComputationError("DIMENSION_MISMATCH", f"ambient dimensions differ: {a} vs {b}", {"left": a, "right": b})


# --- Group Operations ---

def apply(w: SignedPermutation, v: int) -> int:
    """y_i = x_{pi(i)}, complemented when i is negated."""
    _check_vertex(w, v)
    y = 0
    for i, p in enumerate(w.pi):
        y |= ((v >> (p - 1)) & 1) << i
    return y ^ w.sign_mask


def compose(w1: SignedPermutation, w2: SignedPermutation) -> SignedPermutation:
    """The element acting as w2 first, then w1."""
    _check_same_n(w1.n, w2.n)
    pi = tuple(w2.pi[p - 1] for p in w1.pi)
    neg2 = set(w2.negated)
    negated = tuple(i for i in range(1, w1.n + 1) if (i in w1.negated) != (w1.pi[i - 1] in neg2))
    return SignedPermutation(pi=pi, negated=negated)


def inverse(w: SignedPermutation) -> SignedPermutation:
    pi = [0] * w.n
    for i, p in enumerate(w.pi, start=1):
        pi[p - 1] = i
    return SignedPermutation(pi=tuple(pi), negated=tuple(sorted(w.pi[i - 1] for i in w.negated)))


@lru_cache(maxsize=None)
def enumerate_group(n: int) -> Tuple[SignedPermutation, ...]:
    """All 2^n n! elements of B_n, identity first."""
    elements = []
    for pi in permutations(range(1, n + 1)):
        for mask in range(1 << n):
            negated = tuple(i for i in range(1, n + 1) if mask >> (i - 1) & 1)
            # skip validation; construction is a bijection by definition
            elements.append(SignedPermutation.model_construct(pi=pi, negated=negated))
    logger.debug(f"Enumerated B_{n}: {len(elements)} elements.")
    return tuple(elements)


def act_on_set(w: SignedPermutation, S: VertexSet) -> VertexSet:
    _check_same_n(w.n, S.n)
    mask = 0
    for v in S.members():
        mask |= 1 << apply(w, v)
    return VertexSet(n=S.n, mask=mask)


def induced_cycle_type(w: SignedPermutation, S: VertexSet) -> CycleType:
    if act_on_set(w, S) != S:
        raise ComputationError("NOT_STABILIZING", f"{w} does not stabilize the vertex set", {"mask": S.mask})
    seen, lengths = set(), []
    for v in S.members():
        if v in seen:
            continue
        length, u = 0, v
        while u not in seen:
            seen.add(u)
            u = apply(w, u)
            length += 1
        lengths.append(length)
    return CycleType.from_lengths(lengths)


def underlying_cycle_type(w: SignedPermutation) -> CycleType:
    seen, lengths = set(), []
    for start in range(1, w.n + 1):
        if start in seen:
            continue
        length, i = 0, start
        while i not in seen:
            seen.add(i)
            i = w.pi[i - 1]
            length += 1
        lengths.append(length)
    return CycleType.from_lengths(lengths)


def lex_key(mask: int) -> Tuple[int, ...]:
    """Sorted member list; tuples compare lexicographically."""
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


def canonical_set(S: VertexSet, G: Sequence[SignedPermutation]) -> VertexSet:
    """Image of S under G whose sorted member list is lexicographically least.

    A set holding the origin beats every image that does not, so {0} is its own
    canonical form.
    """
    mask, _ = GroupAction(S.n, G).canonical(S.mask)
    return VertexSet(n=S.n, mask=mask)


# --- Batched Action Tables ---

def _action_table(n: int, elements: Sequence[SignedPermutation]) -> np.ndarray:
    vertices = np.arange(1 << n, dtype=np.int64)
    bits = (vertices[:, None] >> np.arange(n, dtype=np.int64)) & 1
    weights = np.left_shift(1, np.arange(n, dtype=np.int64))
    table = np.empty((len(elements), 1 << n), dtype=np.int64)
    permuted: Dict[Tuple[int, ...], np.ndarray] = {}
    for row, w in enumerate(elements):
        if w.n != n:
            raise ComputationError("DIMENSION_MISMATCH", f"element {w} does not act on Q_{n}")
        base = permuted.get(w.pi)
        if base is None:
            base = bits[:, [p - 1 for p in w.pi]] @ weights
            permuted[w.pi] = base
        table[row] = base ^ w.sign_mask
    return table


class GroupAction:
    """Vertex permutation table of an explicit element list, one row per element.

    Every sweep over the group (orbits, stabilizers, cycle types) runs as numpy
    gathers on this table. Bitsets are uint64, so n is limited to 6 here.
    """

    def __init__(self, n: int, elements: Sequence[SignedPermutation], table: Optional[np.ndarray] = None):
        if n > 6:
            raise ComputationError("UNSUPPORTED", f"batched actions need 2^n <= 64 vertices, got n={n}")
        self.n = n
        self.num_vertices = 1 << n
        self.elements = list(elements)
        self.table = _action_table(n, self.elements) if table is None else table

    def __len__(self) -> int:
        return len(self.elements)

    def subgroup(self, rows: np.ndarray) -> "GroupAction":
        rows = np.asarray(rows)
        return GroupAction(self.n, [self.elements[r] for r in rows.tolist()], table=self.table[rows])

    def _members(self, mask: int) -> np.ndarray:
        return np.array(VertexSet(n=self.n, mask=mask).members(), dtype=np.int64)

    def image_masks(self, mask: int) -> np.ndarray:
        members = self._members(mask)
        if members.size == 0:
            return np.zeros(len(self), dtype=np.uint64)
        shifted = np.left_shift(np.uint64(1), self.table[:, members].astype(np.uint64))
        return np.bitwise_or.reduce(shifted, axis=1)

    def canonical(self, mask: int) -> Tuple[int, int]:
        """(image with the least sorted member list, row of an element reaching it)."""
        members = self._members(mask)
        if members.size == 0:
            return 0, 0
        # vertex v at bit N-1-v; among equal-size images the largest key has the least member list
        flipped = (self.num_vertices - 1 - self.table[:, members]).astype(np.uint64)
        keys = np.bitwise_or.reduce(np.left_shift(np.uint64(1), flipped), axis=1)
        row = int(np.argmax(keys))
        image = 0
        for v in self.table[row, members].tolist():
            image |= 1 << v
        return image, row

    def stabilizer_rows(self, mask: int) -> np.ndarray:
        return np.flatnonzero(self.image_masks(mask) == np.uint64(mask))

    def stabilizer(self, mask: int) -> "GroupAction":
        return self.subgroup(self.stabilizer_rows(mask))

    def stabilizes(self, mask: int) -> bool:
        return bool(np.all(self.image_masks(mask) == np.uint64(mask)))

    def orbit(self, mask: int) -> Dict[int, int]:
        """Map each image of the set to the first row producing it."""
        images = self.image_masks(mask)
        unique, first = np.unique(images, return_index=True)
        return {int(img): int(row) for img, row in zip(unique.tolist(), first.tolist())}

    def cycle_types(self, mask: int) -> List[Tuple[CycleType, int]]:
        """Induced cycle types on the set, with the number of elements of each type."""
        members = self._members(mask)
        if not self.stabilizes(mask):
            raise ComputationError("NOT_STABILIZING", "some element moves the vertex set", {"mask": mask})
        if members.size == 0:
            return [(CycleType(), len(self))]
        start = self.table[:, members]
        current = start.copy()
        lengths = np.zeros(start.shape, dtype=np.int64)
        pending = np.ones(start.shape, dtype=bool)
        step = 1
        while pending.any():
            hit = pending & (current == members[None, :])
            lengths[hit] = step
            pending &= ~hit
            current = np.take_along_axis(self.table, current, axis=1)
            step += 1
        longest = int(lengths.max())
        counts = np.stack([(lengths == i).sum(axis=1) // i for i in range(1, longest + 1)], axis=1)
        rows, multiplicity = np.unique(counts, axis=0, return_counts=True)
        out = []
        for row, times in zip(rows.tolist(), multiplicity.tolist()):
            out.append((CycleType.from_mapping({i + 1: c for i, c in enumerate(row)}), times))
        return out


def hyperoctahedral_action(n: int, store: Optional[BaseIndexStore] = None) -> GroupAction:
    """Cached action table of the full group B_n."""
    store = store or default_store
    action = store.get_group_action(n)
    if action is None:
        logger.info(f"Building action table for B_{n} ({len(enumerate_group(n))} elements).")
        action = GroupAction(n, enumerate_group(n))
        store.store_group_action(n, action)
    return action


def popcount(mask: int) -> int:
    return bin(mask).count("1")
