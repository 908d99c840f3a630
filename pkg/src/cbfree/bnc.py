"""Bi-non-crossing partition combinatorics.

A word over the faces {l, r} induces a total order on positions 1..n (left
positions ascending, then right positions descending).  A partition is
bi-non-crossing when it is non-crossing after relabeling positions by that
order.  This module enumerates the lattice, computes its Moebius function,
classifies interior/exterior blocks, and provides the restriction / merge
operations the recursive evaluators consume.

All values are immutable and every operation is a pure function, so the
module is safe to use from multiple threads.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

LEFT = "l"
RIGHT = "r"

DEFAULT_MAX_N = 10


class PartitionError(ValueError):
    """Malformed partition or mismatched chi."""


class SizeLimitError(ValueError):
    """Ground set exceeds the configured enumeration limit."""


class OrderError(ValueError):
    """Arguments are not comparable in the refinement order."""


def max_ground_size() -> int:
    env = os.environ.get("CBF_MAX_N")
    return int(env) if env else DEFAULT_MAX_N


@dataclass(frozen=True)
class ChiWord:
    """Face word: one of {l, r} per position, 1-based positions."""

    faces: tuple[str, ...]

    def __post_init__(self):
        if len(self.faces) < 1:
            raise PartitionError("chi must have length >= 1")
        if any(f not in (LEFT, RIGHT) for f in self.faces):
            raise PartitionError(f"faces must be '{LEFT}' or '{RIGHT}'")

    @staticmethod
    def of(s: str | Iterable[str]) -> "ChiWord":
        return ChiWord(tuple(s))

    @staticmethod
    def lr(m: int, n: int) -> "ChiWord":
        """The word with m left positions followed by n right positions."""
        if m + n < 1:
            raise PartitionError("need m + n >= 1")
        return ChiWord((LEFT,) * m + (RIGHT,) * n)

    @property
    def n(self) -> int:
        return len(self.faces)

    def face(self, pos: int) -> str:
        return self.faces[pos - 1]

    def lefts(self) -> tuple[int, ...]:
        return tuple(p for p in range(1, self.n + 1) if self.face(p) == LEFT)

    def rights(self) -> tuple[int, ...]:
        return tuple(p for p in range(1, self.n + 1) if self.face(p) == RIGHT)

    def order(self) -> tuple[int, ...]:
        """Positions listed in the induced total order (smallest first)."""
        return self.lefts() + tuple(reversed(self.rights()))

    def rank(self) -> dict[int, int]:
        """Map position -> 0-based rank in the induced order."""
        return {p: i for i, p in enumerate(self.order())}

    def restrict(self, positions: Sequence[int]) -> "ChiWord":
        return ChiWord(tuple(self.face(p) for p in sorted(positions)))

    def __str__(self):
        return "".join(self.faces)


@dataclass(frozen=True)
class OmegaWord:
    """Family-index word; labels are arbitrary hashable tags."""

    indices: tuple

    @property
    def n(self) -> int:
        return len(self.indices)

    def index(self, pos: int):
        return self.indices[pos - 1]

    def induced_blocks(self) -> tuple[tuple[int, ...], ...]:
        groups: dict[object, list[int]] = {}
        for p, k in enumerate(self.indices, start=1):
            groups.setdefault(k, []).append(p)
        return canonical_blocks(groups.values())

    def is_constant(self) -> bool:
        return len(set(self.indices)) <= 1

    def to_json(self) -> str:
        return json.dumps([str(k) for k in self.indices])


def chi_from_omega(omega: OmegaWord, left_labels, right_labels) -> ChiWord:
    """Derive the face word from a family word over a split index set."""
    faces = []
    for k in omega.indices:
        if k in left_labels:
            faces.append(LEFT)
        elif k in right_labels:
            faces.append(RIGHT)
        else:
            raise PartitionError(f"label {k!r} in neither face index set")
    return ChiWord(tuple(faces))


def chi_total_order(chi: ChiWord) -> tuple[int, ...]:
    """Total order on positions: lefts ascending, then rights descending."""
    return chi.order()


def canonical_blocks(blocks: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    bs = [tuple(sorted(b)) for b in blocks]
    return tuple(sorted(bs, key=lambda b: b[0]))


def _validate_partition(blocks, n: int):
    seen: set[int] = set()
    for b in blocks:
        if not b:
            raise PartitionError("empty block")
        for x in b:
            if not (1 <= x <= n):
                raise PartitionError(f"position {x} outside 1..{n}")
            if x in seen:
                raise PartitionError(f"position {x} repeated")
            seen.add(x)
    if len(seen) != n:
        raise PartitionError("blocks do not cover the ground set")


def _ranks_noncrossing(rank_blocks: Sequence[frozenset[int]]) -> bool:
    # blocks cross iff a < b < c < d with a,c in one block and b,d in another
    bs = [sorted(b) for b in rank_blocks]
    for i in range(len(bs)):
        for j in range(len(bs)):
            if i == j:
                continue
            a = bs[i]
            for k in range(len(a) - 1):
                lo, hi = a[k], a[k + 1]
                inside = any(lo < x < hi for x in bs[j])
                outside = any(x < lo or x > hi for x in bs[j])
                if inside and outside:
                    return False
    return True


def is_bnc(blocks: Iterable[Iterable[int]], chi: ChiWord) -> bool:
    """True iff the partition is non-crossing after reordering by the chi order."""
    blocks = canonical_blocks(blocks)
    _validate_partition(blocks, chi.n)
    rank = chi.rank()
    return _ranks_noncrossing([frozenset(rank[p] for p in b) for b in blocks])


@dataclass(frozen=True)
class BncPartition:
    """A bi-non-crossing partition of {1..n} with respect to its chi word."""

    chi: ChiWord
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        _validate_partition(self.blocks, self.chi.n)
        if self.blocks != canonical_blocks(self.blocks):
            raise PartitionError("blocks not in canonical form; use BncPartition.make")
        if not is_bnc(self.blocks, self.chi):
            raise PartitionError("partition crosses in the chi order")

    @staticmethod
    def make(chi: ChiWord, blocks: Iterable[Iterable[int]]) -> "BncPartition":
        return BncPartition(chi, canonical_blocks(blocks))

    @staticmethod
    def discrete(chi: ChiWord) -> "BncPartition":
        return BncPartition(chi, tuple((p,) for p in range(1, chi.n + 1)))

    @staticmethod
    def full(chi: ChiWord) -> "BncPartition":
        return BncPartition(chi, (tuple(range(1, chi.n + 1)),))

    @property
    def n(self) -> int:
        return self.chi.n

    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self, pos: int) -> tuple[int, ...]:
        for b in self.blocks:
            if pos in b:
                return b
        raise PartitionError(f"position {pos} not covered")

    def same_block(self, p: int, q: int) -> bool:
        return self.block_of(p) == self.block_of(q)

    # -- order structure -----------------------------------------------------

    def leq(self, other: "BncPartition") -> bool:
        """Refinement order: every block of self lies inside a block of other."""
        if self.chi != other.chi:
            raise PartitionError("mismatched chi")
        lookup = {}
        for i, b in enumerate(other.blocks):
            for x in b:
                lookup[x] = i
        return all(len({lookup[x] for x in b}) == 1 for b in self.blocks)

    def leq_omega(self, omega: OmegaWord) -> bool:
        """Refinement of the partition induced by the family word."""
        if omega.n != self.n:
            raise PartitionError("omega length mismatch")
        return all(len({omega.index(x) for x in b}) == 1 for b in self.blocks)

    def join(self, other: "BncPartition") -> "BncPartition":
        """Least upper bound inside the bi-non-crossing lattice.

        Partition-lattice join followed by closure under merging crossing
        block pairs in the chi order.
        """
        if self.chi != other.chi:
            raise PartitionError("mismatched chi")
        parent = list(range(self.n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for part in (self, other):
            for b in part.blocks:
                for x in b[1:]:
                    union(b[0], x)
        rank = self.chi.rank()
        changed = True
        while changed:
            changed = False
            groups: dict[int, list[int]] = {}
            for p in range(1, self.n + 1):
                groups.setdefault(find(p), []).append(p)
            bs = list(groups.values())
            for i in range(len(bs)):
                for j in range(i + 1, len(bs)):
                    ri = sorted(rank[p] for p in bs[i])
                    rj = sorted(rank[p] for p in bs[j])
                    crossing = False
                    for k in range(len(ri) - 1):
                        lo, hi = ri[k], ri[k + 1]
                        if any(lo < x < hi for x in rj) and any(x < lo or x > hi for x in rj):
                            crossing = True
                            break
                    if not crossing:
                        for k in range(len(rj) - 1):
                            lo, hi = rj[k], rj[k + 1]
                            if any(lo < x < hi for x in ri) and any(x < lo or x > hi for x in ri):
                                crossing = True
                                break
                    if crossing:
                        union(bs[i][0], bs[j][0])
                        changed = True
        groups = {}
        for p in range(1, self.n + 1):
            groups.setdefault(find(p), []).append(p)
        return BncPartition.make(self.chi, groups.values())

    # -- block geometry --------------------------------------------------------

    def min_prec(self, positions: Iterable[int]) -> int:
        rank = self.chi.rank()
        return min(positions, key=lambda p: rank[p])

    def max_prec(self, positions: Iterable[int]) -> int:
        rank = self.chi.rank()
        return max(positions, key=lambda p: rank[p])

    def classify_blocks(self) -> dict[tuple[int, ...], str]:
        """Label each block interior or exterior.

        A block is interior when another block strictly dominates it on both
        ends of the chi order; exterior otherwise.
        """
        rank = self.chi.rank()
        spans = [(min(rank[p] for p in b), max(rank[p] for p in b), b) for b in self.blocks]
        out = {}
        for lo, hi, b in spans:
            interior = any(lo2 < lo and hi < hi2 for lo2, hi2, b2 in spans if b2 != b)
            out[b] = "interior" if interior else "exterior"
        return out

    def chi_intervals(self) -> tuple[tuple[int, ...], ...]:
        """Decompose the ground set into chi-intervals, each a union of blocks
        whose chi-min and chi-max lie in the same block; ordered along chi."""
        order = self.chi.order()
        rank = self.chi.rank()
        out = []
        i = 0
        while i < self.n:
            start = order[i]
            block = self.block_of(start)
            end_rank = max(rank[p] for p in block)
            piece = tuple(order[i:end_rank + 1])
            # non-crossing guarantees every block touching the span is inside it
            out.append(tuple(sorted(piece)))
            i = end_rank + 1
        return tuple(out)

    # -- restriction / merge ---------------------------------------------------

    def restrict(self, positions: Sequence[int]) -> "BncPartition":
        """Induced partition on a subset, relabeled order-preservingly to 1..m."""
        positions = sorted(set(positions))
        if not positions:
            raise PartitionError("empty restriction")
        relabel = {p: i + 1 for i, p in enumerate(positions)}
        blocks = []
        for b in self.blocks:
            kept = [relabel[x] for x in b if x in relabel]
            if kept:
                blocks.append(kept)
        return BncPartition.make(self.chi.restrict(positions), blocks)

    def merge_adjacent(self, q: int) -> "BncPartition":
        """Identify positions q and q+1 (same face required), then delete q."""
        if not (1 <= q < self.n):
            raise PartitionError(f"q = {q} out of range")
        if self.chi.face(q) != self.chi.face(q + 1):
            raise FaceMismatchError(f"faces differ at {q}, {q + 1}")
        merged = []
        bq = self.block_of(q)
        bq1 = self.block_of(q + 1)
        for b in self.blocks:
            if b == bq or b == bq1:
                continue
            merged.append(list(b))
        merged.append(sorted(set(bq) | set(bq1)))
        relabel = {p: (p if p < q else p - 1) for p in range(1, self.n + 1) if p != q}
        blocks = [[relabel[x] for x in b if x != q] for b in merged]
        chi = ChiWord(tuple(f for i, f in enumerate(self.chi.faces, start=1) if i != q))
        return BncPartition.make(chi, [b for b in blocks if b])

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps([list(b) for b in self.blocks])

    @staticmethod
    def from_json(chi: ChiWord, text: str) -> "BncPartition":
        return BncPartition.make(chi, json.loads(text))

    def key(self) -> tuple:
        return self.blocks


class FaceMismatchError(PartitionError):
    pass


# -- enumeration ----------------------------------------------------------------


def _noncrossing_partitions(items: tuple[int, ...]):
    """All non-crossing partitions of an ordered tuple (Catalan recursion)."""
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    m = len(rest)
    # choose the block of the first element: indices into rest, increasing
    def choose(start: int):
        yield ()
        for i in range(start, m):
            for tail in choose(i + 1):
                yield (i,) + tail

    for picks in choose(0):
        block = (first,) + tuple(rest[i] for i in picks)
        # segments between chosen elements must be partitioned independently
        segs = []
        prev = -1
        for i in picks:
            segs.append(rest[prev + 1:i])
            prev = i
        segs.append(rest[prev + 1:])
        def productize(k: int):
            if k == len(segs):
                yield ()
                return
            for head in _noncrossing_partitions(segs[k]):
                for tail in productize(k + 1):
                    yield head + tail
        for others in productize(0):
            yield (block,) + others


def enumerate_bnc(chi: ChiWord, limit: int | None = None) -> tuple[BncPartition, ...]:
    """Every bi-non-crossing partition for chi, in canonical order.

    Generates standard non-crossing partitions on the chi-reordered ground
    set and relabels, so the cost is Catalan(n), never Bell(n).
    """
    cap = limit if limit is not None else max_ground_size()
    if chi.n > cap:
        raise SizeLimitError(f"n = {chi.n} exceeds limit {cap}")
    return _enumerate_cached(chi)


@lru_cache(maxsize=512)
def _enumerate_cached(chi: ChiWord) -> tuple[BncPartition, ...]:
    order = chi.order()
    parts = [BncPartition.make(chi, blocks) for blocks in _noncrossing_partitions(order)]
    parts.sort(key=lambda p: p.blocks)
    return tuple(parts)


# -- lattice with Moebius function ------------------------------------------------


class BncLattice:
    """Enumerated lattice for one chi word with memoized Moebius values."""

    def __init__(self, chi: ChiWord):
        self.chi = chi
        self.elements = enumerate_bnc(chi)
        self.index = {p.key(): i for i, p in enumerate(self.elements)}
        n = len(self.elements)
        self._leq = [[self.elements[i].leq(self.elements[j]) for j in range(n)] for i in range(n)]
        self._mob: dict[tuple[int, int], int] = {}

    def leq_idx(self, i: int, j: int) -> bool:
        return self._leq[i][j]

    def idx(self, p: BncPartition) -> int:
        return self.index[p.key()]

    def mobius_idx(self, i: int, j: int) -> int:
        """mu(sigma_i, pi_j), by downward recursion over the interval."""
        if not self._leq[i][j]:
            raise OrderError("arguments not comparable")
        key = (i, j)
        if key in self._mob:
            return self._mob[key]
        if i == j:
            val = 1
        else:
            val = -sum(
                self.mobius_idx(i, t)
                for t in range(len(self.elements))
                if self._leq[i][t] and self._leq[t][j] and t != j
            )
        self._mob[key] = val
        return val

    def below(self, j: int) -> list[int]:
        return [i for i in range(len(self.elements)) if self._leq[i][j]]


@lru_cache(maxsize=256)
def lattice(chi: ChiWord) -> BncLattice:
    return BncLattice(chi)


def mobius_bnc(sigma: BncPartition, pi: BncPartition) -> int:
    """Moebius function of the bi-non-crossing lattice on [sigma, pi]."""
    if sigma.chi != pi.chi:
        raise PartitionError("mismatched chi")
    if not sigma.leq(pi):
        raise OrderError("sigma is not below pi")
    lat = lattice(sigma.chi)
    return lat.mobius_idx(lat.idx(sigma), lat.idx(pi))


def catalan(n: int) -> int:
    c = 1
    for i in range(n):
        c = c * 2 * (2 * i + 1) // (i + 2)
    return c
