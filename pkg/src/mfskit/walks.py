"""Walk counting, the most-frequent-sequence solver, and labeling helpers.

A walk of k vertices realizes the label sequence of its vertices; only
full-length walks count, so dead ends shorter than the query length
contribute nothing.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DEFAULT_LIMITS,
    GraphError,
    LabelingConflictError,
    Limits,
    ResourceLimitError,
)
from .graphs import LabeledDigraph


def as_sequence(g: LabeledDigraph, t: str | Sequence[str]) -> tuple[str, ...]:
    """Normalize a label sequence; a plain string is read symbol by symbol."""
    seq = tuple(t)
    if not seq:
        raise GraphError("label sequences must have length >= 1")
    alpha = set(g.alphabet)
    for sym in seq:
        if sym not in alpha:
            raise GraphError(f"symbol {sym!r} not in alphabet {sorted(alpha)}")
    return seq


def count_walks(g: LabeledDigraph, start: int, k: int) -> int:
    """Number of walks of k vertices from `start`, ignoring labels."""
    g.check_vertex(start)
    if k < 1:
        raise GraphError("walk length must be >= 1")
    counts = {start: 1}
    for _ in range(k - 1):
        nxt: dict[int, int] = {}
        for v, c in counts.items():
            for w in g.out_edges[v]:
                nxt[w] = nxt.get(w, 0) + c
        counts = nxt
    return sum(counts.values())


def occ_count(g: LabeledDigraph, start: int, t: str | Sequence[str]) -> int:
    """Number of walks from `start` whose label sequence equals `t`.

    Dynamic programming over (position, vertex); cost O(len(t) * edges).
    """
    seq = as_sequence(g, t)
    g.check_vertex(start)
    if g.labels[start] != seq[0]:
        return 0
    counts = {start: 1}
    for sym in seq[1:]:
        nxt: dict[int, int] = {}
        for v, c in counts.items():
            for w in g.out_edges[v]:
                if g.labels[w] == sym:
                    nxt[w] = nxt.get(w, 0) + c
        counts = nxt
        if not counts:
            return 0
    return sum(counts.values())


def enumerate_walk_sequences(
    g: LabeledDigraph,
    start: int,
    k: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> Counter:
    """Multiset of label sequences realized by walks of k vertices.

    The multiplicity of t equals occ_count(g, start, t); sequences realized
    by no walk are absent.  Refuses when the exact walk count exceeds the
    configured limit.
    """
    total = count_walks(g, start, k)
    if total > limits.max_walks:
        raise ResourceLimitError(
            f"{total} walks of {k} vertices exceed the limit {limits.max_walks}"
        )
    result: Counter = Counter()
    stack = [(start, (g.labels[start],))]
    while stack:
        v, prefix = stack.pop()
        if len(prefix) == k:
            result[prefix] += 1
            continue
        for w in g.out_edges[v]:
            stack.append((w, prefix + (g.labels[w],)))
    return result


def walks_from(g: LabeledDigraph, start: int, k: int) -> list[tuple[int, ...]]:
    """All walks of k vertices from `start` as vertex tuples (no limit check)."""
    walks = [(start,)]
    for _ in range(k - 1):
        walks = [w + (t,) for w in walks for t in g.out_edges[w[-1]]]
    return walks


@dataclass(frozen=True)
class MfsResult:
    sequence: tuple[str, ...]
    count: int
    tie_count: int

    @property
    def sequence_str(self) -> str:
        return "".join(self.sequence)


def _zero_result(g: LabeledDigraph, k: int) -> MfsResult:
    # no full-length walk exists: every sequence has zero occurrences
    smallest = min(g.alphabet)
    return MfsResult((smallest,) * k, 0, len(g.alphabet) ** k)


def _mfs_walk_mode(g, start, k, limits) -> MfsResult:
    counter = enumerate_walk_sequences(g, start, k, limits=limits)
    if not counter:
        return _zero_result(g, k)
    best = max(counter.values())
    ties = [seq for seq, c in counter.items() if c == best]
    return MfsResult(min(ties), best, len(ties))


def _mfs_seq_mode(g, start, k, limits) -> MfsResult:
    if len(g.alphabet) ** k > limits.max_sequences:
        raise ResourceLimitError(
            f"{len(g.alphabet)}^{k} candidate sequences exceed the limit "
            f"{limits.max_sequences}"
        )
    symbols = sorted(g.alphabet)
    best_count = 0
    best_seq: tuple[str, ...] | None = None
    tie_count = 0
    # depth-first over sequence prefixes in lexicographic order, carrying walk
    # counts per end vertex; prefixes realized by no walk are pruned wholesale,
    # so the first sequence reaching a given count is the smallest maximizer
    stack = [((sym,), {start: 1})
             for sym in reversed(symbols) if g.labels[start] == sym]
    while stack:
        prefix, counts = stack.pop()
        if len(prefix) == k:
            occ = sum(counts.values())
            if occ > best_count:
                best_count, best_seq, tie_count = occ, prefix, 1
            elif occ == best_count:
                tie_count += 1
            continue
        for sym in reversed(symbols):
            nxt: dict[int, int] = {}
            for v, c in counts.items():
                for w in g.out_edges[v]:
                    if g.labels[w] == sym:
                        nxt[w] = nxt.get(w, 0) + c
            if nxt:
                stack.append((prefix + (sym,), nxt))
    if best_seq is None:
        return _zero_result(g, k)
    return MfsResult(best_seq, best_count, tie_count)


def most_frequent_sequence(
    g: LabeledDigraph,
    start: int,
    k: int,
    *,
    mode: str = "auto",
    limits: Limits = DEFAULT_LIMITS,
) -> MfsResult:
    """Most frequent length-k label sequence over walks from `start`.

    Ties break to the lexicographically smallest maximizer and the number
    of maximizers is reported.  `mode` selects the search side: "walk"
    aggregates the walk multiset, "seq" scans candidate sequences; "auto"
    picks the walk side whenever the exact walk count is the smaller space.
    """
    g.check_vertex(start)
    if k < 1:
        raise GraphError("sequence length must be >= 1")
    if mode not in ("auto", "walk", "seq"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "auto":
        mode = "walk" if count_walks(g, start, k) <= len(g.alphabet) ** k else "seq"
    if mode == "walk":
        return _mfs_walk_mode(g, start, k, limits)
    return _mfs_seq_mode(g, start, k, limits)


# -- complementary sibling labeling -------------------------------------------


class _ParityUnion:
    """Union-find where each member carries a parity relative to its root."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.parity = [0] * n

    def find(self, v) -> tuple[int, int]:
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        p = 0
        for u in reversed(path):  # closest to the root first
            p ^= self.parity[u]
            self.parent[u] = v
            self.parity[u] = p
        return v, p

    def union(self, a, b, rel) -> bool:
        """Impose parity(a) xor parity(b) == rel; False on contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ rel
        return True


def complementary_sibling_labeling(g: LabeledDigraph, seed: int) -> LabeledDigraph:
    """Relabel so that the two children of any vertex carry opposite bits.

    Each sibling pair keeps one free bit, drawn from the seeded generator
    along with every unconstrained label (vertices in ascending order).  On
    a tree this forces every walk from a fixed vertex to realize a distinct
    sequence.  Raises LabelingConflictError when overlapping sibling pairs
    impose contradictory constraints (possible in non-tree graphs).
    """
    if not {"0", "1"} <= set(g.alphabet):
        raise GraphError("complementary labeling needs a binary alphabet")
    uf = _ParityUnion(g.vertex_count)
    for v in range(g.vertex_count):
        row = g.out_edges[v]
        if len(row) > 2:
            raise GraphError(f"vertex {v} has out-degree {len(row)} > 2")
        if len(row) == 2:
            a, b = row
            if a == b or not uf.union(a, b, 1):
                raise LabelingConflictError(
                    f"children {a} and {b} of vertex {v} cannot be complementary"
                )
    rng = random.Random(seed)
    root_bit: dict[int, int] = {}
    labels = []
    for v in range(g.vertex_count):
        r, p = uf.find(v)
        if r not in root_bit:
            root_bit[r] = rng.getrandbits(1)
        labels.append(str(root_bit[r] ^ p))
    return g.with_labels(labels)
