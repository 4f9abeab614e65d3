"""Exact random-walk statistics on labeled graphs.

Everything here is integer dynamic programming: |P_{x,y,n}| is the number
of label sequences of length n leading from x to y, probabilities are the
counts divided by d^n, and all comparisons the lemma checks make are exact
(arbitrary-precision integers and rationals, no floats).

On truncated graphs the counts are still exact provided the walks cannot
feel the missing part: a returning walk of length n stays within distance
⌊n/2⌋ of its origin, so return counts need the boundary at distance
⌈n/2⌉ and full tables need it at distance n.  The preconditions are
enforced, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from schreier.builders import CoreGraph
from schreier.core import (
    InequalityViolation,
    InsufficientRadiusError,
    SchreierGraph,
    Word,
    bfs_distances,
    walk_endpoint,
)

__all__ = [
    "WalkTable",
    "ReturningWordSet",
    "count_walks",
    "core_return_counts",
    "tree_ring_counts",
    "returning_words",
    "segment_distribution",
    "prefix_probability",
    "conditioned_prefix_probability",
    "coincidence_index_set",
    "return_domination_report",
    "tree_return_domination_report",
    "DominationReport",
]


def _require_distance(g: SchreierGraph, x: int, needed: int, what: str) -> None:
    if not g.truncated:
        return
    available = g.distance_to_boundary(x)
    if available < needed:
        raise InsufficientRadiusError(
            f"insufficient radius for {what}: distance from vertex {x} to the "
            f"truncation boundary is {available}, need at least {needed}"
        )


@dataclass(frozen=True)
class WalkTable:
    """|P_{x,v,n}| for all stored vertices v and n up to the horizon.

    ``returns_only`` marks tables computed under the weaker truncation
    precondition: then only the entries at v = x are certified exact.
    """

    graph: SchreierGraph
    origin: int
    horizon: int
    rows: tuple[tuple[int, ...], ...]
    returns_only: bool = False

    def count(self, v: int, n: int) -> int:
        if self.returns_only and v != self.origin:
            raise ValueError("table was computed for return counts only")
        return self.rows[n][v]

    def return_count(self, n: int) -> int:
        return self.rows[n][self.origin]

    def probability(self, v: int, n: int) -> Fraction:
        return Fraction(self.count(v, n), self.graph.degree ** n)

    def return_probability(self, n: int) -> Fraction:
        return Fraction(self.return_count(n), self.graph.degree ** n)


def count_walks(
    g: SchreierGraph, x: int, horizon: int, returns_only: bool = False
) -> WalkTable:
    """Exact walk counts from x out to the horizon.

    Walks stepping through a missing slot are dropped; the truncation
    precondition guarantees no dropped walk could have contributed to a
    certified entry.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    needed = (horizon + 1) // 2 if returns_only else horizon
    _require_distance(g, x, needed, "walk counts")
    row = [0] * g.n
    row[x] = 1
    rows = [tuple(row)]
    for _ in range(horizon):
        nxt = [0] * g.n
        for v, c in enumerate(row):
            if c:
                for w in g.next[v]:
                    if w is not None:
                        nxt[w] += c
        row = nxt
        rows.append(tuple(row))
    return WalkTable(
        graph=g, origin=x, horizon=horizon, rows=tuple(rows),
        returns_only=bool(g.truncated and returns_only),
    )


def core_return_counts(core: CoreGraph, horizon: int) -> tuple[int, ...]:
    """|P_{root,root,n}| for n up to any horizon, straight from a core.

    Walks that leave the core climb one of the trees hanging off its
    undefined slots, and inside a tree only the current depth matters:
    one step back toward the core, d−1 steps deeper.  Aggregating walkers
    per (undefined slot, depth) class therefore counts exactly, at any
    horizon, without materializing a ball — the state space is the core
    plus (number of undefined slots) × horizon depth classes.
    """
    g = core.graph
    d = g.degree
    core_counts = [0] * g.n
    core_counts[g.root] = 1
    slots = [(v, l) for v in range(g.n) for l in core.missing(v)]
    depth_counts = {s: [0] * (horizon + 2) for s in slots}
    out = [1]
    for _ in range(horizon):
        nxt = [0] * g.n
        for v, c in enumerate(core_counts):
            if c:
                for w in g.next[v]:
                    if w is not None:
                        nxt[w] += c
        new_depths = {}
        for (v, l), depths in depth_counts.items():
            nd = [0] * (horizon + 2)
            nd[1] = core_counts[v] + depths[2]
            for j in range(2, horizon + 1):
                nd[j] = (d - 1) * depths[j - 1] + depths[j + 1]
            nxt[v] += depths[1]
            new_depths[(v, l)] = nd
        core_counts = nxt
        depth_counts = new_depths
        out.append(core_counts[g.root])
    return tuple(out)


def tree_ring_counts(degree: int, horizon: int) -> list[tuple[int, ...]]:
    """Walk counts on the regular tree, aggregated per distance ring.

    Entry [n][j] is the total number of length-n walks from the root
    ending anywhere at distance j.  Ring j has d(d−1)^{j−1} vertices and
    all of them are equivalent under the root's stabilizer, so per-vertex
    counts are the ring totals divided (exactly) by the ring size.
    """
    if degree < 2:
        raise ValueError("tree degree must be at least 2")
    rings = [0] * (horizon + 2)
    rings[0] = 1
    table = [tuple(rings[: horizon + 1])]
    for _ in range(horizon):
        nxt = [0] * (horizon + 2)
        nxt[0] = rings[1]
        nxt[1] = degree * rings[0] + rings[2]
        for j in range(2, horizon + 1):
            nxt[j] = (degree - 1) * rings[j - 1] + rings[j + 1]
        rings = nxt
        table.append(tuple(rings[: horizon + 1]))
    return table


def tree_ring_size(degree: int, j: int) -> int:
    return 1 if j == 0 else degree * (degree - 1) ** (j - 1)


# ---------------------------------------------------------------------------
# Returning words A_H(S,n)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReturningWordSet:
    """The words of length n over the alphabet whose walk from the root
    returns to the root — equivalently, the length-n words representing
    elements of the subgroup the rooted graph encodes.

    Above the enumeration guard only the exact count is kept.
    """

    graph: SchreierGraph
    n: int
    count: int
    words: tuple[Word, ...] | None

    @property
    def explicit(self) -> bool:
        return self.words is not None


def returning_words(
    g: SchreierGraph, n: int, max_enumeration: int = 10**7
) -> ReturningWordSet:
    if n < 0:
        raise ValueError("word length must be nonnegative")
    _require_distance(g, g.root, (n + 1) // 2, "returning words")
    if g.degree ** n > max_enumeration:
        table = count_walks(g, g.root, n, returns_only=True)
        return ReturningWordSet(graph=g, n=n, count=table.return_count(n), words=None)
    dist = bfs_distances(g, g.root)
    words: list[Word] = []
    prefix: list[int] = []

    def extend(v: int, remaining: int) -> None:
        if remaining == 0:
            if v == g.root:
                words.append(Word(tuple(prefix)))
            return
        for l, w in enumerate(g.next[v]):
            if w is not None and dist[w] <= remaining - 1:
                prefix.append(l)
                extend(w, remaining - 1)
                prefix.pop()

    extend(g.root, n)
    return ReturningWordSet(graph=g, n=n, count=len(words), words=tuple(words))


def segment_distribution(
    words: ReturningWordSet, t: int, k: int
) -> dict[tuple[int, ...], Fraction]:
    """Distribution of the cyclic segment (a_t, …, a_{t+k−1}) under a
    uniform word of the set; indices wrap mod n."""
    if not words.explicit:
        raise ValueError("segment distribution needs the explicit word list")
    if not 0 <= k <= words.n:
        raise ValueError("segment length out of range")
    if words.count == 0:
        raise ValueError("empty word set has no distribution")
    freq: dict[tuple[int, ...], int] = {}
    for w in words.words:  # type: ignore[union-attr]
        seg = tuple(w.letters[(t + i) % words.n] for i in range(k))
        freq[seg] = freq.get(seg, 0) + 1
    return {seg: Fraction(c, words.count) for seg, c in freq.items()}


def prefix_probability(words: ReturningWordSet, prefix: Word) -> Fraction:
    """P(word starts with ``prefix``) under a uniform returning word, with
    the guaranteed lower bound |S|^{−2k} asserted before returning.

    The bound needs room to complete prefix·prefix⁻¹ with a shorter
    returning word, hence the n > 2k requirement.
    """
    k = len(prefix)
    if k == 0:
        return Fraction(1)
    if words.n <= 2 * k:
        raise ValueError(f"need word length > {2 * k} for a length-{k} prefix bound")
    if not words.explicit:
        raise ValueError("prefix probability needs the explicit word list")
    if words.count == 0:
        raise ValueError("empty word set has no distribution")
    hits = sum(
        1 for w in words.words if w.letters[:k] == prefix.letters  # type: ignore[union-attr]
    )
    p = Fraction(hits, words.count)
    d = words.graph.degree
    if p < Fraction(1, d ** (2 * k)):
        raise InequalityViolation(
            f"prefix probability {p} fell below the guaranteed {1}/{d ** (2 * k)}"
        )
    return p


def conditioned_prefix_probability(
    g: SchreierGraph,
    x: int,
    prefix: Word,
    n: int,
    vertex_transitive: bool | None = None,
) -> Fraction:
    """P(first ℓ steps spell ``prefix`` | the length-n walk from x returns).

    Valid for vertex-transitive graphs (the guaranteed bound d^{−2ℓ} is a
    transitivity statement); pass ``vertex_transitive=True`` for truncated
    inputs whose full graph is transitive, e.g. tree balls.
    """
    l = len(prefix)
    if n < 2 * l:
        raise ValueError("need n >= twice the prefix length")
    if vertex_transitive is None:
        if g.truncated:
            raise ValueError(
                "cannot verify vertex-transitivity of a truncated graph; "
                "pass vertex_transitive=True if the full graph is transitive"
            )
        from schreier.local import is_vertex_transitive

        vertex_transitive = is_vertex_transitive(g)
    if not vertex_transitive:
        raise ValueError("conditioned prefix bound requires a vertex-transitive graph")
    y = walk_endpoint(g, x, prefix)
    if not isinstance(y, int):
        raise InsufficientRadiusError(
            "insufficient radius: the prefix walk leaves the stored graph"
        )
    total = count_walks(g, x, n, returns_only=True).return_count(n)
    if total == 0:
        raise ValueError(f"no returning walks of length {n} from vertex {x}")
    completions = count_walks(g, y, n - l).count(x, n - l)
    p = Fraction(completions, total)
    d = g.degree
    if p < Fraction(1, d ** (2 * l)):
        raise InequalityViolation(
            f"conditioned prefix probability {p} fell below 1/{d ** (2 * l)}"
        )
    return p


def coincidence_index_set(g: SchreierGraph, word: Word) -> frozenset[int]:
    """Times t at which step t of the walk from the root traverses a loop
    (the step's letter lies in the stabilizer conjugated by the walk so far)."""
    v = g.root
    hits = []
    for t, letter in enumerate(word.letters):
        w = g.next[v][letter]
        if w is None:
            raise InsufficientRadiusError(
                "insufficient radius: the walk leaves the stored graph"
            )
        if w == v:
            hits.append(t)
        v = w
    return frozenset(hits)


# ---------------------------------------------------------------------------
# Return-count domination (the even-time comparison inequalities)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DominationReport:
    """Exact integer certificate that, at even horizon n, the return count
    dominates every |P_{x,y,n}| and is itself at most d²·|P_{x,x,n−2}|."""

    degree: int
    n: int
    return_count: int
    max_other_count: int
    previous_return_count: int

    def __post_init__(self) -> None:
        if self.max_other_count > self.return_count:
            raise InequalityViolation(
                f"|P_xy,{self.n}| = {self.max_other_count} exceeds the return count "
                f"{self.return_count}"
            )
        if self.return_count > self.degree**2 * self.previous_return_count:
            raise InequalityViolation(
                f"return count {self.return_count} exceeds d²·|P_xx,{self.n - 2}| = "
                f"{self.degree**2 * self.previous_return_count}"
            )


def return_domination_report(
    g: SchreierGraph, n: int, x: int | None = None,
    vertex_transitive: bool | None = None,
) -> DominationReport:
    if n < 2 or n % 2:
        raise ValueError("the domination inequalities concern even n >= 2")
    if x is None:
        x = g.root
    if vertex_transitive is None:
        if g.truncated:
            raise ValueError(
                "cannot verify vertex-transitivity of a truncated graph; "
                "pass vertex_transitive=True if the full graph is transitive"
            )
        from schreier.local import is_vertex_transitive

        vertex_transitive = is_vertex_transitive(g)
    if not vertex_transitive:
        raise ValueError("the domination inequalities require vertex-transitivity")
    table = count_walks(g, x, n)
    return DominationReport(
        degree=g.degree,
        n=n,
        return_count=table.count(x, n),
        max_other_count=max(
            (table.count(v, n) for v in range(g.n) if v != x), default=0
        ),
        previous_return_count=table.count(x, n - 2),
    )


def tree_return_domination_report(degree: int, n: int) -> DominationReport:
    """Domination certificate on the regular tree via exact ring counts
    (per-vertex counts are ring totals over ring sizes, checked to divide)."""
    if n < 2 or n % 2:
        raise ValueError("the domination inequalities concern even n >= 2")
    table = tree_ring_counts(degree, n)
    per_vertex = []
    for j in range(1, n + 1):
        total = table[n][j]
        size = tree_ring_size(degree, j)
        if total % size:
            raise AssertionError("ring total not divisible by ring size")
        per_vertex.append(total // size)
    return DominationReport(
        degree=degree,
        n=n,
        return_count=table[n][0],
        max_other_count=max(per_vertex, default=0),
        previous_return_count=table[n - 2][0],
    )
