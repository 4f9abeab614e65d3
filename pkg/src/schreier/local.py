"""Rooted balls, ball statistics, and local-approximation inequalities.

The R-ball around a vertex contains the vertices within distance R and the
edges having an endpoint at distance at most R−1.  Edges between two
sphere vertices are deliberately not part of the ball: a ball is what
walks of length R issued from the root can certify, and with this reading
a ball is tree-like exactly when no two distinct reduced words of length
at most R collide — which is what makes the fixed-point inequalities below
exact with word lists of length at most 2R.

Schreier graphs are deterministic labeled structures, so rooted balls have
a linear-time canonical form (breadth-first renumbering, edges taken in
label order) and isomorphism is byte-equality of serializations — no
general graph-isomorphism search anywhere.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from schreier.builders import CoreGraph, complete_ball, from_perm_action
from schreier.core import (
    GenSet,
    InequalityViolation,
    InsufficientRadiusError,
    PermAction,
    SchreierGraph,
    Word,
    bfs_distances,
    canonicalize,
    is_reduced,
    orbit_of,
    serialize,
)

__all__ = [
    "RootedBall",
    "BallDistribution",
    "BallDistanceResult",
    "LocalApproxReport",
    "ball",
    "ball_distance",
    "bs_statistics",
    "tv_distance",
    "fix_density",
    "enumerate_reduced_words",
    "tree_ball_class",
    "local_approx_check",
    "is_vertex_transitive",
]


@dataclass(frozen=True)
class RootedBall:
    """A canonical rooted R-ball; equal encodings ⟺ isomorphic balls."""

    radius: int
    graph: SchreierGraph

    @cached_property
    def digest(self) -> str:
        payload = f"radius {self.radius}\n" + serialize(self.graph)
        return hashlib.sha256(payload.encode()).hexdigest()


def ball(g: SchreierGraph, v: int, radius: int) -> RootedBall:
    """Extract the canonical R-ball around v.

    On truncated inputs v must sit at distance at least R from the
    truncation boundary, which (graphs being stored as induced subgraphs)
    guarantees the extracted ball equals the true one.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if g.truncated:
        available = g.distance_to_boundary(v)
        if available < radius:
            raise InsufficientRadiusError(
                f"insufficient radius: vertex {v} is at distance {available} from "
                f"the truncation boundary, need at least {radius}"
            )
    dist = bfs_distances(g, v)
    kept = [u for u in range(g.n) if 0 <= dist[u] <= radius]
    index = {u: i for i, u in enumerate(kept)}
    table = []
    for u in kept:
        row = []
        for w in g.next[u]:
            if w is None or dist[w] > radius or (
                dist[u] == radius and dist[w] == radius
            ):
                row.append(None)
            else:
                row.append(index[w])
        table.append(tuple(row))
    boundary = frozenset(i for i, row in enumerate(table) if None in row)
    inner = canonicalize(
        SchreierGraph(
            gens=g.gens,
            next=tuple(table),
            root=index[v],
            boundary=boundary,
            truncation_radius=radius if boundary else None,
        )
    )
    return RootedBall(radius=radius, graph=inner)


@dataclass(frozen=True)
class BallDistanceResult:
    """1/k for the largest k with isomorphic k-balls; when every radius up
    to the cap matched, ``exact`` is False and ``value`` is only an upper
    bound on the true distance."""

    value: Fraction
    agreement_radius: int
    exact: bool

    def __str__(self) -> str:
        return str(self.value) if self.exact else f"<= {self.value}"


def ball_distance(
    g1: SchreierGraph, g2: SchreierGraph, max_radius: int = 32
) -> BallDistanceResult:
    if g1.gens != g2.gens:
        raise ValueError("ball distance compares graphs over one alphabet")
    agree = 0
    for r in range(1, max_radius + 1):
        try:
            b1 = ball(g1, g1.root, r)
            b2 = ball(g2, g2.root, r)
        except InsufficientRadiusError as exc:
            raise InsufficientRadiusError(
                f"cannot compare {r}-balls (agreement so far: radius {agree}): {exc}"
            ) from exc
        if b1 != b2:
            return BallDistanceResult(
                value=Fraction(1, max(agree, 1)), agreement_radius=agree, exact=True
            )
        agree = r
    return BallDistanceResult(
        value=Fraction(1, max_radius), agreement_radius=max_radius, exact=False
    )


@dataclass(frozen=True, eq=False)
class BallDistribution:
    """Exact distribution of R-ball classes under a uniform random root."""

    radius: int
    n: int
    frequencies: dict[str, Fraction]
    exemplars: dict[str, RootedBall]

    def __post_init__(self) -> None:
        if sum(self.frequencies.values()) != 1:
            raise AssertionError("ball-class frequencies must sum to 1")

    def probability(self, digest: str) -> Fraction:
        return self.frequencies.get(digest, Fraction(0))


def bs_statistics(g: SchreierGraph, radius: int) -> BallDistribution:
    """Exact R-ball class frequencies over all vertices of a finite graph."""
    if g.truncated:
        raise ValueError("ball statistics need the whole graph, not a truncation")
    counts: dict[str, int] = {}
    exemplars: dict[str, RootedBall] = {}
    for v in range(g.n):
        b = ball(g, v, radius)
        if b.digest not in counts:
            counts[b.digest] = 0
            exemplars[b.digest] = b
        counts[b.digest] += 1
    freqs = {d: Fraction(c, g.n) for d, c in counts.items()}
    return BallDistribution(radius=radius, n=g.n, frequencies=freqs, exemplars=exemplars)


def tv_distance(
    a: BallDistribution | dict[str, Fraction], b: BallDistribution | dict[str, Fraction]
) -> Fraction:
    pa = a.frequencies if isinstance(a, BallDistribution) else a
    pb = b.frequencies if isinstance(b, BallDistribution) else b
    keys = set(pa) | set(pb)
    return sum(
        (abs(pa.get(k, Fraction(0)) - pb.get(k, Fraction(0))) for k in keys),
        start=Fraction(0),
    ) / 2


# ---------------------------------------------------------------------------
# Fixed points and the local-approximation inequalities
# ---------------------------------------------------------------------------


def fix_density(act: PermAction, word: Word) -> Fraction:
    """Fraction of points fixed by the permutation the word evaluates to."""
    perm = act.word_permutation(word)
    fixed = sum(1 for x, y in enumerate(perm) if x == y)
    return Fraction(fixed, act.degree)


def enumerate_reduced_words(gens: GenSet, max_length: int) -> list[Word]:
    """All nonempty reduced words of length ≤ max_length, in length-then-lex
    order.  (A letter never follows its inverse; for an involutive letter
    that also rules out the immediate repeat.)"""
    out: list[Word] = []
    d = gens.degree

    def extend(prefix: list[int]) -> None:
        if len(prefix) >= max_length:
            return
        banned = gens.inv[prefix[-1]] if prefix else -1
        for l in range(d):
            if l == banned:
                continue
            prefix.append(l)
            out.append(Word(tuple(prefix)))
            extend(prefix)
            prefix.pop()

    extend([])
    out.sort(key=lambda w: (len(w.letters), w.letters))
    return out


def tree_ball_class(gens: GenSet, radius: int) -> RootedBall:
    """The R-ball class of the Cayley graph of the free product the
    alphabet presents (free letters contribute Z factors, involutive
    letters C₂ factors) — a regular tree with single involution edges."""
    core = CoreGraph.from_table(gens, [[None] * gens.degree], root=0)
    g = complete_ball(core, radius)
    return ball(g, g.root, radius)


@dataclass(frozen=True, eq=False)
class LocalApproxReport:
    """Both fixed-point inequalities at one scale, exactly.

    Let P be the probability that the R-ball around a uniform root is the
    free (tree) ball class.  Every tested word w satisfies
    fix_density(w) ≤ 1 − P, and when the word list is the complete set of
    nonempty reduced words of length ≤ 2R, additionally
    P ≥ 1 − Σ_w fix_density(w).  Both are theorems for words that are
    nontrivial in the free product; the report constructor re-checks them
    and raises on violation.
    """

    radius: int
    n: int
    tree_ball_probability: Fraction
    densities: tuple[tuple[Word, Fraction], ...]
    words_complete: bool

    def __post_init__(self) -> None:
        ceiling = 1 - self.tree_ball_probability
        for word, density in self.densities:
            if density > ceiling:
                raise InequalityViolation(
                    f"fix-density {density} of a length-{len(word.letters)} word "
                    f"exceeds 1 - P = {ceiling} at radius {self.radius}"
                )
        if self.words_complete:
            slack = 1 - sum((d for _, d in self.densities), start=Fraction(0))
            if self.tree_ball_probability < slack:
                raise InequalityViolation(
                    f"P = {self.tree_ball_probability} fell below "
                    f"1 - Σ fix-densities = {slack} at radius {self.radius}"
                )

    @property
    def density_sum(self) -> Fraction:
        return sum((d for _, d in self.densities), start=Fraction(0))


def _fix_counts_all_reduced(act: PermAction, max_length: int) -> list[tuple[Word, int]]:
    # depth-first over reduced words, composing permutations incrementally
    d = act.gens.degree
    perms = [np.array(p, dtype=np.int64) for p in act.perms]
    idx = np.arange(act.degree, dtype=np.int64)
    out: list[tuple[Word, int]] = []

    def extend(prefix: list[int], current: np.ndarray) -> None:
        if len(prefix) >= max_length:
            return
        banned = act.gens.inv[prefix[-1]] if prefix else -1
        for l in range(d):
            if l == banned:
                continue
            nxt = perms[l][current]
            prefix.append(l)
            out.append((Word(tuple(prefix)), int((nxt == idx).sum())))
            extend(prefix, nxt)
            prefix.pop()

    extend([], idx.copy())
    out.sort(key=lambda pair: (len(pair[0].letters), pair[0].letters))
    return out


def local_approx_check(
    actions: Sequence[PermAction],
    radius: int,
    words: Sequence[Word] | None = None,
) -> tuple[LocalApproxReport, ...]:
    """Check the fixed-point inequalities on each action, exactly.

    With ``words=None`` every nonempty reduced word of length ≤ 2R is
    used and both inequalities are asserted; an explicit word list (each
    word reduced, nonempty, of length ≤ 2R) asserts only the per-word
    bound, since the aggregate one needs the complete list.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    if words is not None:
        for w in words:
            if not w.letters:
                raise ValueError("word lists must contain nonempty words")
            if len(w.letters) > 2 * radius:
                raise ValueError(
                    f"word of length {len(w.letters)} exceeds 2R = {2 * radius}; "
                    "the fixed-point bound is only guaranteed up to that length"
                )
    reports = []
    alpha_cache: dict[GenSet, str] = {}
    for act in actions:
        if len(orbit_of(act, 0)) != act.degree:
            raise ValueError(
                "local approximation compares one coset space at a time; "
                "restrict the action to an orbit first"
            )
        if act.gens not in alpha_cache:
            alpha_cache[act.gens] = tree_ball_class(act.gens, radius).digest
        g = from_perm_action(act, base=0)
        stats = bs_statistics(g, radius)
        p_tree = stats.probability(alpha_cache[act.gens])
        if words is None:
            pairs = [
                (w, Fraction(c, act.degree))
                for w, c in _fix_counts_all_reduced(act, 2 * radius)
            ]
            complete = True
        else:
            for w in words:
                if not is_reduced(act.gens, w):
                    raise ValueError("word lists must be reduced")
            pairs = [(w, fix_density(act, w)) for w in words]
            complete = False
        reports.append(
            LocalApproxReport(
                radius=radius,
                n=act.degree,
                tree_ball_probability=p_tree,
                densities=tuple(pairs),
                words_complete=complete,
            )
        )
    return tuple(reports)


def is_vertex_transitive(g: SchreierGraph) -> bool:
    """Whether some label-preserving automorphism carries the root to every
    vertex — for deterministic labeled graphs this is canonical-table
    equality over all root choices (quadratic; meant for small graphs)."""
    if g.truncated:
        raise ValueError("vertex-transitivity is undefined for truncations")
    reference = canonicalize(g).next
    return all(
        canonicalize(replace(g, root=v)).next == reference for v in range(1, g.n)
    )
