import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schreier.builders import (
    complete_ball,
    cycle_graph,
    free_core,
    random_perm_model,
    stallings_core,
    tree_ball,
)
from schreier.core import (
    GenSet,
    InequalityViolation,
    InsufficientRadiusError,
    Word,
    bfs_distances,
    parse_word,
    walk_endpoint,
)
from schreier.walks import (
    DominationReport,
    coincidence_index_set,
    conditioned_prefix_probability,
    core_return_counts,
    count_walks,
    prefix_probability,
    return_domination_report,
    returning_words,
    segment_distribution,
    tree_return_domination_report,
    tree_ring_counts,
    tree_ring_size,
)

F2 = GenSet.free(2)


def brute_force_returns(g, x: int, n: int) -> int:
    """Independent oracle: walk every word in S^n."""
    return sum(
        1
        for word in itertools.product(range(g.degree), repeat=n)
        if walk_endpoint(g, x, Word(word)) == x
    )


@pytest.fixture(scope="module")
def t4_ball():
    return tree_ball(4, 4)


@pytest.fixture(scope="module")
def loop_core():
    return stallings_core(F2, [parse_word(F2, "a")])


class TestCountWalks:
    def test_c6_oracle(self):
        g = cycle_graph(6)
        table = count_walks(g, 0, 3)
        assert table.count(3, 3) == 2
        assert table.count(0, 2) == 2
        assert table.return_probability(2) == Fraction(1, 2)

    def test_t4_small_returns_against_enumeration(self, t4_ball):
        table = count_walks(t4_ball, t4_ball.root, 4, returns_only=True)
        assert table.return_count(2) == 4
        assert table.return_count(4) == 28 == brute_force_returns(t4_ball, t4_ball.root, 4)

    def test_total_mass_conserved(self):
        g = cycle_graph(7)
        table = count_walks(g, 0, 5)
        for n in range(6):
            assert sum(table.count(v, n) for v in range(g.n)) == 2**n

    def test_full_table_needs_full_radius(self, t4_ball):
        with pytest.raises(InsufficientRadiusError, match="insufficient radius"):
            count_walks(t4_ball, t4_ball.root, 5)

    def test_return_counts_need_half_radius(self, t4_ball):
        assert count_walks(t4_ball, t4_ball.root, 8, returns_only=True)
        with pytest.raises(InsufficientRadiusError, match="insufficient radius"):
            count_walks(t4_ball, t4_ball.root, 9, returns_only=True)

    def test_returns_only_table_guards_other_vertices(self, t4_ball):
        table = count_walks(t4_ball, t4_ball.root, 8, returns_only=True)
        with pytest.raises(ValueError, match="return counts only"):
            table.count(1, 2)

    @given(st.integers(0, 10**6))
    def test_mass_conservation_random_graphs(self, seed):
        g = random_perm_model(2, 8, seed)
        table = count_walks(g, 0, 4)
        assert sum(table.count(v, 4) for v in range(g.n)) == 4**4

    @given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
    def test_supermultiplicative_returns(self, seed, m, n):
        g = random_perm_model(2, 10, seed)
        table = count_walks(g, 0, 2 * (m + n))
        d = g.degree
        lhs = table.return_count(2 * (m + n)) * d ** (2 * m) * d ** (2 * n)
        rhs = table.return_count(2 * m) * table.return_count(2 * n) * d ** (2 * (m + n))
        assert lhs >= rhs  # p_{2(m+n)} >= p_{2m} p_{2n}


class TestCoreReturnCounts:
    def test_free_group_returns(self):
        counts = core_return_counts(free_core(2), 8)
        assert counts[0] == 1
        assert counts[1] == counts[3] == 0
        assert (counts[2], counts[4], counts[6], counts[8]) == (4, 28, 232, 2092)

    def test_matches_explicit_ball(self, t4_ball):
        counts = core_return_counts(free_core(2), 8)
        table = count_walks(t4_ball, t4_ball.root, 8, returns_only=True)
        assert all(counts[n] == table.return_count(n) for n in range(9))

    def test_loop_subgroup_returns(self, loop_core):
        counts = core_return_counts(loop_core, 6)
        ball = complete_ball(loop_core, 3)
        oracle = [brute_force_returns(ball, ball.root, n) for n in range(7)]
        assert list(counts) == oracle
        assert counts[1] == 2  # both orientations of the loop
        assert (counts[2], counts[4], counts[6]) == (6, 50, 460)

    def test_complete_core_equals_plain_dp(self):
        # index-2 subgroup: its core is a complete finite graph, so the
        # compressed recursion must agree with the plain table
        words = [parse_word(F2, w) for w in ("a^2", "b^2", "ab")]
        core = stallings_core(F2, words)
        assert core.complete
        counts = core_return_counts(core, 6)
        table = count_walks(core.graph, core.root, 6)
        assert all(counts[n] == table.return_count(n) for n in range(7))


class TestTreeRings:
    def test_matches_explicit_ball(self):
        g = tree_ball(4, 3)
        dist = bfs_distances(g, g.root)
        table = count_walks(g, g.root, 3)
        rings = tree_ring_counts(4, 3)
        for n in range(4):
            for j in range(4):
                total = sum(table.count(v, n) for v in range(g.n) if dist[v] == j)
                assert total == rings[n][j]

    def test_ring_sizes(self):
        assert [tree_ring_size(4, j) for j in range(4)] == [1, 4, 12, 36]

    def test_per_vertex_symmetry(self):
        # all vertices of a ring carry equal counts, so division is exact
        rings = tree_ring_counts(4, 10)
        for n in range(11):
            for j in range(1, 11):
                assert rings[n][j] % tree_ring_size(4, j) == 0


class TestReturningWords:
    def test_f2_length_two(self, t4_ball):
        ws = returning_words(t4_ball, 2)
        assert ws.count == 4
        assert set(ws.words) == {
            Word((0, 1)), Word((1, 0)), Word((2, 3)), Word((3, 2)),
        }

    def test_f2_length_four(self, t4_ball):
        assert returning_words(t4_ball, 4).count == 28

    def test_loop_subgroup_length_one(self, loop_core):
        # both the generator and its inverse lie in the subgroup
        ws = returning_words(complete_ball(loop_core, 1), 1)
        assert ws.count == 2
        assert set(ws.words) == {Word((0,)), Word((1,))}

    def test_count_only_mode(self, t4_ball):
        ws = returning_words(t4_ball, 4, max_enumeration=10)
        assert ws.words is None
        assert ws.count == 28

    def test_rotation_closure(self, t4_ball):
        ws = returning_words(t4_ball, 6)
        listed = {w.letters for w in ws.words}
        for letters in listed:
            for r in range(6):
                assert letters[r:] + letters[:r] in listed

    @given(st.integers(0, 10**6), st.integers(0, 4))
    def test_count_matches_walk_dp(self, seed, n):
        g = random_perm_model(2, 6, seed)
        ws = returning_words(g, n)
        assert ws.count == count_walks(g, g.root, n).return_count(n)


class TestSegmentDistribution:
    def test_uniform_single_letters(self, t4_ball):
        ws = returning_words(t4_ball, 2)
        dist = segment_distribution(ws, 0, 1)
        assert dist == {(l,): Fraction(1, 4) for l in range(4)}

    def test_quarter_each_at_length_four(self, t4_ball):
        ws = returning_words(t4_ball, 4)
        dist = segment_distribution(ws, 0, 1)
        assert all(p == Fraction(7, 28) for p in dist.values())

    def test_rotation_invariance(self, t4_ball):
        ws = returning_words(t4_ball, 4)
        assert segment_distribution(ws, 0, 1) == segment_distribution(ws, 2, 1)
        assert segment_distribution(ws, 0, 2) == segment_distribution(ws, 3, 2)

    def test_mass_sums_to_one(self, t4_ball):
        ws = returning_words(t4_ball, 4)
        assert sum(segment_distribution(ws, 1, 2).values()) == 1


class TestPrefixProbability:
    def test_single_letter(self, t4_ball):
        ws = returning_words(t4_ball, 4)
        assert prefix_probability(ws, parse_word(F2, "a")) == Fraction(1, 4)

    def test_double_letter_frozen_value(self):
        ws = returning_words(tree_ball(4, 3), 6)
        assert ws.count == 232
        assert prefix_probability(ws, parse_word(F2, "aa")) == Fraction(10, 232)

    def test_empty_prefix(self, t4_ball):
        ws = returning_words(t4_ball, 4)
        assert prefix_probability(ws, Word(())) == 1

    def test_prefix_mass_sums_to_one(self, t4_ball):
        ws = returning_words(t4_ball, 4)
        total = sum(prefix_probability(ws, Word((l,))) for l in range(4))
        assert total == 1

    def test_length_guard(self, t4_ball):
        ws = returning_words(t4_ball, 4)
        with pytest.raises(ValueError, match="word length"):
            prefix_probability(ws, parse_word(F2, "ab"))

    @given(st.integers(0, 10**6))
    def test_bound_on_random_graphs(self, seed):
        g = random_perm_model(2, 7, seed)
        ws = returning_words(g, 4)
        for l in range(4):
            p = prefix_probability(ws, Word((l,)))
            assert p >= Fraction(1, 16)


class TestConditionedPrefix:
    def test_t4_single_step(self):
        g = tree_ball(4, 4)
        p = conditioned_prefix_probability(
            g, g.root, parse_word(F2, "a"), 4, vertex_transitive=True
        )
        assert p == Fraction(7, 28)

    def test_c6(self):
        g = cycle_graph(6)
        p = conditioned_prefix_probability(g, 0, parse_word(g.gens, "t"), 2)
        assert p == Fraction(1, 2)

    def test_empty_prefix(self):
        g = cycle_graph(6)
        assert conditioned_prefix_probability(g, 0, Word(()), 2) == 1

    def test_t4_length_two_prefixes(self):
        g = tree_ball(4, 6)
        for letters in itertools.product(range(4), repeat=2):
            p = conditioned_prefix_probability(
                g, g.root, Word(letters), 6, vertex_transitive=True
            )
            assert p >= Fraction(1, 4**4)

    def test_truncated_needs_declaration(self):
        g = tree_ball(4, 4)
        with pytest.raises(ValueError, match="vertex-transitivity"):
            conditioned_prefix_probability(g, g.root, parse_word(F2, "a"), 4)


class TestCoincidenceIndexSet:
    def test_loop_subgroup(self, loop_core):
        g = complete_ball(loop_core, 4)
        w = parse_word(F2, "abaB")
        assert coincidence_index_set(g, w) == frozenset({0})

    def test_cayley_has_no_loops(self):
        g = cycle_graph(6)
        assert coincidence_index_set(g, parse_word(g.gens, "t^4")) == frozenset()

    def test_full_group(self):
        g = random_perm_model(2, 1, seed=0)
        w = Word((0, 2, 1, 3))
        assert coincidence_index_set(g, w) == frozenset(range(4))

    def test_boundary_refusal(self, loop_core):
        g = complete_ball(loop_core, 2)
        with pytest.raises(InsufficientRadiusError):
            coincidence_index_set(g, parse_word(F2, "b^3"))


class TestDomination:
    def test_cycle(self):
        report = return_domination_report(cycle_graph(6), 4)
        assert report.return_count == 6
        assert report.max_other_count <= 6

    def test_tree_report_matches_explicit(self):
        explicit = return_domination_report(
            tree_ball(4, 6), 6, vertex_transitive=True
        )
        ring = tree_return_domination_report(4, 6)
        assert (explicit.return_count, explicit.max_other_count) == (
            ring.return_count,
            ring.max_other_count,
        )
        assert explicit.previous_return_count == ring.previous_return_count

    def test_odd_horizon_rejected(self):
        with pytest.raises(ValueError, match="even"):
            return_domination_report(cycle_graph(6), 3)

    def test_violation_guard_fires(self):
        with pytest.raises(InequalityViolation, match="exceeds the return count"):
            DominationReport(
                degree=2, n=2, return_count=1, max_other_count=5,
                previous_return_count=1,
            )
        with pytest.raises(InequalityViolation, match="exceeds d²"):
            DominationReport(
                degree=2, n=4, return_count=100, max_other_count=0,
                previous_return_count=1,
            )

    @given(st.integers(3, 12), st.sampled_from([2, 4, 6]))
    def test_cycles_all_sizes(self, n_vertices, horizon):
        report = return_domination_report(cycle_graph(n_vertices), horizon)
        assert report.return_count >= 1
