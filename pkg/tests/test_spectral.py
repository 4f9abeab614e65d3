"""Markov spectra, ρ₀, return-based ρ estimation, and operator-norm bounds."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schreier.builders import (
    cycle_graph,
    free_core,
    from_perm_action,
    k4_graph,
    klein_cayley,
    lps_graph,
    petersen_graph,
    random_perm_model,
    s3_regular,
    stallings_core,
    tree_ball,
    z6_regular,
)
from schreier.core import (
    GenSet,
    GraphInvariantError,
    InequalityViolation,
    InsufficientRadiusError,
    PermAction,
    parse_word,
)
from schreier.spectral import (
    ProductReturnBound,
    SpectralReport,
    averaged_operator,
    bipartition,
    distribution_operator_norm,
    estimate_rho_returns,
    markov_spectrum,
    product_return_bound,
    ramanujan_check,
    rho0,
    support_subgroup_graph,
    tree_rho,
)

F2 = GenSet.free(2)


def cycle_rho0_exact(n: int) -> float:
    return max(abs(math.cos(2 * math.pi * k / n)) for k in range(1, n))


class TestMarkovSpectrum:
    def test_five_cycle_closed_form(self):
        evs = markov_spectrum(cycle_graph(5))
        expected = sorted(math.cos(2 * math.pi * k / 5) for k in range(5))
        assert np.allclose(evs, expected, atol=1e-12)

    def test_k4_three_matchings(self):
        evs = markov_spectrum(k4_graph())
        assert np.allclose(evs, [-1 / 3, -1 / 3, -1 / 3, 1.0], atol=1e-12)

    def test_rotation_subgroup_inside_s3(self):
        g = support_subgroup_graph(s3_regular(), ["c", "C"])
        assert g.n == 3
        assert np.allclose(markov_spectrum(g), [-0.5, -0.5, 1.0], atol=1e-12)

    def test_size_refusal(self):
        with pytest.raises(ValueError, match="dense threshold"):
            markov_spectrum(cycle_graph(4097))

    def test_truncation_refusal(self):
        with pytest.raises(ValueError, match="whole graph"):
            markov_spectrum(tree_ball(4, 2))


class TestBipartition:
    def test_even_cycle(self):
        colors = bipartition(cycle_graph(6))
        assert colors is not None
        assert all(colors[i] != colors[(i + 1) % 6] for i in range(6))

    def test_odd_cycle(self):
        assert bipartition(cycle_graph(5)) is None

    def test_loop_kills_it(self):
        loop = stallings_core(F2, [parse_word(F2, "a")])
        assert bipartition(loop.graph) is None

    def test_free_core_tree(self):
        assert bipartition(free_core(2).graph) is not None


class TestRho0:
    def test_five_cycle(self):
        rep = rho0(cycle_graph(5))
        assert abs(rep.rho0 - abs(math.cos(4 * math.pi / 5))) < 1e-12
        assert rep.method == "dense"
        assert not rep.bipartite

    def test_petersen(self):
        rep = rho0(petersen_graph())
        assert abs(rep.rho0 - 2 / 3) < 1e-9
        assert abs(rep.rho0_nonneg - 1 / 3) < 1e-9

    def test_four_cycle_bipartite(self):
        rep = rho0(cycle_graph(4))
        assert rep.bipartite
        assert abs(rep.rho0 - 1.0) < 1e-12
        assert abs(rep.rho0_nonneg) < 1e-12
        assert abs(rep.rho0_strict) < 1e-12

    def test_single_vertex(self):
        core = stallings_core(F2, [parse_word(F2, w) for w in ("a", "b")])
        assert core.complete
        rep = rho0(core.graph)
        assert rep.rho0 == 0.0

    def test_truncation_refusal(self):
        with pytest.raises(ValueError, match="estimate_rho_returns"):
            rho0(tree_ball(4, 3))

    @pytest.mark.parametrize("n", list(range(3, 31)))
    def test_iterative_matches_closed_form_small(self, n):
        # small cycles exhaust the Krylov space almost immediately, which
        # is exactly where a restart bookkeeping bug would bite
        rep = rho0(cycle_graph(n), method="iterative")
        assert abs(rep.rho0 - cycle_rho0_exact(n)) < 1e-9
        assert rep.error_bound <= 1e-8
        assert rep.converged

    @pytest.mark.parametrize("n", [997, 1000])
    def test_iterative_matches_closed_form_large(self, n):
        rep = rho0(cycle_graph(n), method="iterative")
        assert abs(rep.rho0 - cycle_rho0_exact(n)) < 1e-9

    @given(seed=st.integers(min_value=0, max_value=25))
    @settings(max_examples=8, deadline=None)
    def test_dense_iterative_agreement(self, seed):
        g = random_perm_model(2, 150, seed=seed)
        dense = rho0(g, method="dense")
        it = rho0(g, method="iterative")
        assert abs(dense.rho0 - it.rho0) < 1e-6
        assert dense.bipartite == it.bipartite

    def test_dense_iterative_agreement_expander(self):
        g = lps_graph(5, 13)
        dense = rho0(g, method="dense")
        it = rho0(g, method="iterative")
        assert abs(dense.rho0 - it.rho0) < 1e-6
        assert it.converged

    def test_report_validation(self):
        with pytest.raises(GraphInvariantError, match="escaped"):
            SpectralReport(
                d=4, n=5, rho0=1.5, rho0_nonneg=0.5, bipartite=False,
                method="dense", error_bound=0.0,
            )
        with pytest.raises(ValueError, match="unknown method"):
            SpectralReport(
                d=4, n=5, rho0=0.5, rho0_nonneg=0.5, bipartite=False,
                method="magic", error_bound=0.0,
            )


class TestEstimateRhoReturns:
    def test_tree_first_terms(self):
        rep = estimate_rho_returns(free_core(2), 4)
        assert rep.return_sequence[0] == 0.5
        assert abs(rep.return_sequence[1] - (7 / 64) ** 0.25) < 1e-15

    def test_tree_deep_horizon(self):
        rep = estimate_rho_returns(free_core(2), 400)
        assert abs(rep.rho0 - 0.850048000323) < 1e-9
        assert 0.84 <= rep.rho0 <= 0.86603
        seq = rep.return_sequence
        assert all(a <= b + 1e-15 for a, b in zip(seq, seq[1:]))
        assert rep.extrapolated > rep.rho0
        assert rep.bipartite

    def test_loop_graph_vs_tree(self):
        loop = stallings_core(F2, [parse_word(F2, "a")])
        lo = estimate_rho_returns(loop, 200)
        tr = estimate_rho_returns(free_core(2), 200)
        assert abs(lo.rho0 - 0.843676513481) < 1e-9
        assert abs(tr.rho0 - 0.838605482430) < 1e-9
        assert abs((lo.rho0 - tr.rho0) - 0.005071) < 1e-5
        assert not lo.bipartite

    def test_truncated_graph_route_matches_core(self):
        core = stallings_core(F2, [parse_word(F2, "a")])
        from schreier.builders import complete_ball

        g = complete_ball(core, 10)
        via_graph = estimate_rho_returns(g, 20)
        via_core = estimate_rho_returns(core, 20)
        assert via_graph.return_sequence == via_core.return_sequence
        with pytest.raises(InsufficientRadiusError):
            estimate_rho_returns(g, 22)

    def test_covering_inequality(self):
        # a Schreier graph returns at least as often as its Cayley cover
        tree_counts = None
        from schreier.walks import core_return_counts

        tree_counts = core_return_counts(free_core(2), 24)
        for words in (["a"], ["a^2", "b"], ["aba^-1"], ["a", "b^3"]):
            core = stallings_core(F2, [parse_word(F2, w) for w in words])
            counts = core_return_counts(core, 24)
            assert all(c >= t for c, t in zip(counts, tree_counts))

    def test_horizon_validation(self):
        with pytest.raises(ValueError, match="even"):
            estimate_rho_returns(free_core(2), 7)
        with pytest.raises(ValueError, match="even"):
            estimate_rho_returns(free_core(2), 0)


class TestTreeRho:
    def test_reference_values(self):
        assert tree_rho(4) == 0.866025403784
        assert tree_rho(3) == 0.942809041582
        assert tree_rho(2) == 1.0
        assert tree_rho(18) == 0.458122847291

    @pytest.mark.parametrize("d", list(range(3, 11)))
    def test_closed_form(self, d):
        assert abs(tree_rho(d) - 2 * math.sqrt(d - 1) / d) < 1e-12

    def test_degree_validation(self):
        with pytest.raises(ValueError):
            tree_rho(1)


class TestRamanujan:
    def test_petersen(self):
        v = ramanujan_check(petersen_graph())
        assert v.ramanujan and v.ramanujan_strict
        assert not v.equality
        assert abs(v.threshold - 0.942809041582) < 1e-12

    def test_cycle_equality_case(self):
        v = ramanujan_check(cycle_graph(4))
        assert v.ramanujan
        assert v.equality
        assert v.threshold == 1.0
        # the strict reading drops the bipartite −1 and sails under
        assert v.ramanujan_strict

    def test_lps_17_13(self):
        v = ramanujan_check(lps_graph(17, 13), method="iterative")
        assert v.ramanujan and v.ramanujan_strict
        assert abs(v.report.rho0 - 0.436158615) < 1e-6
        assert v.report.rho0 <= v.threshold + 1e-6

    def test_doubled_cycle_is_not_ramanujan(self):
        # Z/41 with the shift taken twice: 4-regular but spectrally a cycle
        shift = tuple((i + 1) % 41 for i in range(41))
        act = PermAction.from_generator_perms([shift, shift], [], ["a", "b"])
        v = ramanujan_check(from_perm_action(act))
        assert not v.ramanujan and not v.ramanujan_strict
        assert abs(v.report.rho0 - cycle_rho0_exact(41)) < 1e-9


class TestAveragedOperators:
    def test_s3_rotation_support(self):
        act = s3_regular()
        norm = distribution_operator_norm(act, ["c", "C"])
        assert abs(norm - 1.0) < 1e-12
        evs = np.linalg.eigvalsh(averaged_operator(act, ["c", "C"]))
        assert np.allclose(evs, [-0.5, -0.5, -0.5, -0.5, 1.0, 1.0], atol=1e-12)

    def test_spectrum_is_index_copies(self):
        act = z6_regular()
        for support in (["a", "A"], ["b", "B"], ["m"], ["a", "A", "m"]):
            sub = support_subgroup_graph(act, support)
            index = act.degree // sub.n
            copies = sorted(list(markov_spectrum(sub)) * index)
            evs = np.linalg.eigvalsh(averaged_operator(act, support))
            assert np.allclose(evs, copies, atol=1e-9)

    def test_multiset_support(self):
        act = s3_regular()
        single = averaged_operator(act, ["c", "C"])
        doubled = averaged_operator(act, ["c", "C", "c", "C"])
        assert np.allclose(single, doubled)
        sub = support_subgroup_graph(act, ["c", "C", "c", "C"])
        assert sub.degree == 4
        assert sub.n == 3

    def test_identity_entries(self):
        act = z6_regular()
        lazy = averaged_operator(act, ["e", "a", "A", None])
        evs = np.linalg.eigvalsh(lazy)
        # (I + P + P⁻¹ + I)/4 = (I + cos-spectrum)/2 shifted: top is 1
        assert abs(evs[-1] - 1.0) < 1e-12
        assert abs(distribution_operator_norm(act, ["e", "a", "A", None]) - 1.0) < 1e-12

    def test_asymmetric_support_rejected(self):
        with pytest.raises(ValueError, match="not symmetric"):
            distribution_operator_norm(s3_regular(), ["c"])

    def test_empty_support_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            distribution_operator_norm(s3_regular(), [])


class TestProductReturnBound:
    def test_lazy_coin(self):
        act = PermAction.from_generator_perms([], [(1, 0)], involution_names=["t"])
        rep = product_return_bound(act, [["e", "t"], ["e", "t"]])
        assert rep.probability == Fraction(1, 2)
        assert rep.norms == (1.0, 1.0)

    def test_deterministic_involution_squared(self):
        act = s3_regular()
        rep = product_return_bound(act, [["t01"], ["t01"]])
        assert rep.probability == 1
        assert rep.bound == pytest.approx(1.0)

    def test_two_transpositions(self):
        rep = product_return_bound(s3_regular(), [["t01", "t02"], ["t01", "t02"]])
        assert rep.probability == Fraction(1, 2)
        assert all(abs(x - 1.0) < 1e-12 for x in rep.norms)

    def test_violation_guard(self):
        with pytest.raises(InequalityViolation, match="exceeds the norm"):
            ProductReturnBound(degree=2, probability=Fraction(1), norms=(0.5,))

    @given(
        seed=st.integers(min_value=0, max_value=1000),
        steps=st.integers(min_value=1, max_value=4),
    )
    @settings(max_examples=20, deadline=None)
    def test_random_supports_never_violate(self, seed, steps):
        import random

        rng = random.Random(seed)
        act = z6_regular()
        pool = [["a", "A"], ["b", "B"], ["m"], ["e", "m"], ["a", "A", "m"]]
        supports = [rng.choice(pool) for _ in range(steps)]
        rep = product_return_bound(act, supports)
        assert 0 <= rep.probability <= 1

    def test_exact_convolution_against_brute_force(self):
        act = s3_regular()
        supports = [["t01", "t02"], ["c", "C"]]
        rep = product_return_bound(act, supports)
        hits = 0
        total = 0
        for s1 in supports[0]:
            for s2 in supports[1]:
                g1 = act.perms[act.gens.index(s1)]
                g2 = act.perms[act.gens.index(s2)]
                total += 1
                if g2[g1[0]] == 0:
                    hits += 1
        assert rep.probability == Fraction(hits, total)
