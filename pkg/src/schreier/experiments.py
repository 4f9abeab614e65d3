"""Named experiment recipes, each returning a JSON-ready report dict.

These are the desk-scale versions of the phenomena the library is built
around: spectral-radius agreement between a Cayley graph and the
Schreier graph of an amenable subgroup, its failure scale for a
nonamenable subgroup, the strict inequality for finite-index actions,
the asymptotic lower bound for ρ₀ along random regular sequences, and
Ramanujan verification next to short-cycle densities.  Reports embed
the exact configuration that produced them.
"""

from __future__ import annotations

import statistics
from fractions import Fraction

from schreier.builders import (
    free_core,
    from_perm_action,
    lps_graph,
    random_perm_action,
    random_perm_model,
    restrict_to_orbit,
    stallings_core,
)
from schreier.core import GenSet, parse_word
from schreier.cycles import cycle_counts
from schreier.irs import invariance_diagnostic, uniform_conjugate
from schreier.spectral import (
    estimate_rho_returns,
    markov_spectrum,
    ramanujan_check,
    rho0,
    tree_rho,
)

__all__ = [
    "kesten_amenable",
    "kesten_finite_irs",
    "nonamenable_subgroup_counterexample",
    "alon_boppana",
    "ramanujan_girth",
    "EXPERIMENTS",
]


def _sig(x: float) -> float:
    return float(f"{x:.12g}")


def _frac(f: Fraction) -> dict[str, int]:
    return {"num": f.numerator, "den": f.denominator}


def kesten_amenable(horizon: int = 200) -> dict:
    """Spectral-radius estimates for the coset graph of the cyclic subgroup
    generated by one free letter of the rank-2 free group, against the
    Cayley graph itself, at matched horizons.

    The subgroup is infinite cyclic, hence amenable, so the two spectral
    radii agree in the limit; at any finite horizon both estimates are
    certified lower bounds and the report carries their gap.
    """
    gens = GenSet.free(2)
    folded = stallings_core(gens, [parse_word(gens, "a")])
    schreier = estimate_rho_returns(folded, horizon)
    cayley = estimate_rho_returns(free_core(2), horizon)
    gap = abs(schreier.rho0 - cayley.rho0)
    return {
        "experiment": "kesten-amenable",
        "config": {"horizon": horizon, "subgroup": "one free letter of rank 2"},
        "schreier_estimate": _sig(schreier.rho0),
        "schreier_extrapolated": _sig(schreier.extrapolated),
        "cayley_estimate": _sig(cayley.rho0),
        "cayley_extrapolated": _sig(cayley.extrapolated),
        "gap": _sig(gap),
        "limit_value": _sig(tree_rho(4)),
        "both_below_limit": schreier.rho0 < tree_rho(4) and cayley.rho0 < tree_rho(4),
    }


def kesten_finite_irs(n: int = 20, seed: int = 3, radius: int = 2) -> dict:
    """The uniform-conjugate ensemble of a finite transitive action is
    conjugation-invariant, and its Schreier graphs keep eigenvalue 1, so the
    walk does not decay: spectral radius 1, strictly above the free-group
    Cayley estimate.  The strict-inequality direction at finite index."""
    act = restrict_to_orbit(random_perm_action(2, n, seed))
    ensemble = uniform_conjugate(act)
    diag = invariance_diagnostic(ensemble, radius)
    top = float(markov_spectrum(from_perm_action(act))[-1])
    return {
        "experiment": "kesten-finite-irs",
        "config": {"n": n, "seed": seed, "radius": radius},
        "orbit_size": act.degree,
        "invariance_max_tv": _frac(diag.max_tv),
        "schreier_spectral_radius": _sig(top),
        "cayley_spectral_radius": _sig(tree_rho(4)),
        "strict_inequality": top > tree_rho(4),
    }


def nonamenable_subgroup_counterexample(
    horizon: int = 300, tolerance: float = 0.02, rank: int = 5
) -> dict:
    """The subgroup spanned by the first two letters of a free group is
    itself free of rank 2 — as nonamenable as it gets — yet for rank ≥ 5
    its coset graph keeps the full Cayley spectral radius 2√(2r−1)/(2r):
    the four loops at the root are too weak a defect to push an eigenvalue
    out of the band.  Matched-horizon estimates for both graphs.

    Below rank 5 the defect does create a bound state (rank 4 has spectral
    radius exactly 2/3 > √7/4, from the root's first-return generating
    function), and the report flags it: the certified Schreier bound then
    climbs past the Cayley limit value.
    """
    if rank < 3:
        raise ValueError("the subgroup uses the first two of at least three letters")
    gens = GenSet.free(rank)
    folded = stallings_core(gens, [parse_word(gens, "a"), parse_word(gens, "b")])
    schreier = estimate_rho_returns(folded, horizon)
    cayley = estimate_rho_returns(free_core(rank), horizon)
    gap = abs(schreier.rho0 - cayley.rho0)
    limit = tree_rho(2 * rank)
    return {
        "experiment": "nonamenable-subgroup-counterexample",
        "config": {"horizon": horizon, "tolerance": tolerance, "rank": rank},
        "schreier_estimate": _sig(schreier.rho0),
        "schreier_extrapolated": _sig(schreier.extrapolated),
        "cayley_estimate": _sig(cayley.rho0),
        "cayley_extrapolated": _sig(cayley.extrapolated),
        "gap": _sig(gap),
        "limit_value": _sig(limit),
        "estimates_within_tolerance": gap <= tolerance,
        "bound_state_detected": schreier.rho0 > limit + 1e-12,
    }


def _median(values: list[float]) -> float:
    return statistics.median(values)


def alon_boppana(
    sizes: tuple[int, ...] = (100, 1000, 10_000),
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5),
    lmax: int = 5,
) -> dict:
    """ρ₀ of 4-regular random Schreier graphs against the tree value, with
    short-cycle densities alongside: the spectral floor rises toward
    2√3/4 while the cycle densities fall off like 1/n."""
    runs = []
    for size in sizes:
        for seed in seeds:
            g = random_perm_model(2, size, seed)
            report = rho0(g)
            counts = cycle_counts(g, lmax)
            runs.append(
                {
                    "size": size,
                    "seed": seed,
                    "n": g.n,
                    "rho0": _sig(report.rho0),
                    "method": report.method,
                    "cycle_counts": list(counts),
                    "cycle_densities": [_sig(c / g.n) for c in counts],
                }
            )
    summary = []
    for size in sizes:
        rows = [r for r in runs if r["size"] == size]
        summary.append(
            {
                "size": size,
                "rho0_median": _sig(_median([r["rho0"] for r in rows])),
                "rho0_min": _sig(min(r["rho0"] for r in rows)),
                "density_medians": [
                    _sig(_median([r["cycle_densities"][i] for r in rows]))
                    for i in range(lmax)
                ],
            }
        )
    return {
        "experiment": "alon-boppana",
        "config": {"sizes": list(sizes), "seeds": list(seeds), "lmax": lmax},
        "tree_value": _sig(tree_rho(4)),
        "runs": runs,
        "summary": summary,
    }


def ramanujan_girth(
    sizes: tuple[int, ...] = (100, 1000, 10_000),
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5),
    lmax: int = 5,
) -> dict:
    """Ramanujan verdicts and cycle densities side by side: the random
    4-regular sequence, plus the 18-regular arithmetic graph on 1092
    vertices (Ramanujan with margin, but with three triangles through
    every vertex at these parameters)."""
    base = alon_boppana(sizes, seeds, lmax)
    random_rows = []
    for row in base["summary"]:
        random_rows.append(
            {
                "size": row["size"],
                "rho0_median": row["rho0_median"],
                "threshold": _sig(tree_rho(4)),
                "median_within_threshold": row["rho0_median"] <= tree_rho(4),
                "density_medians": row["density_medians"],
            }
        )
    lps = lps_graph(17, 13)
    verdict = ramanujan_check(lps)
    lps_counts = cycle_counts(lps, lmax)
    return {
        "experiment": "ramanujan-girth",
        "config": base["config"] | {"lps": {"p": 17, "q": 13}},
        "random_model": random_rows,
        "lps": {
            "n": lps.n,
            "degree": lps.gens.degree,
            "rho0": _sig(verdict.report.rho0),
            "threshold": _sig(verdict.threshold),
            "verdict": verdict.ramanujan,
            "cycle_counts": list(lps_counts),
            "cycle_densities": [_frac(Fraction(c, lps.n)) for c in lps_counts],
        },
    }


EXPERIMENTS = {
    "kesten-amenable": kesten_amenable,
    "kesten-finite-irs": kesten_finite_irs,
    "nonamenable-subgroup-counterexample": nonamenable_subgroup_counterexample,
    "alon-boppana": alon_boppana,
    "ramanujan-girth": ramanujan_girth,
}
