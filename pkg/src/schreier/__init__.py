"""Schreier graphs of finitely generated groups: construction, spectra,
random-walk statistics, local (ball) statistics, and diagnostics for
conjugation-invariant distributions over subgroups."""

from schreier.builders import (
    CoreGraph,
    action_from_spec,
    complete_ball,
    cycle_graph,
    free_core,
    from_spec,
    lps_graph,
    random_perm_action,
    random_perm_model,
    from_perm_action,
    restrict_to_orbit,
    stallings_core,
    tree_ball,
)
from schreier.core import (
    BOUNDARY,
    GenSet,
    GraphInvariantError,
    InequalityViolation,
    InsufficientRadiusError,
    PermAction,
    SchreierGraph,
    SGF1Error,
    Word,
    canonicalize,
    format_word,
    parse,
    parse_word,
    reduce_word,
    serialize,
    walk_endpoint,
)
from schreier.cycles import cycle_counts, cycle_profile, essential_girth_profile, girth
from schreier.irs import (
    IrsEnsemble,
    invariance_diagnostic,
    stabilizer_sample,
    uniform_conjugate,
    weak_convergence_diagnostic,
)
from schreier.local import (
    ball,
    ball_distance,
    bs_statistics,
    fix_density,
    local_approx_check,
    tv_distance,
)
from schreier.spectral import (
    estimate_rho_returns,
    markov_spectrum,
    ramanujan_check,
    rho0,
    tree_rho,
)
from schreier.walks import (
    count_walks,
    return_domination_report,
    returning_words,
)

__all__ = [
    "BOUNDARY",
    "CoreGraph",
    "GenSet",
    "GraphInvariantError",
    "InequalityViolation",
    "InsufficientRadiusError",
    "IrsEnsemble",
    "PermAction",
    "SGF1Error",
    "SchreierGraph",
    "Word",
    "action_from_spec",
    "ball",
    "ball_distance",
    "bs_statistics",
    "canonicalize",
    "complete_ball",
    "count_walks",
    "cycle_counts",
    "cycle_graph",
    "cycle_profile",
    "essential_girth_profile",
    "estimate_rho_returns",
    "fix_density",
    "format_word",
    "free_core",
    "from_perm_action",
    "from_spec",
    "girth",
    "invariance_diagnostic",
    "local_approx_check",
    "lps_graph",
    "markov_spectrum",
    "parse",
    "parse_word",
    "ramanujan_check",
    "random_perm_action",
    "random_perm_model",
    "reduce_word",
    "restrict_to_orbit",
    "return_domination_report",
    "returning_words",
    "rho0",
    "serialize",
    "stabilizer_sample",
    "stallings_core",
    "tree_ball",
    "tree_rho",
    "tv_distance",
    "uniform_conjugate",
    "walk_endpoint",
    "weak_convergence_diagnostic",
]

__version__ = "0.1.0"
