"""Command-line front end.

Every analysis command prints one JSON document with the schema version,
the command name, the full configuration (flags, seeds) needed to
reproduce the run, and the result.  ``build`` alone prints raw SGF1
text.  Exit codes: 0 on success, 2 when an asserted inequality fails,
1 for usage errors and guard violations.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

from schreier.builders import (
    CoreGraph,
    SPEC_GRAMMAR,
    action_from_spec,
    complete_ball,
    free_core,
    from_spec,
    restrict_to_orbit,
)
from schreier.core import (
    GenSet,
    GraphInvariantError,
    InequalityViolation,
    InsufficientRadiusError,
    PermAction,
    SGF1Error,
    Word,
    format_word,
    parse_word,
    serialize,
)
from schreier.cycles import cycle_profile
from schreier.experiments import EXPERIMENTS
from schreier.irs import (
    ensemble_ball_distribution,
    invariance_diagnostic,
    stabilizer_sample,
    uniform_conjugate,
)
from schreier.local import ball_distance, bs_statistics, fix_density, local_approx_check
from schreier.spectral import (
    averaged_operator,
    bipartition,
    distribution_operator_norm,
    estimate_rho_returns,
    markov_spectrum,
    product_return_bound,
    ramanujan_check,
    rho0,
    support_subgroup_graph,
)
from schreier.walks import (
    conditioned_prefix_probability,
    count_walks,
    prefix_probability,
    return_domination_report,
    returning_words,
    segment_distribution,
    tree_return_domination_report,
)

LEMMA_CHECKS = (
    "different",
    "returningvsrw",
    "triv1",
    "triv2",
    "modifiedrw",
    "subgroupnorm",
    "lekv",
)


def _sig(x: float) -> float:
    return float(f"{float(x):.12g}")


def _frac(f: Fraction) -> dict[str, int]:
    return {"num": f.numerator, "den": f.denominator}


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit 1 (2 is reserved for violated
    inequalities)."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _full_graph(built, purpose: str):
    if isinstance(built, CoreGraph):
        if built.complete:
            return built.graph
        raise ValueError(
            f"{purpose} needs a whole graph; complete the core with an '@radius' suffix"
        )
    return built


def _parse_rank(group: str) -> int:
    if group and group[0] in "Ff" and group[1:].isdigit():
        return int(group[1:])
    raise ValueError(f"unknown group {group!r} (expected F<rank>, e.g. F2)")


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part)
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from None


def _word_tables(rank: int, n: int):
    if n < 2 or n % 2:
        raise ValueError("returning-word checks concern even n >= 2")
    g = complete_ball(free_core(rank), max(1, n // 2))
    return returning_words(g, n)


def _random_support(gens: GenSet, rng: random.Random) -> list[str | None]:
    support: list[str | None] = []
    for l in range(gens.degree):
        partner = gens.inv[l]
        if partner < l:
            continue
        count = rng.randrange(3)
        if partner == l:
            support += [gens.labels[l]] * count
        else:
            support += [gens.labels[l], gens.labels[partner]] * count
    support += [None] * rng.randrange(3)
    if not support:
        support.append(None)
    rng.shuffle(support)
    return support


def _parse_supports(text: str) -> list[list[str | None]]:
    sequence = []
    for chunk in text.split(";"):
        entries: list[str | None] = []
        for name in chunk.split(","):
            name = name.strip()
            if name:
                entries.append(None if name == "e" else name)
        if not entries:
            raise ValueError("every support needs at least one entry")
        sequence.append(entries)
    if not sequence:
        raise ValueError("no supports given")
    return sequence


def _build_parser() -> _Parser:
    parser = _Parser(prog="schreier", description=__doc__)
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="cap on internal parallelism (recorded in reports; current "
        "computations are sequential)",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="emit a graph as SGF1 text", epilog=SPEC_GRAMMAR,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("spec")
    p.add_argument("--out")

    p = sub.add_parser("spectrum", help="exact Markov-operator eigenvalues")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")

    p = sub.add_parser("rho-estimate", help="certified spectral-radius lower bound "
                       "from return counts")
    p.add_argument("--graph", required=True)
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--out")

    p = sub.add_parser("ramanujan", help="compare rho0 against the tree value")
    p.add_argument("--graph", required=True)
    p.add_argument("--method", choices=("dense", "iterative"))
    p.add_argument("--out")

    p = sub.add_parser("walks", help="exact return counts at the root")
    p.add_argument("--graph", required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--vertex", type=int)
    p.add_argument("--out")

    p = sub.add_parser("lemma-check", help="verify one of the walk/operator/ball "
                       "inequalities on a concrete instance")
    p.add_argument("check", choices=LEMMA_CHECKS)
    p.add_argument("--graph", help="graph spec (different, returningvsrw)")
    p.add_argument("--tree-degree", type=int, help="run 'different' on the regular "
                   "tree via ring counts instead of a stored graph")
    p.add_argument("--group", help="F<rank>, the ambient free group (triv1, triv2)")
    p.add_argument("--action", action="append", help="action spec; repeatable (lekv, "
                   "modifiedrw, subgroupnorm)")
    p.add_argument("--n", type=int, help="walk length / word length")
    p.add_argument("--k", type=int, default=3, help="segment / prefix length cap "
                   "(triv1, triv2)")
    p.add_argument("--prefix-length", type=int, default=2, help="prefix cap "
                   "(returningvsrw)")
    p.add_argument("--radius", type=int, default=2, help="ball radius (lekv)")
    p.add_argument("--words", help="comma-separated words (lekv: explicit word list)")
    p.add_argument("--supports", help="semicolon-separated supports, comma-separated "
                   "labels, 'e' for identity (modifiedrw)")
    p.add_argument("--support", help="one support (subgroupnorm)")
    p.add_argument("--random", type=int, metavar="COUNT",
                   help="number of random support sequences (modifiedrw)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assume-transitive", action="store_true",
                   help="skip the vertex-transitivity check (truncated inputs whose "
                   "full graph is transitive, e.g. tree balls)")
    p.add_argument("--restrict", action="store_true",
                   help="restrict the action to the orbit of 0 first (lekv)")
    p.add_argument("--out")

    p = sub.add_parser("bs-stats", help="ball-class frequencies over all roots")
    p.add_argument("--graph", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("ball-distance", help="rooted distance 1/(1+max agreeing radius)")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--max-radius", type=int, default=32)
    p.add_argument("--out")

    p = sub.add_parser("fix-density", help="fraction of points a word fixes")
    p.add_argument("--action", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--out")

    p = sub.add_parser("cycles", help="girth and exact short-cycle counts")
    p.add_argument("--graph", required=True)
    p.add_argument("--lmax", type=int, default=6)
    p.add_argument("--out")

    p = sub.add_parser("irs-sample", help="stabilizer ensemble of an action, with an "
                       "invariance diagnostic")
    p.add_argument("--action", required=True)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--exact", action="store_true",
                   help="exact uniform-conjugate ensemble instead of sampling")
    p.add_argument("--out")

    p = sub.add_parser("experiment", help="run a named experiment recipe")
    p.add_argument("name", choices=sorted(EXPERIMENTS))
    p.add_argument("--horizon", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--rank", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--radius", type=int)
    p.add_argument("--sizes", help="comma-separated graph sizes")
    p.add_argument("--seeds", help="comma-separated seeds")
    p.add_argument("--lmax", type=int)
    p.add_argument("--out")

    return parser


def _echo_config(args: argparse.Namespace, config_file: str | None) -> dict:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key in ("command", "out") or value is None:
            continue
        config[key.replace("_", "-")] = value
    if config_file is not None:
        config["config-file"] = config_file
    return config


def _emit(args: argparse.Namespace, config_file: str | None, result: dict) -> None:
    doc = {
        "schema": 1,
        "command": args.command,
        "config": _echo_config(args, config_file),
        "result": result,
    }
    text = json.dumps(doc, indent=2)
    print(text)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")


# ---------------------------------------------------------------------------
# lemma-check handlers
# ---------------------------------------------------------------------------


def _check_different(args) -> dict:
    if args.n is None:
        raise ValueError("different needs --n (checks run at all even lengths up to it)")
    rows = []
    if args.tree_degree is not None:
        source = f"{args.tree_degree}-regular tree"
        reports = [
            tree_return_domination_report(args.tree_degree, k)
            for k in range(2, args.n + 1, 2)
        ]
    elif args.graph is not None:
        source = args.graph
        g = _full_graph(from_spec(args.graph), "the domination check")
        transitive = True if args.assume_transitive else None
        reports = [
            return_domination_report(g, k, vertex_transitive=transitive)
            for k in range(2, args.n + 1, 2)
        ]
    else:
        raise ValueError("different needs --graph or --tree-degree")
    for r in reports:
        rows.append(
            {
                "n": r.n,
                "return_count": r.return_count,
                "max_other_count": r.max_other_count,
                "previous_return_count": r.previous_return_count,
            }
        )
    return {"source": source, "rows": rows, "holds": True}


def _check_returningvsrw(args) -> dict:
    if args.graph is None or args.n is None:
        raise ValueError("returningvsrw needs --graph and --n")
    g = _full_graph(from_spec(args.graph), "the conditioned-prefix check")
    transitive = True if args.assume_transitive else None
    rows = []
    for length in range(1, args.prefix_length + 1):
        for letters in product(range(g.gens.degree), repeat=length):
            w = Word(letters)
            p = conditioned_prefix_probability(
                g, g.root, w, args.n, vertex_transitive=transitive
            )
            rows.append(
                {
                    "prefix": format_word(g.gens, w),
                    "probability": _frac(p),
                    "bound": _frac(Fraction(1, g.degree ** (2 * length))),
                }
            )
    return {"n": args.n, "rows": rows, "holds": True}


def _check_triv1(args) -> dict:
    if args.group is None or args.n is None:
        raise ValueError("triv1 needs --group and --n")
    rank = _parse_rank(args.group)
    words = _word_tables(rank, args.n)
    kmax = min(args.k, (args.n - 1) // 2)
    gens = words.graph.gens
    rows = []
    for length in range(1, kmax + 1):
        for letters in product(range(gens.degree), repeat=length):
            w = Word(letters)
            p = prefix_probability(words, w)
            rows.append(
                {
                    "prefix": format_word(gens, w),
                    "probability": _frac(p),
                    "bound": _frac(Fraction(1, gens.degree ** (2 * length))),
                }
            )
    return {
        "n": args.n,
        "word_count": words.count,
        "prefix_length_max": kmax,
        "rows": rows,
        "holds": True,
    }


def _check_triv2(args) -> dict:
    if args.group is None or args.n is None:
        raise ValueError("triv2 needs --group and --n")
    rank = _parse_rank(args.group)
    words = _word_tables(rank, args.n)
    kmax = min(args.k, args.n)
    classes = {}
    for k in range(1, kmax + 1):
        base = segment_distribution(words, 0, k)
        classes[k] = len(base)
        for t in range(1, args.n):
            if segment_distribution(words, t, k) != base:
                raise InequalityViolation(
                    f"segment distribution at cyclic shift {t} differs (k={k})"
                )
    return {
        "n": args.n,
        "word_count": words.count,
        "segment_length_max": kmax,
        "segment_classes": classes,
        "shifts_checked": args.n - 1,
        "identical": True,
    }


def _check_modifiedrw(args) -> dict:
    if not args.action:
        raise ValueError("modifiedrw needs --action")
    act = action_from_spec(args.action[0])
    if args.supports is not None:
        sequences = [_parse_supports(args.supports)]
    elif args.random is not None:
        rng = random.Random(args.seed)
        sequences = [
            [_random_support(act.gens, rng) for _ in range(rng.randrange(1, 4))]
            for _ in range(args.random)
        ]
    else:
        raise ValueError("modifiedrw needs --supports or --random")
    rows = []
    for seq in sequences:
        bound = product_return_bound(act, seq)
        rows.append(
            {
                "supports": [[name or "e" for name in sup] for sup in seq],
                "probability": _frac(bound.probability),
                "norms": [_sig(x) for x in bound.norms],
                "bound": _sig(bound.bound),
            }
        )
    return {"action": args.action[0], "sequences": rows, "holds": True}


def _check_subgroupnorm(args) -> dict:
    if not args.action or args.support is None:
        raise ValueError("subgroupnorm needs --action and --support")
    act = action_from_spec(args.action[0])
    support = _parse_supports(args.support)[0]
    norm = distribution_operator_norm(act, support)
    subgraph = support_subgroup_graph(act, support)
    if act.degree % subgraph.n:
        raise ValueError(
            "support subgroup orbit does not divide the action degree; "
            "the copies statement needs a regular action"
        )
    index = act.degree // subgraph.n
    sub_spectrum = np.asarray(markov_spectrum(subgraph))
    full = np.sort(np.linalg.eigvalsh(averaged_operator(act, support)))
    expected = np.sort(np.tile(sub_spectrum, index))
    deviation = float(np.max(np.abs(full - expected)))
    if deviation > 1e-9:
        raise InequalityViolation(
            f"operator spectrum is not {index} copies of the subgroup spectrum "
            f"(deviation {deviation:.3e})"
        )
    if abs(norm - max(abs(float(sub_spectrum[0])), float(sub_spectrum[-1]))) > 1e-9:
        raise InequalityViolation(
            "operator norm differs from the subgroup-graph spectral radius"
        )
    return {
        "action": args.action[0],
        "support": [name or "e" for name in support],
        "operator_norm": _sig(norm),
        "subgroup_order": subgraph.n,
        "index": index,
        "subgroup_spectrum": [_sig(x) for x in sub_spectrum],
        "max_deviation": _sig(deviation),
        "copies_verified": True,
    }


def _check_lekv(args) -> dict:
    if not args.action:
        raise ValueError("lekv needs --action (repeatable)")
    actions = [action_from_spec(spec) for spec in args.action]
    if args.restrict:
        actions = [restrict_to_orbit(act) for act in actions]
    words = None
    if args.words is not None:
        gens = actions[0].gens
        words = [parse_word(gens, w) for w in args.words.split(",") if w]
    reports = local_approx_check(actions, args.radius, words=words)
    rows = []
    for spec, report in zip(args.action, reports):
        row = {
            "action": spec,
            "n": report.n,
            "tree_ball_probability": _frac(report.tree_ball_probability),
            "words_checked": len(report.densities),
            "words_complete": report.words_complete,
            "density_sum": _frac(report.density_sum),
        }
        if len(report.densities) <= 64:
            row["densities"] = [
                [format_word(actions[0].gens, w), _frac(d)]
                for w, d in report.densities
            ]
        rows.append(row)
    return {"radius": args.radius, "rows": rows, "holds": True}


_CHECKS = {
    "different": _check_different,
    "returningvsrw": _check_returningvsrw,
    "triv1": _check_triv1,
    "triv2": _check_triv2,
    "modifiedrw": _check_modifiedrw,
    "subgroupnorm": _check_subgroupnorm,
    "lekv": _check_lekv,
}


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _dispatch(args: argparse.Namespace, config_file: str | None) -> int:
    if args.command == "build":
        built = from_spec(args.spec)
        text = serialize(built.graph if isinstance(built, CoreGraph) else built)
        print(text, end="")
        if args.out:
            Path(args.out).write_text(text)
        return 0

    if args.command == "spectrum":
        g = _full_graph(from_spec(args.graph), "the spectrum")
        eigenvalues = markov_spectrum(g)
        result = {
            "n": g.n,
            "degree": g.degree,
            "bipartite": bipartition(g) is not None,
            "eigenvalues": [_sig(x) for x in eigenvalues],
        }
    elif args.command == "rho-estimate":
        built = from_spec(args.graph)
        report = estimate_rho_returns(built, args.horizon)
        result = {
            "horizon": args.horizon,
            "certified_lower_bound": _sig(report.rho0),
            "extrapolated": None
            if report.extrapolated is None
            else _sig(report.extrapolated),
            "bipartite": report.bipartite,
            "method": report.method,
        }
    elif args.command == "ramanujan":
        g = _full_graph(from_spec(args.graph), "the Ramanujan check")
        verdict = ramanujan_check(g, method=args.method)
        result = {
            "n": verdict.report.n,
            "degree": verdict.degree,
            "rho0": _sig(verdict.report.rho0),
            "threshold": _sig(verdict.threshold),
            "verdict": verdict.ramanujan,
            "strict": verdict.ramanujan_strict,
            "equality": verdict.equality,
            "method": verdict.report.method,
            "error_bound": _sig(verdict.report.error_bound),
        }
    elif args.command == "walks":
        g = _full_graph(from_spec(args.graph), "walk counting")
        x = g.root if args.vertex is None else args.vertex
        table = count_walks(g, x, args.horizon, returns_only=True)
        counts = [table.return_count(k) for k in range(args.horizon + 1)]
        result = {
            "vertex": x,
            "horizon": args.horizon,
            "return_counts": counts,
            "return_probabilities": [
                _sig(c / g.degree**k) for k, c in enumerate(counts)
            ],
        }
    elif args.command == "lemma-check":
        result = _CHECKS[args.check](args)
    elif args.command == "bs-stats":
        g = _full_graph(from_spec(args.graph), "ball statistics")
        dist = bs_statistics(g, args.radius)
        classes = sorted(
            dist.frequencies.items(), key=lambda item: (-item[1], item[0])
        )
        result = {
            "radius": args.radius,
            "n": dist.n,
            "class_count": len(classes),
            "classes": [
                {"digest": digest, "frequency": _frac(freq)}
                for digest, freq in classes
            ],
        }
    elif args.command == "ball-distance":
        first = _full_graph(from_spec(args.first), "ball distance")
        second = _full_graph(from_spec(args.second), "ball distance")
        outcome = ball_distance(first, second, max_radius=args.max_radius)
        result = {
            "value": _frac(outcome.value),
            "agreement_radius": outcome.agreement_radius,
            "exact": outcome.exact,
        }
    elif args.command == "fix-density":
        act = action_from_spec(args.action)
        word = parse_word(act.gens, args.word)
        density = fix_density(act, word)
        result = {
            "word": args.word,
            "points": act.degree,
            "density": _frac(density),
            "value": _sig(density),
        }
    elif args.command == "cycles":
        profile = cycle_profile(from_spec(args.graph), args.lmax, label=args.graph)
        result = {
            "label": profile.label,
            "n": profile.n,
            "girth": None if math.isinf(profile.girth) else profile.girth,
            "counts": list(profile.counts),
            "densities": [_frac(d) for d in profile.densities],
        }
    elif args.command == "irs-sample":
        act = action_from_spec(args.action)
        if args.exact:
            ensemble = uniform_conjugate(act)
        else:
            ensemble = stabilizer_sample(act, args.count, args.seed)
        diag = invariance_diagnostic(ensemble, args.radius)
        dist = sorted(
            ensemble_ball_distribution(ensemble, args.radius).items(),
            key=lambda item: (-item[1], item[0]),
        )
        result = {
            "kind": ensemble.kind,
            "provenance": {
                "source": ensemble.provenance.source,
                "seed": ensemble.provenance.seed,
                "sample_count": ensemble.provenance.sample_count,
                "worker_count": ensemble.provenance.worker_count,
            },
            "radius": args.radius,
            "ball_classes": [
                {"digest": digest, "weight": _frac(w)} for digest, w in dist
            ],
            "invariance": {
                "per_generator": [
                    [name, _frac(tv)] for name, tv in diag.per_generator
                ],
                "max_tv": _frac(diag.max_tv),
                "confidence_radius": None
                if diag.confidence_radius is None
                else _sig(diag.confidence_radius),
            },
        }
    elif args.command == "experiment":
        accepted = {
            "kesten-amenable": ("horizon",),
            "kesten-finite-irs": ("n", "seed", "radius"),
            "nonamenable-subgroup-counterexample": ("horizon", "tolerance", "rank"),
            "alon-boppana": ("sizes", "seeds", "lmax"),
            "ramanujan-girth": ("sizes", "seeds", "lmax"),
        }[args.name]
        kwargs = {}
        for key in accepted:
            value = getattr(args, key)
            if value is None:
                continue
            kwargs[key] = _parse_ints(value) if key in ("sizes", "seeds") else value
        result = EXPERIMENTS[args.name](**kwargs)
    else:  # pragma: no cover - argparse enforces the choices
        raise ValueError(f"unknown command {args.command!r}")

    _emit(args, config_file, result)
    return 0


def _apply_config(argv: list[str]) -> tuple[list[str], str | None]:
    """Splice `key = value` lines from --config FILE in as flags, weaker
    than anything passed explicitly (they are inserted before the explicit
    flags, and argparse lets the last occurrence win)."""
    if "--config" not in argv:
        return argv, None
    at = argv.index("--config")
    if at + 1 >= len(argv):
        raise ValueError("--config needs a file path")
    path = argv[at + 1]
    rest = argv[:at] + argv[at + 2 :]
    injected: list[str] = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line without '=': {line!r}")
        flag = "--" + key.strip().replace("_", "-")
        value = value.strip()
        if value.lower() in ("true", "yes", "on"):
            injected.append(flag)
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            injected.extend([flag, value])
    head = 0
    while head < len(rest) and not rest[head].startswith("-"):
        head += 1
    return rest[:head] + injected + rest[head:], path


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv, config_file = _apply_config(argv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args, config_file)
    except InequalityViolation as exc:
        print(f"inequality violated: {exc}", file=sys.stderr)
        return 2
    except (
        ValueError,
        KeyError,
        GraphInvariantError,
        SGF1Error,
        InsufficientRadiusError,
        OSError,
    ) as exc:
        reason = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {reason}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
