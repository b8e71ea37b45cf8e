"""Command line interface.

Subcommands: classify, rank, sweep, oracle, adjudicate, model. Exit codes:
0 success, 1 usage error, 2 data error, 3 mathematical precondition failed.
"""

import argparse
import json
import sys
from fractions import Fraction

from znrank import __version__
from znrank.errors import (
    EpsOutOfRange,
    GammaReducible,
    GuardExceeded,
    InputFormatError,
    MaxIterExceeded,
    MissingReverseWeight,
    NonpositiveWeight,
    NotIrreducible,
    SingularSystem,
    TransientStatesPresent,
    ZnrankError,
    ZeroPolynomial,
)
from znrank.graph import (
    DANGLING_POLICIES,
    classify_states,
    dump_matrix_json,
    load_matrix_json,
    ones_outer,
    parse_edge_list,
    to_stochastic,
    uniform_matrix,
)
from znrank.rational import EXACT, FLOAT, format_rational, number_to_json, parse_rational
from znrank.stationary import Distribution

EXACT_N_DEFAULT = 12  # auto numeric mode: exact up to here, floating above

MATH_ERRORS = (
    NotIrreducible,
    GammaReducible,
    TransientStatesPresent,
    GuardExceeded,
    SingularSystem,
    MaxIterExceeded,
    ZeroPolynomial,
    EpsOutOfRange,
    MissingReverseWeight,
    NonpositiveWeight,
)


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def canonical_dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


def build_parser():
    p = Parser(prog="znrank", description="Zero-noise limits of perturbed Markov chains.")
    p.add_argument("--version", action="version", version=f"znrank {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add_io(sp, matrix_only=False):
        sp.add_argument("--graph", help="edge list file: src dst [weight], # comments")
        sp.add_argument("--matrix", help='matrix JSON file: {"n": ..., "rows": [[...]]}')
        sp.add_argument("--dangling", choices=DANGLING_POLICIES, default="self_loop",
                        help="policy for rows with no outgoing weight (default self_loop)")
        sp.add_argument("--numeric", choices=("auto", "exact", "float"), default="auto",
                        help="arithmetic: auto picks exact up to n=12 (default auto)")
        sp.add_argument("--seed", type=int, default=None,
                        help="reserved for reproducibility; commands are deterministic")

    sp = sub.add_parser("classify", help="closed classes and transient states")
    add_io(sp)
    sp.add_argument("--format", choices=("json", "pretty"), default="json")

    sp = sub.add_parser("rank", help="zero-noise limit of the stationary law")
    add_io(sp)
    sp.add_argument("--q", required=True, metavar="QSPEC",
                    help="uniform | personalized=FILE | block=FILE | matrix=FILE")
    sp.add_argument("--mode", choices=("auto", "theorem3", "theorem2", "extended"), default="auto",
                    help="auto = theorem3 without transients, extended with them")
    sp.add_argument("--format", choices=("json", "pretty", "tsv"), default="json")

    sp = sub.add_parser("sweep", help="stationary laws along an eps grid")
    add_io(sp)
    sp.add_argument("--q", required=True, metavar="QSPEC")
    sp.add_argument("--eps", default=None,
                    help='grid: "a..b" log-spaced decades or a comma list (default by mode)')
    sp.add_argument("--format", choices=("tsv", "json"), default="tsv")

    sp = sub.add_parser("oracle", help="root weights and exact perturbation polynomials")
    add_io(sp)
    sp.add_argument("--q", default=None, metavar="QSPEC",
                    help="include polynomials and the exact limit for this perturbation")
    sp.add_argument("--format", choices=("json",), default="json")

    sp = sub.add_parser("adjudicate", help="compare limit methods against an oracle")
    add_io(sp)
    sp.add_argument("--q", required=True, metavar="QSPEC")
    sp.add_argument("--format", choices=("json", "pretty"), default="json")

    sp = sub.add_parser("model", help="build a chain from a model recipe")
    sp.add_argument("kind", choices=("srw", "bt", "pairwise"))
    sp.add_argument("--graph", help="edge list file")
    sp.add_argument("--weights", help="bt: node<TAB>w lines; pairwise: src<TAB>dst<TAB>w lines")
    sp.add_argument("--d", type=int, default=None, help="pairwise denominator (default max out-degree)")
    sp.add_argument("--dangling", choices=DANGLING_POLICIES, default="self_loop")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--format", choices=("json",), default="json")
    return p


def read_text(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def load_p(args):
    if bool(args.graph) == bool(args.matrix):
        raise UsageError("exactly one of --graph or --matrix is required")
    if args.graph:
        g = parse_edge_list(read_text(args.graph))
        p = to_stochastic(g, dangling=args.dangling)
    else:
        p = load_matrix_json(read_text(args.matrix), numeric_mode=EXACT)
    mode = args.numeric
    if mode == "auto":
        mode = "exact" if p.n <= EXACT_N_DEFAULT else "float"
    return p.to_float() if mode == "float" else p


def parse_personalization(text, p):
    labels = {lab: i for i, lab in enumerate(p.states.label_list())}
    masses = [Fraction(0)] * p.n
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise InputFormatError("expected `node mass`", line=ln)
        key = toks[0]
        if key in labels:
            i = labels[key]
        else:
            try:
                i = int(key)
            except ValueError:
                raise InputFormatError(f"unknown node {key!r}", line=ln) from None
            if not 0 <= i < p.n:
                raise InputFormatError(f"node index {i} out of range", line=ln)
        w = parse_rational(toks[1], line=ln)
        if w < 0:
            raise InputFormatError("negative mass", line=ln)
        masses[i] += w
    total = sum(masses)
    if total == 0:
        raise InputFormatError("personalization vector has no mass")
    return Distribution(tuple(x / total for x in masses), EXACT)


def parse_block_q(text, p):
    part = classify_states(p)
    if part.transient:
        raise TransientStatesPresent(
            "block perturbations are defined over closed classes only; this chain has transient states"
        )
    rows = []
    m = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m is None:
            try:
                m = int(line)
            except ValueError:
                raise InputFormatError("first value must be the class count m", line=ln) from None
            continue
        toks = line.split()
        if len(toks) != m:
            raise InputFormatError(f"expected {m} values per row", line=ln)
        rows.append([parse_rational(t, line=ln) for t in toks])
    if m is None or len(rows) != m:
        raise InputFormatError(f"expected m and then m rows, got {len(rows)} rows")
    if m != part.m:
        raise InputFormatError(f"block file has m = {m} but the chain has {part.m} closed classes")
    sizes = [len(c) for c in part.closed_classes]
    for i, row in enumerate(rows):
        if any(x < 0 for x in row):
            raise InputFormatError(f"negative block value in row {i}")
        s = sum(x * sz for x, sz in zip(row, sizes))
        if s != 1:
            raise InputFormatError(
                f"block row {i} expands to row sum {s}, not 1 (sum_j gamma_ij |C_j| must be 1)"
            )
    qrows = [[Fraction(0)] * p.n for _ in range(p.n)]
    for i, ci in enumerate(part.closed_classes):
        for j, cj in enumerate(part.closed_classes):
            for x in ci:
                for y in cj:
                    qrows[x][y] = rows[i][j]
    from znrank.graph import RowStochasticMatrix

    return RowStochasticMatrix(p.states, tuple(tuple(r) for r in qrows), EXACT)


def load_q(spec, p):
    """QSPEC: uniform | personalized=FILE | block=FILE | matrix=FILE.
    Returns (Q matrix, tag)."""
    if spec == "uniform":
        q = uniform_matrix(p.n, p.states)
    elif spec.startswith("personalized="):
        nu = parse_personalization(read_text(spec.split("=", 1)[1]), p)
        q = ones_outer(nu.values, p.states)
    elif spec.startswith("block="):
        q = parse_block_q(read_text(spec.split("=", 1)[1]), p)
    elif spec.startswith("matrix="):
        q = load_matrix_json(read_text(spec.split("=", 1)[1]), numeric_mode=EXACT)
        if q.n != p.n:
            raise InputFormatError(f"Q is {q.n} x {q.n} but the chain has {p.n} states")
        q = type(q)(p.states, q.rows, q.numeric_mode)
    else:
        raise UsageError(f"bad --q value {spec!r}")
    tag = spec.split("=", 1)[0]
    return (q.to_float() if p.numeric_mode == FLOAT else q), tag


def cmd_classify(args):
    p = load_p(args)
    part = classify_states(p)
    obj = {
        "n": p.n,
        "labels": p.states.label_list(),
        "classes": [list(c) for c in part.closed_classes],
        "transient": list(part.transient),
        "m": part.m,
    }
    if args.format == "pretty":
        labels = p.states.label_list()
        lines = [f"n = {p.n}, closed classes: {part.m}, transient states: {len(part.transient)}"]
        for k, c in enumerate(part.closed_classes):
            lines.append(f"  C{k + 1} = {{{', '.join(labels[i] for i in c)}}}")
        if part.transient:
            lines.append(f"  transient = {{{', '.join(labels[i] for i in part.transient)}}}")
        print("\n".join(lines))
    else:
        sys.stdout.write(canonical_dumps(obj))
    return 0


def build_limit_report(p, q, mode, q_tag):
    from znrank.zero_noise import (
        limit_rank_extended,
        limit_rank_general,
        theorem2_prediction,
    )

    part = classify_states(p)
    if mode == "auto":
        mode = "extended" if part.transient else "theorem3"
    if mode == "theorem2":
        return theorem2_prediction(p)
    if mode == "extended":
        return limit_rank_extended(p, q)
    gamma_mode = {"uniform": "uniform", "personalized": "personalized"}.get(q_tag, "plain")
    return limit_rank_general(p, q, gamma_mode=gamma_mode)


def cmd_rank(args):
    from znrank.zero_noise import report_to_json

    p = load_p(args)
    q, q_tag = load_q(args.q, p)
    report = build_limit_report(p, q, args.mode, q_tag)
    obj = report_to_json(report)
    if args.format == "json":
        sys.stdout.write(canonical_dumps(obj))
    elif args.format == "tsv":
        for lab, v in zip(obj["labels"], obj["node_limit"]):
            print(f"{lab}\t{v}")
    else:
        if report.mode == "theorem2":
            print("PREDICTION (uniform class masses); contradicted by the exact oracle"
                  " when class sizes differ. See `znrank adjudicate`.")
        print(f"mode: {report.mode}")
        labels = obj["labels"]
        for k, c in enumerate(report.partition.closed_classes):
            mass = obj["class_masses"][k]
            print(f"class C{k + 1} {{{', '.join(labels[i] for i in c)}}}: mass {mass}")
        for i, lab in enumerate(labels):
            print(f"{lab}\t{obj['node_limit'][i]}")
    return 0


def cmd_sweep(args):
    from znrank.sweep import convergence_report, epsilon_sweep, parse_eps_grid

    p = load_p(args)
    q, _ = load_q(args.q, p)
    exact = p.numeric_mode == EXACT
    grid = None
    if args.eps:
        try:
            grid = parse_eps_grid(args.eps, exact=exact)
        except (EpsOutOfRange, ValueError) as exc:
            raise UsageError(f"bad --eps: {exc}") from None
        if any(not 0 < e < 1 for e in grid):
            raise UsageError(f"bad --eps: values must lie in (0, 1), got {args.eps!r}")
        if any(b >= a for a, b in zip(grid, grid[1:])):
            raise UsageError(f"bad --eps: values must be strictly decreasing, got {args.eps!r}")
    result = epsilon_sweep(p, q, grid=grid)
    mode = result.pi_table[0].numeric_mode if result.pi_table else FLOAT

    def show(x):
        return format_rational(x) if mode == EXACT and not isinstance(x, float) else repr(float(x))

    if args.format == "tsv":
        n = p.n
        print("\t".join(["# eps"] + [f"pi{i}" for i in range(n)] + ["linf_error"]))
        for e, pi, err in zip(result.eps_grid, result.pi_table, result.errors):
            cells = [show(e)] + [show(v) for v in pi.values] + [show(err)]
            print("\t".join(cells))
    else:
        rep = convergence_report(result)
        obj = {
            "eps": [number_to_json(e, mode) if not isinstance(e, float) else e for e in result.eps_grid],
            "pi": [[number_to_json(v, pi.numeric_mode) for v in pi.values] for pi in result.pi_table],
            "predicted_limit": [
                number_to_json(v, result.predicted_limit.numeric_mode)
                for v in result.predicted_limit.values
            ],
            "errors": [number_to_json(e, mode) if not isinstance(e, float) else e for e in result.errors],
            "fitted_slope": result.fitted_slope,
            "first_order": None
            if result.first_order is None
            else [number_to_json(v, mode) if not isinstance(v, float) else v for v in result.first_order],
            "report": rep,
        }
        sys.stdout.write(canonical_dumps(obj))
    return 0


def cmd_oracle(args):
    from znrank.arborescence import (
        all_root_polynomials,
        exact_limit_from_polynomials,
        root_weight_minor,
    )
    from znrank.polynomial import EpsPolynomial

    p = load_p(args)
    obj = {
        "n": p.n,
        "labels": p.states.label_list(),
        "numeric": p.numeric_mode,
        "root_weights": [number_to_json(root_weight_minor(p, r), p.numeric_mode) for r in range(p.n)],
    }
    if args.q:
        if p.numeric_mode != EXACT:
            raise UsageError("the polynomial oracle needs exact arithmetic; use --numeric exact")
        q, _ = load_q(args.q, p)
        polys = all_root_polynomials(p, q)
        total = EpsPolynomial()
        for h in polys:
            total = total + h
        obj["polynomials"] = [h.to_strings() for h in polys]
        obj["total_polynomial"] = total.to_strings()
        obj["min_degree"] = total.min_degree()
        obj["exact_limit"] = [
            number_to_json(v, EXACT) for v in exact_limit_from_polynomials(p, q).values
        ]
    sys.stdout.write(canonical_dumps(obj))
    return 0


def cmd_adjudicate(args):
    from znrank.zero_noise import adjudicate

    p = load_p(args)
    q, _ = load_q(args.q, p)
    report = adjudicate(p, q)
    if args.format == "pretty":
        print(f"oracle: {report['oracle_mode']}")
        print("node\t" + "\t".join(report["labels"]))
        print("oracle\t" + "\t".join(str(x) for x in report["oracle"]))
        for name, entry in report["methods"].items():
            vals = "\t".join(str(x) for x in entry["values"])
            print(f"{name}\t{vals}")
            print(f"  max deviation {entry['max_deviation']}, verdict {entry['verdict']}")
    else:
        sys.stdout.write(canonical_dumps(report))
    return 0


def parse_node_weights(text, g):
    labels = {lab: i for i, lab in enumerate(g.states.label_list())}
    vals = [None] * g.states.n
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise InputFormatError("expected `node weight`", line=ln)
        if toks[0] not in labels:
            raise InputFormatError(f"unknown node {toks[0]!r}", line=ln)
        vals[labels[toks[0]]] = parse_rational(toks[1], line=ln)
    missing = [lab for lab, i in labels.items() if vals[i] is None]
    if missing:
        raise InputFormatError(f"missing weights for: {', '.join(sorted(missing))}")
    return vals


def parse_pair_weights(text, labels_hint=None):
    index = {} if labels_hint is None else {lab: i for i, lab in enumerate(labels_hint)}
    order = list(labels_hint) if labels_hint is not None else []
    frozen = labels_hint is not None
    pairs = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3:
            raise InputFormatError("expected `src dst weight`", line=ln)
        ids = []
        for t in toks[:2]:
            if t not in index:
                if frozen:
                    raise InputFormatError(f"unknown node {t!r}", line=ln)
                index[t] = len(order)
                order.append(t)
            ids.append(index[t])
        pairs[(ids[0], ids[1])] = parse_rational(toks[2], line=ln)
    if not order:
        raise InputFormatError("no comparisons in input")
    return order, pairs


def cmd_model(args):
    from znrank.models import (
        EdgeComparisons,
        bradley_terry_chain,
        pairwise_comparison_chain,
        simple_random_walk,
    )
    from znrank.graph import StateSpace

    if args.kind in ("srw", "bt") and not args.graph:
        raise UsageError(f"model {args.kind} requires --graph")
    if args.kind == "srw":
        g = parse_edge_list(read_text(args.graph))
        p = simple_random_walk(g, dangling=args.dangling)
    elif args.kind == "bt":
        if not args.weights:
            raise UsageError("model bt requires --weights (node<TAB>w lines)")
        g = parse_edge_list(read_text(args.graph))
        w = parse_node_weights(read_text(args.weights), g)
        p = bradley_terry_chain(g, w, dangling=args.dangling)
    else:
        if not args.weights:
            raise UsageError("model pairwise requires --weights (src<TAB>dst<TAB>w lines)")
        hint = None
        if args.graph:
            hint = parse_edge_list(read_text(args.graph)).states.label_list()
        order, pairs = parse_pair_weights(read_text(args.weights), labels_hint=hint)
        states = StateSpace(len(order), tuple(order))
        comps = EdgeComparisons(states, tuple(sorted(pairs.items())), d=args.d)
        p = pairwise_comparison_chain(comps)
    sys.stdout.write(canonical_dumps(dump_matrix_json(p)))
    return 0


COMMANDS = {
    "classify": cmd_classify,
    "rank": cmd_rank,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "adjudicate": cmd_adjudicate,
    "model": cmd_model,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except InputFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except MATH_ERRORS as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ZnrankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
