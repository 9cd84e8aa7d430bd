"""Command-line front end.

Subcommands: ``gen`` (write an instance file), ``solve`` (run a solver on
an instance file), ``eval`` (score a given assortment), ``reduce`` (build
the independent-set reduction instance from a graph file) and ``bench``
(run a benchmark table from a config file).

Machine-readable JSON goes to stdout (or files); human-readable summaries
go to stderr, so output can be piped. Exit codes: 0 success, 1 usage or
input error, 2 solver limit reached.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import exact, experiments
from .core import (
    SolveResult,
    canonical_form,
    choosy_revenue,
    load_instance,
    markov_evaluate,
    mcst_evaluate,
    mcst_revenue,
    permute_members,
    save_instance,
    validate_instance,
)
from .generators import (
    GenSpec,
    gen_random,
    load_graph,
    reduce_independent_set,
)
from .poly_solvers import best_revenue_ordered, solve_homogeneous, solve_tree_dp


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _result_payload(res: SolveResult) -> dict:
    payload = {
        "assortment": list(res.assortment),
        "revenue": res.revenue,
        "plan": None if res.plan is None
        else {str(j): list(r) for j, r in sorted(res.plan.items())},
        "stats": {
            "method": res.stats.method,
            "status": res.stats.status,
            "nodes": res.stats.nodes,
            "lp_iterations": res.stats.lp_iterations,
            "incumbent_updates": res.stats.incumbent_updates,
            "wall_time": res.stats.wall_time,
            "gap": res.stats.gap,
        },
    }
    return payload


def _remap_result(res: SolveResult, perm: tuple[int, ...]) -> SolveResult:
    members = permute_members(res.assortment, perm)
    plan = None
    if res.plan is not None:
        plan = {perm[j - 1]: permute_members(r, perm)
                for j, r in res.plan.items()}
    return SolveResult(assortment=members, plan=plan, revenue=res.revenue,
                       stats=res.stats)


def cmd_gen(args) -> int:
    spec = GenSpec(n=args.n, revenue_dist=args.rev,
                   transition_kind=args.trans, seed=args.seed)
    inst = gen_random(spec)
    save_instance(inst, args.output)
    _info(f"wrote {args.trans}/{args.rev} instance with n={args.n} "
          f"(seed {args.seed}) to {args.output}")
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    report = validate_instance(inst)
    hard = [v for v in report.violations
            if not v.startswith("revenues are not sorted")]
    if hard:
        _info("invalid instance:")
        for v in hard:
            _info(f"  - {v}")
        return 1
    canon, perm = canonical_form(inst)

    if args.method == "exact":
        res = exact.solve_mcst_exact(canon, time_limit=args.time_limit,
                                     node_limit=args.node_limit)
    elif args.method == "ro":
        res, _cert = best_revenue_ordered(canon)
    elif args.method == "homogeneous":
        res = solve_homogeneous(canon)
    elif args.method == "tree":
        res = solve_tree_dp(canon)
    elif args.method == "markov":
        res = exact.solve_markov_optimal(canon)
    else:
        res = exact.solve_choosy_exact(canon, time_limit=args.time_limit,
                                       node_limit=args.node_limit)

    res = _remap_result(res, perm)
    _emit(_result_payload(res))
    if res.stats.status != "optimal":
        _info(f"solver stopped on {res.stats.status} with gap "
              f"{res.stats.gap:.3e}")
        return 2
    return 0


def cmd_eval(args) -> int:
    inst = load_instance(args.instance)
    try:
        members = tuple(int(tok) for tok in args.assortment.split(",") if tok)
    except ValueError as exc:
        raise UsageError(f"bad assortment list: {args.assortment}") from exc

    if args.model == "mcst":
        revenue, plan = mcst_revenue(inst, members)
        ev = mcst_evaluate(inst, members, plan)
        payload = {
            "model": "mcst",
            "revenue": revenue,
            "purchase_probs": ev.purchase_probs.tolist(),
            "plan": {str(j): list(r) for j, r in sorted(plan.items())},
        }
    elif args.model == "markov":
        ev = markov_evaluate(inst, members)
        payload = {
            "model": "markov",
            "revenue": ev.revenue,
            "purchase_probs": ev.purchase_probs.tolist(),
        }
    else:
        payload = {"model": "choosy",
                   "revenue": choosy_revenue(inst, members)}
    _emit(payload)
    return 0


def cmd_reduce(args) -> int:
    graph = load_graph(args.graph)
    result = reduce_independent_set(graph, args.k)
    save_instance(result.instance, args.output)
    _emit({
        "scale": result.scale,
        "threshold": result.threshold,
        "products": result.instance.n,
        "vertices": result.vertex_count,
        "edges": result.edge_count,
    })
    _info(f"wrote reduction instance ({result.instance.n} products) to "
          f"{args.output}; optimal revenue >= {result.threshold!r} iff an "
          f"independent set of size {args.k} exists")
    return 0


def cmd_bench(args) -> int:
    cfg = experiments.ExperimentConfig.from_json(args.config)
    report = experiments.run_table(cfg)
    rows_path, agg_path = report.write_csv(args.output)
    _emit({"rows": str(rows_path), "aggregates": str(agg_path)})
    _info(f"{report.table}: {len(report.rows)} rows, "
          f"{len(report.aggregates)} aggregate cells")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="mcst",
                     description="Assortment optimization under a "
                                 "single-transition choice model")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rev", choices=("uni", "exp"), default="uni")
    p.add_argument("--trans", choices=("den", "spa", "homog", "tree"),
                   default="den")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--method", required=True,
                   choices=("exact", "ro", "homogeneous", "tree", "markov",
                            "choosy"))
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--node-limit", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eval", help="evaluate an assortment")
    p.add_argument("instance")
    p.add_argument("--assortment", required=True,
                   help="comma-separated product indices, e.g. 1,3,4")
    p.add_argument("--model", choices=("mcst", "markov", "choosy"),
                   default="mcst")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reduce",
                       help="build the independent-set reduction instance")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="run a benchmark table")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _info(f"usage error: {exc}")
        return 1
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        _info(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
