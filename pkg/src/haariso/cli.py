"""``haariso`` command line: JSON on stdout, exit 0 on success, 1 on a failed property, 2 on usage or bounds."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import graph as gr
from .bci import is_abci_graph, is_abci_group, solving_set_check
from .config import Config
from .errors import BudgetExhausted, HaarisoError, InvalidSpecification
from .groups import automorphism_group, parse_group, subgroups_of_order
from .haar_maps import iso_orbits
from .reduction import case4_evidence, classify, full_pipeline
from .verify import SUITES, symmetric_subsets


class UsageError(Exception):
    pass


def _emit(data) -> None:
    json.dump(data, sys.stdout, sort_keys=False)
    sys.stdout.write("\n")


def _config(args) -> Config:
    return Config.from_env(
        group_bound=getattr(args, "group_bound", None),
        backtrack_budget=getattr(args, "budget", None),
        seed=getattr(args, "seed", None),
        aut_element_cap=getattr(args, "aut_cap", None),
        subset_enum_bound=getattr(args, "subset_bound", None),
    )


def _group(args):
    G = parse_group(args.group)
    if G.order > args.config.group_bound:
        raise BudgetExhausted(f"|G| = {G.order} exceeds the group bound {args.config.group_bound}")
    return G


def _set(G, text):
    return tuple(sorted(G.parse_set(text or "")))


def _write_dot(path, graph, name="G"):
    if path:
        Path(path).write_text(graph.to_dot(name=name))


# ----------------------------------------------------------------- group


def cmd_group(args) -> int:
    G = _group(args)
    if args.action == "info":
        _emit({
            "group": G.descriptor(),
            "name": G.name,
            "order": G.order,
            "abelian": G.is_abelian,
            "invariant_factors": list(G.abelian_factors or []),
            "labels": list(G.labels),
        })
    elif args.action == "aut":
        auts = automorphism_group(G, args.config.group_bound)
        _emit({"group": G.name, "order": len(auts), "automorphisms": [list(a) for a in auts]})
    else:
        if args.order is None:
            raise UsageError("group subgroups needs --order")
        subs = subgroups_of_order(G, args.order, args.config.group_bound)
        _emit({"group": G.name, "order": args.order, "subgroups": [G.format_set(H.members) for H in subs]})
    return 0


# ----------------------------------------------------------------- graph


def _build(G, S, kind):
    return gr.cayley(G, S) if kind == "cayley" else gr.haar(G, S)


def cmd_graph(args) -> int:
    G = _group(args)
    kind = "cayley" if args.cayley else "haar"
    S = _set(G, args.set)
    X = _build(G, S, kind)
    budget = args.config.backtrack_budget
    if args.action == "build":
        _write_dot(args.dot, X)
        _emit({"kind": kind, "group": G.name, "S": G.format_set(S), **X.to_json()})
    elif args.action == "aut":
        A = gr.automorphisms(X, budget, enumerate_elements=False)
        _emit({"kind": kind, "group": G.name, "S": G.format_set(S), **A.to_json()})
    else:
        if args.other is None:
            raise UsageError("graph iso needs --other")
        T = _set(G, args.other)
        Y = _build(G, T, kind)
        p = gr.isomorphism(X, Y, budget)
        _emit({"kind": kind, "S": G.format_set(S), "T": G.format_set(T), "isomorphic": p is not None,
               "isomorphism": list(p) if p is not None else None})
    return 0


# ------------------------------------------------------------------- bci


def cmd_bci(args) -> int:
    G = _group(args)
    bound = args.config.subset_enum_bound
    if args.action == "graph":
        report = is_abci_graph(G, _set(G, args.set), bound=bound)
    else:
        report = is_abci_group(G, bound=bound)
    _emit(report.to_json())
    return 0


# ---------------------------------------------------------------- reduce


def cmd_reduce(args) -> int:
    G = _group(args)
    S = _set(G, args.set)
    trace = full_pipeline(G, S, args.config, fallback=args.fallback)
    data = trace.to_json(include_maps=False)
    status = 0
    if args.verify_universe and trace.extension is not None:
        verdict = solving_set_check(G, S, trace.solving_set(), detail=True)
        data["universe_check"] = {
            "ok": verdict.ok,
            "contains_iso": verdict.contains_iso,
            "base_condition": verdict.base_condition,
            "covers_universe": verdict.covers_universe,
            "missing": [G.format_set(T) for T in verdict.missing],
        }
        status = 0 if verdict.ok else 1
    if args.trace_json:
        Path(args.trace_json).write_text(json.dumps(trace.to_json(include_maps=True), indent=1))
    _emit(data)
    return status


# ---------------------------------------------------------------- census


def census_row(job) -> dict:
    """One census row for an Iso(G)-orbit representative."""
    G_text, S, orbit_size, config = job
    G = parse_group(G_text)
    budget = config.backtrack_budget
    label = classify(G, S, budget)
    row = {
        "group": G.descriptor(),
        "S": G.format_set(S),
        "orbit_size": orbit_size,
        "case": str(label),
        "degenerate": not S,
        "aut_haar": gr.automorphisms(gr.haar(G, S), budget, enumerate_elements=False).order,
        "aut_cayley": gr.automorphisms(gr.cayley(G, S), budget, enumerate_elements=False).order,
    }
    report = is_abci_graph(G, S, bound=config.subset_enum_bound)
    row["abci"] = report.verdict
    witnesses = {}
    if label.a is not None:
        witnesses["a"] = label.a
    if report.witness is not None:
        witnesses["T"] = report.witness["T"]
    if label.kind == "Exceptional" and S:
        evidence = case4_evidence(G, S, budget)
        witnesses["case4"] = evidence
        row["case4_confirmed"] = (
            evidence["connected"] and evidence["twin_free"] and evidence["stable_shift"] is None
        )
    row["witnesses"] = witnesses
    return row


def census_jobs(G, G_text, config, symmetric=False):
    orbits = iso_orbits(G, bound=config.subset_enum_bound)
    if symmetric:
        wanted = set(symmetric_subsets(G))
        jobs = []
        for _rep, members in orbits:
            sym = [m for m in members if m in wanted]
            if sym:
                jobs.append((G_text, sym[0], len(members), config))
        return jobs
    return [(G_text, rep, len(members), config) for rep, members in orbits]


def cmd_census(args) -> int:
    G = _group(args)
    config = args.config
    if G.order > config.subset_enum_bound:
        raise BudgetExhausted(f"|G| = {G.order} exceeds the subset enumeration bound {config.subset_enum_bound}")
    jobs = census_jobs(G, args.group, config, args.symmetric)
    workers = args.workers or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = pool.map(census_row, jobs, chunksize=4)
            for row in rows:
                _emit(row)
    else:
        for job in jobs:
            _emit(census_row(job))
    if args.dot_dir:
        out = Path(args.dot_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, (_, S, _, _) in enumerate(jobs):
            _write_dot(out / f"row{i:04d}.dot", gr.haar(G, S), name=f"row{i}")
    return 0


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    suite = SUITES.get(args.suite)
    if suite is None:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    report = suite(config=args.config)
    _emit(report)
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--group-bound", type=int, help="largest group handled by brute force")
    common.add_argument("--budget", type=int, help="search node budget")
    common.add_argument("--seed", type=int, help="seed for sampled universes")
    common.add_argument("--aut-cap", type=int, help="largest automorphism group listed element by element")
    common.add_argument("--subset-bound", type=int, help="largest group whose subsets are enumerated")

    parser = argparse.ArgumentParser(prog="haariso", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="group information")
    p.add_argument("action", choices=["info", "aut", "subgroups"])
    p.add_argument("--group", required=True, help='e.g. Z9, Z2xZ4, 2,4 or a JSON descriptor')
    p.add_argument("--order", type=int)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("graph", parents=[common], help="build and compare Haar graphs and Cayley digraphs")
    p.add_argument("action", choices=["build", "aut", "iso"])
    p.add_argument("--group", required=True)
    p.add_argument("--set", default="", help='connection set, e.g. "0,1,4" or "(1,0) (0,2)"')
    p.add_argument("--other", help="second connection set for iso")
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--haar", action="store_true", help="Haar graph (default)")
    kind.add_argument("--cayley", action="store_true", help="Cayley digraph")
    p.add_argument("--dot", help="write DOT to this path")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("bci", parents=[common], help="ABCI verdicts")
    p.add_argument("action", choices=["graph", "group"])
    p.add_argument("--group", required=True)
    p.add_argument("--set", default="")
    p.set_defaults(func=cmd_bci)

    p = sub.add_parser("reduce", parents=[common], help="run the reduction pipeline")
    p.add_argument("--group", required=True)
    p.add_argument("--set", default="")
    p.add_argument("--trace-json", help="write the full trace, maps included, to this path")
    p.add_argument("--verify-universe", action="store_true", help="check the solving set against every isomorphic T")
    p.add_argument("--fallback", action="store_true", help="solve exceptional sub-problems by direct search")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("census", parents=[common], help="one JSON line per Iso(G)-orbit of connection sets")
    p.add_argument("--group", required=True)
    p.add_argument("--symmetric", action="store_true", help="only orbits containing a set with S = -S")
    p.add_argument("--workers", type=int, default=int(os.environ.get("HAARISO_WORKERS", "1")))
    p.add_argument("--dot-dir", help="write one DOT file per row into this directory")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("suite", help=", ".join(SUITES))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        args.config = _config(args)
        return args.func(args)
    except UsageError as exc:
        print(f"haariso: {exc}", file=sys.stderr)
        return 2
    except (BudgetExhausted, InvalidSpecification, ValueError) as exc:
        print(f"haariso: {exc}", file=sys.stderr)
        return 2
    except HaarisoError as exc:
        print(f"haariso: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
