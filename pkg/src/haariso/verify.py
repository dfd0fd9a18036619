"""Property suites run by ``haariso verify``. Each returns a JSON-ready report."""

from __future__ import annotations

import time
from itertools import combinations

from .bci import is_abci_group, solving_set_check, prune_extension, abci_extension_from_solving_set
from .config import DEFAULT, Config
from .graph import automorphisms, cayley, haar, haar_set_of, is_connected, is_twin_free
from .groups import FiniteGroup, automorphism_group, make_abelian
from .haar_maps import iso_set, make_map, normalizer_of_GhatL, verify_normalizer
from .reduction import case4_evidence, classify, full_pipeline


def _report(name, checks, failures, started):
    return {
        "suite": name,
        "passed": not failures,
        "checks": checks,
        "failures": failures[:20],
        "seconds": round(time.perf_counter() - started, 3),
    }


def all_subsets(G: FiniteGroup):
    for k in range(G.order + 1):
        yield from combinations(G.elements, k)


def symmetric_subsets(G: FiniteGroup):
    pairs = sorted({tuple(sorted({x, G.inv(x)})) for x in G.elements})
    for k in range(len(pairs) + 1):
        for chosen in combinations(pairs, k):
            yield tuple(sorted(x for pair in chosen for x in pair))


def suite_normalizer(groups=((3,), (4,), (5,), (2, 2)), config: Config = DEFAULT) -> dict:
    started = time.perf_counter()
    checks, failures = [], []
    for factors in groups:
        G = make_abelian(list(factors))
        order = normalizer_of_GhatL(G).size()
        expected = 2 * len(automorphism_group(G)) * G.order ** 2
        same = verify_normalizer(G)
        checks.append({"group": G.name, "order": order, "formula": expected, "scan_matches": same})
        if not same or order != expected:
            failures.append(checks[-1])
    return _report("normalizer", checks, failures, started)


def reachable_by(G: FiniteGroup, S, maps) -> set:
    X = haar(G, S)
    out = set()
    for p in maps:
        T = haar_set_of(G, X.relabel(p))
        if T is not None:
            out.add(tuple(sorted(T)))
    return out


def suite_iso_sufficiency(groups=((3,), (4,), (5,), (2, 2)), config: Config = DEFAULT) -> dict:
    """Normalizer images of Haar graphs are already reached by Iso(G), and by the alpha_hat * bar(a) part."""
    started = time.perf_counter()
    checks, failures = [], []
    for factors in groups:
        G = make_abelian(list(factors))
        N = normalizer_of_GhatL(G).elements
        isos = iso_set(G)
        pairs = 0
        for S in all_subsets(G):
            by_normalizer = reachable_by(G, S, N)
            by_iso = {tuple(sorted(m.set_map()[s] for s in S)) for m in isos}
            by_translation = {tuple(sorted(m.set_map()[s] for s in S)) for m in isos if m.i == 0}
            pairs += len(by_normalizer)
            if not by_normalizer <= by_iso or not by_normalizer <= by_translation:
                failures.append({"group": G.name, "S": list(S),
                                 "missed": sorted(by_normalizer - by_translation)})
        checks.append({"group": G.name, "reached_pairs": pairs})
    return _report("iso-sufficiency", checks, failures, started)


def stability_check(A: FiniteGroup, S, budget=None):
    """``(holds, detail)``: twice the Cayley order, and the side-preserving part is the realized Cayley group."""
    n = A.order
    X = haar(A, S)
    C = cayley(A, S)
    full = automorphisms(X, budget, enumerate_elements=False).order
    cay = automorphisms(C, budget, enumerate_elements=False)
    sides = automorphisms(X, budget, colors=[0] * n + [1] * n, enumerate_elements=False)
    realized_ok = all(sides.chain.contains(make_map(A, "SigmaHat", g).realized) for g in cay.generators)
    same_half = all(
        tuple(g[:n]) == tuple(x - n for x in g[n:]) and C.is_automorphism(g[:n]) for g in sides.generators
    )
    holds = full == 2 * cay.order and sides.order == cay.order and realized_ok and same_half
    return holds, {"S": list(S), "aut_haar": full, "aut_cayley": cay.order, "side_preserving": sides.order}


def suite_stability(groups=((9,), (15,), (3, 3)), config: Config = DEFAULT) -> dict:
    started = time.perf_counter()
    checks, failures = [], []
    for factors in groups:
        A = make_abelian(list(factors))
        tested = 0
        for S in symmetric_subsets(A):
            C = cayley(A, S)
            if not is_connected(C) or not is_twin_free(C):
                continue
            tested += 1
            holds, detail = stability_check(A, S, config.backtrack_budget)
            if not holds:
                failures.append({"group": A.name, **detail})
        checks.append({"group": A.name, "connected_twin_free_symmetric_sets": tested})
    return _report("stability", checks, failures, started)


def suite_abci_zp(primes=(3, 5), config: Config = DEFAULT) -> dict:
    started = time.perf_counter()
    checks, failures = [], []
    for p in primes:
        report = is_abci_group(make_abelian([p]))
        checks.append({"group": f"Z{p}", "abci": report.verdict, **report.details})
        if not report.verdict:
            failures.append(report.to_json())
    return _report("abci-zp", checks, failures, started)


def pipeline_check(A: FiniteGroup, S, config: Config = DEFAULT) -> dict:
    """Pipeline solving set against the exhaustive universe, and the extension round trip."""
    trace = full_pipeline(A, S, config)
    row = {"S": list(S), "label": str(trace.label), "exceptional": trace.exceptional}
    if trace.extension is None:
        evidence = case4_evidence(A, S, config.backtrack_budget) if classify(A, S).kind == "Exceptional" else None
        trace = full_pipeline(A, S, config, fallback=True)
        row["case4"] = evidence
    ss = trace.solving_set()
    verdict = solving_set_check(A, S, ss, detail=True)
    ext = prune_extension(A, S, abci_extension_from_solving_set(ss))
    from .bci import is_abci_graph

    abci = is_abci_graph(A, S).verdict
    row.update({
        "solving_set_ok": verdict.ok,
        "abci": abci,
        "extension_trivial": ext.is_trivial(),
        "pipeline_extension_trivial": len(trace.extension) == 1,
    })
    row["ok"] = verdict.ok and abci == ext.is_trivial() == row["pipeline_extension_trivial"]
    return row


def suite_pipeline(groups=((6,), (8,), (9,), (2, 4)), config: Config = DEFAULT) -> dict:
    started = time.perf_counter()
    checks, failures = [], []
    for factors in groups:
        A = make_abelian(list(factors))
        counts = {"sets": 0, "exceptional": 0}
        for S in all_subsets(A):
            row = pipeline_check(A, S, config)
            counts["sets"] += 1
            counts["exceptional"] += row["exceptional"]
            if not row["ok"]:
                failures.append({"group": A.name, **row})
        checks.append({"group": A.name, **counts})
    return _report("pipeline", checks, failures, started)


SUITES = {
    "normalizer": suite_normalizer,
    "iso-sufficiency": suite_iso_sufficiency,
    "stability": suite_stability,
    "abci-zp": suite_abci_zp,
    "pipeline": suite_pipeline,
}
