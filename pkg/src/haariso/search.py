"""Individualization-refinement search: automorphism groups, canonical forms, isomorphisms.

Every node of the search tree is an ordered colouring refined to equitability.
Automorphisms are found by matching leaves against the first leaf, which also
yields a base and strong generating set; the canonical form is the least leaf
certificate under a key that records the refinement invariants on the way down.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from . import kernels
from .config import DEFAULT
from .errors import BudgetExhausted
from .perm import PermGroup, StabilizerChain, identity


class _Engine:
    def __init__(self, graph, colors=None, budget=None):
        self.graph = graph
        self.n = graph.n
        self.prep = graph.prepared
        self.budget = DEFAULT.backtrack_budget if budget is None else budget
        self.nodes = 0
        if colors is None:
            self.initial = [0] * self.n
        else:
            rank = {c: i for i, c in enumerate(sorted(set(colors)))}
            self.initial = [rank[c] for c in colors]

    def refine(self, colors):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted(f"search exceeded {self.budget} nodes")
        return kernels.refine(self.prep, colors)

    @staticmethod
    def target_cell(colors, k):
        cells = [[] for _ in range(k)]
        for v, c in enumerate(colors):
            cells[c].append(v)
        best = None
        for cell in cells:
            if len(cell) > 1 and (best is None or len(cell) < len(best)):
                best = cell
        return best

    @staticmethod
    def individualize(colors, v):
        c = colors[v]
        return [x + 1 if (x > c or (x == c and w != v)) else x for w, x in enumerate(colors)]

    @staticmethod
    def leaf_order(colors):
        order = [0] * len(colors)
        for v, c in enumerate(colors):
            order[c] = v
        return order

    def certificate(self, order):
        return kernels.certificate(self.prep, order)


def _orbit_ids(n, generators):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(n)]


def _fixes(g, points):
    return all(g[p] == p for p in points)


def _search(graph, colors=None, budget=None):
    """Generators, order and base of the colour-preserving automorphism group."""
    eng = _Engine(graph, colors, budget)
    n = eng.n
    if n == 0:
        return [], 1, []
    c, k, inv = eng.refine(eng.initial)
    path = [(k, inv)]
    states = [c]
    base, cells = [], []
    while k < n:
        cell = eng.target_cell(c, k)
        v = cell[0]
        base.append(v)
        cells.append(cell)
        c, k, inv = eng.refine(eng.individualize(c, v))
        path.append((k, inv))
        states.append(c)
    order0 = eng.leaf_order(c)
    cert0 = eng.certificate(order0)

    gens: list = []

    def dfs(colors_, depth, prefix):
        c_, k_, inv_ = eng.refine(colors_)
        if (k_, inv_) != path[depth]:
            return None
        if k_ == n:
            order = eng.leaf_order(c_)
            if eng.certificate(order) != cert0:
                return None
            p = [0] * n
            for a, b in zip(order0, order):
                p[a] = b
            return tuple(p)
        cell = eng.target_cell(c_, k_)
        usable = [g for g in gens if _fixes(g, prefix)]
        ids = _orbit_ids(n, usable) if usable else None
        failed = set()
        for y in cell:
            if ids is not None and ids[y] in failed:
                continue
            found = dfs(eng.individualize(c_, y), depth + 1, prefix + [y])
            if found is not None:
                return found
            failed.add(ids[y] if ids is not None else y)
        return None

    sizes = [1] * len(base)
    for level in reversed(range(len(base))):
        b = base[level]
        prefix = base[:level]
        for x in cells[level]:
            if x == b:
                continue
            level_gens = [g for g in gens if _fixes(g, prefix)]
            ids = _orbit_ids(n, level_gens)
            if ids[x] == ids[b]:
                continue
            found = dfs(eng.individualize(states[level], x), level + 1, prefix + [x])
            if found is not None:
                gens.append(found)
        ids = _orbit_ids(n, [g for g in gens if _fixes(g, prefix)])
        sizes[level] = sum(1 for x in range(n) if ids[x] == ids[b])
    return gens, math.prod(sizes), base


def automorphisms(graph, budget: Optional[int] = None, colors: Optional[Sequence[int]] = None,
                  enumerate_elements: bool = True, cap: Optional[int] = None) -> PermGroup:
    """The automorphism group, preserving ``colors`` when given.

    Elements are listed when ``enumerate_elements`` is set and the order is at
    most ``cap``; otherwise the group carries generators, order and base only.
    """
    gens, order, base = _search(graph, colors, budget)
    n = graph.n
    group = PermGroup(n, tuple(gens) or (identity(n),), None, order, tuple(base))
    cap = DEFAULT.aut_element_cap if cap is None else cap
    if enumerate_elements and order <= cap:
        group = group.with_elements(cap)
    return group


def canonical_labeling(graph, colors=None, budget=None, aut: Optional[PermGroup] = None):
    """``(certificate, order)`` where ``order[i]`` is the vertex placed at position i."""
    n = graph.n
    if n == 0:
        return kernels.certificate(graph.prepared, []), []
    if aut is None:
        gens, order_, base = _search(graph, colors, budget)
    else:
        gens, order_, base = [g for g in aut.generators if any(g[i] != i for i in range(n))], aut.size(), list(aut.base or ())
    eng = _Engine(graph, colors, budget)
    cache: dict = {}

    def stab_ids(prefix):
        key = tuple(prefix)
        if key not in cache:
            if not gens:
                cache[key] = None
            elif list(key) == base[: len(key)]:
                cache[key] = _orbit_ids(n, [g for g in gens if _fixes(g, key)])
            else:
                chain = StabilizerChain(n, gens, base_prefix=key, known_order=order_)
                cache[key] = _orbit_ids(n, chain.stabilizer_generators(len(key)))
        return cache[key]

    best = [None, None]  # key, order

    def dfs(colors_, prefix, key):
        c, k, inv = eng.refine(colors_)
        key = key + [(0, inv)]
        if best[0] is not None:
            head = best[0][: len(key)]
            if key > head:
                return
        if k == n:
            order = eng.leaf_order(c)
            full = key + [(1, eng.certificate(order))]
            if best[0] is None or full < best[0]:
                best[0], best[1] = full, order
            return
        cell = eng.target_cell(c, k)
        ids = stab_ids(prefix)
        seen = set()
        for y in cell:
            if ids is not None:
                if ids[y] in seen:
                    continue
                seen.add(ids[y])
            dfs(eng.individualize(c, y), prefix + [y], key)

    dfs(eng.initial, [], [])
    return best[0][-1][1], best[1]


def canonical_form(graph, budget: Optional[int] = None) -> bytes:
    """Bytes equal for two digraphs exactly when they are isomorphic."""
    return canonical_labeling(graph, budget=budget)[0]


def isomorphism(g1, g2, budget: Optional[int] = None):
    """A vertex bijection ``p`` with ``g1.relabel(p)`` having the arcs of ``g2``, or None."""
    if g1.n != g2.n or g1.arc_count != g2.arc_count:
        return None
    if sorted(zip(g1.out_degrees(), g1.in_degrees())) != sorted(zip(g2.out_degrees(), g2.in_degrees())):
        return None
    c1, o1 = canonical_labeling(g1, budget=budget)
    c2, o2 = canonical_labeling(g2, budget=budget)
    if c1 != c2:
        return None
    p = [0] * g1.n
    for a, b in zip(o1, o2):
        p[a] = b
    p = tuple(p)
    assert g1.is_isomorphism_to(g2, p)
    return p
