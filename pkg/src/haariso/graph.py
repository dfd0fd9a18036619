"""Digraphs, Cayley digraphs, Haar graphs and the usual graph constructions.

An undirected edge is a symmetric pair of arcs. Haar graphs live on
``Z2 x G`` with vertex ``(i, g)`` coded as ``i*|G| + g``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import kernels
from .errors import InvalidSpecification, NotAGraph
from .groups import FiniteGroup


@dataclass(frozen=True, eq=False)
class Digraph:
    n: int
    out: tuple  # out[v] = frozenset of out-neighbours
    bipartition: Optional[tuple] = None

    def __post_init__(self):
        if len(self.out) != self.n:
            raise InvalidSpecification("one out-neighbour set per vertex required")
        for nbrs in self.out:
            if any(not 0 <= u < self.n for u in nbrs):
                raise InvalidSpecification("arc references a missing vertex")
        if self.bipartition is not None:
            b0, b1 = self.bipartition
            if b0 & b1 or len(b0) + len(b1) != self.n:
                raise InvalidSpecification("bipartition must partition the vertex set")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple], bipartition=None) -> "Digraph":
        out = [set() for _ in range(n)]
        for u, v in arcs:
            out[u].add(v)
        if bipartition is not None:
            bipartition = (frozenset(bipartition[0]), frozenset(bipartition[1]))
        return cls(n, tuple(frozenset(s) for s in out), bipartition)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], bipartition=None) -> "Digraph":
        arcs = []
        for u, v in edges:
            arcs += [(u, v), (v, u)]
        return cls.from_arcs(n, arcs, bipartition)

    @cached_property
    def inn(self) -> tuple:
        inn = [set() for _ in range(self.n)]
        for v, nbrs in enumerate(self.out):
            for u in nbrs:
                inn[u].add(v)
        return tuple(frozenset(s) for s in inn)

    @cached_property
    def arcs(self) -> frozenset:
        return frozenset((v, u) for v in range(self.n) for u in self.out[v])

    @property
    def arc_count(self) -> int:
        return sum(len(s) for s in self.out)

    @cached_property
    def key(self) -> tuple:
        """Hashable arc structure, ignoring the bipartition tag."""
        return (self.n, tuple(tuple(sorted(s)) for s in self.out))

    def same_arcs(self, other: "Digraph") -> bool:
        return self.n == other.n and self.out == other.out

    @cached_property
    def is_symmetric(self) -> bool:
        return all(v in self.out[u] for v in range(self.n) for u in self.out[v])

    def edges(self) -> list:
        """Unordered edges ``(u, v)`` with ``u <= v`` (requires a symmetric digraph)."""
        return sorted((v, u) for v in range(self.n) for u in self.out[v] if v <= u)

    def out_degrees(self) -> list:
        return [len(s) for s in self.out]

    def in_degrees(self) -> list:
        return [len(s) for s in self.inn]

    def relabel(self, p: Sequence[int]) -> "Digraph":
        """``p(self)``: the digraph with arcs ``(p[u], p[v])``."""
        out = [None] * self.n
        for v in range(self.n):
            out[p[v]] = frozenset(p[u] for u in self.out[v])
        bip = None
        if self.bipartition is not None:
            bip = tuple(frozenset(p[x] for x in part) for part in self.bipartition)
        return Digraph(self.n, tuple(out), bip)

    def is_automorphism(self, p: Sequence[int]) -> bool:
        return all(frozenset(p[u] for u in self.out[v]) == self.out[p[v]] for v in range(self.n))

    def is_isomorphism_to(self, other: "Digraph", p: Sequence[int]) -> bool:
        if other.n != self.n:
            return False
        return all(frozenset(p[u] for u in self.out[v]) == other.out[p[v]] for v in range(self.n))

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        """Induced subdigraph, vertices renumbered in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        out = tuple(frozenset(index[u] for u in self.out[v] if u in index) for v in vertices)
        return Digraph(len(vertices), out)

    @cached_property
    def prepared(self):
        return kernels.prepare(self.n, [sorted(s) for s in self.out], [sorted(s) for s in self.inn])

    def to_json(self) -> dict:
        data = {"n": self.n, "adjacency": [sorted(s) for s in self.out]}
        if self.bipartition is not None:
            data["bipartition"] = [sorted(b) for b in self.bipartition]
        return data

    def to_dot(self, labels: Optional[Sequence[str]] = None, name: str = "G") -> str:
        labels = labels or [str(v) for v in range(self.n)]
        directed = not self.is_symmetric
        lines = [f"{'digraph' if directed else 'graph'} {name} {{"]
        if self.bipartition is not None:
            for rank, part in zip(("B0", "B1"), self.bipartition):
                members = " ".join(f"v{v}" for v in sorted(part))
                lines.append(f"  subgraph {rank} {{ rank=same; {members} }}")
        for v in range(self.n):
            lines.append(f'  v{v} [label="{labels[v]}"];')
        if directed:
            for v, u in sorted(self.arcs):
                lines.append(f"  v{v} -> v{u};")
        else:
            for v, u in self.edges():
                lines.append(f"  v{v} -- v{u};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={self.arc_count})"


# ------------------------------------------------------------ Haar coding


def encode(i: int, g: int, order: int) -> int:
    return (i % 2) * order + g


def decode(v: int, order: int) -> tuple:
    return divmod(v, order)


# ----------------------------------------------------------- constructors


def cayley(G: FiniteGroup, S: Iterable[int]) -> Digraph:
    """Arcs ``g -> g*s`` for ``s`` in S."""
    S = sorted(set(S))
    out = tuple(frozenset(G.table[g][s] for s in S) for g in G.elements)
    return Digraph(G.order, out)


def haar(G: FiniteGroup, S: Iterable[int]) -> Digraph:
    """Bipartite graph on ``Z2 x G`` with edges ``(0,g) -- (1,g*s)``."""
    S = sorted(set(S))
    n = G.order
    out = [set() for _ in range(2 * n)]
    for g in G.elements:
        for s in S:
            h = G.table[g][s]
            out[g].add(n + h)
            out[n + h].add(g)
    bip = (frozenset(range(n)), frozenset(range(n, 2 * n)))
    return Digraph(2 * n, tuple(frozenset(x) for x in out), bip)


def haar_set_of(G: FiniteGroup, graph: Digraph):
    """The T with ``graph == haar(G, T)``, or None if it is not a Haar graph of G."""
    n = G.order
    if graph.n != 2 * n:
        return None
    nbrs = graph.out[G.identity]
    if any(u < n for u in nbrs):
        return None
    T = frozenset(u - n for u in nbrs)
    for x in range(n):
        if graph.out[x] != frozenset(n + G.table[x][t] for t in T):
            return None
    inv = G.inverses
    for y in range(n):
        if any(u >= n or G.table[inv[u]][y] not in T for u in graph.out[n + y]):
            return None
    return T


def empty_graph(m: int) -> Digraph:
    """The edgeless graph on m vertices."""
    return Digraph(m, tuple(frozenset() for _ in range(m)))


def complete_graph(m: int) -> Digraph:
    return Digraph(m, tuple(frozenset(set(range(m)) - {v}) for v in range(m)))


def complete_bipartite(m: int, k: Optional[int] = None) -> Digraph:
    k = m if k is None else k
    edges = [(u, m + v) for u in range(m) for v in range(k)]
    return Digraph.from_edges(m + k, edges, (range(m), range(m, m + k)))


def cycle_graph(m: int) -> Digraph:
    return Digraph.from_edges(m, [(v, (v + 1) % m) for v in range(m)])


def directed_cycle(m: int) -> Digraph:
    return Digraph.from_arcs(m, [(v, (v + 1) % m) for v in range(m)])


def disjoint_union(*graphs: Digraph) -> Digraph:
    arcs, offset = [], 0
    for g in graphs:
        arcs += [(offset + v, offset + u) for v, u in g.arcs]
        offset += g.n
    return Digraph.from_arcs(offset, arcs)


def wreath(outer: Digraph, inner: Digraph) -> Digraph:
    """``outer wr inner`` on ``V(outer) x V(inner)``, vertex ``(u, v)`` coded ``u*|inner| + v``.

    ``(u,v) -> (u',v')`` is an arc when ``u -> u'`` is, or ``u == u'`` and ``v -> v'``.
    """
    m = inner.n
    arcs = []
    for u in range(outer.n):
        for u2 in outer.out[u]:
            arcs += [(u * m + v, u2 * m + v2) for v in range(m) for v2 in range(m)]
        arcs += [(u * m + v, u * m + v2) for v, v2 in inner.arcs]
    return Digraph.from_arcs(outer.n * m, arcs)


def double_cover(graph: Digraph) -> Digraph:
    """Canonical double cover: ``(0,v) -- (1,w)`` for every edge ``vw`` (loops included)."""
    if not graph.is_symmetric:
        raise NotAGraph("canonical double cover needs an undirected graph")
    n = graph.n
    edges = [(v, n + u) for v, u in graph.arcs]
    g = Digraph.from_edges(2 * n, edges, (range(n), range(n, 2 * n)))
    return g


def block_quotient(graph: Digraph, partition: Sequence[Iterable[int]]) -> Digraph:
    """Parts become vertices; ``B -> B'`` when ``B != B'`` and some arc crosses."""
    parts = [sorted(p) for p in partition]
    part_of = [-1] * graph.n
    for i, p in enumerate(parts):
        for v in p:
            part_of[v] = i
    if -1 in part_of or sum(map(len, parts)) != graph.n:
        raise InvalidSpecification("partition must cover every vertex exactly once")
    arcs = {(part_of[v], part_of[u]) for v, u in graph.arcs if part_of[v] != part_of[u]}
    return Digraph.from_arcs(len(parts), arcs)


def components(graph: Digraph) -> list:
    """Weakly connected components, each a sorted tuple, ordered by least vertex."""
    seen = [False] * graph.n
    comps = []
    for s in range(graph.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], [s]
        while stack:
            v = stack.pop()
            for u in graph.out[v] | graph.inn[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
                    comp.append(u)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(graph: Digraph) -> bool:
    return len(components(graph)) <= 1


def twin_classes(graph: Digraph) -> list:
    """Classes of vertices with the same out- and in-neighbour sets.

    Neighbour sets are taken literally, so a loop at ``v`` puts ``v`` in its
    own neighbourhood. For loopless graphs these are the open neighbourhoods.
    """
    classes: dict = {}
    for v in range(graph.n):
        classes.setdefault((graph.out[v], graph.inn[v]), []).append(v)
    return sorted((tuple(c) for c in classes.values()), key=lambda c: c[0])


def is_twin_free(graph: Digraph) -> bool:
    return all(len(c) == 1 for c in twin_classes(graph))


def graph_from_json(data) -> Digraph:
    if isinstance(data, str):
        data = json.loads(data)
    adjacency = data["adjacency"]
    n = int(data.get("n", len(adjacency)))
    arcs = [(v, int(u)) for v, nbrs in enumerate(adjacency) for u in nbrs]
    return Digraph.from_arcs(n, arcs, data.get("bipartition"))


from .search import automorphisms, canonical_form, canonical_labeling, isomorphism  # noqa: E402,F401
