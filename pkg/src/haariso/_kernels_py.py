"""Pure-Python versions of the search kernels.

These mirror ``_kernels.pyx`` exactly (same colours, same invariant hashes,
same certificates) and are used when the compiled module is unavailable or
``HAARISO_PURE_PYTHON`` is set.
"""

from itertools import islice, permutations

import numpy as np

_MASK = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


class PreparedGraph:
    """Adjacency lists in the layout the kernels expect."""

    __slots__ = ("n", "out", "inn")

    def __init__(self, n, out_lists, in_lists):
        self.n = n
        self.out = [list(x) for x in out_lists]
        self.inn = [list(x) for x in in_lists]


def prepare(n, out_lists, in_lists):
    return PreparedGraph(n, out_lists, in_lists)


def _mix(h, value):
    return ((h ^ (value & _MASK)) * _FNV_PRIME) & _MASK


def refine(graph, colors):
    """Refine a colouring to the coarsest equitable one below it.

    ``colors`` must use the dense ranks ``0..k-1``. Each round splits every
    cell by the number of out- and in-neighbours in every cell, ordering the
    new cells by that count vector, so the result depends only on the
    isomorphism type of (graph, colouring). Returns the new colouring, the
    number of cells and a 64-bit hash of the whole refinement trace.
    """
    n = graph.n
    colors = list(colors)
    k = max(colors) + 1 if n else 0
    h = _FNV_OFFSET
    out, inn = graph.out, graph.inn
    while True:
        keys = []
        for v in range(n):
            row = [0] * (2 * k + 1)
            row[0] = colors[v]
            for u in out[v]:
                row[1 + colors[u]] += 1
            for u in inn[v]:
                row[1 + k + colors[u]] += 1
            keys.append(tuple(row))
        mult = {}
        for key in keys:
            mult[key] = mult.get(key, 0) + 1
        distinct = sorted(mult)
        h = _mix(h, len(distinct))
        for key in distinct:
            for x in key:
                h = _mix(h, x)
            h = _mix(h, mult[key])
        rank = {key: i for i, key in enumerate(distinct)}
        new = [rank[key] for key in keys]
        if len(distinct) == k:
            return new, k, h
        colors, k = new, len(distinct)


def certificate(graph, order):
    """Adjacency matrix of the graph relabelled by ``order`` (position -> vertex), bit-packed."""
    n = graph.n
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    bits = bytearray((n * n + 7) // 8)
    for v in range(n):
        base = pos[v] * n
        for u in graph.out[v]:
            idx = base + pos[u]
            bits[idx >> 3] |= 1 << (idx & 7)
    return n.to_bytes(2, "little") + bytes(bits)


def normalizing_permutations(n, elements, generators, chunk=1 << 16):
    """Every permutation of ``range(n)`` normalizing the group ``elements``.

    The group must act with trivial stabilizer at point 0, so that an element
    is identified by the image of 0. Scans all ``n!`` permutations in
    lexicographic order, vectorised over chunks.
    """
    elem = np.asarray(elements, dtype=np.int64).reshape(len(elements), n)
    lookup = np.full(n, -1, dtype=np.int64)
    for i, e in enumerate(elements):
        lookup[e[0]] = i
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    found = []
    stream = permutations(range(n))
    while True:
        block = list(islice(stream, chunk))
        if not block:
            break
        perms = np.array(block, dtype=np.int64)
        inverse = np.argsort(perms, axis=1)
        ok = np.ones(len(perms), dtype=bool)
        for h in gens:
            conj = np.take_along_axis(perms, h[inverse], axis=1)
            idx = lookup[conj[:, 0]]
            hit = idx >= 0
            match = np.zeros(len(perms), dtype=bool)
            match[hit] = (elem[idx[hit]] == conj[hit]).all(axis=1)
            ok &= match
        found.extend(tuple(p) for p in perms[ok].tolist())
    return found
