# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels: colour refinement, leaf certificates and the
symmetric-group normalizer scan. Semantics match ``_kernels_py`` bit for bit."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset, memcpy
from libc.stdint cimport uint64_t

cdef uint64_t FNV_OFFSET = 0xCBF29CE484222325ULL
cdef uint64_t FNV_PRIME = 0x100000001B3ULL


cdef inline uint64_t mix(uint64_t h, uint64_t v) nogil:
    return (h ^ v) * FNV_PRIME


cdef class PreparedGraph:
    cdef public int n
    cdef int *out_ptr
    cdef int *out_idx
    cdef int *in_ptr
    cdef int *in_idx

    def __cinit__(self, int n, out_lists, in_lists):
        cdef int v, i, pos
        self.n = n
        self.out_ptr = <int *>malloc((n + 1) * sizeof(int))
        self.in_ptr = <int *>malloc((n + 1) * sizeof(int))
        m_out = sum(len(x) for x in out_lists)
        m_in = sum(len(x) for x in in_lists)
        self.out_idx = <int *>malloc((m_out + 1) * sizeof(int))
        self.in_idx = <int *>malloc((m_in + 1) * sizeof(int))
        pos = 0
        for v in range(n):
            self.out_ptr[v] = pos
            for u in out_lists[v]:
                self.out_idx[pos] = u
                pos += 1
        self.out_ptr[n] = pos
        pos = 0
        for v in range(n):
            self.in_ptr[v] = pos
            for u in in_lists[v]:
                self.in_idx[pos] = u
                pos += 1
        self.in_ptr[n] = pos

    def __dealloc__(self):
        free(self.out_ptr)
        free(self.out_idx)
        free(self.in_ptr)
        free(self.in_idx)


def prepare(n, out_lists, in_lists):
    return PreparedGraph(n, out_lists, in_lists)


cdef inline int row_cmp(int *keys, int a, int b, int width) nogil:
    cdef int i
    cdef int *ra = keys + a * width
    cdef int *rb = keys + b * width
    for i in range(width):
        if ra[i] != rb[i]:
            return -1 if ra[i] < rb[i] else 1
    return 0


cdef void merge_sort(int *idx, int *tmp, int n, int *keys, int width) nogil:
    cdef int size = 1, lo, mid, hi, i, j, k
    while size < n:
        lo = 0
        while lo < n:
            mid = lo + size
            if mid > n:
                mid = n
            hi = lo + 2 * size
            if hi > n:
                hi = n
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if row_cmp(keys, idx[j], idx[i], width) < 0:
                    tmp[k] = idx[j]
                    j += 1
                else:
                    tmp[k] = idx[i]
                    i += 1
                k += 1
            while i < mid:
                tmp[k] = idx[i]
                i += 1
                k += 1
            while j < hi:
                tmp[k] = idx[j]
                j += 1
                k += 1
            lo = hi
        memcpy(idx, tmp, n * sizeof(int))
        size *= 2


def refine(PreparedGraph graph, colors):
    cdef int n = graph.n
    cdef int v, u, p, k, width, i, j, distinct, run
    cdef uint64_t h = FNV_OFFSET
    cdef int *col = <int *>malloc((n + 1) * sizeof(int))
    cdef int *newcol = <int *>malloc((n + 1) * sizeof(int))
    cdef int *idx = <int *>malloc((n + 1) * sizeof(int))
    cdef int *tmp = <int *>malloc((n + 1) * sizeof(int))
    cdef int *keys = NULL
    cdef int *row
    k = 0
    for v in range(n):
        col[v] = colors[v]
        if col[v] + 1 > k:
            k = col[v] + 1
    try:
        while True:
            width = 2 * k + 1
            free(keys)
            keys = <int *>malloc((n * width + 1) * sizeof(int))
            memset(keys, 0, (n * width + 1) * sizeof(int))
            for v in range(n):
                row = keys + v * width
                row[0] = col[v]
                for p in range(graph.out_ptr[v], graph.out_ptr[v + 1]):
                    row[1 + col[graph.out_idx[p]]] += 1
                for p in range(graph.in_ptr[v], graph.in_ptr[v + 1]):
                    row[1 + k + col[graph.in_idx[p]]] += 1
                idx[v] = v
            merge_sort(idx, tmp, n, keys, width)
            distinct = 0
            for i in range(n):
                if i == 0 or row_cmp(keys, idx[i - 1], idx[i], width) != 0:
                    distinct += 1
            h = mix(h, <uint64_t>distinct)
            i = 0
            distinct = 0
            while i < n:
                j = i
                while j < n and row_cmp(keys, idx[i], idx[j], width) == 0:
                    newcol[idx[j]] = distinct
                    j += 1
                row = keys + idx[i] * width
                for p in range(width):
                    h = mix(h, <uint64_t>row[p])
                h = mix(h, <uint64_t>(j - i))
                distinct += 1
                i = j
            if distinct == k:
                return [newcol[v] for v in range(n)], k, h
            for v in range(n):
                col[v] = newcol[v]
            k = distinct
    finally:
        free(col)
        free(newcol)
        free(idx)
        free(tmp)
        free(keys)


def certificate(PreparedGraph graph, order):
    cdef int n = graph.n
    cdef int i, v, p, base, at
    cdef int *pos = <int *>malloc((n + 1) * sizeof(int))
    cdef int nbytes = (n * n + 7) // 8
    cdef bytearray bits = bytearray(nbytes)
    cdef unsigned char *buf = bits
    for i in range(n):
        pos[<int>order[i]] = i
    for v in range(n):
        base = pos[v] * n
        for p in range(graph.out_ptr[v], graph.out_ptr[v + 1]):
            at = base + pos[graph.out_idx[p]]
            buf[at >> 3] |= <unsigned char>(1 << (at & 7))
    free(pos)
    return n.to_bytes(2, "little") + bytes(bits)


def normalizing_permutations(int n, elements, generators):
    cdef int m = len(elements)
    cdef int r = len(generators)
    cdef int i, j, y, t, idx, ok
    cdef int *elem = <int *>malloc((m * n + 1) * sizeof(int))
    cdef int *gens = <int *>malloc((r * n + 1) * sizeof(int))
    cdef int *lookup = <int *>malloc((n + 1) * sizeof(int))
    cdef int *p = <int *>malloc((n + 1) * sizeof(int))
    cdef int *pinv = <int *>malloc((n + 1) * sizeof(int))
    cdef int *conj = <int *>malloc((n + 1) * sizeof(int))
    cdef int *h
    found = []
    try:
        for i in range(n):
            lookup[i] = -1
            p[i] = i
        for i in range(m):
            for j in range(n):
                elem[i * n + j] = elements[i][j]
            lookup[elem[i * n]] = i
        for i in range(r):
            for j in range(n):
                gens[i * n + j] = generators[i][j]
        while True:
            for i in range(n):
                pinv[p[i]] = i
            ok = 1
            for i in range(r):
                h = gens + i * n
                for y in range(n):
                    conj[y] = p[h[pinv[y]]]
                idx = lookup[conj[0]]
                if idx < 0:
                    ok = 0
                    break
                for y in range(n):
                    if elem[idx * n + y] != conj[y]:
                        ok = 0
                        break
                if not ok:
                    break
            if ok:
                found.append(tuple([p[y] for y in range(n)]))
            # advance to the next permutation in lexicographic order
            i = n - 2
            while i >= 0 and p[i] > p[i + 1]:
                i -= 1
            if i < 0:
                break
            j = n - 1
            while p[j] < p[i]:
                j -= 1
            t = p[i]
            p[i] = p[j]
            p[j] = t
            i += 1
            j = n - 1
            while i < j:
                t = p[i]
                p[i] = p[j]
                p[j] = t
                i += 1
                j -= 1
        return found
    finally:
        free(elem)
        free(gens)
        free(lookup)
        free(p)
        free(pinv)
        free(conj)
