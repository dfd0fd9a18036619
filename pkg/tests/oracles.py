"""Brute-force references that share no code with the search engine.

Everything here works from adjacency sets and plain permutations, so a bug
in refinement, certificates or the pruning logic cannot leak into both sides.
"""

from itertools import combinations, permutations


def adjacency(n, arcs):
    out = [set() for _ in range(n)]
    for u, v in arcs:
        out[u].add(v)
    return out


def cyclic_table(n):
    return [[(x + y) % n for y in range(n)] for x in range(n)]


def product_table(*orders):
    """Cayley table of Z_m1 x ... x Z_mk, first factor most significant."""
    elems = [()]
    for m in orders:
        elems = [e + (i,) for e in elems for i in range(m)]
    index = {e: i for i, e in enumerate(elems)}
    return [[index[tuple((a + b) % m for a, b, m in zip(x, y, orders))] for y in elems] for x in elems]


def haar_arcs(table, S):
    n = len(table)
    arcs = []
    for g in range(n):
        for s in S:
            h = table[g][s]
            arcs.append((g, n + h))
            arcs.append((n + h, g))
    return arcs


def cayley_arcs(table, S):
    return [(g, table[g][s]) for g in range(len(table)) for s in S]


def _extend(out_a, inn_a, out_b, inn_b, n, fixed=None):
    """All bijections p with p(out_a) = out_b, assigned vertex by vertex."""
    degs_a = [(len(out_a[v]), len(inn_a[v])) for v in range(n)]
    degs_b = [(len(out_b[v]), len(inn_b[v])) for v in range(n)]
    images = [-1] * n
    used = [False] * n
    if fixed:
        for u, v in fixed.items():
            images[u] = v
            used[v] = True
    free = [v for v in range(n) if images[v] < 0]

    def ok(u, w):
        if degs_a[u] != degs_b[w]:
            return False
        if (u in out_a[u]) != (w in out_b[w]):
            return False
        for x in range(n):
            y = images[x]
            if y < 0 or x == u:
                continue
            if (x in out_a[u]) != (y in out_b[w]) or (u in out_a[x]) != (w in out_b[y]):
                return False
        return True

    def rec(i):
        if i == len(free):
            yield tuple(images)
            return
        u = free[i]
        for w in range(n):
            if not used[w] and ok(u, w):
                images[u] = w
                used[w] = True
                yield from rec(i + 1)
                images[u] = -1
                used[w] = False

    yield from rec(0)


def _inn(out):
    inn = [set() for _ in out]
    for u, vs in enumerate(out):
        for v in vs:
            inn[v].add(u)
    return inn


def automorphism_count(n, arcs, colors=None):
    out = adjacency(n, arcs)
    inn = _inn(out)
    count = 0
    for p in _extend(out, inn, out, inn, n):
        if colors is None or all(colors[v] == colors[p[v]] for v in range(n)):
            count += 1
    return count


def find_isomorphism(n, arcs_a, arcs_b, fixed=None):
    out_a, out_b = adjacency(n, arcs_a), adjacency(n, arcs_b)
    for p in _extend(out_a, _inn(out_a), out_b, _inn(out_b), n, fixed):
        return p
    return None


def haar_isomorphic(table, S, T):
    # Haar graphs of abelian groups are vertex-transitive, so vertex 0 may be pinned.
    return find_isomorphism(2 * len(table), haar_arcs(table, S), haar_arcs(table, T), {0: 0}) is not None


def group_automorphisms(table):
    n = len(table)
    return [p for p in permutations(range(n))
            if all(p[table[x][y]] == table[p[x]][p[y]] for x in range(n) for y in range(n))]


def inverse_of(table, x):
    return next(y for y in range(len(table)) if table[x][y] == 0)


def iso_set_maps(table):
    """Set maps of tau^i alpha_hat g_bar on connection sets: x -> alpha(x - g), inverted when i = 1."""
    n = len(table)
    maps = set()
    for alpha in group_automorphisms(table):
        for g in range(n):
            g_inv = inverse_of(table, g)
            m = tuple(alpha[table[x][g_inv]] for x in range(n))
            maps.add(m)
            maps.add(tuple(inverse_of(table, m[x]) for x in range(n)))
    return maps


def iso_reachable(table, S):
    return {tuple(sorted(m[s] for s in S)) for m in iso_set_maps(table)}


def haar_universe(table, S):
    n = len(table)
    return {T for T in combinations(range(n), len(S)) if haar_isomorphic(table, S, T)}


def left_regular(table):
    """Permutations (0,x) -> (0,gx), (1,x) -> (1,gx) on 2n points."""
    n = len(table)
    return [tuple(table[g][x] for x in range(n)) + tuple(n + table[g][x] for x in range(n)) for g in range(n)]


def normalizer_by_scan(table):
    """Every permutation of 2n points normalizing the left regular copy, by full scan."""
    n = len(table)
    regular = set(left_regular(table))
    gens = left_regular(table)
    found = []
    for p in permutations(range(2 * n)):
        inv = [0] * (2 * n)
        for i, v in enumerate(p):
            inv[v] = i
        if all(tuple(p[g[inv[x]]] for x in range(2 * n)) in regular for g in gens):
            found.append(p)
    return found


def cayley_universe(table, S):
    n = len(table)
    arcs = cayley_arcs(table, S)
    return {T for T in combinations(range(n), len(S))
            if find_isomorphism(n, arcs, cayley_arcs(table, T), {0: 0}) is not None}


def abci_by_definition(table, S):
    return haar_universe(table, S) <= iso_reachable(table, S)


def ci_by_definition(table, S):
    images = {tuple(sorted(a[s] for s in S)) for a in group_automorphisms(table)}
    return cayley_universe(table, S) <= images


def _connected(n, arcs):
    nbrs = [set() for _ in range(n)]
    for u, v in arcs:
        nbrs[u].add(v)
        nbrs[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for u in nbrs[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def classify(table, S):
    """Case kind of haar(table, S) straight from the definitions."""
    n = len(table)
    if not S:
        return "Exceptional"
    arcs = haar_arcs(table, S)
    if not _connected(2 * n, arcs):
        return "Disconnected"
    out = adjacency(2 * n, arcs)
    if len({frozenset(s) for s in out}) < 2 * n:
        return "WreathReducible"
    total = automorphism_count(2 * n, arcs)
    for a in range(n):
        shifted = [table[a][s] for s in S]
        if 2 * automorphism_count(n, cayley_arcs(table, shifted)) == total:
            return "Stable"
    return "Exceptional"
