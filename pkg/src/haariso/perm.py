"""Permutations and permutation groups on ``range(n)``.

A permutation is a tuple of images. Products are function composition:
``compose(p, q)`` applies ``q`` first, then ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .config import DEFAULT
from .errors import BudgetExhausted, InvalidSpecification, NotABlockSystem, NotTransitive

Permutation = tuple


def identity(n: int) -> Permutation:
    return tuple(range(n))


def is_identity(p: Permutation) -> bool:
    return all(i == x for i, x in enumerate(p))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p o q``: apply ``q``, then ``p``."""
    return tuple([p[x] for x in q])


def compose_all(*perms: Permutation) -> Permutation:
    """Right-to-left product: ``compose_all(a, b, c) = a o b o c``."""
    result = perms[-1]
    for p in reversed(perms[:-1]):
        result = compose(p, result)
    return result


def inverse(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def conjugate(p: Permutation, by: Permutation) -> Permutation:
    """``by^-1 o p o by``."""
    return compose(inverse(by), compose(p, by))


def check_permutation(p: Sequence[int], n: Optional[int] = None) -> Permutation:
    p = tuple(int(x) for x in p)
    if sorted(p) != list(range(len(p))) or (n is not None and len(p) != n):
        raise InvalidSpecification(f"not a permutation of range({n if n is not None else len(p)})")
    return p


def from_cycles(n: int, *cycles: Sequence[int]) -> Permutation:
    img = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a] = b
    return check_permutation(img, n)


def cycles(p: Permutation) -> list:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [i], p[i]
        seen.add(i)
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def cycle_type(p: Permutation) -> tuple:
    lengths = [len(c) for c in cycles(p)]
    lengths += [1] * (len(p) - sum(lengths))
    return tuple(sorted(lengths))


def perm_order(p: Permutation) -> int:
    return math.lcm(*(len(c) for c in cycles(p))) if not is_identity(p) else 1


def is_fixed_point_free(p: Permutation) -> bool:
    return all(i != x for i, x in enumerate(p))


# ------------------------------------------------------ stabilizer chains


class StabilizerChain:
    """Base and strong generating set, built by deterministic Schreier-Sims.

    Used for orders and membership when a group is too big to list. The base
    starts with ``base_prefix`` when given, which is how pointwise stabilizers
    of arbitrary point sequences are read off.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], base_prefix=(), known_order=None):
        self.degree = degree
        gens = [g for g in generators if not is_identity(g)]
        self.base = list(base_prefix)
        for g in gens:
            if all(g[b] == b for b in self.base):
                self.base.append(next(i for i in range(degree) if g[i] != i))
        self.strong = list(gens)
        self._levels: list = []
        self._rebuild_from(0)
        self._known_order = known_order
        self._schreier_sims()

    def _level_gens(self, i):
        prefix = self.base[:i]
        return [g for g in self.strong if all(g[b] == b for b in prefix)]

    def _orbit(self, i):
        b = self.base[i]
        gens = self._level_gens(i)
        trans = {b: identity(self.degree)}
        frontier = [b]
        while frontier:
            nxt = []
            for x in frontier:
                ux = trans[x]
                for g in gens:
                    y = g[x]
                    if y not in trans:
                        trans[y] = compose(g, ux)
                        nxt.append(y)
            frontier = nxt
        return gens, trans

    def _rebuild_from(self, i):
        del self._levels[i:]
        for j in range(i, len(self.base)):
            self._levels.append(self._orbit(j))

    def order(self) -> int:
        return math.prod(len(t) for _, t in self._levels)

    def sift(self, g: Permutation, start: int = 0):
        for i in range(start, len(self.base)):
            b = self.base[i]
            x = g[b]
            trans = self._levels[i][1]
            if x not in trans:
                return g, i
            g = compose(inverse(trans[x]), g)
        return g, len(self.base)

    def _schreier_sims(self):
        i = len(self.base) - 1
        while i >= 0:
            if self._known_order is not None and self.order() == self._known_order:
                return
            gens, trans = self._levels[i]
            restart = None
            for x, ux in list(trans.items()):
                for s in gens:
                    y = s[x]
                    h = compose(inverse(trans[y]), compose(s, ux))
                    if is_identity(h):
                        continue
                    residue, j = self.sift(h, i + 1)
                    if j < len(self.base) or not is_identity(residue):
                        if j == len(self.base):
                            self.base.append(next(k for k in range(self.degree) if residue[k] != k))
                        self.strong.append(residue)
                        self._rebuild_from(i + 1)
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1

    def contains(self, g: Permutation) -> bool:
        residue, j = self.sift(tuple(g))
        return j == len(self.base) and is_identity(residue)

    def stabilizer_generators(self, k: int) -> list:
        """Strong generators of the pointwise stabilizer of ``base[:k]``."""
        return self._level_gens(k)

    def transversals(self) -> list:
        return [list(t.values()) for _, t in self._levels]

    def elements(self):
        n = self.degree
        levels = self.transversals()

        def walk(i, acc):
            if i < 0:
                yield acc
                return
            for u in levels[i]:
                yield from walk(i - 1, compose(u, acc))

        if not levels:
            yield identity(n)
            return
        yield from walk(len(levels) - 1, identity(n))


# ------------------------------------------------------------ PermGroup


@dataclass(frozen=True, eq=False)
class PermGroup:
    degree: int
    generators: tuple
    elements: Optional[tuple] = None
    order: Optional[int] = None
    base: Optional[tuple] = None

    def __post_init__(self):
        if any(len(g) != self.degree for g in self.generators):
            raise InvalidSpecification("generators must all have the group's degree")
        if self.elements is not None and self.order is not None and len(self.elements) != self.order:
            raise InvalidSpecification("element list length disagrees with the order")

    @cached_property
    def element_set(self) -> frozenset:
        if self.elements is None:
            raise BudgetExhausted("group elements were not enumerated")
        return frozenset(self.elements)

    @cached_property
    def chain(self) -> StabilizerChain:
        return StabilizerChain(self.degree, self.generators, self.base or (), self.order)

    def size(self) -> int:
        if self.order is not None:
            return self.order
        if self.elements is not None:
            return len(self.elements)
        return self.chain.order()

    def __contains__(self, p) -> bool:
        p = tuple(p)
        if self.elements is not None:
            return p in self.element_set
        return self.chain.contains(p)

    def with_elements(self, cap: int | None = None) -> "PermGroup":
        """Same group with its elements listed (raises if the order exceeds ``cap``)."""
        if self.elements is not None:
            return self
        cap = DEFAULT.aut_element_cap if cap is None else cap
        order = self.size()
        if order > cap:
            raise BudgetExhausted(f"group order {order} exceeds the element cap {cap}", partial=self)
        elements = tuple(sorted(self.chain.elements()))
        return PermGroup(self.degree, self.generators, elements, order, self.base)

    def to_json(self) -> dict:
        data = {"degree": self.degree, "generators": [list(g) for g in self.generators]}
        data["order"] = self.size()
        return data

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order}, gens={len(self.generators)})"


def closure(generators: Sequence[Permutation], cap: int | None = None, degree: int | None = None) -> PermGroup:
    """The group generated by ``generators``, listed element by element."""
    cap = DEFAULT.aut_element_cap if cap is None else cap
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise InvalidSpecification("degree required when there are no generators")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise InvalidSpecification("generators have unequal degrees")
    e = identity(degree)
    seen = {e}
    order = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise BudgetExhausted(
                            f"closure exceeds the element cap {cap}",
                            partial=PermGroup(degree, tuple(gens)),
                        )
        frontier = nxt
    elements = tuple(sorted(order))
    return PermGroup(degree, tuple(gens), elements, len(elements))


def orbits(G: PermGroup) -> list:
    parent = list(range(G.degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in G.generators:
        for x, y in enumerate(g):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    groups: dict = {}
    for x in range(G.degree):
        groups.setdefault(find(x), []).append(x)
    return [frozenset(v) for _, v in sorted(groups.items())]


def orbit_of(point: int, generators: Iterable[Permutation]) -> frozenset:
    gens = list(generators)
    seen = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                if g[x] not in seen:
                    seen.add(g[x])
                    nxt.append(g[x])
        frontier = nxt
    return frozenset(seen)


def is_transitive(G: PermGroup) -> bool:
    return len(orbits(G)) <= 1


# --------------------------------------------------------- block systems


@dataclass(frozen=True)
class BlockSystem:
    degree: int
    block_of: tuple
    blocks: tuple

    @classmethod
    def from_partition(cls, degree: int, parts: Iterable[Iterable[int]]) -> "BlockSystem":
        parts = sorted((tuple(sorted(p)) for p in parts), key=lambda b: b[0])
        block_of = [-1] * degree
        for i, part in enumerate(parts):
            for x in part:
                if block_of[x] != -1:
                    raise InvalidSpecification("parts overlap")
                block_of[x] = i
        if -1 in block_of:
            raise InvalidSpecification("parts do not cover every point")
        return cls(degree, tuple(block_of), tuple(frozenset(p) for p in parts))

    def is_invariant_under(self, generators: Iterable[Permutation]) -> bool:
        for g in generators:
            for block in self.blocks:
                images = {self.block_of[g[x]] for x in block}
                if len(images) != 1:
                    return False
        return True

    def __len__(self):
        return len(self.blocks)


def minimal_blocks(G: PermGroup, seed_pair: tuple) -> BlockSystem:
    """Finest G-invariant partition putting ``seed_pair`` in one block.

    Atkinson's union-find refinement: merge the seed pair, then propagate
    every merge through every generator until nothing changes.
    """
    if not is_transitive(G):
        raise NotTransitive("minimal block systems need a transitive group")
    n = G.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    a, b = seed_pair
    queue = []
    ra, rb = find(a), find(b)
    if ra != rb:
        parent[max(ra, rb)] = min(ra, rb)
        queue.append((a, b))
    while queue:
        x, y = queue.pop()
        for g in G.generators:
            rx, ry = find(g[x]), find(g[y])
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
                queue.append((g[x], g[y]))
    parts: dict = {}
    for x in range(n):
        parts.setdefault(find(x), []).append(x)
    return BlockSystem.from_partition(n, parts.values())


def block_systems(G: PermGroup) -> list:
    """Every block system of a transitive group: minimal ones through
    ``(0, x)`` and their joins. Sorted by block size."""
    n = G.degree
    found = {}
    for x in range(1, n):
        B = minimal_blocks(G, (0, x))
        found[B.block_of] = B
    frontier = list(found.values())
    while frontier:
        nxt = []
        for B1 in frontier:
            for B2 in list(found.values()):
                J = _join(G, B1, B2)
                if J.block_of not in found:
                    found[J.block_of] = J
                    nxt.append(J)
        frontier = nxt
    trivial = BlockSystem.from_partition(n, [[x] for x in range(n)])
    found.setdefault(trivial.block_of, trivial)
    return sorted(found.values(), key=lambda B: (len(B.blocks[0]), B.block_of))


def _join(G: PermGroup, B1: BlockSystem, B2: BlockSystem) -> BlockSystem:
    n = G.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for B in (B1, B2):
        for block in B.blocks:
            first = min(block)
            for x in block:
                rx, rf = find(x), find(first)
                if rx != rf:
                    parent[max(rx, rf)] = min(rx, rf)
    parts: dict = {}
    for x in range(n):
        parts.setdefault(find(x), []).append(x)
    return BlockSystem.from_partition(n, parts.values())


def _require_elements(G: PermGroup) -> tuple:
    if G.elements is None:
        raise BudgetExhausted("operation needs the group's elements; enumerate them first")
    return G.elements


def fix_subgroup(G: PermGroup, B: BlockSystem) -> PermGroup:
    """Elements of G mapping every block of B to itself."""
    elements = _require_elements(G)
    keep = [g for g in elements if all(B.block_of[g[x]] == B.block_of[x] for x in range(G.degree))]
    return PermGroup(G.degree, tuple(keep), tuple(keep), len(keep))


def quotient_action(G: PermGroup, B: BlockSystem) -> PermGroup:
    """Action of G on the blocks of B, as a group of degree ``len(B)``."""
    if not B.is_invariant_under(G.generators):
        raise NotABlockSystem("partition is not invariant under the group")
    k = len(B.blocks)
    gens = []
    for g in G.generators:
        gens.append(tuple(B.block_of[g[min(block)]] for block in B.blocks))
    if G.elements is not None:
        images = {tuple(B.block_of[g[min(block)]] for block in B.blocks) for g in G.elements}
        elements = tuple(sorted(images))
        return PermGroup(k, tuple(gens), elements, len(elements))
    return closure(gens, degree=k)


def is_semiregular(G: PermGroup) -> bool:
    elements = _require_elements(G)
    return all(is_identity(g) or is_fixed_point_free(g) for g in elements)


def are_conjugate_subgroups(A: PermGroup, H: PermGroup, K: PermGroup, budget: int | None = None):
    """Some ``a`` in A with ``a^-1 H a = K``, or None.

    Scans A's elements when they are listed, pruning on the generators of H.
    When A is only known through generators and both H and K are
    semiregular, conjugators are instead built from the regular actions on
    the orbits (see :func:`conjugate_semiregular`), which is exact as well.
    """
    budget = DEFAULT.backtrack_budget if budget is None else budget
    H_elems = _subgroup_elements(H)
    K_elems = _subgroup_elements(K)
    if len(H_elems) != len(K_elems):
        return None
    if A.elements is None:
        H_full = PermGroup(H.degree, H.generators or (identity(H.degree),), H_elems, len(H_elems))
        K_full = PermGroup(K.degree, K.generators or (identity(K.degree),), K_elems, len(K_elems))
        if is_semiregular(H_full) and is_semiregular(K_full):
            return conjugate_semiregular(A, H, K, budget)
        raise BudgetExhausted("A has no element list and the subgroups are not semiregular")
    K_set = frozenset(K_elems)
    steps = 0
    for a in A.elements:
        steps += 1
        if steps > budget:
            raise BudgetExhausted("conjugacy scan exceeded its budget")
        ai = inverse(a)
        if all(compose(ai, compose(h, a)) in K_set for h in H.generators):
            return a
    return None


def _subgroup_elements(H: PermGroup) -> tuple:
    if H.elements is not None:
        return H.elements
    return closure(H.generators, degree=H.degree).elements


def conjugate_semiregular(A: PermGroup, H: PermGroup, K: PermGroup, budget: int | None = None):
    """Conjugator ``a`` in A with ``a^-1 H a = K`` for semiregular H and K.

    Such an ``a`` sends K-orbits to H-orbits and satisfies
    ``a(k . x) = theta(k) . a(x)`` for the isomorphism ``theta: K -> H`` it
    induces. So it is fixed by theta and the images of one base point per
    orbit of K; we try every combination and test membership in A.
    """
    budget = DEFAULT.backtrack_budget if budget is None else budget
    Hel = _subgroup_elements(H)
    Kel = _subgroup_elements(K)
    n = A.degree
    if len(Hel) != len(Kel):
        return None
    K_orbits = [sorted(o) for o in orbits(PermGroup(n, tuple(Kel)))]
    H_orbits = [sorted(o) for o in orbits(PermGroup(n, tuple(Hel)))]
    if sorted(map(len, K_orbits)) != sorted(map(len, H_orbits)):
        return None
    k_gens = list(K.generators) or [identity(n)]
    for theta in _isomorphisms_on_generators(Kel, k_gens, Hel):
        steps = 0
        # each K-orbit base point goes to some point of a distinct H-orbit
        bases = [o[0] for o in K_orbits]
        for targets in _orbit_assignments(bases, K_orbits, H_orbits):
            steps += 1
            if steps > budget:
                raise BudgetExhausted("semiregular conjugacy search exceeded its budget")
            a = _intertwiner(n, Kel, theta, bases, targets)
            if a is not None and a in A:
                return a
    return None


def _isomorphisms_on_generators(Kel, k_gens, Hel):
    """Yield dicts k -> theta(k) for every isomorphism K -> H."""
    n = len(Kel[0])
    e = identity(n)
    H_set = frozenset(Hel)
    orders = {}
    for h in Hel:
        orders.setdefault(perm_order(h), []).append(h)

    def extend(j, images):
        if j == len(k_gens):
            theta = {e: e}
            frontier = [e]
            while frontier:
                nxt = []
                for x in frontier:
                    for g, gi in zip(k_gens, images):
                        y = compose(g, x)
                        val = compose(gi, theta[x])
                        if y in theta:
                            if theta[y] != val:
                                return
                        else:
                            theta[y] = val
                            nxt.append(y)
                frontier = nxt
            if len(theta) == len(Kel) and len(set(theta.values())) == len(Kel) and set(theta.values()) <= H_set:
                yield theta
            return
        for h in orders.get(perm_order(k_gens[j]), []):
            yield from extend(j + 1, images + [h])

    yield from extend(0, [])


def _orbit_assignments(bases, K_orbits, H_orbits):
    used = [False] * len(H_orbits)

    def rec(i, acc):
        if i == len(bases):
            yield list(acc)
            return
        size = len(K_orbits[i])
        for j, orb in enumerate(H_orbits):
            if used[j] or len(orb) != size:
                continue
            used[j] = True
            for target in orb:
                acc.append(target)
                yield from rec(i + 1, acc)
                acc.pop()
            used[j] = False

    yield from rec(0, [])


def _intertwiner(n, Kel, theta, bases, targets):
    img = [-1] * n
    for b, t in zip(bases, targets):
        for k in Kel:
            x, y = k[b], theta[k][t]
            if img[x] != -1 and img[x] != y:
                return None
            img[x] = y
    if -1 in img or len(set(img)) != n:
        return None
    return tuple(img)


def equivalent_representations(F: PermGroup, O1: Iterable[int], O2: Iterable[int], budget: int | None = None):
    """Bijection ``lam: O1 -> O2`` with ``lam(f(x)) = f(lam(x))`` for every f in F.

    Found by backtracking on images: once ``lam(x)`` is chosen, the values on
    the generator-orbit of x are forced. Returns a dict or None.
    """
    budget = DEFAULT.backtrack_budget if budget is None else budget
    O1, O2 = sorted(O1), sorted(O2)
    if len(O1) != len(O2):
        return None
    gens = list(F.generators)
    for g in gens:
        if any(g[x] not in set(O1) for x in O1) or any(g[x] not in set(O2) for x in O2):
            raise InvalidSpecification("point sets must be invariant under F")
    if not gens:
        return dict(zip(O1, O2))
    for g in gens:
        c1 = sorted(len(c) for c in _restricted_cycles(g, O1))
        c2 = sorted(len(c) for c in _restricted_cycles(g, O2))
        if c1 != c2:
            return None
    steps = [0]
    O2_set = set(O2)

    def propagate(lam, used, x, y):
        stack = [(x, y)]
        added = []
        while stack:
            a, b = stack.pop()
            if a in lam:
                if lam[a] != b:
                    for k in added:
                        used.discard(lam.pop(k))
                    return None
                continue
            if b in used or b not in O2_set:
                for k in added:
                    used.discard(lam.pop(k))
                return None
            lam[a] = b
            used.add(b)
            added.append(a)
            for g in gens:
                stack.append((g[a], g[b]))
        return added

    def search(lam, used):
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExhausted("representation equivalence search exceeded its budget")
        free = [x for x in O1 if x not in lam]
        if not free:
            return dict(lam)
        x = free[0]
        for y in O2:
            if y in used:
                continue
            added = propagate(lam, used, x, y)
            if added is None:
                continue
            found = search(lam, used)
            if found is not None:
                return found
            for k in added:
                used.discard(lam.pop(k))
        return None

    return search({}, set())


def _restricted_cycles(g, points):
    pts = set(points)
    seen, out = set(), []
    for x in sorted(pts):
        if x in seen:
            continue
        cyc, y = [], x
        while y not in seen:
            seen.add(y)
            cyc.append(y)
            y = g[y]
        out.append(cyc)
    return out
