"""Finite groups as explicit multiplication tables.

Elements are the integers ``0..order-1``. Abelian groups built by
:func:`make_abelian` use a mixed-radix encoding over the given factors, first
factor most significant, so ``Z2 x Z4`` numbers ``(a, b)`` as ``4*a + b``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Optional, Sequence

from .config import DEFAULT
from .errors import BudgetExhausted, InvalidSpecification, NotNormal, Unsupported

Automorphism = tuple  # images: element index -> element index


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: tuple
    labels: tuple
    identity: int = 0
    abelian_factors: Optional[tuple] = None
    radices: Optional[tuple] = None
    name: str = ""

    def __post_init__(self):
        n = len(self.table)
        if n == 0 or any(len(row) != n for row in self.table):
            raise InvalidSpecification("multiplication table must be square and non-empty")
        if len(self.labels) != n:
            raise InvalidSpecification("one label per element required")
        if n <= DEFAULT.group_bound:
            _check_group_axioms(self.table, self.identity)
        if self.abelian_factors is not None:
            if math.prod(self.abelian_factors) != n:
                raise InvalidSpecification("abelian factors do not multiply to the order")
            if any(self.table[x][y] != self.table[y][x] for x in range(n) for y in range(x)):
                raise InvalidSpecification("abelian factors given for a non-commutative table")

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    @cached_property
    def inverses(self) -> tuple:
        e = self.identity
        return tuple(row.index(e) for row in self.table)

    def inv(self, x: int) -> int:
        return self.inverses[x]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverses[x], -k
        result = self.identity
        for _ in range(k):
            result = self.table[result][x]
        return result

    @cached_property
    def element_orders(self) -> tuple:
        orders = []
        for x in self.elements:
            k, y = 1, x
            while y != self.identity:
                y = self.table[y][x]
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[x][y] == t[y][x] for x in self.elements for y in range(x))

    @cached_property
    def key(self) -> tuple:
        """Hashable identity of the group structure (table and identity)."""
        return (self.identity, self.table)

    def label(self, x: int) -> str:
        return self.labels[x]

    @cached_property
    def _label_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def parse_element(self, text: str) -> int:
        """Element index from a label such as ``3`` or ``(1,2)``, or a bare index when no label matches."""
        token = re.sub(r"\s+", "", text)
        if token in self._label_index:
            return self._label_index[token]
        if self.radices is not None:
            parts = [int(p) for p in token.strip("()").split(",") if p != ""]
            if len(parts) == len(self.radices) and all(0 <= d < r for d, r in zip(parts, self.radices)):
                return encode_mixed_radix(parts, self.radices)
        if token.isdigit() and int(token) < self.order:
            return int(token)  # bare element index
        raise InvalidSpecification(f"unknown element {text!r}")

    def parse_set(self, text: str) -> frozenset:
        """Parse ``"0,1,4"`` (cyclic) or ``"(1,0) (0,2)"`` into element indices."""
        text = text.strip()
        if not text or text in ("{}", "[]"):
            return frozenset()
        if "(" in text:
            tokens = re.findall(r"\([^)]*\)", text)
        else:
            tokens = [t for t in re.split(r"[\s,;{}\[\]]+", text) if t]
        return frozenset(self.parse_element(t) for t in tokens)

    def format_set(self, members: Iterable[int]) -> list:
        return [self.labels[x] for x in sorted(members)]

    def descriptor(self) -> dict:
        if self.radices is not None:
            return {"abelian": list(self.radices)}
        return {"table": [list(r) for r in self.table], "labels": list(self.labels)}

    def __repr__(self):
        return f"FiniteGroup({self.name or self.order})"


def _check_group_axioms(table, e):
    n = len(table)
    for row in table:
        if sorted(row) != list(range(n)):
            raise InvalidSpecification("table rows must be permutations (Latin square)")
    if any(table[e][x] != x or table[x][e] != x for x in range(n)):
        raise InvalidSpecification("identity element is not two-sided")
    for x in range(n):
        tx = table[x]
        for y in range(n):
            txy = tx[y]
            ty = table[y]
            for z in range(n):
                if table[txy][z] != tx[ty[z]]:
                    raise InvalidSpecification("operation is not associative")


def encode_mixed_radix(digits: Sequence[int], radices: Sequence[int]) -> int:
    x = 0
    for d, r in zip(digits, radices):
        x = x * r + (d % r)
    return x


def decode_mixed_radix(x: int, radices: Sequence[int]) -> tuple:
    digits = []
    for r in reversed(radices):
        digits.append(x % r)
        x //= r
    return tuple(reversed(digits))


def make_abelian(factors: Sequence[int]) -> FiniteGroup:
    """The direct product ``Z_{d1} x ... x Z_{dk}``."""
    factors = tuple(int(d) for d in factors)
    if not factors:
        raise InvalidSpecification("at least one factor is required")
    if any(d < 2 for d in factors):
        raise InvalidSpecification(f"cyclic factors must be at least 2, got {list(factors)}")
    digits = list(product(*(range(d) for d in factors)))
    table = tuple(
        tuple(encode_mixed_radix([a + b for a, b in zip(dx, dy)], factors) for dy in digits)
        for dx in digits
    )
    if len(factors) == 1:
        labels = tuple(str(d[0]) for d in digits)
    else:
        labels = tuple("(" + ",".join(map(str, d)) + ")" for d in digits)
    name = "x".join(f"Z{d}" for d in factors)
    return FiniteGroup(table, labels, 0, invariant_factors(factors), factors, name)


def cyclic(n: int) -> FiniteGroup:
    return make_abelian([n])


def invariant_factors(factors: Sequence[int]) -> tuple:
    """Invariant factors ``d1 | d2 | ...`` of a product of cyclic groups."""
    prime_parts = {}
    for d in factors:
        for p, e in _factorize(d).items():
            prime_parts.setdefault(p, []).append(p**e)
    width = max((len(v) for v in prime_parts.values()), default=0)
    result = [1] * width
    for powers in prime_parts.values():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            result[width - 1 - i] *= q
    return tuple(result) if result else (1,)


def _factorize(n: int) -> dict:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def abelian_invariants(G: FiniteGroup) -> tuple:
    """Invariant factors of an abelian group read off its element orders."""
    if not G.is_abelian:
        raise Unsupported("invariant factors need an abelian group")
    if G.order == 1:
        return (1,)
    orders = G.element_orders
    cyclic_parts = []
    for p in _factorize(G.order):
        # r_k = number of cyclic p-factors of exponent >= k
        prev, k, exps = 1, 1, []
        while True:
            count = sum(1 for o in orders if (p**k) % o == 0)
            r = round(math.log(count // prev, p))
            if r == 0:
                break
            exps.append(r)
            prev, k = count, k + 1
        # exps[k-1] = number of factors with exponent >= k
        for k, r in enumerate(exps, start=1):
            nxt = exps[k] if k < len(exps) else 0
            cyclic_parts.extend([p**k] * (r - nxt))
    return invariant_factors(cyclic_parts)


def group_from_json(data) -> FiniteGroup:
    if isinstance(data, str):
        data = json.loads(data)
    if "abelian" in data:
        return make_abelian(data["abelian"])
    if "table" in data:
        table = tuple(tuple(int(x) for x in row) for row in data["table"])
        labels = tuple(str(x) for x in data.get("labels", range(len(table))))
        G = FiniteGroup(table, labels, int(data.get("identity", 0)))
        if G.is_abelian:
            G = FiniteGroup(table, labels, G.identity, abelian_invariants(G), None, G.name)
        return G
    raise InvalidSpecification("group descriptor needs an 'abelian' or 'table' key")


def parse_group(text: str) -> FiniteGroup:
    """Accept ``Z9``, ``Z2xZ4``, ``2,4`` or a JSON descriptor."""
    text = text.strip()
    if text.startswith("{"):
        return group_from_json(text)
    parts = [p for p in re.split(r"[x*,\s]+", text.replace("Z", " ").replace("z", " ")) if p]
    if not parts or not all(p.isdigit() for p in parts):
        raise InvalidSpecification(f"cannot parse group {text!r}")
    return make_abelian([int(p) for p in parts])


# ---------------------------------------------------------------- subgroups


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple  # sorted element indices

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    def __contains__(self, x) -> bool:
        return x in self.member_set

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent is other.parent and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"Subgroup({self.parent.format_set(self.members)})"


def _close(G: FiniteGroup, seed: Iterable[int]) -> frozenset:
    seed = set(seed)
    members = {G.identity}
    frontier = [G.identity]
    gens = list(seed)
    while frontier:
        nxt = []
        for x in frontier:
            row = G.table[x]
            for g in gens:
                y = row[g]
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(members)


def generated_subgroup(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seed``."""
    seed = list(seed)
    for x in seed:
        if not 0 <= x < G.order:
            raise InvalidSpecification(f"{x} is not an element of {G}")
    return Subgroup(G, tuple(sorted(_close(G, seed))))


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(G.elements))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (G.identity,))


def all_subgroups(G: FiniteGroup, bound: int | None = None) -> list:
    """Every subgroup, as joins of cyclic subgroups. Sorted by (order, members)."""
    bound = DEFAULT.group_bound if bound is None else bound
    if G.order > bound:
        raise BudgetExhausted(f"|G| = {G.order} exceeds the brute-force bound {bound}")
    cyclics = {_close(G, [x]) for x in G.elements}
    found = set(cyclics)
    frontier = set(cyclics)
    while frontier:
        nxt = set()
        for H in frontier:
            for C in cyclics:
                if C <= H:
                    continue
                J = _close(G, H | C)
                if J not in found:
                    found.add(J)
                    nxt.add(J)
        frontier = nxt
    subs = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [Subgroup(G, tuple(sorted(s))) for s in subs]


def subgroups_of_order(G: FiniteGroup, m: int, bound: int | None = None) -> list:
    if m <= 0 or G.order % m:
        raise InvalidSpecification(f"{m} does not divide |G| = {G.order}")
    return [H for H in all_subgroups(G, bound) if H.order == m]


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    if G.abelian_factors is not None or G.is_abelian:
        return True
    members = H.member_set
    for g in G.elements:
        gi = G.inverses[g]
        for h in H.members:
            if G.table[G.table[g][h]][gi] not in members:
                return False
    return True


def quotient(G: FiniteGroup, H: Subgroup):
    """``G/H`` on coset representatives, with the projection ``g -> coset index``.

    Cosets are numbered by their least element, so the identity coset is 0.
    """
    if H.parent is not G:
        raise InvalidSpecification("subgroup belongs to a different group")
    if G.abelian_factors is None and not is_normal(G, H):
        raise NotNormal("subgroup is not normal")
    projection = [-1] * G.order
    reps = []
    for g in G.elements:
        if projection[g] >= 0:
            continue
        idx = len(reps)
        reps.append(g)
        for h in H.members:
            projection[G.table[g][h]] = idx
    table = tuple(tuple(projection[G.table[a][b]] for b in reps) for a in reps)
    labels = tuple(f"[{G.labels[r]}]" for r in reps)
    identity = projection[G.identity]
    factors = abelian_invariants_of_table(table, identity) if G.is_abelian else None
    Q = FiniteGroup(table, labels, identity, factors, None, f"{G.name or G.order}/{H.order}")
    return Q, tuple(projection), tuple(reps)


def abelian_invariants_of_table(table, identity) -> tuple:
    probe = FiniteGroup(table, tuple(map(str, range(len(table)))), identity)
    return abelian_invariants(probe)


def subgroup_as_group(H: Subgroup):
    """``H`` as a group in its own right, with the embedding into the parent.

    The embedding is ``H.members`` (sorted), so the identity is index 0
    whenever the parent's identity is 0.
    """
    G = H.parent
    members = H.members
    index = {x: i for i, x in enumerate(members)}
    table = tuple(tuple(index[G.table[a][b]] for b in members) for a in members)
    labels = tuple(G.labels[x] for x in members)
    identity = index[G.identity]
    factors = abelian_invariants_of_table(table, identity) if G.is_abelian else None
    return FiniteGroup(table, labels, identity, factors, None, f"<{H.order}<{G.name or G.order}>"), members


# ----------------------------------------------------------- automorphisms


def _generating_set(G: FiniteGroup) -> list:
    gens, span = [], frozenset([G.identity])
    for x in sorted(G.elements, key=lambda y: (-G.element_orders[y], y)):
        if x not in span:
            gens.append(x)
            span = _close(G, gens)
            if len(span) == G.order:
                break
    return gens


def _extend_homomorphism(G: FiniteGroup, gens, images, H: FiniteGroup | None = None):
    """Extend generator images to a homomorphism on <gens>, or None if inconsistent."""
    H = G if H is None else H
    phi = {G.identity: H.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, gi in zip(gens, images):
                y = G.table[x][g]
                val = H.table[phi[x]][gi]
                if y in phi:
                    if phi[y] != val:
                        return None
                else:
                    phi[y] = val
                    nxt.append(y)
        frontier = nxt
    return phi


def automorphism_group(G: FiniteGroup, bound: int | None = None) -> list:
    """All automorphisms of ``G``, by backtracking on images of a generating set.

    The identity automorphism comes first; the rest follow the lexicographic
    order of generator images.
    """
    bound = DEFAULT.group_bound if bound is None else bound
    if G.order > bound:
        raise BudgetExhausted(f"|G| = {G.order} exceeds the brute-force bound {bound}")
    return list(_automorphisms_cached(G))


_AUT_CACHE: dict = {}


def _automorphisms_cached(G: FiniteGroup) -> tuple:
    hit = _AUT_CACHE.get(G.key)
    if hit is not None:
        return hit
    gens = _generating_set(G)
    orders = G.element_orders
    found = []

    def extend(j, images):
        if j == len(gens):
            phi = _extend_homomorphism(G, gens, images)
            if phi is not None and len(phi) == G.order and len(set(phi.values())) == G.order:
                found.append(tuple(phi[x] for x in G.elements))
            return
        for y in G.elements:
            if orders[y] != orders[gens[j]] or y in images:
                continue
            cand = images + [y]
            phi = _extend_homomorphism(G, gens[: j + 1], cand)
            if phi is None or len(set(phi.values())) != len(phi):
                continue
            extend(j + 1, cand)

    extend(0, [])
    identity = tuple(G.elements)
    found.sort(key=lambda a: (a != identity, [a[g] for g in gens]))
    result = tuple(found)
    _AUT_CACHE[G.key] = result
    return result


def is_automorphism(G: FiniteGroup, images: Sequence[int]) -> bool:
    if sorted(images) != list(G.elements):
        return False
    t = G.table
    return all(images[t[x][y]] == t[images[x]][images[y]] for x in G.elements for y in G.elements)


def compose_automorphisms(a: Automorphism, b: Automorphism) -> Automorphism:
    """``a`` after ``b``."""
    return tuple(a[x] for x in b)


# ---------------------------------------------------------------- Sylow


SYLOW_SHAPES = ("trivial", "cyclic", "elementary", "homocyclic", "other")


def sylow_exponents(G: FiniteGroup, p: int) -> list:
    if not G.is_abelian:
        raise Unsupported("Sylow shape is only classified for abelian groups")
    factors = G.abelian_factors or abelian_invariants(G)
    exps = []
    for d in factors:
        e = 0
        while d % p == 0:
            d //= p
            e += 1
        if e:
            exps.append(e)
    return exps


def sylow_shape(G: FiniteGroup, p: int) -> str:
    """Shape of the Sylow p-subgroup of an abelian group.

    A single factor counts as cyclic even when it has prime order; several
    factors of exponent one are elementary; several of one common exponent
    are homocyclic.
    """
    exps = sylow_exponents(G, p)
    if not exps:
        return "trivial"
    if len(exps) == 1:
        return "cyclic"
    if all(e == 1 for e in exps):
        return "elementary"
    if len(set(exps)) == 1:
        return "homocyclic"
    return "other"


def prime_divisors(n: int) -> list:
    return sorted(_factorize(n))


def sylows_cyclic_or_elementary(G: FiniteGroup) -> bool:
    return all(sylow_shape(G, p) in ("trivial", "cyclic", "elementary") for p in prime_divisors(G.order))


def is_homogeneous(G: FiniteGroup) -> bool:
    """Abelian groups whose Sylow subgroups are all homocyclic (or cyclic)."""
    return all(len(set(sylow_exponents(G, p))) <= 1 for p in prime_divisors(G.order))
