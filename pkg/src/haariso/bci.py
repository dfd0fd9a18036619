"""ABCI and CI decisions, solving sets and extensions, by exhaustive search.

A connection set T is *reached* by a map s when ``s(haar(G,S)) = haar(G,T)``.
A Haar graph is ABCI when every T with an isomorphic Haar graph is reached by
Iso(G); the Cayley analogue (CI) uses Aut(G) on Cayley digraphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .config import DEFAULT
from .errors import BudgetExhausted, InvalidSpecification
from .graph import cayley, canonical_form, haar, haar_set_of, isomorphism, automorphisms
from .groups import FiniteGroup, automorphism_group, abelian_invariants
from .haar_maps import (
    IsoElement,
    _map_mask,
    ghat_left,
    iso_orbit_of,
    iso_orbits,
    iso_set,
    iso_set_realized,
    make_map,
    mask_of,
    set_of,
)
from .perm import (
    PermGroup,
    compose,
    compose_all,
    conjugate_semiregular,
    identity,
    inverse,
    is_identity,
    is_semiregular,
    orbits,
    perm_order,
)


# ------------------------------------------------------------- caching


@lru_cache(maxsize=None)
def _haar_form(G: FiniteGroup, mask: int) -> bytes:
    return canonical_form(haar(G, set_of(mask)))


@lru_cache(maxsize=None)
def _cayley_form(G: FiniteGroup, mask: int) -> bytes:
    return canonical_form(cayley(G, set_of(mask)))


def haar_form(G: FiniteGroup, S: Iterable[int]) -> bytes:
    return _haar_form(G, mask_of(S))


def cayley_form(G: FiniteGroup, S: Iterable[int]) -> bytes:
    return _cayley_form(G, mask_of(S))


def _orbits_under(n: int, gens: Sequence[tuple], size: int) -> list:
    """Orbits of the size-``size`` subsets of ``range(n)`` under bijections ``gens``, as sorted tuples."""
    seen = set()
    result = []
    for combo in combinations(range(n), size):
        m = mask_of(combo)
        if m in seen:
            continue
        seen.add(m)
        orbit, frontier = [m], [m]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = _map_mask(x, g)
                    if y not in seen:
                        seen.add(y)
                        orbit.append(y)
                        nxt.append(y)
            frontier = nxt
        result.append(sorted(set_of(x) for x in orbit))
    return result


def _check_size(G: FiniteGroup, bound: Optional[int]):
    bound = DEFAULT.subset_enum_bound if bound is None else bound
    if G.order > bound:
        raise BudgetExhausted(f"|G| = {G.order} exceeds the subset enumeration bound {bound}")


def haar_universe(G: FiniteGroup, S: Iterable[int], bound: Optional[int] = None) -> list:
    """Every T (sorted tuple) with ``haar(G,T)`` isomorphic to ``haar(G,S)``.

    Candidates share |S|; they are grouped by Iso(G)-orbit, which preserves
    the isomorphism type, so one canonical form is computed per orbit.
    """
    _check_size(G, bound)
    S = tuple(sorted(set(S)))
    target = haar_form(G, S)
    out = []
    for rep, members in iso_orbits(G, sizes=[len(S)], bound=bound):
        if haar_form(G, rep) == target:
            out.extend(members)
    return sorted(out)


def cayley_universe(G: FiniteGroup, S: Iterable[int], bound: Optional[int] = None) -> list:
    """Every T with ``cayley(G,T)`` isomorphic to ``cayley(G,S)``."""
    _check_size(G, bound)
    S = tuple(sorted(set(S)))
    target = cayley_form(G, S)
    out = []
    for members in _orbits_under(G.order, automorphism_group(G)[1:], len(S)):
        if cayley_form(G, members[0]) == target:
            out.extend(members)
    return sorted(out)


# ------------------------------------------------------------ reports


@dataclass
class AbciReport:
    subject: dict
    verdict: bool
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        data = {"subject": self.subject, "verdict": self.verdict}
        if self.witness is not None:
            data["witness"] = self.witness
        if self.details:
            data["details"] = self.details
        return data


def iso_by_iso_set(G: FiniteGroup, S: Iterable[int], T: Iterable[int]) -> Optional[IsoElement]:
    """An element of Iso(G) carrying ``haar(G,S)`` onto ``haar(G,T)``, or None."""
    S, T = frozenset(S), frozenset(T)
    if len(S) != len(T):
        return None
    for m in iso_set(G):
        sm = m.set_map()
        if all(sm[s] in T for s in S):
            return m
    return None


def _witness(G, S, T) -> dict:
    iso = isomorphism(haar(G, S), haar(G, T))
    return {"S": G.format_set(S), "T": G.format_set(T), "isomorphism": list(iso)}


def is_abci_graph(G: FiniteGroup, S: Iterable[int], candidates: Optional[Iterable] = None,
                  bound: Optional[int] = None) -> AbciReport:
    """Whether every Haar graph of G isomorphic to ``haar(G,S)`` is reached by Iso(G)."""
    S = tuple(sorted(set(S)))
    if candidates is None:
        universe = haar_universe(G, S, bound)
    else:
        form = haar_form(G, S)
        universe = sorted({tuple(sorted(set(T))) for T in candidates if haar_form(G, T) == form})
    reached = set(iso_orbit_of(G, S))
    subject = {"group": G.descriptor(), "S": G.format_set(S)}
    details = {"universe": len(universe), "iso_orbit": len(reached)}
    for T in universe:
        if T not in reached:
            assert iso_by_iso_set(G, S, T) is None
            return AbciReport(subject, False, _witness(G, S, T), details)
    return AbciReport(subject, True, None, details)


def is_abci_group(G: FiniteGroup, bound: Optional[int] = None) -> AbciReport:
    """Whether isomorphic Haar graphs of G are always related by Iso(G)."""
    _check_size(G, bound)
    classes: dict = {}
    for rep, _members in iso_orbits(G, bound=bound):
        classes.setdefault((len(rep), haar_form(G, rep)), []).append(rep)
    subject = {"group": G.descriptor()}
    bad = [reps for reps in classes.values() if len(reps) > 1]
    details = {"orbits": sum(len(r) for r in classes.values()), "isomorphism_classes": len(classes)}
    if bad:
        S, T = bad[0][0], bad[0][1]
        return AbciReport(subject, False, _witness(G, S, T), details)
    return AbciReport(subject, True, None, details)


# ---------------------------------------------------- Babai-type criterion


def _copy_from_isomorphism(G: FiniteGroup, phi: tuple) -> PermGroup:
    """``phi^-1 G_hat_L phi`` as a listed group."""
    pinv = inverse(phi)
    L = ghat_left(G)
    elems = tuple(compose_all(pinv, h, phi) for h in L.elements)
    gens = tuple(compose_all(pinv, h, phi) for h in L.generators)
    return PermGroup(len(phi), gens, elems, len(elems))


def semiregular_copies_via_isomorphisms(G: FiniteGroup, S: Iterable[int], bound: Optional[int] = None) -> list:
    """``(T, copy)`` for each T in the Haar universe, with ``copy = phi_T^-1 G_hat_L phi_T`` inside Aut(haar(G,S)).

    Every semiregular subgroup of Aut with two orbits of size |G| that is
    isomorphic to G is conjugate in Aut to one of these copies.
    """
    S = tuple(sorted(set(S)))
    X = haar(G, S)
    out = []
    for T in haar_universe(G, S, bound):
        phi = isomorphism(X, haar(G, T))
        out.append((T, _copy_from_isomorphism(G, phi)))
    return out


def babai_criterion_haar(G: FiniteGroup, S: Iterable[int], budget: Optional[int] = None,
                         bound: Optional[int] = None) -> bool:
    """True iff every semiregular two-orbit copy of G in Aut(haar(G,S)) is Aut-conjugate to G_hat_L."""
    S = tuple(sorted(set(S)))
    X = haar(G, S)
    A = automorphisms(X, budget, enumerate_elements=False)
    L = ghat_left(G)
    for T, copy in semiregular_copies_via_isomorphisms(G, S, bound):
        a = conjugate_semiregular(A, L, copy, budget)
        if a is None:
            return False
        assert X.is_automorphism(a)
    return True


def enumerate_semiregular_copies(A: PermGroup, G: FiniteGroup, orbit_count: Optional[int] = None) -> list:
    """Semiregular subgroups of a listed group A isomorphic to G (at most two generators).

    Scans elements (or commuting pairs) of the orders of G's invariant
    factors. Returns listed PermGroups, each subgroup once.
    """
    if A.elements is None:
        raise BudgetExhausted("element scan needs A listed")
    factors = abelian_invariants(G) if G.is_abelian else None
    if factors is None or len(factors) > 2:
        raise InvalidSpecification("element scan handles abelian groups with at most two invariant factors")
    n = A.degree
    fpf = [g for g in A.elements if not is_identity(g) and all(g[x] != x for x in range(n))]
    by_order: dict = {}
    for g in fpf:
        by_order.setdefault(perm_order(g), []).append(g)
    found = {}
    e = identity(n)

    def consider(gens):
        from .perm import closure

        H = closure(gens, cap=G.order, degree=n)
        if H.size() != G.order or not is_semiregular(H):
            return
        if orbit_count is not None and len(orbits(H)) != orbit_count:
            return
        key = frozenset(H.elements)
        if key not in found:
            found[key] = H

    if not factors:
        return [PermGroup(n, (e,), (e,), 1)]
    if len(factors) == 1:
        for g in by_order.get(factors[0], []):
            consider([g])
    else:
        d1, d2 = factors
        for x in by_order.get(d1, []):
            for y in by_order.get(d2, []):
                if compose(x, y) == compose(y, x):
                    consider([x, y])
    return sorted(found.values(), key=lambda H: sorted(H.elements))


# ------------------------------------------------------- solving sets


PROVENANCE = ("iso-element", "extension", "relabeling-composite")


@dataclass
class SolvingSet:
    group: FiniteGroup
    maps: list
    provenance: list
    degenerate: bool = False

    def __post_init__(self):
        if len(self.maps) != len(self.provenance):
            raise InvalidSpecification("one provenance tag per map")

    @classmethod
    def from_extension(cls, G: FiniteGroup, extension: Iterable[tuple], tag: str = "extension") -> "SolvingSet":
        """``Iso(G)`` together with ``Iso(G) * t`` for each t (deduplicated)."""
        isos = iso_set_realized(G)
        maps, prov, seen = [], [], set()
        for m in isos:
            if m not in seen:
                seen.add(m)
                maps.append(m)
                prov.append("iso-element")
        for t in extension:
            t = tuple(t)
            for m in isos:
                s = compose(m, t)
                if s not in seen:
                    seen.add(s)
                    maps.append(s)
                    prov.append(tag)
        return cls(G, maps, prov)

    def to_json(self) -> dict:
        counts: dict = {}
        for p in self.provenance:
            counts[p] = counts.get(p, 0) + 1
        return {"size": len(self.maps), "provenance": counts, "degenerate": self.degenerate}


@dataclass
class SolvingSetVerdict:
    ok: bool
    contains_iso: bool
    base_condition: bool
    covers_universe: bool
    missing: list = field(default_factory=list)
    offending: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def reached_sets(G: FiniteGroup, S: Iterable[int], maps: Iterable[tuple]) -> set:
    """The connection sets T with ``s(haar(G,S)) = haar(G,T)`` for some map s."""
    X = haar(G, S)
    out = set()
    for s in maps:
        T = haar_set_of(G, X.relabel(s))
        if T is not None:
            out.add(tuple(sorted(T)))
    return out


def solving_set_check(G: FiniteGroup, S: Iterable[int], candidate: SolvingSet,
                      universe: Optional[Iterable] = None, detail: bool = False):
    """Conditions for a solving set of ``haar(G,S)`` against ``universe`` (all T by default).

    (1) every T in the universe with an isomorphic Haar graph is reached;
    (2) a member sending ``(0,e)`` into B0 fixes it;
    (3) every element of Iso(G) is a member.
    """
    S = tuple(sorted(set(S)))
    n = G.order
    e = G.identity
    members = set(map(tuple, candidate.maps))
    contains_iso = all(m in members for m in iso_set_realized(G))
    offending = [list(s) for s in candidate.maps if s[e] < n and s[e] != e]
    if universe is None:
        targets = haar_universe(G, S)
    else:
        form = haar_form(G, S)
        targets = sorted({tuple(sorted(set(T))) for T in universe if haar_form(G, T) == form})
    reached = reached_sets(G, S, candidate.maps)
    missing = [T for T in targets if T not in reached]
    verdict = SolvingSetVerdict(contains_iso and not offending and not missing, contains_iso,
                                not offending, not missing, missing, offending)
    return verdict if detail else verdict.ok


# ---------------------------------------------------------- extensions


@dataclass
class ABCIExtension:
    group: FiniteGroup
    maps: list

    def __post_init__(self):
        n, e = self.group.order, self.group.identity
        if identity(2 * n) not in set(map(tuple, self.maps)):
            raise InvalidSpecification("an extension contains the identity")
        if any(t[e] < n and t[e] != e for t in self.maps):
            raise InvalidSpecification("extension members sending (0,e) into B0 must fix it")

    def is_trivial(self) -> bool:
        return len(self.maps) == 1

    def to_json(self) -> dict:
        return {"size": len(self.maps), "maps": [list(t) for t in self.maps]}


def normalize_representative(G: FiniteGroup, t: tuple) -> tuple:
    """A member of the class ``Iso(G) * t`` that fixes ``(0, e)`` when possible.

    If t sends ``(0,e)`` to ``(1,x)``, composing with ``tau * bar(x)`` moves it back.
    A map sending ``(0,e)`` elsewhere in B0 cannot be normalized within its class
    and is returned unchanged.
    """
    n, e = G.order, G.identity
    side, x = divmod(t[e], n)
    if side == 1:
        nu = compose(make_map(G, "Tau").realized, make_map(G, "Bar", x).realized)
        return compose(nu, t)
    return tuple(t)


def abci_extension_from_solving_set(ss: SolvingSet) -> ABCIExtension:
    """One representative per class of ``s1 = nu * s2`` (nu in Iso(G)), the identity for Iso(G) itself."""
    G = ss.group
    n = G.order
    iso = set(iso_set_realized(G))
    reps = [identity(2 * n)]
    for s in ss.maps:
        s = tuple(s)
        if any(compose(s, inverse(r)) in iso for r in reps):
            continue
        reps.append(normalize_representative(G, s))
    return ABCIExtension(G, reps)


def prune_extension(G: FiniteGroup, S: Iterable[int], extension: ABCIExtension) -> ABCIExtension:
    """Drop representatives whose targets are already reached by Iso(G) times earlier ones."""
    S = tuple(sorted(set(S)))
    X = haar(G, S)
    covered = set(iso_orbit_of(G, S))
    kept = [extension.maps[0]]
    for t in extension.maps[1:]:
        T = haar_set_of(G, X.relabel(t))
        if T is None:
            continue
        T = tuple(sorted(T))
        if T in covered:
            continue
        covered.update(iso_orbit_of(G, T))
        kept.append(t)
    return ABCIExtension(G, kept)


def solving_set_from_extension(G: FiniteGroup, extension: ABCIExtension) -> SolvingSet:
    return SolvingSet.from_extension(G, [t for t in extension.maps if not is_identity(t)])


# ------------------------------------------------------------ Cayley CI


def _left_regular(G: FiniteGroup) -> PermGroup:
    t = G.table
    elems = tuple(tuple(t[g][x] for x in G.elements) for g in G.elements)
    from .groups import _generating_set

    gens = tuple(elems[g] for g in _generating_set(G)) or (elems[G.identity],)
    return PermGroup(G.order, gens, elems, G.order)


def _regular_copy(G: FiniteGroup, delta: tuple) -> PermGroup:
    L = _left_regular(G)
    dinv = inverse(delta)
    elems = tuple(compose_all(dinv, h, delta) for h in L.elements)
    gens = tuple(compose_all(dinv, h, delta) for h in L.generators)
    return PermGroup(G.order, gens, elems, G.order)


def ci_by_definition(G: FiniteGroup, S: Iterable[int], bound: Optional[int] = None) -> bool:
    """Every Cayley digraph of G isomorphic to ``cayley(G,S)`` is ``cayley(G, alpha(S))``."""
    S = frozenset(S)
    images = {tuple(sorted(a[s] for s in S)) for a in automorphism_group(G)}
    return set(cayley_universe(G, S, bound)) <= images


def ci_check_cayley(G: FiniteGroup, S: Iterable[int], budget: Optional[int] = None,
                    bound: Optional[int] = None) -> bool:
    """True iff every regular copy of G in Aut(cayley(G,S)) is Aut-conjugate to G_L."""
    S = tuple(sorted(set(S)))
    X = cayley(G, S)
    A = automorphisms(X, budget, enumerate_elements=False)
    L = _left_regular(G)
    for T in cayley_universe(G, S, bound):
        delta = isomorphism(X, cayley(G, T))
        if conjugate_semiregular(A, L, _regular_copy(G, delta), budget) is None:
            return False
    return True


def ci_extension_cayley(G: FiniteGroup, S: Iterable[int], budget: Optional[int] = None,
                        bound: Optional[int] = None) -> list:
    """Identity-fixing isomorphisms ``t: cayley(G,S) -> cayley(G,T)``, one per Aut(G)-orbit of such T.

    The identity comes first (the orbit of S itself).
    """
    S = tuple(sorted(set(S)))
    X = cayley(G, S)
    auts = automorphism_group(G)
    universe = set(cayley_universe(G, S, bound))
    e = G.identity
    inv = G.inverses
    reps = [tuple(G.elements)]
    covered = {tuple(sorted(a[s] for s in S)) for a in auts}
    for T in sorted(universe):
        if T in covered:
            continue
        covered |= {tuple(sorted(a[x] for x in T)) for a in auts}
        delta = isomorphism(X, cayley(G, T), budget)
        shift = inv[delta[e]]
        t = tuple(G.table[shift][delta[x]] for x in G.elements)
        reps.append(t)
    return reps
