"""Structured permutations of ``Z2 x G`` that normalize the left action of G.

Points are coded ``(i, g) -> i*|G| + g``. Composition follows :func:`perm.compose`:
``compose(p, q)`` applies ``q`` first, so ``tau^i * alpha_hat * bar(g)`` sends a
vertex through ``bar(g)``, then ``alpha_hat``, then ``tau^i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import kernels
from .config import DEFAULT
from .errors import BudgetExhausted, InvalidMap, Unsupported
from .graph import haar, haar_set_of
from .groups import FiniteGroup, automorphism_group, is_automorphism
from .perm import PermGroup, closure, compose_all, inverse

KINDS = ("GhatL", "Bar", "Tilde", "Tau", "SigmaHat", "Iota")


@dataclass(frozen=True, eq=False)
class HaarMap:
    group: FiniteGroup
    kind: str
    param: object  # element index, bijection images, or None
    realized: tuple

    def __call__(self, i: int, g: int) -> tuple:
        return divmod(self.realized[i * self.group.order + g], self.group.order)

    def to_json(self) -> dict:
        data = {"kind": self.kind, "realized": list(self.realized)}
        if isinstance(self.param, int):
            data["g"] = self.group.label(self.param)
        elif self.param is not None:
            data["sigma"] = list(self.param)
        return data


def _realize(G: FiniteGroup, side0, side1) -> tuple:
    """Permutation sending ``(0,x) -> side0(x)`` and ``(1,x) -> side1(x)``, each an ``(i, g)`` pair."""
    n = G.order
    p = [0] * (2 * n)
    for x in G.elements:
        i, y = side0(x)
        p[x] = i * n + y
        i, y = side1(x)
        p[n + x] = i * n + y
    return tuple(p)


def make_map(G: FiniteGroup, kind: str, arg=None) -> HaarMap:
    """Build one of ``GhatL(g)``, ``Bar(g)``, ``Tilde(g)``, ``Tau``, ``SigmaHat(sigma)``, ``Iota``."""
    t = G.table
    if kind == "GhatL":
        g = int(arg)
        p = _realize(G, lambda x: (0, t[g][x]), lambda x: (1, t[g][x]))
    elif kind == "Bar":
        g = int(arg)
        gi = G.inv(g)
        p = _realize(G, lambda x: (0, x), lambda x: (1, t[x][gi]))
    elif kind == "Tilde":
        g = int(arg)
        gi = G.inv(g)
        p = _realize(G, lambda x: (0, t[x][gi]), lambda x: (1, x))
    elif kind == "Tau":
        p = _realize(G, lambda x: (1, x), lambda x: (0, x))
    elif kind == "SigmaHat":
        sigma = tuple(arg)
        if sorted(sigma) != list(G.elements):
            raise InvalidMap("SigmaHat needs a bijection of the group elements")
        arg = sigma
        p = _realize(G, lambda x: (0, sigma[x]), lambda x: (1, sigma[x]))
    elif kind == "Iota":
        if not G.is_abelian:
            raise Unsupported("inversion is an automorphism only for abelian groups")
        inv = G.inverses
        p = _realize(G, lambda x: (0, inv[x]), lambda x: (1, inv[x]))
    else:
        raise InvalidMap(f"unknown map kind {kind!r}; expected one of {', '.join(KINDS)}")
    return HaarMap(G, kind, arg, p)


def ghat_left(G: FiniteGroup) -> PermGroup:
    """``G_hat_L``: the left-regular action on both halves, elements in group order."""
    elems = tuple(make_map(G, "GhatL", g).realized for g in G.elements)
    return PermGroup(2 * G.order, elems, elems, G.order)


@dataclass(frozen=True, eq=False)
class IsoElement:
    """``tau^i * alpha_hat * bar(g)``."""

    group: FiniteGroup
    i: int
    alpha: tuple
    g: int

    @cached_property
    def realized(self) -> tuple:
        G = self.group
        t, inv = G.table, G.inverses
        gi = inv[self.g]
        a, i = self.alpha, self.i
        return _realize(G, lambda x: (i, a[x]), lambda x: (1 - i, a[t[x][gi]]))

    def set_map(self) -> tuple:
        """The induced bijection of G on connection sets: ``x -> alpha(x g^-1)``, inverted when tau is present."""
        G = self.group
        gi = G.inverses[self.g]
        images = [self.alpha[G.table[x][gi]] for x in G.elements]
        if self.i:
            images = [G.inverses[y] for y in images]
        return tuple(images)

    def to_json(self) -> dict:
        return {"tau": self.i, "alpha": list(self.alpha), "g": self.group.label(self.g)}

    def __repr__(self):
        return f"IsoElement(tau={self.i}, alpha={self.alpha}, g={self.group.label(self.g)})"


def iso_set(G: FiniteGroup, bound: Optional[int] = None) -> list:
    """All ``2*|Aut G|*|G|`` elements of Iso(G), identity first."""
    auts = automorphism_group(G, bound)
    return [IsoElement(G, i, a, g) for i in (0, 1) for a in auts for g in G.elements]


_ISO_CACHE: dict = {}


def iso_set_realized(G: FiniteGroup) -> tuple:
    hit = _ISO_CACHE.get(G.key)
    if hit is None:
        hit = tuple(m.realized for m in iso_set(G))
        _ISO_CACHE[G.key] = hit
    return hit


def as_iso_element(G: FiniteGroup, p: Sequence[int]) -> Optional[IsoElement]:
    """Read ``p`` as ``tau^i * alpha_hat * bar(c)``, or None when it is not in Iso(G)."""
    n = G.order
    i, _ = divmod(p[G.identity], n)
    alpha = []
    for x in G.elements:
        side, y = divmod(p[x], n)
        if side != i:
            return None
        alpha.append(y)
    alpha = tuple(alpha)
    if not is_automorphism(G, alpha):
        return None
    side, y = divmod(p[n + G.identity], n)
    if side != 1 - i:
        return None
    # (1, e) -> (1-i, alpha(g^-1)), so g^-1 = alpha^-1(y)
    ainv = [0] * n
    for x, ax in enumerate(alpha):
        ainv[ax] = x
    g = G.inv(ainv[y])
    m = IsoElement(G, i, alpha, g)
    return m if m.realized == tuple(p) else None


def normalizer_of_GhatL(G: FiniteGroup, cap: Optional[int] = None) -> PermGroup:
    """The group generated by tau, the alpha_hat, the tilde and bar translations."""
    auts = automorphism_group(G)
    gens = [make_map(G, "Tau").realized]
    gens += [make_map(G, "SigmaHat", a).realized for a in auts[1:]]
    gens += [make_map(G, "Tilde", g).realized for g in G.elements if g != G.identity]
    gens += [make_map(G, "Bar", g).realized for g in G.elements if g != G.identity]
    return closure(gens, cap, degree=2 * G.order)


def normalizes(p: Sequence[int], group: PermGroup) -> bool:
    """True when ``p^-1 H p = H`` (checked on generators, H listed)."""
    pinv = inverse(tuple(p))
    return all(compose_all(pinv, h, tuple(p)) in group.element_set for h in group.generators)


def brute_force_normalizer(G: FiniteGroup, max_degree: int = 10) -> list:
    """Every permutation of ``Z2 x G`` normalizing G_hat_L, by scanning the full symmetric group."""
    degree = 2 * G.order
    if degree > max_degree:
        raise BudgetExhausted(f"scanning S_{degree} exceeds the configured limit S_{max_degree}")
    L = ghat_left(G)
    gens = [make_map(G, "GhatL", g).realized for g in _small_generating_set(G)]
    return kernels.normalizing_permutations(degree, list(L.elements), gens)


def _small_generating_set(G):
    from .groups import _generating_set

    return _generating_set(G) or [G.identity]


def verify_normalizer(G: FiniteGroup, max_degree: int = 10) -> bool:
    scanned = set(brute_force_normalizer(G, max_degree))
    built = normalizer_of_GhatL(G)
    return scanned == set(built.elements)


def image_graph_set(G: FiniteGroup, p: Sequence[int], S: Iterable[int]) -> frozenset:
    """T with ``p(haar(G,S)) = haar(G,T)``, read off the neighbours of ``(0, e)`` after transporting edges."""
    image = haar(G, S).relabel(p)
    T = haar_set_of(G, image)
    if T is None:
        raise InvalidMap("the image is not a Haar graph of this group")
    return T


def apply_to_connection_set(m, S: Iterable[int]) -> frozenset:
    """Image of S under an Iso(G) element (fast path) or under a HaarMap/permutation (edge transport)."""
    S = frozenset(S)
    if isinstance(m, IsoElement):
        sm = m.set_map()
        return frozenset(sm[s] for s in S)
    if isinstance(m, HaarMap):
        return image_graph_set(m.group, m.realized, S)
    raise InvalidMap("pass an IsoElement or HaarMap; use image_graph_set for bare permutations")


# ------------------------------------------------ connection-set orbits


def set_action_generators(G: FiniteGroup) -> list:
    """Bijections of G generating the Iso(G) action on connection sets."""
    from .groups import _generating_set

    auts = automorphism_group(G)
    t, inv = G.table, G.inverses
    gens = [tuple(inv[x] for x in G.elements)]
    gens += list(auts[1:])
    gens += [tuple(t[x][inv[g]] for x in G.elements) for g in _generating_set(G)]
    return gens


def mask_of(S: Iterable[int]) -> int:
    m = 0
    for s in S:
        m |= 1 << s
    return m


def set_of(mask: int) -> tuple:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _map_mask(mask: int, images: Sequence[int]) -> int:
    out, i = 0, 0
    while mask:
        if mask & 1:
            out |= 1 << images[i]
        mask >>= 1
        i += 1
    return out


def iso_orbits(G: FiniteGroup, sizes: Optional[Iterable[int]] = None, bound: Optional[int] = None) -> list:
    """Iso(G)-orbits of connection sets as ``(representative, orbit)`` pairs of sorted tuples.

    The representative is the lexicographically least member; orbits are
    listed by size of the sets, then representative.
    """
    n = G.order
    bound = DEFAULT.subset_enum_bound if bound is None else bound
    if n > bound:
        raise BudgetExhausted(f"|G| = {n} exceeds the subset enumeration bound {bound}")
    wanted = None if sizes is None else set(sizes)
    gens = set_action_generators(G)
    seen = bytearray(1 << n)
    result = []
    for mask in range(1 << n):
        if seen[mask] or (wanted is not None and bin(mask).count("1") not in wanted):
            continue
        seen[mask] = 1
        orbit, frontier = [mask], [mask]
        while frontier:
            nxt = []
            for m in frontier:
                for g in gens:
                    y = _map_mask(m, g)
                    if not seen[y]:
                        seen[y] = 1
                        orbit.append(y)
                        nxt.append(y)
            frontier = nxt
        members = sorted(set_of(m) for m in orbit)
        result.append((members[0], members))
    result.sort(key=lambda r: (len(r[0]), r[0]))
    return result


def iso_orbit_of(G: FiniteGroup, S: Iterable[int]) -> list:
    """Sorted connection sets reachable from S by Iso(G)."""
    gens = set_action_generators(G)
    start = mask_of(S)
    seen, frontier = {start}, [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                y = _map_mask(m, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(set_of(m) for m in seen)
