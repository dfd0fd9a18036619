"""Case analysis and recursive reduction of the isomorphism problem for Haar graphs of abelian groups.

Each input lands in one case: disconnected, reducible (has twins, so it is a
wreath product with an empty graph), stable (the automorphism group is twice
that of a translated Cayley digraph), or exceptional. The first three reduce
to a component, a block quotient, or the Cayley digraph; the reduction
produces an extension ``E`` such that ``Iso(A) * E`` is a solving set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bci import (
    ABCIExtension,
    SolvingSet,
    ci_check_cayley,
    ci_extension_cayley,
    haar_form,
    haar_universe,
    normalize_representative,
)
from .config import DEFAULT, Config
from .errors import DegenerateInput, InvalidAction, Unsupported, WrongCase
from .graph import (
    automorphisms,
    canonical_form,
    cayley,
    components,
    haar,
    haar_set_of,
    is_connected,
    isomorphism,
    twin_classes,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    automorphism_group,
    generated_subgroup,
    quotient,
    subgroup_as_group,
    subgroups_of_order,
    sylows_cyclic_or_elementary,
)
from .haar_maps import iso_orbit_of, iso_orbits, iso_set_realized, make_map
from .perm import compose, compose_all, equivalent_representations, identity, inverse


# --------------------------------------------------------------- labels


@dataclass(frozen=True)
class CaseLabel:
    kind: str  # Disconnected | WreathReducible | Stable | Exceptional
    a: Optional[int] = None
    note: str = ""

    def __str__(self):
        if self.kind == "Stable":
            return f"Stable(a={self.a})"
        return self.kind

    def to_json(self) -> dict:
        data = {"kind": self.kind}
        if self.a is not None:
            data["a"] = self.a
        if self.note:
            data["note"] = self.note
        return data


def _translate(A: FiniteGroup, a: int, S) -> tuple:
    return tuple(sorted(A.table[a][s] for s in S))


def _require_abelian(A: FiniteGroup):
    if not A.is_abelian:
        raise Unsupported("the reduction pipeline handles abelian groups only")


def stable_shift(A: FiniteGroup, S, budget: Optional[int] = None) -> Optional[int]:
    """Least a with ``|Aut haar(A,S)| = 2 |Aut cayley(A, a+S)|``, or None.

    The maps ``(i,j) -> (i+1,-j)`` and ``sigma_hat`` for sigma in
    Aut(cayley(A,a+S)) are always automorphisms of ``haar(A, a+S)`` and
    generate a group of order ``2 |Aut cayley(A,a+S)|``, so equality of
    orders means the whole group has that form.
    """
    S = tuple(sorted(set(S)))
    order = automorphisms(haar(A, S), budget, enumerate_elements=False).order
    if order % 2:
        return None
    for a in A.elements:
        Sa = _translate(A, a, S)
        cay = automorphisms(cayley(A, Sa), budget, enumerate_elements=False)
        if 2 * cay.order == order:
            X = haar(A, Sa)
            flip = compose(make_map(A, "Tau").realized, make_map(A, "Iota").realized)
            assert X.is_automorphism(flip)
            for g in cay.generators:
                assert X.is_automorphism(make_map(A, "SigmaHat", g).realized)
            return a
    return None


def classify(A: FiniteGroup, S, budget: Optional[int] = None) -> CaseLabel:
    _require_abelian(A)
    S = tuple(sorted(set(S)))
    if not S:
        return CaseLabel("Exceptional", note="empty connection set")
    X = haar(A, S)
    if not is_connected(X):
        return CaseLabel("Disconnected")
    if any(len(c) > 1 for c in twin_classes(X)):
        return CaseLabel("WreathReducible")
    a = stable_shift(A, S, budget)
    if a is not None:
        return CaseLabel("Stable", a)
    return CaseLabel("Exceptional")


def case4_evidence(A: FiniteGroup, S, budget: Optional[int] = None) -> dict:
    """Checks that ``haar(A,S)`` fits none of the first three cases and what it looks like instead."""
    S = tuple(sorted(set(S)))
    X = haar(A, S)
    n = A.order
    sides = [0] * n + [1] * n
    F = automorphisms(X, budget, colors=sides, enumerate_elements=False)
    pinned = automorphisms(X, budget, colors=[0] * n + [1 + v for v in range(n)], enumerate_elements=False)
    lam = None
    if F.order > 1:
        lam = equivalent_representations(F, range(n), range(n, 2 * n), budget)
    return {
        "connected": is_connected(X),
        "twin_free": all(len(c) == 1 for c in twin_classes(X)),
        "stable_shift": stable_shift(A, S, budget),
        "aut_order": automorphisms(X, budget, enumerate_elements=False).order,
        "bipartition_stabilizer_order": F.order,
        "faithful_on_B1": pinned.order == 1,
        "equivalent_constituents": lam is not None,
    }


# ------------------------------------------------------------ alignment


def align_disconnected(A: FiniteGroup, S):
    """``(a, H)`` with ``0`` in ``a+S`` and ``H = <(a+S)-(a+S)>``; components of ``haar(A,a+S)`` are cosets of ``Z2 x H``."""
    _require_abelian(A)
    S = tuple(sorted(set(S)))
    if not S:
        raise DegenerateInput("the empty connection set has no edges to align")
    a = A.inv(S[0])
    Sa = _translate(A, a, S)
    diffs = {A.table[x][A.inv(y)] for x in Sa for y in Sa}
    H = generated_subgroup(A, diffs)
    n = A.order
    comps = components(haar(A, Sa))
    for comp in comps:
        zero_side = sorted(v for v in comp if v < n)
        one_side = sorted(v - n for v in comp if v >= n)
        g = zero_side[0]
        coset = sorted(A.table[g][h] for h in H.members)
        assert zero_side == coset and one_side == coset
    return a, H


def bar_shift(A: FiniteGroup, a: int) -> tuple:
    """``Bar(-a)``, which carries ``haar(A,S)`` to ``haar(A,a+S)``."""
    return make_map(A, "Bar", A.inv(a)).realized


# ------------------------------------------------------------ relabeling


@dataclass
class Relabeling:
    source_group: FiniteGroup
    target_group: FiniteGroup
    map: tuple
    base_vertices: tuple

    def to_json(self) -> dict:
        return {
            "source": self.source_group.descriptor(),
            "target": self.target_group.descriptor(),
            "map": list(self.map),
            "base_vertices": list(self.base_vertices),
        }


def relabel_semitransitive(graph, group: FiniteGroup, action: Sequence[tuple]):
    """Coordinates for a Haar graph from a semiregular two-orbit action of ``group``.

    ``action[g]`` is the permutation of the graph's vertices for element g.
    With u the least vertex and w the least vertex of the other orbit, the map
    ``g(u) -> (0,g)``, ``g(w) -> (1,g)`` carries the graph onto
    ``haar(group, T)`` with ``T = {g : g(w) adjacent to u}``.
    """
    n = group.order
    if graph.n != 2 * n or len(action) != n:
        raise InvalidAction("the action must have two orbits of size |group|")
    for g in group.elements:
        if not graph.is_automorphism(action[g]):
            raise InvalidAction("the action does not preserve the graph")
    u = 0
    orbit_u = {action[g][u] for g in group.elements}
    rest = [v for v in range(graph.n) if v not in orbit_u]
    if len(orbit_u) != n or not rest:
        raise InvalidAction("the action is not semiregular with two orbits")
    w = rest[0]
    orbit_w = {action[g][w] for g in group.elements}
    if len(orbit_w) != n:
        raise InvalidAction("the action is not semiregular with two orbits")
    t = group.table
    for g in group.elements:
        for h in group.elements:
            if tuple(action[t[g][h]]) != compose(action[g], action[h]):
                raise InvalidAction("the action is not a homomorphism")
    r = [0] * graph.n
    for g in group.elements:
        r[action[g][u]] = g
        r[action[g][w]] = n + g
    r = tuple(r)
    T = frozenset(g for g in group.elements if action[g][w] in graph.out[u])
    target = haar(group, T)
    assert graph.is_isomorphism_to(target, r)
    return T, Relabeling(group, group, r, (u, w))


def _action_via(group: FiniteGroup, psi: tuple) -> list:
    """``psi^-1 g_hat_L psi`` for each g: the action of ``group`` transported along an isomorphism."""
    pinv = inverse(psi)
    return [compose_all(pinv, make_map(group, "GhatL", g).realized, psi) for g in group.elements]


# ----------------------------------------------------------------- twins


def twin_quotient(A: FiniteGroup, S):
    """``(C, D, U, projection, reps)`` with C the translation stabilizer of S, ``D = A/C`` and ``U = S/C``."""
    _require_abelian(A)
    S = frozenset(S)
    C = Subgroup(A, tuple(x for x in A.elements if frozenset(A.table[x][s] for s in S) == S))
    if C.order == 1:
        raise WrongCase("the connection set is not a union of cosets of a nontrivial subgroup")
    D, projection, reps = quotient(A, C)
    U = frozenset(projection[s] for s in S)
    return C, D, U, projection, reps


# -------------------------------------------------------------- lifting


def _lift(A: FiniteGroup, sub_order: int, decompose: Sequence[tuple], assemble: dict, m: Sequence[int]) -> tuple:
    """Extend a map of ``Z2 x B`` to ``Z2 x A``.

    ``decompose[x] = (b, j)`` splits x into a coordinate b in B and a fibre
    index j; ``assemble[(b', j)]`` puts them back together on the target side.
    """
    n = A.order
    p = [0] * (2 * n)
    for i in (0, 1):
        for x in A.elements:
            b, j = decompose[x]
            i2, b2 = divmod(m[i * sub_order + b], sub_order)
            p[i * n + x] = i2 * n + assemble[(b2, j)]
    return tuple(p)


def _subgroup_coords(A: FiniteGroup, H: Subgroup):
    """Decomposition ``x = rep_j + h`` for the cosets of H, with H indexed as its own group."""
    Hg, emb = subgroup_as_group(H)
    index = {h: i for i, h in enumerate(emb)}
    reps, decompose = [], [None] * A.order
    for x in A.elements:
        if decompose[x] is not None:
            continue
        j = len(reps)
        reps.append(x)
        for h in emb:
            decompose[A.table[x][h]] = (index[h], j)
    assemble = {(index[h], j): A.table[r][h] for j, r in enumerate(reps) for h in emb}
    return Hg, emb, decompose, assemble


def _quotient_coords(A: FiniteGroup, C: Subgroup, D, projection, reps):
    """Decomposition ``x = rep(d) + c`` with c indexed by its position in C."""
    cindex = {c: i for i, c in enumerate(C.members)}
    decompose = []
    for x in A.elements:
        d = projection[x]
        decompose.append((d, cindex[A.table[x][A.inv(reps[d])]]))
    assemble = {(d, i): A.table[reps[d]][c] for d in D.elements for i, c in enumerate(C.members)}
    return decompose, assemble


def _subgroup_classes(A: FiniteGroup, order: int) -> list:
    """Subgroups of the given order, one per Aut(A)-orbit (least member list first)."""
    auts = automorphism_group(A)
    seen, reps = set(), []
    for K in subgroups_of_order(A, order):
        if K.members in seen:
            continue
        reps.append(K)
        for a in auts:
            seen.add(tuple(sorted(a[k] for k in K.members)))
    return reps


def _same_class(A: FiniteGroup, H: Subgroup, K: Subgroup) -> bool:
    return any(tuple(sorted(a[h] for h in H.members)) == K.members for a in automorphism_group(A))


def _find_connection_set(group: FiniteGroup, size: int, form: bytes):
    for rep, _ in iso_orbits(group, sizes=[size], bound=max(group.order, DEFAULT.subset_enum_bound)):
        if haar_form(group, rep) == form:
            return rep
    return None


# ---------------------------------------------------------------- traces


@dataclass
class ReductionStep:
    depth: int
    group: dict
    connection_set: list
    label: CaseLabel
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "group": self.group,
            "S": self.connection_set,
            "label": self.label.to_json(),
            "witnesses": self.witnesses,
        }


@dataclass
class ReductionTrace:
    group: FiniteGroup
    connection_set: tuple
    steps: list
    extension: Optional[list]  # maps t with Iso(A)*{t} a solving set; None when exceptional
    exceptional: bool = False
    degenerate: bool = False
    fallback: bool = False
    notes: list = field(default_factory=list)

    @property
    def label(self) -> CaseLabel:
        return self.steps[0].label

    def solving_set(self) -> Optional[SolvingSet]:
        if self.extension is None:
            return None
        tag = "brute-force" if self.fallback else "extension"
        ss = SolvingSet.from_extension(self.group, [t for t in self.extension[1:]], tag)
        ss.degenerate = self.degenerate
        return ss

    def abci_extension(self) -> Optional[ABCIExtension]:
        if self.extension is None:
            return None
        return ABCIExtension(self.group, list(self.extension))

    def to_json(self, include_maps: bool = True) -> dict:
        data = {
            "group": self.group.descriptor(),
            "S": self.group.format_set(self.connection_set),
            "label": self.label.to_json(),
            "terminal": "exceptional" if self.extension is None else "solving-set",
            "exceptional": self.exceptional,
            "degenerate": self.degenerate,
            "fallback": self.fallback,
            "steps": [s.to_json() for s in self.steps],
        }
        if self.extension is not None:
            data["extension_size"] = len(self.extension)
            if include_maps:
                data["extension"] = [list(t) for t in self.extension]
        if self.notes:
            data["notes"] = list(self.notes)
        return data


class _Context:
    def __init__(self, config: Config, fallback: bool):
        self.config = config
        self.fallback = fallback
        self.steps: list = []
        self.exceptional = False
        self.used_fallback = False
        self.notes: list = []


def _prune(A: FiniteGroup, S, maps) -> list:
    """Identity first, then one representative per new Iso(A)-orbit of reached connection sets."""
    X = haar(A, S)
    covered = set(iso_orbit_of(A, S))
    kept = [identity(2 * A.order)]
    for t in maps:
        T = haar_set_of(A, X.relabel(t))
        assert T is not None, "reduction produced a map that does not land on a Haar graph"
        T = tuple(sorted(T))
        if T in covered:
            continue
        covered.update(iso_orbit_of(A, T))
        kept.append(normalize_representative(A, t))
    return kept


def _full_maps(A: FiniteGroup, ext: list) -> list:
    """``Iso(A) * ext`` as a list (the solving set of a sub-problem, to be lifted)."""
    isos = iso_set_realized(A)
    out, seen = [], set()
    for t in ext:
        for m in isos:
            s = compose(m, t)
            if s not in seen:
                seen.add(s)
                out.append(s)
    return out


def _brute_force_extension(A: FiniteGroup, S) -> list:
    """One isomorphism per Iso(A)-orbit of the Haar universe, normalized to fix ``(0,e)``."""
    X = haar(A, S)
    maps = []
    for T in haar_universe(A, S):
        phi = isomorphism(X, haar(A, T))
        side, x = divmod(phi[A.identity], A.order)
        if side == 0 and x != A.identity:
            phi = compose(make_map(A, "GhatL", A.inv(x)).realized, phi)
        maps.append(phi)
    return _prune(A, S, maps)


def _solve(A: FiniteGroup, S: tuple, depth: int, ctx: _Context) -> Optional[list]:
    budget = ctx.config.backtrack_budget
    label = classify(A, S, budget)
    step = ReductionStep(depth, A.descriptor(), A.format_set(S), label)
    ctx.steps.append(step)

    if label.kind == "Exceptional" and not S:
        step.witnesses["degenerate"] = True
        return [identity(2 * A.order)]
    if label.kind == "Exceptional":
        ctx.exceptional = True
        step.witnesses["case4"] = case4_evidence(A, S, budget)
        if ctx.fallback:
            ctx.used_fallback = True
            return _brute_force_extension(A, S)
        return None
    if label.kind == "Disconnected":
        return _reduce_disconnected(A, S, depth, ctx, step)
    if label.kind == "WreathReducible":
        return _reduce_wreath(A, S, depth, ctx, step)
    return _reduce_stable(A, S, label.a, step, budget)


def _reduce_disconnected(A, S, depth, ctx, step) -> Optional[list]:
    a, H = align_disconnected(A, S)
    beta = bar_shift(A, a)
    Sa = _translate(A, a, S)
    Hg, emb, decompose, assemble = _subgroup_coords(A, H)
    index = {h: i for i, h in enumerate(emb)}
    S_H = tuple(sorted(index[s] for s in Sa))
    step.witnesses.update({"a": a, "H": A.format_set(H.members), "component_set": Hg.format_set(S_H)})
    sub = _solve(Hg, S_H, depth + 1, ctx)
    if sub is None:
        return None
    maps = [compose(_lift(A, Hg.order, decompose, assemble, m), beta) for m in _full_maps(Hg, sub)]

    relabelings = []
    if not sylows_cyclic_or_elementary(A):
        component = haar(Hg, S_H)
        form = canonical_form(component)
        for K in _subgroup_classes(A, H.order):
            if _same_class(A, H, K):
                continue
            Kg, embK, _, assembleK = _subgroup_coords(A, K)
            U = _find_connection_set(Kg, len(S_H), form)
            if U is None:
                continue
            psi = isomorphism(component, haar(Kg, U))
            T_K, rel = relabel_semitransitive(component, Kg, _action_via(Kg, psi))
            relabelings.append({"K": A.format_set(K.members), "T": Kg.format_set(sorted(T_K)), "relabeling": rel.to_json()})
            subK = _solve(Kg, tuple(sorted(T_K)), depth + 1, ctx)
            if subK is None:
                return None
            for m in _full_maps(Kg, subK):
                maps.append(compose(_lift(A, Hg.order, decompose, assembleK, compose(m, rel.map)), beta))
    step.witnesses["relabelings"] = relabelings
    return _prune(A, S, maps)


def _reduce_wreath(A, S, depth, ctx, step) -> Optional[list]:
    C, D, U, projection, reps = twin_quotient(A, S)
    decompose, assemble = _quotient_coords(A, C, D, projection, reps)
    U = tuple(sorted(U))
    step.witnesses.update({"C": A.format_set(C.members), "D": D.descriptor(), "U": D.format_set(U)})
    sub = _solve(D, U, depth + 1, ctx)
    if sub is None:
        return None
    maps = [_lift(A, D.order, decompose, assemble, m) for m in _full_maps(D, sub)]

    relabelings = []
    if not sylows_cyclic_or_elementary(A) and D.order > 1:
        quotient_graph = haar(D, U)
        form = canonical_form(quotient_graph)
        for C2 in _subgroup_classes(A, C.order):
            if _same_class(A, C, C2):
                continue
            L, proj2, reps2 = quotient(A, C2)
            _, assemble2 = _quotient_coords(A, C2, L, proj2, reps2)
            U2 = _find_connection_set(L, len(U), form)
            if U2 is None:
                continue
            psi = isomorphism(quotient_graph, haar(L, U2))
            T_L, rel = relabel_semitransitive(quotient_graph, L, _action_via(L, psi))
            relabelings.append({"C": A.format_set(C2.members), "T": L.format_set(sorted(T_L)), "relabeling": rel.to_json()})
            subL = _solve(L, tuple(sorted(T_L)), depth + 1, ctx)
            if subL is None:
                return None
            for m in _full_maps(L, subL):
                maps.append(_lift(A, D.order, decompose, assemble2, compose(m, rel.map)))
    step.witnesses["relabelings"] = relabelings
    return _prune(A, S, maps)


def _reduce_stable(A, S, a, step, budget) -> list:
    beta = bar_shift(A, a)
    Sa = _translate(A, a, S)
    ts = ci_extension_cayley(A, Sa, budget)
    step.witnesses.update({"a": a, "cayley_set": A.format_set(Sa), "ci_extension_size": len(ts)})
    maps = [compose(make_map(A, "SigmaHat", t).realized, beta) for t in ts]
    return _prune(A, S, maps)


def reduce_disconnected(A: FiniteGroup, S, config: Config = DEFAULT) -> ReductionTrace:
    if classify(A, S).kind != "Disconnected":
        raise WrongCase("the Haar graph is connected")
    return full_pipeline(A, S, config)


def reduce_wreath(A: FiniteGroup, S, config: Config = DEFAULT) -> ReductionTrace:
    if classify(A, S).kind != "WreathReducible":
        raise WrongCase("the Haar graph is disconnected or twin-free")
    return full_pipeline(A, S, config)


def reduce_stable(A: FiniteGroup, S, config: Config = DEFAULT) -> ReductionTrace:
    label = classify(A, S, config.backtrack_budget)
    if label.kind != "Stable":
        raise WrongCase(f"the Haar graph is {label}, not stable")
    trace = full_pipeline(A, S, config)
    a = label.a
    trace.steps[0].witnesses["cayley_ci"] = ci_check_cayley(A, _translate(A, a, S), config.backtrack_budget)
    return trace


def full_pipeline(A: FiniteGroup, S, config: Config = DEFAULT, fallback: bool = False) -> ReductionTrace:
    """Classify and reduce recursively.

    Exceptional inputs (anywhere in the recursion) end the trace without a
    solving set, unless ``fallback`` asks for a brute-force one, in which case
    the trace is still flagged exceptional and marked as using the fallback.
    """
    _require_abelian(A)
    S = tuple(sorted(set(S)))
    ctx = _Context(config, fallback)
    ext = _solve(A, S, 0, ctx)
    degenerate = not S
    trace = ReductionTrace(A, S, ctx.steps, ext, ctx.exceptional, degenerate, ctx.used_fallback, ctx.notes)
    if degenerate:
        trace.notes.append("empty connection set: the edgeless graph is reached by Iso(A) alone")
    if ctx.used_fallback:
        trace.notes.append("exceptional sub-problem solved by direct isomorphism search")
    return trace
