from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haariso.errors import BudgetExhausted, NotTransitive
from haariso.perm import (
    BlockSystem,
    PermGroup,
    StabilizerChain,
    are_conjugate_subgroups,
    block_systems,
    closure,
    compose,
    conjugate,
    conjugate_semiregular,
    cycle_type,
    cycles,
    equivalent_representations,
    fix_subgroup,
    from_cycles,
    identity,
    inverse,
    is_semiregular,
    is_transitive,
    minimal_blocks,
    orbits,
    perm_order,
    quotient_action,
)

perms8 = st.permutations(list(range(8))).map(tuple)


@given(perms8, perms8, perms8)
def test_composition_is_associative_and_applies_right_first(p, q, r):
    assert compose(p, compose(q, r)) == compose(compose(p, q), r)
    assert all(compose(p, q)[i] == p[q[i]] for i in range(8))


@given(perms8, perms8)
def test_inverse_and_conjugate(p, q):
    assert compose(p, inverse(p)) == identity(8)
    assert cycle_type(conjugate(p, q)) == cycle_type(p)


def test_cycles_and_order():
    p = from_cycles(7, (0, 1, 2), (3, 4))
    assert cycles(p) == [(0, 1, 2), (3, 4)]
    assert cycle_type(p) == (1, 1, 2, 3)
    assert perm_order(p) == 6
    assert perm_order(identity(4)) == 1


def test_symmetric_group_chain():
    chain = StabilizerChain(6, [from_cycles(6, (0, 1)), from_cycles(6, (0, 1, 2, 3, 4, 5))])
    assert chain.order() == 720
    assert all(chain.contains(p) for p in permutations(range(6)))
    assert len(set(chain.elements())) == 720


@settings(max_examples=30, deadline=None)
@given(st.lists(perms8, min_size=1, max_size=3))
def test_chain_order_matches_closure(gens):
    G = closure(gens)
    chain = StabilizerChain(8, gens)
    assert chain.order() == G.size()
    assert set(chain.elements()) == set(G.elements)


def test_closure_cap():
    with pytest.raises(BudgetExhausted):
        closure([from_cycles(8, (0, 1)), from_cycles(8, tuple(range(8)))], cap=100)


def test_blocks_of_dihedral_octagon():
    rot = from_cycles(8, tuple(range(8)))
    ref = tuple((-i) % 8 for i in range(8))
    D = closure([rot, ref])
    assert D.size() == 16 and is_transitive(D)
    B = minimal_blocks(D, (0, 4))
    assert sorted(map(sorted, B.blocks)) == [[0, 4], [1, 5], [2, 6], [3, 7]]
    sizes = sorted(len(b.blocks[0]) for b in block_systems(D))
    assert sizes == [1, 2, 4, 8]
    assert fix_subgroup(D, B).size() == 2
    assert quotient_action(D, B).size() == 8


def test_minimal_blocks_needs_transitivity():
    with pytest.raises(NotTransitive):
        minimal_blocks(closure([from_cycles(4, (0, 1))]), (0, 1))


def test_block_system_invariance():
    B = BlockSystem.from_partition(4, [[0, 2], [1, 3]])
    assert B.is_invariant_under([from_cycles(4, (0, 1, 2, 3))])
    assert not B.is_invariant_under([from_cycles(4, (0, 1))])


def test_orbits_and_semiregularity():
    G = closure([from_cycles(6, (0, 1, 2), (3, 4, 5))])
    assert sorted(map(sorted, orbits(G))) == [[0, 1, 2], [3, 4, 5]]
    assert is_semiregular(G)
    assert not is_semiregular(closure([from_cycles(6, (0, 1, 2))]))


def test_conjugate_subgroups():
    S6 = closure([from_cycles(6, (0, 1)), from_cycles(6, tuple(range(6)))])
    H = closure([from_cycles(6, (0, 1, 2), (3, 4, 5))])
    K = closure([from_cycles(6, (0, 3, 1), (2, 5, 4))])
    a = are_conjugate_subgroups(S6, H, K)
    assert a is not None
    ai = inverse(a)
    assert {compose(ai, compose(h, a)) for h in H.elements} == set(K.elements)
    six_cycle = closure([from_cycles(6, tuple(range(6)))])
    assert are_conjugate_subgroups(S6, H, six_cycle) is None


def test_semiregular_conjugation_without_element_list():
    gens = (from_cycles(6, (0, 1)), from_cycles(6, tuple(range(6))))
    S6 = PermGroup(6, gens, order=720)
    H = closure([from_cycles(6, (0, 1, 2), (3, 4, 5))])
    K = closure([from_cycles(6, (0, 4, 2), (1, 3, 5))])
    a = conjugate_semiregular(S6, H, K)
    ai = inverse(a)
    assert {compose(ai, compose(h, a)) for h in H.elements} == set(K.elements)


def test_equivalent_representations():
    g = from_cycles(6, (0, 1, 2), (3, 5, 4))
    F = closure([g])
    lam = equivalent_representations(F, [0, 1, 2], [3, 4, 5])
    assert all(lam[g[x]] == g[lam[x]] for x in lam)
    F2 = closure([from_cycles(5, (0, 1), (2, 3, 4))])
    assert equivalent_representations(F2, [0, 1], [2, 3, 4]) is None
