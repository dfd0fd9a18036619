import pytest

from haariso.errors import InvalidSpecification
from haariso.groups import (
    abelian_invariants,
    all_subgroups,
    automorphism_group,
    cyclic,
    decode_mixed_radix,
    encode_mixed_radix,
    group_from_json,
    invariant_factors,
    is_automorphism,
    is_homogeneous,
    is_normal,
    make_abelian,
    parse_group,
    quotient,
    subgroups_of_order,
    sylow_shape,
    sylows_cyclic_or_elementary,
)

from oracles import group_automorphisms, product_table


def test_mixed_radix_first_factor_most_significant():
    assert encode_mixed_radix((1, 2), (2, 4)) == 6
    assert decode_mixed_radix(6, (2, 4)) == (1, 2)
    for x in range(24):
        assert encode_mixed_radix(decode_mixed_radix(x, (2, 3, 4)), (2, 3, 4)) == x


def test_cayley_table_matches_direct_product():
    G = make_abelian([2, 4])
    assert [list(row) for row in G.table] == product_table(2, 4)


@pytest.mark.parametrize("factors, aut", [((3,), 2), ((4,), 2), ((5,), 4), ((2, 2), 6), ((2, 4), 8), ((3, 3), 48)])
def test_automorphism_counts(factors, aut):
    G = make_abelian(list(factors))
    auts = automorphism_group(G)
    assert len(auts) == aut
    assert all(is_automorphism(G, a) for a in auts)


def test_automorphisms_agree_with_scan():
    G = make_abelian([2, 4])
    assert sorted(tuple(a) for a in automorphism_group(G)) == sorted(group_automorphisms(product_table(2, 4)))


def test_invariant_factors():
    assert invariant_factors([2, 3, 4]) == (2, 12)
    assert invariant_factors([3, 3]) == (3, 3)
    assert abelian_invariants(make_abelian([6, 4])) == (2, 12)
    assert abelian_invariants(cyclic(15)) == (15,)


def test_parsing():
    G = parse_group("Z2xZ4")
    assert G.order == 8 and G.name == "Z2xZ4"
    assert parse_group("2,4").table == G.table
    assert group_from_json(G.descriptor()).table == G.table
    assert G.parse_set("(1,0) (0,2)") == frozenset({4, 2})
    assert G.parse_set("0,2,4,6") == frozenset({0, 2, 4, 6})
    assert parse_group("Z9").parse_set("1,3,8") == frozenset({1, 3, 8})
    with pytest.raises(InvalidSpecification):
        parse_group("Zx")


def test_order_four_subgroups_of_z2_z4():
    G = make_abelian([2, 4])
    subs = sorted(sorted(H.members) for H in subgroups_of_order(G, 4))
    assert subs == [[0, 1, 2, 3], [0, 2, 4, 6], [0, 2, 5, 7]]
    assert len(all_subgroups(G)) == 8
    assert all(is_normal(G, H) for H in subgroups_of_order(G, 4))


def test_quotient_by_order_two_subgroup():
    G = make_abelian([2, 4])
    H = next(H for H in subgroups_of_order(G, 2) if 4 in H.members)
    Q, projection, reps = quotient(G, H)
    assert Q.order == 4
    assert all(projection[G.mul(x, h)] == projection[x] for x in G.elements for h in H.members)
    assert len(reps) == 4


def test_sylow_shapes():
    assert sylow_shape(make_abelian([2, 4]), 2) == "other"
    assert sylows_cyclic_or_elementary(make_abelian([3, 3]))
    assert sylows_cyclic_or_elementary(cyclic(9))
    assert not sylows_cyclic_or_elementary(make_abelian([2, 4]))
    assert is_homogeneous(make_abelian([3, 3]))
    assert not is_homogeneous(make_abelian([2, 4]))
