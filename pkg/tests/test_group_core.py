import itertools

import pytest
from hypothesis import given, strategies as st

from eqorbit.group_core import (FiniteGroup, GroupError, Subgroup, all_family, builtin_group,
                                conjugacy_classes, coset_gset, disjoint_union, equivariant_maps,
                                family_closure, from_permutations, gset_fixed_points,
                                is_equivariant, subgroup_lattice, trivial_family)

GROUPS = ["c1", "c2", "c3", "c4", "c6", "s3", "d8", "klein"]


def brute_force_subgroups(G):
    """Every subset closed under multiplication and containing e."""
    out = set()
    others = [g for g in G.elements if g != G.identity]
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            s = set(combo) | {G.identity}
            if all(G.mul(a, b) in s for a in s for b in s):
                out.add(frozenset(s))
    return out


@pytest.mark.parametrize("name,count", [("c2", 2), ("s3", 6), ("c4", 3)])
def test_lattice_sizes(name, count):
    assert len(subgroup_lattice(builtin_group(name))) == count


@pytest.mark.parametrize("name", ["c2", "c3", "c4", "s3", "klein", "c6"])
def test_lattice_matches_subset_enumeration(name):
    G = builtin_group(name)
    assert {frozenset(H.elements) for H in subgroup_lattice(G)} == brute_force_subgroups(G)


def test_s3_orders():
    orders = sorted(H.order for H in subgroup_lattice(builtin_group("s3")))
    assert orders == [1, 2, 2, 2, 3, 6]


def test_family_closure_examples():
    C2 = builtin_group("c2")
    assert family_closure(C2, [C2.whole()]).members == all_family(C2).members
    S3 = builtin_group("s3")
    rot = S3.subgroup(["(123)"])
    assert [H.order for H in family_closure(S3, [rot])] == [1, 3]
    for name in GROUPS:
        G = builtin_group(name)
        assert family_closure(G, [G.trivial()]).members == trivial_family(G).members


def test_family_rejects_unclosed_sets():
    from eqorbit.group_core import Family
    S3 = builtin_group("s3")
    refl = S3.subgroup(["(12)"])
    with pytest.raises(GroupError):
        Family(S3, (S3.trivial(), refl))  # conjugates missing
    with pytest.raises(GroupError):
        Family(S3, (refl,))


@pytest.mark.parametrize("name", GROUPS)
def test_family_closure_idempotent_and_monotone(name):
    G = builtin_group(name)
    subs = subgroup_lattice(G)
    for H in subs:
        f = family_closure(G, [H])
        assert family_closure(G, f.members).members == f.members
        for K in subs:
            g = family_closure(G, [H, K])
            assert set(f.members) <= set(g.members)


def test_coset_examples():
    C2 = builtin_group("c2")
    S = coset_gset(C2, C2.trivial())
    assert S.size == 2 and S.action[1] == (1, 0)
    P = coset_gset(C2, C2.whole())
    assert P.size == 1 and P.action == ((0,), (0,))
    S3 = builtin_group("s3")
    assert coset_gset(S3, S3.subgroup(["(12)"])).size == 3


def test_fixed_point_examples():
    C2 = builtin_group("c2")
    assert gset_fixed_points(coset_gset(C2, C2.trivial()), C2.whole()) == ()
    assert gset_fixed_points(coset_gset(C2, C2.whole()), C2.whole()) == (0,)
    S3 = builtin_group("s3")
    S = coset_gset(S3, S3.subgroup(["(12)"]))
    K = S3.subgroup(["(13)"])
    # pointwise check: s is fixed iff its stabilizer contains K
    expect = tuple(s for s in range(S.size) if K.is_subgroup_of(S.stabilizer(s)))
    assert gset_fixed_points(S, K) == expect and len(expect) == 1


def test_equivariant_map_examples():
    C2 = builtin_group("c2")
    free, point = coset_gset(C2, C2.trivial()), coset_gset(C2, C2.whole())
    assert len(equivariant_maps(free, free)) == 2
    assert equivariant_maps(point, free) == []
    assert equivariant_maps(free, point) == [(0, 0)]


def all_tables(S, T):
    return [t for t in itertools.product(range(T.size), repeat=S.size) if is_equivariant(S, T, t)]


@pytest.mark.parametrize("name", ["c2", "c4", "s3", "klein"])
def test_equivariant_maps_bijection_with_fixed_points(name):
    G = builtin_group(name)
    subs = subgroup_lattice(G)
    for H in subs:
        for K in subs:
            S, T = coset_gset(G, H), coset_gset(G, K)
            maps = equivariant_maps(S, T)
            assert maps == sorted(all_tables(S, T))
            # f |-> f(eH) is the bijection
            assert sorted(m[0] for m in maps) == list(gset_fixed_points(T, H))


@pytest.mark.parametrize("name", GROUPS)
def test_lagrange(name):
    G = builtin_group(name)
    for H in subgroup_lattice(G):
        assert coset_gset(G, H).size * H.order == G.order


def test_conjugacy_classes_s3():
    sizes = sorted(len(c) for c in conjugacy_classes(builtin_group("s3")))
    assert sizes == [1, 1, 1, 3]


def test_cayley_validation():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [0, 1]])
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    with pytest.raises(GroupError):
        from_permutations([[0, 0]])
    with pytest.raises(GroupError):
        Subgroup(builtin_group("c4"), [0, 1])


def test_permutation_input_matches_table():
    S3 = from_permutations([[1, 0, 2], [1, 2, 0]])
    assert S3.order == 6 and not S3.is_abelian
    assert S3 == builtin_group("s3")


@given(st.lists(st.integers(0, 3), min_size=1, max_size=4))
def test_disjoint_union_orbits(kinds):
    G = builtin_group("s3")
    subs = subgroup_lattice(G)
    parts = [coset_gset(G, subs[k]) for k in kinds]
    U = disjoint_union(parts)
    assert U.size == sum(S.size for S in parts)
    for H in subs:
        assert len(U.orbits(H)) == sum(len(S.orbits(H)) for S in parts)
