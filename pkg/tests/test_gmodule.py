import random

import pytest
from hypothesis import given, strategies as st

from eqorbit import witnesses as W
from eqorbit.exact_chain import ChainMap, identity_map, kernel, random_chain_complex, sphere, tensor as ctensor
from eqorbit.gmodule import (GModule, GModuleError, HomG, SidedHObject, coinduction, coset_module,
                             fixed_cotensor, fixed_map, fixed_points, forget, group_ring,
                             group_ring_hopf, induction, orbit_tensor, orbits, perm_module,
                             random_gmap, random_gmodule, tensor, trivial_action)
from eqorbit.group_core import builtin_group, coset_gset, subgroup_lattice

from conftest import F2, FIELDS, Q

seeds = st.integers(0, 10**6)
fields = st.sampled_from(FIELDS)
group_names = st.sampled_from(["c2", "c3", "c4", "s3"])


def small(G, F, rng, trivial=False):
    return random_gmodule(G, F, rng, -1, 1, 2, trivial=trivial)


def test_perm_module_dims():
    C2, S3 = builtin_group("c2"), builtin_group("s3")
    assert perm_module(coset_gset(C2, C2.trivial()), Q).complex.dims == {0: 2}
    assert perm_module(coset_gset(S3, S3.subgroup(["(12)"])), Q).complex.dims == {0: 3}


@pytest.mark.parametrize("name", ["c2", "c3", "s3", "klein"])
def test_hopf_axioms(name):
    for F in FIELDS:
        assert all(group_ring_hopf(builtin_group(name), F).check().values())


def test_module_validation():
    C2 = builtin_group("c2")
    C = sphere(Q, 0)
    bad = ChainMap(C, C, {0: Q.matrix([[2]])})
    with pytest.raises(GModuleError):
        GModule(C2, C, [identity_map(C), bad])


def test_fixed_points_examples():
    C2 = builtin_group("c2")
    assert fixed_points(group_ring(C2, Q), C2.whole()).complex.dims == {0: 1}
    M = trivial_action(random_chain_complex(Q, random.Random(1)), C2)
    for H in subgroup_lattice(C2):
        assert fixed_points(M, H).complex == M.complex
        assert orbits(M, H).complex == M.complex


def test_orbit_counts_small():
    # the full |S| <= 12 sweep lives in the acceptance suite
    S3 = builtin_group("s3")
    S = coset_gset(S3, S3.subgroup(["(12)"]))
    for F in FIELDS:
        M = perm_module(S, F)
        for H in subgroup_lattice(S3):
            assert fixed_points(M, H).complex.dim(0) == len(S.orbits(H))
            assert orbits(M, H).complex.dim(0) == len(S.orbits(H))


def test_hom_with_sphere_is_module():
    C2 = builtin_group("c2")
    N = random_gmodule(C2, Q, random.Random(2))
    H = HomG(trivial_action(sphere(Q, 0), C2), N)
    assert H.complex == N.complex
    assert HomG(trivial_action(sphere(Q, 0), C2), group_ring(C2, Q)).fixed().complex.dims == {0: 1}


@given(seeds, group_names, fields)
def test_hom_square_zero_and_double(seed, name, F):
    G = builtin_group(name)
    rng = random.Random(seed)
    M, N = small(G, F, rng), small(G, F, rng)
    hg = HomG(M, N)
    C = hg.complex
    for n in C.dims:
        assert F.is_zero(C.d(n - 1) * C.d(n))
    # conjugation really is an action
    for g in G.generators:
        for h in G.generators:
            assert hg.act(G.mul(g, h)) == hg.act(g) @ hg.act(h)
    de = W.double_enrichment(M, N)
    assert de.ok


def test_monoidal_examples():
    C2 = builtin_group("c2")
    M = random_gmodule(C2, Q, random.Random(7))
    assert tensor(trivial_action(sphere(Q, 0), C2), M) == M
    RG = group_ring(C2, Q)
    assert tensor(RG, trivial_action(sphere(Q, 0), C2)) == RG
    X, Y = random_chain_complex(Q, random.Random(1)), random_chain_complex(Q, random.Random(2))
    assert tensor(trivial_action(X, C2), trivial_action(Y, C2)) == trivial_action(ctensor(X, Y), C2)
    assert forget(trivial_action(X, C2)) == X


def test_orbit_tensor_examples():
    S3 = builtin_group("s3")
    H = S3.subgroup(["(12)"])
    rng = random.Random(5)
    M = random_gmodule(S3, Q, rng)
    unit = SidedHObject.trivial(sphere(Q, 0), H, "right")
    assert orbit_tensor(unit, M.restrict(H)).complex.dims == orbits(M, H).complex.dims
    ind = induction(M.restrict(H), S3)
    assert ind.module.complex.dims == {n: d * 3 for n, d in M.complex.dims.items()}
    assert W.keyGthree_orbits(M, H).verify()


def test_fixed_cotensor_examples():
    S3 = builtin_group("s3")
    H = S3.subgroup(["(123)"])
    M = random_gmodule(S3, F2, random.Random(8))
    unit = SidedHObject.trivial(sphere(F2, 0), H)
    assert fixed_cotensor(unit, M.restrict(H)).complex.dims == fixed_points(M, H).complex.dims
    co = coinduction(M.restrict(H), S3)
    assert co.module.complex.dims == {n: d * 2 for n, d in M.complex.dims.items()}
    assert W.keyGthree_fixed(M, H).verify()


def test_induction_coinduction_from_trivial():
    C2 = builtin_group("c2")
    e = C2.trivial()
    Qe = SidedHObject.trivial(sphere(Q, 0), e)
    assert induction(Qe, C2).module.complex.dims == {0: 2}
    co = coinduction(Qe, C2).module
    assert co.complex.dims == {0: 2}
    assert fixed_points(co, C2.whole()).complex.dims == {0: 1}


def test_keyG_examples():
    C2 = builtin_group("c2")
    S0 = trivial_action(sphere(Q, 0), C2)
    w = W.keyG_iso(S0, group_ring(C2, Q), C2.whole())
    assert w.verify() and w.dims() == {"source": {0: 1}, "target": {0: 1}}
    N = random_gmodule(C2, Q, random.Random(3))
    M = random_gmodule(C2, Q, random.Random(4), trivial=True)
    assert W.keyG_iso(M, N, C2.trivial()).verify()
    S3 = builtin_group("s3")
    H = S3.subgroup(["(12)"])
    rng = random.Random(9)
    M, N = random_gmodule(S3, Q, rng), random_gmodule(S3, Q, rng)
    w = W.keyG_iso(M, N, H)
    assert w.verify() and w.dims()["source"] == w.dims()["target"]


@given(seeds, group_names, fields)
def test_adjunction_witnesses(seed, name, F):
    G = builtin_group(name)
    rng = random.Random(seed)
    M, N, V = small(G, F, rng), small(G, F, rng), small(G, F, rng)
    T = small(G, F, rng, trivial=True)
    assert W.bitensor_witness(M, V, N).verify()
    for H in subgroup_lattice(G):
        assert W.keyG_iso(T, N, H).verify()
        assert W.keyG_iso(M, N, H).verify()
        assert W.induction_witness(M.restrict(H), N).verify()
        assert W.coinduction_witness(M, N.restrict(H)).verify()


def test_keyG_naturality_on_sample():
    G = builtin_group("s3")
    rng = random.Random(21)
    M = small(G, Q, rng, trivial=True)
    N, N2 = small(G, Q, rng), small(G, Q, rng)
    for _ in range(20):
        u = random_gmap(rng, N, N2)
        for H in subgroup_lattice(G):
            assert W.keyG_naturality(M, N, N2, u, H)


@given(seeds, group_names, fields)
def test_fixed_points_left_exact(seed, name, F):
    G = builtin_group(name)
    rng = random.Random(seed)
    M, N = small(G, F, rng), small(G, F, rng)
    f = random_gmap(rng, M, N)
    K = kernel(f.map)
    for H in subgroup_lattice(G):
        fm, fn = fixed_points(M, H), fixed_points(N, H)
        fh = fixed_map(f.map, fm, fn)
        # (ker f)^H and ker(f^H) have the same dimensions
        from eqorbit.gmodule import restrict_module
        KM = restrict_module(M, K.map)
        assert fixed_points(KM, H).complex.dims == kernel(fh).obj.dims


@given(seeds, group_names, fields)
def test_fixed_of_tensor_with_trivial(seed, name, F):
    G = builtin_group(name)
    rng = random.Random(seed)
    V = small(G, F, rng)
    X = random_chain_complex(F, rng, -1, 1, 2)
    for H in subgroup_lattice(G):
        left = fixed_points(tensor(V, trivial_action(X, G)), H).complex
        right = ctensor(fixed_points(V, H).complex, X)
        assert left.dims == right.dims and left.homology() == right.homology()


def test_coset_module_is_perm_module():
    S3 = builtin_group("s3")
    for H in subgroup_lattice(S3):
        assert coset_module(S3, H, Q) == perm_module(coset_gset(S3, H), Q)
