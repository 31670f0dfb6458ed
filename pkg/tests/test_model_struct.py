import random

import pytest
from hypothesis import given, settings, strategies as st

from eqorbit.exact_chain import ChainMap, identity_map, solve_lift, sphere, zero_map
from eqorbit.gmodule import (GMap, coset_module, fixed_points, random_gmap, random_gmodule,
                             trivial_action)
from eqorbit.group_core import all_family, builtin_group, trivial_family
from eqorbit.model_struct import (CellComplex, CellError, GeneratorSet, acyclic_gmodule,
                                  acyclicity_check, attach_cell, augmentation,
                                  comparison_equivariant, f_equivalence, f_fibration,
                                  random_fibration, random_i_complex, random_j_complex, sm7_check,
                                  wrap_generators, zero_gmodule)
from eqorbit.orbit_cat import build_fixed_orbit
from eqorbit.presheaf import PresheafCellComplex, PresheafMap, U, level_F_equivalence

from conftest import F2, FIELDS, Q

seeds = st.integers(0, 10**6)
fields = st.sampled_from(FIELDS)
group_names = st.sampled_from(["c2", "c3", "s3"])


def test_generator_counts():
    C2 = builtin_group("c2")
    for kind in "IJ":
        gens = wrap_generators(C2, all_family(C2), GeneratorSet(kind, (0, 1), Q))
        assert len(gens) == 4
        assert sorted(g.label for g in gens)[0] == f"{kind}[C2, 0]"
    with pytest.raises(CellError):
        GeneratorSet("K", (0, 1), Q)
    with pytest.raises(CellError):
        GeneratorSet("I", (2, 1), Q)


def test_generator_dims():
    S3 = builtin_group("s3")
    for g in wrap_generators(S3, all_family(S3), GeneratorSet("J", (1, 1), Q)):
        r = 6 // g.subgroup.order
        assert g.map.source.complex.dims.get(1, 0) == 0
        assert g.map.target.complex.dims == {0: r, 1: r}
    for g in wrap_generators(S3, all_family(S3), GeneratorSet("I", (1, 1), Q)):
        r = 6 // g.subgroup.order
        assert g.map.source.complex.dims == {0: r}
        assert g.map.map.is_degreewise_mono()


def test_presheaf_wrapping():
    C2 = builtin_group("c2")
    VO = build_fixed_orbit(C2, all_family(C2), Q)
    gens = wrap_generators(C2, all_family(C2), GeneratorSet("I", (0, 0), Q), category=VO)
    assert all(isinstance(g.map, PresheafMap) and g.map.is_natural() for g in gens)
    for g in gens:
        # the F_{G/H} wrapping is U of the module wrapping, level by level
        mod = wrap_generators(C2, all_family(C2), GeneratorSet("I", (0, 0), Q))
        m = [x for x in mod if x.subgroup == g.subgroup][0]
        for K in VO.objects:
            assert g.map.target.values[K].dims == fixed_points(m.map.target, K).complex.dims


def test_f_equivalence_examples():
    C2 = builtin_group("c2")
    fq = f_equivalence(augmentation(C2, Q), all_family(C2))
    assert not fq and fq.per_subgroup == {"e": False, "C2": True}
    f2 = f_equivalence(augmentation(C2, F2), all_family(C2))
    assert f2.per_subgroup == {"e": False, "C2": False}
    assert f_fibration(augmentation(C2, Q), all_family(C2))
    assert not f_fibration(augmentation(C2, F2), all_family(C2))
    M = random_gmodule(C2, Q, random.Random(1))
    assert f_equivalence(GMap(M, M, identity_map(M.complex)), all_family(C2))


def test_empty_attachment():
    S3 = builtin_group("s3")
    H = S3.subgroup(["(12)"])
    X = random_gmodule(S3, Q, random.Random(2), 0, 1, 2)
    Y, inc = attach_cell(X, H, 1)
    assert Y.complex.dims[1] == X.complex.dims.get(1, 0) + 3
    assert Y.complex.homology()[1] == X.complex.homology().get(1, 0) + 3
    assert inc.map.is_degreewise_mono()
    Z, _ = attach_cell(X, H, 1, None, "J")
    assert Z.complex.homology() == {n: X.complex.homology().get(n, 0) for n in Z.complex.dims}


def test_attach_rejects_bad_elements():
    C2 = builtin_group("c2")
    RG = coset_module(C2, C2.trivial(), Q)
    with pytest.raises(CellError):
        attach_cell(RG, C2.whole(), 1, Q.column([1, 0]))  # not fixed
    with pytest.raises(CellError):
        attach_cell(RG, C2.whole(), 1, Q.column([1, 1, 1]))
    with pytest.raises(CellError):
        attach_cell(RG, C2.whole(), 1, Q.column([1, 1]), "J")
    Y, _ = attach_cell(RG, C2.whole(), 1, Q.column([1, 1]))
    assert Y.complex.homology() == {0: 1, 1: 0}


@settings(max_examples=15)
@given(seeds, group_names, fields)
def test_j_complexes_acyclic(seed, name, F):
    rng = random.Random(seed)
    G = builtin_group(name)
    fam = all_family(G)
    cx = random_j_complex(rng, G, fam, F, cells=3)
    assert cx.is_split_injective()
    assert acyclicity_check(cx, fam)


@settings(max_examples=15)
@given(seeds, group_names, fields)
def test_i_complexes_are_modules(seed, name, F):
    rng = random.Random(seed)
    G = builtin_group(name)
    cx = random_i_complex(rng, G, all_family(G), F, cells=3)
    assert cx.is_split_injective()
    with pytest.raises(CellError):
        acyclicity_check(cx, all_family(G)) if cx.cells else acyclicity_check(
            CellComplex(zero_gmodule(G, F)).attach(G.trivial(), 0), all_family(G))


@settings(max_examples=15)
@given(seeds, group_names, fields)
def test_U_matches_cell_mirror(seed, name, F):
    rng = random.Random(seed)
    G = builtin_group(name)
    fam = all_family(G)
    VO = build_fixed_orbit(G, fam, F)
    cx = random_j_complex(rng, G, fam, F, cells=2)
    pc = PresheafCellComplex(U(cx.base, VO))
    for H, n, kind in cx.cells:
        pc.attach(H, n, None, kind)
    UX = U(cx.total, VO)
    for K in VO.objects:
        assert pc.total.values[K].dims == UX.values[K].dims
        assert pc.total.values[K].homology() == UX.values[K].homology()
    assert level_F_equivalence(pc.inclusion())


def test_comparison_with_identity_fibration():
    S3 = builtin_group("s3")
    B = random_gmodule(S3, Q, random.Random(3), -1, 1, 2)
    p = GMap(B, B, identity_map(B.complex))
    for g in wrap_generators(S3, all_family(S3), GeneratorSet("I", (0, 1), Q)):
        c = comparison_equivariant(g.map, p)
        assert c.map.is_iso()


@settings(max_examples=10)
@given(seeds, group_names, fields)
def test_sm7_pairs(seed, name, F):
    rng = random.Random(seed)
    G = builtin_group(name)
    fam = all_family(G)
    kind = rng.choice("IJ")
    gens = wrap_generators(G, fam, GeneratorSet(kind, (-1, 1), F))
    p = random_fibration(rng, G, fam, F, acyclic=rng.random() < 0.5)
    assert f_fibration(p, fam)
    rep = sm7_check(rng.choice(gens), p, fam)
    assert rep.ok, rep.to_json()


def test_sm7_rejects_non_fibration():
    C2 = builtin_group("c2")
    g = wrap_generators(C2, all_family(C2), GeneratorSet("I", (0, 0), F2))[0]
    with pytest.raises(CellError):
        sm7_check(g, augmentation(C2, F2), all_family(C2))


@settings(max_examples=15)
@given(seeds, group_names, fields)
def test_j_generators_lift_against_fibrations(seed, name, F):
    rng = random.Random(seed)
    G = builtin_group(name)
    fam = all_family(G)
    p = random_fibration(rng, G, fam, F, acyclic=False)
    E, B = p.source, p.target
    for g in wrap_generators(G, fam, GeneratorSet("J", (0, 1), F)):
        X = g.map.target
        bottom = random_gmap(rng, X, B).map
        top = zero_map(g.map.source.complex, E.complex)
        acts = [(X.act(x), E.act(x)) for x in G.generators]
        res = solve_lift(g.map.map, p.map, top, bottom, acts)
        assert res.exists
        h = res.lift
        assert p.map @ h == bottom
        assert all(E.act(x) @ h == h @ X.act(x) for x in G.generators)


def test_lift_fails_without_fibration():
    C2 = builtin_group("c2")
    fam = all_family(C2)
    p = augmentation(C2, F2)  # not surjective on C2-fixed points
    g = [x for x in wrap_generators(C2, fam, GeneratorSet("J", (0, 0), F2))
         if x.subgroup == C2.whole()][0]
    X = g.map.target
    bottom = ChainMap(X.complex, p.target.complex, {0: F2.matrix([[1]])})
    top = zero_map(g.map.source.complex, p.source.complex)
    res = solve_lift(g.map.map, p.map, top, bottom,
                     [(X.act(x), p.source.act(x)) for x in C2.generators])
    assert not res.exists


def test_acyclic_gmodule_fixed_points():
    S3 = builtin_group("s3")
    fam = trivial_family(S3)
    K = acyclic_gmodule(random.Random(4), S3, fam, Q)
    assert fixed_points(K, S3.trivial()).complex.is_acyclic()
    assert trivial_action(sphere(Q, 0), S3).complex.homology() == {0: 1}
