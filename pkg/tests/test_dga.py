import random

import pytest
from hypothesis import given, strategies as st

from eqorbit.dga import (AModule, DGAError, dga_from_data, dreitoo_adjunction, exterior_algebra,
                         extend_scalars, extend_scalars_g, fixed_ga, hom_A, hom_A_free_witness,
                         identify_fun_pre, module_setting, random_gamodule, random_module_presheaf,
                         tau_comparison, unit_algebra)
from eqorbit.exact_chain import random_chain_complex, sphere, tensor
from eqorbit.gmodule import coset_module, fixed_points
from eqorbit.group_core import all_family, builtin_group, trivial_family

from conftest import F2, FIELDS, Q

seeds = st.integers(0, 10**6)
fields = st.sampled_from(FIELDS)


def algebras(F):
    return [unit_algebra(F), exterior_algebra(F), exterior_algebra(F, acyclic=True)]


def test_algebra_axioms():
    for F in FIELDS:
        for A in algebras(F):
            assert all(A.check().values())
    assert exterior_algebra(Q, acyclic=True).complex.is_acyclic()
    assert exterior_algebra(Q).complex.homology() == {0: 1, 1: 1}


def test_bad_algebra_rejected():
    # x * x = 1 with |x| = 1 is not graded
    with pytest.raises(DGAError):
        dga_from_data(Q, [("1", 0), ("x", 1)],
                      [("1", "1", "1", 1), ("1", "x", "x", 1), ("x", "1", "x", 1),
                       ("x", "x", "1", 1)], "1")


def test_extend_scalars_examples():
    A = exterior_algebra(Q)
    M = extend_scalars(A, sphere(Q, 0))
    assert M.complex.dims == {0: 1, 1: 1} and all(M.check().values())
    R = unit_algebra(Q)
    X = random_chain_complex(Q, random.Random(2))
    assert extend_scalars(R, X).complex == tensor(sphere(Q, 0), X)


@given(seeds, fields)
def test_extend_scalars_module_laws(seed, F):
    rng = random.Random(seed)
    X = random_chain_complex(F, rng, -1, 1, 2)
    for A in algebras(F):
        M = extend_scalars(A, X)
        assert all(M.check().values())
        assert M.complex.dims == tensor(A.complex, X).dims


@given(seeds, fields)
def test_hom_A_free(seed, F):
    rng = random.Random(seed)
    for A in algebras(F):
        N = extend_scalars(A, random_chain_complex(F, rng, -1, 1, 2))
        w = hom_A_free_witness(N)
        assert w.verify()


def test_hom_A_mixed_algebras():
    M = extend_scalars(unit_algebra(Q), sphere(Q, 0))
    N = extend_scalars(exterior_algebra(Q), sphere(Q, 0))
    with pytest.raises(DGAError):
        hom_A(M, N)


def test_rank_level_monoidality():
    # (A (x) R[G/H])^K has the rank of A (x) R[G/H]^K
    S3 = builtin_group("s3")
    A = exterior_algebra(Q)
    for H in all_family(S3):
        N = extend_scalars_g(A, coset_module(S3, H, Q))
        assert N.commutes()
        for K in all_family(S3):
            fa, _ = fixed_ga(N, K)
            base = fixed_points(coset_module(S3, H, Q), K).complex
            assert fa.complex.dims == tensor(A.complex, base).dims
            assert all(fa.check().values())


@pytest.mark.parametrize("name", ["c1", "c2", "s3"])
def test_dreitoo(name):
    G = builtin_group(name)
    for F in (Q, F2):
        for A in algebras(F):
            rep = dreitoo_adjunction(G, all_family(G), A, seed=1, samples=2)
            assert rep["ok"], rep


def test_tau_examples():
    G = builtin_group("c1")
    rep = tau_comparison(G, all_family(G), exterior_algebra(Q))
    assert rep["pairs"]["e->e"]["iso"] and rep["quasi_iso_on_all_pairs"]
    S3 = builtin_group("s3")
    rep = tau_comparison(S3, all_family(S3), exterior_algebra(Q))
    top = rep["pairs"]["S3->S3"]
    assert top["chain_map"] and top["source_dims"] == top["target_dims"] == {0: 1, 1: 1}
    assert all(p["chain_map"] for p in rep["pairs"].values())


def test_tau_unit_algebra():
    C2 = builtin_group("c2")
    rep = tau_comparison(C2, all_family(C2), unit_algebra(F2))
    assert all(p["iso"] for p in rep["pairs"].values())
    assert rep["pairs"]["C2->e"]["source_dims"] == {0: 1}


@given(seeds, fields)
def test_fun_pre_reindexing(seed, F):
    rng = random.Random(seed)
    C2 = builtin_group("c2")
    for A in algebras(F)[:2]:
        S = module_setting(C2, all_family(C2), A)
        assert identify_fun_pre(random_module_presheaf(S, rng)).verify()


def test_random_gamodule_laws():
    S3 = builtin_group("s3")
    S = module_setting(S3, trivial_family(S3), exterior_algebra(Q))
    rng = random.Random(5)
    for _ in range(5):
        N = random_gamodule(S, rng)
        assert N.commutes() and all(N.check().values())


def test_amodule_validation():
    A = exterior_algebra(Q)
    C = sphere(Q, 0)
    from eqorbit.exact_chain import zero_map
    with pytest.raises(DGAError):
        AModule(A, C, [zero_map(C, C), zero_map(C, C)])
