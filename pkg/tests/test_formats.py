from pathlib import Path

import pytest

from eqorbit.formats import (FormatError, cells_from_data, complex_from_data, family_from_data,
                             gmodule_from_data, group_from_data, load_algebra, load_group,
                             parse_family, parse_subgroup, parse_window, read_data)
from eqorbit.group_core import GroupError, builtin_group

from conftest import F2, Q

DATA = Path(__file__).resolve().parent.parent / "data"


def test_group_files_match_builtins():
    assert load_group(str(DATA / "c2.toml")).cayley == builtin_group("c2").cayley
    S3 = load_group(str(DATA / "s3.toml"))
    assert S3.order == 6 and not S3.is_abelian
    assert load_group(str(DATA / "c4.json")).order == 4
    assert load_group("klein").order == 4


def test_one_based_permutations():
    a = group_from_data({"permutation_generators": [[2, 1, 3], [2, 3, 1]]})
    b = group_from_data({"permutation_generators": [[1, 0, 2], [1, 2, 0]]})
    assert a.order == b.order == 6


def test_bad_groups():
    with pytest.raises(FormatError):
        group_from_data({"name": "x"})
    with pytest.raises(GroupError):
        group_from_data({"cayley": [[0, 1], [0, 1]], "labels": ["e", "g"]})


def test_subgroups_and_families():
    S3 = builtin_group("s3")
    assert parse_subgroup(S3, ["(12)"]).order == 2
    assert parse_subgroup(S3, "<(123)>").order == 3
    assert parse_subgroup(S3, "(12),(13)").order == 6
    assert len(parse_family(S3, "all").members) == 6
    assert parse_family(S3, "trivial").labels == ["e"]
    with pytest.raises(GroupError):
        family_from_data(S3, {"subgroups": [["(12)"], ["e"]]})  # not conjugation closed
    with pytest.raises(FormatError):
        family_from_data(S3, {})
    fam = parse_family(builtin_group("c2"), f"file:{DATA / 'family_trivial_c2.toml'}")
    assert fam.labels == ["e"]


def test_windows():
    assert parse_window("-2:3") == (-2, 3)
    for bad in ("3", "a:b", "2:1"):
        with pytest.raises(FormatError):
            parse_window(bad)


def test_complexes():
    C = complex_from_data(read_data(DATA / "disk1.toml"))
    assert C.dims == {0: 1, 1: 1} and C.is_acyclic()
    C = complex_from_data({"degrees": {"0": 1}}, F2)
    assert C.field == F2 and C.homology() == {0: 1}
    with pytest.raises(FormatError):
        complex_from_data({"degrees": {"0": 1}})
    with pytest.raises(FormatError):
        complex_from_data({"field": "q", "degrees": {"0": 1, "1": 1},
                           "differentials": {"1": [["1", "1"]]}})
    sp = complex_from_data(read_data(DATA / "sphere_pair.toml"))
    assert sum(sp.homology().values()) == 2


def test_gmodule_file():
    C2 = builtin_group("c2")
    M = gmodule_from_data(C2, read_data(DATA / "regular_c2.toml"))
    assert M.complex.dims == {0: 1, 1: 2}
    assert M.act(C2.element("g")).comp(0) == Q.identity(1)
    bad = dict(read_data(DATA / "regular_c2.toml"))
    bad["action"] = {"g": {"1": [["1", "1"], ["0", "1"]]}}  # g^2 != 1
    with pytest.raises(ValueError):
        gmodule_from_data(C2, bad)


def test_algebras():
    assert load_algebra("unit", Q).rank == 1
    assert load_algebra("exterior-acyclic", Q).complex.is_acyclic()
    A = load_algebra(f"file:{DATA / 'exterior.toml'}", F2)
    assert A.rank == 2 and A.field == F2
    with pytest.raises(FormatError):
        load_algebra("poly", Q)


def test_cells():
    C2 = builtin_group("c2")
    script = cells_from_data(C2, read_data(DATA / "cells_c2.toml"), Q)
    assert [(H.label, n, k) for H, n, k, _ in script["attach"]] == [("e", 0, "I"), ("C2", 1, "I")]
    assert script["base"] is None
    with pytest.raises(FormatError):
        cells_from_data(C2, {"attach": [{"degree": 1}]}, Q)
    with pytest.raises(FormatError):
        cells_from_data(C2, {"attach": [{"subgroup": "e", "degree": 1, "kind": "K"}]}, Q)


def test_unreadable(tmp_path):
    with pytest.raises(FormatError):
        read_data(tmp_path / "missing.toml")
    p = tmp_path / "x.json"
    p.write_text("{")
    with pytest.raises(FormatError):
        read_data(p)
