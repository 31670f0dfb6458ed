"""Reading groups, families, complexes, G-modules, DGAs and cell scripts from TOML/JSON."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import tomli

from .exact_chain import ChainComplex, ChainMap
from .dga import DGAlgebra, dga_from_json, exterior_algebra, unit_algebra
from .gmodule import GModule
from .group_core import (BUILTIN_GROUPS, Family, FiniteGroup, GroupError, Subgroup, all_family,
                         builtin_group, from_permutations, subgroup_lattice, trivial_family)
from .linalg import Field


class FormatError(ValueError):
    pass


def read_data(path: str | Path) -> dict:
    """Parse a TOML or JSON file (chosen by suffix, TOML otherwise)."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {p}: {exc.strerror}") from None
    try:
        if p.suffix.lower() == ".json":
            return json.loads(text)
        return tomli.loads(text)
    except (json.JSONDecodeError, tomli.TOMLDecodeError) as exc:
        raise FormatError(f"{p}: {exc}") from None


# groups


def group_from_data(data: Mapping) -> FiniteGroup:
    name = str(data.get("name", ""))
    if "builtin" in data:
        G = builtin_group(str(data["builtin"]))
        return G
    if "cayley" in data:
        return FiniteGroup(data["cayley"], data.get("labels"), name)
    if "permutation_generators" in data:
        gens = data["permutation_generators"]
        if gens and all(min(g) == 1 for g in gens if g):
            gens = [[x - 1 for x in g] for g in gens]
        return from_permutations(gens, name)
    raise FormatError("group needs `cayley` (with `labels`) or `permutation_generators`")


def load_group(spec: str) -> FiniteGroup:
    """A group file, or the name of a builtin group (c1..c6, s3, d8, klein)."""
    if not Path(spec).exists() and spec.lower() in BUILTIN_GROUPS:
        return builtin_group(spec)
    return group_from_data(read_data(spec))


def parse_subgroup(G: FiniteGroup, ref) -> Subgroup:
    """A list of element labels (the generated subgroup) or a subgroup label."""
    if isinstance(ref, (list, tuple)):
        return G.subgroup(ref)
    s = str(ref).strip()
    for H in subgroup_lattice(G):
        if H.label == s:
            return H
    return G.subgroup(x.strip() for x in s.split(",") if x.strip())


def family_from_data(G: FiniteGroup, data: Mapping) -> Family:
    members = data.get("subgroups")
    if not members:
        raise FormatError("family file needs a nonempty `subgroups` list")
    subs = sorted({parse_subgroup(G, m) for m in members})
    return Family(G, tuple(subs))


def parse_family(G: FiniteGroup, spec: str) -> Family:
    """``all``, ``trivial`` or ``file:<path>`` listing every member."""
    s = spec.strip()
    if s.lower() == "all":
        return all_family(G)
    if s.lower() == "trivial":
        return trivial_family(G)
    if s.startswith("file:"):
        return family_from_data(G, read_data(s[5:]))
    raise FormatError(f"cannot parse family {spec!r}")


def parse_window(spec: str) -> tuple[int, int]:
    try:
        lo, hi = spec.split(":")
        w = (int(lo), int(hi))
    except ValueError:
        raise FormatError(f"window must be <lo>:<hi>, got {spec!r}") from None
    if w[0] > w[1]:
        raise FormatError("empty window")
    return w


# complexes and modules


def _matrix(F: Field, rows, nrows: int, ncols: int):
    if nrows == 0 or ncols == 0:
        return F.zeros(nrows, ncols)
    A = F.matrix(rows)
    if A.nrows() != nrows or A.ncols() != ncols:
        raise FormatError(f"matrix has shape {A.nrows()}x{A.ncols()}, expected {nrows}x{ncols}")
    return A


def complex_from_data(data: Mapping, field: Field | None = None) -> ChainComplex:
    """``{field, degrees: {n: dim}, differentials: {n: [[...]]}}``; d_n maps degree n to n-1."""
    F = Field.parse(str(data["field"])) if "field" in data else field
    if F is None:
        raise FormatError("complex needs a field")
    dims = {int(n): int(k) for n, k in data.get("degrees", {}).items()}
    diffs = {}
    for n, rows in data.get("differentials", {}).items():
        n = int(n)
        diffs[n] = _matrix(F, rows, dims.get(n - 1, 0), dims.get(n, 0))
    return ChainComplex(F, dims, diffs)


def load_complex(path: str, field: Field | None = None) -> ChainComplex:
    return complex_from_data(read_data(path), field)


def gmodule_from_data(G: FiniteGroup, data: Mapping, field: Field | None = None) -> GModule:
    """A complex block plus ``action: {element_label: {degree: matrix}}`` on generators.

    Degrees missing from an element's entry act by the identity.
    """
    C = complex_from_data(data, field)
    F = C.field
    gens = {}
    for lab, per_deg in data.get("action", {}).items():
        g = G.element(lab)
        comps = {n: F.identity(C.dim(n)) for n in C.dims}
        for n, rows in per_deg.items():
            n = int(n)
            comps[n] = _matrix(F, rows, C.dim(n), C.dim(n))
        gens[g] = ChainMap(C, C, comps)
    return GModule.from_generators(G, C, gens)


def load_gmodule(G: FiniteGroup, path: str, field: Field | None = None) -> GModule:
    return gmodule_from_data(G, read_data(path), field)


# algebras


def load_algebra(spec: str, field: Field) -> DGAlgebra:
    """``unit`` (R itself), ``exterior``, ``exterior-acyclic`` or ``file:<path>``."""
    s = spec.strip()
    if s == "unit":
        return unit_algebra(field)
    if s == "exterior":
        return exterior_algebra(field)
    if s == "exterior-acyclic":
        return exterior_algebra(field, acyclic=True)
    if s.startswith("file:"):
        data = dict(read_data(s[5:]))
        data.setdefault("field", "q" if field.p == 0 else f"fp:{field.p}")
        return dga_from_json(data)
    raise FormatError(f"cannot parse algebra {spec!r}")


# cell scripts


def cells_from_data(G: FiniteGroup, data: Mapping, field: Field) -> dict[str, Any]:
    """``[[attach]]`` blocks with subgroup, degree, kind and an optional attaching
    vector (coordinates in degree-1 of the current stage, the image of eH (x) 1).
    An optional ``[base]`` block is a G-module; the default base is zero."""
    attach = []
    for k, blk in enumerate(data.get("attach", [])):
        try:
            H = parse_subgroup(G, blk["subgroup"])
            n = int(blk["degree"])
        except KeyError as exc:
            raise FormatError(f"attach block {k} lacks {exc}") from None
        kind = str(blk.get("kind", "I")).upper()
        if kind not in ("I", "J"):
            raise FormatError(f"attach block {k}: kind must be I or J")
        vec = blk.get("vector")
        if vec is not None:
            vec = field.column(vec)
        attach.append((H, n, kind, vec))
    base = data.get("base")
    base = gmodule_from_data(G, base, field) if base is not None else None
    return {"base": base, "attach": attach}


def load_cells(G: FiniteGroup, path: str, field: Field) -> dict[str, Any]:
    return cells_from_data(G, read_data(path), field)


LOAD_ERRORS = (FormatError, GroupError, ValueError, KeyError, TypeError)
