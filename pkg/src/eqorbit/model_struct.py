"""Generating cofibrations, finite cell complexes, F-equivalences and F-fibrations,
and the pullback-corner comparison map.

Cofibrancy is tracked by construction: a cell complex records its cells, and
only cells built from the wrapped generators are accepted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .exact_chain import (ChainComplex, ChainMap, HomComplex, TensorComplex, cone, disk,
                          identity_map, kernel, quasi_iso, restrict_map, sphere, zero_complex)
from .dga import DGAlgebra, ModuleSetting, POINT
from .gmodule import (GMap, GModule, HomG, TensorG, coset_module, fixed_map, fixed_points,
                      random_gmodule, trivial_action)
from .group_core import Family, FiniteGroup, Subgroup, coset_gset, coset_representatives
from .linalg import Field
from .orbit_cat import EnrichedCategory
from .presheaf import (Presheaf, PresheafCellComplex, PresheafMap, free_presheaf,
                       level_F_equivalence)


class CellError(ValueError):
    pass


# generators


@dataclass
class GeneratorSet:
    """S^{n-1} -> D^n (kind I) or 0 -> D^n (kind J) for n in the window."""

    kind: str
    window: tuple[int, int]
    field: Field

    def __post_init__(self):
        if self.kind not in ("I", "J"):
            raise CellError("generator kind must be 'I' or 'J'")
        if self.window[0] > self.window[1]:
            raise CellError("empty degree window")

    def base(self) -> list[tuple[int, ChainMap]]:
        F = self.field
        out = []
        for n in range(self.window[0], self.window[1] + 1):
            D = disk(F, n)
            if self.kind == "I":
                S = sphere(F, n - 1)
                out.append((n, ChainMap(S, D, {n - 1: F.identity(1)})))
            else:
                out.append((n, ChainMap(zero_complex(F), D, {})))
        return out


@dataclass
class Generator:
    subgroup: Subgroup
    degree: int
    kind: str
    base: ChainMap
    map: object  # GMap, or PresheafMap for presheaf wrapping

    @property
    def label(self) -> str:
        return f"{self.kind}[{self.subgroup.label}, {self.degree}]"


def tensor_with(V: GModule, X: ChainComplex) -> GModule:
    """V (x) X with G acting on V."""
    return TensorG(V, trivial_action(X, V.group)).module


def tensor_gmap(V: GModule, f: ChainMap, src: GModule | None = None,
                tgt: GModule | None = None) -> GMap:
    src = src or tensor_with(V, f.source)
    tgt = tgt or tensor_with(V, f.target)
    Ts = TensorComplex(V.complex, f.source)
    Tt = TensorComplex(V.complex, f.target)
    m = Ts.tensor_maps(identity_map(V.complex), f, Tt)
    return GMap(src, tgt, ChainMap(src.complex, tgt.complex, m.comps, check=False))


def _free_map(C: EnrichedCategory, a, f: ChainMap) -> PresheafMap:
    X = free_presheaf(C, a, f.source)
    Y = free_presheaf(C, a, f.target)
    comps = {}
    for b in C.objects:
        h = C.hom(b, a).complex
        comps[b] = X.tensors[b].tensor_maps(identity_map(h), f, Y.tensors[b])
    return PresheafMap(X, Y, comps)


def wrap_generators(G: FiniteGroup, family: Family, base: GeneratorSet,
                    algebra: DGAlgebra | None = None, category: EnrichedCategory | None = None
                    ) -> list[Generator]:
    """R[G/H] (x) (A (x)) i for H in the family and i in the base set.

    With ``category`` (an orbit category, or a ModuleSetting's tensor category
    when an algebra is given) the wrapping is F_{G/H} (x) i as presheaf maps.
    """
    F = base.field
    out = []
    for H in sorted(family.members):
        V = coset_module(G, H, F)
        for n, i in base.base():
            j = i
            if algebra is not None:
                Ta = TensorComplex(algebra.complex, i.source)
                Tb = TensorComplex(algebra.complex, i.target)
                j = ChainMap(Ta.complex, Tb.complex,
                             Ta.tensor_maps(identity_map(algebra.complex), i, Tb).comps,
                             check=False)
            if category is not None:
                a = (H, POINT) if algebra is not None else H
                m = _free_map(category, a, i)
            else:
                m = tensor_gmap(V, j)
            out.append(Generator(H, n, base.kind, i, m))
    return out


# cell complexes of G-modules


def attach_cell(X: GModule, H: Subgroup, n: int, phi=None, kind: str = "I"
                ) -> tuple[GModule, GMap]:
    """The pushout of R[G/H] (x) S^{n-1} -> R[G/H] (x) D^n along phi.

    ``phi`` is the attaching G-map out of R[G/H] (x) S^{n-1}, or directly the
    H-fixed cycle x = phi(eH (x) 1) in degree n-1 (None means zero).  J-cells
    are attached along 0.  Returns the new stage and the inclusion of X.
    """
    G = X.group
    F = X.field
    C = X.complex
    SH = coset_gset(G, H)
    reps = coset_representatives(SH)
    perm = [F.permutation_matrix(SH.action[g]) for g in G.elements]
    r = SH.size
    if kind == "J":
        if phi is not None:
            raise CellError("J-cells are attached along the zero map")
        new = {n: r, n - 1: r}
    elif kind == "I":
        new = {n: r}
        if phi is None:
            x = F.zeros(C.dim(n - 1), 1)
        elif isinstance(phi, GMap):
            if phi.target != X or phi.source.complex.dims != {n - 1: r}:
                raise CellError("attaching map must go from R[G/H] (x) S^{n-1} into the stage")
            x = F.block(phi.map.comp(n - 1), range(C.dim(n - 1)), [0])
            if phi.map.comp(n - 1) != F.hstack([X.act(g).comp(n - 1) * x for g in reps],
                                                C.dim(n - 1)):
                raise CellError("attaching map is not determined by eH (x) 1 as expected")
        else:
            x = phi
        if x.nrows() != C.dim(n - 1) or x.ncols() != 1:
            raise CellError("attaching element has the wrong size")
        if not F.is_zero(C.d(n - 1) * x):
            raise CellError("attaching element is not a cycle")
        for h in H.generators:
            if X.act(h).comp(n - 1) * x != x:
                raise CellError("attaching element is not H-fixed")
    else:
        raise CellError("cell kind must be 'I' or 'J'")
    dims = dict(C.dims)
    for m, k in new.items():
        dims[m] = dims.get(m, 0) + k
    diffs = {}
    for m in set(dims) | {m + 1 for m in dims}:
        rows, cols = dims.get(m - 1, 0), dims.get(m, 0)
        if not (rows and cols):
            continue
        parts = []
        if C.dim(m) and C.dim(m - 1):
            parts.append((0, 0, C.d(m)))
        if kind == "I" and m == n and C.dim(n - 1):
            phis = F.hstack([X.act(g).comp(n - 1) * x for g in reps], C.dim(n - 1))
            parts.append((0, C.dim(n), phis))
        if kind == "J" and m == n:
            parts.append((C.dim(n - 1), C.dim(n), F.identity(r)))
        diffs[m] = F.assemble(rows, cols, parts)
    Y = ChainComplex(F, dims, diffs)
    acts = []
    for g in G.elements:
        comps = {}
        for m in dims:
            blocks = [X.act(g).comp(m)] if C.dim(m) else []
            if m in new:
                blocks.append(perm[g])
            comps[m] = F.block_diag(blocks)
        acts.append(ChainMap(Y, Y, comps, check=False))
    Mnew = GModule(G, Y, acts)
    inc = {}
    for m in C.dims:
        A = F.zeros(dims[m], C.dim(m))
        F.set_block(A, 0, 0, F.identity(C.dim(m)))
        inc[m] = A
    return Mnew, GMap(X, Mnew, ChainMap(C, Y, inc))


@dataclass
class CellComplex:
    base: GModule
    stages: list = field(default_factory=list)
    inclusions: list = field(default_factory=list)
    cells: list = field(default_factory=list)  # (subgroup, degree, kind)

    @property
    def total(self) -> GModule:
        return self.stages[-1] if self.stages else self.base

    def attach(self, H: Subgroup, n: int, phi=None, kind: str = "I") -> "CellComplex":
        Y, inc = attach_cell(self.total, H, n, phi, kind)
        self.stages.append(Y)
        self.inclusions.append(inc)
        self.cells.append((H, n, kind))
        return self

    def inclusion(self) -> GMap:
        f = GMap(self.base, self.base, identity_map(self.base.complex))
        for inc in self.inclusions:
            f = inc @ f
        return f

    def is_split_injective(self) -> bool:
        return self.inclusion().map.is_degreewise_mono()


def zero_gmodule(G: FiniteGroup, F: Field) -> GModule:
    return trivial_action(zero_complex(F), G)


# F-equivalences and F-fibrations


@dataclass
class FCheck:
    ok: bool
    per_subgroup: dict[str, bool]

    def __bool__(self) -> bool:
        return self.ok


def _per_H(f: GMap, family: Family, test) -> FCheck:
    detail = {}
    for H in sorted(family.members):
        fh = fixed_map(f.map, fixed_points(f.source, H), fixed_points(f.target, H))
        detail[H.label] = bool(test(fh))
    return FCheck(all(detail.values()), detail)


def f_equivalence(f: GMap, family: Family) -> FCheck:
    return _per_H(f, family, quasi_iso)


def f_fibration(f: GMap, family: Family) -> FCheck:
    return _per_H(f, family, lambda m: m.is_degreewise_epi())


def acyclicity_check(cx, family: Family | None = None) -> bool:
    """The inclusion of a relative J-cell complex is an F-equivalence (modules) or a
    level F-equivalence (presheaves)."""
    if any(c[2] != "J" for c in cx.cells):
        raise CellError("acyclicity check needs J-cells only")
    if isinstance(cx, PresheafCellComplex):
        return level_F_equivalence(cx.inclusion())
    if family is None:
        raise CellError("module acyclicity check needs the family")
    return f_equivalence(cx.inclusion(), family).ok


def random_j_complex(rng: random.Random, G: FiniteGroup, family: Family, F: Field,
                     cells: int = 5, lo: int = -1, hi: int = 2) -> CellComplex:
    base = random_gmodule(G, F, rng, lo=-1, hi=1, max_dim=2)
    cx = CellComplex(base)
    members = sorted(family.members)
    for _ in range(cells):
        cx.attach(rng.choice(members), rng.randint(lo, hi), None, "J")
    return cx


def random_i_complex(rng: random.Random, G: FiniteGroup, family: Family, F: Field,
                     cells: int = 5, lo: int = -1, hi: int = 2) -> CellComplex:
    cx = CellComplex(zero_gmodule(G, F))
    members = sorted(family.members)
    for _ in range(cells):
        H = rng.choice(members)
        n = rng.randint(lo, hi)
        X = cx.total
        fp = fixed_points(X, H)
        Z = F.nullspace(fp.complex.d(n - 1))
        if Z.ncols():
            x = fp.inclusion.comp(n - 1) * F.random_vector_in(rng, Z)
        else:
            x = None
        cx.attach(H, n, x, "I")
    return cx


# fibrations


def augmentation(G: FiniteGroup, F: Field) -> GMap:
    """R[G] -> R, sum of coefficients."""
    RG = coset_module(G, G.trivial(), F)
    R = coset_module(G, G.whole(), F)
    A = F.matrix([[1] * G.order])
    return GMap(RG, R, ChainMap(RG.complex, R.complex, {0: A}))


def acyclic_gmodule(rng: random.Random, G: FiniteGroup, family: Family, F: Field,
                    pieces: int = 2, lo: int = -1, hi: int = 2) -> GModule:
    """A sum of J-cells R[G/H] (x) D^n: every fixed-point complex is acyclic."""
    cx = CellComplex(zero_gmodule(G, F))
    members = sorted(family.members)
    for _ in range(pieces):
        cx.attach(rng.choice(members), rng.randint(lo, hi), None, "J")
    return cx.total


def twisted_fibration(B: GModule, K: GModule, rng: random.Random) -> GMap:
    """E = B + K with d(b, k) = (db, s b + dk) for a random degree -1 cycle s in
    Hom_G(B, K); the projection E -> B has fibre K and is split on fixed points."""
    G = B.group
    F = B.field
    hg = HomG(B, K)
    fp = hg.fixed()
    Z = F.nullspace(fp.complex.d(-1)) if fp.complex.dim(-1) else F.zeros(0, 0)
    if Z.ncols():
        v = fp.inclusion.comp(-1) * F.random_vector_in(rng, Z)
        s = hg.unpack(-1, v)
    else:
        s = None
    Cb, Ck = B.complex, K.complex
    degs = set(Cb.dims) | set(Ck.dims)
    dims = {n: Cb.dim(n) + Ck.dim(n) for n in degs}
    diffs = {}
    for n in degs:
        rows = dims.get(n - 1, 0)
        if not rows:
            continue
        parts = [(0, 0, Cb.d(n)), (Cb.dim(n - 1), Cb.dim(n), Ck.d(n))]
        if s is not None:
            parts.append((Cb.dim(n - 1), 0, s.comp(n)))
        diffs[n] = F.assemble(rows, dims[n], parts)
    E = ChainComplex(F, dims, diffs)
    acts = []
    for g in G.elements:
        acts.append(ChainMap(E, E, {n: F.block_diag([B.act(g).comp(n), K.act(g).comp(n)])
                                    for n in degs}, check=False))
    Em = GModule(G, E, acts)
    proj = {n: F.hstack([F.identity(Cb.dim(n)), F.zeros(Cb.dim(n), Ck.dim(n))], Cb.dim(n))
            for n in Cb.dims}
    return GMap(Em, B, ChainMap(E, Cb, proj))


def random_fibration(rng: random.Random, G: FiniteGroup, family: Family, F: Field,
                     acyclic: bool) -> GMap:
    B = random_gmodule(G, F, rng, lo=-1, hi=2, max_dim=2)
    K = acyclic_gmodule(rng, G, family, F) if acyclic else random_gmodule(G, F, rng, lo=-1, hi=2,
                                                                          max_dim=2)
    return twisted_fibration(B, K, rng)


# the pullback-corner map


@dataclass
class Comparison:
    source: ChainComplex
    pullback: ChainComplex
    map: ChainMap

    @property
    def surjective(self) -> bool:
        return self.map.is_degreewise_epi()

    @property
    def quasi_iso(self) -> bool:
        return quasi_iso(self.map)

    def dims(self) -> dict:
        return {"source": dict(sorted(self.source.dims.items())),
                "pullback": dict(sorted(self.pullback.dims.items())),
                "cone_homology": {k: v for k, v in cone(self.map).homology().items() if v}}


def _sum_map(F, S_parts, target, maps, signs) -> ChainMap:
    """A map out of a direct sum, [s_1 maps_1, s_2 maps_2, ...]."""
    from .exact_chain import direct_sum
    S = direct_sum(S_parts)
    comps = {}
    for n in S.dims:
        blocks, c = [], 0
        for Sp, m, s in zip(S_parts, maps, signs):
            if Sp.dim(n):
                blocks.append((0, c, m.comp(n) if s > 0 else -m.comp(n)))
            c += Sp.dim(n)
        comps[n] = F.assemble(target.dim(n), S.dim(n), blocks)
    return S, ChainMap(S, target, comps, check=False)


def pullback_comparison(i_E, p_Y, p_X, i_B) -> Comparison:
    """c: YE -> XE x_{XB} YB, f |-> (i^* f, p_* f).

    ``i_E: YE -> XE``, ``p_Y: YE -> YB``, ``p_X: XE -> XB``, ``i_B: YB -> XB``.
    """
    F = i_E.field
    XE, YB, XB = i_E.target, p_Y.target, p_X.target
    S, q = _sum_map(F, [XE, YB], XB, [p_X, i_B], [1, -1])
    K = kernel(q)
    YE = i_E.source
    comps = {}
    for n in YE.dims:
        comps[n] = F.vstack([i_E.comp(n), p_Y.comp(n)], YE.dim(n))
    into = ChainMap(YE, S, comps, check=False)
    return Comparison(YE, K.obj, K.factor(into))


def _hom_map(hc: HomComplex, other: HomComplex, pre=None, post=None, src=None, tgt=None):
    m = hc.induced(other, pre=pre, post=post)
    return restrict_map(m, src, tgt)


def comparison_equivariant(i: GMap, p: GMap) -> Comparison:
    """Hom_G(N, E) -> Hom_G(M, E) x_{Hom_G(M, B)} Hom_G(N, B) for i: M -> N, p: E -> B."""
    M, N, E, B = i.source, i.target, p.source, p.target
    hs = {k: HomG(*k) for k in [(N, E), (M, E), (M, B), (N, B)]}
    fx = {k: h.fixed() for k, h in hs.items()}
    inc = {k: v.inclusion for k, v in fx.items()}
    i_E = _hom_map(hs[(N, E)].hom, hs[(M, E)].hom, pre=i.map, src=inc[(N, E)], tgt=inc[(M, E)])
    p_Y = _hom_map(hs[(N, E)].hom, hs[(N, B)].hom, post=p.map, src=inc[(N, E)], tgt=inc[(N, B)])
    p_X = _hom_map(hs[(M, E)].hom, hs[(M, B)].hom, post=p.map, src=inc[(M, E)], tgt=inc[(M, B)])
    i_B = _hom_map(hs[(N, B)].hom, hs[(M, B)].hom, pre=i.map, src=inc[(N, B)], tgt=inc[(M, B)])
    return pullback_comparison(i_E, p_Y, p_X, i_B)


def comparison_fixed(j: ChainMap, p: GMap, H: Subgroup) -> Comparison:
    """hom(Y, E^H) -> hom(X, E^H) x_{hom(X, B^H)} hom(Y, B^H) for j: X -> Y."""
    fE, fB = fixed_points(p.source, H), fixed_points(p.target, H)
    pH = fixed_map(p.map, fE, fB)
    X, Y = j.source, j.target
    EH, BH = fE.complex, fB.complex
    YE, XE, XB, YB = HomComplex(Y, EH), HomComplex(X, EH), HomComplex(X, BH), HomComplex(Y, BH)
    return pullback_comparison(YE.induced(XE, pre=j), YE.induced(YB, post=pH),
                               XE.induced(XB, post=pH), YB.induced(XB, pre=j))


@dataclass
class SM7Report:
    generator: str
    kind: str
    fibration_is_equivalence: bool
    surjective: bool
    quasi_iso: bool
    fixed_surjective: bool
    fixed_quasi_iso: bool
    ranks_agree: bool
    dims: dict

    @property
    def expected_acyclic(self) -> bool:
        return self.kind == "J" or self.fibration_is_equivalence

    @property
    def ok(self) -> bool:
        base = self.surjective and self.fixed_surjective and self.ranks_agree
        base = base and self.quasi_iso == self.fixed_quasi_iso
        return base and (self.quasi_iso or not self.expected_acyclic)

    def to_json(self) -> dict:
        return {"generator": self.generator, "kind": self.kind,
                "fibration_is_F_equivalence": self.fibration_is_equivalence,
                "surjective": self.surjective, "quasi_iso": self.quasi_iso,
                "fixed_form_surjective": self.fixed_surjective,
                "fixed_form_quasi_iso": self.fixed_quasi_iso,
                "ranks_agree": self.ranks_agree, "dims": self.dims, "ok": self.ok}


def sm7_check(gen: Generator, p: GMap, family: Family) -> SM7Report:
    """Both forms of the comparison for i = R[G/H] (x) j and an F-fibration p."""
    if not f_fibration(p, family).ok:
        raise CellError("p is not an F-fibration")
    c = comparison_equivariant(gen.map, p)
    cf = comparison_fixed(gen.base, p, gen.subgroup)
    agree = (c.source.dims == cf.source.dims and c.pullback.dims == cf.pullback.dims)
    return SM7Report(gen.label, gen.kind, f_equivalence(p, family).ok, c.surjective, c.quasi_iso,
                     cf.surjective, cf.quasi_iso, agree, c.dims())


# presheaf cells over a module setting


def module_cell_presheaf(S: ModuleSetting, rng: random.Random, cells: int = 3,
                         lo: int = 0, hi: int = 1) -> Presheaf:
    """A sum of free cells F_{(G/H, *)} (x) S^n or D^n over VO_F (x) A^op."""
    from .presheaf import direct_sum_presheaves
    F = S.A.field
    parts = []
    for _ in range(cells):
        H = rng.choice(S.VO.objects)
        n = rng.randint(lo, hi)
        parts.append(free_presheaf(S.P, (H, POINT), rng.choice([sphere(F, n), disk(F, n)])))
    X, _ = direct_sum_presheaves(parts)
    return X
