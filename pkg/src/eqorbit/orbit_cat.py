"""Small categories enriched in chain complexes, and the two orbit categories.

Every hom object is a chain complex with a fixed basis.  Basis elements are
numbered globally, degree by degree (lowest degree first); composition is a
table of structure constants on basis pairs.  Vectors in a hom object are
sparse dicts ``{basis index: coefficient}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .exact_chain import ChainComplex, TensorComplex
from .group_core import (Family, FiniteGroup, Subgroup, coset_gset, coset_representatives,
                         equivariant_maps)
from .linalg import Field

Vec = dict  # basis index -> field scalar


class CategoryError(ValueError):
    pass


@dataclass
class HomObject:
    """A based chain complex: ``labels[k]`` names global basis element k."""

    complex: ChainComplex
    labels: list[str]

    def __post_init__(self):
        C = self.complex
        self.degrees: list[int] = []
        self._start: dict[int, int] = {}
        for n in sorted(C.dims):
            self._start[n] = len(self.degrees)
            self.degrees.extend([n] * C.dim(n))
        if len(self.labels) != len(self.degrees):
            raise CategoryError("one label per basis element required")

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def index(self, n: int, i: int) -> int:
        return self._start[n] + i

    def local(self, k: int) -> tuple[int, int]:
        n = self.degrees[k]
        return n, k - self._start[n]

    def boundary(self, k: int) -> Vec:
        """d of basis element k."""
        n, i = self.local(k)
        C = self.complex
        if not C.dim(n - 1):
            return {}
        col = C.d(n)
        return {self.index(n - 1, r): col[r, i] for r in range(C.dim(n - 1)) if col[r, i] != 0}

    @classmethod
    def discrete(cls, field: Field, labels: Sequence[str]) -> "HomObject":
        """Basis concentrated in degree 0, zero differential."""
        return cls(ChainComplex(field, {0: len(labels)}), list(labels))


def add_into(acc: Vec, v: Mapping, c=1) -> Vec:
    for k, x in v.items():
        y = acc.get(k, 0) + c * x
        if y == 0:
            acc.pop(k, None)
        else:
            acc[k] = y
    return acc


class EnrichedCategory:
    """A small chain-complex-enriched category given by based homs and structure constants.

    ``compose_table[(a, b, c)][(i, j)]`` is g_i o f_j for g_i in hom(b, c) and
    f_j in hom(a, b), a vector in hom(a, c).
    """

    def __init__(self, field: Field, objects: Sequence[Hashable],
                 homs: Mapping[tuple, HomObject], compose_table: Mapping[tuple, Mapping],
                 identities: Mapping[Hashable, Vec], name: str = "",
                 object_labels: Mapping[Hashable, str] | None = None):
        self.field = field
        self.objects = list(objects)
        self.homs = dict(homs)
        self.compose_table = {k: dict(v) for k, v in compose_table.items()}
        self.identities = dict(identities)
        self.name = name
        self.object_labels = dict(object_labels or {a: str(a) for a in self.objects})
        for a in self.objects:
            for b in self.objects:
                if (a, b) not in self.homs:
                    raise CategoryError(f"missing hom({a}, {b})")

    def label(self, a) -> str:
        return self.object_labels[a]

    def hom(self, a, b) -> HomObject:
        return self.homs[(a, b)]

    def compose_basis(self, a, b, c, i: int, j: int) -> Vec:
        return self.compose_table[(a, b, c)].get((i, j), {})

    def compose(self, a, b, c, g: Mapping, f: Mapping) -> Vec:
        """g o f for g in hom(b, c), f in hom(a, b), extended bilinearly."""
        out: Vec = {}
        for i, x in g.items():
            for j, y in f.items():
                add_into(out, self.compose_basis(a, b, c, i, j), x * y)
        return out

    def identity(self, a) -> Vec:
        return dict(self.identities[a])

    def check(self) -> dict[str, bool]:
        """Associativity, units, degree additivity and the Leibniz rule on all basis data."""
        F = self.field
        objs = self.objects
        ok = {"associative": True, "unital": True, "graded": True, "leibniz": True}
        for a in objs:
            ida = self.identities[a]
            for b in objs:
                hab = self.hom(a, b)
                idb = self.identities[b]
                for j in range(hab.rank):
                    e = {j: F.one()}
                    if self.compose(a, b, b, idb, e) != e or self.compose(a, a, b, e, ida) != e:
                        ok["unital"] = False
                for c in objs:
                    hbc = self.hom(b, c)
                    hac = self.hom(a, c)
                    for i in range(hbc.rank):
                        for j in range(hab.rank):
                            v = self.compose_basis(a, b, c, i, j)
                            deg = hbc.degrees[i] + hab.degrees[j]
                            if any(hac.degrees[k] != deg for k in v):
                                ok["graded"] = False
                            # d(g f) = dg f + (-1)^|g| g df
                            lhs: Vec = {}
                            for k, x in v.items():
                                add_into(lhs, hac.boundary(k), x)
                            rhs = self.compose(a, b, c, hbc.boundary(i), {j: F.one()})
                            s = -1 if hbc.degrees[i] % 2 else 1
                            add_into(rhs, self.compose(a, b, c, {i: F.one()}, hab.boundary(j)), s)
                            if lhs != rhs:
                                ok["leibniz"] = False
                    for d in objs:
                        hcd = self.hom(c, d)
                        for h in range(hcd.rank):
                            for i in range(hbc.rank):
                                hi = self.compose_basis(b, c, d, h, i)
                                for j in range(hab.rank):
                                    left = self.compose(a, b, d, hi, {j: F.one()})
                                    right = self.compose(a, c, d, {h: F.one()},
                                                         self.compose_basis(a, b, c, i, j))
                                    if left != right:
                                        ok["associative"] = False
        return ok

    def rank_table(self) -> dict[str, dict[str, int]]:
        return {self.label(a): {self.label(b): self.hom(a, b).rank for b in self.objects}
                for a in self.objects}


def opposite(C: EnrichedCategory) -> EnrichedCategory:
    """C^op: hom(a, b) = C(b, a) and g o_op f = (-1)^{|f||g|} f o g."""
    homs = {(a, b): C.hom(b, a) for a in C.objects for b in C.objects}
    table = {}
    for a in C.objects:
        for b in C.objects:
            for c in C.objects:
                cba = C.hom(c, b)
                ba = C.hom(b, a)
                t = {}
                for i in range(cba.rank):          # i in op(b, c) = C(c, b)
                    for j in range(ba.rank):       # j in op(a, b) = C(b, a)
                        v = C.compose_basis(c, b, a, j, i)
                        if v:
                            s = -1 if (cba.degrees[i] * ba.degrees[j]) % 2 else 1
                            t[(i, j)] = {k: s * x for k, x in v.items()}
                table[(a, b, c)] = t
    return EnrichedCategory(C.field, C.objects, homs, table, C.identities,
                            name=f"{C.name}^op", object_labels=C.object_labels)


def tensor_category(D: EnrichedCategory, E: EnrichedCategory) -> EnrichedCategory:
    """D (x) E: objects are pairs, homs are tensor products of homs.

    (g (x) g') o (f (x) f') = (-1)^{|g'||f|} (g o f) (x) (g' o f').
    """
    if D.field != E.field:
        raise CategoryError("tensor of categories over different fields")
    objs = [(a, x) for a in D.objects for x in E.objects]
    homs = {}
    pair_index: dict[tuple, dict[tuple[int, int], int]] = {}
    for (a, x) in objs:
        for (b, y) in objs:
            hd, he = D.hom(a, b), E.hom(x, y)
            T = TensorComplex(hd.complex, he.complex)
            labels = [""] * T.complex.total_dim
            idx = {}
            for i in range(hd.rank):
                p, ii = hd.local(i)
                for j in range(he.rank):
                    q, jj = he.local(j)
                    n = p + q
                    start = sum(T.complex.dim(m) for m in sorted(T.complex.dims) if m < n)
                    k = start + T.index(p, ii, q, jj)
                    idx[(i, j)] = k
                    labels[k] = f"{hd.labels[i]}(x){he.labels[j]}"
            homs[((a, x), (b, y))] = HomObject(T.complex, labels)
            pair_index[((a, x), (b, y))] = idx
    table = {}
    for A in objs:
        for B in objs:
            for Cc in objs:
                (a, x), (b, y), (c, z) = A, B, Cc
                he_bc = E.hom(y, z)
                hd_ab = D.hom(a, b)
                out_idx = pair_index[(A, Cc)]
                t = {}
                for (g, gp), i in pair_index[(B, Cc)].items():
                    for (f, fp), j in pair_index[(A, B)].items():
                        u = D.compose_basis(a, b, c, g, f)
                        w = E.compose_basis(x, y, z, gp, fp)
                        if not u or not w:
                            continue
                        s = -1 if (he_bc.degrees[gp] * hd_ab.degrees[f]) % 2 else 1
                        v: Vec = {}
                        for k1, c1 in u.items():
                            for k2, c2 in w.items():
                                add_into(v, {out_idx[(k1, k2)]: c1 * c2}, s)
                        if v:
                            t[(i, j)] = v
                table[(A, B, Cc)] = t
    ids = {}
    for (a, x) in objs:
        idx = pair_index[((a, x), (a, x))]
        v: Vec = {}
        for k1, c1 in D.identity(a).items():
            for k2, c2 in E.identity(x).items():
                add_into(v, {idx[(k1, k2)]: c1 * c2})
        ids[(a, x)] = v
    labels = {(a, x): f"({D.label(a)},{E.label(x)})" for (a, x) in objs}
    cat = EnrichedCategory(D.field, objs, homs, table, ids, name=f"{D.name}(x){E.name}",
                           object_labels=labels)
    cat.pair_index = pair_index
    cat.factors = (D, E)
    return cat


# orbit categories


class EnrichedOrbitCategory(EnrichedCategory):
    """An orbit category over a family: objects are the members of the family.

    ``variant`` is ``"group_ring"`` (homs free on G-maps G/H -> G/K) or
    ``"fixed_point"`` (homs (R[G/K])^H with the H-orbit-sum basis).
    """

    def __init__(self, variant: str, group: FiniteGroup, family: Family, field: Field,
                 homs, compose_table, identities, hom_data):
        self.variant = variant
        self.group = group
        self.family = family
        objs = sorted(family.members)
        labels = {H: H.label for H in objs}
        super().__init__(field, objs, homs, compose_table, identities,
                         name=f"{variant}({group.name})", object_labels=labels)
        # per (H, K): for group_ring, the G-map tables; for fixed_point, the H-orbits on G/K
        self.hom_data = hom_data
        self.cosets = {K: coset_gset(group, K) for K in objs}

    def fixed_vector(self, H: Subgroup, K: Subgroup, k: int) -> list[int]:
        """Basis element k of (R[G/K])^H as a 0/1 vector on G/K (fixed-point variant)."""
        S = self.cosets[K]
        v = [0] * S.size
        for s in self.hom_data[(H, K)][k]:
            v[s] = 1
        return v


def _orbit_setup(G: FiniteGroup, family: Family):
    objs = sorted(family.members)
    cosets = {K: coset_gset(G, K) for K in objs}
    return objs, cosets


def build_group_ring_orbit(G: FiniteGroup, family: Family, field: Field) -> EnrichedOrbitCategory:
    """R[O_F]: hom(H, K) is free on the G-maps G/H -> G/K, composed as maps."""
    objs, cosets = _orbit_setup(G, family)
    maps = {(H, K): equivariant_maps(cosets[H], cosets[K]) for H in objs for K in objs}
    homs = {}
    for (H, K), ms in maps.items():
        labels = [f"eH->{cosets[K].point_labels[m[0]]}" for m in ms]
        homs[(H, K)] = HomObject.discrete(field, labels)
    one = field.one()
    table = {}
    for H in objs:
        for K in objs:
            for L in objs:
                where = {m: k for k, m in enumerate(maps[(H, L)])}
                t = {}
                for i, g in enumerate(maps[(K, L)]):
                    for j, f in enumerate(maps[(H, K)]):
                        t[(i, j)] = {where[tuple(g[f[s]] for s in range(len(f)))]: one}
                table[(H, K, L)] = t
    ids = {}
    for H in objs:
        ident = tuple(range(cosets[H].size))
        ids[H] = {maps[(H, H)].index(ident): one}
    return EnrichedOrbitCategory("group_ring", G, family, field, homs, table, ids, maps)


def build_fixed_orbit(G: FiniteGroup, family: Family, field: Field) -> EnrichedOrbitCategory:
    """VO_F: hom(H, K) = (R[G/K])^H, with basis the H-orbit sums on G/K.

    w in hom(H, K) is the G-map R[G/H] -> R[G/K] with eH |-> w; composing
    with v in hom(K, L) sends eH to sum_c w_c g_c v, g_c representing coset c.
    """
    objs, cosets = _orbit_setup(G, family)
    orbs = {(H, K): cosets[K].orbits(H) for H in objs for K in objs}
    homs = {}
    for (H, K), os in orbs.items():
        S = cosets[K]
        labels = ["+".join(S.point_labels[s] for s in o) for o in os]
        homs[(H, K)] = HomObject.discrete(field, labels)
    table = {}
    for H in objs:
        for K in objs:
            SK = cosets[K]
            reps = coset_representatives(SK)
            for L in objs:
                SL = cosets[L]
                where = {}
                for k, o in enumerate(orbs[(H, L)]):
                    for s in o:
                        where[s] = k
                t = {}
                for i, vo in enumerate(orbs[(K, L)]):
                    for j, wo in enumerate(orbs[(H, K)]):
                        img = [0] * SL.size
                        for c in wo:
                            g = reps[c]
                            for s in vo:
                                img[SL.action[g][s]] += 1
                        # img is H-fixed, so it is constant on H-orbits
                        vec: Vec = {}
                        for k, o in enumerate(orbs[(H, L)]):
                            x = field.coerce(img[o[0]])
                            if any(img[s] != img[o[0]] for s in o):
                                raise CategoryError("composite is not H-fixed")
                            if x != 0:
                                vec[k] = x
                        t[(i, j)] = vec
                table[(H, K, L)] = t
    ids = {}
    for H in objs:
        ids[H] = {[k for k, o in enumerate(orbs[(H, H)]) if o == (0,)][0]: field.one()}
    return EnrichedOrbitCategory("fixed_point", G, family, field, homs, table, ids, orbs)


# functors


@dataclass
class EnrichedFunctor:
    """Object map plus, per pair of objects, a matrix from one hom's basis to the other's."""

    source: EnrichedCategory
    target: EnrichedCategory
    on_objects: dict
    on_homs: dict  # (a, b) -> {basis index: Vec}

    def apply(self, a, b, v: Mapping) -> Vec:
        out: Vec = {}
        for k, x in v.items():
            add_into(out, self.on_homs[(a, b)][k], x)
        return out

    def check(self) -> dict[str, bool]:
        S, T = self.source, self.target
        o = self.on_objects
        ok = {"identities": True, "composition": True}
        for a in S.objects:
            if self.apply(a, a, S.identity(a)) != T.identity(o[a]):
                ok["identities"] = False
            for b in S.objects:
                for c in S.objects:
                    for i in range(S.hom(b, c).rank):
                        for j in range(S.hom(a, b).rank):
                            lhs = self.apply(a, c, S.compose_basis(a, b, c, i, j))
                            rhs = T.compose(o[a], o[b], o[c], self.apply(b, c, {i: 1}),
                                            self.apply(a, b, {j: 1}))
                            if lhs != rhs:
                                ok["composition"] = False
        return ok

    def matrix(self, a, b):
        """The hom-level linear map as a matrix (columns are images of basis elements)."""
        T = self.target
        F = T.field
        src = self.source.hom(a, b)
        tgt = T.hom(self.on_objects[a], self.on_objects[b])
        A = F.zeros(tgt.rank, src.rank)
        for k in range(src.rank):
            for r, x in self.on_homs[(a, b)][k].items():
                A[r, k] = x
        return A

    def is_injective_on_homs(self) -> bool:
        F = self.target.field
        return all(F.rank(self.matrix(a, b)) == self.source.hom(a, b).rank
                   for a in self.source.objects for b in self.source.objects)

    def is_iso_on_homs(self) -> dict[tuple, bool]:
        F = self.target.field
        out = {}
        for a in self.source.objects:
            for b in self.source.objects:
                A = self.matrix(a, b)
                out[(a, b)] = F.is_invertible(A)
        return out


def delta(I: EnrichedOrbitCategory, VO: EnrichedOrbitCategory) -> EnrichedFunctor:
    """The comparison R[O_F] -> VO_F: the G-map with eH |-> gK goes to the fixed vector gK."""
    if I.variant != "group_ring" or VO.variant != "fixed_point":
        raise CategoryError("delta goes from the group-ring variant to the fixed-point variant")
    if I.group != VO.group or sorted(I.objects) != sorted(VO.objects):
        raise CategoryError("categories over different groups or families")
    one = I.field.one()
    on_homs = {}
    for H in I.objects:
        for K in I.objects:
            orbs = VO.hom_data[(H, K)]
            singleton = {o[0]: k for k, o in enumerate(orbs) if len(o) == 1}
            on_homs[(H, K)] = {j: {singleton[m[0]]: one} for j, m in enumerate(I.hom_data[(H, K)])}
    return EnrichedFunctor(I, VO, {H: H for H in I.objects}, on_homs)


def category_to_json(C: EnrichedCategory) -> dict:
    F = C.field
    out = {"name": C.name, "objects": [C.label(a) for a in C.objects], "homs": {}, "composition": {}}
    for a in C.objects:
        for b in C.objects:
            h = C.hom(a, b)
            out["homs"][f"{C.label(a)}->{C.label(b)}"] = {"rank": h.rank, "basis": h.labels}
    for (a, b, c), t in sorted(C.compose_table.items(),
                               key=lambda kv: tuple(C.objects.index(x) for x in kv[0])):
        key = f"{C.label(a)}->{C.label(b)}->{C.label(c)}"
        out["composition"][key] = [[i, j, {str(k): F.to_json(x) for k, x in sorted(v.items())}]
                                   for (i, j), v in sorted(t.items())]
    return out
