"""Finite-dimensional DG algebras, DG modules with a commuting G-action, and
presheaves over VO_F (x) A^op.

An A-module is stored as a left action: ``acts[k]`` is multiplication by the
basis element a_k, a graded map of degree |a_k|.  This is the same data as a
presheaf on the one-object category A^op, which is how the module axioms are
checked.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exact_chain import (ChainComplex, ChainMap, GradedMap, HomComplex, TensorComplex, disk,
                          identity_map, quasi_iso, restrict_map, retraction, sphere, subcomplex)
from .gmodule import (GModule, HomG, coset_module, fixed_points, random_gmodule,
                      restrict_module)
from .group_core import Family, FiniteGroup, coset_representatives
from .linalg import Field
from .orbit_cat import (EnrichedCategory, EnrichedOrbitCategory, HomObject, Vec, build_fixed_orbit,
                        opposite, tensor_category)
from .presheaf import (CurriedPresheaf, Presheaf, PresheafError, PresheafMap, U, curry,
                       direct_sum_presheaves, free_presheaf, uncurry)
from .witnesses import IsoWitness

POINT = "*"


class DGAError(ValueError):
    pass


def _graded(source, target, degree, comps) -> GradedMap:
    if degree == 0:
        return ChainMap(source, target, comps, check=False)
    return GradedMap(source, target, degree, comps)


class DGAlgebra:
    """A DGA on a based complex; ``mult[(i, j)]`` is a_i a_j as a sparse vector."""

    def __init__(self, basis: HomObject, mult: Mapping[tuple[int, int], Vec], unit: int,
                 name: str = "A", check: bool = True):
        self.basis = basis
        self.mult = {k: dict(v) for k, v in mult.items() if v}
        self.unit = unit
        self.name = name
        if basis.degrees[unit] != 0:
            raise DGAError("the unit must sit in degree 0")
        self._category = None
        if check:
            bad = [k for k, v in self.check().items() if not v]
            if bad:
                raise DGAError("DGA axioms fail: " + ", ".join(bad))

    @property
    def field(self) -> Field:
        return self.basis.complex.field

    @property
    def complex(self) -> ChainComplex:
        return self.basis.complex

    @property
    def rank(self) -> int:
        return self.basis.rank

    def degree(self, k: int) -> int:
        return self.basis.degrees[k]

    def product(self, i: int, j: int) -> Vec:
        return self.mult.get((i, j), {})

    def category(self) -> EnrichedCategory:
        """One object, hom = A, composition = multiplication."""
        if self._category is None:
            table = {(POINT, POINT, POINT): dict(self.mult)}
            self._category = EnrichedCategory(self.field, [POINT], {(POINT, POINT): self.basis},
                                              table, {POINT: {self.unit: self.field.one()}},
                                              name=self.name)
        return self._category

    def check(self) -> dict[str, bool]:
        return self.category().check()

    def left_mult(self, k: int) -> GradedMap:
        """x |-> a_k x on A."""
        F = self.field
        B = self.basis
        deg = B.degrees[k]
        comps: dict[int, object] = {}
        for j in range(B.rank):
            n, i = B.local(j)
            for r, c in self.product(k, j).items():
                m, rr = B.local(r)
                A = comps.setdefault(n, F.zeros(self.complex.dim(n + deg), self.complex.dim(n)))
                A[rr, i] = A[rr, i] + c
        return _graded(self.complex, self.complex, deg, comps)

    def right_mult(self, k: int) -> GradedMap:
        """x |-> (-1)^{|a_k||x|} x a_k, the left-linear map A -> A attached to a_k."""
        F = self.field
        B = self.basis
        deg = B.degrees[k]
        comps: dict[int, object] = {}
        for j in range(B.rank):
            n, i = B.local(j)
            s = -1 if (deg * n) % 2 else 1
            for r, c in self.product(j, k).items():
                m, rr = B.local(r)
                A = comps.setdefault(n, F.zeros(self.complex.dim(n + deg), self.complex.dim(n)))
                A[rr, i] = A[rr, i] + s * c
        return _graded(self.complex, self.complex, deg, comps)

    def to_json(self) -> dict:
        F = self.field
        B = self.basis
        return {"name": self.name, "field": F.name,
                "basis": [{"label": B.labels[k], "degree": B.degrees[k]} for k in range(B.rank)],
                "unit": B.labels[self.unit],
                "products": [[B.labels[i], B.labels[j], B.labels[r], F.to_json(c)]
                             for (i, j), v in sorted(self.mult.items()) for r, c in sorted(v.items())],
                "differential": [[B.labels[k], B.labels[r], F.to_json(c)]
                                 for k in range(B.rank) for r, c in sorted(B.boundary(k).items())]}


def dga_from_data(F: Field, basis: Sequence[tuple[str, int]], products: Sequence, unit: str,
                  differential: Sequence = (), name: str = "A") -> DGAlgebra:
    """Build a DGA from labelled basis elements, products (a, b, c, coeff) meaning
    a b has coefficient coeff on c, and differential entries (a, b, coeff) meaning
    d(a) has coefficient coeff on b."""
    order = sorted(range(len(basis)), key=lambda k: (basis[k][1], k))
    labels = [basis[k][0] for k in order]
    if len(set(labels)) != len(labels):
        raise DGAError("basis labels must be distinct")
    degs = [basis[k][1] for k in order]
    pos = {l: k for k, l in enumerate(labels)}
    dims: dict[int, int] = {}
    local = {}
    for k, n in enumerate(degs):
        local[k] = (n, dims.get(n, 0))
        dims[n] = dims.get(n, 0) + 1
    diffs = {n: F.zeros(dims.get(n - 1, 0), dims[n]) for n in dims if dims.get(n - 1)}
    for a, b, c in differential:
        try:
            (n, i), (m, r) = local[pos[a]], local[pos[b]]
        except KeyError as exc:
            raise DGAError(f"unknown basis label {exc}") from None
        if m != n - 1:
            raise DGAError(f"d({a}) must lie in degree {n - 1}")
        diffs[n][r, i] = F.coerce(c)
    cx = ChainComplex(F, dims, diffs)
    mult: dict[tuple[int, int], Vec] = {}
    for a, b, c, coeff in products:
        try:
            i, j, r = pos[a], pos[b], pos[c]
        except KeyError as exc:
            raise DGAError(f"unknown basis label {exc}") from None
        v = mult.setdefault((i, j), {})
        x = v.get(r, 0) + F.coerce(coeff)
        if x == 0:
            v.pop(r, None)
        else:
            v[r] = x
    if unit not in pos:
        raise DGAError(f"unknown unit label {unit!r}")
    return DGAlgebra(HomObject(cx, labels), mult, pos[unit], name=name)


def unit_algebra(F: Field) -> DGAlgebra:
    """R itself."""
    return dga_from_data(F, [("1", 0)], [("1", "1", "1", 1)], "1", name="R")


def exterior_algebra(F: Field, acyclic: bool = False) -> DGAlgebra:
    """Lambda(x) with |x| = 1 and d = 0, or dx = 1 when ``acyclic``."""
    prods = [("1", "1", "1", 1), ("1", "x", "x", 1), ("x", "1", "x", 1)]
    diff = [("x", "1", 1)] if acyclic else []
    return dga_from_data(F, [("1", 0), ("x", 1)], prods, "1", diff,
                         name="Lambda(x),dx=1" if acyclic else "Lambda(x)")


def dga_from_json(data: Mapping) -> DGAlgebra:
    F = Field.parse(str(data.get("field", "q")))
    basis = [(str(b["label"]), int(b["degree"])) for b in data["basis"]]
    return dga_from_data(F, basis, [tuple(p) for p in data.get("products", [])],
                         str(data.get("unit", basis[0][0])),
                         [tuple(d) for d in data.get("differential", [])],
                         name=str(data.get("name", "A")))


# modules


class AModule:
    def __init__(self, algebra: DGAlgebra, complex: ChainComplex, acts: Sequence[GradedMap],
                 check: bool = True):
        self.algebra = algebra
        self.complex = complex
        self.acts = list(acts)
        if len(self.acts) != algebra.rank:
            raise DGAError("need one action map per basis element of A")
        for k, m in enumerate(self.acts):
            if m.source != complex or m.target != complex or m.degree != algebra.degree(k):
                raise DGAError(f"action of {algebra.basis.labels[k]} has the wrong shape")
        if check:
            bad = [k for k, v in self.check().items() if not v]
            if bad:
                raise DGAError("module axioms fail: " + ", ".join(bad))

    @property
    def field(self) -> Field:
        return self.algebra.field

    def as_presheaf(self, Aop: EnrichedCategory | None = None) -> Presheaf:
        Aop = Aop or opposite(self.algebra.category())
        return Presheaf(Aop, {POINT: self.complex}, {(POINT, POINT): self.acts}, check=False)

    def check(self) -> dict[str, bool]:
        ok = self.as_presheaf().check()
        return {"unit": ok["identity"], "associative": ok["composition"], "leibniz": ok["chain"]}

    def __eq__(self, other) -> bool:
        return (isinstance(other, AModule) and self.algebra is other.algebra
                and self.complex == other.complex
                and all(a == b for a, b in zip(self.acts, other.acts)))

    def __hash__(self):
        return hash(self.complex)


class GAModule(AModule):
    """An A-module with a G-action by A-linear chain automorphisms."""

    def __init__(self, algebra: DGAlgebra, gmodule: GModule, acts: Sequence[GradedMap],
                 check: bool = True):
        super().__init__(algebra, gmodule.complex, acts, check=check)
        self.gmodule = gmodule
        if check and not self.commutes():
            raise DGAError("G-action does not commute with the A-action")

    @property
    def group(self) -> FiniteGroup:
        return self.gmodule.group

    def commutes(self) -> bool:
        G = self.group
        return all(self.gmodule.act(g) @ a == a @ self.gmodule.act(g)
                   for g in G.generators for a in self.acts)

    def __eq__(self, other) -> bool:
        return AModule.__eq__(self, other) and self.gmodule == getattr(other, "gmodule", None)

    def __hash__(self):
        return hash(self.complex)


def extend_scalars(A: DGAlgebra, X: ChainComplex) -> AModule:
    """The free module A (x) X, with A acting on the left factor."""
    T = TensorComplex(A.complex, X)
    ident = identity_map(X)
    acts = [T.tensor_maps(A.left_mult(k), ident, T) for k in range(A.rank)]
    M = AModule(A, T.complex, acts, check=False)
    M.tensor = T
    return M


def extend_scalars_g(A: DGAlgebra, N: GModule) -> GAModule:
    """A (x) N with G acting on N."""
    M = extend_scalars(A, N.complex)
    T = M.tensor
    idA = identity_map(A.complex)
    acts = [T.tensor_maps(idA, N.act(g), T) for g in N.group.elements]
    gm = GModule(N.group, T.complex, acts, check=False)
    out = GAModule(A, gm, M.acts, check=False)
    out.tensor = T
    return out


def fixed_ga(N: GAModule, H) -> tuple[AModule, ChainMap]:
    """N^H with the restricted A-action, and its inclusion into N."""
    fp = fixed_points(N.gmodule, H)
    acts = [restrict_map(a, fp.inclusion, fp.inclusion) for a in N.acts]
    return AModule(N.algebra, fp.complex, acts, check=False), fp.inclusion


@dataclass
class HomA:
    """Hom_A(M, N) inside Hom_R(M, N): maps with f(a m) = (-1)^{|a||f|} a f(m)."""

    hom: HomComplex
    complex: ChainComplex
    inclusion: ChainMap
    gmodule: GModule | None = None

    def unpack(self, n: int, v) -> GradedMap:
        return self.hom.unpack(n, self.inclusion.comp(n) * v)


def hom_A(M: AModule, N: AModule) -> HomA:
    if M.algebra is not N.algebra:
        raise DGAError("modules over different algebras")
    A = M.algebra
    F = A.field
    hc = HomComplex(M.complex, N.complex)
    bases = {}
    for n in hc.complex.degrees:
        dim = hc.complex.dim(n)
        if not dim:
            continue
        rows = []
        for k in range(A.rank):
            a = A.degree(k)
            cols = []
            for j in range(dim):
                f = hc.unpack(n, F.unit_vector(dim, j))
                c = N.acts[k] @ f
                g = f @ M.acts[k]
                c = c - g if (a * n) % 2 == 0 else c + g
                cols.append(hc.pack(c))
            rows.append(F.hstack(cols, hc.complex.dim(n + a)))
        stacked = F.vstack(rows, dim)
        bases[n] = F.nullspace(stacked)
    S, inc = subcomplex(hc.complex, bases)
    out = HomA(hc, S, inc)
    if isinstance(M, GAModule) and isinstance(N, GAModule):
        out.gmodule = restrict_module(HomG(M.gmodule, N.gmodule).module, inc)
    return out


def hom_A_free_witness(N: AModule) -> IsoWitness:
    """Hom_A(A, N) = N: evaluation at 1, inverse n |-> (a |-> (-1)^{|a||n|} a n)."""
    A = N.algebra
    F = A.field
    Am = AModule(A, A.complex, [A.left_mult(k) for k in range(A.rank)], check=False)
    H = hom_A(Am, N)
    u = A.basis.local(A.unit)[1]
    fwd = {}
    for n in H.complex.degrees:
        if not H.complex.dim(n):
            continue
        cols = []
        for j in range(H.complex.dim(n)):
            f = H.unpack(n, F.unit_vector(H.complex.dim(n), j))
            cols.append(F.block(f.comp(0), range(N.complex.dim(n)), [u]))
        fwd[n] = F.hstack(cols, N.complex.dim(n))
    forward = ChainMap(H.complex, N.complex, fwd, check=False)
    bwd = {}
    for n in N.complex.degrees:
        dim = N.complex.dim(n)
        if not dim:
            continue
        cols = []
        for j in range(dim):
            v = F.unit_vector(dim, j)
            comps: dict[int, object] = {}
            for k in range(A.rank):
                p, i = A.basis.local(k)
                s = -1 if (p * n) % 2 else 1
                img = N.acts[k].comp(n) * v if N.complex.dim(n) else None
                if img is None:
                    continue
                B = comps.setdefault(p, F.zeros(N.complex.dim(p + n), A.complex.dim(p)))
                for r in range(img.nrows()):
                    B[r, i] = B[r, i] + s * img[r, 0]
            g = _graded(A.complex, N.complex, n, comps)
            col = H.hom.pack(g)
            x = retraction(H.inclusion, n) * col
            if H.inclusion.comp(n) * x != col:
                raise DGAError("a |-> a n is not A-linear")
            cols.append(x)
        bwd[n] = F.hstack(cols, H.complex.dim(n))
    backward = ChainMap(N.complex, H.complex, bwd, check=False)
    return IsoWitness(forward, backward, "Hom_A(A, N) = N")


# presheaves over VO_F (x) A^op


@dataclass
class ModuleSetting:
    """VO_F, A, A^op and the tensor category VO_F (x) A^op, built once."""

    VO: EnrichedOrbitCategory
    A: DGAlgebra
    Aop: EnrichedCategory = field(init=False)
    P: EnrichedCategory = field(init=False)

    def __post_init__(self):
        self.Aop = opposite(self.A.category())
        self.P = tensor_category(self.VO, self.Aop)

    @property
    def group(self) -> FiniteGroup:
        return self.VO.group

    def obj(self, H):
        return (H, POINT)


def module_setting(G: FiniteGroup, family: Family, A: DGAlgebra) -> ModuleSetting:
    return ModuleSetting(build_fixed_orbit(G, family, A.field), A)


def U_A(N: GAModule, S: ModuleSetting) -> Presheaf:
    """H |-> N^H as A-modules; the VO_F structure maps are those of U(N)."""
    X0 = U(N.gmodule, S.VO)
    inner = {}
    for H in S.VO.objects:
        inc = X0.fixed[H].inclusion
        acts = [restrict_map(a, inc, inc) for a in N.acts]
        inner[H] = Presheaf(S.Aop, {POINT: X0.values[H]}, {(POINT, POINT): acts}, check=False)
    outer = {key: [{POINT: m} for m in ms] for key, ms in X0.maps.items()}
    X = uncurry(CurriedPresheaf(S.VO, S.Aop, inner, outer), S.P)
    X.fixed = X0.fixed
    X.module = N
    return X


def _e_index(S: ModuleSetting):
    VO = S.VO
    e = VO.group.trivial()
    if e not in VO.objects:
        raise PresheafError("the family must contain the trivial subgroup")
    return e


def T_A(X: Presheaf, S: ModuleSetting) -> GAModule:
    """Evaluate at (G/e, *): the A-module X(e, *) with G acting through hom(e, e)."""
    Y = curry(X)
    VO = S.VO
    G = VO.group
    e = _e_index(S)
    pos = {o[0]: k for k, o in enumerate(VO.hom_data[(e, e)])}
    cs = VO.cosets[e]
    acts = [Y.outer[(e, e)][pos[cs.action[g][0]]][POINT] for g in G.elements]
    gm = GModule(G, X.values[(e, POINT)], acts, check=False)
    return GAModule(S.A, gm, Y.inner[e].maps[(POINT, POINT)], check=False)


def unit_eta_A(X: Presheaf, S: ModuleSetting, UTX: Presheaf | None = None) -> PresheafMap:
    Y = curry(X)
    VO = S.VO
    e = _e_index(S)
    UTX = UTX or U_A(T_A(X, S), S)
    comps = {}
    for H in VO.objects:
        pos = [k for k, o in enumerate(VO.hom_data[(e, H)]) if o == (0,)][0]
        m = Y.outer[(e, H)][pos][POINT]
        comps[(H, POINT)] = restrict_map(m, None, UTX.fixed[H].inclusion)
    return PresheafMap(X, UTX, comps)


def random_gamodule(S: ModuleSetting, rng: random.Random, max_dim: int = 2, lo: int = -1,
                    hi: int = 1) -> GAModule:
    N = random_gmodule(S.group, S.A.field, rng, lo=lo, hi=hi, max_dim=max_dim)
    return extend_scalars_g(S.A, N)


def random_module_presheaf(S: ModuleSetting, rng: random.Random) -> Presheaf:
    """A random presheaf on VO_F (x) A^op: U_A of a random module, a free presheaf,
    or a sum of the two."""
    kind = rng.randrange(3)
    F = S.A.field
    if kind == 0:
        return U_A(random_gamodule(S, rng), S)
    H = rng.choice(S.VO.objects)
    n = rng.randint(-1, 1)
    cell = free_presheaf(S.P, (H, POINT), rng.choice([sphere(F, n), disk(F, n)]))
    if kind == 1:
        return cell
    X, _ = direct_sum_presheaves([U_A(random_gamodule(S, rng), S), cell])
    return X


# reports


def _presheaf_ok(X: Presheaf) -> bool:
    return all(X.check().values())


def dreitoo_adjunction(G: FiniteGroup, family: Family, A: DGAlgebra, seed: int = 0,
                       samples: int = 5, window: tuple[int, int] = (0, 1)) -> dict:
    """The (T, U) suite with values in A-modules.

    Checks epsilon = id and the triangle identities on random modules, and that
    eta is an isomorphism on the free cells F_{(G/H, *)} (x) S^n and (x) D^n.
    """
    S = module_setting(G, family, A)
    rng = random.Random(seed)
    F = A.field
    eps, tri, laws = [], [], []
    for _ in range(samples):
        N = random_gamodule(S, rng)
        UN = U_A(N, S)
        laws.append(_presheaf_ok(UN))
        eps.append(T_A(UN, S) == N)
        eta_U = unit_eta_A(UN, S, UN)
        tri.append(all(eta_U.comps[a] == identity_map(UN.values[a]) for a in S.P.objects))
    cells = {}
    for H in S.VO.objects:
        for n in range(window[0], window[1] + 1):
            for shape, M in (("S", sphere(F, n)), ("D", disk(F, n))):
                X = free_presheaf(S.P, (H, POINT), M)
                TX = T_A(X, S)
                eta = unit_eta_A(X, S)
                iso = eta.is_natural() and eta.is_level_iso()
                left = eta.comps[(S.VO.group.trivial(), POINT)] == identity_map(TX.complex)
                acyclic = all(X.values[a].is_acyclic() for a in S.P.objects)
                cells[f"{H.label}:{shape}{n}"] = {
                    "eta_iso": bool(iso), "T(eta)=id": bool(left),
                    "levels_acyclic": bool(acyclic),
                    "dims": {S.P.label(a): dict(sorted(X.values[a].dims.items()))
                             for a in S.P.objects}}
                tri.append(left)
    ok = (all(eps) and all(tri) and all(laws)
          and all(c["eta_iso"] for c in cells.values())
          and all(c["levels_acyclic"] for k, c in cells.items() if ":D" in k))
    return {"algebra": A.name, "group": G.name, "family": family.labels, "seed": seed,
            "epsilon_identity": all(eps), "triangles": all(tri), "presheaf_axioms": all(laws),
            "cells": cells, "ok": bool(ok)}


@dataclass
class ReindexWitness:
    """curry/uncurry between presheaves on VO_F (x) A^op and VO_F-indexed A-modules."""

    source: Presheaf
    curried: CurriedPresheaf
    back: Presheaf

    def verify(self) -> bool:
        return (self.back == self.source and all(self.source.check().values())
                and all(self.curried.check().values()))


def identify_fun_pre(X: Presheaf) -> ReindexWitness:
    Y = curry(X)
    return ReindexWitness(X, Y, uncurry(Y, X.category))


def _phi(VO: EnrichedOrbitCategory, H, K, k: int, Mh: GModule, Mk: GModule):
    """The G-map R[G/H] -> R[G/K], gH |-> g w for basis vector w_k of (R[G/K])^H."""
    F = VO.field
    reps = coset_representatives(VO.cosets[H])
    w = VO.fixed_vector(H, K, k)
    SK = VO.cosets[K]
    A = F.zeros(SK.size, VO.cosets[H].size)
    for c, g in enumerate(reps):
        for s in range(SK.size):
            if w[s]:
                A[SK.action[g][s], c] = A[SK.action[g][s], c] + w[s]
    return ChainMap(Mh.complex, Mk.complex, {0: A}, check=False)


def tau_comparison(G: FiniteGroup, family: Family, A: DGAlgebra) -> dict:
    """tau: (R[G/K])^H (x) A -> Hom_A(A (x) R[G/H], A (x) R[G/K])^G, w (x) a |-> rho_a (x) phi_w.

    rho_a is right multiplication by a (the left-linear map A -> A that a
    represents in A^op).  Reports ranks of both sides and whether tau is a
    quasi-isomorphism for this instance.
    """
    S = module_setting(G, family, A)
    F = A.field
    VO = S.VO
    mods = {H: extend_scalars_g(A, coset_module(G, H, F)) for H in VO.objects}
    rho = [A.right_mult(k) for k in range(A.rank)]
    out = {}
    all_qi = True
    for H in VO.objects:
        for K in VO.objects:
            src = S.P.hom((H, POINT), (K, POINT))
            ha = hom_A(mods[H], mods[K])
            fp = fixed_points(ha.gmodule, G.whole())
            inc = ha.inclusion @ fp.inclusion
            T = mods[H].tensor
            comps: dict[int, object] = {}
            cols: dict[int, list] = {}
            idx = S.P.pair_index[((H, POINT), (K, POINT))]
            inv = {v: key for key, v in idx.items()}
            for b in range(src.rank):
                kw, ka = inv[b]
                phi = _phi(VO, H, K, kw, coset_module(G, H, F), coset_module(G, K, F))
                f = T.tensor_maps(rho[ka], phi, mods[K].tensor)
                n = f.degree
                v = ha.hom.pack(f)
                x = retraction(inc, n) * v
                if inc.comp(n) * x != v:
                    raise DGAError("tau lands outside the G-fixed A-linear maps")
                cols.setdefault(n, []).append(x)
            for n, cs in cols.items():
                comps[n] = F.hstack(cs, fp.complex.dim(n))
            tau = ChainMap(src.complex, fp.complex, comps, check=False)
            chain = tau.commutes_with_d()
            qi = chain and quasi_iso(tau)
            all_qi = all_qi and qi
            out[f"{H.label}->{K.label}"] = {
                "source_dims": dict(sorted(src.complex.dims.items())),
                "target_dims": dict(sorted(fp.complex.dims.items())),
                "source_homology": src.complex.homology(),
                "target_homology": fp.complex.homology(),
                "chain_map": bool(chain), "iso": bool(chain and tau.is_iso()),
                "quasi_iso": bool(qi)}
    return {"algebra": A.name, "group": G.name, "family": family.labels, "pairs": out,
            "quasi_iso_on_all_pairs": bool(all_qi)}
