"""Explicit isomorphisms for the adjunctions between G-modules, fixed points and orbits.

Each witness is a pair of chain maps built from formulas (never by solving
for an inverse), so checking that both composites are identities is a real
test of the formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .exact_chain import (ChainComplex, ChainError, ChainMap, GradedMap, HomComplex, identity_map,
                          restrict_map, retraction, section)
from .gmodule import (GMap, GModule, HomG, SidedHObject, TensorG, coinduction, coset_module,
                      equivariant_homs, fixed_cotensor, fixed_map, fixed_points, induction,
                      orbit_tensor, orbits)
from .group_core import Subgroup, coset_gset, coset_representatives


@dataclass
class IsoWitness:
    forward: ChainMap
    backward: ChainMap
    name: str = ""
    info: dict = field(default_factory=dict)

    def verify(self) -> bool:
        f, b = self.forward, self.backward
        if not (f.commutes_with_d() and b.commutes_with_d()):
            return False
        return (b @ f == identity_map(f.source)) and (f @ b == identity_map(f.target))

    def dims(self) -> dict[str, dict[int, int]]:
        return {"source": dict(sorted(self.forward.source.dims.items())),
                "target": dict(sorted(self.forward.target.dims.items()))}


def transport(src_sub: ChainMap | None, src_hom: HomComplex,
              tgt_sub: ChainMap | None, tgt_hom: HomComplex,
              fn: Callable[[GradedMap], GradedMap]) -> ChainMap:
    """The linear map fn, evaluated on a basis of a sub-hom-complex.

    ``src_sub``/``tgt_sub`` are inclusions of subcomplexes of the two hom
    complexes (None means the whole complex).  ``fn`` takes a graded map in
    the source hom complex and returns one in the target hom complex.
    """
    F = src_hom.field
    S = src_sub.source if src_sub is not None else src_hom.complex
    T = tgt_sub.source if tgt_sub is not None else tgt_hom.complex
    comps = {}
    for n in S.degrees:
        if not S.dim(n):
            continue
        B = src_sub.comp(n) if src_sub is not None else F.identity(S.dim(n))
        cols = [tgt_hom.pack(fn(src_hom.unpack(n, v))) for v in F.columns(B)]
        V = F.hstack(cols, tgt_hom.complex.dim(n))
        if tgt_sub is not None:
            inc = tgt_sub.comp(n)
            X = retraction(tgt_sub, n) * V
            if inc * X != V:
                raise ChainError("transported map leaves the target subcomplex")
            V = X
        comps[n] = V
    return ChainMap(S, T, comps, check=False)


def _graded(source, target, degree, comps) -> GradedMap:
    if degree == 0:
        return ChainMap(source, target, comps, check=False)
    return GradedMap(source, target, degree, comps)


# double enrichment


@dataclass
class DoubleEnrichmentReport:
    fixed_cycle_dim: int
    gchain_map_dim: int
    ok: bool


def gchain_map_dim(M: GModule, N: GModule) -> int:
    """Dimension of the space of G-chain maps M -> N, from one linear system.

    Unknowns are all components f_n; constraints d f = f d and N(g) f = f M(g).
    Independent of hom complexes and fixed-point routines.
    """
    F = M.field
    A, B = M.complex, N.complex
    lay = {}
    off = 0
    for n in A.degrees:
        if A.dim(n) and B.dim(n):
            lay[n] = (off, B.dim(n), A.dim(n))
            off += B.dim(n) * A.dim(n)
    if off == 0:
        return 0
    rows = []
    for n in A.degrees:
        r, c = B.dim(n - 1), A.dim(n)
        if r and c:
            R = F.zeros(r * c, off)
            if n in lay:
                o, br, ac = lay[n]
                F.set_block(R, 0, o, F.kron(B.d(n), F.identity(ac)))
            if n - 1 in lay:
                o, br, ac = lay[n - 1]
                F.set_block(R, 0, o, -F.kron(F.identity(br), A.d(n).transpose()))
            rows.append(R)
        if n in lay:
            o, br, ac = lay[n]
            for g in M.group.generators:
                R = F.zeros(br * ac, off)
                F.set_block(R, 0, o, F.kron(N.mat(g, n), F.identity(ac))
                            - F.kron(F.identity(br), M.mat(g, n).transpose()))
                rows.append(R)
    if not rows:
        return off
    return off - F.rank(F.vstack(rows, off))


def double_enrichment(M: GModule, N: GModule) -> DoubleEnrichmentReport:
    hg = HomG(M, N)
    fp = hg.fixed()
    F = M.field
    z = fp.complex.dim(0) - F.rank(fp.complex.d(0))
    direct = gchain_map_dim(M, N)
    ok = z == direct
    if ok:
        for f in hg.equivariant_chain_maps():
            GMap(M, N, ChainMap(f.source, f.target, f.comps))
    return DoubleEnrichmentReport(z, direct, ok)


# bitensor adjunction


@dataclass
class BitensorWitness:
    curry_v: IsoWitness    # Hom(M (x) V, N) -> Hom(V, Hom(M, N))
    curry_m: IsoWitness    # Hom(M (x) V, N) -> Hom(M, F(V, N))
    fixed_v: IsoWitness    # the same after taking G-fixed points
    fixed_m: IsoWitness
    equivariant: bool

    def verify(self) -> bool:
        return self.equivariant and all(w.verify() for w in
                                        (self.curry_v, self.curry_m, self.fixed_v, self.fixed_m))


def _signed_perm(F, nrows, ncols, entries):
    A = F.zeros(nrows, ncols)
    for r, c, s in entries:
        A[r, c] = s
    return A


def bitensor_witness(M: GModule, V: GModule, N: GModule) -> BitensorWitness:
    F = M.field
    MV = TensorG(M, V)
    A = HomG(MV.module, N)
    HVN = HomG(V, N)
    HMN = HomG(M, N)
    Cm = HomG(M, HVN.module)
    Cv = HomG(V, HMN.module)
    T = MV.tensor
    Mc, Vc, Nc = M.complex, V.complex, N.complex
    to_m: dict[int, list] = {}
    to_v: dict[int, list] = {}
    # index bookkeeping: f(m (x) v) for m in M_p, v in V_q, landing in N_{p+q+n}
    for n, blocks in A.hom.layout.items():
        em, ev = [], []
        for k, offA in blocks:
            tk = T.complex.dim(k)
            for p, q, offT in T.layout[k]:
                mp, vq = Mc.dim(p), Vc.dim(q)
                nz = Nc.dim(k + n)
                if not (nz and mp and vq):
                    continue
                offC = Cm.hom.offset(n, p)
                offH = HVN.hom.offset(p + n, q)
                offB = Cv.hom.offset(n, q)
                offH2 = HMN.hom.offset(q + n, p)
                sign = -1 if (p * q) % 2 else 1
                for z in range(nz):
                    for i in range(mp):
                        for j in range(vq):
                            a = offA + z * tk + offT + i * vq + j
                            r = offH + z * vq + j
                            em.append((offC + r * mp + i, a, 1))
                            r2 = offH2 + z * mp + i
                            ev.append((offB + r2 * vq + j, a, sign))
        to_m[n] = em
        to_v[n] = ev

    def build(target: HomG, table):
        comps = {n: _signed_perm(F, target.complex.dim(n), A.complex.dim(n), table[n])
                 for n in A.complex.dims}
        fwd = ChainMap(A.complex, target.complex, comps, check=False)
        bwd = ChainMap(target.complex, A.complex,
                       {n: comps[n].transpose() * 1 for n in comps}, check=False)
        # a signed permutation matrix is inverted by its transpose
        return fwd, bwd

    fm, bm = build(Cm, to_m)
    fv, bv = build(Cv, to_v)
    wm = IsoWitness(fm, bm, "Hom(M(x)V,N) = Hom(M,F(V,N))")
    wv = IsoWitness(fv, bv, "Hom(M(x)V,N) = Hom(V,Hom(M,N))")
    G = M.group
    equiv = all(fm @ A.act(g) == Cm.act(g) @ fm and fv @ A.act(g) == Cv.act(g) @ fv
                for g in G.generators)
    fa, fc, fb = A.fixed(), Cm.fixed(), Cv.fixed()
    fixed_m = IsoWitness(restrict_map(fm @ fa.inclusion, None, fc.inclusion),
                         restrict_map(bm @ fc.inclusion, None, fa.inclusion), "fixed (M)")
    fixed_v = IsoWitness(restrict_map(fv @ fa.inclusion, None, fb.inclusion),
                         restrict_map(bv @ fb.inclusion, None, fa.inclusion), "fixed (V)")
    return BitensorWitness(wv, wm, fixed_v, fixed_m, equiv)


# induction and coinduction


def induction_witness(N: SidedHObject, M: GModule) -> IsoWitness:
    """hom_G(R[G] (x)_H N, M) = hom_H(N, M) via F |-> F o j and phi |-> (g (x) n |-> g phi(n))."""
    H = N.subgroup
    G = M.group
    F = M.field
    ind = induction(N, G)
    left = HomG(ind.module, M)
    lfix = left.fixed()
    rhom = HomComplex(N.complex, M.complex)
    rfix = equivariant_homs(rhom, N.action, M.action, H.generators)
    P = ind.orbit.projection
    T = ind.orbit.tensor
    order = G.order

    def j_comp(n):
        # n |-> [e (x) n]; the basis of R[G] (x) N_n is indexed by g * dim N_n + i
        d = N.complex.dim(n)
        E = F.zeros(order * d, d)
        for i in range(d):
            E[G.identity * d + i, i] = 1
        return P.comp(n) * E

    j = ChainMap(N.complex, ind.module.complex, {n: j_comp(n) for n in N.complex.dims}, check=False)

    def fwd(f: GradedMap) -> GradedMap:
        return f @ j

    def bwd(phi: GradedMap) -> GradedMap:
        deg = phi.degree
        comps = {}
        for n in T.complex.dims:
            blocks = [M.mat(g, n + deg) * phi.comp(n) for g in G.elements]
            tilde = F.hstack(blocks, M.complex.dim(n + deg))
            comps[n] = tilde
        big = _graded(T.complex, M.complex, deg, comps)
        comps2 = {}
        for n in ind.module.complex.degrees:
            X = big.comp(n) * section(P, n)
            if X * P.comp(n) != big.comp(n):
                raise ChainError("adjoint does not descend to the orbit tensor")
            comps2[n] = X
        return _graded(ind.module.complex, M.complex, deg, comps2)

    f = transport(lfix.inclusion, left.hom, rfix.inclusion, rhom, fwd)
    b = transport(rfix.inclusion, rhom, lfix.inclusion, left.hom, bwd)
    return IsoWitness(f, b, f"induction {H.label}->{G.name}")


def coinduction_witness(M: GModule, N: SidedHObject) -> IsoWitness:
    """hom_H(M, N) = hom_G(M, F_H(R[G], N)) via phi |-> (m |-> (x |-> phi(x m)))."""
    H = N.subgroup
    G = M.group
    F = M.field
    co = coinduction(N, G)
    lhom = HomComplex(M.complex, N.complex)
    lfix = equivariant_homs(lhom, M.action, N.action, H.generators)
    right = HomG(M, co.module)
    rfix = right.fixed()
    fc = co.cotensor
    inc = fc.inclusion
    order = G.order

    def fwd(phi: GradedMap) -> GradedMap:
        deg = phi.degree
        comps = {}
        for k in M.complex.dims:
            dn = N.complex.dim(k + deg)
            # column i: the matrix with column x equal to phi(x e_i), flattened row-major
            cols = []
            imgs = [phi.comp(k) * M.mat(x, k) for x in G.elements]
            for i in range(M.complex.dim(k)):
                flat = [imgs[x][z, i] for z in range(dn) for x in range(order)]
                cols.append(F.from_flat(dn * order, 1, flat))
            amb = F.hstack(cols, dn * order)
            comps[k] = retraction(inc, k + deg) * amb
            if inc.comp(k + deg) * comps[k] != amb:
                raise ChainError("adjoint is not H-linear")
        return _graded(M.complex, co.module.complex, deg, comps)

    def bwd(Phi: GradedMap) -> GradedMap:
        deg = Phi.degree
        comps = {}
        for k in M.complex.dims:
            dn = N.complex.dim(k + deg)
            amb = inc.comp(k + deg) * Phi.comp(k)
            # evaluate at x = e: entry (z, e) of each flattened column
            rows = [[amb[z * order + G.identity, i] for i in range(M.complex.dim(k))]
                    for z in range(dn)]
            comps[k] = F.from_flat(dn, M.complex.dim(k), [x for r in rows for x in r])
        return _graded(M.complex, N.complex, deg, comps)

    f = transport(lfix.inclusion, lhom, rfix.inclusion, right.hom, fwd)
    b = transport(rfix.inclusion, right.hom, lfix.inclusion, lhom, bwd)
    return IsoWitness(f, b, f"coinduction {H.label}->{G.name}")


# keyG


def _coset_reps(G, H):
    S = coset_gset(G, H)
    return S, coset_representatives(S)


def keyG_iso(M: GModule, N: GModule, H: Subgroup) -> IsoWitness:
    """hom_G(R[G/H] (x) M, N) = hom(M, N^H) for M with trivial action.

    For M with a nontrivial action the right side is hom_H(M, N); the
    witness records which one was used in ``info["target"]``.
    """
    G = M.group
    F = M.field
    S, reps = _coset_reps(G, H)
    VM = TensorG(coset_module(G, H, F), M)
    left = HomG(VM.module, N)
    lfix = left.fixed()
    trivial = M.is_trivial()
    if trivial:
        NH = fixed_points(N, H)
        rhom = HomComplex(M.complex, NH.complex)
        rsub = None
        lift = NH.inclusion
    else:
        rhom = HomComplex(M.complex, N.complex)
        rsub = equivariant_homs(rhom, M.action, N.action, H.generators).inclusion
        lift = None
    ncos = S.size

    def fwd(Fm: GradedMap) -> GradedMap:
        deg = Fm.degree
        comps = {}
        for n in M.complex.dims:
            m = M.complex.dim(n)
            X = F.block(Fm.comp(n), range(N.complex.dim(n + deg)), range(0, m))
            if lift is not None:
                L = lift.comp(n + deg)
                Y = retraction(lift, n + deg) * X
                if L * Y != X:
                    raise ChainError("F(eH (x) -) does not land in N^H")
                X = Y
            comps[n] = X
        return _graded(M.complex, rhom.N, deg, comps)

    def bwd(phi: GradedMap) -> GradedMap:
        deg = phi.degree
        comps = {}
        for n in M.complex.dims:
            P = phi.comp(n)
            if lift is not None:
                P = lift.comp(n + deg) * P
            blocks = [N.mat(g, n + deg) * P * M.mat(G.inv(g), n) for g in reps]
            comps[n] = F.hstack(blocks, N.complex.dim(n + deg))
        return _graded(VM.complex, N.complex, deg, comps)

    f = transport(lfix.inclusion, left.hom, rsub, rhom, fwd)
    b = transport(rsub, rhom, lfix.inclusion, left.hom, bwd)
    return IsoWitness(f, b, f"keyG {H.label}",
                      {"target": "hom(M, N^H)" if trivial else "hom_H(M, N)", "cosets": ncos})


def keyG_naturality(M: GModule, N: GModule, N2: GModule, u: GMap, H: Subgroup) -> bool:
    """The keyG isomorphism commutes with post-composition by a G-map u: N -> N2."""
    w1 = keyG_iso(M, N, H)
    w2 = keyG_iso(M, N2, H)
    F = M.field
    G = M.group
    VM = TensorG(coset_module(G, H, F), M)
    A1, A2 = HomG(VM.module, N), HomG(VM.module, N2)
    f1, f2 = A1.fixed(), A2.fixed()
    post_left = restrict_map(A1.hom.induced(A2.hom, post=u.map) @ f1.inclusion, None, f2.inclusion)
    if M.is_trivial():
        NH, N2H = fixed_points(N, H), fixed_points(N2, H)
        uh = fixed_map(u.map, NH, N2H)
        R1, R2 = HomComplex(M.complex, NH.complex), HomComplex(M.complex, N2H.complex)
        post_right = R1.induced(R2, post=uh)
    else:
        R1, R2 = HomComplex(M.complex, N.complex), HomComplex(M.complex, N2.complex)
        s1 = equivariant_homs(R1, M.action, N.action, H.generators)
        s2 = equivariant_homs(R2, M.action, N2.action, H.generators)
        post_right = restrict_map(R1.induced(R2, post=u.map) @ s1.inclusion, None, s2.inclusion)
    return (w2.forward @ post_left == post_right @ w1.forward
            and w2.backward @ post_right == post_left @ w1.backward)


# keyGthree


def keyGthree_orbits(M: GModule, H: Subgroup) -> IsoWitness:
    """M/H = R[G/H] (x)_G M, with R[G/H] a right G-object via x.g = g^-1 x."""
    G = M.group
    F = M.field
    S, reps = _coset_reps(G, H)
    Vm = coset_module(G, H, F)
    V = Vm.as_right(G.whole())
    ot = orbit_tensor(V, M.restrict(G.whole()))
    orb = orbits(M, H)
    P = ot.projection
    ncos = S.size
    fcomps, bcomps = {}, {}
    for n in M.complex.dims:
        m = M.complex.dim(n)
        E = F.zeros(ncos * m, m)
        for i in range(m):
            E[i, i] = 1
        # m |-> [eH (x) m], descended along M -> M/H
        amb_f = P.comp(n) * E
        X = amb_f * section(orb.projection, n)
        if X * orb.projection.comp(n) != amb_f:
            raise ChainError("[eH (x) -] does not factor through M/H")
        fcomps[n] = X
        # [gH (x) m] |-> [g^-1 m]
        amb_b = F.hstack([orb.projection.comp(n) * M.mat(G.inv(g), n) for g in reps], orb.complex.dim(n))
        Y = amb_b * section(P, n)
        if Y * P.comp(n) != amb_b:
            raise ChainError("inverse does not descend to the orbit tensor")
        bcomps[n] = Y
    f = ChainMap(orb.complex, ot.complex, fcomps, check=False)
    b = ChainMap(ot.complex, orb.complex, bcomps, check=False)
    return IsoWitness(f, b, f"M/{H.label} = R[G/H] (x)_G M")


def keyGthree_fixed(M: GModule, H: Subgroup) -> IsoWitness:
    """M^H = F_G(R[G/H], M) via m |-> (gH |-> g m) and f |-> f(eH)."""
    G = M.group
    F = M.field
    S, reps = _coset_reps(G, H)
    Vm = coset_module(G, H, F)
    fc = fixed_cotensor(Vm.restrict(G.whole()), M.restrict(G.whole()))
    fp = fixed_points(M, H)
    inc = fc.inclusion
    ncos = S.size
    fcomps, bcomps = {}, {}
    for n in M.complex.dims:
        m = M.complex.dim(n)
        B = fp.inclusion.comp(n)
        # Hom(R[G/H], M)_n is one block of shape m x ncos, flattened row-major
        cols = []
        imgs = [M.mat(g, n) * B for g in reps]
        for j in range(B.ncols()):
            flat = [imgs[c][z, j] for z in range(m) for c in range(ncos)]
            cols.append(F.from_flat(m * ncos, 1, flat))
        amb = F.hstack(cols, m * ncos)
        X = retraction(inc, n) * amb
        if inc.comp(n) * X != amb:
            raise ChainError("m |-> (gH |-> gm) is not G-linear")
        fcomps[n] = X
        sel = F.zeros(m, m * ncos)
        for z in range(m):
            sel[z, z * ncos] = 1
        ev = sel * inc.comp(n)
        Y = retraction(fp.inclusion, n) * ev
        if B * Y != ev:
            raise ChainError("f(eH) is not H-fixed")
        bcomps[n] = Y
    f = ChainMap(fp.complex, fc.complex, fcomps, check=False)
    b = ChainMap(fc.complex, fp.complex, bcomps, check=False)
    return IsoWitness(f, b, f"M^{H.label} = F_G(R[G/H], M)")


# trivial action / fixed points (the "obvious" remark)


def trivial_fixed_witness(X: ChainComplex, Y: GModule) -> IsoWitness:
    """hom_G(eps* X, Y) = Hom(X, Y)^G = hom(X, Y^G)."""
    from .gmodule import trivial_action
    G = Y.group
    epsX = trivial_action(X, G)
    left = HomG(epsX, Y)
    lfix = left.fixed()
    YG = fixed_points(Y, G.whole())
    rhom = HomComplex(X, YG.complex)
    inc = YG.inclusion

    def fwd(f: GradedMap) -> GradedMap:
        comps = {}
        for n in X.dims:
            A = f.comp(n)
            L = inc.comp(n + f.degree)
            Z = retraction(inc, n + f.degree) * A
            if L * Z != A:
                raise ChainError("map does not land in Y^G")
            comps[n] = Z
        return _graded(X, YG.complex, f.degree, comps)

    def bwd(g: GradedMap) -> GradedMap:
        return _graded(X, Y.complex, g.degree,
                       {n: inc.comp(n + g.degree) * g.comp(n) for n in X.dims})

    f = transport(lfix.inclusion, left.hom, None, rhom, fwd)
    b = transport(None, rhom, lfix.inclusion, left.hom, bwd)
    return IsoWitness(f, b, "hom_G(eps* X, Y) = hom(X, Y^G)")
