"""DG R[G]-modules: chain complexes with a degreewise G-action commuting with d."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .exact_chain import (ChainComplex, ChainMap, GradedMap, HomComplex, TensorComplex,
                          concentrated, descend_map, identity_map, joint_coequalizer,
                          joint_equalizer, quotient, restrict_map, subcomplex)
from .group_core import FiniteGroup, GSet, Subgroup, coset_gset, regular_gset
from .linalg import Field, Kron


class GModuleError(ValueError):
    pass


class GModule:
    """A chain complex with a left G-action by chain automorphisms.

    ``action[g]`` is the :class:`ChainMap` for the element with index g.
    ``blocks`` optionally records, per degree, sizes of diagonal blocks that
    every action matrix respects; fixed points use it to split the solve.
    """

    def __init__(self, group: FiniteGroup, complex: ChainComplex, action: Sequence[ChainMap],
                 check: bool = True, blocks: Mapping[int, Sequence[int]] | None = None):
        self.group = group
        self.complex = complex
        self.action = tuple(action)
        self.blocks = dict(blocks) if blocks else None
        if len(self.action) != group.order:
            raise GModuleError("need one action map per group element")
        if check:
            self.validate()

    def validate(self) -> None:
        G, C = self.group, self.complex
        for a in self.action:
            if a.source != C or a.target != C:
                raise GModuleError("action maps must be endomorphisms of the complex")
            if not a.commutes_with_d():
                raise GModuleError("action does not commute with the differential")
        if self.action[G.identity] != identity_map(C):
            raise GModuleError("identity must act as the identity")
        for g in G.elements:
            for h in G.elements:
                if self.action[G.mul(g, h)] != self.action[g] @ self.action[h]:
                    raise GModuleError(f"action(gh) != action(g) action(h) at "
                                       f"({G.labels[g]}, {G.labels[h]})")

    @classmethod
    def from_generators(cls, group: FiniteGroup, complex: ChainComplex,
                        gens: Mapping[int, ChainMap], check: bool = True) -> "GModule":
        """Complete an action given on generators; relations are checked afterwards."""
        G = group
        acts: dict[int, ChainMap] = {G.identity: identity_map(complex)}
        frontier = [G.identity]
        while frontier:
            new = []
            for x in frontier:
                for g, A in gens.items():
                    y = G.mul(g, x)
                    if y not in acts:
                        acts[y] = A @ acts[x]
                        new.append(y)
            frontier = new
        if len(acts) != G.order:
            raise GModuleError("generators do not generate the group")
        return cls(G, complex, [acts[g] for g in G.elements], check=check)

    @property
    def field(self) -> Field:
        return self.complex.field

    def act(self, g: int) -> ChainMap:
        return self.action[g]

    def mat(self, g: int, n: int):
        return self.action[g].comp(n) if self.complex.dim(n) else self.field.zeros(0, 0)

    def is_trivial(self) -> bool:
        ident = identity_map(self.complex)
        return all(self.action[g] == ident for g in self.group.generators)

    def restrict(self, H: Subgroup) -> "SidedHObject":
        return SidedHObject(self.complex, H, "left", {h: self.action[h] for h in H.elements})

    def as_right(self, H: Subgroup) -> "SidedHObject":
        """The right H-object v.h = h^-1 v."""
        G = self.group
        return SidedHObject(self.complex, H, "right",
                            {h: self.action[G.inv(h)] for h in H.elements})

    def __eq__(self, other) -> bool:
        return (isinstance(other, GModule) and self.group == other.group
                and self.complex == other.complex
                and all(a == b for a, b in zip(self.action, other.action)))

    def __hash__(self):
        return hash((self.group, self.complex))

    def __repr__(self) -> str:
        return f"GModule({self.group.name}, {self.complex!r})"


@dataclass
class GMap:
    """An equivariant chain map between G-modules."""

    source: GModule
    target: GModule
    map: ChainMap

    def __post_init__(self):
        if self.map.source != self.source.complex or self.map.target != self.target.complex:
            raise GModuleError("GMap: complexes do not match")
        for g in self.source.group.generators:
            if self.target.act(g) @ self.map != self.map @ self.source.act(g):
                raise GModuleError("GMap: map is not equivariant")

    def __matmul__(self, other: "GMap") -> "GMap":
        return GMap(other.source, self.target, self.map @ other.map)


@dataclass
class SidedHObject:
    """A complex with a left or right action of a subgroup H.

    A right action satisfies action[h1 h2] = action[h2] o action[h1], i.e. it
    is a left action of the opposite group, and is stored that way.
    """

    complex: ChainComplex
    subgroup: Subgroup
    side: str
    action: dict[int, ChainMap]

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise GModuleError("side must be 'left' or 'right'")
        H = self.subgroup
        G = H.parent
        if set(self.action) != set(H.elements):
            raise GModuleError("action must be given for every element of H")
        if self.action[G.identity] != identity_map(self.complex):
            raise GModuleError("identity must act as the identity")
        for a in H.elements:
            if not self.action[a].commutes_with_d():
                raise GModuleError("action does not commute with d")
            for b in H.elements:
                ab = self.action[G.mul(a, b)]
                if self.side == "left":
                    ok = ab == self.action[a] @ self.action[b]
                else:
                    ok = ab == self.action[b] @ self.action[a]
                if not ok:
                    raise GModuleError(f"{self.side} action law fails")

    @property
    def field(self) -> Field:
        return self.complex.field

    @classmethod
    def trivial(cls, C: ChainComplex, H: Subgroup, side: str = "left") -> "SidedHObject":
        ident = identity_map(C)
        return cls(C, H, side, {h: ident for h in H.elements})


def trivial_action(C: ChainComplex, G: FiniteGroup) -> GModule:
    ident = identity_map(C)
    return GModule(G, C, [ident] * G.order, check=False)


def forget(M: GModule) -> ChainComplex:
    return M.complex


# permutation modules and the group ring


def perm_module(S: GSet, field: Field) -> GModule:
    """R[S] in degree 0 with the permutation action."""
    C = concentrated(field, S.size, 0)
    action = [ChainMap(C, C, {0: field.permutation_matrix(S.action[g])}, check=False)
              for g in S.group.elements]
    return GModule(S.group, C, action, check=False)


def coset_module(G: FiniteGroup, H: Subgroup, field: Field) -> GModule:
    return perm_module(coset_gset(G, H), field)


def group_ring(G: FiniteGroup, field: Field) -> GModule:
    return perm_module(regular_gset(G), field)


def right_regular(G: FiniteGroup, field: Field) -> list:
    """Matrices of x |-> x g on R[G] (basis indexed by element)."""
    return [field.permutation_matrix([G.mul(x, g) for x in G.elements]) for g in G.elements]


def left_regular(G: FiniteGroup, field: Field) -> list:
    return [field.permutation_matrix([G.mul(g, x) for x in G.elements]) for g in G.elements]


@dataclass
class GroupRingHopf:
    """Structure maps of R[G]: multiplication, unit, antipode, diagonal, augmentation."""

    group: FiniteGroup
    field: Field
    mult: object
    unit: object
    antipode: object
    diagonal: object
    augmentation: object

    def check(self) -> dict[str, bool]:
        F = self.field
        n = self.group.order
        I = F.identity(n)
        one = F.identity(1)
        mu, eta, chi, de, eps = self.mult, self.unit, self.antipode, self.diagonal, self.augmentation
        swap = F.zeros(n * n, n * n)
        for a in range(n):
            for b in range(n):
                swap[b * n + a, a * n + b] = 1
        ie = F.kron(I, eta)
        ei = F.kron(eta, I)
        mid = F.kron(F.kron(I, swap), I)
        return {
            "associative": mu * F.kron(mu, I) == mu * F.kron(I, mu),
            "unital": mu * ie == I and mu * ei == I,
            "coassociative": F.kron(de, I) * de == F.kron(I, de) * de,
            "counital": F.kron(eps, I) * de == I and F.kron(I, eps) * de == I,
            "antipode": (mu * F.kron(chi, I) * de == eta * eps
                         and mu * F.kron(I, chi) * de == eta * eps),
            "bialgebra": de * mu == F.kron(mu, mu) * mid * F.kron(de, de),
            "augmentation_multiplicative": eps * mu == F.kron(eps, eps) and eps * eta == one,
        }


def group_ring_hopf(G: FiniteGroup, field: Field) -> GroupRingHopf:
    F = field
    n = G.order
    mult = F.zeros(n, n * n)
    diag = F.zeros(n * n, n)
    for a in range(n):
        diag[a * n + a, a] = 1
        for b in range(n):
            mult[G.mul(a, b), a * n + b] = 1
    unit = F.unit_vector(n, G.identity)
    antipode = F.permutation_matrix([G.inv(a) for a in range(n)])
    aug = F.from_flat(1, n, [1] * n)
    return GroupRingHopf(G, F, mult, unit, antipode, diag, aug)


# hom and tensor


class HomG:
    """Hom(M, N) with the conjugation action g.f = N(g) f M(g)^-1."""

    def __init__(self, M: GModule, N: GModule):
        if M.group != N.group:
            raise GModuleError("hom between modules over different groups")
        self.M, self.N = M, N
        self.hom = HomComplex(M.complex, N.complex)
        self._acts: dict[int, ChainMap] = {}
        self._module: GModule | None = None

    def act(self, g: int) -> ChainMap:
        """The conjugation action of g, built on first use."""
        if g not in self._acts:
            G = self.M.group
            self._acts[g] = self.hom.induced(self.hom, pre=self.M.act(G.inv(g)), post=self.N.act(g))
        return self._acts[g]

    @property
    def module(self) -> GModule:
        if self._module is None:
            G = self.M.group
            blocks = {n: self.hom.blocks(n) for n in self.hom.complex.dims}
            self._module = GModule(G, self.hom.complex, [self.act(g) for g in G.elements],
                                   check=False, blocks=blocks)
        return self._module

    @property
    def complex(self) -> ChainComplex:
        return self.hom.complex

    def pack(self, f: GradedMap):
        return self.hom.pack(f)

    def unpack(self, n: int, v) -> GradedMap:
        return self.hom.unpack(n, v)

    def fixed(self, H: Subgroup | None = None) -> "FixedPoints":
        """Hom(M, N)^H, solved as N(h) f = f M(h) block by block."""
        H = H or self.M.group.whole()
        return equivariant_homs(self.hom, self.M.action, self.N.action, H.generators)

    def equivariant_chain_maps(self) -> list[ChainMap]:
        """Basis of the degree-0 cycles of Hom(M, N)^G, i.e. of the G-chain maps."""
        fp = self.fixed()
        F = self.M.field
        Z = F.nullspace(fp.complex.d(0))
        B = fp.inclusion.comp(0) * Z
        return [self.unpack(0, v) for v in F.columns(B)]


def hom_complex(M: GModule, N: GModule) -> HomG:
    return HomG(M, N)


class TensorG:
    """M (x) N with the diagonal action."""

    def __init__(self, M: GModule, N: GModule):
        if M.group != N.group:
            raise GModuleError("tensor of modules over different groups")
        self.M, self.N = M, N
        self.tensor = TensorComplex(M.complex, N.complex)
        G = M.group
        acts = [self.tensor.tensor_maps(M.act(g), N.act(g), self.tensor) for g in G.elements]
        blocks = {n: [M.complex.dim(p) * N.complex.dim(q) for p, q, _ in lay]
                  for n, lay in self.tensor.layout.items()}
        self.module = GModule(G, self.tensor.complex, acts, check=False, blocks=blocks)

    @property
    def complex(self) -> ChainComplex:
        return self.tensor.complex


def tensor(V: GModule, M: GModule) -> GModule:
    return TensorG(V, M).module


def cotensor(V: GModule, M: GModule) -> GModule:
    """F(V, M): the internal hom with conjugation action."""
    return HomG(V, M).module


# fixed points and orbits


@dataclass
class FixedPoints:
    complex: ChainComplex
    inclusion: ChainMap


@dataclass
class Orbits:
    complex: ChainComplex
    projection: ChainMap


def _fixed_basis(M: GModule, H: Subgroup, n: int):
    F = M.field
    dim = M.complex.dim(n)
    gens = H.generators
    if not gens:
        return F.identity(dim)
    sizes = (M.blocks or {}).get(n) or [dim]
    if sum(sizes) != dim:
        sizes = [dim]
    parts = []
    off = 0
    for s in sizes:
        rng = range(off, off + s)
        mats = []
        for h in gens:
            A = F.block(M.mat(h, n), rng, rng) if len(sizes) > 1 else M.mat(h, n)
            mats.append(A - F.identity(s))
        parts.append(F.nullspace(F.vstack(mats, s)))
        off += s
    if len(parts) == 1:
        return parts[0]
    return F.block_diag(parts)


def equivariant_homs(hc: HomComplex, src: Mapping[int, ChainMap] | Sequence[ChainMap],
                     tgt: Mapping[int, ChainMap] | Sequence[ChainMap],
                     gens: Sequence[int]) -> FixedPoints:
    """The subcomplex of Hom(M, N) of maps commuting with the given actions."""
    F = hc.field
    M, N = hc.M, hc.N
    bases, lefts = {}, {}
    for n in hc.complex.degrees:
        parts, frees, off = [], [], 0
        for k, _ in hc.layout.get(n, ()):
            r, c = N.dim(k + n), M.dim(k)
            blocks = []
            for t, h in enumerate(gens):
                row = t * r * c
                blocks.append((row, 0, Kron(tgt[h].comp(k + n), F.identity(c))))
                blocks.append((row, 0, Kron(F.identity(r), src[h].comp(k).transpose(), -1)))
            if blocks:
                Z, free = F.nullspace_free(F.assemble(len(gens) * r * c, r * c, blocks, add=True))
            else:
                Z, free = F.identity(r * c), list(range(r * c))
            parts.append(Z)
            frees.extend(off + j for j in free)
            off += r * c
        if parts:
            bases[n] = F.block_diag(parts) if len(parts) > 1 else parts[0]
            lefts[n] = F.selection(off, frees)
    S, inc = subcomplex(hc.complex, bases, lefts)
    return FixedPoints(S, inc)


def fixed_points(M: GModule, H: Subgroup) -> FixedPoints:
    """M^H: the intersection of ker(h - 1) over h in H (a generating set suffices)."""
    if H.parent != M.group:
        raise GModuleError("subgroup of a different group")
    bases = {n: _fixed_basis(M, H, n) for n in M.complex.degrees}
    S, inc = subcomplex(M.complex, bases)
    return FixedPoints(S, inc)


def orbits(M: GModule, H: Subgroup) -> Orbits:
    """M/H: the quotient by the span of the images of h - 1."""
    if H.parent != M.group:
        raise GModuleError("subgroup of a different group")
    F = M.field
    spans = {}
    for n in M.complex.degrees:
        d = M.complex.dim(n)
        mats = [M.mat(h, n) - F.identity(d) for h in H.generators]
        spans[n] = F.hstack(mats, d) if mats else F.zeros(d, 0)
    Q, proj = quotient(M.complex, spans)
    return Orbits(Q, proj)


def fixed_map(f: ChainMap, src: FixedPoints, tgt: FixedPoints) -> ChainMap:
    """f^H between fixed-point complexes."""
    return restrict_map(f, src.inclusion, tgt.inclusion)


def restrict_module(M: GModule, sub: ChainMap) -> GModule:
    """The G-module structure on an invariant subcomplex given by its inclusion."""
    acts = [restrict_map(a @ sub, None, sub) for a in M.action]
    return GModule(M.group, sub.source, acts, check=False)


def descend_module(M: GModule, proj: ChainMap) -> GModule:
    acts = [descend_map(proj @ a, proj, None) for a in M.action]
    return GModule(M.group, proj.target, acts, check=False)


# orbit tensors and fixed cotensors


@dataclass
class OrbitTensor:
    complex: ChainComplex
    projection: ChainMap  # V (x) M -> V (x)_H M
    tensor: TensorComplex


def orbit_tensor(V: SidedHObject, M: SidedHObject) -> OrbitTensor:
    """Coequalizer of V (x) R[H] (x) M  =>  V (x) M.

    V (x) R[H] (x) M is the sum over h of copies of V (x) M; on copy h the
    two maps are v (x) m |-> v.h (x) m and v (x) m |-> v (x) h.m.
    """
    if V.side != "right" or M.side != "left":
        raise GModuleError("orbit tensor needs a right H-object and a left H-object")
    if V.subgroup != M.subgroup:
        raise GModuleError("orbit tensor over different subgroups")
    T = TensorComplex(V.complex, M.complex)
    ident_V = identity_map(V.complex)
    ident_M = identity_map(M.complex)
    pairs = []
    for h in V.subgroup.elements:
        pairs.append((T.tensor_maps(V.action[h], ident_M, T), T.tensor_maps(ident_V, M.action[h], T)))
    co = joint_coequalizer(pairs, T.complex)
    return OrbitTensor(co.obj, co.map, T)


@dataclass
class FixedCotensor:
    complex: ChainComplex
    inclusion: ChainMap  # F_H(V, N) -> F(V, N)
    hom: HomComplex


def fixed_cotensor(V: SidedHObject, N: SidedHObject) -> FixedCotensor:
    """Equalizer of F(V, N)  =>  F(R[H] (x) V, N), the latter a sum of copies of F(V, N).

    On copy h the two maps are f |-> f o h and f |-> h o f.
    """
    if V.side != "left" or N.side != "left":
        raise GModuleError("fixed cotensor needs two left H-objects")
    if V.subgroup != N.subgroup:
        raise GModuleError("fixed cotensor over different subgroups")
    Hc = HomComplex(V.complex, N.complex)
    pairs = []
    for h in V.subgroup.elements:
        pairs.append((Hc.induced(Hc, pre=V.action[h]), Hc.induced(Hc, post=N.action[h])))
    eq = joint_equalizer(pairs, Hc.complex)
    return FixedCotensor(eq.obj, eq.map, Hc)


# induction and coinduction


def _regular_as_right_H(G: FiniteGroup, H: Subgroup, field: Field) -> SidedHObject:
    C = concentrated(field, G.order, 0)
    right = right_regular(G, field)
    return SidedHObject(C, H, "right", {h: ChainMap(C, C, {0: right[h]}, check=False)
                                        for h in H.elements})


def _regular_as_left_H(G: FiniteGroup, H: Subgroup, field: Field) -> SidedHObject:
    C = concentrated(field, G.order, 0)
    left = left_regular(G, field)
    return SidedHObject(C, H, "left", {h: ChainMap(C, C, {0: left[h]}, check=False)
                                       for h in H.elements})


@dataclass
class Induced:
    module: GModule  # R[G] (x)_H N
    orbit: OrbitTensor


def induction(N: SidedHObject, G: FiniteGroup | None = None) -> Induced:
    """R[G] (x)_H N with G acting by left translation on R[G]."""
    H = N.subgroup
    G = G or H.parent
    F = N.field
    V = _regular_as_right_H(G, H, F)
    ot = orbit_tensor(V, N)
    left = left_regular(G, F)
    ident = identity_map(N.complex)
    acts = []
    for g in G.elements:
        lg = ChainMap(V.complex, V.complex, {0: left[g]}, check=False)
        big = ot.tensor.tensor_maps(lg, ident, ot.tensor)
        acts.append(descend_map(ot.projection @ big, ot.projection, None))
    return Induced(GModule(G, ot.complex, acts, check=False), ot)


@dataclass
class Coinduced:
    module: GModule  # F_H(R[G], N)
    cotensor: FixedCotensor


def coinduction(N: SidedHObject, G: FiniteGroup | None = None) -> Coinduced:
    """F_H(R[G], N) with (g.f)(x) = f(x g)."""
    H = N.subgroup
    G = G or H.parent
    F = N.field
    V = _regular_as_left_H(G, H, F)
    fc = fixed_cotensor(V, N)
    right = right_regular(G, F)
    acts = []
    for g in G.elements:
        rg = ChainMap(V.complex, V.complex, {0: right[g]}, check=False)
        big = fc.hom.induced(fc.hom, pre=rg)
        acts.append(restrict_map(big @ fc.inclusion, None, fc.inclusion))
    return Coinduced(GModule(G, fc.complex, acts, check=False), fc)


def h_module(H: Subgroup, C: ChainComplex, action: Mapping[int, ChainMap]) -> SidedHObject:
    return SidedHObject(C, H, "left", dict(action))


# random modules


def _character_reps(G: FiniteGroup) -> list[list[int]]:
    """Sign-type characters G -> {+1, -1} from index-2 subgroups."""
    reps = []
    from .group_core import subgroup_lattice
    for K in subgroup_lattice(G):
        if K.index == 2:
            reps.append([1 if g in K else -1 for g in G.elements])
    return reps


def _random_rep(G: FiniteGroup, field: Field, rng: random.Random, dim: int):
    """Matrices (one per element) of a random representation of dimension ``dim``."""
    from .group_core import subgroup_lattice
    pieces = []
    left = dim
    subs = [K for K in subgroup_lattice(G)]
    chars = _character_reps(G)
    while left > 0:
        options = [("perm", K) for K in subs if K.index <= left]
        options += [("char", c) for c in chars] + [("triv", None)]
        kind, data = rng.choice(options)
        if kind == "perm":
            S = coset_gset(G, data)
            pieces.append([field.permutation_matrix(S.action[g]) for g in G.elements])
            left -= S.size
        elif kind == "char":
            pieces.append([field.matrix([[c]]) for c in data])
            left -= 1
        else:
            pieces.append([field.identity(1) for _ in G.elements])
            left -= 1
    mats = [field.block_diag([p[g] for p in pieces]) for g in G.elements]
    while True:
        P = field.random_matrix(rng, dim, dim, -1, 1)
        if field.is_invertible(P):
            break
    Pi = field.inverse(P)
    return [P * A * Pi for A in mats]


def random_gmodule(G: FiniteGroup, field: Field, rng: random.Random, lo: int = -2, hi: int = 3,
                   max_dim: int = 3, trivial: bool = False) -> GModule:
    """A random G-module with per-degree dimension at most ``max_dim``.

    Each degree is a random representation (sums of permutation modules and
    sign characters, in a random basis); each differential is a random
    equivariant map killing the image of the one above it.
    """
    F = field
    dims = {n: rng.randint(0, max_dim) for n in range(lo, hi + 1)}
    reps = {}
    for n, k in dims.items():
        if trivial:
            reps[n] = [F.identity(k) for _ in G.elements]
        else:
            reps[n] = _random_rep(G, F, rng, k) if k else [F.zeros(0, 0)] * G.order
    diffs = {}
    prev = None
    for n in range(lo + 1, hi + 1):
        r, c = dims[n - 1], dims[n]
        if r == 0 or c == 0:
            diffs[n] = prev = F.zeros(r, c)
            continue
        cons = []
        for g in G.generators:
            cons.append(F.kron(reps[n - 1][g], F.identity(c))
                        - F.kron(F.identity(r), reps[n][g].transpose()))
        if prev is not None and prev.nrows():
            cons.append(F.kron(prev, F.identity(c)))
        K = F.nullspace(F.vstack(cons, r * c)) if cons else F.identity(r * c)
        v = F.random_vector_in(rng, K)
        D = F.from_flat(r, c, v.entries())
        diffs[n] = D
        prev = D
    C = ChainComplex(F, dims, diffs)
    acts = [ChainMap(C, C, {n: reps[n][g] for n in dims if dims[n]}, check=False)
            for g in G.elements]
    return GModule(G, C, acts, check=False)


def random_gmap(rng: random.Random, M: GModule, N: GModule) -> GMap:
    hg = HomG(M, N)
    fp = hg.fixed()
    F = M.field
    B = fp.inclusion.comp(0) * F.nullspace(fp.complex.d(0))
    return GMap(M, N, hg.unpack(0, F.random_vector_in(rng, B)))
