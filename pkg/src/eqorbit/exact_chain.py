"""Bounded chain complexes over an exact field.

Differentials lower degree: ``d(n)`` is a matrix ``C_n -> C_{n-1}``.
Matrices act on column vectors in the standard basis of each degree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .linalg import Field, Kron


class ChainError(ValueError):
    pass


class ChainComplex:
    def __init__(self, field: Field, dims: Mapping[int, int],
                 differentials: Mapping[int, object] | None = None, check: bool = True):
        self.field = field
        self.dims = {int(n): int(k) for n, k in dims.items() if int(k) > 0}
        if any(k < 0 for k in dims.values()):
            raise ChainError("negative dimension")
        if self.dims:
            self.lo, self.hi = min(self.dims), max(self.dims)
        else:
            self.lo, self.hi = 0, -1
        self.diffs = {}
        for n, D in (differentials or {}).items():
            n = int(n)
            if D.nrows() != self.dim(n - 1) or D.ncols() != self.dim(n):
                raise ChainError(f"d_{n} has shape {D.nrows()}x{D.ncols()}, "
                                 f"expected {self.dim(n - 1)}x{self.dim(n)}")
            if self.dim(n) and self.dim(n - 1) and not field.is_zero(D):
                self.diffs[n] = D
        if check:
            for n in self.diffs:
                if n - 1 in self.diffs and not field.is_zero(self.diffs[n - 1] * self.diffs[n]):
                    raise ChainError(f"d_{n - 1} d_{n} != 0")

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int):
        D = self.diffs.get(n)
        if D is None:
            return self.field.zeros(self.dim(n - 1), self.dim(n))
        return D

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, ChainComplex) or self.field != other.field:
            return False
        if self.dims != other.dims:
            return False
        return all(self.d(n) == other.d(n) for n in set(self.diffs) | set(other.diffs))

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.dims.items()))))

    def __repr__(self) -> str:
        return f"ChainComplex({self.field.name}, dims={dict(sorted(self.dims.items()))})"

    def homology(self) -> dict[int, int]:
        """dim H_n over the support (zeros included)."""
        F = self.field
        out = {}
        for n in self.degrees:
            out[n] = self.dim(n) - F.rank(self.d(n)) - F.rank(self.d(n + 1))
        return out

    def is_acyclic(self) -> bool:
        return all(h == 0 for h in self.homology().values())

    def shift(self, k: int) -> "ChainComplex":
        """(C[k])_n = C_{n-k}, differential multiplied by (-1)^k."""
        s = -1 if k % 2 else 1
        return ChainComplex(self.field, {n + k: m for n, m in self.dims.items()},
                            {n + k: self.d(n) * s for n in self.diffs}, check=False)

    def to_json(self) -> dict:
        F = self.field
        return {
            "field": F.name,
            "degrees": {str(n): self.dims[n] for n in sorted(self.dims)},
            "differentials": {str(n): F.to_json_matrix(self.diffs[n]) for n in sorted(self.diffs)},
        }


def zero_complex(field: Field) -> ChainComplex:
    return ChainComplex(field, {})


def sphere(field: Field, n: int) -> ChainComplex:
    """S^n: one generator in degree n, zero differential."""
    return ChainComplex(field, {n: 1})


def disk(field: Field, n: int) -> ChainComplex:
    """D^n: generators in degrees n and n-1 with d_n the identity."""
    return ChainComplex(field, {n: 1, n - 1: 1}, {n: field.identity(1)})


def concentrated(field: Field, dim: int, degree: int = 0) -> ChainComplex:
    return ChainComplex(field, {degree: dim})


def direct_sum(complexes: Sequence[ChainComplex]) -> ChainComplex:
    F = complexes[0].field
    degs = sorted({n for C in complexes for n in C.dims})
    dims = {n: sum(C.dim(n) for C in complexes) for n in degs}
    diffs = {n: F.block_diag([C.d(n) for C in complexes]) for n in degs}
    return ChainComplex(F, dims, diffs, check=False)


class GradedMap:
    """A degree-``degree`` family of linear maps ``source_n -> target_{n+degree}``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, degree: int,
                 components: Mapping[int, object]):
        self.source = source
        self.target = target
        self.degree = int(degree)
        F = source.field
        self.comps = {}
        for n, A in components.items():
            n = int(n)
            if A.nrows() != target.dim(n + degree) or A.ncols() != source.dim(n):
                raise ChainError(f"component {n} has wrong shape "
                                 f"{A.nrows()}x{A.ncols()}")
            if source.dim(n) and target.dim(n + degree) and not F.is_zero(A):
                self.comps[n] = A

    @property
    def field(self) -> Field:
        return self.source.field

    def comp(self, n: int):
        A = self.comps.get(n)
        if A is None:
            return self.field.zeros(self.target.dim(n + self.degree), self.source.dim(n))
        return A

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap) or self.degree != other.degree:
            return False
        if self.source != other.source or self.target != other.target:
            return False
        return all(self.comp(n) == other.comp(n) for n in set(self.comps) | set(other.comps))

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.comps))))

    def is_zero(self) -> bool:
        return not self.comps

    def _like(self, comps, degree=None):
        cls = ChainMap if (degree if degree is not None else self.degree) == 0 else GradedMap
        if cls is ChainMap:
            return ChainMap(self.source, self.target, comps, check=False)
        return GradedMap(self.source, self.target,
                         self.degree if degree is None else degree, comps)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._compatible(other)
        keys = set(self.comps) | set(other.comps)
        return self._like({n: self.comp(n) + other.comp(n) for n in keys})

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        self._compatible(other)
        keys = set(self.comps) | set(other.comps)
        return self._like({n: self.comp(n) - other.comp(n) for n in keys})

    def __neg__(self) -> "GradedMap":
        return self._like({n: -A for n, A in self.comps.items()})

    def scale(self, c) -> "GradedMap":
        c = self.field.coerce(c)
        return self._like({n: A * c for n, A in self.comps.items()})

    def _compatible(self, other):
        if (self.degree != other.degree or self.source != other.source
                or self.target != other.target):
            raise ChainError("maps are not parallel")

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise ChainError("composition: target/source mismatch")
        comps = {}
        for n, B in other.comps.items():
            A = self.comps.get(n + other.degree)
            if A is not None:
                comps[n] = A * B
        deg = self.degree + other.degree
        if deg == 0:
            return ChainMap(other.source, self.target, comps, check=False)
        return GradedMap(other.source, self.target, deg, comps)

    def boundary(self) -> "GradedMap":
        """The hom-complex differential d o f - (-1)^|f| f o d."""
        s = -1 if self.degree % 2 else 1
        k = self.degree
        comps = {}
        for n in self.source.degrees:
            A = self.target.d(n + k) * self.comp(n) - (self.comp(n - 1) * self.source.d(n)) * s
            comps[n] = A
        return GradedMap(self.source, self.target, k - 1, comps)

    def commutes_with_d(self) -> bool:
        return self.boundary().is_zero()

    def to_json(self) -> dict:
        F = self.field
        return {"degree": self.degree,
                "components": {str(n): F.to_json_matrix(self.comps[n]) for n in sorted(self.comps)}}


class ChainMap(GradedMap):
    def __init__(self, source: ChainComplex, target: ChainComplex,
                 components: Mapping[int, object], check: bool = True):
        super().__init__(source, target, 0, components)
        if check and not self.commutes_with_d():
            raise ChainError("not a chain map: d f != f d")

    def is_degreewise_epi(self) -> bool:
        F = self.field
        return all(F.rank(self.comp(n)) == self.target.dim(n) for n in self.target.degrees)

    def is_degreewise_mono(self) -> bool:
        F = self.field
        return all(F.rank(self.comp(n)) == self.source.dim(n) for n in self.source.degrees)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_degreewise_epi()

    def inverse(self) -> "ChainMap":
        if not self.is_iso():
            raise ChainError("map is not invertible")
        F = self.field
        return ChainMap(self.target, self.source,
                        {n: F.inverse(self.comp(n)) for n in self.source.degrees}, check=False)


def identity_map(C: ChainComplex) -> ChainMap:
    F = C.field
    return ChainMap(C, C, {n: F.identity(C.dim(n)) for n in C.dims}, check=False)


def zero_map(C: ChainComplex, D: ChainComplex, degree: int = 0) -> GradedMap:
    if degree == 0:
        return ChainMap(C, D, {}, check=False)
    return GradedMap(C, D, degree, {})


def random_chain_complex(field: Field, rng: random.Random, lo: int = -2, hi: int = 3,
                         max_dim: int = 3) -> ChainComplex:
    """Random complex with d^2 = 0, built degree by degree from kernels."""
    dims = {n: rng.randint(0, max_dim) for n in range(lo, hi + 1)}
    diffs = {}
    prev = None
    for n in range(lo + 1, hi + 1):
        m, k = dims[n - 1], dims[n]
        if prev is None:
            D = field.random_matrix(rng, m, k)
        else:
            K = field.nullspace(prev)
            D = K * field.random_matrix(rng, K.ncols(), k)
        diffs[n] = D
        prev = D
    return ChainComplex(field, dims, diffs)


def random_chain_map(rng: random.Random, C: ChainComplex, D: ChainComplex) -> ChainMap:
    """Uniform-ish random element of the space of chain maps C -> D."""
    H = HomComplex(C, D)
    Z = H.cycles(0)
    v = C.field.random_vector_in(rng, Z)
    return H.unpack(0, v)


# tensor products


class TensorComplex:
    """X (x) Y with the Koszul sign d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy.

    In degree n the basis is ordered by p ascending (x in X_p, y in Y_{n-p}),
    and within a block by ``i * dim Y_q + j``.
    """

    def __init__(self, X: ChainComplex, Y: ChainComplex):
        if X.field != Y.field:
            raise ChainError("tensor over different fields")
        self.X, self.Y = X, Y
        F = X.field
        self.layout: dict[int, list[tuple[int, int, int]]] = {}
        dims = {}
        for p in X.dims:
            for q in Y.dims:
                n = p + q
                blocks = self.layout.setdefault(n, [])
                blocks.append((p, q, 0))
        for n, blocks in self.layout.items():
            blocks.sort()
            off = 0
            fixed = []
            for p, q, _ in blocks:
                fixed.append((p, q, off))
                off += X.dim(p) * Y.dim(q)
            self.layout[n] = fixed
            dims[n] = off
        diffs = {}
        for n in dims:
            if n - 1 not in dims:
                continue
            parts = []
            for p, q, off in self.layout[n]:
                if X.dim(p - 1):
                    tgt = self.offset(p - 1, q)
                    if tgt is not None:
                        parts.append((tgt, off, Kron(X.d(p), F.identity(Y.dim(q)))))
                if Y.dim(q - 1):
                    tgt = self.offset(p, q - 1)
                    if tgt is not None:
                        parts.append((tgt, off, Kron(F.identity(X.dim(p)), Y.d(q),
                                                     -1 if p % 2 else 1)))
            diffs[n] = F.assemble(dims[n - 1], dims[n], parts)
        self.complex = ChainComplex(F, dims, diffs, check=False)

    def offset(self, p: int, q: int) -> int | None:
        for pp, qq, off in self.layout.get(p + q, ()):
            if pp == p:
                return off
        return None

    def index(self, p: int, i: int, q: int, j: int) -> int:
        return self.offset(p, q) + i * self.Y.dim(q) + j

    def tensor_maps(self, f: GradedMap, g: GradedMap, other: "TensorComplex") -> GradedMap:
        """f (x) g : X (x) Y -> X' (x) Y' with the Koszul sign (-1)^{|g||x|}."""
        F = self.X.field
        deg = f.degree + g.degree
        comps = {}
        for n, blocks in self.layout.items():
            parts = []
            for p, q, off in blocks:
                tgt = other.offset(p + f.degree, q + g.degree)
                if tgt is None:
                    continue
                s = -1 if g.degree % 2 and p % 2 else 1
                parts.append((tgt, off, Kron(f.comp(p), g.comp(q), s)))
            comps[n] = F.assemble(other.complex.dim(n + deg), self.complex.dim(n), parts)
        if deg == 0:
            return ChainMap(self.complex, other.complex, comps, check=False)
        return GradedMap(self.complex, other.complex, deg, comps)


def tensor(X: ChainComplex, Y: ChainComplex) -> ChainComplex:
    return TensorComplex(X, Y).complex


# hom complexes


class HomComplex:
    """Hom(M, N): degree n is the sum over k of Hom(M_k, N_{k+n}).

    A degree-n element is stored block by block (k ascending), each block a
    row-major flattening of a ``dim N_{k+n} x dim M_k`` matrix.  The
    differential is d(f) = d_N f - (-1)^n f d_M, so chain maps are exactly the
    degree-0 cycles.
    """

    def __init__(self, M: ChainComplex, N: ChainComplex):
        if M.field != N.field:
            raise ChainError("hom over different fields")
        self.M, self.N = M, N
        F = M.field
        self.layout: dict[int, list[tuple[int, int]]] = {}
        dims = {}
        for n in range(N.lo - M.hi, N.hi - M.lo + 1):
            off = 0
            blocks = []
            for k in M.degrees:
                a, b = N.dim(k + n), M.dim(k)
                if a and b:
                    blocks.append((k, off))
                    off += a * b
            if off:
                self.layout[n] = blocks
                dims[n] = off
        diffs = {}
        for n in dims:
            if n - 1 not in dims:
                continue
            sign = -1 if n % 2 else 1
            parts = []
            for k, off in self.layout[n]:
                t = self.offset(n - 1, k)
                if t is not None and N.dim(k + n - 1):
                    parts.append((t, off, Kron(N.d(k + n), F.identity(M.dim(k)))))
                t = self.offset(n - 1, k + 1)
                if t is not None:
                    parts.append((t, off, Kron(F.identity(N.dim(k + n)), M.d(k + 1).transpose(),
                                               1 if sign < 0 else -1)))
            diffs[n] = F.assemble(dims[n - 1], dims[n], parts)
        self.complex = ChainComplex(F, dims, diffs, check=False)

    @property
    def field(self) -> Field:
        return self.M.field

    def offset(self, n: int, k: int) -> int | None:
        for kk, off in self.layout.get(n, ()):
            if kk == k:
                return off
        return None

    def pack(self, f: GradedMap):
        """Column vector of f in degree f.degree."""
        F = self.field
        n = f.degree
        flat = []
        for k, _ in self.layout.get(n, ()):
            flat.extend(f.comp(k).entries())
        return F.from_flat(len(flat), 1, flat)

    def unpack(self, n: int, vec) -> GradedMap:
        F = self.field
        entries = vec.entries()
        comps = {}
        for k, off in self.layout.get(n, ()):
            a, b = self.N.dim(k + n), self.M.dim(k)
            comps[k] = F.from_flat(a, b, entries[off:off + a * b])
        if n == 0:
            return ChainMap(self.M, self.N, comps, check=False)
        return GradedMap(self.M, self.N, n, comps)

    def cycles(self, n: int):
        F = self.field
        return F.nullspace(self.complex.d(n))

    def chain_maps_basis(self) -> list[ChainMap]:
        Z = self.cycles(0)
        F = self.field
        return [self.unpack(0, v) for v in F.columns(Z)]

    def induced(self, other: "HomComplex", pre: GradedMap | None = None,
                post: GradedMap | None = None) -> ChainMap:
        """f |-> post o f o pre as a chain map Hom(M, N) -> Hom(M', N').

        ``pre: M' -> M`` and ``post: N -> N'`` must be degree-0 chain maps.
        """
        F = self.field
        comps = {}
        for n, blocks in self.layout.items():
            parts = []
            for k, off in blocks:
                t = other.offset(n, k)
                if t is None:
                    continue
                P = post.comp(k + n) if post is not None else F.identity(self.N.dim(k + n))
                Q = pre.comp(k) if pre is not None else F.identity(self.M.dim(k))
                parts.append((t, off, Kron(P, Q.transpose())))
            comps[n] = F.assemble(other.complex.dim(n), self.complex.dim(n), parts)
        return ChainMap(self.complex, other.complex, comps, check=False)

    def blocks(self, n: int) -> list[int]:
        """Block sizes of degree n, in storage order."""
        return [self.N.dim(k + n) * self.M.dim(k) for k, _ in self.layout.get(n, ())]


def hom(M: ChainComplex, N: ChainComplex) -> ChainComplex:
    return HomComplex(M, N).complex


# cones and quasi-isomorphisms


def cone(f: ChainMap) -> ChainComplex:
    """cone_n = X_{n-1} + Y_n with d(x, y) = (-dx, f x + dy)."""
    X, Y = f.source, f.target
    F = X.field
    degs = set(n + 1 for n in X.dims) | set(Y.dims)
    dims = {n: X.dim(n - 1) + Y.dim(n) for n in degs}
    diffs = {}
    for n in degs:
        a, b = X.dim(n - 1), Y.dim(n)
        c, e = X.dim(n - 2), Y.dim(n - 1)
        D = F.zeros(c + e, a + b)
        F.set_block(D, 0, 0, -X.d(n - 1))
        F.set_block(D, c, 0, f.comp(n - 1))
        F.set_block(D, c, a, Y.d(n))
        diffs[n] = D
    return ChainComplex(F, dims, diffs, check=False)


def quasi_iso(f: ChainMap) -> bool:
    return cone(f).is_acyclic()


def induced_homology_ranks(f: ChainMap) -> dict[int, int]:
    """Rank of H_n(f) computed from cycles and boundaries directly."""
    F = f.field
    out = {}
    for n in sorted(set(f.source.dims) | set(f.target.dims)):
        Zs = F.nullspace(f.source.d(n))
        Bt = f.target.d(n + 1)
        img = f.comp(n) * Zs
        out[n] = F.rank(F.hstack([Bt, img], f.target.dim(n))) - F.rank(Bt)
    return out


def quasi_iso_oracle(f: ChainMap) -> bool:
    """Whether H(f) is an isomorphism in every degree (no cone involved)."""
    hs, ht = f.source.homology(), f.target.homology()
    ranks = induced_homology_ranks(f)
    for n in set(hs) | set(ht):
        r = ranks.get(n, 0)
        if r != hs.get(n, 0) or r != ht.get(n, 0):
            return False
    return True


# sub- and quotient complexes


def subcomplex(C: ChainComplex, bases: Mapping[int, object],
               lefts: Mapping[int, object] | None = None) -> tuple[ChainComplex, ChainMap]:
    """The subcomplex spanned by the columns of ``bases[n]`` and its inclusion.

    The columns must be independent and the span closed under d.  Known left
    inverses of the bases may be passed in ``lefts``.
    """
    F = C.field
    B = {n: bases.get(n, F.zeros(C.dim(n), 0)) for n in C.degrees}
    dims = {n: B[n].ncols() for n in B}
    given = lefts or {}
    lefts = {n: given[n] if n in given else F.left_inverse(B[n]) for n in B if dims[n]}
    diffs = {}
    for n in B:
        if dims[n] and dims.get(n - 1):
            img = C.d(n) * B[n]
            D = lefts[n - 1] * img
            if B[n - 1] * D != img:
                raise ChainError(f"span is not closed under d in degree {n}")
            diffs[n] = D
        elif dims[n] and not F.is_zero(C.d(n) * B[n]):
            raise ChainError(f"span is not closed under d in degree {n}")
    S = ChainComplex(F, dims, diffs, check=False)
    inc = ChainMap(S, C, {n: B[n] for n in B if dims[n]}, check=False)
    inc._retractions = lefts
    return S, inc


def quotient(C: ChainComplex, spans: Mapping[int, object]) -> tuple[ChainComplex, ChainMap]:
    """C modulo the subcomplex spanned by ``spans[n]`` (columns, maybe dependent)."""
    F = C.field
    P = {}
    for n in C.degrees:
        W = spans.get(n)
        if W is None or W.ncols() == 0:
            P[n] = F.identity(C.dim(n))
        else:
            P[n] = F.left_nullspace(W)
    dims = {n: P[n].nrows() for n in P}
    rights = {n: F.right_inverse(P[n]) for n in P if dims[n]}
    diffs = {}
    for n in P:
        if dims[n] and dims.get(n - 1):
            D = P[n - 1] * C.d(n) * rights[n]
            if D * P[n] != P[n - 1] * C.d(n):
                raise ChainError(f"span is not a subcomplex in degree {n}")
            diffs[n] = D
    Q = ChainComplex(F, dims, diffs, check=False)
    proj = ChainMap(C, Q, {n: P[n] for n in P if dims[n]}, check=False)
    proj._sections = rights
    return Q, proj


def retraction(inc: GradedMap, n: int):
    """A left inverse of inc in degree n (cached on inc)."""
    cache = inc.__dict__.setdefault("_retractions", {})
    if n not in cache:
        cache[n] = inc.field.left_inverse(inc.comp(n))
    return cache[n]


def section(proj: GradedMap, n: int):
    """A right inverse of proj in degree n (cached on proj)."""
    cache = proj.__dict__.setdefault("_sections", {})
    if n not in cache:
        cache[n] = proj.field.right_inverse(proj.comp(n))
    return cache[n]


def restrict_map(f: GradedMap, src: ChainMap | None, tgt: ChainMap | None) -> GradedMap:
    """f' with tgt o f' = f o src, for subcomplex inclusions (None = identity)."""
    g = f @ src if src is not None else f
    if tgt is None:
        return g
    comps = {}
    for n in g.source.degrees:
        A = g.comp(n)
        X = retraction(tgt, n + f.degree) * A
        if tgt.comp(n + f.degree) * X != A:
            raise ChainError("map does not land in the target subcomplex")
        comps[n] = X
    if f.degree == 0:
        return ChainMap(g.source, tgt.source, comps, check=False)
    return GradedMap(g.source, tgt.source, f.degree, comps)


def descend_map(f: GradedMap, src: ChainMap | None, tgt: ChainMap | None) -> GradedMap:
    """f' with f' o src = tgt o f, for quotient projections (None = identity)."""
    g = tgt @ f if tgt is not None else f
    if src is None:
        return g
    comps = {}
    for n in src.target.degrees:
        P = src.comp(n)
        X = g.comp(n) * section(src, n)
        if X * P != g.comp(n):
            raise ChainError("map does not vanish on the kernel of the projection")
        comps[n] = X
    if f.degree == 0:
        return ChainMap(src.target, g.target, comps, check=False)
    return GradedMap(src.target, g.target, f.degree, comps)


# limits and colimits


@dataclass
class Kernel:
    obj: ChainComplex
    map: ChainMap  # inclusion obj -> source of f

    def factor(self, h: ChainMap) -> ChainMap:
        """The unique u with map o u = h (h must kill f)."""
        return restrict_map(h, None, self.map)


@dataclass
class Cokernel:
    obj: ChainComplex
    map: ChainMap  # projection target of f -> obj

    def factor(self, h: ChainMap) -> ChainMap:
        """The unique u with u o map = h (h must kill the image)."""
        return descend_map(h, self.map, None)


def kernel(f: ChainMap) -> Kernel:
    F = f.field
    S, inc = subcomplex(f.source, {n: F.nullspace(f.comp(n)) for n in f.source.degrees})
    return Kernel(S, inc)


def cokernel(f: ChainMap) -> Cokernel:
    Q, proj = quotient(f.target, {n: f.comp(n) for n in f.source.degrees})
    return Cokernel(Q, proj)


def image(f: ChainMap) -> tuple[ChainComplex, ChainMap]:
    F = f.field
    return subcomplex(f.target, {n: F.column_space(f.comp(n)) for n in f.target.degrees})


def equalizer(f: ChainMap, g: ChainMap) -> Kernel:
    return kernel(f - g)


def coequalizer(f: ChainMap, g: ChainMap) -> Cokernel:
    return cokernel(f - g)


def joint_equalizer(pairs: Iterable[tuple[ChainMap, ChainMap]], source: ChainComplex) -> Kernel:
    """Equalizer of several parallel pairs out of one complex."""
    F = source.field
    pairs = list(pairs)
    bases = {}
    for n in source.degrees:
        mats = [(f - g).comp(n) for f, g in pairs]
        mats = [A for A in mats if A.nrows()]
        bases[n] = F.nullspace(F.vstack(mats, source.dim(n))) if mats else F.identity(source.dim(n))
    S, inc = subcomplex(source, bases)
    return Kernel(S, inc)


def joint_coequalizer(pairs: Iterable[tuple[ChainMap, ChainMap]], target: ChainComplex) -> Cokernel:
    """Coequalizer of several parallel pairs into one complex."""
    F = target.field
    pairs = list(pairs)
    spans = {}
    for n in target.degrees:
        mats = [(f - g).comp(n) for f, g in pairs]
        mats = [A for A in mats if A.ncols()]
        spans[n] = F.hstack(mats, target.dim(n)) if mats else F.zeros(target.dim(n), 0)
    Q, proj = quotient(target, spans)
    return Cokernel(Q, proj)


# lifting problems


@dataclass
class LiftResult:
    lift: ChainMap | None
    certificate: object = None  # y with y^T A = 0 and y^T b != 0 when no lift exists

    @property
    def exists(self) -> bool:
        return self.lift is not None


def _vec_layout(X: ChainComplex, E: ChainComplex) -> dict[int, tuple[int, int, int]]:
    """Offsets of the unknown blocks h_n : X_n -> E_n, row-major."""
    out = {}
    off = 0
    for n in X.degrees:
        r, c = E.dim(n), X.dim(n)
        if r and c:
            out[n] = (off, r, c)
            off += r * c
    return out


def solve_lift(i: ChainMap, p: ChainMap, top: ChainMap, bottom: ChainMap,
               actions: Sequence[tuple[GradedMap, GradedMap]] = ()) -> LiftResult:
    """Find h: X -> E with h i = top and p h = bottom.

    ``i: A -> X``, ``p: E -> B``, ``top: A -> E``, ``bottom: X -> B``.
    ``actions`` lists pairs (action on X, action on E) that h must intertwine,
    e.g. the generator actions for an equivariant lift.
    """
    if p @ top != bottom @ i:
        raise ChainError("the square does not commute")
    A, X = i.source, i.target
    E, B = p.source, p.target
    F = X.field
    lay = _vec_layout(X, E)
    nvar = sum(r * c for _, r, c in lay.values())
    rows: list = []
    rhs: list = []

    def block_row(nrows: int):
        return F.zeros(nrows, nvar)

    def add(M, b):
        if M.nrows():
            rows.append(M)
            rhs.append(b)

    for n in sorted(set(X.degrees) | set(A.degrees)):
        # d_E h_n - h_{n-1} d_X = 0, landing in Hom(X_n, E_{n-1})
        r, c = E.dim(n - 1), X.dim(n)
        if r and c:
            M = block_row(r * c)
            if n in lay:
                off, er, xc = lay[n]
                F.set_block(M, 0, off, F.kron(E.d(n), F.identity(xc)))
            if n - 1 in lay:
                off, er, xc = lay[n - 1]
                F.set_block(M, 0, off, -F.kron(F.identity(er), X.d(n).transpose()))
            add(M, F.zeros(r * c, 1))
        # h_n i_n = top_n
        r, c = E.dim(n), A.dim(n)
        if r and c:
            M = block_row(r * c)
            if n in lay:
                off, er, xc = lay[n]
                F.set_block(M, 0, off, F.kron(F.identity(er), i.comp(n).transpose()))
            add(M, F.from_flat(r * c, 1, top.comp(n).entries()))
        # p_n h_n = bottom_n
        r, c = B.dim(n), X.dim(n)
        if r and c:
            M = block_row(r * c)
            if n in lay:
                off, er, xc = lay[n]
                F.set_block(M, 0, off, F.kron(p.comp(n), F.identity(xc)))
            add(M, F.from_flat(r * c, 1, bottom.comp(n).entries()))
        for ax, ae in actions:
            if n in lay:
                off, er, xc = lay[n]
                M = block_row(er * xc)
                F.set_block(M, 0, off, F.kron(ae.comp(n), F.identity(xc))
                            - F.kron(F.identity(er), ax.comp(n).transpose()))
                add(M, F.zeros(er * xc, 1))
    if not rows:
        sol = F.zeros(nvar, 1)
    else:
        Amat = F.vstack(rows, nvar)
        bvec = F.vstack(rhs, 1)
        sol = F.solve(Amat, bvec)
        if sol is None:
            Y = F.left_nullspace(Amat)
            cert = None
            for k in range(Y.nrows()):
                y = F.block(Y, [k], range(Y.ncols()))
                if not F.is_zero(y * bvec):
                    cert = y
                    break
            return LiftResult(None, cert)
    entries = sol.entries()
    comps = {}
    for n, (off, r, c) in lay.items():
        comps[n] = F.from_flat(r, c, entries[off:off + r * c])
    h = ChainMap(X, E, comps, check=False)
    if not h.commutes_with_d() or h @ i != top or p @ h != bottom:
        raise ChainError("internal error: lift fails verification")
    return LiftResult(h)
