"""Exact dense linear algebra over Q and F_p, backed by python-flint.

Matrices are plain flint ``fmpq_mat`` / ``nmod_mat`` objects and act on
column vectors.  A :class:`Field` knows how to build and reduce them.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

import flint

Matrix = "flint.fmpq_mat | flint.nmod_mat"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


class Field:
    """Either the rationals or a prime field."""

    def __init__(self, p: int = 0):
        if p and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        if p <= 0:
            raise ValueError("characteristic must be a positive prime")
        return cls(p)

    @classmethod
    def parse(cls, spec: str) -> "Field":
        """``q`` or ``fp:<p>`` (``f<p>`` is accepted too)."""
        s = spec.strip().lower()
        if s in ("q", "qq", "rationals"):
            return cls(0)
        for prefix in ("fp:", "gf:", "f"):
            if s.startswith(prefix):
                try:
                    return cls.prime(int(s[len(prefix):]))
                except ValueError:
                    break
        raise ValueError(f"cannot parse field {spec!r}")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    def __repr__(self) -> str:
        return f"Field({self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    # scalars

    def coerce(self, x):
        """Exact scalar from int, Fraction, flint scalar, or an ``"a/b"`` string."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, flint.fmpq):
            x = Fraction(int(x.p), int(x.q))
        if isinstance(x, flint.nmod):
            x = int(x)
        if isinstance(x, float):
            if not x.is_integer():
                raise ValueError("floating point entries are not exact; use 'a/b' strings")
            x = int(x)
        x = Fraction(x)
        if self.p == 0:
            return flint.fmpq(x.numerator, x.denominator)
        if x.denominator % self.p == 0:
            raise ValueError(f"{x} has no image in F{self.p}")
        return flint.nmod(x.numerator, self.p) / flint.nmod(x.denominator, self.p)

    def to_python(self, x) -> int | Fraction:
        if self.p == 0:
            x = flint.fmpq(x)
            return Fraction(int(x.p), int(x.q)) if int(x.q) != 1 else int(x.p)
        return int(x)

    def to_json(self, x) -> int | str:
        v = self.to_python(x)
        return v if isinstance(v, int) else f"{v.numerator}/{v.denominator}"

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    # matrix construction

    def zeros(self, m: int, n: int):
        if self.p == 0:
            return flint.fmpq_mat(m, n)
        return flint.nmod_mat(m, n, self.p)

    def from_flat(self, m: int, n: int, flat: Sequence):
        if self.p == 0:
            return flint.fmpq_mat(m, n, list(flat))
        return flint.nmod_mat(m, n, [int(x) if isinstance(x, flint.nmod) else x for x in flat],
                              self.p)

    def matrix(self, rows: Sequence[Sequence], ncols: int | None = None):
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if rows else (ncols or 0)
        if ncols is not None and n != ncols:
            raise ValueError("row length does not match ncols")
        if any(len(r) != n for r in rows):
            raise ValueError("ragged matrix rows")
        flat = [self.coerce(x) for r in rows for x in r]
        return self.from_flat(m, n, flat)

    def identity(self, n: int):
        A = self.zeros(n, n)
        for i in range(n):
            A[i, i] = 1
        return A

    def column(self, entries: Sequence):
        return self.from_flat(len(entries), 1, [self.coerce(x) for x in entries])

    def unit_vector(self, n: int, i: int):
        v = self.zeros(n, 1)
        v[i, 0] = 1
        return v

    def permutation_matrix(self, perm: Sequence[int]):
        """Matrix sending basis vector e_s to e_{perm[s]}."""
        n = len(perm)
        A = self.zeros(n, n)
        for s, t in enumerate(perm):
            A[t, s] = 1
        return A

    def random_matrix(self, rng: random.Random, m: int, n: int, lo: int = -2, hi: int = 2,
                      density: float = 1.0):
        flat = []
        for _ in range(m * n):
            if density < 1.0 and rng.random() > density:
                flat.append(0)
            else:
                flat.append(rng.randint(lo, hi))
        return self.from_flat(m, n, flat)

    def random_vector_in(self, rng: random.Random, basis, lo: int = -2, hi: int = 2):
        """Random combination of the columns of ``basis``."""
        return basis * self.random_matrix(rng, basis.ncols(), 1, lo, hi)

    # structure

    def copy(self, A):
        return self.from_flat(A.nrows(), A.ncols(), A.entries())

    def rows(self, A) -> list[list]:
        return A.tolist()

    def to_json_matrix(self, A) -> list[list]:
        return [[self.to_json(x) for x in row] for row in A.tolist()]

    def is_zero(self, A) -> bool:
        return A.nrows() == 0 or A.ncols() == 0 or not A

    def transpose(self, A):
        return A.transpose()

    def hstack(self, mats: Sequence, nrows: int | None = None):
        mats = list(mats)
        if not mats:
            return self.zeros(nrows or 0, 0)
        m = mats[0].nrows()
        if any(A.nrows() != m for A in mats):
            raise ValueError("hstack: row counts differ")
        c = sum(A.ncols() for A in mats)
        if m * c <= 4096:
            flat = []
            for A in mats:
                flat.extend(A.transpose().entries())
            return self.from_flat(c, m, flat).transpose()
        parts, c = [], 0
        for A in mats:
            parts.append((0, c, A))
            c += A.ncols()
        return self.assemble(m, c, parts)

    def vstack(self, mats: Sequence, ncols: int | None = None):
        mats = list(mats)
        if not mats:
            return self.zeros(0, ncols or 0)
        n = mats[0].ncols()
        if any(A.ncols() != n for A in mats):
            raise ValueError("vstack: column counts differ")
        r = sum(A.nrows() for A in mats)
        if r * n <= 4096:
            flat = []
            for A in mats:
                flat.extend(A.entries())
            return self.from_flat(r, n, flat)
        parts, r = [], 0
        for A in mats:
            parts.append((r, 0, A))
            r += A.nrows()
        return self.assemble(r, n, parts)

    def block_diag(self, mats: Sequence):
        mats = list(mats)
        m = sum(A.nrows() for A in mats)
        n = sum(A.ncols() for A in mats)
        parts = []
        r = c = 0
        for A in mats:
            parts.append((r, c, A))
            r += A.nrows()
            c += A.ncols()
        return self.assemble(m, n, parts)

    def set_block(self, out, r: int, c: int, A, add: bool = False) -> None:
        if isinstance(A, Kron):
            A.write(out, r, c, add)
            return
        ncols = A.ncols()
        for k, x in enumerate(A.entries()):
            if x != 0:
                i, j = r + k // ncols, c + k % ncols
                out[i, j] = out[i, j] + x if add else x

    def assemble(self, m: int, n: int, blocks: Iterable[tuple[int, int, object]],
                 add: bool = False):
        """An m x n matrix from (row offset, column offset, block) placements.

        Blocks may be matrices or :class:`Kron` products (written without
        forming them).  With ``add`` overlapping blocks are summed.
        """
        out = self.zeros(m, n)
        for r, c, A in blocks:
            self.set_block(out, r, c, A, add)
        return out

    def block(self, A, rows: range | Sequence[int], cols: range | Sequence[int]):
        rows = list(rows)
        cols = list(cols)
        L = A.tolist()
        return self.from_flat(len(rows), len(cols), [L[i][j] for i in rows for j in cols])

    def columns(self, A) -> list:
        """The columns of A as column matrices."""
        m = A.nrows()
        return [self.from_flat(m, 1, col) for col in A.transpose().tolist()]

    def kron(self, A, B):
        """Kronecker product; index (i, j) of the result is i*B.nrows() + j."""
        K = Kron(A, B)
        return self.assemble(K.nrows(), K.ncols(), [(0, 0, K)])

    # reduction

    def rref(self, A) -> tuple[object, tuple[int, ...]]:
        """Reduced row echelon form and pivot columns."""
        if A.nrows() == 0 or A.ncols() == 0:
            return self.copy(A), ()
        R, r = A.rref()
        pivots = []
        L = R.tolist()
        j = 0
        for i in range(r):
            row = L[i]
            while row[j] == 0:
                j += 1
            pivots.append(j)
            j += 1
        return R, tuple(pivots)

    def rank(self, A) -> int:
        if A.nrows() == 0 or A.ncols() == 0:
            return 0
        return A.rank()

    def nullspace(self, A):
        """Columns form a basis of {x : A x = 0}; rref-canonical."""
        return self.nullspace_free(A)[0]

    def nullspace_free(self, A):
        """The rref-canonical nullspace basis and its free coordinates.

        Basis vector k has a 1 at ``free[k]`` and 0 at the other free
        coordinates, so selecting the free rows is a left inverse.
        """
        n = A.ncols()
        R, piv = self.rref(A)
        ps = set(piv)
        free = [j for j in range(n) if j not in ps]
        out = self.zeros(n, len(free))
        if not free:
            return out, free
        L = R.tolist()
        for k, j in enumerate(free):
            out[j, k] = 1
            for i, pj in enumerate(piv):
                x = L[i][j]
                if x != 0:
                    out[pj, k] = -x
        return out, free

    def selection(self, n: int, coords: Sequence[int]):
        """The len(coords) x n matrix picking out the given coordinates."""
        out = self.zeros(len(coords), n)
        for k, j in enumerate(coords):
            out[k, j] = 1
        return out

    def left_nullspace(self, A):
        """Rows form a basis of {y : y A = 0}."""
        return self.nullspace(A.transpose()).transpose()

    def column_space(self, A):
        """A basis of the column space, taken from the pivot columns of A."""
        _, piv = self.rref(A)
        return self.block(A, range(A.nrows()), piv)

    def solve(self, A, B):
        """Some X with A X = B, or None if the system is inconsistent."""
        m, n = A.nrows(), A.ncols()
        k = B.ncols()
        if B.nrows() != m:
            raise ValueError("solve: row counts differ")
        if n == 0:
            return self.zeros(0, k) if self.is_zero(B) else None
        if m == 0:
            return self.zeros(n, k)
        R, piv = self.rref(self.hstack([A, B]))
        if piv and piv[-1] >= n:
            return None
        X = self.zeros(n, k)
        L = R.tolist()
        for i, pj in enumerate(piv):
            for c in range(k):
                x = L[i][n + c]
                if x != 0:
                    X[pj, c] = x
        return X

    def left_inverse(self, B):
        """L with L B = I, for B of full column rank."""
        k = B.ncols()
        if k == 0:
            return self.zeros(0, B.nrows())
        _, rows = self.rref(B.transpose())
        if len(rows) != k:
            raise ValueError("left_inverse: columns are dependent")
        sub = self.block(B, rows, range(k))
        inv = sub.inv()
        L = self.zeros(k, B.nrows())
        for c, r in enumerate(rows):
            for i in range(k):
                x = inv[i, c]
                if x != 0:
                    L[i, r] = x
        return L

    def right_inverse(self, P):
        """S with P S = I, for P of full row rank."""
        return self.left_inverse(P.transpose()).transpose()

    def inverse(self, A):
        if A.nrows() != A.ncols():
            raise ValueError("inverse of a non-square matrix")
        if A.nrows() == 0:
            return self.zeros(0, 0)
        return A.inv()

    def is_invertible(self, A) -> bool:
        return A.nrows() == A.ncols() and self.rank(A) == A.nrows()


class Kron:
    """A lazy Kronecker product ``scale * (A (x) B)`` for use in ``Field.assemble``."""

    __slots__ = ("A", "B", "scale")

    def __init__(self, A, B, scale: int = 1):
        self.A, self.B, self.scale = A, B, scale

    def nrows(self) -> int:
        return self.A.nrows() * self.B.nrows()

    def ncols(self) -> int:
        return self.A.ncols() * self.B.ncols()

    def write(self, out, r0: int, c0: int, add: bool = False) -> None:
        bm, bn = self.B.nrows(), self.B.ncols()
        if not (bm and bn and self.A.nrows() and self.A.ncols()):
            return
        nzb = [[(l, b) for l, b in enumerate(row) if b != 0] for row in self.B.tolist()]
        s = self.scale
        # only nonzero products are written; most factors here are identities
        for i, ra in enumerate(self.A.tolist()):
            for j, a in enumerate(ra):
                if a == 0:
                    continue
                if s != 1:
                    a = a * s
                for k in range(bm):
                    r = r0 + i * bm + k
                    for l, b in nzb[k]:
                        c = c0 + j * bn + l
                        out[r, c] = out[r, c] + a * b if add else a * b


def kernel_of_stack(field: Field, mats: Iterable, ncols: int):
    """Basis of the common kernel of several matrices with ``ncols`` columns."""
    mats = list(mats)
    if not mats:
        return field.identity(ncols)
    return field.nullspace(field.vstack(mats, ncols))
