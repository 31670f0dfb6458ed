"""Finite groups by Cayley table, subgroups, families, and finite G-sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group stored as a full multiplication table.

    ``cayley[a][b]`` is the index of ``a*b``.  All axioms are checked on
    construction, so every later enumeration can trust the table.
    """

    def __init__(self, cayley: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                 name: str = ""):
        n = len(cayley)
        if n == 0:
            raise GroupError("a group has at least one element")
        table = tuple(tuple(int(x) for x in row) for row in cayley)
        full = tuple(range(n))
        for row in table:
            if len(row) != n or tuple(sorted(row)) != full:
                raise GroupError("cayley rows must be permutations of the elements")
        for j in range(n):
            if tuple(sorted(table[i][j] for i in range(n))) != full:
                raise GroupError("cayley columns must be permutations of the elements")
        ids = [e for e in range(n) if table[e] == full]
        if len(ids) != 1:
            raise GroupError("no two-sided identity in cayley table")
        e = ids[0]
        if any(table[i][e] != i for i in range(n)):
            raise GroupError("no two-sided identity in cayley table")
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise GroupError(f"associativity fails at ({a}, {b}, {c})")
        self.order = n
        self.cayley = table
        self.identity = e
        self.inverses = tuple(table[a].index(e) for a in range(n))
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n or len(set(labels)) != n:
            raise GroupError("labels must be distinct, one per element")
        self.labels = tuple(str(x) for x in labels)
        self.name = name or f"G{n}"
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.cayley == other.cayley

    def __hash__(self) -> int:
        return hash(self.cayley)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.cayley[self.cayley[g][x]][self.inverses[g]]

    def element(self, label: str | int) -> int:
        if isinstance(label, int):
            if not 0 <= label < self.order:
                raise GroupError(f"element index {label} out of range")
            return label
        try:
            return self._index[label]
        except KeyError:
            raise GroupError(f"unknown element label {label!r}") from None

    def generate(self, gens: Iterable[int]) -> frozenset[int]:
        elems = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.cayley[x][g]
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return frozenset(elems)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return greedy_generators(self, range(self.order))

    @cached_property
    def is_abelian(self) -> bool:
        t = self.cayley
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def opposite(self) -> "FiniteGroup":
        t = self.cayley
        n = self.order
        return FiniteGroup([[t[b][a] for b in range(n)] for a in range(n)], self.labels,
                           self.name + "^op")

    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [self.identity])

    def subgroup(self, labels: Iterable[str | int]) -> "Subgroup":
        """Subgroup generated by the given elements (labels or indices)."""
        return Subgroup(self, self.generate(self.element(x) for x in labels))


def greedy_generators(group: FiniteGroup, elements: Iterable[int]) -> tuple[int, ...]:
    target = frozenset(elements)
    gens: list[int] = []
    span = frozenset({group.identity})
    for x in sorted(target):
        if x not in span:
            gens.append(x)
            span = group.generate(gens)
            if span == target:
                break
    return tuple(gens)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __init__(self, parent: FiniteGroup, elements: Iterable[int]):
        elems = tuple(sorted(set(int(x) for x in elements)))
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "elements", elems)
        s = set(elems)
        if parent.identity not in s:
            raise GroupError("subgroup must contain the identity")
        for a in elems:
            if parent.inv(a) not in s:
                raise GroupError("subgroup not closed under inverses")
            for b in elems:
                if parent.mul(a, b) not in s:
                    raise GroupError("subgroup not closed under multiplication")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and self.parent == other.parent
                and self.elements == other.elements)

    def __hash__(self) -> int:
        return hash(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __len__(self) -> int:
        return len(self.elements)

    def __lt__(self, other: "Subgroup") -> bool:
        return self.sort_key < other.sort_key

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @property
    def sort_key(self) -> tuple:
        return (self.order, self.elements)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return greedy_generators(self.parent, self.elements)

    @property
    def label(self) -> str:
        G = self.parent
        if self.order == 1:
            return "e"
        if self.order == G.order:
            return G.name
        return "<" + ",".join(G.labels[g] for g in self.generators) + ">"

    def conjugate(self, g: int) -> "Subgroup":
        return Subgroup(self.parent, (self.parent.conj(g, x) for x in self.elements))

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def is_normal(self) -> bool:
        return all(self.conjugate(g) == self for g in self.parent.elements)

    def __repr__(self) -> str:
        return f"Subgroup({self.label}, order={self.order})"


def subgroup_lattice(G: FiniteGroup) -> list[Subgroup]:
    """All subgroups of G, each exactly once, sorted by order."""
    found = {G.generate([g]) for g in G.elements}
    frontier = set(found)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(found):
                j = G.generate(a | b)
                if j not in found and j not in new:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(Subgroup(G, s) for s in found)


def conjugacy_classes(G: FiniteGroup) -> list[list[Subgroup]]:
    seen: set[Subgroup] = set()
    classes = []
    for H in subgroup_lattice(G):
        if H in seen:
            continue
        cls = sorted({H.conjugate(g) for g in G.elements})
        seen.update(cls)
        classes.append(cls)
    return classes


@dataclass(frozen=True)
class Family:
    """A nonempty set of subgroups closed under subgroups and conjugation."""

    parent: FiniteGroup
    members: tuple[Subgroup, ...]

    def __post_init__(self):
        if not self.members:
            raise GroupError("a family must be nonempty")
        ms = set(self.members)
        if len(ms) != len(self.members):
            raise GroupError("duplicate family members")
        lattice = subgroup_lattice(self.parent)
        for H in self.members:
            for g in self.parent.elements:
                if H.conjugate(g) not in ms:
                    raise GroupError(f"family not closed under conjugation at {H.label}")
            for K in lattice:
                if K.is_subgroup_of(H) and K not in ms:
                    raise GroupError(f"family not closed under subgroups at {H.label}")

    def __contains__(self, H: Subgroup) -> bool:
        return H in set(self.members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def labels(self) -> list[str]:
        return [H.label for H in self.members]


def family_closure(G: FiniteGroup, seeds: Iterable[Subgroup]) -> Family:
    """Smallest family containing ``seeds``."""
    seeds = list(seeds)
    if not seeds:
        raise GroupError("family_closure needs at least one seed")
    conj = {H.conjugate(g) for H in seeds for g in G.elements}
    members = sorted(K for K in subgroup_lattice(G) if any(K.is_subgroup_of(H) for H in conj))
    return Family(G, tuple(members))


def all_family(G: FiniteGroup) -> Family:
    return Family(G, tuple(subgroup_lattice(G)))


def trivial_family(G: FiniteGroup) -> Family:
    return Family(G, (G.trivial(),))


# G-sets


@dataclass(frozen=True)
class GSet:
    """A finite left G-set; ``action[g][s]`` is ``g.s``."""

    group: FiniteGroup
    size: int
    action: tuple[tuple[int, ...], ...]
    point_labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        G = self.group
        if len(self.action) != G.order:
            raise GroupError("one permutation per group element required")
        full = tuple(range(self.size))
        for p in self.action:
            if len(p) != self.size or tuple(sorted(p)) != full:
                raise GroupError("action entries must be permutations")
        if self.action[G.identity] != full:
            raise GroupError("identity must act trivially")
        for g in G.elements:
            for h in G.elements:
                gh = self.action[G.mul(g, h)]
                ag, ah = self.action[g], self.action[h]
                if any(gh[s] != ag[ah[s]] for s in range(self.size)):
                    raise GroupError("action is not a homomorphism")

    def act(self, g: int, s: int) -> int:
        return self.action[g][s]

    def orbits(self, H: Subgroup | None = None) -> list[tuple[int, ...]]:
        """Orbits of H (default: the whole group), each sorted, ordered by least point."""
        elems = H.elements if H is not None else tuple(self.group.elements)
        seen = [False] * self.size
        out = []
        for s in range(self.size):
            if seen[s]:
                continue
            orb = sorted({self.action[h][s] for h in elems})
            for t in orb:
                seen[t] = True
            out.append(tuple(orb))
        return out

    def stabilizer(self, s: int) -> Subgroup:
        return Subgroup(self.group, (g for g in self.group.elements if self.action[g][s] == s))


def coset_gset(G: FiniteGroup, H: Subgroup) -> GSet:
    """The left G-set G/H.  Point 0 is the coset eH; representatives are stored as labels."""
    cosets: list[frozenset[int]] = []
    where: dict[int, int] = {}
    for g in [G.identity] + [x for x in G.elements if x != G.identity]:
        if g in where:
            continue
        c = frozenset(G.mul(g, h) for h in H.elements)
        for x in c:
            where[x] = len(cosets)
        cosets.append(c)
    reps = [G.identity] + [min(c) for c in cosets[1:]]
    action = tuple(tuple(where[G.mul(g, reps[i])] for i in range(len(cosets)))
                   for g in G.elements)
    labels = tuple(G.labels[r] + "H" for r in reps)
    S = GSet(G, len(cosets), action, labels)
    object.__setattr__(S, "_coset_reps", tuple(reps))
    return S


def coset_representatives(S: GSet) -> tuple[int, ...]:
    reps = getattr(S, "_coset_reps", None)
    if reps is None:
        raise GroupError("G-set was not built by coset_gset")
    return reps


def regular_gset(G: FiniteGroup) -> GSet:
    return coset_gset(G, G.trivial())


def disjoint_union(sets: Sequence[GSet]) -> GSet:
    """S_1 + ... + S_k, points numbered consecutively."""
    if not sets:
        raise GroupError("need at least one G-set")
    G = sets[0].group
    action = []
    for g in G.elements:
        perm, off = [], 0
        for S in sets:
            if S.group != G:
                raise GroupError("G-sets over different groups")
            perm.extend(off + t for t in S.action[g])
            off += S.size
        action.append(tuple(perm))
    return GSet(G, sum(S.size for S in sets), tuple(action))


def gset_fixed_points(S: GSet, H: Subgroup) -> tuple[int, ...]:
    if H.parent != S.group:
        raise GroupError("subgroup and G-set live over different groups")
    return tuple(s for s in range(S.size) if all(S.action[h][s] == s for h in H.elements))


def equivariant_maps(S: GSet, T: GSet) -> list[tuple[int, ...]]:
    """Every G-map S -> T as a point table, in lexicographic order.

    A map is fixed by where it sends one representative per orbit; the image
    of a representative must be fixed by the representative's stabilizer.
    """
    if S.group != T.group:
        raise GroupError("G-sets over different groups")
    G = S.group
    orbit_reps = [orb[0] for orb in S.orbits()]
    choices = [gset_fixed_points(T, S.stabilizer(r)) for r in orbit_reps]
    maps = []
    for pick in itertools.product(*choices):
        table = [-1] * S.size
        for r, t in zip(orbit_reps, pick):
            for g in G.elements:
                table[S.action[g][r]] = T.action[g][t]
        maps.append(tuple(table))
    return sorted(maps)


def is_equivariant(S: GSet, T: GSet, table: Sequence[int]) -> bool:
    return all(table[S.action[g][s]] == T.action[g][table[s]]
               for g in S.group.elements for s in range(S.size))


# constructors


def _perm_label(p: Sequence[int]) -> str:
    n = len(p)
    seen = [False] * n
    cycles = []
    for i in range(n):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        c = []
        j = i
        while not seen[j]:
            seen[j] = True
            c.append(j + 1)
            j = p[j]
        cycles.append("(" + "".join(str(x) for x in c) + ")" if n < 10
                      else "(" + " ".join(str(x) for x in c) + ")")
    return "".join(cycles) or "e"


def from_permutations(generators: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Group generated by permutations of {0..n-1}; labels in 1-based cycle notation."""
    if not generators:
        raise GroupError("need at least one generator")
    n = len(generators[0])
    gens = [tuple(int(x) for x in g) for g in generators]
    ident = tuple(range(n))
    for g in gens:
        if len(g) != n or tuple(sorted(g)) != ident:
            raise GroupError("generators must be permutations of the same degree")
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            y = tuple(g[x[k]] for k in range(n))
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
        i += 1
    table = [[index[tuple(a[b[k]] for k in range(n))] for b in elems] for a in elems]
    return FiniteGroup(table, [_perm_label(p) for p in elems], name)


def cyclic(n: int) -> FiniteGroup:
    labels = ["e", "g"] + [f"g{k}" for k in range(2, n)]
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], labels[:n], f"C{n}")


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return FiniteGroup([[0]], ["e"], "S1")
    gens = [[1, 0] + list(range(2, n))]
    if n > 2:
        gens.append(list(range(1, n)) + [0])
    return from_permutations(gens, f"S{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = [(k + 1) % n for k in range(n)]
    ref = [(-k) % n for k in range(n)]
    return from_permutations([rot, ref], f"D{2 * n}")


BUILTIN_GROUPS = {
    "c1": lambda: cyclic(1),
    "c2": lambda: cyclic(2),
    "c3": lambda: cyclic(3),
    "c4": lambda: cyclic(4),
    "c5": lambda: cyclic(5),
    "c6": lambda: cyclic(6),
    "s3": lambda: symmetric(3),
    "d8": lambda: dihedral(4),
    "klein": lambda: from_permutations([[1, 0, 3, 2], [2, 3, 0, 1]], "V4"),
}


def builtin_group(name: str) -> FiniteGroup:
    try:
        return BUILTIN_GROUPS[name.lower()]()
    except KeyError:
        raise GroupError(f"unknown builtin group {name!r}") from None
