"""Seeded verification suites producing JSON-ready reports.

Every report is a plain dict with an ``ok`` verdict, the seed, per-check
verdicts with ranks, and ``counterexample`` (the first failing instance,
serialized) or None.  Randomness is drawn from ``random.Random`` seeded by
strings, so reports depend only on the arguments.
"""

from __future__ import annotations

import json
import random
from typing import Any, Callable, Iterable, Sequence

from . import witnesses as W
from .exact_chain import (ChainComplex, ChainMap, direct_sum, disk, quasi_iso, quasi_iso_oracle,
                          random_chain_complex, random_chain_map, sphere)
from .dga import (DGAlgebra, dreitoo_adjunction, exterior_algebra, module_setting,
                  random_module_presheaf, tau_comparison, unit_algebra)
from .gmodule import GModule, fixed_points, perm_module, random_gmodule
from .group_core import (Family, FiniteGroup, GSet, all_family, builtin_group, coset_gset,
                         conjugacy_classes, disjoint_union, subgroup_lattice)
from .linalg import Field
from .model_struct import (CellComplex, GeneratorSet, acyclicity_check, f_equivalence,
                           random_fibration, random_j_complex, sm7_check, wrap_generators,
                           zero_gmodule)
from .orbit_cat import build_fixed_orbit, build_group_ring_orbit, category_to_json, delta
from .presheaf import (PresheafCellComplex, U, counit_is_identity, curry, free_presheaf,
                       random_cell_presheaf, triangle_identities, uncurry, unit_eta)


def rng_for(*parts) -> random.Random:
    """A generator determined by the parts (string seeding is platform independent)."""
    return random.Random(":".join(str(p) for p in parts))


def normalize(x):
    """JSON-ready copy: string keys, lists for tuples, no library scalars."""
    if isinstance(x, dict):
        return {str(k): normalize(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [normalize(v) for v in x]
    if isinstance(x, (bool, int, str, float)) or x is None:
        return x
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(normalize(report), sort_keys=True, indent=2) + "\n"


def dims_of(C: ChainComplex) -> dict[int, int]:
    return dict(sorted(C.dims.items()))


def gmodule_to_json(M: GModule) -> dict:
    G, F = M.group, M.field
    out = M.complex.to_json()
    out["action"] = {G.labels[g]: {str(n): F.to_json_matrix(M.mat(g, n)) for n in sorted(M.complex.dims)}
                     for g in G.generators}
    return out


class Tally:
    """Collects named verdicts and remembers the first failure."""

    def __init__(self):
        self.checks: dict[str, Any] = {}
        self.counts: dict[str, list[int]] = {}
        self.counterexample = None

    def record(self, key: str, ok: bool, group: str, detail: dict | None = None,
               witness: Callable[[], dict] | None = None) -> bool:
        ok = bool(ok)
        entry = {"ok": ok}
        if detail:
            entry.update(detail)
        self.checks[key] = entry
        c = self.counts.setdefault(group, [0, 0])
        c[0] += ok
        c[1] += 1
        if not ok and self.counterexample is None:
            self.counterexample = {"check": key, **(witness() if witness else {})}
        return ok

    @property
    def ok(self) -> bool:
        return all(p == t for p, t in self.counts.values())

    def summary(self) -> dict:
        return {k: {"passed": p, "total": t} for k, (p, t) in sorted(self.counts.items())}


def _report(suite: str, seed, tally: Tally, **extra) -> dict:
    out = {"suite": suite, "seed": seed, "ok": tally.ok, "summary": tally.summary(),
           "checks": tally.checks, "counterexample": tally.counterexample}
    out.update(extra)
    return out


# adjunctions for G-modules


def adjunction_suite(G: FiniteGroup, F: Field, seed: int = 0, samples: int = 50,
                     lo: int = -2, hi: int = 3, max_dim: int = 3) -> dict:
    """keyG (trivial and nontrivial M), bitensor, induction, coinduction and
    double enrichment on seeded random modules, for every subgroup."""
    t = Tally()
    subs = subgroup_lattice(G)
    for i in range(samples):
        rng = rng_for("adjunctions", seed, G.name, F.name, i)
        M = random_gmodule(G, F, rng, lo, hi, max_dim)
        N = random_gmodule(G, F, rng, lo, hi, max_dim)
        V = random_gmodule(G, F, rng, lo, hi, max_dim)
        T = random_gmodule(G, F, rng, lo, hi, max_dim, trivial=True)

        def cx(*mods, names="MNVT"):
            return lambda: {"sample": i, **{n: gmodule_to_json(m) for n, m in zip(names, mods)}}

        base = f"{i:03d}"
        bw = W.bitensor_witness(M, V, N)
        t.record(f"{base}/bitensor", bw.verify(), "bitensor",
                 {"hom_dims": bw.curry_v.dims()["source"],
                  "fixed_dims": bw.fixed_v.dims()["source"]}, cx(M, N, V))
        de = W.double_enrichment(M, N)
        t.record(f"{base}/double_enrichment", de.ok, "double_enrichment",
                 {"fixed_cycles": de.fixed_cycle_dim, "gchain_maps": de.gchain_map_dim},
                 cx(M, N))
        for H in subs:
            for name, src in (("keyG_trivial", T), ("keyG", M)):
                w = W.keyG_iso(src, N, H)
                t.record(f"{base}/{name}[{H.label}]", w.verify(), name,
                         {"dims": w.dims()["source"], "target": w.info.get("target", "")},
                         cx(src, N, names="MN"))
            w = W.induction_witness(M.restrict(H), N)
            t.record(f"{base}/induction[{H.label}]", w.verify(), "induction",
                     {"dims": w.dims()["source"]}, cx(M, N))
            w = W.coinduction_witness(M, N.restrict(H))
            t.record(f"{base}/coinduction[{H.label}]", w.verify(), "coinduction",
                     {"dims": w.dims()["source"]}, cx(M, N))
    return _report("adjunctions", seed, t, group=G.name, field=F.name, samples=samples)


# the (T, U) adjunction for presheaves


def quillen_suite(G: FiniteGroup, family: Family, F: Field, seed: int = 0,
                  instances: int = 20, max_cells: int = 5, window: tuple[int, int] = (0, 1)
                  ) -> dict:
    t = Tally()
    VO = build_fixed_orbit(G, family, F)
    for i in range(instances):
        rng = rng_for("quillen-eps", seed, G.name, F.name, i)
        N = random_gmodule(G, F, rng, -1, 2, 2)
        t.record(f"epsilon/{i:03d}", counit_is_identity(N, VO), "epsilon",
                 {"dims": dims_of(N.complex)}, lambda: {"N": gmodule_to_json(N)})
    rng = rng_for("quillen-free", seed, G.name, F.name)
    for H in VO.objects:
        shapes = [(f"S{n}", sphere(F, n)) for n in range(window[0], window[1] + 1)]
        shapes += [(f"D{n}", disk(F, n)) for n in range(window[0], window[1] + 1)]
        shapes.append(("random", random_chain_complex(F, rng, -1, 2, 2)))
        for name, M in shapes:
            X = free_presheaf(VO, H, M)
            eta = unit_eta(X)
            ok = eta.is_natural() and eta.is_level_iso()
            t.record(f"eta_free/{H.label}/{name}", ok, "eta_free",
                     {"dims": X.dims(), "levels": eta.level(lambda m: m.is_iso())},
                     lambda: {"M": M.to_json(), "object": H.label})
    for i in range(instances):
        rng = rng_for("quillen-cells", seed, G.name, F.name, i)
        cx = random_cell_presheaf(rng, VO, cells=rng.randint(1, max_cells))
        X = cx.total
        eta = unit_eta(X)
        cells = [[a.label, n, k] for a, n, k in cx.cells]
        t.record(f"eta_cells/{i:03d}", eta.is_natural() and eta.is_level_iso(), "eta_cells",
                 {"cells": cells, "dims": X.dims(), "levels": eta.level(lambda m: m.is_iso())},
                 lambda: {"cells": cells, "presheaf": X.to_json()})
        N = random_gmodule(G, F, rng, -1, 2, 2)
        tri = triangle_identities(X, N)
        t.record(f"triangles/{i:03d}", all(tri.values()), "triangles", {"identities": tri},
                 lambda: {"cells": cells, "N": gmodule_to_json(N)})
    return _report("quillen", seed, t, group=G.name, field=F.name, family=family.labels)


# cell complexes


def _presheaf_mirror(cx: CellComplex, VO) -> PresheafCellComplex:
    pc = PresheafCellComplex(U(cx.base, VO))
    for H, n, kind in cx.cells:
        pc.attach(H, n, None, kind)
    return pc


def acyclicity_suite(G: FiniteGroup, family: Family, F: Field, seed: int = 0,
                     samples: int = 100, max_cells: int = 5) -> dict:
    """Relative J-cell complexes: the inclusion is an F-equivalence, and the same cells
    attached to U(base) give a level F-equivalence of presheaves."""
    t = Tally()
    VO = build_fixed_orbit(G, family, F)
    for i in range(samples):
        rng = rng_for("acyclicity", seed, G.name, F.name, i)
        cx = random_j_complex(rng, G, family, F, cells=rng.randint(0, max_cells))
        inc = cx.inclusion()
        fe = f_equivalence(inc, family)
        cells = [[H.label, n, k] for H, n, k in cx.cells]
        t.record(f"module/{i:03d}", fe.ok and acyclicity_check(cx, family), "module",
                 {"cells": cells, "per_subgroup": fe.per_subgroup,
                  "dims": dims_of(cx.total.complex)},
                 lambda: {"cells": cells, "base": gmodule_to_json(cx.base)})
        pc = _presheaf_mirror(cx, VO)
        t.record(f"presheaf/{i:03d}", acyclicity_check(pc), "presheaf",
                 {"dims": pc.total.dims()},
                 lambda: {"cells": cells, "base": gmodule_to_json(cx.base)})
    return _report("acyclicity", seed, t, group=G.name, field=F.name, family=family.labels)


def sm7_suite(groups: Sequence[FiniteGroup], F: Field, seed: int = 0, samples: int = 100,
              window: tuple[int, int] = (-1, 1)) -> dict:
    """Pairs (wrapped generator, random F-fibration) over the given groups with F = All.

    Half of the fibrations have acyclic fibre, hence are F-equivalences."""
    t = Tally()
    cases: dict[str, int] = {}
    for i in range(samples):
        rng = rng_for("sm7", seed, F.name, i)
        G = groups[i % len(groups)]
        fam = all_family(G)
        kind = rng.choice("IJ")
        gen = rng.choice(wrap_generators(G, fam, GeneratorSet(kind, window, F)))
        p = random_fibration(rng, G, fam, F, acyclic=rng.random() < 0.5)
        r = sm7_check(gen, p, fam)
        case = f"{kind}/{'equivalence' if r.fibration_is_equivalence else 'not_equivalence'}"
        cases[case] = cases.get(case, 0) + 1
        t.record(f"{i:03d}", r.ok, "sm7", {"group": G.name, **r.to_json()},
                 lambda: {"group": G.name, "generator": gen.label,
                          "E": gmodule_to_json(p.source), "B": gmodule_to_json(p.target)})
    return _report("sm7", seed, t, field=F.name, groups=[G.name for G in groups], cases=cases)


def cells_build_report(G: FiniteGroup, F: Field, script: dict, family: Family | None = None
                       ) -> tuple[CellComplex, dict]:
    base = script["base"] or zero_gmodule(G, F)
    cx = CellComplex(base)
    stages = []
    for H, n, kind, vec in script["attach"]:
        cx.attach(H, n, vec, kind)
        X = cx.total
        stages.append({"cell": [H.label, n, kind], "dims": dims_of(X.complex),
                       "homology": X.complex.homology()})
    fam = family or all_family(G)
    fixed = {H.label: fixed_points(cx.total, H).complex.homology() for H in fam}
    rep = {"suite": "cells build", "group": G.name, "field": F.name,
           "base_dims": dims_of(base.complex), "stages": stages,
           "fixed_point_homology": fixed, "split_injective": cx.is_split_injective(),
           "ok": cx.is_split_injective(), "counterexample": None}
    return cx, rep


def cells_acyclic_report(G: FiniteGroup, family: Family, F: Field, script: dict) -> dict:
    cx, rep = cells_build_report(G, F, script, family)
    rep["suite"] = "cells check-acyclic"
    fe = f_equivalence(cx.inclusion(), family)
    pc = _presheaf_mirror(cx, build_fixed_orbit(G, family, F))
    from .presheaf import level_F_equivalence
    lvl = level_F_equivalence(pc.inclusion())
    rep.update({"family": family.labels, "module_F_equivalence": fe.per_subgroup,
                "presheaf_level_F_equivalence": lvl, "ok": fe.ok and lvl})
    if not rep["ok"]:
        rep["counterexample"] = {"per_subgroup": fe.per_subgroup, "presheaf": lvl}
    return rep


# orbit categories and the comparison functor


def orbit_cat_report(G: FiniteGroup, family: Family, F: Field, variant: str = "both") -> dict:
    out: dict[str, Any] = {"suite": "orbit-cat", "group": G.name, "field": F.name,
                           "family": family.labels, "variant": variant}
    ok = True
    cats = {}
    if variant in ("group-ring", "both"):
        cats["group_ring"] = build_group_ring_orbit(G, family, F)
    if variant in ("fixed", "both"):
        cats["fixed_point"] = build_fixed_orbit(G, family, F)
    for key, C in cats.items():
        chk = C.check()
        ok = ok and all(chk.values())
        out[key] = {"ranks": C.rank_table(), "axioms": chk, "category": category_to_json(C)}
    if len(cats) == 2:
        I, VO = cats["group_ring"], cats["fixed_point"]
        d = delta(I, VO)
        chk = d.check()
        ok = ok and all(chk.values())
        disc = []
        for a in I.objects:
            for b in I.objects:
                r1, r2 = I.hom(a, b).rank, VO.hom(a, b).rank
                if r1 != r2:
                    disc.append({"from": I.label(a), "to": I.label(b),
                                 "group_ring": r1, "fixed_point": r2})
        out["delta"] = {"functor": chk, "injective_on_homs": d.is_injective_on_homs(),
                        "discrepancies": disc}
    out["ok"] = bool(ok)
    out["counterexample"] = None if ok else {"axioms": {k: v["axioms"] for k, v in out.items()
                                                        if isinstance(v, dict) and "axioms" in v}}
    return out


def delta_suite(groups: Iterable[FiniteGroup], F: Field) -> dict:
    t = Tally()
    ranks = {}
    for G in groups:
        fam = all_family(G)
        I, VO = build_group_ring_orbit(G, fam, F), build_fixed_orbit(G, fam, F)
        d = delta(I, VO)
        chk = d.check()
        ranks[G.name] = {"group_ring": I.rank_table(), "fixed_point": VO.rank_table()}
        t.record(f"{G.name}/functor", all(chk.values()), "functoriality", chk)
        t.record(f"{G.name}/injective", d.is_injective_on_homs(), "injective")
        for name, C in (("group_ring", I), ("fixed_point", VO)):
            t.record(f"{G.name}/{name}/axioms", all(C.check().values()), "category_axioms")
    return _report("delta", None, t, field=F.name, ranks=ranks)


# algebras


def dreitoo_report(G: FiniteGroup, family: Family, A: DGAlgebra, seed: int = 0,
                   samples: int = 5, window: tuple[int, int] = (0, 1)) -> dict:
    rep = dreitoo_adjunction(G, family, A, seed, samples, window)
    rep["suite"] = "dreitoo"
    rep["counterexample"] = None if rep["ok"] else {
        k: v for k, v in rep.items() if k in ("epsilon_identity", "triangles", "presheaf_axioms")}
    if not rep["ok"]:
        bad = {k: c for k, c in rep["cells"].items() if not c["eta_iso"]}
        rep["counterexample"]["cells"] = bad
    return rep


def tau_report(G: FiniteGroup, family: Family, A: DGAlgebra) -> dict:
    """tau is reported per pair; whether it is a quasi-isomorphism is informative
    (no general claim is checked), so the verdict is that every tau is a chain map."""
    rep = tau_comparison(G, family, A)
    rep["suite"] = "tau"
    rep["ok"] = all(p["chain_map"] for p in rep["pairs"].values())
    rep["counterexample"] = None if rep["ok"] else {
        k: v for k, v in rep["pairs"].items() if not v["chain_map"]}
    return rep


def currying_suite(G: FiniteGroup, family: Family, A: DGAlgebra, seed: int = 0,
                   samples: int = 50) -> dict:
    t = Tally()
    S = module_setting(G, family, A)
    for i in range(samples):
        rng = rng_for("currying", seed, G.name, A.name, i)
        X = random_module_presheaf(S, rng)
        Y = curry(X)
        back = uncurry(Y, S.P)
        same = back == X and dumps(back.to_json()) == dumps(X.to_json())
        t.record(f"{i:03d}", same and all(Y.check().values()), "uncurry_curry",
                 {"dims": X.dims()}, lambda: {"presheaf": X.to_json()})
    return _report("currying", seed, t, group=G.name, algebra=A.name, family=family.labels)


# oracles


def _acyclic_complex(F: Field, rng: random.Random) -> ChainComplex:
    return direct_sum([disk(F, rng.randint(-1, 2)) for _ in range(rng.randint(1, 2))])


def _inclusion(C: ChainComplex, E: ChainComplex) -> tuple[ChainComplex, ChainMap, ChainMap]:
    F = C.field
    S = direct_sum([C, E])
    inc, proj = {}, {}
    for n in C.dims:
        A = F.zeros(S.dim(n), C.dim(n))
        F.set_block(A, 0, 0, F.identity(C.dim(n)))
        inc[n] = A
        proj[n] = A.transpose()
    return S, ChainMap(C, S, inc), ChainMap(S, C, proj)


def oracle_suite(F: Field, seed: int = 0, maps: int = 500) -> dict:
    """quasi_iso via the cone against homology ranks of the induced map.

    Maps are random chain maps plus inclusions and projections of acyclic summands
    (pre- and post-composed with random maps), so both verdicts occur."""
    t = Tally()
    verdicts = {"quasi_iso": 0, "not_quasi_iso": 0}
    for i in range(maps):
        rng = rng_for("oracle", seed, F.name, i)
        C = random_chain_complex(F, rng, -1, 2, 2)
        mode = i % 4
        if mode == 0:
            f = random_chain_map(rng, C, random_chain_complex(F, rng, -1, 2, 2))
        elif mode == 1:
            f = random_chain_map(rng, C, C)
        else:
            S, inc, proj = _inclusion(C, _acyclic_complex(F, rng))
            f = inc if mode == 2 else proj
            if rng.random() < 0.5:
                g = random_chain_map(rng, f.target, f.target)
                f = g @ f
        a, b = quasi_iso(f), quasi_iso_oracle(f)
        verdicts["quasi_iso" if b else "not_quasi_iso"] += 1
        t.record(f"{i:03d}", a == b, "agreement",
                 {"cone": a, "oracle": b, "source": dims_of(f.source), "target": dims_of(f.target)},
                 lambda: {"map": f.to_json(), "source": f.source.to_json(),
                          "target": f.target.to_json()})
    return _report("oracle", seed, t, field=F.name, verdicts=verdicts)


def gsets_up_to(G: FiniteGroup, max_size: int) -> list[tuple[list, GSet]]:
    """Every G-set of size <= max_size up to isomorphism, as sums of orbits G/K."""
    reps = [cls[0] for cls in conjugacy_classes(G)]
    orbits = [(K, coset_gset(G, K)) for K in reps]
    out = []

    def extend(start: int, chosen: list, size: int):
        if chosen:
            out.append(([K.label for K, _ in chosen], disjoint_union([S for _, S in chosen])))
        for k in range(start, len(orbits)):
            K, S = orbits[k]
            if size + S.size <= max_size:
                extend(k, chosen + [orbits[k]], size + S.size)

    extend(0, [], 0)
    return out


def fixed_rank_suite(groups: Iterable[FiniteGroup], fields: Sequence[Field],
                     max_size: int = 12) -> dict:
    """dim (R[S])^H equals the number of H-orbits of S."""
    t = Tally()
    for G in groups:
        subs = subgroup_lattice(G)
        for parts, S in gsets_up_to(G, max_size):
            for F in fields:
                M = perm_module(S, F)
                for H in subs:
                    r = fixed_points(M, H).complex.dim(0)
                    n = len(S.orbits(H))
                    t.record(f"{G.name}/{'+'.join(parts)}/{F.name}/{H.label}", r == n, G.name,
                             {"rank": r, "orbits": n})
    return _report("fixed-ranks", None, t, max_size=max_size)


# group info


def group_info(G: FiniteGroup) -> dict:
    subs = subgroup_lattice(G)
    return {"suite": "group info", "name": G.name, "order": G.order, "labels": list(G.labels),
            "abelian": G.is_abelian, "generators": [G.labels[g] for g in G.generators],
            "subgroups": [{"label": H.label, "order": H.order, "normal": H.is_normal(),
                           "elements": [G.labels[x] for x in H.elements]} for H in subs],
            "conjugacy_classes": [[H.label for H in cls] for cls in conjugacy_classes(G)],
            "ok": True, "counterexample": None}


DEFAULT_GROUPS = ("c2", "c3", "c4", "s3")


def groups(names: Iterable[str] = DEFAULT_GROUPS) -> list[FiniteGroup]:
    return [builtin_group(n) for n in names]


def algebras(F: Field) -> list[DGAlgebra]:
    return [unit_algebra(F), exterior_algebra(F)]
