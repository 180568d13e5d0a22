"""Complexes of ind-modules versus ind-systems of complexes.

An :class:`IndComplex` is a bounded complex whose terms are diagrams of
finite modules over one finite filtered index ``I``, with differentials
given levelwise (natural in ``I``). :func:`complex_parallelize` reads it as
an ``I``-indexed system of bounded complexes; :func:`reassemble` goes back.

Two further checks live here:

* :func:`hom_comparison`: for a constant complex ``X``, the colimit over
  ``I`` of ``Hom_K(X, Z_i[n])`` (a colimit of finite sets) against
  ``Hom_K(X, colim Z[n])`` with ``colim Z`` computed as a module cokernel;
* :func:`hp_probe`: a morphism of ind-systems whose indices have terminal
  objects is an isomorphism in ``ind(D^b)`` exactly when its component at
  the terminal objects has an acyclic cone; the probe also compares that
  with the cohomology test and exhibits an inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..errors import Budget, ensure_budget
from ..fincat import FiniteCategory, SetDiagram, classify_filtered, set_colimit, terminal_category, terminal_objects
from .complexes import (
    BoundedComplex,
    ChainMap,
    FModule,
    cohomology_at,
    cone,
    hom_valid,
    identity_map,
    mat_equal,
    reduce_matrix,
)
from .homotopy import MapProblem, homotopic, homotopy_classes, solve_map
from .linalg import identity, matmul, matvec, subquotient
from .resolutions import injective_resolution


@dataclass(frozen=True, eq=False)
class IndComplex:
    """``modules[d][i]``, ``transitions[d][m]`` (matrix of ``m: i -> j``), ``diffs[d][i]``."""

    index: FiniteCategory
    ring: object
    modules: dict
    transitions: dict
    diffs: dict
    name: str = ""

    def degrees(self) -> list[int]:
        return sorted(self.modules)

    def module(self, d: int, i: str) -> FModule:
        return self.modules.get(d, {}).get(i) or FModule(self.ring, ())

    def transition(self, d: int, m: str) -> list:
        idx = self.index
        src, tgt = self.module(d, idx.src(m)), self.module(d, idx.tgt(m))
        a = self.transitions.get(d, {}).get(m)
        if a is None:
            if idx.is_identity(m):
                return identity(src.rank)
            return [[0] * src.rank for _ in range(tgt.rank)]
        return a

    def diff(self, d: int, i: str) -> list:
        a = self.diffs.get(d, {}).get(i)
        if a is None:
            return [[0] * self.module(d, i).rank for _ in range(self.module(d + 1, i).rank)]
        return a

    def problems(self) -> list[dict]:
        out = []
        idx, r = self.index, self.ring
        for d in self.degrees():
            for m in idx.morphisms:
                a = self.transition(d, m.id)
                if not hom_valid(self.module(d, m.src), self.module(d, m.tgt), a):
                    out.append({"law": "transition_not_a_module_map", "degree": d, "morphism": m.id})
            for (g, f), gf in idx.compose_table.items():
                lhs = matmul(r, self.transition(d, g), self.transition(d, f),
                             inner=self.module(d, idx.tgt(f)).rank, cols=self.module(d, idx.src(f)).rank)
                if not mat_equal(self.module(d, idx.tgt(g)), lhs, self.transition(d, gf)):
                    out.append({"law": "transition_composition", "degree": d, "pair": [g, f]})
            for x in idx.objects:
                if not mat_equal(self.module(d, x), self.transition(d, idx.ident(x)), identity(self.module(d, x).rank)):
                    out.append({"law": "transition_identity", "degree": d, "object": x})
        for d in self.degrees():
            for m in idx.morphisms:
                i, j = m.src, m.tgt
                lhs = matmul(r, self.diff(d, j), self.transition(d, m.id),
                             inner=self.module(d, j).rank, cols=self.module(d, i).rank)
                rhs = matmul(r, self.transition(d + 1, m.id), self.diff(d, i),
                             inner=self.module(d + 1, i).rank, cols=self.module(d, i).rank)
                if not mat_equal(self.module(d + 1, j), lhs, rhs):
                    out.append({"law": "differential_not_natural", "degree": d, "morphism": m.id})
        return out

    def same_as(self, other: "IndComplex") -> bool:
        if self.index != other.index or self.ring != other.ring:
            return False
        degs = sorted(set(self.degrees()) | set(other.degrees()))
        for d in degs:
            for x in self.index.objects:
                if self.module(d, x).exps != other.module(d, x).exps:
                    return False
                if not mat_equal(self.module(d + 1, x), self.diff(d, x), other.diff(d, x)):
                    return False
            for m in self.index.morphisms:
                if not mat_equal(self.module(d, m.tgt), self.transition(d, m.id), other.transition(d, m.id)):
                    return False
        return True


@dataclass
class IndSystem:
    """An ``I``-indexed system of bounded complexes and chain maps."""

    index: FiniteCategory
    complexes: dict
    maps: dict

    def problems(self) -> list[dict]:
        out = []
        idx = self.index
        for m in idx.morphisms:
            for p in self.maps[m.id].problems():
                out.append({"morphism": m.id, **p})
        for (g, f), gf in idx.compose_table.items():
            if not self.maps[f].then(self.maps[g]).same_as(self.maps[gf]):
                out.append({"law": "system_composition", "pair": [g, f]})
        for x in idx.objects:
            if not self.maps[idx.ident(x)].same_as(identity_map(self.complexes[x])):
                out.append({"law": "system_identity", "object": x})
        return out


def complex_parallelize(x: IndComplex) -> IndSystem:
    """The levelwise system ``i -> X_i`` with transition chain maps."""
    probs = x.problems()
    if probs:
        raise ValueError(f"not an ind-complex: {probs[:3]}")
    idx = x.index
    cx = {}
    for i in idx.objects:
        mods = {d: x.module(d, i) for d in x.degrees()}
        ds = {d: x.diff(d, i) for d in x.degrees()}
        cx[i] = BoundedComplex(x.ring, mods, ds, name=f"{x.name}_{i}")
    maps = {}
    for m in idx.morphisms:
        maps[m.id] = ChainMap(cx[m.src], cx[m.tgt], {d: x.transition(d, m.id) for d in x.degrees()})
    sys = IndSystem(idx, cx, maps)
    bad = sys.problems()
    if bad:
        raise ValueError(f"parallelized system is not a functor: {bad[:3]}")
    return sys


def reassemble(sys: IndSystem, ring=None, name: str = "") -> IndComplex:
    idx = sys.index
    ring = ring or next(iter(sys.complexes.values())).ring
    degs = sorted({d for c in sys.complexes.values() for d in c.modules})
    modules = {d: {i: sys.complexes[i].module(d) for i in idx.objects} for d in degs}
    diffs = {d: {i: sys.complexes[i].d(d) for i in idx.objects} for d in degs}
    trans = {d: {m.id: sys.maps[m.id].at(d) for m in idx.morphisms} for d in degs}
    return IndComplex(idx, ring, modules, trans, diffs, name=name)


def uniform_bound(sys: IndSystem) -> dict:
    """Common support window of all levels and its width ``N``."""
    sup = [d for c in sys.complexes.values() for d in c.modules]
    if not sup:
        return {"lo": None, "hi": None, "N": 0}
    lo, hi = min(sup), max(sup)
    return {"lo": lo, "hi": hi, "N": hi - lo + 1}


# ---------------------------------------------------------------------------
# colimits


def _elements(m: FModule):
    r = m.ring
    ranges = [[a for a in r.elements() if r.reduce(a, e) == a] for e in m.exps]
    return [tuple(v) for v in product(*ranges)]


def colimit_module(x: IndComplex, d: int):
    """``colim_i X^d(i)`` as a cokernel, with the coordinate maps ``q_i``."""
    r, idx = x.ring, x.index
    offs, n = {}, 0
    for i in idx.objects:
        offs[i] = n
        n += x.module(d, i).rank
    rels = []
    for i in idx.objects:
        for v in x.module(d, i).relations():
            rels.append([0] * offs[i] + v + [0] * (n - offs[i] - len(v)))
    for m in idx.morphisms:
        a = x.transition(d, m.id)
        src = x.module(d, m.src)
        for j in range(src.rank):
            v = [0] * n
            v[offs[m.src] + j] = r.neg(1)
            for k in range(x.module(d, m.tgt).rank):
                v[offs[m.tgt] + k] = r.add(v[offs[m.tgt] + k], a[k][j])
            rels.append(v)
    basis = [[1 if s == t else 0 for s in range(n)] for t in range(n)]
    sq = subquotient(r, n, basis + rels, rels)
    return sq, offs


def colimit_complex(x: IndComplex) -> tuple[BoundedComplex, dict]:
    """``colim Z`` and the cocone chain maps ``q_i: Z_i -> colim Z``."""
    r = x.ring
    parts = {d: colimit_module(x, d) for d in x.degrees()}
    mods = {d: FModule(r, sq.exps) for d, (sq, _) in parts.items()}

    def q_matrix(d, i):
        sq, offs = parts[d]
        cols = []
        for j in range(x.module(d, i).rank):
            v = [0] * sq.n
            v[offs[i] + j] = 1
            cols.append(list(sq.coords(v)))
        return [list(row) for row in zip(*cols)] if cols else [[] for _ in sq.exps]

    ds = {}
    for d in x.degrees():
        if d + 1 not in parts:
            continue
        sq, offs = parts[d]
        sq1, offs1 = parts[d + 1]
        cols = []
        for rep in sq.reps:
            img = [0] * sq1.n
            for i in x.index.objects:
                a = x.diff(d, i)
                block = rep[offs[i]: offs[i] + x.module(d, i).rank]
                for k, val in enumerate(matvec(r, a, block)):
                    img[offs1[i] + k] = r.add(img[offs1[i] + k], val)
            cols.append(list(sq1.coords(img)))
        ds[d] = [list(row) for row in zip(*cols)] if cols else [[] for _ in sq1.exps]
    colim = BoundedComplex(r, mods, ds, name=f"colim {x.name}")
    qs = {}
    sys = complex_parallelize(x)
    for i in x.index.objects:
        mats = {d: reduce_matrix(x.module(d, i), mods[d], q_matrix(d, i)) for d in x.degrees() if mods[d].rank}
        qs[i] = ChainMap(sys.complexes[i], colim, mats)
    return colim, qs


def set_colimit_sizes(x: IndComplex, budget: Budget | None = None) -> dict:
    """Degree -> size of the colimit of the underlying sets (union-find)."""
    budget = ensure_budget(budget)
    out = {}
    r = x.ring
    for d in x.degrees():
        sets = {i: tuple(_elements(x.module(d, i))) for i in x.index.objects}
        maps = {}
        for m in x.index.morphisms:
            a = x.transition(d, m.id)
            tgt = x.module(d, m.tgt)
            maps[m.id] = {v: tuple(tgt.reduce_vec(matvec(r, a, list(v)))) for v in sets[m.src]}
        out[d] = len(set_colimit(SetDiagram(x.index, sets, maps), budget))
    return out


@dataclass
class HomComparison:
    ok: bool
    degree: int
    colim_of_hom: int
    hom_of_colim: int
    module_vs_sets: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "degree": self.degree,
            "colim_of_hom": self.colim_of_hom,
            "hom_of_colim": self.hom_of_colim,
            "module_vs_sets": self.module_vs_sets,
            "witnesses": self.witnesses,
        }


def hom_comparison(xc: BoundedComplex, z: IndComplex, n: int = 0, budget: Budget | None = None) -> HomComparison:
    """``colim_i Hom_K(X, Z_i[n])`` against ``Hom_K(X, (colim Z)[n])`` for constant ``X``."""
    budget = ensure_budget(budget)
    sys = complex_parallelize(z)
    idx = z.index
    groups = {i: homotopy_classes(xc, sys.complexes[i], n) for i in idx.objects}
    sets = {i: tuple(sorted(g.sq.elements())) for i, g in groups.items()}
    maps = {}
    for m in idx.morphisms:
        g, h = groups[m.src], groups[m.tgt]
        maps[m.id] = {c: h.coords(g.representative(c).then(sys.maps[m.id])) for c in sets[m.src]}
    colim = set_colimit(SetDiagram(idx, sets, maps), budget)
    cz, qs = colimit_complex(z)
    target = homotopy_classes(xc, cz, n)
    rep = HomComparison(False, n, len(colim), target.size)
    # canonical map: class of u at i -> q_i . u
    image = {}
    for (i, c) in colim.cocone:
        budget.tick("hom comparison")
        k = colim.cocone[(i, c)]
        v = target.coords(groups[i].representative(c).then(qs[i]))
        if image.setdefault(k, v) != v:
            rep.witnesses.append({"reason": "canonical map not well defined", "index": i, "class": list(c)})
    injective = len(set(image.values())) == len(image)
    surjective = len(set(image.values())) == target.size
    sizes = set_colimit_sizes(z, budget)
    rep.module_vs_sets = {str(d): [cz.module(d).size, s] for d, s in sizes.items()}
    agree = all(a == b for a, b in rep.module_vs_sets.values())
    if not agree:
        rep.witnesses.append({"reason": "module colimit differs from set colimit", "sizes": rep.module_vs_sets})
    if not (injective and surjective):
        rep.witnesses.append({"reason": "canonical map not bijective", "injective": injective, "surjective": surjective})
    rep.ok = not rep.witnesses
    return rep


# ---------------------------------------------------------------------------
# isomorphisms in ind(D^b) over indices with terminal objects


@dataclass
class SystemMorphism:
    """``components[i] = (j, chain map X_i -> Y_j)``."""

    source: IndSystem
    target: IndSystem
    components: dict


@dataclass
class HpReport:
    ok: bool
    terminal: tuple
    cone_acyclic: bool
    hp_iso: dict
    iso: bool
    inverse_verified: bool | None
    filtered: bool

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "terminal": list(self.terminal),
            "cone_acyclic": self.cone_acyclic,
            "hp_iso": {str(k): v for k, v in self.hp_iso.items()},
            "iso": self.iso,
            "inverse_verified": self.inverse_verified,
            "filtered": self.filtered,
        }


def constant_system(x: BoundedComplex) -> IndSystem:
    """``x`` over the one-object index."""
    idx = terminal_category()
    pt = idx.objects[0]
    return IndSystem(idx, {pt: x}, {idx.ident(pt): identity_map(x)})


def constant_morphism(f: ChainMap) -> SystemMorphism:
    s, t = constant_system(f.source), constant_system(f.target)
    return SystemMorphism(s, t, {s.index.objects[0]: (t.index.objects[0], f)})


def colimit_morphism(z: IndComplex) -> SystemMorphism:
    """The cocone ``Z_i -> colim Z`` as a morphism into a constant system."""
    sys = complex_parallelize(z)
    cz, qs = colimit_complex(z)
    t = constant_system(cz)
    pt = t.index.objects[0]
    return SystemMorphism(sys, t, {i: (pt, qs[i]) for i in z.index.objects})


def _unique(c: FiniteCategory, a: str, b: str) -> str:
    hs = c.hom(a, b)
    if len(hs) != 1:
        raise ValueError(f"expected a unique morphism {a} -> {b}")
    return hs[0]


def reduce_to_terminal(phi: SystemMorphism) -> ChainMap:
    """The component ``X_t -> Y_t'`` at the terminal objects."""
    s, t = phi.source, phi.target
    ts, tt = terminal_objects(s.index), terminal_objects(t.index)
    if not ts or not tt:
        raise ValueError("hp_probe needs terminal objects in both indices")
    j, f = phi.components[ts[0]]
    return f.then(t.maps[_unique(t.index, j, tt[0])])


def hp_iso_flags(f: ChainMap) -> dict:
    """Degree -> ``H^d(f)`` is bijective (by element enumeration)."""
    x, y = f.source, f.target
    degs = sorted(set(x.modules) | set(y.modules))
    out = {}
    for d in degs:
        a, b = cohomology_at(x, d), cohomology_at(y, d)
        if a.size != b.size:
            out[d] = False
            continue
        img = {b.coords(matvec(f.ring, f.at(d), a.element(c))) for c in a.elements()}
        out[d] = len(img) == b.size
    return out


def derived_inverse(f: ChainMap, budget: Budget | None = None) -> tuple[ChainMap, ChainMap] | None:
    """A roof ``Y -psi-> I(X) <-iota- X`` inverting ``f`` in ``D^b``, verified both ways."""
    budget = ensure_budget(budget)
    x, y = f.source, f.target
    top = max([c.hi for c in (x, y) if c.modules], default=0) + 3
    ix, iy = injective_resolution(x, top), injective_resolution(y, top)
    psi, fail = solve_map(MapProblem(y, ix.complex, [(None, f, ix.qis)]), budget)
    if psi is None:
        return None
    lift, fail = solve_map(MapProblem(ix.complex, iy.complex, [(None, ix.qis, f.then(iy.qis))]), budget)
    if lift is None or not homotopic(psi.then(lift), iy.qis):
        return None
    return psi, ix.qis


def hp_probe(phi: SystemMorphism, budget: Budget | None = None) -> HpReport:
    budget = ensure_budget(budget)
    f = reduce_to_terminal(phi)
    acyclic = cone(f).is_acyclic()
    flags = hp_iso_flags(f)
    all_hp = all(flags.values())
    inv = derived_inverse(f, budget) if acyclic else None
    filtered = classify_filtered(phi.source.index).filtrant and classify_filtered(phi.target.index).filtrant
    ts = (terminal_objects(phi.source.index)[0], terminal_objects(phi.target.index)[0])
    ok = (acyclic == all_hp) and (not acyclic or inv is not None)
    return HpReport(ok, ts, acyclic, flags, acyclic, (inv is not None) if acyclic else None, filtered)
