"""Finite categories given by composition tables, and Set-valued diagrams on them.

Everything here is immutable after construction. Ids are strings; derived
categories (opposites, products, coslices, ...) build new ids with
:func:`enc` and remember what each id stands for in ``labels``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import Budget, ensure_budget
from .unionfind import UnionFind

TIEBREAKS = ("normal", "reversed")


def enc(*parts: str) -> str:
    """Build a composite id such as ``<a|b>``."""
    return "<" + "|".join(parts) + ">"


def pick(candidates: Iterable, tiebreak: str = "normal"):
    """Deterministic choice: least candidate, or greatest when reversed."""
    cands = list(candidates)
    if not cands:
        return None
    if tiebreak not in TIEBREAKS:
        raise ValueError(f"unknown tie-break {tiebreak!r}")
    return min(cands) if tiebreak == "normal" else max(cands)


@dataclass(frozen=True)
class Morphism:
    id: str
    src: str
    tgt: str


class FiniteCategory:
    """A category with finitely many objects and morphisms.

    ``compose[(g, f)]`` is ``g . f`` (``f`` first). The constructor does not
    check the category laws; :func:`validate_structure` does.
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Iterable[Morphism | tuple[str, str, str]],
        identities: Mapping[str, str],
        compose: Mapping[tuple[str, str], str],
        name: str = "",
        labels: Mapping[str, Any] | None = None,
        fill_identity_laws: bool = False,
    ):
        self.name = name
        self.objects: tuple[str, ...] = tuple(sorted(set(objects)))
        mors = [m if isinstance(m, Morphism) else Morphism(*m) for m in morphisms]
        self.morphisms: tuple[Morphism, ...] = tuple(sorted(mors, key=lambda m: m.id))
        self._mor = {m.id: m for m in self.morphisms}
        self.identities: dict[str, str] = dict(sorted(identities.items()))
        table = dict(compose)
        if fill_identity_laws:
            for m in self.morphisms:
                i_t = self.identities.get(m.tgt)
                i_s = self.identities.get(m.src)
                if i_t is not None:
                    table.setdefault((i_t, m.id), m.id)
                if i_s is not None:
                    table.setdefault((m.id, i_s), m.id)
        self.compose_table: dict[tuple[str, str], str] = dict(sorted(table.items()))
        self.labels: dict[str, Any] = dict(labels or {})
        self._hom: dict[tuple[str, str], tuple[str, ...]] = {}
        for m in self.morphisms:
            self._hom.setdefault((m.src, m.tgt), ())
            self._hom[(m.src, m.tgt)] += (m.id,)
        self._key = None
        self._op = None

    # -- basic access -------------------------------------------------
    def mor(self, f: str) -> Morphism:
        return self._mor[f]

    def has_morphism(self, f: str) -> bool:
        return f in self._mor

    def src(self, f: str) -> str:
        return self._mor[f].src

    def tgt(self, f: str) -> str:
        return self._mor[f].tgt

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        return self._hom.get((x, y), ())

    def ident(self, x: str) -> str:
        return self.identities[x]

    def comp(self, g: str, f: str) -> str:
        """``g . f``; raises KeyError when the pair is not in the table."""
        return self.compose_table[(g, f)]

    def comp_chain(self, *fs: str) -> str:
        """``comp_chain(h, g, f) == h . g . f``."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.comp(g, out)
        return out

    def is_identity(self, f: str) -> bool:
        m = self._mor[f]
        return self.identities.get(m.src) == f

    def out_of(self, x: str) -> list[str]:
        return [m.id for m in self.morphisms if m.src == x]

    def into(self, x: str) -> list[str]:
        return [m.id for m in self.morphisms if m.tgt == x]

    def inverses(self, f: str) -> list[str]:
        m = self._mor[f]
        return [
            g
            for g in self.hom(m.tgt, m.src)
            if self.compose_table.get((g, f)) == self.identities.get(m.src)
            and self.compose_table.get((f, g)) == self.identities.get(m.tgt)
        ]

    def is_iso(self, f: str) -> bool:
        return bool(self.inverses(f))

    def is_mono(self, f: str) -> bool:
        m = self._mor[f]
        for w in self.objects:
            seen = {}
            for a in self.hom(w, m.src):
                fa = self.compose_table[(f, a)]
                if fa in seen:
                    return False
                seen[fa] = a
        return True

    def isomorphic_objects(self, x: str) -> list[str]:
        return [y for y in self.objects if any(self.is_iso(f) for f in self.hom(x, y))]

    # -- equality as tables ---------------------------------------------
    def tables(self):
        if self._key is None:
            self._key = (
                self.objects,
                tuple((m.id, m.src, m.tgt) for m in self.morphisms),
                tuple(self.identities.items()),
                tuple(self.compose_table.items()),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, FiniteCategory) and self.tables() == other.tables()

    def __hash__(self):
        return hash(self.tables())

    def __repr__(self):
        return f"FiniteCategory({self.name!r}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    # -- constructions ------------------------------------------------
    def opposite(self) -> "FiniteCategory":
        if self._op is not None:
            return self._op
        name = self.name[:-3] if self.name.endswith("^op") else self.name + "^op"
        op = FiniteCategory(
            self.objects,
            [Morphism(m.id, m.tgt, m.src) for m in self.morphisms],
            self.identities,
            {(f, g): gf for (g, f), gf in self.compose_table.items()},
            name=name,
            labels=self.labels,
        )
        op._op = self
        self._op = op
        return op

    def relabel(self, obj_map: Mapping[str, str], mor_map: Mapping[str, str]) -> "FiniteCategory":
        return FiniteCategory(
            [obj_map[x] for x in self.objects],
            [Morphism(mor_map[m.id], obj_map[m.src], obj_map[m.tgt]) for m in self.morphisms],
            {obj_map[x]: mor_map[i] for x, i in self.identities.items()},
            {(mor_map[g], mor_map[f]): mor_map[gf] for (g, f), gf in self.compose_table.items()},
            name=self.name,
        )


def terminal_category(name: str = "pt", obj: str = "*") -> FiniteCategory:
    ident = enc("id", obj)
    return FiniteCategory([obj], [Morphism(ident, obj, obj)], {obj: ident}, {(ident, ident): ident}, name=name)


def poset_category(elements: Sequence[str], leq: Iterable[tuple[str, str]], name: str = "") -> FiniteCategory:
    """Category of a finite preorder; ``leq`` is closed reflexively and transitively."""
    rel = {(x, x) for x in elements} | set(leq)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    mid = {(a, b): (f"id_{a}" if a == b else f"{a}<{b}") for a, b in rel}
    comp = {}
    for (a, b), (c, d) in product(rel, rel):
        if b == c:
            comp[(mid[(c, d)], mid[(a, b)])] = mid[(a, d)]
    return FiniteCategory(
        elements,
        [Morphism(mid[r], r[0], r[1]) for r in rel],
        {x: mid[(x, x)] for x in elements},
        comp,
        name=name,
    )


def product_category(c: FiniteCategory, d: FiniteCategory, name: str = "") -> FiniteCategory:
    objs = [enc(x, y) for x in c.objects for y in d.objects]
    mors, labels = [], {}
    for x in c.objects:
        for y in d.objects:
            labels[enc(x, y)] = (x, y)
    for f in c.morphisms:
        for g in d.morphisms:
            mid = enc(f.id, g.id)
            mors.append(Morphism(mid, enc(f.src, g.src), enc(f.tgt, g.tgt)))
            labels[mid] = (f.id, g.id)
    comp = {}
    for (f2, f1), f in c.compose_table.items():
        for (g2, g1), g in d.compose_table.items():
            comp[(enc(f2, g2), enc(f1, g1))] = enc(f, g)
    idents = {enc(x, y): enc(c.ident(x), d.ident(y)) for x in c.objects for y in d.objects}
    return FiniteCategory(objs, mors, idents, comp, name=name or f"{c.name}x{d.name}", labels=labels)


# ---------------------------------------------------------------------------
# functors


@dataclass(frozen=True, eq=False)
class Functor:
    source: FiniteCategory
    target: FiniteCategory
    obj_map: Mapping[str, str]
    mor_map: Mapping[str, str]
    name: str = ""

    def ob(self, x: str) -> str:
        return self.obj_map[x]

    def mor(self, f: str) -> str:
        return self.mor_map[f]

    def then(self, other: "Functor", name: str = "") -> "Functor":
        """``other . self``."""
        return Functor(
            self.source,
            other.target,
            {x: other.ob(y) for x, y in self.obj_map.items()},
            {f: other.mor(g) for f, g in self.mor_map.items()},
            name=name or f"{other.name}.{self.name}",
        )

    def opposite(self) -> "Functor":
        return Functor(self.source.opposite(), self.target.opposite(), self.obj_map, self.mor_map, self.name)


def identity_functor(c: FiniteCategory, name: str = "id") -> Functor:
    return Functor(c, c, {x: x for x in c.objects}, {m.id: m.id for m in c.morphisms}, name)


def constant_functor(i: FiniteCategory, c: FiniteCategory, x: str, name: str = "") -> Functor:
    return Functor(i, c, {o: x for o in i.objects}, {m.id: c.ident(x) for m in i.morphisms}, name)


@dataclass(frozen=True, eq=False)
class Diagram:
    """A diagram ``body: index -> target``."""

    index: FiniteCategory
    body: Functor


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    structural: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.structural and not self.violations

    def as_dict(self) -> dict:
        return {"valid": self.valid, "structural": self.structural, "violations": self.violations}


def _category_problems(c: FiniteCategory, rep: ValidationReport, where: str) -> None:
    for x in c.objects:
        i = c.identities.get(x)
        if i is None:
            rep.structural.append({"where": where, "kind": "missing_identity", "object": x})
        elif not c.has_morphism(i):
            rep.structural.append({"where": where, "kind": "dangling_identity", "object": x, "morphism": i})
        elif c.src(i) != x or c.tgt(i) != x:
            rep.structural.append({"where": where, "kind": "identity_not_endo", "object": x, "morphism": i})
    for m in c.morphisms:
        for end in (m.src, m.tgt):
            if end not in c.objects:
                rep.structural.append({"where": where, "kind": "dangling_object", "morphism": m.id, "object": end})
    for (g, f), gf in c.compose_table.items():
        for mid in (g, f, gf):
            if not c.has_morphism(mid):
                rep.structural.append({"where": where, "kind": "dangling_morphism", "entry": [g, f], "morphism": mid})
    if rep.structural:
        return
    for f in c.morphisms:
        for g in c.out_of(f.tgt):
            gf = c.compose_table.get((g, f.id))
            if gf is None:
                rep.violations.append({"where": where, "law": "total", "pair": [g, f.id]})
            elif c.src(gf) != f.src or c.tgt(gf) != c.tgt(g):
                rep.violations.append({"where": where, "law": "typing", "pair": [g, f.id], "value": gf})
    for (g, f) in c.compose_table:
        if c.src(g) != c.tgt(f):
            rep.violations.append({"where": where, "law": "defined_on_noncomposable", "pair": [g, f]})
    if rep.violations:
        return
    for m in c.morphisms:
        it, is_ = c.ident(m.tgt), c.ident(m.src)
        if c.comp(it, m.id) != m.id:
            rep.violations.append({"where": where, "law": "left_identity", "pair": [it, m.id]})
        if c.comp(m.id, is_) != m.id:
            rep.violations.append({"where": where, "law": "right_identity", "pair": [m.id, is_]})
    for f in c.morphisms:
        for g in c.out_of(f.tgt):
            for h in c.out_of(c.tgt(g)):
                lhs = c.comp(h, c.comp(g, f.id))
                rhs = c.comp(c.comp(h, g), f.id)
                if lhs != rhs:
                    rep.violations.append({"where": where, "law": "associativity", "triple": [h, g, f.id]})


def _functor_problems(fn: Functor, rep: ValidationReport, where: str) -> None:
    s, t = fn.source, fn.target
    for x in s.objects:
        if x not in fn.obj_map:
            rep.structural.append({"where": where, "kind": "unmapped_object", "object": x})
        elif fn.obj_map[x] not in t.objects:
            rep.structural.append({"where": where, "kind": "dangling_object", "object": fn.obj_map[x]})
    for m in s.morphisms:
        if m.id not in fn.mor_map:
            rep.structural.append({"where": where, "kind": "unmapped_morphism", "morphism": m.id})
        elif not t.has_morphism(fn.mor_map[m.id]):
            rep.structural.append({"where": where, "kind": "dangling_morphism", "morphism": fn.mor_map[m.id]})
    if rep.structural:
        return
    for m in s.morphisms:
        fm = fn.mor(m.id)
        if t.src(fm) != fn.ob(m.src) or t.tgt(fm) != fn.ob(m.tgt):
            rep.violations.append({"where": where, "law": "functor_typing", "morphism": m.id})
    for x in s.objects:
        if fn.mor(s.ident(x)) != t.ident(fn.ob(x)):
            rep.violations.append({"where": where, "law": "functor_identity", "object": x})
    for (g, f), gf in s.compose_table.items():
        lhs = t.compose_table.get((fn.mor(g), fn.mor(f)))
        if lhs != fn.mor(gf):
            rep.violations.append({"where": where, "law": "functor_composition", "pair": [g, f]})


def validate_structure(c: FiniteCategory, functors: Sequence[Functor] = ()) -> ValidationReport:
    """Scan the tables; report every violated law with witnessing ids."""
    rep = ValidationReport()
    _category_problems(c, rep, c.name or "category")
    for k, fn in enumerate(functors):
        sub = ValidationReport()
        _category_problems(fn.source, sub, f"functor[{k}].source")
        if fn.target is not c:
            _category_problems(fn.target, sub, f"functor[{k}].target")
        if sub.valid:
            _functor_problems(fn, sub, f"functor[{k}]:{fn.name}")
        rep.structural += sub.structural
        rep.violations += sub.violations
    return rep


# ---------------------------------------------------------------------------
# filteredness


@dataclass
class FilteredReport:
    nonempty: bool
    connected: bool
    pf1: bool
    pf2: bool
    c_prime: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def filtrant(self) -> bool:
        return self.nonempty and self.connected and self.pf1 and self.pf2

    @property
    def filtrant_via_c_prime(self) -> bool:
        return self.nonempty and self.pf2 and self.c_prime

    def as_dict(self) -> dict:
        return {
            "nonempty": self.nonempty,
            "connected": self.connected,
            "PF1": self.pf1,
            "PF2": self.pf2,
            "C_prime": self.c_prime,
            "filtrant": self.filtrant,
            "filtrant_via_C_prime": self.filtrant_via_c_prime,
            "witnesses": self.witnesses,
        }


def _components(c: FiniteCategory) -> list[set[str]]:
    uf = UnionFind(c.objects)
    for m in c.morphisms:
        uf.union(m.src, m.tgt)
    groups: dict[str, set[str]] = {}
    for x in c.objects:
        groups.setdefault(uf.find(x), set()).add(x)
    return sorted(groups.values(), key=min)


def classify_filtered(i: FiniteCategory) -> FilteredReport:
    wit: dict = {}
    nonempty = bool(i.objects)
    comps = _components(i)
    connected = len(comps) == 1
    if not connected and nonempty:
        wit["disconnected"] = [min(comps[0]), min(comps[1])]

    pf1 = True
    for a in i.morphisms:
        for b in i.out_of(a.src):
            if b < a.id:
                continue
            ok = any(
                i.comp(p, a.id) == i.comp(q, b)
                for k in i.objects
                for p in i.hom(a.tgt, k)
                for q in i.hom(i.tgt(b), k)
            )
            if not ok:
                pf1 = False
                wit.setdefault("PF1", [a.id, b])
    pf2 = True
    for x in i.objects:
        for y in i.objects:
            hs = i.hom(x, y)
            for a in hs:
                for b in hs:
                    if b <= a:
                        continue
                    ok = any(i.comp(h, a) == i.comp(h, b) for h in i.out_of(y))
                    if not ok:
                        pf2 = False
                        wit.setdefault("PF2", [a, b])
    c_prime = True
    for x in i.objects:
        for y in i.objects:
            if not any(i.hom(x, k) and i.hom(y, k) for k in i.objects):
                c_prime = False
                wit.setdefault("C_prime", [x, y])
    return FilteredReport(nonempty, connected, pf1, pf2, c_prime, wit)


def terminal_objects(c: FiniteCategory) -> list[str]:
    return [t for t in c.objects if all(len(c.hom(x, t)) == 1 for x in c.objects)]


def is_cofinal(p: Functor) -> tuple[bool, dict]:
    """Finite cofinality: every comma category ``i/p`` is nonempty and connected."""
    phi, idx = p.source, p.target
    for i in idx.objects:
        objs = [(x, a) for x in phi.objects for a in idx.hom(i, p.ob(x))]
        if not objs:
            return False, {"empty_comma": i}
        uf = UnionFind(objs)
        for m in phi.morphisms:
            for a in idx.hom(i, p.ob(m.src)):
                uf.union((m.src, a), (m.tgt, idx.comp(p.mor(m.id), a)))
        roots = {uf.find(o) for o in objs}
        if len(roots) > 1:
            return False, {"disconnected_comma": i}
    return True, {}


# ---------------------------------------------------------------------------
# coslices


def coslice_category(
    c: FiniteCategory, members: Iterable[str], x: str, orientation: str = "under"
) -> tuple[FiniteCategory, Functor]:
    """``x/S`` (``orientation='under'``) or ``S/x`` (``'over'``) with its projection to ``c``.

    Objects of ``x/S`` are the members with source ``x``; a morphism
    ``s -> s'`` is an ``a`` in ``c`` with ``a . s = s'``. Dually for ``S/x``.
    """
    mem = set(members)
    if orientation == "under":
        objs = sorted(s for s in mem if c.has_morphism(s) and c.src(s) == x)
        end = c.tgt
    elif orientation == "over":
        objs = sorted(s for s in mem if c.has_morphism(s) and c.tgt(s) == x)
        end = c.src
    else:
        raise ValueError(orientation)
    mors, labels, proj_m = [], {}, {}
    for s in objs:
        for s2 in objs:
            for a in c.hom(end(s), end(s2)):
                ok = c.comp(a, s) == s2 if orientation == "under" else c.comp(s2, a) == s
                if ok:
                    mid = enc(a, s, s2)
                    mors.append(Morphism(mid, s, s2))
                    labels[mid] = a
                    proj_m[mid] = a
    idents = {s: enc(c.ident(end(s)), s, s) for s in objs}
    comp = {}
    for m1 in mors:
        for m2 in mors:
            if m1.tgt == m2.src:
                comp[(m2.id, m1.id)] = enc(c.comp(labels[m2.id], labels[m1.id]), m1.src, m2.tgt)
    sym = f"{x}/S" if orientation == "under" else f"S/{x}"
    cat = FiniteCategory(objs, mors, idents, comp, name=sym, labels=labels)
    proj = Functor(cat, c, {s: end(s) for s in objs}, proj_m, name=f"proj_{sym}")
    return cat, proj


# ---------------------------------------------------------------------------
# Set-valued diagrams


@dataclass(frozen=True, eq=False)
class SetDiagram:
    """``sets[obj]`` is a tuple of tokens, ``maps[mor]`` a dict token -> token."""

    index: FiniteCategory
    sets: Mapping[str, tuple]
    maps: Mapping[str, Mapping]

    def problems(self) -> list[dict]:
        out = []
        i = self.index
        for m in i.morphisms:
            tab = self.maps.get(m.id, {})
            for t in self.sets[m.src]:
                if tab.get(t) not in set(self.sets[m.tgt]):
                    out.append({"law": "map_total", "morphism": m.id, "token": t})
        if out:
            return out
        for (g, f), gf in i.compose_table.items():
            for t in self.sets[i.src(f)]:
                if self.maps[g][self.maps[f][t]] != self.maps[gf][t]:
                    out.append({"law": "map_composition", "pair": [g, f], "token": t})
        for x in i.objects:
            for t in self.sets[x]:
                if self.maps[i.ident(x)][t] != t:
                    out.append({"law": "map_identity", "object": x, "token": t})
        return out


def diagram_from(index: FiniteCategory, set_of: Callable[[str], Iterable], act: Callable[[str, Any], Any]) -> SetDiagram:
    sets = {x: tuple(sorted(set_of(x))) for x in index.objects}
    maps = {m.id: {t: act(m.id, t) for t in sets[m.src]} for m in index.morphisms}
    return SetDiagram(index, sets, maps)


@dataclass(frozen=True)
class Colimit:
    elements: tuple          # canonical (obj, token) pairs, sorted
    cocone: Mapping          # (obj, token) -> canonical element

    def cls(self, obj: str, token) -> tuple:
        return self.cocone[(obj, token)]

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class Limit:
    objects: tuple           # index objects, in order
    elements: tuple          # tuples of tokens aligned with ``objects``
    cone: Mapping            # obj -> {element: token}

    def __len__(self):
        return len(self.elements)


def set_colimit(d: SetDiagram, budget: Budget | None = None) -> Colimit:
    """Disjoint union modulo the identifications made by every map (union-find)."""
    budget = ensure_budget(budget)
    keys = [(x, t) for x in d.index.objects for t in d.sets[x]]
    uf = UnionFind(keys)
    for m in d.index.morphisms:
        for t, u in d.maps[m.id].items():
            budget.tick("colimit")
            uf.union((m.src, t), (m.tgt, u))
    cocone = {k: uf.find(k) for k in keys}
    return Colimit(tuple(sorted(set(cocone.values()))), cocone)


def set_limit(d: SetDiagram, budget: Budget | None = None) -> Limit:
    """Compatible families in the product, found by backtracking with forcing."""
    budget = ensure_budget(budget)
    i = d.index
    objs = i.objects
    pos = {x: k for k, x in enumerate(objs)}
    incoming = {x: [m for m in i.morphisms if m.tgt == x and pos[m.src] < pos[x]] for x in objs}
    checks = {x: [m for m in i.morphisms if max(pos[m.src], pos[m.tgt]) == pos[x]] for x in objs}
    found = []

    def rec(k: int, acc: list):
        if k == len(objs):
            found.append(tuple(acc))
            return
        x = objs[k]
        forced = {d.maps[m.id][acc[pos[m.src]]] for m in incoming[x]}
        if len(forced) > 1:
            return
        cands = list(forced) if forced else list(d.sets[x])
        for t in cands:
            budget.tick("limit")
            acc.append(t)
            if all(d.maps[m.id][acc[pos[m.src]]] == acc[pos[m.tgt]] for m in checks[x]):
                rec(k + 1, acc)
            acc.pop()

    rec(0, [])
    elements = tuple(sorted(found))
    cone = {x: {e: e[pos[x]] for e in elements} for x in objs}
    return Limit(objs, elements, cone)


def set_colimit_limit(d: SetDiagram, mode: str = "colimit", budget: Budget | None = None):
    if mode == "colimit":
        return set_colimit(d, budget)
    if mode == "limit":
        return set_limit(d, budget)
    raise ValueError(mode)
