"""Multiplicative systems on finite categories and localization by fractions.

Conventions (``t . f`` means ``f`` first):

* right (S3): given ``f: X -> Y`` and ``s: X -> X'`` in S there are
  ``t: Y -> Y'`` in S and ``g: X' -> Y'`` with ``t . f == g . s``;
* right (S4): if ``f . s == g . s`` for some ``s`` in S then ``t . f == t . g``
  for some ``t`` in S;
* left versions are the same statements in the opposite category.

With these, a right system has ``Hom_S(X, Y) = colim_{t in Y/S} Hom(X, tgt t)``
and a left system has ``Hom_S(X, Y) = colim_{s in (S/X)^op} Hom(src s, Y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .errors import Budget, BudgetExhausted, FormulaUnsupported, InternalInconsistency, SideUnsupported, ensure_budget
from .fincat import (
    Colimit,
    FiniteCategory,
    Functor,
    Morphism,
    SetDiagram,
    coslice_category,
    enc,
    pick,
    product_category,
    set_colimit,
    validate_structure,
)

SIDES = ("right", "left", "bilateral")
DEFAULT_MATERIALIZE_BOUND = 10_000


@dataclass(frozen=True, eq=False)
class MorphismClass:
    category: FiniteCategory
    members: frozenset
    side: str = "bilateral"
    name: str = "S"

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"unknown side {self.side!r}")
        object.__setattr__(self, "members", frozenset(self.members))

    def __contains__(self, f: str) -> bool:
        return f in self.members

    def sorted_members(self) -> list[str]:
        return sorted(self.members)

    def allows(self, side: str) -> bool:
        return self.side == "bilateral" or self.side == side

    def opposite(self) -> "MorphismClass":
        flip = {"right": "left", "left": "right", "bilateral": "bilateral"}[self.side]
        return MorphismClass(self.category.opposite(), self.members, flip, self.name + "^op")

    @classmethod
    def identities(cls, c: FiniteCategory, side: str = "bilateral", name: str = "ids") -> "MorphismClass":
        return cls(c, frozenset(c.identities.values()), side, name)

    @classmethod
    def isomorphisms(cls, c: FiniteCategory, side: str = "bilateral", name: str = "isos") -> "MorphismClass":
        return cls(c, frozenset(m.id for m in c.morphisms if c.is_iso(m.id)), side, name)

    @classmethod
    def generated(cls, c: FiniteCategory, gens: Iterable[str], side: str = "bilateral", name: str = "S") -> "MorphismClass":
        """Identities plus ``gens``, closed under composition."""
        mem = set(c.identities.values()) | set(gens)
        changed = True
        while changed:
            changed = False
            for g, f in list(product(mem, mem)):
                gf = c.compose_table.get((g, f))
                if gf is not None and gf not in mem:
                    mem.add(gf)
                    changed = True
        return cls(c, frozenset(mem), side, name)


# ---------------------------------------------------------------------------
# axioms


FLAG_ORDER = (
    "S1",
    "S2",
    "right_S3",
    "left_S3",
    "right_S4",
    "left_S4",
    "right_quasi_saturated",
    "left_quasi_saturated",
    "saturated",
)


@dataclass
class SystemReport:
    flags: dict
    witnesses: dict = field(default_factory=dict)

    def holds(self, *names: str) -> bool:
        return all(self.flags[n] for n in names)

    @property
    def right_system(self) -> bool:
        return self.holds("S1", "S2", "right_S3", "right_S4")

    @property
    def left_system(self) -> bool:
        return self.holds("S1", "S2", "left_S3", "left_S4")

    def failures_for(self, side: str) -> list[str]:
        need = {"right": ["S1", "S2", "right_S3", "right_S4"], "left": ["S1", "S2", "left_S3", "left_S4"]}
        if side == "bilateral":
            names = need["right"] + need["left"][2:]
        else:
            names = need[side]
        return [n for n in names if not self.flags[n]]

    def quasi_saturated(self, side: str) -> bool:
        if side == "bilateral":
            return self.holds("right_quasi_saturated", "left_quasi_saturated")
        return self.flags[f"{side}_quasi_saturated"]

    def as_dict(self) -> dict:
        return {
            "flags": {k: self.flags[k] for k in FLAG_ORDER},
            "right_system": self.right_system,
            "left_system": self.left_system,
            "witnesses": {k: v for k, v in sorted(self.witnesses.items())},
        }


def _s3_right(c: FiniteCategory, mem, f: str, s: str) -> list[tuple[str, str]]:
    """All completions ``(t, g)`` with ``t . f == g . s``, ``t`` in S."""
    out = []
    y, x2 = c.tgt(f), c.tgt(s)
    for t in c.out_of(y):
        if t not in mem:
            continue
        tf = c.comp(t, f)
        for g in c.hom(x2, c.tgt(t)):
            if c.comp(g, s) == tf:
                out.append((t, g))
    return out


def _check_s3(c: FiniteCategory, mem) -> list[str] | None:
    for s in sorted(mem):
        for f in c.out_of(c.src(s)):
            if not _s3_right(c, mem, f, s):
                return [f, s]
    return None


def _check_s4(c: FiniteCategory, mem) -> list[str] | None:
    for x in c.objects:
        for y in c.objects:
            hs = c.hom(x, y)
            for f in hs:
                for g in hs:
                    if g <= f:
                        continue
                    pre = [s for s in c.into(x) if s in mem and c.comp(f, s) == c.comp(g, s)]
                    if not pre:
                        continue
                    if not any(t in mem and c.comp(t, f) == c.comp(t, g) for t in c.out_of(y)):
                        return [f, g, pre[0]]
    return None


def validate_mult_system(s: MorphismClass) -> SystemReport:
    c = s.category
    mem = s.members
    flags, wit = {}, {}
    missing = [c.ident(x) for x in c.objects if c.ident(x) not in mem]
    flags["S1"] = not missing
    if missing:
        wit["S1"] = missing[:1]
    bad = None
    for a in sorted(mem):
        for b in sorted(mem):
            ab = c.compose_table.get((a, b))
            if ab is not None and ab not in mem:
                bad = [a, b]
                break
        if bad:
            break
    flags["S2"] = bad is None
    if bad:
        wit["S2"] = bad
    op = c.opposite()
    for side, cat in (("right", c), ("left", op)):
        w = _check_s3(cat, mem)
        flags[f"{side}_S3"] = w is None
        if w:
            wit[f"{side}_S3"] = w
        w = _check_s4(cat, mem)
        flags[f"{side}_S4"] = w is None
        if w:
            wit[f"{side}_S4"] = w
    # right: g.f in S and f in S => g in S; left: g.f in S and g in S => f in S
    rq = lq = None
    for (g, f), gf in c.compose_table.items():
        if gf in mem and f in mem and g not in mem and rq is None:
            rq = [g, f]
        if gf in mem and g in mem and f not in mem and lq is None:
            lq = [g, f]
    flags["right_quasi_saturated"] = rq is None
    flags["left_quasi_saturated"] = lq is None
    if rq:
        wit["right_quasi_saturated"] = rq
    if lq:
        wit["left_quasi_saturated"] = lq
    sat = None
    for f in c.morphisms:
        if f.id in mem:
            continue
        post = any(c.comp(g, f.id) in mem for g in c.out_of(f.tgt))
        pre = any(c.comp(f.id, h) in mem for h in c.into(f.src))
        if post and pre:
            sat = [f.id]
            break
    flags["saturated"] = sat is None
    if sat:
        wit["saturated"] = sat
    return SystemReport(flags, wit)


def require_side(s: MorphismClass, side: str, report: SystemReport | None = None) -> SystemReport:
    """Raise unless ``s`` is declared for ``side`` and satisfies its axioms."""
    if not s.allows(side) and not (side == "bilateral" and s.side == "bilateral"):
        raise SideUnsupported(side, [f"declared side is {s.side}"])
    rep = report or validate_mult_system(s)
    failed = rep.failures_for(side)
    if failed:
        raise FormulaUnsupported(side, failed)
    return rep


# ---------------------------------------------------------------------------
# Hom sets by colimits


@dataclass(frozen=True)
class FractionClass:
    """A morphism ``x -> y`` of the localization, named by its least roof.

    Right roofs are ``(t, g)`` with ``t: y -> y'`` in S and ``g: x -> y'``;
    left roofs are ``(s, g)`` with ``s: x' -> x`` in S and ``g: x' -> y``.
    """

    side: str
    x: str
    y: str
    rep: tuple

    @property
    def token(self) -> str:
        return enc(*self.rep)


@dataclass(frozen=True)
class LocalHom:
    side: str
    x: str
    y: str
    colimit: Colimit
    index: FiniteCategory

    def classes(self) -> list[FractionClass]:
        return [FractionClass(self.side, self.x, self.y, self._rep(e)) for e in self.colimit.elements]

    def _rep(self, element):
        obj, tok = element
        if self.side == "bilateral":
            s, t = self.index.labels[obj]
            return (s, t, tok)
        return (obj, tok)

    def class_of(self, obj: str, token: str) -> FractionClass:
        return FractionClass(self.side, self.x, self.y, self._rep(self.colimit.cls(obj, token)))

    def __len__(self):
        return len(self.colimit)


def right_hom_diagram(c: FiniteCategory, mem, x: str, y: str) -> SetDiagram:
    idx, _ = coslice_category(c, mem, y, "under")
    sets = {t: c.hom(x, c.tgt(t)) for t in idx.objects}
    maps = {m.id: {g: c.comp(idx.labels[m.id], g) for g in sets[m.src]} for m in idx.morphisms}
    return SetDiagram(idx, sets, maps)


def left_hom_diagram(c: FiniteCategory, mem, x: str, y: str) -> SetDiagram:
    over, _ = coslice_category(c, mem, x, "over")
    idx = over.opposite()
    sets = {s: c.hom(c.src(s), y) for s in idx.objects}
    # in idx a morphism a: s' -> s (i.e. s' . a == s in c) pulls h back to h . a
    maps = {m.id: {h: c.comp(h, idx.labels[m.id]) for h in sets[m.src]} for m in idx.morphisms}
    return SetDiagram(idx, sets, maps)


def bilateral_hom_diagram(c: FiniteCategory, mem, x: str, y: str) -> SetDiagram:
    over, _ = coslice_category(c, mem, x, "over")
    under, _ = coslice_category(c, mem, y, "under")
    idx = product_category(over.opposite(), under)
    sets, maps = {}, {}
    for o in idx.objects:
        s, t = idx.labels[o]
        sets[o] = c.hom(c.src(s), c.tgt(t))
    for m in idx.morphisms:
        ma, mb = idx.labels[m.id]
        a, b = over.labels[ma], under.labels[mb]
        maps[m.id] = {h: c.comp_chain(b, h, a) for h in sets[m.src]}
    # product labels for objects hold coslice object ids, i.e. the S-arrows themselves
    return SetDiagram(idx, sets, maps)


def localized_hom(
    s: MorphismClass,
    x: str,
    y: str,
    formula: str = "right",
    report: SystemReport | None = None,
    budget: Budget | None = None,
) -> LocalHom:
    if formula not in SIDES:
        raise ValueError(formula)
    require_side(s, formula, report)
    c = s.category
    build = {"right": right_hom_diagram, "left": left_hom_diagram, "bilateral": bilateral_hom_diagram}[formula]
    d = build(c, s.members, x, y)
    return LocalHom(formula, x, y, set_colimit(d, budget), d.index)


# ---------------------------------------------------------------------------
# materialization


@dataclass(frozen=True, eq=False)
class LocalizedCategory:
    system: MorphismClass
    side: str
    category: FiniteCategory
    Q: Functor
    homs: dict                       # (x, y) -> LocalHom
    tiebreak: str = "normal"

    def roof_of(self, mid: str) -> tuple:
        return self.category.labels[mid]


def _compose_right(c, mem, r1, r2, tiebreak):
    """Compose right roofs ``r2 . r1``: r1 = (t1, g1): X -> Y, r2 = (t2, g2): Y -> Z."""
    t1, g1 = r1
    t2, g2 = r2
    comps = _s3_right(c, mem, g2, t1)
    if not comps:
        return None
    t3, h = pick(comps, tiebreak)
    return (c.comp(t3, t2), c.comp(h, g1))


def _materialize_right(s: MorphismClass, bound: int, tiebreak: str, verify: bool, budget: Budget) -> LocalizedCategory:
    c, mem = s.category, s.members
    homs = {}
    total = 0
    for x in c.objects:
        for y in c.objects:
            h = LocalHom("right", x, y, set_colimit(right_hom_diagram(c, mem, x, y), budget), None)
            total += len(h)
            if total > bound:
                raise BudgetExhausted("materialization", bound)
            homs[(x, y)] = h
    mid = {}
    mors, labels = [], {}
    for (x, y), h in homs.items():
        for t, g in h.colimit.elements:
            m = enc(t, g)
            mid[(x, y, (t, g))] = m
            mors.append(Morphism(m, x, y))
            labels[m] = (t, g)
    idents = {x: mid[(x, x, homs[(x, x)].colimit.cls(c.ident(x), c.ident(x)))] for x in c.objects}

    def cls(x, z, roof):
        return homs[(x, z)].colimit.cls(*roof)

    comp = {}
    witnesses = []
    for (x, y), h1 in homs.items():
        for z in c.objects:
            h2 = homs[(y, z)]
            for e1 in h1.colimit.elements:
                for e2 in h2.colimit.elements:
                    budget.tick("materialization")
                    r = _compose_right(c, mem, e1, e2, tiebreak)
                    if r is None:
                        witnesses.append({"pair": [mid[(y, z, e2)], mid[(x, y, e1)]], "reason": "no completion"})
                        continue
                    k = cls(x, z, r)
                    comp[(mid[(y, z, e2)], mid[(x, y, e1)])] = mid[(x, z, k)]
    if verify and not witnesses:
        # every pair of representatives must give the same class
        members_of = {}
        for (x, y), h in homs.items():
            for key, can in h.colimit.cocone.items():
                members_of.setdefault((x, y, can), []).append(key)
        for (x, y), h1 in homs.items():
            for z in c.objects:
                h2 = homs[(y, z)]
                for e1 in h1.colimit.elements:
                    for e2 in h2.colimit.elements:
                        want = comp[(mid[(y, z, e2)], mid[(x, y, e1)])]
                        for r1 in members_of[(x, y, e1)]:
                            for r2 in members_of[(y, z, e2)]:
                                for tb in ("normal", "reversed"):
                                    budget.tick("materialization")
                                    r = _compose_right(c, mem, r1, r2, tb)
                                    got = None if r is None else mid[(x, z, cls(x, z, r))]
                                    if got != want:
                                        witnesses.append({"pair": [list(r2), list(r1)], "got": got, "expected": want})
    if witnesses:
        raise InternalInconsistency("ambiguous composition of fractions", witnesses[:5])
    cat = FiniteCategory(c.objects, mors, idents, comp, name=f"{c.name}[{s.name}^-1]", labels=labels)
    qmap = {f.id: mid[(f.src, f.tgt, cls(f.src, f.tgt, (c.ident(f.tgt), f.id)))] for f in c.morphisms}
    Q = Functor(c, cat, {x: x for x in c.objects}, qmap, name="Q")
    return LocalizedCategory(s, "right", cat, Q, homs, tiebreak)


def materialize_localization(
    s: MorphismClass,
    side: str | None = None,
    bound: int = DEFAULT_MATERIALIZE_BOUND,
    tiebreak: str = "normal",
    verify: bool = True,
    report: SystemReport | None = None,
    budget: Budget | None = None,
) -> LocalizedCategory:
    """Build ``C_S`` as a finite category together with ``Q: C -> C_S``.

    Morphism ids are roof tokens ``<t|g>`` (right) or ``<s|g>`` (left).
    """
    budget = ensure_budget(budget)
    rep = report or validate_mult_system(s)
    if side is None:
        if s.side == "left" or (s.side == "bilateral" and not rep.right_system and rep.left_system):
            side = "left"
        else:
            side = "right"
    require_side(s, side, rep)
    if side == "bilateral":
        side = "right"
    if side == "right":
        out = _materialize_right(s, bound, tiebreak, verify, budget)
    else:
        op = MorphismClass(s.category.opposite(), s.members, "right", s.name)
        r = _materialize_right(op, bound, tiebreak, verify, budget)
        cat = r.category.opposite()
        cat.name = f"{s.category.name}[{s.name}^-1]"
        Q = Functor(s.category, cat, r.Q.obj_map, r.Q.mor_map, name="Q")
        homs = {(x, y): LocalHom("left", x, y, h.colimit, h.index) for (y, x), h in r.homs.items()}
        out = LocalizedCategory(s, "left", cat, Q, homs, tiebreak)
    rep2 = validate_structure(out.category, [out.Q])
    if not rep2.valid:
        raise InternalInconsistency("localized category fails the category laws", rep2.violations + rep2.structural)
    return out


def q_inverts_system(loc: LocalizedCategory) -> list[str]:
    """Members of S whose image under Q has no two-sided inverse (should be empty)."""
    return [f for f in loc.system.sorted_members() if not loc.category.is_iso(loc.Q.mor(f))]


# ---------------------------------------------------------------------------
# cross-checks between the three formulas


@dataclass
class CrossReport:
    agree: bool
    pairs: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"agree": self.agree, "pairs": self.pairs, "witnesses": self.witnesses}


def _map_is_bijection(src: Colimit, dst: Colimit, send) -> tuple[bool, str]:
    """``send`` maps colimit keys of ``src`` to keys of ``dst``; check it induces a bijection."""
    image = {}
    for key, can in src.cocone.items():
        target = dst.cls(*send(key))
        if image.setdefault(can, target) != target:
            return False, "not well defined"
    if len(set(image.values())) != len(image):
        return False, "not injective"
    if set(image.values()) != set(dst.elements):
        return False, "not surjective"
    return True, ""


def cross_check_formulas(s: MorphismClass, report: SystemReport | None = None) -> CrossReport:
    rep = require_side(s, "bilateral", report)
    c = s.category
    out = CrossReport(True)
    for x in c.objects:
        for y in c.objects:
            r = localized_hom(s, x, y, "right", rep)
            l = localized_hom(s, x, y, "left", rep)
            b = localized_hom(s, x, y, "bilateral", rep)
            ix, iy = c.ident(x), c.ident(y)
            ok_r, why_r = _map_is_bijection(r.colimit, b.colimit, lambda k: (enc(ix, k[0]), k[1]))
            ok_l, why_l = _map_is_bijection(l.colimit, b.colimit, lambda k: (enc(k[0], iy), k[1]))
            row = {"x": x, "y": y, "right": len(r), "left": len(l), "bilateral": len(b), "bijective": ok_r and ok_l}
            out.pairs.append(row)
            if not (ok_r and ok_l):
                out.agree = False
                out.witnesses.append({"x": x, "y": y, "right_to_bilateral": why_r, "left_to_bilateral": why_l})
    return out
