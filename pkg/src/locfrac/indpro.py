"""Ind- and Pro-objects over finite filtered index categories.

An ind-object is a diagram ``F: I -> C`` with ``I`` filtrant, read as a formal
colimit, and

    Hom(F, G) = lim_i colim_j Hom_C(F_i, G_j).

A pro-object stores a cofiltrant index and is read as a formal limit. Every
pro operation is the ind operation run on the opposite category.

A morphism ``F -> G`` of ind-objects is stored by its components: for every
source index ``i`` the least pair ``(j, g: F_i -> G_j)`` of its colimit class.
For pro-objects the components are keyed by the target index instead; this is
exactly the storage of the dual ind-morphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import Budget, InternalInconsistency, ensure_budget
from .fincat import (
    Colimit,
    FilteredReport,
    FiniteCategory,
    Functor,
    Morphism,
    SetDiagram,
    classify_filtered,
    enc,
    is_cofinal,
    set_colimit,
    set_limit,
    terminal_category,
    terminal_objects,
    validate_structure,
)
from .unionfind import UnionFind

VARIANCES = ("ind", "pro")


class IndObject:
    def __init__(self, index: FiniteCategory, body: Functor, variance: str = "ind", name: str = ""):
        if variance not in VARIANCES:
            raise ValueError(f"unknown variance {variance!r}")
        self.index = index
        self.body = body
        self.ambient = body.target
        self.variance = variance
        self.name = name
        self._fibers: dict[str, Colimit] = {}
        self._dual: IndObject | None = None

    def __repr__(self):
        return f"IndObject({self.name!r}, {self.variance}, {len(self.index.objects)} index objects)"

    def value(self, i: str) -> str:
        return self.body.ob(i)

    def arrow(self, a: str) -> str:
        return self.body.mor(a)

    def dual(self) -> "IndObject":
        if self._dual is None:
            flip = "pro" if self.variance == "ind" else "ind"
            d = IndObject(self.index.opposite(), self.body.opposite(), flip, self.name)
            d._dual = self
            self._dual = d
        return self._dual

    def as_ind(self) -> "IndObject":
        return self if self.variance == "ind" else self.dual()

    def filtered_report(self) -> FilteredReport:
        return classify_filtered(self.as_ind().index)

    def problems(self) -> list[dict]:
        out = []
        rep = validate_structure(self.index, [self.body])
        out += rep.structural + rep.violations
        if not out and not self.filtered_report().filtrant:
            out.append({"law": "index_not_filtrant", "report": self.filtered_report().as_dict()})
        return out

    def fiber(self, x: str, budget: Budget | None = None) -> Colimit:
        """``colim_j Hom_C(x, F_j)`` for an ind-object (ambient object ``x``)."""
        assert self.variance == "ind"
        if x not in self._fibers:
            c = self.ambient
            i = self.index
            sets = {j: c.hom(x, self.value(j)) for j in i.objects}
            maps = {m.id: {g: c.comp(self.arrow(m.id), g) for g in sets[m.src]} for m in i.morphisms}
            self._fibers[x] = set_colimit(SetDiagram(i, sets, maps), budget)
        return self._fibers[x]

    def is_strict(self) -> bool:
        """Ordered index and monic transition morphisms."""
        ind = self.as_ind()
        idx = ind.index
        poset = all(len(idx.hom(a, b)) <= 1 for a in idx.objects for b in idx.objects)
        poset = poset and all(not (idx.hom(a, b) and idx.hom(b, a)) for a in idx.objects for b in idx.objects if a != b)
        c = self.ambient
        monic = all(c.is_mono(self.arrow(m.id)) for m in self.index.morphisms)
        if self.variance == "pro":
            monic = all(c.opposite().is_mono(self.arrow(m.id)) for m in self.index.morphisms)
        return poset and monic


def constant(c: FiniteCategory, x: str, variance: str = "ind") -> IndObject:
    pt = terminal_category()
    body = Functor(pt, c, {"*": x}, {pt.ident("*"): c.ident(x)}, name=f"const_{x}")
    return IndObject(pt, body, variance, name=x)


def diagram_object(c: FiniteCategory, index: FiniteCategory, obj_map: Mapping, mor_map: Mapping, variance="ind", name="") -> IndObject:
    return IndObject(index, Functor(index, c, dict(obj_map), dict(mor_map), name=name), variance, name)


@dataclass(frozen=True, eq=False)
class IndMorphism:
    source: IndObject
    target: IndObject
    components: tuple      # ((key, (idx, mor)), ...) sorted by key

    def comp(self, key: str) -> tuple:
        return dict(self.components)[key]

    def as_dict(self) -> dict:
        return dict(self.components)

    def dual(self) -> "IndMorphism":
        return IndMorphism(self.target.dual(), self.source.dual(), self.components)

    def as_ind(self) -> "IndMorphism":
        return self if self.source.variance == "ind" else self.dual()

    def same_as(self, other: "IndMorphism") -> bool:
        return self.components == other.components

    def __eq__(self, other):
        return (
            isinstance(other, IndMorphism)
            and self.source is other.source
            and self.target is other.target
            and self.components == other.components
        )

    def __hash__(self):
        return hash(self.components)

    def tokens(self) -> list:
        return [[k, list(v)] for k, v in self.components]


def _mk(source: IndObject, target: IndObject, comps: Mapping) -> IndMorphism:
    return IndMorphism(source, target, tuple(sorted(comps.items())))


def _same_variance(f: IndObject, g: IndObject) -> None:
    if f.variance != g.variance:
        raise ValueError("mixed variance")
    if f.ambient != g.ambient:
        raise ValueError("different ambient categories")


# ---------------------------------------------------------------------------
# Hom sets


def ind_hom(f: IndObject, g: IndObject, budget: Budget | None = None) -> list[IndMorphism]:
    """Every morphism ``f -> g``, in a deterministic order."""
    _same_variance(f, g)
    if f.variance == "pro":
        return [m.dual() for m in ind_hom(g.dual(), f.dual(), budget)]
    budget = ensure_budget(budget)
    c, i = f.ambient, f.index
    fib = {x: g.fiber(f.value(x), budget) for x in i.objects}
    iop = i.opposite()
    sets = {x: fib[x].elements for x in i.objects}
    maps = {}
    for m in i.morphisms:
        # a: x -> x' in I restricts classes at x' to classes at x
        fa = f.arrow(m.id)
        maps[m.id] = {e: fib[m.src].cls(e[0], c.comp(e[1], fa)) for e in sets[m.tgt]}
    lim = set_limit(SetDiagram(iop, sets, maps), budget)
    return [_mk(f, g, dict(zip(lim.objects, e))) for e in lim.elements]


def check_morphism(phi: IndMorphism) -> list[dict]:
    """Compatibility of the component family (empty list when valid)."""
    phi = phi.as_ind()
    f, g = phi.source, phi.target
    c = f.ambient
    comps = phi.as_dict()
    out = []
    for i in f.index.objects:
        j, h = comps[i]
        if g.fiber(f.value(i)).cls(j, h) != (j, h):
            out.append({"law": "non_canonical_component", "index": i})
    for m in f.index.morphisms:
        j, h = comps[m.tgt]
        if g.fiber(f.value(m.src)).cls(j, c.comp(h, f.arrow(m.id))) != comps[m.src]:
            out.append({"law": "component_compatibility", "index_arrow": m.id})
    return out


def identity(f: IndObject) -> IndMorphism:
    if f.variance == "pro":
        return identity(f.dual()).dual()
    c = f.ambient
    return _mk(f, f, {i: f.fiber(f.value(i)).cls(i, c.ident(f.value(i))) for i in f.index.objects})


def compose(psi: IndMorphism, phi: IndMorphism) -> IndMorphism:
    """``psi . phi``."""
    if phi.source.variance == "pro":
        return compose(phi.dual(), psi.dual()).dual()
    f, h = phi.source, psi.target
    c = f.ambient
    pd, qd = phi.as_dict(), psi.as_dict()
    out = {}
    for i in f.index.objects:
        j, g = pd[i]
        k, e = qd[j]
        out[i] = h.fiber(f.value(i)).cls(k, c.comp(e, g))
    return _mk(f, h, out)


def from_constant(x_obj: IndObject, g: IndObject, j: str, mor: str) -> IndMorphism:
    """The morphism ``const(x) -> g`` represented by ``mor: x -> g_j``."""
    assert x_obj.variance == "ind" and len(x_obj.index.objects) == 1
    (star,) = x_obj.index.objects
    return _mk(x_obj, g, {star: g.fiber(x_obj.value(star)).cls(j, mor)})


def to_constant(f: IndObject, y_obj: IndObject, cocone: Mapping[str, str]) -> IndMorphism:
    """The morphism ``f -> const(y)`` given by a cocone ``i -> (f_i -> y)``."""
    (star,) = y_obj.index.objects
    return _mk(f, y_obj, {i: (star, cocone[i]) for i in f.index.objects})


def yoneda_iso_test(phi: IndMorphism) -> tuple[bool, dict]:
    """``phi`` is invertible iff it induces bijections ``colim Hom(W, F_i) -> colim Hom(W, G_j)``."""
    if phi.source.variance == "pro":
        return yoneda_iso_test(phi.dual())
    f, g = phi.source, phi.target
    c = f.ambient
    pd = phi.as_dict()
    for w in c.objects:
        src, dst = f.fiber(w), g.fiber(w)
        img = {}
        for (i, a) in src.elements:
            j, h = pd[i]
            img[(i, a)] = dst.cls(j, c.comp(h, a))
        if len(set(img.values())) != len(img) or set(img.values()) != set(dst.elements):
            return False, {"test_object": w}
    return True, {}


def find_inverse(phi: IndMorphism, budget: Budget | None = None) -> IndMorphism | None:
    f, g = phi.source, phi.target
    idf, idg = identity(f), identity(g)
    for psi in ind_hom(g, f, budget):
        if compose(psi, phi).same_as(idf) and compose(phi, psi).same_as(idg):
            return psi
    return None


def is_iso(phi: IndMorphism, budget: Budget | None = None) -> bool:
    """Decided by the Yoneda test and confirmed by an explicit inverse."""
    ok, _ = yoneda_iso_test(phi)
    inv = find_inverse(phi, budget)
    if ok != (inv is not None):
        raise InternalInconsistency("iso tests disagree", [{"components": phi.tokens()}])
    return ok


def apply_functor(h: Functor, f: IndObject) -> IndObject:
    """``Ind(H)`` (or ``Pro(H)``) on objects."""
    return IndObject(f.index, f.body.then(h), f.variance, name=f.name)


def apply_functor_mor(h: Functor, phi: IndMorphism, source: IndObject | None = None, target: IndObject | None = None) -> IndMorphism:
    src = source or apply_functor(h, phi.source)
    tgt = target or apply_functor(h, phi.target)
    if src.variance == "pro":
        return apply_functor_mor(h.opposite(), phi.dual(), tgt.dual(), src.dual()).dual()
    out = {}
    for i, (j, g) in phi.components:
        out[i] = tgt.fiber(src.value(i)).cls(j, h.mor(g))
    return _mk(src, tgt, out)


# ---------------------------------------------------------------------------
# essential constancy


@dataclass
class EssConstWitness:
    representative: str
    cocone: dict          # index object -> morphism F_i -> L
    i0: str
    section: str          # f: L -> F_{i0}
    iso: IndMorphism      # F -> const(L)
    inverse: IndMorphism  # const(L) -> F
    strict: bool = False

    def as_dict(self) -> dict:
        return {
            "representative": self.representative,
            "cocone": dict(sorted(self.cocone.items())),
            "i0": self.i0,
            "section": self.section,
            "strict": self.strict,
        }


def _candidates(f: IndObject) -> list[str]:
    vals = sorted({f.value(i) for i in f.index.objects})
    return vals + [x for x in f.ambient.objects if x not in vals]


def essentially_constant(f: IndObject, budget: Budget | None = None) -> EssConstWitness | None:
    """Search for ``L``, a cocone ``F -> L``, ``i0`` and ``s: L -> F_{i0}`` with

    (b) ``cocone_{i0} . s == id_L`` and
    (a) ``s . cocone_i`` and ``id_{F_i}`` have the same class in ``colim_j Hom(F_i, F_j)``
        for every ``i``.

    Candidates ``L`` are the diagram values first, then all objects, in id order.
    """
    if f.variance == "pro":
        w = essentially_constant(f.dual(), budget)
        if w is None:
            return None
        return EssConstWitness(w.representative, w.cocone, w.i0, w.section, w.inverse.dual(), w.iso.dual(), w.strict)
    budget = ensure_budget(budget)
    c = f.ambient
    for cand in _candidates(f):
        lobj = constant(c, cand)
        for cone in ind_hom(f, lobj, budget):
            iota = {i: m for i, (_, m) in cone.components}
            for i0 in f.index.objects:
                for s in c.hom(cand, f.value(i0)):
                    budget.tick("essential constancy")
                    if c.comp(iota[i0], s) != c.ident(cand):
                        continue
                    ok = all(
                        f.fiber(f.value(i)).cls(i0, c.comp(s, iota[i])) == f.fiber(f.value(i)).cls(i, c.ident(f.value(i)))
                        for i in f.index.objects
                    )
                    if not ok:
                        continue
                    inv = from_constant(lobj, f, i0, s)
                    if not yoneda_iso_test(cone)[0]:
                        raise InternalInconsistency(
                            "criterion accepted a non-isomorphic cocone", [{"representative": cand, "i0": i0, "section": s}]
                        )
                    return EssConstWitness(cand, iota, i0, s, cone, inv, f.is_strict())
        budget.tick("essential constancy")
    return None


# ---------------------------------------------------------------------------
# parallelization


@dataclass
class ParallelizationResult:
    phi: FiniteCategory
    arrows: dict                # Phi object -> (F_i -> G_j) morphism id
    proj_source: Functor        # Phi -> I
    proj_target: Functor        # Phi -> J
    filtered: FilteredReport
    cofinal_source: bool
    cofinal_target: bool
    colimits_preserved: bool
    round_trip: bool
    reassembled: IndMorphism | None = None
    findings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.filtered.filtrant and self.cofinal_source and self.cofinal_target and self.colimits_preserved and self.round_trip

    def as_dict(self) -> dict:
        return {
            "objects": len(self.phi.objects),
            "morphisms": len(self.phi.morphisms),
            "filtrant": self.filtered.filtrant,
            "cofinal_source": self.cofinal_source,
            "cofinal_target": self.cofinal_target,
            "colimits_preserved": self.colimits_preserved,
            "round_trip": self.round_trip,
            "findings": self.findings,
        }


def _restriction_preserves_colimits(p: Functor, f: IndObject) -> bool:
    """Compare ``colim_{Phi} Hom(W, F_{p(o)})`` with ``colim_I Hom(W, F_i)`` for every W."""
    pulled = IndObject(p.source, p.then(f.body), "ind")
    c = f.ambient
    for w in c.objects:
        a, b = pulled.fiber(w), f.fiber(w)
        img = {e: b.cls(p.ob(e[0]), e[1]) for e in a.elements}
        if len(set(img.values())) != len(img) or set(img.values()) != set(b.elements):
            return False
    return True


def parallelize(phi_mor: IndMorphism, budget: Budget | None = None) -> ParallelizationResult:
    """Index the components of a morphism by one filtered category."""
    if phi_mor.source.variance == "pro":
        return parallelize(phi_mor.dual(), budget)
    budget = ensure_budget(budget)
    f, g = phi_mor.source, phi_mor.target
    c = f.ambient
    pd = phi_mor.as_dict()
    objs, labels = [], {}
    for i in f.index.objects:
        fib = g.fiber(f.value(i))
        for j in g.index.objects:
            for h in c.hom(f.value(i), g.value(j)):
                budget.tick("parallelize")
                if fib.cls(j, h) == pd[i]:
                    o = enc(i, j, h)
                    objs.append(o)
                    labels[o] = (i, j, h)
    mors, mlab = [], {}
    for o1 in objs:
        i1, j1, h1 = labels[o1]
        for o2 in objs:
            i2, j2, h2 = labels[o2]
            for m in f.index.hom(i1, i2):
                for n in g.index.hom(j1, j2):
                    if c.comp(g.arrow(n), h1) == c.comp(h2, f.arrow(m)):
                        mid = enc(m, n)
                        mors.append(Morphism(enc(o1, mid, o2), o1, o2))
                        mlab[enc(o1, mid, o2)] = (m, n)
    idents = {o: enc(o, enc(f.index.ident(labels[o][0]), g.index.ident(labels[o][1])), o) for o in objs}
    comp = {}
    for a in mors:
        for b in mors:
            if a.tgt == b.src:
                (m1, n1), (m2, n2) = mlab[a.id], mlab[b.id]
                comp[(b.id, a.id)] = enc(a.src, enc(f.index.comp(m2, m1), g.index.comp(n2, n1)), b.tgt)
    cat = FiniteCategory(objs, mors, idents, comp, name="Phi", labels={**labels, **mlab})
    p1 = Functor(cat, f.index, {o: labels[o][0] for o in objs}, {k: v[0] for k, v in mlab.items()}, "p_source")
    p2 = Functor(cat, g.index, {o: labels[o][1] for o in objs}, {k: v[1] for k, v in mlab.items()}, "p_target")
    findings = []
    rep = validate_structure(cat, [p1, p2])
    if not rep.valid:
        findings.append({"kind": "invalid_phi", "detail": rep.as_dict()})
    filt = classify_filtered(cat)
    if not filt.filtrant:
        findings.append({"kind": "phi_not_filtrant", "detail": filt.as_dict()})
    cof1, w1 = is_cofinal(p1)
    cof2, w2 = is_cofinal(p2)
    if not cof1:
        findings.append({"kind": "source_projection_not_cofinal", "detail": w1})
    if not cof2:
        findings.append({"kind": "target_projection_not_cofinal", "detail": w2})
    preserved = bool(objs) and _restriction_preserves_colimits(p1, f) and _restriction_preserves_colimits(p2, g)
    # round trip: b . level == phi . a with a, b the canonical comparison isomorphisms
    round_trip = False
    level = None
    if objs and filt.filtrant:
        fp = IndObject(cat, p1.then(f.body), "ind", name="F.p")
        gp = IndObject(cat, p2.then(g.body), "ind", name="G.p")
        level = _mk(fp, gp, {o: gp.fiber(fp.value(o)).cls(o, labels[o][2]) for o in objs})
        a = _mk(fp, f, {o: f.fiber(fp.value(o)).cls(labels[o][0], c.ident(fp.value(o))) for o in objs})
        b = _mk(gp, g, {o: g.fiber(gp.value(o)).cls(labels[o][1], c.ident(gp.value(o))) for o in objs})
        problems = check_morphism(level) + check_morphism(a) + check_morphism(b)
        round_trip = (
            not problems
            and yoneda_iso_test(a)[0]
            and yoneda_iso_test(b)[0]
            and compose(b, level).same_as(compose(phi_mor, a))
        )
    return ParallelizationResult(
        cat,
        {o: labels[o][2] for o in objs},
        p1,
        p2,
        filt,
        cof1,
        cof2,
        preserved,
        round_trip,
        level,
        findings,
    )


# ---------------------------------------------------------------------------
# extension of functors valued in ind-objects


@dataclass(frozen=True, eq=False)
class IndValuedFunctor:
    """A functor ``C -> Ind(D)`` given objectwise and on morphisms."""

    source: FiniteCategory
    target: FiniteCategory
    objects: Mapping[str, IndObject]
    morphisms: Mapping[str, IndMorphism]
    name: str = ""

    def ob(self, x: str) -> IndObject:
        return self.objects[x]

    def mor(self, m: str) -> IndMorphism:
        return self.morphisms[m]

    def problems(self) -> list[dict]:
        out = []
        c = self.source
        for m in c.morphisms:
            phi = self.mor(m.id)
            if phi.source is not self.ob(m.src) or phi.target is not self.ob(m.tgt):
                out.append({"law": "functor_typing", "morphism": m.id})
        if out:
            return out
        for x in c.objects:
            if not self.mor(c.ident(x)).same_as(identity(self.ob(x))):
                out.append({"law": "functor_identity", "object": x})
        for (g, f), gf in c.compose_table.items():
            if not compose(self.mor(g), self.mor(f)).same_as(self.mor(gf)):
                out.append({"law": "functor_composition", "pair": [g, f]})
        return out


def constant_embedding(h: Functor, variance: str = "ind") -> IndValuedFunctor:
    """``i . H`` for an ordinary functor ``H: C -> D``."""
    d = h.target
    objs = {x: constant(d, h.ob(x), variance) for x in h.source.objects}
    mors = {}
    for m in h.source.morphisms:
        src, tgt = objs[m.src], objs[m.tgt]
        if variance == "ind":
            mors[m.id] = from_constant(src, tgt, "*", h.mor(m.id))
        else:
            mors[m.id] = from_constant(tgt.dual(), src.dual(), "*", h.mor(m.id)).dual()
    return IndValuedFunctor(h.source, d, objs, mors, name=f"i.{h.name}")


@dataclass
class ExtensionResult:
    ind: IndObject
    filtered: FilteredReport
    hom_agreement: bool
    witnesses: list = field(default_factory=list)


def extend_to_ind(fn: IndValuedFunctor, x: IndObject, budget: Budget | None = None) -> ExtensionResult:
    """Flatten ``colim_i fn(x_i)`` into a single ind-object of ``fn.target``.

    Index objects are pairs ``(i, k)`` with ``k`` an index object of
    ``fn(x_i)``; arrows ``(i, k) -> (i', k')`` are pairs ``(a, h)`` with
    ``a: i -> i'`` and ``h`` a representative at ``k'`` of the component of
    ``fn(x(a))`` at ``k``.
    """
    budget = ensure_budget(budget)
    d = fn.target
    objs, olab = [], {}
    for i in x.index.objects:
        y = fn.ob(x.value(i))
        for k in y.index.objects:
            o = enc(i, k)
            objs.append(o)
            olab[o] = (i, k)
    mors, mlab = [], {}
    for a in x.index.morphisms:
        ya, yb = fn.ob(x.value(a.src)), fn.ob(x.value(a.tgt))
        comps = fn.mor(x.arrow(a.id)).as_dict()
        for k in ya.index.objects:
            fib = yb.fiber(ya.value(k))
            for k2 in yb.index.objects:
                for h in d.hom(ya.value(k), yb.value(k2)):
                    budget.tick("extension")
                    if fib.cls(k2, h) == comps[k]:
                        mid = enc(a.id, k2, h)
                        mors.append(Morphism(mid, enc(a.src, k), enc(a.tgt, k2)))
                        mlab[mid] = (a.id, h)
    idents = {}
    for o in objs:
        i, k = olab[o]
        idents[o] = enc(x.index.ident(i), k, d.ident(fn.ob(x.value(i)).value(k)))
    comp = {}
    by_src: dict[str, list[Morphism]] = {}
    for m in mors:
        by_src.setdefault(m.src, []).append(m)
    for m1 in mors:
        for m2 in by_src.get(m1.tgt, []):
            (a1, h1), (a2, h2) = mlab[m1.id], mlab[m2.id]
            k2 = olab[m2.tgt][1]
            comp[(m2.id, m1.id)] = enc(x.index.comp(a2, a1), k2, d.comp(h2, h1))
    idx = FiniteCategory(objs, mors, idents, comp, name="flat", labels={**olab, **mlab})
    body = Functor(
        idx,
        d,
        {o: fn.ob(x.value(olab[o][0])).value(olab[o][1]) for o in objs},
        {m: mlab[m][1] for m in mlab},
        name=f"{fn.name}.{x.name}",
    )
    flat = IndObject(idx, body, "ind", name=f"{fn.name}({x.name})")
    witnesses = []
    rep = validate_structure(idx, [body])
    if not rep.valid:
        witnesses.append({"law": "flattened_index", "detail": rep.as_dict()})
    filt = classify_filtered(idx)
    agree = rep.valid and _nested_hom_agreement(fn, x, flat, witnesses)
    return ExtensionResult(flat, filt, agree, witnesses)


def _nested_hom_agreement(fn: IndValuedFunctor, x: IndObject, flat: IndObject, witnesses: list) -> bool:
    """``colim_{(i,k)} Hom(W, -)`` against ``colim_i colim_k Hom(W, -)`` for every W."""
    d = fn.target
    ok = True
    for w in d.objects:
        inner = {i: fn.ob(x.value(i)).fiber(w) for i in x.index.objects}
        sets = {i: inner[i].elements for i in x.index.objects}
        maps = {}
        for a in x.index.morphisms:
            comps = fn.mor(x.arrow(a.id)).as_dict()
            yb = fn.ob(x.value(a.tgt))
            maps[a.id] = {
                (k, g): yb.fiber(w).cls(comps[k][0], d.comp(comps[k][1], g)) for (k, g) in sets[a.src]
            }
        nested = set_colimit(SetDiagram(x.index, sets, maps))
        flat_fib = flat.fiber(w)
        img = {}
        for (o, g) in flat_fib.cocone:
            i, k = flat.index.labels[o]
            can = flat_fib.cls(o, g)
            e = nested.cls(i, inner[i].cls(k, g))
            if img.setdefault(can, e) != e:
                ok = False
        if ok and (len(set(img.values())) != len(img) or set(img.values()) != set(nested.elements)):
            ok = False
        if not ok:
            witnesses.append({"law": "nested_hom", "test_object": w})
            return False
    return True


# ---------------------------------------------------------------------------
# generalized adjunctions


@dataclass
class AdjReport:
    ok: bool
    pairs: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "pairs": self.pairs, "witnesses": self.witnesses}


@dataclass
class HomFunctorData:
    """A Set-valued functor on a category given by element sets and actions."""

    index: FiniteCategory
    sets: dict
    act: Callable[[str, object], object]

    def as_diagram(self) -> SetDiagram:
        maps = {m.id: {e: self.act(m.id, e) for e in self.sets[m.src]} for m in self.index.morphisms}
        return SetDiagram(self.index, self.sets, maps)


def natural_bijection(a: SetDiagram, b: SetDiagram, budget: Budget | None = None) -> tuple[dict | None, dict]:
    """Search for a natural isomorphism ``a -> b`` of Set-valued functors.

    Returns ``(assignment, witness)``; the assignment maps ``(obj, elem)`` to an
    element of ``b`` at ``obj``. The witness names the first object whose sets
    have different sizes, or reports an exhausted search.
    """
    budget = ensure_budget(budget)
    idx = a.index
    for x in idx.objects:
        if len(a.sets[x]) != len(b.sets[x]):
            return None, {"object": x, "left": len(a.sets[x]), "right": len(b.sets[x])}
    keys = [(x, e) for x in idx.objects for e in a.sets[x]]
    outs = {x: [m for m in idx.morphisms if m.src == x] for x in idx.objects}
    ins = {x: [m for m in idx.morphisms if m.tgt == x] for x in idx.objects}

    def propagate(assign, used, key, val):
        stack = [(key, val)]
        new = []
        while stack:
            (x, e), v = stack.pop()
            cur = assign.get((x, e))
            if cur is not None:
                if cur != v:
                    return None
                continue
            if v in used[x]:
                return None
            assign[(x, e)] = v
            used[x].add(v)
            new.append((x, e))
            for m in outs[x]:
                stack.append(((m.tgt, a.maps[m.id][e]), b.maps[m.id][v]))
            # backward: every e' with a(m)(e') assigned must already map consistently
            for m in ins[x]:
                for e2 in a.sets[m.src]:
                    if a.maps[m.id][e2] == e and (m.src, e2) in assign:
                        if b.maps[m.id][assign[(m.src, e2)]] != v:
                            return None
        return new

    def rec(k, assign, used):
        while k < len(keys) and keys[k] in assign:
            k += 1
        if k == len(keys):
            return dict(assign)
        x, e = keys[k]
        for v in b.sets[x]:
            if v in used[x]:
                continue
            budget.tick("natural bijection")
            snap = (dict(assign), {y: set(s) for y, s in used.items()})
            if propagate(assign, used, (x, e), v) is not None:
                got = rec(k + 1, assign, used)
                if got is not None:
                    return got
            assign, used = snap
            assign = dict(assign)
        return None

    res = rec(0, {}, {x: set() for x in idx.objects})
    if res is None:
        return None, {"reason": "no natural bijection"}
    # final naturality audit
    for m in idx.morphisms:
        for e in a.sets[m.src]:
            if b.maps[m.id][res[(m.src, e)]] != res[(m.tgt, a.maps[m.id][e])]:
                raise InternalInconsistency("natural bijection search returned a non-natural map", [m.id])
    return res, {}


def generalized_adjunction_check(
    f: IndValuedFunctor,
    g: IndValuedFunctor,
    pairs: Sequence[tuple[str, str]] | None = None,
    budget: Budget | None = None,
) -> AdjReport:
    """Compare ``Hom_{Pro C'}(F X, X')`` with ``Hom_{Ind C}(X, G X')`` naturally in ``(X, X')``.

    ``f: C -> Pro(C')`` has pro-object values, ``g: C' -> Ind(C)`` ind-object values.
    """
    from .fincat import product_category

    budget = ensure_budget(budget)
    c, c2 = f.source, g.source
    prod = product_category(c.opposite(), c2)
    lhs_sets, rhs_sets = {}, {}
    lhs_tok, rhs_tok = {}, {}
    const_c = {x: constant(c, x) for x in c.objects}
    const_c2 = {y: constant(c2, y, "pro") for y in c2.objects}
    for o in prod.objects:
        x, y = prod.labels[o]
        lh = ind_hom(f.ob(x), const_c2[y], budget)
        rh = ind_hom(const_c[x], g.ob(y), budget)
        lhs_tok[o] = {m.components: m for m in lh}
        rhs_tok[o] = {m.components: m for m in rh}
        lhs_sets[o] = tuple(sorted(lhs_tok[o]))
        rhs_sets[o] = tuple(sorted(rhs_tok[o]))
    lmaps, rmaps = {}, {}
    for m in prod.morphisms:
        u, v = prod.labels[m.id]      # u: x' -> x in C (an arrow x -> x' of C^op), v: y -> y' in C'
        (x, y), (x2, y2) = prod.labels[m.src], prod.labels[m.tgt]
        vv = from_constant(const_c2[y2].dual(), const_c2[y].dual(), "*", v).dual()
        uu = from_constant(const_c[x2], const_c[x], "*", u)
        lmaps[m.id] = {}
        for tok in lhs_sets[m.src]:
            phi = lhs_tok[m.src][tok]
            lmaps[m.id][tok] = compose(compose(vv, phi), f.mor(u)).components
        rmaps[m.id] = {}
        for tok in rhs_sets[m.src]:
            psi = rhs_tok[m.src][tok]
            rmaps[m.id][tok] = compose(compose(g.mor(v), psi), uu).components
    a = SetDiagram(prod, lhs_sets, lmaps)
    b = SetDiagram(prod, rhs_sets, rmaps)
    wanted = None if pairs is None else {enc(x, y) for x, y in pairs}
    rows = []
    for o in prod.objects:
        if wanted is None or o in wanted:
            x, y = prod.labels[o]
            rows.append({"x": x, "y": y, "left": len(lhs_sets[o]), "right": len(rhs_sets[o])})
    bij, wit = natural_bijection(a, b, budget)
    witnesses = []
    if bij is None:
        if "object" in wit:
            x, y = prod.labels[wit["object"]]
            witnesses.append({"x": x, "y": y, "left": wit["left"], "right": wit["right"], "reason": "cardinality"})
        else:
            witnesses.append({"reason": "no natural bijection"})
    mism = [r for r in rows if r["left"] != r["right"]]
    for r in mism:
        w = {"x": r["x"], "y": r["y"], "left": r["left"], "right": r["right"], "reason": "cardinality"}
        if w not in witnesses:
            witnesses.append(w)
    return AdjReport(bij is not None, rows, witnesses)


def extend_morphism(fn: IndValuedFunctor, phi: IndMorphism, src_flat: IndObject, tgt_flat: IndObject) -> IndMorphism:
    """Apply the extension of ``fn`` to ``phi: x -> y``, between ``extend_to_ind`` outputs."""
    d = fn.target
    pd = phi.as_dict()
    out = {}
    for o in src_flat.index.objects:
        i, k = src_flat.index.labels[o]
        j, g = pd[i]
        k2, h = fn.mor(g).as_dict()[k]
        out[o] = tgt_flat.fiber(src_flat.value(o)).cls(enc(j, k2), h)
    return _mk(src_flat, tgt_flat, out)


def reindex_constant_extension(flat: IndObject, target: IndObject) -> IndMorphism:
    """The identification ``extend(fn, const y) -> fn(y)``: ``(*, k) -> k``."""
    c = flat.ambient
    out = {}
    for o in flat.index.objects:
        _, k = flat.index.labels[o]
        out[o] = target.fiber(flat.value(o)).cls(k, c.ident(flat.value(o)))
    return _mk(flat, target, out)


def constant_morphism(c: FiniteCategory, a: str, b: str, m: str, variance: str = "ind") -> IndMorphism:
    """``const(a) -> const(b)`` induced by ``m: a -> b``."""
    if variance == "ind":
        return from_constant(constant(c, a), constant(c, b), "*", m)
    op = c.opposite()
    return from_constant(constant(op, b), constant(op, a), "*", m).dual()


def constant_value(phi: IndMorphism) -> str:
    """The ambient morphism behind a morphism between constant objects."""
    ((_, (_, m)),) = phi.components
    return m
