"""Sample-based probes for inert complexes and for closure under triangles.

A complex ``i`` of free modules should be inert for the quasi-isomorphisms:
every qis ``s: i -> z`` out of it admits ``r: z -> i`` with ``r s ~ id``.
The set of all such ``s`` cannot be enumerated, so the probe runs over a
fixed menu: the identity, padding by a contractible summand, the inclusion
into a mapping cylinder, and replacement by an injective resolution of
``i`` plus an acyclic non-free summand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import Budget, ensure_budget
from .complexes import (
    BoundedComplex,
    ChainMap,
    FModule,
    Triangle,
    cohomology_at,
    complex_from_module,
    cone,
    cylinder,
    direct_sum,
    free,
    identity_map,
    is_qis,
    pad,
)
from .homotopy import MapProblem, homotopic, homotopy_classes, solve_map
from .linalg import matvec, zeros
from .resolutions import injective_resolution

PROPERTIES = ("inert", "localizable")


@dataclass
class NoRetraction:
    sample: str
    detail: dict

    def as_dict(self) -> dict:
        return {"sample": self.sample, **self.detail}


@dataclass
class RetractionReport:
    ok: bool
    samples: list = field(default_factory=list)       # per-sample dicts
    retractions: dict = field(default_factory=dict)   # name -> ChainMap
    failures: list = field(default_factory=list)      # NoRetraction

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "samples": self.samples,
            "witnesses": [f.as_dict() for f in self.failures],
        }


def acyclic_block(ring, degree: int = 0) -> BoundedComplex:
    """``R/pi --id--> R/pi`` in degrees ``degree, degree + 1``: acyclic, not free."""
    k = complex_from_module(FModule(ring, (1,)), degree, "k")
    return cone(identity_map(k)).shift(-1)


def sample_menu(i: BoundedComplex, w: BoundedComplex | None = None) -> list[tuple[str, ChainMap]]:
    """The standard qis samples out of ``i``."""
    r = i.ring
    lo = i.lo if i.modules else 0
    out = [("identity", identity_map(i))]
    w = w or complex_from_module(free(r, 1), lo, "R")
    _, inc, _ = pad(i, w)
    out.append(("padding", inc))
    # cylinder of the padding inclusion: i -> Cyl(i -> i (+) cone(id_w))
    _, alpha, _, _ = cylinder(inc)
    out.append(("cylinder", alpha))
    a = acyclic_block(r, lo)
    big = direct_sum(i, a)
    mats = {}
    for d in i.modules:
        n = i.rank(d)
        m = zeros(big.rank(d), n)
        for t in range(n):
            m[t][t] = 1
        mats[d] = m
    into = ChainMap(i, big, mats)
    top = max(big.hi, i.hi if i.modules else 0) + 3
    res = injective_resolution(big, top)
    out.append(("resolution", into.then(res.qis)))
    return out


def inert_retraction_probe(i: BoundedComplex, samples: list | None = None, budget: Budget | None = None) -> RetractionReport:
    """Solve for a homotopy retraction of every sample ``s: i -> z``."""
    budget = ensure_budget(budget)
    if not i.is_degreewise_free():
        raise ValueError("inert_retraction_probe expects a complex of free modules")
    samples = samples if samples is not None else sample_menu(i)
    rep = RetractionReport(True)
    for name, s in samples:
        if s.problems() or not is_qis(s):
            raise ValueError(f"sample {name!r} is not a verified quasi-isomorphism")
        prob = MapProblem(s.target, i, [(None, s, identity_map(i))])
        rmap, fail = solve_map(prob, budget)
        if rmap is None:
            rep.ok = False
            rep.failures.append(NoRetraction(name, fail))
            rep.samples.append({"sample": name, "ok": False})
            continue
        ok = not rmap.problems() and homotopic(s.then(rmap), identity_map(i))
        rep.samples.append({"sample": name, "ok": ok, "target": s.target.as_dict()["degrees"]})
        rep.retractions[name] = rmap
        if not ok:
            rep.ok = False
            rep.failures.append(NoRetraction(name, {"reason": "solution failed verification"}))
    return rep


# ---------------------------------------------------------------------------
# closure of a property under triangles


def default_probes(t: Triangle, property: str) -> list[tuple[str, BoundedComplex]]:
    r = t.X.ring
    out = []
    if property == "inert":
        out.append(("k", complex_from_module(FModule(r, (1,)), 0, "k")))
    out.append(("R", complex_from_module(free(r, 1), 0, "R")))
    return out


def default_degrees(t: Triangle) -> list[int]:
    xs = [x for x in t.vertices() if x.modules]
    lo = min(x.lo for x in xs) if xs else 0
    hi = max(x.hi for x in xs) if xs else 0
    return list(range(lo - 2, hi + 3))


def comparison_is_iso(w: BoundedComplex, c: ChainMap, n: int, budget: Budget) -> tuple[bool, dict]:
    """Is post-composition ``Hom_K(w, X[n]) -> Hom_K(w, Z[n])`` with ``c`` bijective?"""
    a = homotopy_classes(w, c.source, n)
    b = homotopy_classes(w, c.target, n)
    info = {"source_size": a.size, "target_size": b.size}
    if a.size != b.size:
        return False, info
    seen = set()
    for u in a.representatives():
        budget.tick("comparison map")
        seen.add(b.coords(u.then(c)))
    info["image_size"] = len(seen)
    return len(seen) == b.size, info


def _cohomology_is_iso(c: ChainMap, d: int) -> tuple[bool, dict]:
    """``H^d(c)`` bijective, by enumeration of classes."""
    a, b = cohomology_at(c.source, d), cohomology_at(c.target, d)
    info = {"source_size": a.size, "target_size": b.size}
    if a.size != b.size:
        return False, info
    img = set()
    for cs in a.elements():
        v = a.element(cs)
        img.add(b.coords(matvec(c.ring, c.at(d), v)))
    info["image_size"] = len(img)
    return len(img) == b.size, info


@dataclass
class ClosureReport:
    ok: bool
    property: str
    hypothesis: bool
    conclusion: bool
    rows: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "property": self.property,
            "hypothesis": self.hypothesis,
            "conclusion": self.conclusion,
            "rows": self.rows,
            "witnesses": self.witnesses,
        }


def default_certificate(x: BoundedComplex, top: int) -> ChainMap:
    return injective_resolution(x, top).qis


def triangle_closure_check(
    t: Triangle,
    property: str = "inert",
    certificates: dict | None = None,
    probes: list | None = None,
    degrees: list | None = None,
    budget: Budget | None = None,
) -> ClosureReport:
    """Compare each vertex with its certificate ``c_k: X_k -> Z_k``.

    The hypothesis is that the comparison is bijective for ``k = 1, 3``; the
    check passes when it is then bijective for ``k = 2`` as well. Inert mode
    compares ``Hom_K(W, X_k[n])`` for probe complexes ``W``; localizable mode
    compares cohomology and also requires free certificate targets.
    """
    if property not in PROPERTIES:
        raise ValueError(f"property must be one of {PROPERTIES}")
    budget = ensure_budget(budget)
    t_problems = t.problems()
    if t_problems:
        raise ValueError(f"not a valid triangle: {t_problems}")
    degrees = degrees if degrees is not None else default_degrees(t)
    top = max(degrees) + max((x.hi for x in t.vertices() if x.modules), default=0) + 3
    certs = dict(certificates or {})
    verts = t.vertices()
    for k in (1, 2, 3):
        if k not in certs:
            certs[k] = default_certificate(verts[k - 1], top)
    probes = probes if probes is not None else default_probes(t, property)
    iso = {1: True, 2: True, 3: True}
    rep = ClosureReport(False, property, False, False)
    for k in (1, 2, 3):
        c = certs[k]
        if property == "localizable" and not c.target.is_degreewise_free():
            iso[k] = False
            rep.witnesses.append({"vertex": k, "reason": "certificate target not free"})
        for n in degrees:
            if property == "inert":
                for wname, w in probes:
                    good, info = comparison_is_iso(w, c, n, budget)
                    rep.rows.append({"vertex": k, "probe": wname, "degree": n, "iso": good, **info})
                    if not good:
                        iso[k] = False
                        rep.witnesses.append({"vertex": k, "probe": wname, "degree": n, **info})
            else:
                good, info = _cohomology_is_iso(c, n)
                rep.rows.append({"vertex": k, "probe": "H", "degree": n, "iso": good, **info})
                if not good:
                    iso[k] = False
                    rep.witnesses.append({"vertex": k, "probe": "H", "degree": n, **info})
    rep.hypothesis = iso[1] and iso[3]
    rep.conclusion = iso[2]
    rep.ok = rep.hypothesis and rep.conclusion
    return rep
