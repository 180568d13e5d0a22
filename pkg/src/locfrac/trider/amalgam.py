"""Amalgamating two quasi-isomorphisms of triangles out of a common source.

Given ``s1: D -> D'`` and ``s2: D -> D''`` with every component a qis, build
``D'''`` and qis triangle morphisms ``D' -> D'''``, ``D'' -> D'''`` whose two
composites from ``D`` agree up to homotopy:

1. complete the squares on the first two vertices by homotopy pushouts
   ``X''' = cone(X -> X' (+) X'')``, and likewise for ``Y``;
2. solve for ``f''': X''' -> Y'''`` compatible with ``f'`` and ``f''``;
3. let ``D'''`` be the cone triangle of ``f'''``;
4. solve jointly for ``c': Z' -> Z'''`` and ``c'': Z'' -> Z'''`` so that both
   triangle squares commute and ``c' w1 ~ c'' w2``.

Each linear system that has no solution raises ``ConstructionFailed``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import Budget, ConstructionFailed, ensure_budget
from .complexes import (
    BoundedComplex,
    ChainMap,
    Triangle,
    cone,
    direct_sum,
    identity_map,
    is_qis,
    pad,
    triangle_build,
    zero_map,
)
from .homotopy import MapProblem, homotopic, solve_map
from .linalg import mat_neg, zeros
from .resolutions import injective_resolution


@dataclass
class TriangleMorphism:
    """``(u, v, w)`` from ``source`` to ``target``; squares commute up to homotopy."""

    source: Triangle
    target: Triangle
    u: ChainMap
    v: ChainMap
    w: ChainMap

    def components(self) -> tuple:
        return (self.u, self.v, self.w)

    def problems(self) -> list[dict]:
        out = []
        for name, m in zip("uvw", self.components()):
            for p in m.problems():
                out.append({"component": name, **p})
        if out:
            return out
        s, t = self.source, self.target
        squares = {
            "f": (s.f.then(self.v), self.u.then(t.f)),
            "g": (s.g.then(self.w), self.v.then(t.g)),
            "h": (s.h.then(self.u.shift(1)), self.w.then(t.h)),
        }
        for name, (a, b) in squares.items():
            if not homotopic(a, b):
                out.append({"law": "square_not_homotopy_commutative", "square": name})
        return out

    def is_qis(self) -> bool:
        return all(is_qis(m) for m in self.components())

    def then(self, other: "TriangleMorphism") -> "TriangleMorphism":
        return TriangleMorphism(
            self.source, other.target, self.u.then(other.u), self.v.then(other.v), self.w.then(other.w)
        )


def identity_morphism(t: Triangle) -> TriangleMorphism:
    return TriangleMorphism(t, t, identity_map(t.X), identity_map(t.Y), identity_map(t.Z))


def is_identity(m: TriangleMorphism) -> bool:
    s, t = m.source, m.target
    return (
        all(a.same_as(b) for a, b in zip(s.vertices(), t.vertices()))
        and all(c.same_as(identity_map(c.source)) for c in m.components())
    )


def _inclusion(x: BoundedComplex, big: BoundedComplex, offset_of) -> ChainMap:
    mats = {}
    for d in x.modules:
        m = zeros(big.rank(d), x.rank(d))
        o = offset_of(d)
        for k in range(x.rank(d)):
            m[o + k][k] = 1
        mats[d] = m
    return ChainMap(x, big, mats)


def _solve(name: str, prob: MapProblem, budget: Budget) -> ChainMap:
    u, fail = solve_map(prob, budget)
    if u is None:
        raise ConstructionFailed(name, fail)
    return u


def third_map(t1: Triangle, t2: Triangle, u: ChainMap, v: ChainMap, budget: Budget | None = None) -> ChainMap:
    """A ``w: Z1 -> Z2`` completing ``(u, v)`` to a morphism of cone triangles."""
    budget = ensure_budget(budget)
    prob = MapProblem(t1.Z, t2.Z, [
        (None, t1.g, v.then(t2.g)),
        (t2.h, None, t1.h.then(u.shift(1))),
    ])
    return _solve("third_map", prob, budget)


def replace_triangle(t: Triangle, top: int, padding: BoundedComplex | None = None, budget: Budget | None = None):
    """``(D', s: D -> D')`` with ``X', Y'`` injective resolutions (optionally padded)."""
    budget = ensure_budget(budget)

    def resolve(x):
        res = injective_resolution(x, top)
        if not is_qis(res.qis):
            raise ConstructionFailed("resolution", {"complex": x.name, "reason": "not a qis within the window", "top": top})
        q = res.qis
        if padding is not None:
            _, inc, _ = pad(res.complex, padding)
            q = q.then(inc)
        return q

    px, py = resolve(t.X), resolve(t.Y)
    f2 = _solve("replace.f", MapProblem(px.target, py.target, [(None, px, t.f.then(py))]), budget)
    t2 = triangle_build(f2)
    w = third_map(t, t2, px, py, budget)
    return t2, TriangleMorphism(t, t2, px, py, w)


@dataclass
class Amalgam:
    triangle: Triangle
    into1: TriangleMorphism          # D' -> D'''
    into2: TriangleMorphism          # D'' -> D'''
    strategy: str
    assertions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(a["ok"] for a in self.assertions)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "strategy": self.strategy,
            "triangle": {k: v.as_dict() for k, v in zip("XYZ", self.triangle.vertices())},
            "assertions": self.assertions,
        }


def _pushout(x: BoundedComplex, a: ChainMap, b: ChainMap):
    """Homotopy pushout of ``a: x -> x1``, ``b: x -> x2`` with both legs."""
    x1, x2 = a.target, b.target
    s = direct_sum(x1, x2)
    r = x.ring
    mats = {d: a.at(d) + mat_neg(r, b.at(d)) for d in x.modules}
    diff = ChainMap(x, s, mats)
    p = cone(diff)
    # cone^d = x^{d+1} (+) x1^d (+) x2^d
    j1 = _inclusion(x1, p, lambda d: x.rank(d + 1))
    j2 = _inclusion(x2, p, lambda d: x.rank(d + 1) + x1.rank(d))
    return p, j1, j2


def amalgamate_triangles(
    t: Triangle, s1: TriangleMorphism, s2: TriangleMorphism, shortcut: bool = True, budget: Budget | None = None
) -> Amalgam:
    budget = ensure_budget(budget)
    for name, s in (("s1", s1), ("s2", s2)):
        probs = s.problems()
        if probs:
            raise ValueError(f"{name} is not a triangle morphism: {probs}")
        if not s.is_qis():
            raise ValueError(f"{name} has a component that is not a quasi-isomorphism")
    if shortcut and is_identity(s1):
        out = Amalgam(s2.target, s2, identity_morphism(s2.target), "identity")
    elif shortcut and is_identity(s2):
        out = Amalgam(s1.target, identity_morphism(s1.target), s1, "identity")
    else:
        out = _amalgamate(t, s1, s2, budget)
    _assert_all(out, s1, s2)
    return out


def _amalgamate(t: Triangle, s1: TriangleMorphism, s2: TriangleMorphism, budget: Budget) -> Amalgam:
    t1, t2 = s1.target, s2.target
    X3, jx1, jx2 = _pushout(t.X, s1.u, s2.u)
    Y3, jy1, jy2 = _pushout(t.Y, s1.v, s2.v)
    f3 = _solve("f'''", MapProblem(X3, Y3, [
        (None, jx1, t1.f.then(jy1)),
        (None, jx2, t2.f.then(jy2)),
    ]), budget)
    t3 = triangle_build(f3)
    zz = direct_sum(t1.Z, t2.Z)
    i1 = _inclusion(t1.Z, zz, lambda d: 0)
    i2 = _inclusion(t2.Z, zz, lambda d: t1.Z.rank(d))
    eq = s1.w.then(i1) - s2.w.then(i2)
    c = _solve("c', c''", MapProblem(zz, t3.Z, [
        (None, t1.g.then(i1), jy1.then(t3.g)),
        (None, t2.g.then(i2), jy2.then(t3.g)),
        (t3.h, i1, t1.h.then(jx1.shift(1))),
        (t3.h, i2, t2.h.then(jx2.shift(1))),
        (None, eq, zero_map(t.Z, t3.Z)),
    ]), budget)
    c1, c2 = i1.then(c), i2.then(c)
    return Amalgam(t3, TriangleMorphism(t1, t3, jx1, jy1, c1), TriangleMorphism(t2, t3, jx2, jy2, c2), "pushout")


def _assert_all(a: Amalgam, s1: TriangleMorphism, s2: TriangleMorphism) -> None:
    checks = a.assertions
    checks.append({"name": "triangle", "ok": not a.triangle.problems()})
    for name, m in (("into1", a.into1), ("into2", a.into2)):
        probs = m.problems()
        checks.append({"name": f"{name}.squares", "ok": not probs, "problems": probs})
        for comp, c in zip("uvw", m.components()):
            checks.append({"name": f"{name}.{comp}.qis", "ok": is_qis(c)})
    p1, p2 = s1.then(a.into1), s2.then(a.into2)
    for comp, x, y in zip("uvw", p1.components(), p2.components()):
        checks.append({"name": f"square.{comp}", "ok": homotopic(x, y)})
