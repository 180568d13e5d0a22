"""Brute-force reference computations used to cross-check the engines.

These deliberately avoid the coslice/colimit machinery: roofs are compared by
the classical "common refinement" relation and closed under transitivity with
a plain graph search.
"""

from __future__ import annotations

from collections import deque

from .fincat import FiniteCategory


def _components(nodes: list, linked) -> list[list]:
    seen, comps = set(), []
    for n in nodes:
        if n in seen:
            continue
        comp, queue = [], deque([n])
        seen.add(n)
        while queue:
            a = queue.popleft()
            comp.append(a)
            for b in nodes:
                if b not in seen and linked(a, b):
                    seen.add(b)
                    queue.append(b)
        comps.append(sorted(comp))
    return sorted(comps)


def right_roofs(c: FiniteCategory, mem, x: str, y: str) -> list[tuple[str, str]]:
    return sorted((t, g) for t in c.out_of(y) if t in mem for g in c.hom(x, c.tgt(t)))


def right_roof_classes(c: FiniteCategory, mem, x: str, y: str) -> list[list[tuple[str, str]]]:
    """``(t1, g1) ~ (t2, g2)`` iff some ``a . t1 == b . t2`` in S with ``a . g1 == b . g2``."""

    def linked(r1, r2):
        (t1, g1), (t2, g2) = r1, r2
        for w in c.objects:
            for a in c.hom(c.tgt(t1), w):
                at = c.comp(a, t1)
                if at not in mem:
                    continue
                ag = c.comp(a, g1)
                for b in c.hom(c.tgt(t2), w):
                    if c.comp(b, t2) == at and c.comp(b, g2) == ag:
                        return True
        return False

    roofs = right_roofs(c, mem, x, y)
    return _components(roofs, lambda a, b: linked(a, b) or linked(b, a))


def left_roofs(c: FiniteCategory, mem, x: str, y: str) -> list[tuple[str, str]]:
    return sorted((s, g) for s in c.into(x) if s in mem for g in c.hom(c.src(s), y))


def left_roof_classes(c: FiniteCategory, mem, x: str, y: str) -> list[list[tuple[str, str]]]:
    """``(s1, g1) ~ (s2, g2)`` iff some ``s1 . a == s2 . b`` in S with ``g1 . a == g2 . b``."""

    def linked(r1, r2):
        (s1, g1), (s2, g2) = r1, r2
        for w in c.objects:
            for a in c.hom(w, c.src(s1)):
                sa = c.comp(s1, a)
                if sa not in mem:
                    continue
                ga = c.comp(g1, a)
                for b in c.hom(w, c.src(s2)):
                    if c.comp(s2, b) == sa and c.comp(g2, b) == ga:
                        return True
        return False

    roofs = left_roofs(c, mem, x, y)
    return _components(roofs, lambda a, b: linked(a, b) or linked(b, a))


def brute_force_hom_table(c: FiniteCategory) -> dict:
    return {(x, y): len(c.hom(x, y)) for x in c.objects for y in c.objects}
