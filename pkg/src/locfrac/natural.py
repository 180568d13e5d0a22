"""Enumeration of natural transformations between Ind-valued functors."""

from __future__ import annotations

from .errors import Budget, ensure_budget
from .indpro import IndValuedFunctor, compose, ind_hom


def check_naturality(a: IndValuedFunctor, b: IndValuedFunctor, comps: dict) -> list[str]:
    """Morphisms of the source at which ``comps: a -> b`` fails to be natural."""
    bad = []
    for m in a.source.morphisms:
        if not compose(b.mor(m.id), comps[m.src]).same_as(compose(comps[m.tgt], a.mor(m.id))):
            bad.append(m.id)
    return bad


def enumerate_nat(a: IndValuedFunctor, b: IndValuedFunctor, budget: Budget | None = None) -> list[dict]:
    """All natural transformations ``a -> b`` as dicts object -> IndMorphism.

    Components are chosen object by object in id order; every morphism
    whose ends are both decided is checked immediately.
    """
    budget = ensure_budget(budget)
    c = a.source
    objs = list(c.objects)
    pos = {x: k for k, x in enumerate(objs)}
    cands = {x: ind_hom(a.ob(x), b.ob(x), budget) for x in objs}
    checks = {x: [m for m in c.morphisms if max(pos[m.src], pos[m.tgt]) == pos[x]] for x in objs}
    out: list[dict] = []

    def rec(k: int, acc: dict):
        if k == len(objs):
            out.append(dict(acc))
            return
        x = objs[k]
        for phi in cands[x]:
            budget.tick("natural transformations")
            acc[x] = phi
            if all(
                compose(b.mor(m.id), acc[m.src]).same_as(compose(acc[m.tgt], a.mor(m.id))) for m in checks[x]
            ):
                rec(k + 1, acc)
            del acc[x]

    rec(0, {})
    return out


def nat_key(comps: dict) -> tuple:
    return tuple((x, comps[x].components) for x in sorted(comps))
