from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from locfrac.errors import Budget, BudgetExhausted
from locfrac.fincat import (
    FiniteCategory,
    Morphism,
    SetDiagram,
    classify_filtered,
    poset_category,
    set_colimit,
    set_limit,
    terminal_objects,
    validate_structure,
)
from locfrac.fixtures import load_fixture

from strategies import posets


def _arrow(compose=None):
    mors = [Morphism("1a", "a", "a"), Morphism("1b", "b", "b"), Morphism("f", "a", "b")]
    table = {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("f", "1a"): "f", ("1b", "f"): "f"}
    table.update(compose or {})
    return FiniteCategory(["a", "b"], mors, {"a": "1a", "b": "1b"}, table)


def _laws(rep):
    return {v["law"] for v in rep.violations}


def test_bundled_categories_are_valid():
    for name in ("chain3", "walking_arrow", "idempotent", "fork", "pair_cat"):
        fx = load_fixture(name)
        assert validate_structure(fx.main, list(fx.functors.values())).valid, name


def test_broken_identity_law_is_reported():
    c = _arrow({("f", "1a"): "1b"})
    rep = validate_structure(c)
    assert not rep.valid
    assert _laws(rep) == {"typing"}
    c = FiniteCategory(
        ["a"], [Morphism("1", "a", "a"), Morphism("e", "a", "a")], {"a": "1"},
        {("1", "1"): "1", ("e", "1"): "e", ("1", "e"): "1", ("e", "e"): "e"},
    )
    rep = validate_structure(c)
    assert "left_identity" in _laws(rep)
    assert any(v["pair"] == ["1", "e"] for v in rep.violations)


def test_missing_entries_and_dangling_ids():
    c = _arrow()
    del c.compose_table[("1b", "f")]
    assert {"law": "total", "pair": ["1b", "f"]}.items() <= validate_structure(c).violations[0].items()
    d = FiniteCategory(["a"], [Morphism("1", "a", "a")], {"a": "2"}, {("1", "1"): "1"})
    assert validate_structure(d).structural[0]["kind"] == "dangling_identity"


def test_associativity_failure_has_a_triple():
    # a monoid table {1, e, z} where (e.e).z != e.(e.z)
    els = ["1", "e", "z"]
    t = {("1", x): x for x in els} | {(x, "1"): x for x in els}
    t |= {("e", "e"): "z", ("e", "z"): "e", ("z", "e"): "z", ("z", "z"): "z"}
    c = FiniteCategory(["*"], [Morphism(x, "*", "*") for x in els], {"*": "1"}, t)
    rep = validate_structure(c)
    assert "associativity" in _laws(rep)
    assert all(len(v["triple"]) == 3 for v in rep.violations if v["law"] == "associativity")


@given(posets())
def test_posets_are_categories(c):
    assert validate_structure(c).valid
    assert validate_structure(c.opposite()).valid
    assert c.opposite().opposite() is c


@given(posets())
def test_filtered_iff_directed(c):
    directed = all(any(c.hom(x, k) and c.hom(y, k) for k in c.objects) for x in c.objects for y in c.objects)
    rep = classify_filtered(c)
    assert rep.pf2
    assert rep.filtrant == directed
    assert rep.filtrant_via_c_prime == rep.filtrant
    if terminal_objects(c):
        assert rep.filtrant


def test_pair_category_is_not_filtered():
    rep = classify_filtered(load_fixture("pair_cat").main)
    assert not rep.pf2 and "PF2" in rep.witnesses


def _diagram(c, n, data):
    sets = {x: tuple(range(data.draw(st.integers(1, n)))) for x in c.objects}
    # order-preserving maps along a poset compose, so pick a monotone map per generator
    maps = {}
    for m in c.morphisms:
        if m.src == m.tgt:
            maps[m.id] = {t: t for t in sets[m.src]}
        else:
            maps[m.id] = {t: min(t, len(sets[m.tgt]) - 1) for t in sets[m.src]}
    return SetDiagram(c, sets, maps)


@given(posets(3), st.data())
def test_colimit_and_limit_by_enumeration(c, data):
    d = _diagram(c, 3, data)
    if d.problems():
        return
    col = set_colimit(d)
    # brute force: connected components of the element graph
    keys = [(x, t) for x in c.objects for t in d.sets[x]]
    comp = {k: {k} for k in keys}
    for m in c.morphisms:
        for t, u in d.maps[m.id].items():
            a, b = comp[(m.src, t)], comp[(m.tgt, u)]
            if a is not b:
                a |= b
                for k in b:
                    comp[k] = a
    assert len(col) == len({id(v) for v in comp.values()})
    lim = set_limit(d)
    fams = [f for f in product(*[d.sets[x] for x in c.objects])
            if all(d.maps[m.id][f[c.objects.index(m.src)]] == f[c.objects.index(m.tgt)] for m in c.morphisms)]
    assert len(lim) == len(fams)


def test_budget_stops_enumeration():
    c = poset_category(["0", "1"], [("0", "1")])
    d = SetDiagram(c, {"0": (0, 1), "1": (0,)}, {"id_0": {0: 0, 1: 1}, "id_1": {0: 0}, "0<1": {0: 0, 1: 0}})
    assert len(set_colimit(d)) == 1
    with pytest.raises(BudgetExhausted):
        set_colimit(d, Budget(2))
