from hypothesis import given

from locfrac.corpus import universal_probe_functors
from locfrac.deligne import (
    adjunction_transport_check,
    composition_constraint,
    deligne_localize,
    hom_bifunctor_check,
    sufficiency_analysis,
    universal_property_probe,
)
from locfrac.fincat import constant_functor
from locfrac.fixtures import load_fixture
from locfrac.indpro import constant_embedding, generalized_adjunction_check
from locfrac.multsys import materialize_localization, validate_mult_system

from strategies import poset_systems


def test_deligne_value_on_chain3():
    fx = load_fixture("chain3")
    r = deligne_localize(fx.functor("F"), fx.cls("u_class"), fx.cls("sub_ids"), "1")
    assert r.gv == "2"
    assert r.rho is not None


def test_universal_property_for_several_functors():
    for name in ("chain3", "walking_arrow"):
        s = load_fixture(name).cls("u_class")
        loc = materialize_localization(s, side="right")
        probes = universal_probe_functors(s, loc)
        assert len(probes) >= 3
        for label, g in probes:
            r = universal_property_probe(s, g, loc=loc)
            assert r.bijective, (name, label, r.witnesses)
            assert r.lhs == r.rhs


def test_deligne_mode_probe():
    fx = load_fixture("chain3")
    s, s2, f = fx.cls("u_class"), fx.cls("sub_ids"), fx.functor("F")
    loc = materialize_localization(s, side="right")
    tgt = materialize_localization(s2, side="right").category
    for y in tgt.objects:
        g = constant_functor(loc.category, tgt, y)
        r = universal_property_probe(s, g, "deligne", f, s2, loc=loc)
        assert r.bijective, r.witnesses


@given(poset_systems(max_n=3))
def test_hom_bifunctor_on_random_systems(s):
    rep = validate_mult_system(s)
    if not (rep.right_system and rep.left_system):
        return
    loc = materialize_localization(s, side="right", report=rep)
    for x in s.category.objects:
        for y in s.category.objects:
            r = hom_bifunctor_check(s, x, y, loc)
            assert r.ok, r.as_dict()


def test_hom_bifunctor_chain3_all_pairs():
    s = load_fixture("chain3").cls("u_class")
    loc = materialize_localization(s, side="right")
    reps = [hom_bifunctor_check(s, x, y, loc) for x in s.category.objects for y in s.category.objects]
    assert len(reps) == 9
    assert all(r.ok for r in reps)
    assert all(r.collapsed == r.right == r.bilateral == r.materialized for r in reps)


def test_adjunction_transport_two_routes():
    fx = load_fixture("chain3")
    f, g = fx.adjunctions["reflect"]
    r = adjunction_transport_check(f, g, fx.cls("u_class"), fx.cls("sub_ids"))
    assert r.ok, r.witnesses
    assert r.formula.ok and r.objects.ok
    ga = generalized_adjunction_check(constant_embedding(f, "pro"), constant_embedding(g, "ind"))
    assert ga.ok


def test_transport_fails_without_the_left_axioms():
    fx = load_fixture("fork_transport")
    f, g = fx.adjunctions["self"]
    r = adjunction_transport_check(f, g, fx.cls("s_both"), fx.cls("ids"), enforce_axioms=False)
    assert r.formula.ok
    assert not r.objects.ok or r.witnesses
    assert not r.ok and r.witnesses


def test_sufficiency_predictions():
    s = load_fixture("chain3").cls("u_class")
    r = sufficiency_analysis(s, ["0", "2"])
    assert r.flags["i"] and r.flags["ii"] and r.flags["iii"]
    assert r.consequences["predictions_hold"]


def test_composition_constraint():
    fx = load_fixture("chain3")
    for x in fx.main.objects:
        r = composition_constraint(
            fx.functor("F"), fx.functor("H"), fx.cls("u_class"), fx.cls("sub_ids"), fx.cls("point_ids"), x
        )
        assert r.valid and r.delta_identity, r.as_dict()
        if r.gv_available:
            assert r.strictness_consistent
