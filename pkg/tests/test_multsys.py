import pytest
from hypothesis import given

from locfrac.errors import FormulaUnsupported
from locfrac.fincat import validate_structure
from locfrac.fixtures import load_fixture
from locfrac.multsys import (
    MorphismClass,
    cross_check_formulas,
    localized_hom,
    materialize_localization,
    q_inverts_system,
    validate_mult_system,
)
from locfrac.oracles import left_roof_classes, right_roof_classes

from strategies import poset_systems

FIXTURES = ("chain3", "walking_arrow", "idempotent", "fork")


def _systems():
    for name in FIXTURES:
        fx = load_fixture(name)
        for cname, s in fx.classes.items():
            yield f"{name}.{cname}", s


@given(poset_systems())
def test_generated_class_is_closed(s):
    rep = validate_mult_system(s)
    assert rep.holds("S1", "S2")


@given(poset_systems())
def test_right_formula_counts_roof_classes(s):
    rep = validate_mult_system(s)
    c = s.category
    for side, oracle, ok in (("right", right_roof_classes, rep.right_system), ("left", left_roof_classes, rep.left_system)):
        if not ok:
            continue
        for x in c.objects:
            for y in c.objects:
                assert len(localized_hom(s, x, y, side, rep)) == len(oracle(c, s.members, x, y))


def test_fixture_systems_match_roof_oracle():
    compared = 0
    for label, s in _systems():
        rep = validate_mult_system(s)
        c = s.category
        if rep.right_system:
            for x in c.objects:
                for y in c.objects:
                    assert len(localized_hom(s, x, y, "right", rep)) == len(right_roof_classes(c, s.members, x, y)), (label, x, y)
                    compared += 1
        if rep.left_system:
            for x in c.objects:
                for y in c.objects:
                    assert len(localized_hom(s, x, y, "left", rep)) == len(left_roof_classes(c, s.members, x, y)), (label, x, y)
    assert compared > 0


@given(poset_systems())
def test_three_formulas_agree_on_two_sided_systems(s):
    rep = validate_mult_system(s)
    if not (rep.right_system and rep.left_system):
        return
    assert cross_check_formulas(s, rep).agree


def test_cross_formulas_on_fixtures():
    for name, cls in (("chain3", "u_class"), ("walking_arrow", "u_class"), ("idempotent", "e_class")):
        rep = cross_check_formulas(load_fixture(name).cls(cls))
        assert rep.agree, rep.witnesses


@given(poset_systems(max_n=3))
def test_materialized_category_inverts_s(s):
    rep = validate_mult_system(s)
    if not rep.right_system:
        return
    loc = materialize_localization(s, side="right", report=rep)
    assert validate_structure(loc.category, [loc.Q]).valid
    assert q_inverts_system(loc) == []
    c = s.category
    for x in c.objects:
        for y in c.objects:
            assert len(loc.category.hom(x, y)) == len(right_roof_classes(c, s.members, x, y))


def test_tiebreak_changes_nothing_visible():
    for label, s in _systems():
        rep = validate_mult_system(s)
        if not rep.right_system:
            continue
        a = materialize_localization(s, side="right", tiebreak="normal")
        b = materialize_localization(s, side="right", tiebreak="reversed")
        assert a.category.tables() == b.category.tables(), label


def test_roof_tokens():
    s = load_fixture("walking_arrow").cls("u_class")
    loc = materialize_localization(s, side="right")
    ids = [m.id for m in loc.category.morphisms]
    assert all(t.startswith("<") and "|" in t and t.endswith(">") for t in ids)
    assert len(loc.category.hom("b", "a")) == 1


def test_fork_is_one_sided():
    fx = load_fixture("fork")
    rep = validate_mult_system(fx.cls("s_both"))
    assert rep.right_system and not rep.left_system
    assert rep.witnesses
    with pytest.raises(FormulaUnsupported) as e:
        localized_hom(fx.cls("s_both"), "x", "y", "left")
    assert e.value.failed


def test_pair_category_fails_ore_condition():
    rep = validate_mult_system(load_fixture("pair_cat").cls("f_class"))
    assert not rep.flags["right_S3"] and not rep.flags["left_S3"]
    assert "right_S3" in rep.witnesses


def test_identities_localize_to_the_category():
    for name in FIXTURES:
        fx = load_fixture(name)
        c = fx.main
        s = MorphismClass.identities(c)
        loc = materialize_localization(s, side="right")
        assert {(x, y): len(loc.category.hom(x, y)) for x in c.objects for y in c.objects} == {
            (x, y): len(c.hom(x, y)) for x in c.objects for y in c.objects
        }
