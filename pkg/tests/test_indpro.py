from hypothesis import given

from locfrac.deligne import Localizer, ind_adjointness_check, localize_morphism, localize_object
from locfrac.fixtures import load_fixture
from locfrac.indpro import compose, constant, essentially_constant, find_inverse, identity, ind_hom, is_iso
from locfrac.multsys import validate_mult_system

from strategies import poset_systems


@given(poset_systems(max_n=3))
def test_constants_embed_fully_faithfully(s):
    c = s.category
    for x in c.objects:
        for y in c.objects:
            assert len(ind_hom(constant(c, x), constant(c, y))) == len(c.hom(x, y))
            assert len(ind_hom(constant(c, x, "pro"), constant(c, y, "pro"))) == len(c.hom(x, y))


@given(poset_systems(max_n=3))
def test_localized_hom_is_ind_hom_into_r(s):
    if not validate_mult_system(s).right_system:
        return
    rep = ind_adjointness_check(s)
    assert rep.ok, rep.witnesses


@given(poset_systems(max_n=3))
def test_s_morphisms_become_invertible(s):
    rep = validate_mult_system(s)
    if not rep.right_system:
        return
    lz = Localizer(s, "right", report=rep)
    for f in s.sorted_members():
        r = localize_morphism(s, f, "right", lz)
        assert r.inverse_verified and r.completion_independent
        assert is_iso(r.morphism)


def test_inverses_on_both_sides():
    for name, cls in (("chain3", "u_class"), ("walking_arrow", "u_class"), ("idempotent", "e_class")):
        s = load_fixture(name).cls(cls)
        for side in ("right", "left"):
            lz = Localizer(s, side)
            for f in s.sorted_members():
                r = localize_morphism(s, f, side, lz)
                assert r.inverse_verified, (name, side, f)


def test_find_inverse_matches_formula():
    s = load_fixture("chain3").cls("u_class")
    lz = Localizer(s, "right")
    for f in s.sorted_members():
        inv = find_inverse(lz.mor(f))
        assert inv is not None
        assert inv.same_as(lz.inverse(f))
        assert compose(inv, lz.mor(f)).same_as(identity(lz.obj(s.category.src(f))))


def test_chain3_objects():
    fx = load_fixture("chain3")
    s = fx.cls("u_class")
    one = localize_object(s, "1")
    assert one.filtrant and one.localizable and not one.inert
    assert one.representative == "2"
    two = localize_object(s, "2")
    assert two.inert and two.canonical_iso
    w = essentially_constant(fx.ind_object("loc1"))
    assert w is not None and w.representative == "2"
    assert len(ind_hom(fx.ind_object("c0"), fx.ind_object("loc1"))) == 1


def test_fork_object_needs_a_completion():
    s = load_fixture("fork").cls("s_class")
    r = localize_object(s, "y")
    assert r.localizable and r.representative == "z"


def test_dual_of_dual():
    fx = load_fixture("chain3")
    f = fx.ind_object("loc1")
    assert f.dual().dual().variance == f.variance
    assert len(ind_hom(f, f)) == len(ind_hom(f.dual(), f.dual()))
