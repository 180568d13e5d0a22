import pytest
from hypothesis import given
from hypothesis import strategies as st

from locfrac.errors import ConstructionFailed
from locfrac.trider.amalgam import (
    TriangleMorphism,
    amalgamate_triangles,
    identity_morphism,
    replace_triangle,
    third_map,
)
from locfrac.trider.complexes import (
    BoundedComplex,
    ChainMap,
    FModule,
    complex_from_module,
    cone,
    cylinder,
    direct_sum,
    free,
    identity_map,
    is_qis,
    pad,
    triangle_build,
)
from locfrac.trider.probes import (
    acyclic_block,
    inert_retraction_probe,
    sample_menu,
    triangle_closure_check,
)
from locfrac.trider.rings import CoeffRing

from strategies import degree_zero_maps, free_two_term, tiny_rings, two_term

Z4 = CoeffRing("cyclic", 2, 2)


def R(degree=0, rank=1):
    return complex_from_module(free(Z4, rank), degree, "R")


def times2():
    return ChainMap(R(), R(), {0: [[2]]})


@given(tiny_rings, st.integers(-3, 3), st.data())
def test_shift_is_invertible(r, n, data):
    x = data.draw(two_term(r))
    assert x.shift(n).shift(-n).same_as(x)
    hx = {d: m.invariants for d, m in x.cohomology().items()}
    hy = {d + n: m.invariants for d, m in x.shift(n).cohomology().items()}
    assert hx == hy


@given(tiny_rings, st.data())
def test_cone_triangle_is_valid_and_rotates(r, data):
    x = data.draw(two_term(r))
    y = data.draw(two_term(r))
    f = data.draw(degree_zero_maps(x, y))
    if f is None:
        return
    t = triangle_build(f)
    assert not t.problems()
    t1 = t.rotate()
    assert not t1.problems()
    assert t1.X.same_as(t.Y)


@given(tiny_rings, st.data())
def test_qis_iff_cone_acyclic(r, data):
    x = data.draw(two_term(r))
    y = data.draw(two_term(r))
    f = data.draw(degree_zero_maps(x, y))
    if f is None:
        return
    assert is_qis(f) == cone(f).is_acyclic()


@given(tiny_rings, st.data())
def test_cylinder_legs(r, data):
    x = data.draw(two_term(r))
    y = data.draw(two_term(r))
    f = data.draw(degree_zero_maps(x, y))
    if f is None:
        return
    cyl, alpha, beta, pi = cylinder(f)
    for m in (alpha, beta, pi):
        assert not m.problems()
    assert is_qis(pi)
    assert alpha.then(pi).same_as(f)


def test_padding_is_a_split_inclusion():
    x = R(0)
    big, inc, proj = pad(x, R(1))
    assert inc.then(proj).same_as(identity_map(x))
    assert is_qis(inc)


def test_acyclic_block_is_not_free():
    a = acyclic_block(Z4, 0)
    assert a.is_acyclic()
    assert not a.is_degreewise_free()


@given(tiny_rings, st.data())
def test_retraction_probe_on_free_complexes(r, data):
    x = data.draw(free_two_term(r, max_rank=1))
    rep = inert_retraction_probe(x)
    assert rep.ok, rep.as_dict()
    assert [s["sample"] for s in rep.samples] == ["identity", "padding", "cylinder", "resolution"]


def test_menu_samples_are_qis():
    x = BoundedComplex(Z4, {-1: free(Z4, 1), 0: free(Z4, 1)}, {-1: [[2]]})
    for name, s in sample_menu(x):
        assert not s.problems(), name
        assert is_qis(s), name


def test_retraction_probe_rejects_non_free():
    with pytest.raises(ValueError):
        inert_retraction_probe(complex_from_module(FModule(Z4, (1,)), 0))


def test_closure_positive_and_rotated():
    t = triangle_build(times2())
    for tri in (t, t.rotate(), t.rotate().rotate()):
        rep = triangle_closure_check(tri)
        assert rep.ok, rep.witnesses
    assert triangle_closure_check(t, "localizable").ok


def test_closure_rejects_bad_certificate():
    t = triangle_build(times2())
    bad = ChainMap(R(), R(), {0: [[2]]})
    rep = triangle_closure_check(t, certificates={2: bad})
    assert rep.hypothesis and not rep.conclusion
    assert any(w["vertex"] == 2 for w in rep.witnesses)


def test_closure_hypothesis_fails_on_non_free_vertices():
    k = complex_from_module(FModule(Z4, (1,)), 0)
    f = ChainMap(R(), k, {0: [[1]]})
    rep = triangle_closure_check(triangle_build(f), "inert")
    assert not rep.ok
    assert not rep.hypothesis
    # every bounded complex has a free replacement, so localizability holds
    assert triangle_closure_check(triangle_build(f), "localizable").ok


def _replacement_triangle():
    x = direct_sum(R(), acyclic_block(Z4, 0))
    f = ChainMap(x, R(), {0: [[2, 0]]})
    return triangle_build(f)


def test_replace_triangle_is_qis_morphism():
    t = _replacement_triangle()
    t2, s = replace_triangle(t, 4)
    assert not s.problems()
    assert s.is_qis()
    assert t2.X.is_degreewise_free()


def test_third_map_completes_identity():
    t = triangle_build(times2())
    w = third_map(t, t, identity_map(t.X), identity_map(t.Y))
    assert not TriangleMorphism(t, t, identity_map(t.X), identity_map(t.Y), w).problems()


def test_amalgamation_pushout():
    t = _replacement_triangle()
    _, s1 = replace_triangle(t, 4)
    _, s2 = replace_triangle(t, 6, padding=R())
    a = amalgamate_triangles(t, s1, s2)
    assert a.strategy == "pushout"
    assert a.ok, [x for x in a.assertions if not x["ok"]]
    names = {x["name"] for x in a.assertions}
    assert {"square.u", "square.v", "square.w", "into1.w.qis", "into2.w.qis"} <= names


def test_amalgamation_identity_paths_agree():
    t = _replacement_triangle()
    i = identity_morphism(t)
    _, s2 = replace_triangle(t, 5)
    assert amalgamate_triangles(t, i, s2).strategy == "identity"
    assert amalgamate_triangles(t, i, s2).ok
    slow = amalgamate_triangles(t, i, i, shortcut=False)
    assert slow.strategy == "pushout" and slow.ok


def test_amalgamation_rejects_non_qis_input():
    t = triangle_build(times2())
    two = ChainMap(R(), R(), {0: [[2]]})
    bad = TriangleMorphism(t, t, two, two, third_map(t, t, two, two))
    with pytest.raises(ValueError):
        amalgamate_triangles(t, bad, identity_morphism(t))


def test_construction_failure_names_step():
    # the first square does not commute up to homotopy, so no third map exists
    t = triangle_build(identity_map(R()))
    k = complex_from_module(FModule(Z4, (1,)), 0)
    t2 = triangle_build(ChainMap(k, k, {0: [[0]]}))
    with pytest.raises(ConstructionFailed) as e:
        third_map(t, t2, ChainMap(R(), k, {0: [[0]]}), ChainMap(R(), k, {0: [[1]]}))
    assert e.value.step == "third_map"
