from hypothesis import given
from hypothesis import strategies as st

from locfrac.trider.complexes import FModule, cohomology_at, complex_from_module, cone
from locfrac.trider.resolutions import derived_hom, ext, injective_resolution, projective_resolution
from locfrac.trider.rings import CoeffRing

from strategies import modules, rings, tiny_rings, two_term


def _cyclic_ext_size(r, a, b, n):
    """``|Ext^n(R/pi^a, R/pi^b)|`` from the periodic free resolution, by enumeration.

    ``... -> R --pi^(L-a)--> R --pi^a--> R -> R/pi^a`` gives the cochain complex
    ``R/pi^b --pi^a--> R/pi^b --pi^(L-a)--> R/pi^b --pi^a--> ...``.
    """
    L = r.length
    elems = sorted({r.reduce(x, b) for x in r.elements()})

    def times(v):
        return lambda x: r.reduce(r.mul(r.pow_pi(v), x), b)

    def ker(f):
        return sum(1 for x in elems if f(x) == 0)

    def img(f):
        return len({f(x) for x in elems})

    if a == L:
        return len(elems) if n == 0 else 1
    out_map = times(a) if n % 2 == 0 else times(L - a)
    if n == 0:
        return ker(out_map)
    in_map = times(a) if n % 2 == 1 else times(L - a)
    return ker(out_map) // img(in_map)


def ext_oracle(r, m, nm, n):
    size = 1
    for a in m.exps:
        for b in nm.exps:
            size *= _cyclic_ext_size(r, a, b, n)
    return size


def test_ext_tables():
    z4, f2e, f2 = CoeffRing("cyclic", 2, 2), CoeffRing("dual", 2), CoeffRing("field", 2)
    for r in (z4, f2e):
        k = FModule(r, (1,))
        assert [ext(k, k, n).size for n in range(5)] == [2] * 5
    k = FModule(f2, (1,))
    assert [ext(k, k, n).size for n in range(5)] == [2, 1, 1, 1, 1]
    z8 = CoeffRing("cyclic", 2, 3)
    assert [ext(FModule(z8, (2,)), FModule(z8, (1,)), n).size for n in range(4)] == [2] * 4
    assert [ext(FModule(z8, (2,)), FModule(z8, (3,)), n).size for n in range(3)] == [4, 1, 1]


def test_oracle_against_frozen_values():
    z9 = CoeffRing("cyclic", 3, 2)
    k = FModule(z9, (1,))
    assert [ext_oracle(z9, k, k, n) for n in range(4)] == [3, 3, 3, 3]


@given(rings, st.integers(0, 3), st.data())
def test_ext_matches_periodic_resolution(r, n, data):
    m = data.draw(modules(r, max_rank=2, allow_zero=False))
    nm = data.draw(modules(r, max_rank=2, allow_zero=False))
    d = ext(m, nm, n)
    assert d.agree
    assert d.size == ext_oracle(r, m, nm, n)


@given(tiny_rings, st.integers(0, 2), st.integers(1, 3), st.data())
def test_window_independence(r, n, margin, data):
    m = data.draw(modules(r, max_rank=2, allow_zero=False))
    nm = data.draw(modules(r, max_rank=2, allow_zero=False))
    assert sorted(ext(m, nm, n, margin).factors) == sorted(ext(m, nm, n).factors)


@given(tiny_rings, st.data())
def test_ext0_is_hom(r, data):
    m = data.draw(modules(r, max_rank=2, allow_zero=False))
    nm = data.draw(modules(r, max_rank=2, allow_zero=False))
    hom = 1
    for a in m.exps:
        for b in nm.exps:
            hom *= r.p ** min(a, b)
    assert ext(m, nm, 0).size == hom


@given(tiny_rings, st.data())
def test_injective_resolution_is_qis_below_cut(r, data):
    x = data.draw(two_term(r))
    top = x.hi + 3
    res = injective_resolution(x, top)
    assert res.complex.is_degreewise_free()
    assert not res.qis.problems()
    c = cone(res.qis)
    for d in range(x.lo - 2, top - 1):
        assert cohomology_at(c, d).size == 1


@given(tiny_rings, st.data())
def test_projective_resolution_is_qis_above_cut(r, data):
    x = data.draw(two_term(r))
    bottom = x.lo - 3
    res = projective_resolution(x, bottom)
    assert res.complex.is_degreewise_free()
    assert not res.qis.problems()
    c = cone(res.qis)
    for d in range(bottom + 1, x.hi + 2):
        assert cohomology_at(c, d).size == 1


@given(tiny_rings, st.integers(-1, 2), st.data())
def test_derived_hom_routes_agree(r, n, data):
    x = data.draw(two_term(r, data.draw(st.integers(-1, 1))))
    y = data.draw(two_term(r, data.draw(st.integers(-1, 1))))
    d = derived_hom(x, y, n)
    assert d.routes["injective"] == d.routes["projective"]


def test_free_input_resolves_to_itself():
    r = CoeffRing("cyclic", 2, 2)
    x = complex_from_module(FModule(r, (2, 2)), 0)
    assert injective_resolution(x, 5).trivial
    assert projective_resolution(x, -5).trivial
