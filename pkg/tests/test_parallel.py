import json

from hypothesis import given
from hypothesis import strategies as st

from locfrac.fincat import poset_category
from locfrac.fixtures import bundled_path
from locfrac.trider.complexes import ChainMap, identity_map
from locfrac.trider.io import parse_complex_fixture
from locfrac.trider.parallel import (
    IndSystem,
    colimit_complex,
    colimit_morphism,
    complex_parallelize,
    constant_morphism,
    hom_comparison,
    hp_probe,
    reassemble,
    set_colimit_sizes,
    uniform_bound,
)

from strategies import degree_zero_maps, tiny_rings, two_term


def _fixture():
    with open(bundled_path("complexes") / "parallel_two_stage.json") as fh:
        return parse_complex_fixture(json.load(fh))


def _two_stage(f: ChainMap) -> IndSystem:
    idx = poset_category(["0", "1"], [("0", "1")], name="I")
    maps = {idx.ident("0"): identity_map(f.source), idx.ident("1"): identity_map(f.target)}
    maps[idx.hom("0", "1")[0]] = f
    return IndSystem(idx, {"0": f.source, "1": f.target}, maps)


@given(tiny_rings, st.data())
def test_parallelize_inverts_reassemble(r, data):
    x = data.draw(two_term(r))
    y = data.draw(two_term(r, data.draw(st.integers(-1, 1))))
    f = data.draw(degree_zero_maps(x, y))
    if f is None:
        return
    sys = _two_stage(f)
    z = reassemble(sys, r, "Z")
    assert not z.problems()
    back = complex_parallelize(z)
    for i in ("0", "1"):
        assert back.complexes[i].same_as(sys.complexes[i])
    assert reassemble(back, r, "Z").same_as(z)


@given(tiny_rings, st.data())
def test_uniform_bound_covers_every_level(r, data):
    lo = data.draw(st.integers(-2, 2))
    x = data.draw(two_term(r, lo))
    y = data.draw(two_term(r, lo + 1))
    f = data.draw(degree_zero_maps(x, y))
    if f is None:
        return
    b = uniform_bound(_two_stage(f))
    for c in (x, y):
        for d in c.modules:
            assert b["lo"] <= d <= b["hi"]
    assert b["N"] == b["hi"] - b["lo"] + 1


def test_fixture_round_trip_and_width():
    z = _fixture().ind_complex("Z")
    sys = complex_parallelize(z)
    assert reassemble(sys, z.ring, z.name).same_as(z)
    assert uniform_bound(sys)["N"] == 2


def test_colimit_module_matches_set_colimit():
    z = _fixture().ind_complex("Z")
    cz, qs = colimit_complex(z)
    sizes = set_colimit_sizes(z)
    for d, s in sizes.items():
        assert cz.module(d).size == s
    # the index has a terminal object, so the colimit has the top level's sizes
    top = complex_parallelize(z).complexes["1"]
    assert {d: cz.module(d).size for d in top.modules} == {d: top.module(d).size for d in top.modules}


def test_hom_commutes_with_the_colimit():
    fx = _fixture()
    z, x = fx.ind_complex("Z"), fx.complex("R")
    for n in range(-1, 3):
        rep = hom_comparison(x, z, n)
        assert rep.ok, rep.as_dict()
        assert rep.colim_of_hom == rep.hom_of_colim


def test_hp_probe_detects_isomorphisms():
    fx = _fixture()
    good = hp_probe(constant_morphism(fx.map("f")))
    assert good.ok and good.iso and good.inverse_verified
    bad = hp_probe(constant_morphism(fx.map("g")))
    assert bad.ok and not bad.iso and bad.inverse_verified is None
    assert not all(bad.hp_iso.values())


def test_hp_probe_on_cocone():
    rep = hp_probe(colimit_morphism(_fixture().ind_complex("Z")))
    assert rep.ok and rep.iso and rep.filtered
    assert rep.terminal[0] == "1"
