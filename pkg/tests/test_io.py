import json

import pytest

from locfrac.errors import FixtureError
from locfrac.fixtures import category_to_json, load_fixture, parse_category, parse_fixture, resolve_path
from locfrac.trider.io import exponent, parse_complex_fixture, parse_module_name
from locfrac.trider.rings import CoeffRing

Z4 = CoeffRing("cyclic", 2, 2)
Z8 = CoeffRing("cyclic", 2, 3)


def _arrow():
    return {
        "schema_version": 1,
        "objects": ["a", "b"],
        "morphisms": [{"id": "1a", "src": "a", "tgt": "a"}, {"id": "1b", "src": "b", "tgt": "b"}, {"id": "f", "src": "a", "tgt": "b"}],
        "identities": {"a": "1a", "b": "1b"},
    }


def _path_of(d, parse=parse_fixture):
    with pytest.raises(FixtureError) as e:
        parse(d)
    return e.value.path


def test_orders_become_exponents():
    assert exponent(Z8, 8, "x") == 3
    assert exponent(Z8, 2, "x") == 1
    for bad in (1, 3, 6, 16, "4"):
        with pytest.raises(FixtureError):
            exponent(Z8, bad, "x")
    assert parse_module_name(Z4, "k").exps == (1,)
    assert parse_module_name(Z4, "r").exps == (2,)
    assert parse_module_name(Z4, "4,2").exps == (2, 1)
    assert parse_module_name(Z8, "z4").exps == (2,)


def test_schema_version_is_required():
    d = _arrow()
    del d["schema_version"]
    assert _path_of(d) == "schema_version"
    d["schema_version"] = 2
    assert _path_of(d) == "schema_version"
    assert _path_of({"ring": "z4"}, parse_complex_fixture) == "schema_version"


def test_category_errors_name_the_key():
    d = _arrow()
    d["compose"] = [{"g": "f", "f": "1a"}]
    assert _path_of(d) == "compose[0].gf"
    d["compose"] = [{"g": "f", "f": "nope", "gf": "f"}]
    assert _path_of(d) == "compose[0].f"
    d = _arrow()
    d["morphisms"][2] = {"id": "f", "src": "a"}
    assert _path_of(d) == "morphisms[2].tgt"
    d = _arrow()
    d["classes"] = {"S": ["f", "g"]}
    assert _path_of(d) == "classes.S[1]"


def test_complex_errors_name_the_key():
    base = {"schema_version": 1, "ring": "z4"}
    d = dict(base, complexes={"X": {"degrees": {"0": {"factors": [3]}}}})
    assert _path_of(d, parse_complex_fixture) == "complexes.X.degrees.0.factors[0]"
    d = dict(base, complexes={"X": {"degrees": {"0": [4], "1": [4]}, "differentials": {"0": [[1, 0]]}}})
    assert _path_of(d, parse_complex_fixture) == "complexes.X.differentials.0"
    d = dict(base, complexes={"X": {"degrees": {"0": [4], "1": [4], "2": [4]}, "differentials": {"0": [[1]], "1": [[1]]}}})
    assert _path_of(d, parse_complex_fixture) == "complexes.X.differentials"
    d = dict(base, complexes={"X": {"degrees": {"0": [4]}}}, maps={"m": {"source": "X", "target": "Y"}})
    assert _path_of(d, parse_complex_fixture) == "complexes.Y"
    assert _path_of(dict(base, ring="z6"), parse_complex_fixture) == "ring"


def test_top_level_complex_is_main():
    d = {"schema_version": 1, "ring": "f2e", "degrees": {"-1": [4], "0": [4]}, "differentials": {"-1": [[2]]}}
    fx = parse_complex_fixture(d)
    x = fx.complex("main")
    assert x.lo == -1 and x.hi == 0
    assert x.d(-1) == [[2]]


def test_category_json_round_trip():
    c = load_fixture("chain3").main
    again = parse_category(json.loads(json.dumps(category_to_json(c))))
    assert again.objects == c.objects
    assert dict(again.compose_table) == dict(c.compose_table)


def test_bundled_names_resolve():
    for name in ("chain3", "z4_modules", "fork_transport", "fixtures/walking_arrow.json"):
        assert resolve_path(name).exists()
    with pytest.raises(FixtureError):
        resolve_path("no_such_fixture")
