"""Reading and writing fixture files.

A fixture is a JSON object with ``schema_version`` (currently 1), a category
at the top level (``objects``, ``morphisms``, ``compose``, ``identities``) and
optional sections:

* ``classes``: name -> list of morphism ids, or ``{members, side, category,
  include_identities}``;
* ``categories``: further named categories in the same format;
* ``functors``: name -> ``{source, target, objects, morphisms}``;
* ``ind_objects``: name -> ``{category, index, body: {objects, morphisms}, variance}``;
* ``adjunctions``: name -> ``{left, right}`` functor names;
* ``checks``: the declared checks run by the corpus runner.

Identity composites missing from a ``compose`` table are filled in; explicit
entries always win, so broken identity laws stay visible to validation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import FixtureError
from .fincat import FiniteCategory, Functor, Morphism
from .multsys import SIDES, MorphismClass

SCHEMA_VERSION = 1
MAIN = "main"


@dataclass
class Fixture:
    name: str
    main: FiniteCategory
    categories: dict = field(default_factory=dict)
    classes: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    ind_objects: dict = field(default_factory=dict)
    adjunctions: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    raw: dict = field(default_factory=dict)
    path: str = ""

    def category(self, name: str | None) -> FiniteCategory:
        if name in (None, MAIN, self.name):
            return self.main
        if name not in self.categories:
            raise FixtureError("categories", f"unknown category {name!r}")
        return self.categories[name]

    def cls(self, name: str) -> MorphismClass:
        if name not in self.classes:
            raise FixtureError("classes", f"unknown class {name!r}")
        return self.classes[name]

    def functor(self, name: str) -> Functor:
        if name not in self.functors:
            raise FixtureError("functors", f"unknown functor {name!r}")
        return self.functors[name]

    def ind_object(self, name: str):
        if name not in self.ind_objects:
            raise FixtureError("ind_objects", f"unknown ind-object {name!r}")
        return self.ind_objects[name]


def _need(d: dict, key: str, path: str, kind):
    if not isinstance(d, dict):
        raise FixtureError(path, "expected an object")
    if key not in d:
        raise FixtureError(f"{path}.{key}" if path else key, "missing")
    v = d[key]
    if not isinstance(v, kind):
        raise FixtureError(f"{path}.{key}" if path else key, f"expected {getattr(kind, '__name__', kind)}")
    return v


def _p(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def parse_category(d: dict, path: str = "", name: str = "") -> FiniteCategory:
    objects = _need(d, "objects", path, list)
    for k, o in enumerate(objects):
        if not isinstance(o, str):
            raise FixtureError(_p(_p(path, "objects"), k), "object ids must be strings")
    mors = []
    for k, m in enumerate(_need(d, "morphisms", path, list)):
        mp = _p(_p(path, "morphisms"), k)
        mors.append(Morphism(_need(m, "id", mp, str), _need(m, "src", mp, str), _need(m, "tgt", mp, str)))
    idents = _need(d, "identities", path, dict)
    for k, v in idents.items():
        if not isinstance(v, str):
            raise FixtureError(_p(_p(path, "identities"), k), "expected a morphism id")
    comp = {}
    for k, e in enumerate(d.get("compose", [])):
        ep = _p(_p(path, "compose"), k)
        g, f, gf = _need(e, "g", ep, str), _need(e, "f", ep, str), _need(e, "gf", ep, str)
        comp[(g, f)] = gf
    if "compose" in d and not isinstance(d["compose"], list):
        raise FixtureError(_p(path, "compose"), "expected a list")
    ids = {m.id for m in mors}
    for (g, f), gf in comp.items():
        for mid, role in ((g, "g"), (f, "f"), (gf, "gf")):
            if mid not in ids:
                k = list(comp).index((g, f))
                raise FixtureError(_p(_p(_p(path, "compose"), k), role), f"unknown morphism {mid!r}")
    return FiniteCategory(objects, mors, idents, comp, name=name or d.get("name", ""), fill_identity_laws=True)


def category_to_json(c: FiniteCategory, name: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "name": c.name if name is None else name,
        "objects": list(c.objects),
        "morphisms": [{"id": m.id, "src": m.src, "tgt": m.tgt} for m in c.morphisms],
        "compose": [{"g": g, "f": f, "gf": gf} for (g, f), gf in c.compose_table.items()],
        "identities": dict(c.identities),
    }


def _parse_functor(fx: Fixture, d: dict, path: str, name: str) -> Functor:
    src = fx.category(d.get("source"))
    tgt = fx.category(d.get("target"))
    objs = _need(d, "objects", path, dict)
    mors = _need(d, "morphisms", path, dict)
    return Functor(src, tgt, dict(objs), dict(mors), name=name)


def _parse_class(fx: Fixture, v: Any, path: str, name: str) -> MorphismClass:
    if isinstance(v, list):
        cat, members, side, with_ids = fx.main, v, "bilateral", False
    elif isinstance(v, dict):
        cat = fx.category(v.get("category"))
        members = _need(v, "members", path, list)
        side = v.get("side", "bilateral")
        with_ids = bool(v.get("include_identities", False))
        if side not in SIDES:
            raise FixtureError(_p(path, "side"), f"unknown side {side!r}")
    else:
        raise FixtureError(path, "expected a list or an object")
    for k, m in enumerate(members):
        if not isinstance(m, str) or not cat.has_morphism(m):
            raise FixtureError(_p(_p(path, "members") if isinstance(v, dict) else path, k), f"unknown morphism {m!r}")
    mem = set(members)
    if with_ids:
        mem |= set(cat.identities.values())
    return MorphismClass(cat, frozenset(mem), side, name)


def _parse_ind(fx: Fixture, d: dict, path: str, name: str):
    from .indpro import IndObject

    amb = fx.category(d.get("category"))
    index = parse_category(_need(d, "index", path, dict), _p(path, "index"), name=f"{name}_index")
    body = _need(d, "body", path, dict)
    variance = d.get("variance", "ind")
    if variance not in ("ind", "pro"):
        raise FixtureError(_p(path, "variance"), f"unknown variance {variance!r}")
    fn = Functor(index, amb, dict(_need(body, "objects", _p(path, "body"), dict)), dict(_need(body, "morphisms", _p(path, "body"), dict)), name=name)
    return IndObject(index, fn, variance, name=name)


def parse_fixture(d: Any, path: str = "<memory>") -> Fixture:
    if not isinstance(d, dict):
        raise FixtureError("", "fixture must be a JSON object")
    if "schema_version" not in d:
        raise FixtureError("schema_version", "missing")
    if d["schema_version"] != SCHEMA_VERSION:
        raise FixtureError("schema_version", f"unsupported version {d['schema_version']!r}")
    name = d.get("name", Path(path).stem)
    main = parse_category(d, "", name=name)
    fx = Fixture(name, main, raw=d, path=path)
    for k, v in d.get("categories", {}).items():
        fx.categories[k] = parse_category(v, _p("categories", k), name=k)
    for k, v in d.get("classes", {}).items():
        fx.classes[k] = _parse_class(fx, v, _p("classes", k), k)
    for k, v in d.get("functors", {}).items():
        fx.functors[k] = _parse_functor(fx, v, _p("functors", k), k)
    for k, v in d.get("ind_objects", {}).items():
        fx.ind_objects[k] = _parse_ind(fx, v, _p("ind_objects", k), k)
    for k, v in d.get("adjunctions", {}).items():
        left, right = _need(v, "left", _p("adjunctions", k), str), _need(v, "right", _p("adjunctions", k), str)
        fx.adjunctions[k] = (fx.functor(left), fx.functor(right))
    checks = d.get("checks", [])
    if not isinstance(checks, list):
        raise FixtureError("checks", "expected a list")
    for k, c in enumerate(checks):
        _need(c, "check", _p("checks", k), str)
    fx.checks = checks
    return fx


def bundled_path(name: str) -> Path:
    base = resources.files("locfrac") / "fixtures"
    return Path(str(base / name))


def resolve_path(path: str) -> Path:
    """Accept a real path, or the name of a bundled fixture (``fixtures/x.json`` or ``x``)."""
    p = Path(path)
    if p.exists():
        return p
    stem = p.name if p.suffix == ".json" else p.name + ".json"
    for cand in (bundled_path(stem), bundled_path("complexes") / stem, bundled_path("negative") / stem):
        if cand.exists():
            return cand
    raise FixtureError("", f"fixture not found: {path}")


def load_json(path: str) -> tuple[dict, Path]:
    p = resolve_path(path)
    try:
        with open(p) as fh:
            return json.load(fh), p
    except json.JSONDecodeError as exc:
        raise FixtureError(f"<json line {exc.lineno}>", exc.msg) from exc


def load_fixture(path: str) -> Fixture:
    d, p = load_json(path)
    return parse_fixture(d, str(p))
