"""Reading complex fixtures.

A complex fixture carries ``schema_version``, a ``ring`` (``{kind, p, k}``
or a short name such as ``"z4"``) and any of

* ``complexes``: name -> ``{degrees: {d: {factors}}, differentials: {d: matrix}}``;
* ``maps``: name -> ``{source, target, components: {d: matrix}}``;
* ``ind_complexes``: name -> ``{index, degrees: {d: {modules: {i: {factors}},
  transitions: {m: matrix}}}, differentials: {d: {i: matrix}}}`` where
  ``index`` is a category in the usual fixture format or
  ``{poset: {elements, leq}}``;
* ``checks``.

Matrix entries are ring elements in their integer encoding (``a + p b``
for ``a + b eps``). ``factors`` lists cyclic-factor orders: ``[4, 2]`` over ``Z/4`` is
``Z/4 (+) Z/2``. A single complex may also sit at the top level
(``degrees`` and ``differentials`` next to ``ring``); it is named ``main``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import FixtureError
from ..fincat import FiniteCategory, poset_category
from ..fixtures import parse_category
from .complexes import BoundedComplex, ChainMap, FModule, check_chain_map, check_complex
from .parallel import IndComplex
from .rings import CoeffRing, ring_from_spec

SCHEMA_VERSION = 1


@dataclass
class ComplexFixture:
    name: str
    ring: CoeffRing
    complexes: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    ind_complexes: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    negative_control: bool = False
    path: str = ""

    def complex(self, name: str) -> BoundedComplex:
        if name not in self.complexes:
            raise FixtureError(f"complexes.{name}", "unknown complex")
        return self.complexes[name]

    def map(self, name: str) -> ChainMap:
        if name not in self.maps:
            raise FixtureError(f"maps.{name}", "unknown map")
        return self.maps[name]

    def ind_complex(self, name: str) -> IndComplex:
        if name not in self.ind_complexes:
            raise FixtureError(f"ind_complexes.{name}", "unknown ind-complex")
        return self.ind_complexes[name]


def is_complex_fixture(d: dict) -> bool:
    return isinstance(d, dict) and "ring" in d


def exponent(r: CoeffRing, order, path: str) -> int:
    if not isinstance(order, int) or order < 2:
        raise FixtureError(path, f"factor order must be an integer >= 2, got {order!r}")
    e, n = 0, order
    while n % r.p == 0:
        n //= r.p
        e += 1
    if n != 1 or e > r.length:
        raise FixtureError(path, f"{order} is not the order of a cyclic {r.name}-module")
    return e


def parse_module(r: CoeffRing, d, path: str) -> FModule:
    if isinstance(d, dict):
        if "factors" not in d:
            raise FixtureError(f"{path}.factors", "missing")
        facs = d["factors"]
    else:
        facs = d
    if not isinstance(facs, list):
        raise FixtureError(f"{path}.factors", "expected a list of orders")
    return FModule(r, tuple(exponent(r, o, f"{path}.factors[{k}]") for k, o in enumerate(facs)))


def parse_module_name(r: CoeffRing, spec: str) -> FModule:
    """``k`` (residue field), ``r`` (the ring), ``z<n>`` (cyclic of order n) or ``"4,2"``."""
    s = str(spec).lower().strip()
    if s == "k":
        return FModule(r, (1,))
    if s in ("r", "free"):
        return FModule(r, (r.length,))
    if s.startswith("z"):
        s = s[1:]
    try:
        orders = [int(t) for t in s.split(",") if t]
    except ValueError:
        raise FixtureError("module", f"cannot read module {spec!r}") from None
    return FModule(r, tuple(exponent(r, o, "module") for o in orders))


def _matrix(r: CoeffRing, a, rows: int, cols: int, path: str) -> list:
    if not isinstance(a, list) or len(a) != rows or any(not isinstance(row, list) or len(row) != cols for row in a):
        raise FixtureError(path, f"expected a {rows}x{cols} matrix")
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            if not isinstance(x, int):
                raise FixtureError(f"{path}[{i}][{j}]", "expected an integer")
    return [[r.norm(x) for x in row] for row in a]


def _degree(key, path: str) -> int:
    try:
        return int(key)
    except (TypeError, ValueError):
        raise FixtureError(path, f"degree {key!r} is not an integer") from None


def parse_complex(r: CoeffRing, d: dict, path: str, name: str = "") -> BoundedComplex:
    if not isinstance(d, dict):
        raise FixtureError(path, "expected an object")
    degs = d.get("degrees")
    if not isinstance(degs, dict):
        raise FixtureError(f"{path}.degrees", "missing or not an object")
    mods = {_degree(k, f"{path}.degrees.{k}"): parse_module(r, v, f"{path}.degrees.{k}") for k, v in degs.items()}
    diffs = {}
    for k, a in (d.get("differentials") or {}).items():
        deg = _degree(k, f"{path}.differentials.{k}")
        src = mods.get(deg)
        tgt = mods.get(deg + 1)
        rows, cols = (tgt.rank if tgt else 0), (src.rank if src else 0)
        diffs[deg] = _matrix(r, a, rows, cols, f"{path}.differentials.{k}")
    x = BoundedComplex(r, mods, diffs, name=name)
    probs = x.problems()
    if probs:
        raise FixtureError(f"{path}.differentials", f"not a complex: {probs[0]}")
    return check_complex(x)


def parse_map(r: CoeffRing, fx: ComplexFixture, d: dict, path: str) -> ChainMap:
    for key in ("source", "target"):
        if key not in d:
            raise FixtureError(f"{path}.{key}", "missing")
    x, y = fx.complex(d["source"]), fx.complex(d["target"])
    deg = d.get("degree", 0)
    mats = {}
    for k, a in (d.get("components") or {}).items():
        dd = _degree(k, f"{path}.components.{k}")
        mats[dd] = _matrix(r, a, y.rank(dd + deg), x.rank(dd), f"{path}.components.{k}")
    f = ChainMap(x, y, mats, deg)
    probs = f.problems()
    if probs:
        raise FixtureError(f"{path}.components", f"not a chain map: {probs[0]}")
    return check_chain_map(f) if deg == 0 else f


def parse_index(d: dict, path: str) -> FiniteCategory:
    if not isinstance(d, dict):
        raise FixtureError(path, "expected an object")
    if "poset" in d:
        p = d["poset"]
        elems = p.get("elements")
        if not isinstance(elems, list):
            raise FixtureError(f"{path}.poset.elements", "expected a list")
        return poset_category([str(e) for e in elems], [tuple(map(str, pr)) for pr in p.get("leq", [])], name="index")
    return parse_category(d, path, "index")


def parse_ind_complex(r: CoeffRing, d: dict, path: str, name: str) -> IndComplex:
    idx = parse_index(d.get("index"), f"{path}.index")
    modules, trans = {}, {}
    for k, v in (d.get("degrees") or {}).items():
        deg = _degree(k, f"{path}.degrees.{k}")
        ms = v.get("modules") or {}
        modules[deg] = {}
        for i in idx.objects:
            modules[deg][i] = parse_module(r, ms.get(i, []), f"{path}.degrees.{k}.modules.{i}")
        trans[deg] = {}
        for m, a in (v.get("transitions") or {}).items():
            if not idx.has_morphism(m):
                raise FixtureError(f"{path}.degrees.{k}.transitions.{m}", "unknown index morphism")
            src, tgt = modules[deg][idx.src(m)], modules[deg][idx.tgt(m)]
            trans[deg][m] = _matrix(r, a, tgt.rank, src.rank, f"{path}.degrees.{k}.transitions.{m}")
    diffs = {}
    for k, v in (d.get("differentials") or {}).items():
        deg = _degree(k, f"{path}.differentials.{k}")
        diffs[deg] = {}
        for i, a in v.items():
            if i not in idx.objects:
                raise FixtureError(f"{path}.differentials.{k}.{i}", "unknown index object")
            src = modules.get(deg, {}).get(i, FModule(r, ()))
            tgt = modules.get(deg + 1, {}).get(i, FModule(r, ()))
            diffs[deg][i] = _matrix(r, a, tgt.rank, src.rank, f"{path}.differentials.{k}.{i}")
    z = IndComplex(idx, r, modules, trans, diffs, name=name)
    probs = z.problems()
    if probs:
        raise FixtureError(path, f"not an ind-complex: {probs[0]}")
    return z


def parse_complex_fixture(d, path: str = "<memory>") -> ComplexFixture:
    if not isinstance(d, dict):
        raise FixtureError("<root>", "expected an object")
    if d.get("schema_version") != SCHEMA_VERSION:
        if "schema_version" not in d:
            raise FixtureError("schema_version", "missing")
        raise FixtureError("schema_version", f"unsupported version {d['schema_version']!r}")
    try:
        r = ring_from_spec(d["ring"])
    except (KeyError, TypeError, ValueError) as e:
        raise FixtureError("ring", str(e)) from None
    fx = ComplexFixture(d.get("name", ""), r, negative_control=bool(d.get("negative_control", False)), path=path)
    if "degrees" in d:
        fx.complexes["main"] = parse_complex(r, d, "<root>", "main")
    for name, c in (d.get("complexes") or {}).items():
        fx.complexes[name] = parse_complex(r, c, f"complexes.{name}", name)
    for name, m in (d.get("maps") or {}).items():
        fx.maps[name] = parse_map(r, fx, m, f"maps.{name}")
    for name, z in (d.get("ind_complexes") or {}).items():
        fx.ind_complexes[name] = parse_ind_complex(r, z, f"ind_complexes.{name}", name)
    checks = d.get("checks", [])
    if not isinstance(checks, list):
        raise FixtureError("checks", "expected a list")
    for k, c in enumerate(checks):
        if not isinstance(c, dict) or not isinstance(c.get("check"), str):
            raise FixtureError(f"checks[{k}].check", "missing")
    fx.checks = checks
    return fx
