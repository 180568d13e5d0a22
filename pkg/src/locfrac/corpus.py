"""Running the checks declared in fixture files.

Every fixture carries a ``checks`` list. Each entry names a check type,
its arguments and optionally an ``expect`` object; the check passes when
the law it verifies holds and every expected key matches the computed
result (nested objects are compared key by key, so ``expect`` may name a
subset). Fixtures flagged ``negative_control`` are expected to fail.

Reports are deterministic: no wall-clock time, step counts from the
enumeration budget instead, and paths relative to the corpus root.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from .deligne import (
    Localizer,
    adjunction_transport_check,
    composition_constraint,
    deligne_localize,
    hom_bifunctor_check,
    ind_adjointness_check,
    localize_morphism,
    localize_object,
    sufficiency_analysis,
    universal_property_probe,
)
from .errors import (
    Budget,
    BudgetExhausted,
    ConstructionFailed,
    FixtureError,
    FormulaUnsupported,
    InternalInconsistency,
    LocfracError,
)
from .fincat import classify_filtered, constant_functor, validate_structure
from .fixtures import Fixture, bundled_path, load_json, parse_fixture
from .indpro import constant_embedding, essentially_constant, generalized_adjunction_check, ind_hom
from .multsys import (
    cross_check_formulas,
    localized_hom,
    materialize_localization,
    q_inverts_system,
    validate_mult_system,
)
from .oracles import left_roof_classes, right_roof_classes
from .trider.amalgam import amalgamate_triangles, identity_morphism, replace_triangle
from .trider.complexes import cone, identity_map, triangle_build
from .trider.homotopy import homotopy_classes
from .trider.io import ComplexFixture, is_complex_fixture, parse_complex_fixture, parse_module_name
from .trider.parallel import (
    colimit_morphism,
    complex_parallelize,
    constant_morphism,
    hom_comparison,
    hp_probe,
    reassemble,
    uniform_bound,
)
from .trider.probes import inert_retraction_probe, triangle_closure_check
from .trider.resolutions import derived_hom, ext

log = logging.getLogger("locfrac")

PASS, FAIL, PRECONDITION, BUDGET, PARSE = "pass", "fail", "precondition", "budget", "parse"
EXIT_CODES = {PASS: 0, FAIL: 1, PRECONDITION: 2, BUDGET: 3, PARSE: 4}
# worst first, for picking an exit code
SEVERITY = (PARSE, BUDGET, PRECONDITION, FAIL)


@dataclass
class Outcome:
    ok: bool
    result: dict
    witnesses: list

    @classmethod
    def of(cls, ok: bool, result: dict | None = None, witnesses: list | None = None) -> "Outcome":
        return cls(bool(ok), result or {}, witnesses or [])


def expect_mismatches(expect, actual, path: str = "") -> list[dict]:
    """Keys of ``expect`` whose value differs from ``actual``."""
    if isinstance(expect, dict) and isinstance(actual, dict):
        out = []
        for k, v in expect.items():
            key = f"{path}.{k}" if path else str(k)
            if k not in actual:
                out.append({"key": key, "expected": v, "actual": None, "reason": "missing"})
            else:
                out += expect_mismatches(v, actual[k], key)
        return out
    if expect != actual:
        return [{"key": path, "expected": expect, "actual": actual}]
    return []


# ---------------------------------------------------------------------------
# category checks


def _side(fx: Fixture, chk: dict, s) -> str:
    if "side" in chk:
        return chk["side"]
    return "right" if validate_mult_system(s).right_system else "left"


def _pairs(c) -> list[tuple[str, str]]:
    return [(x, y) for x in c.objects for y in c.objects]


def c_structure(fx, chk, budget, tb):
    rep = validate_structure(fx.main, [fx.functor(n) for n in chk.get("functors", [])])
    return Outcome.of(rep.valid, {"valid": rep.valid}, rep.structural + rep.violations)


def c_filtered(fx, chk, budget, tb):
    r = classify_filtered(fx.main)
    res = {"nonempty": r.nonempty, "connected": r.connected, "PF1": r.pf1, "PF2": r.pf2, "C'": r.c_prime, "filtrant": r.filtrant}
    return Outcome.of(True, res, [r.witnesses] if r.witnesses else [])


def c_system(fx, chk, budget, tb):
    rep = validate_mult_system(fx.cls(chk["class"]))
    res = dict(rep.flags, right_system=rep.right_system, left_system=rep.left_system)
    return Outcome.of(True, res, [rep.witnesses] if rep.witnesses else [])


def c_roof_oracle(fx, chk, budget, tb):
    s = fx.cls(chk["class"])
    rep = validate_mult_system(s)
    c = s.category
    sides = [(side, oracle) for side, oracle, ok in (
        ("right", right_roof_classes, rep.right_system),
        ("left", left_roof_classes, rep.left_system),
    ) if ok]
    wit, compared = [], 0
    for side, oracle in sides:
        for x, y in _pairs(c):
            budget.tick("roof oracle")
            got = len(localized_hom(s, x, y, side, rep, budget))
            want = len(oracle(c, s.members, x, y))
            compared += 1
            if got != want:
                wit.append({"side": side, "x": x, "y": y, "formula": got, "oracle": want})
    return Outcome.of(bool(sides) and not wit, {"sides": [s for s, _ in sides], "pairs": compared}, wit)


def c_cross_formulas(fx, chk, budget, tb):
    rep = cross_check_formulas(fx.cls(chk["class"]))
    return Outcome.of(rep.agree, {"agree": rep.agree, "pairs": rep.pairs}, rep.witnesses)


def c_hom(fx, chk, budget, tb):
    s = fx.cls(chk["class"])
    h = localized_hom(s, chk["x"], chk["y"], chk.get("formula", "right"), budget=budget)
    return Outcome.of(True, {"size": len(h)})


def c_localize(fx, chk, budget, tb):
    s = fx.cls(chk["class"])
    loc = materialize_localization(s, side=chk.get("side"), tiebreak=tb, verify=True, budget=budget)
    cat = loc.category
    sizes = {f"{x},{y}": len(cat.hom(x, y)) for x, y in _pairs(cat)}
    bad = q_inverts_system(loc)
    res = {
        "side": loc.side,
        "objects": len(cat.objects),
        "morphisms": len(cat.morphisms),
        "hom_sizes": sizes,
        "tokens": sorted(m.id for m in cat.morphisms),
    }
    return Outcome.of(not bad, res, [{"not_inverted": bad}] if bad else [])


def c_inverses(fx, chk, budget, tb):
    s = fx.cls(chk["class"])
    side = _side(fx, chk, s)
    lz = Localizer(s, side, tb)
    wit = []
    for f in sorted(s.members):
        budget.tick("inverse")
        r = localize_morphism(s, f, side, lz)
        if not (r.inverse_verified and r.completion_independent):
            wit.append({"morphism": f, "inverse_verified": r.inverse_verified, "completion_independent": r.completion_independent})
    return Outcome.of(not wit, {"side": side, "morphisms": len(s.members)}, wit)


def c_ind_adjointness(fx, chk, budget, tb):
    rep = ind_adjointness_check(fx.cls(chk["class"]), budget=budget)
    return Outcome.of(rep.ok, {"ok": rep.ok, "pairs": rep.pairs}, rep.witnesses)


def c_localize_object(fx, chk, budget, tb):
    s = fx.cls(chk["class"])
    side = chk.get("side", "right")
    r = localize_object(s, chk["x"], side, Localizer(s, side, tb), budget)
    return Outcome.of(True, r.as_dict())


def c_ind_hom(fx, chk, budget, tb):
    hs = ind_hom(fx.ind_object(chk["x"]), fx.ind_object(chk["y"]), budget)
    return Outcome.of(True, {"size": len(hs)})


def c_essentially_constant(fx, chk, budget, tb):
    w = essentially_constant(fx.ind_object(chk["x"]), budget)
    return Outcome.of(True, {"essentially_constant": w is not None, "representative": None if w is None else w.representative})


def c_deligne(fx, chk, budget, tb):
    r = deligne_localize(
        fx.functor(chk["functor"]), fx.cls(chk["class"]), fx.cls(chk["target_class"]), chk["x"], chk.get("side", "right"), budget=budget
    )
    return Outcome.of(True, r.as_dict())


def c_hom_bifunctor(fx, chk, budget, tb):
    s = fx.cls(chk["class"])
    loc = materialize_localization(s, side="right", tiebreak=tb, budget=budget)
    wit = []
    for x, y in _pairs(s.category):
        r = hom_bifunctor_check(s, x, y, loc, budget=budget)
        if not r.ok:
            wit.append(r.as_dict())
    return Outcome.of(not wit, {"pairs": len(s.category.objects) ** 2}, wit)


def c_sufficiency(fx, chk, budget, tb):
    f = fx.functor(chk["functor"]) if "functor" in chk else None
    s2 = fx.cls(chk["target_class"]) if "target_class" in chk else None
    r = sufficiency_analysis(fx.cls(chk["class"]), chk["subset"], chk.get("side", "right"), f, s2, budget)
    hold = r.consequences["predictions_hold"]
    return Outcome.of(hold, dict(r.flags, predictions_hold=hold), r.consequences["failed_predictions"])


def c_adjunction(fx, chk, budget, tb):
    f, g = fx.adjunctions[chk["adjunction"]]
    r = adjunction_transport_check(
        f, g, fx.cls(chk["class"]), fx.cls(chk["target_class"]), chk.get("enforce_axioms", True), budget
    )
    res = {"ok": r.ok, "formula": r.formula.ok, "objects": r.objects.ok}
    return Outcome.of(r.ok, res, r.witnesses)


def c_generalized_adjunction(fx, chk, budget, tb):
    f, g = fx.adjunctions[chk["adjunction"]]
    r = generalized_adjunction_check(constant_embedding(f, "pro"), constant_embedding(g, "ind"), budget=budget)
    return Outcome.of(r.ok, {"ok": r.ok, "pairs": r.pairs}, r.witnesses)


def universal_probe_functors(s, loc) -> list:
    """The localizing functor itself and the constant functors ``C_S -> C``."""
    c = s.category
    out = [("r_S", Localizer(s, "right").on_localized(loc))]
    out += [(f"const_{x}", constant_functor(loc.category, c, x, name=f"const_{x}")) for x in c.objects]
    return out


def c_universal(fx, chk, budget, tb):
    s = fx.cls(chk["class"])
    loc = materialize_localization(s, side="right", tiebreak=tb, budget=budget)
    res, wit = {}, []
    for name, g in universal_probe_functors(s, loc):
        r = universal_property_probe(s, g, loc=loc, budget=budget)
        res[name] = {"lhs": r.lhs, "rhs": r.rhs, "bijective": r.bijective}
        if not r.bijective:
            wit.append({"functor": name, **r.as_dict()})
    return Outcome.of(not wit, {"functors": len(res), "probes": res}, wit)


def c_composition(fx, chk, budget, tb):
    s, s1, s2 = fx.cls(chk["class"]), fx.cls(chk["middle_class"]), fx.cls(chk["last_class"])
    f, f2 = fx.functor(chk["first"]), fx.functor(chk["second"])
    objs = chk.get("objects", list(s.category.objects))
    res, wit = {}, []
    for x in objs:
        r = composition_constraint(f, f2, s, s1, s2, x, budget)
        res[x] = {"valid": r.valid, "iso": r.iso}
        if not r.valid:
            wit.append({"x": x, **r.as_dict()})
    return Outcome.of(not wit, res, wit)


CATEGORY_CHECKS = {
    "structure": c_structure,
    "filtered": c_filtered,
    "system": c_system,
    "roof_oracle": c_roof_oracle,
    "cross_formulas": c_cross_formulas,
    "hom": c_hom,
    "localize": c_localize,
    "inverses": c_inverses,
    "ind_adjointness": c_ind_adjointness,
    "localize_object": c_localize_object,
    "ind_hom": c_ind_hom,
    "essentially_constant": c_essentially_constant,
    "deligne": c_deligne,
    "hom_bifunctor": c_hom_bifunctor,
    "sufficiency": c_sufficiency,
    "adjunction": c_adjunction,
    "generalized_adjunction": c_generalized_adjunction,
    "universal": c_universal,
    "composition": c_composition,
}


# ---------------------------------------------------------------------------
# complex checks


def _orders(r, exps) -> list[int]:
    return [r.p**e for e in sorted(exps, reverse=True)]


def k_cohomology(fx, chk, budget, tb):
    x = fx.complex(chk["complex"])
    h = {str(d): m.orders for d, m in sorted(x.cohomology().items())}
    return Outcome.of(True, {"cohomology": h})


def k_cone_identity(fx, chk, budget, tb):
    wit = [{"complex": n} for n in chk["complexes"] if not cone(identity_map(fx.complex(n))).is_acyclic()]
    return Outcome.of(not wit, {"complexes": len(chk["complexes"])}, wit)


def k_shift_roundtrip(fx, chk, budget, tb):
    wit = []
    for name in chk["complexes"]:
        x = fx.complex(name)
        for n in chk.get("shifts", [1]):
            y = x.shift(n)
            h = {d + n: m.invariants for d, m in y.cohomology().items()}
            if not y.shift(-n).same_as(x) or h != {d: m.invariants for d, m in x.cohomology().items()}:
                wit.append({"complex": name, "shift": n})
    return Outcome.of(not wit, {}, wit)


def k_homotopy_classes(fx, chk, budget, tb):
    hc = homotopy_classes(fx.complex(chk["x"]), fx.complex(chk["y"]), chk.get("n", 0))
    return Outcome.of(True, {"size": hc.size, "factors": _orders(fx.ring, hc.exps)})


def _derived_table(compute, degrees, margins, r):
    """Sizes over ``degrees``; both routes and every window margin must agree."""
    sizes, factors, wit = [], {}, []
    for n in degrees:
        try:
            base = compute(n, 0)
        except InternalInconsistency as e:
            wit += e.witnesses
            sizes.append(None)
            continue
        sizes.append(base.size)
        factors[str(n)] = _orders(r, base.factors)
        for m in margins:
            other = compute(n, m)
            if sorted(other.factors) != sorted(base.factors):
                wit.append({"degree": n, "margin": m, "reason": "window dependence",
                            "base": _orders(r, base.factors), "enlarged": _orders(r, other.factors)})
    return sizes, factors, wit


def k_ext(fx, chk, budget, tb):
    r = fx.ring
    m, nm = parse_module_name(r, chk["src"]), parse_module_name(r, chk["tgt"])
    degrees = chk.get("degrees", [0])
    sizes, factors, wit = _derived_table(lambda n, mg: ext(m, nm, n, mg), degrees, chk.get("margins", []), r)
    res = {"sizes": sizes, "factors": factors}
    if 0 in degrees:
        # Ext^0 is Hom: |Hom(R/pi^a, R/pi^b)| = p^min(a, b)
        hom = 1
        for a in m.exps:
            for b in nm.exps:
                hom *= r.p ** min(a, b)
        res["hom"] = hom
        if sizes[degrees.index(0)] != hom:
            wit.append({"reason": "Ext^0 differs from Hom", "ext0": sizes[degrees.index(0)], "hom": hom})
    return Outcome.of(not wit, res, wit)


def k_derived_hom(fx, chk, budget, tb):
    x, y = fx.complex(chk["x"]), fx.complex(chk["y"])
    sizes, factors, wit = _derived_table(
        lambda n, mg: derived_hom(x, y, n, mg), chk.get("degrees", [0]), chk.get("margins", []), fx.ring
    )
    return Outcome.of(not wit, {"sizes": sizes, "factors": factors}, wit)


def k_retraction(fx, chk, budget, tb):
    r = inert_retraction_probe(fx.complex(chk["complex"]), budget=budget)
    d = r.as_dict()
    return Outcome.of(r.ok, {"ok": r.ok, "samples": {s["sample"]: s["ok"] for s in d["samples"]}}, d["witnesses"])


def k_triangle_closure(fx, chk, budget, tb):
    t = triangle_build(fx.map(chk["map"]))
    for _ in range(chk.get("rotate", 0)):
        t = t.rotate()
    certs = {int(k): fx.map(v) for k, v in chk.get("certificates", {}).items()}
    r = triangle_closure_check(t, chk.get("property", "inert"), certs or None, budget=budget)
    res = {"ok": r.ok, "hypothesis": r.hypothesis, "conclusion": r.conclusion, "rows": len(r.rows)}
    return Outcome.of(r.ok, res, r.witnesses)


def k_amalgamate(fx, chk, budget, tb):
    t = triangle_build(fx.map(chk["map"]))
    morphisms = []
    for spec in chk["replacements"]:
        if spec.get("identity"):
            morphisms.append(identity_morphism(t))
        else:
            pad_with = fx.complex(spec["padding"]) if "padding" in spec else None
            morphisms.append(replace_triangle(t, spec["top"], pad_with, budget)[1])
    a = amalgamate_triangles(t, morphisms[0], morphisms[1], chk.get("shortcut", True), budget)
    failed = [x for x in a.assertions if not x["ok"]]
    res = {"ok": a.ok, "strategy": a.strategy, "assertions": len(a.assertions),
           "widths": [v.width() for v in a.triangle.vertices()]}
    return Outcome.of(a.ok, res, failed)


def k_parallelize(fx, chk, budget, tb):
    z = fx.ind_complex(chk["ind_complex"])
    sys = complex_parallelize(z)
    back = reassemble(sys, z.ring, z.name)
    rt = back.same_as(z)
    res = dict(uniform_bound(sys), roundtrip=rt)
    probs = sys.problems()
    return Outcome.of(rt and not probs, res, probs)


def k_hom_comparison(fx, chk, budget, tb):
    z, x = fx.ind_complex(chk["ind_complex"]), fx.complex(chk["x"])
    res, wit = {}, []
    for n in chk.get("degrees", [0]):
        r = hom_comparison(x, z, n, budget)
        res[str(n)] = {"colim_of_hom": r.colim_of_hom, "hom_of_colim": r.hom_of_colim}
        if not r.ok:
            wit.append(r.as_dict())
    return Outcome.of(not wit, res, wit)


def k_hp_probe(fx, chk, budget, tb):
    phi = constant_morphism(fx.map(chk["map"])) if "map" in chk else colimit_morphism(fx.ind_complex(chk["ind_complex"]))
    r = hp_probe(phi, budget)
    res = {"ok": r.ok, "iso": r.iso, "all_hp_iso": all(r.hp_iso.values()),
           "inverse_verified": r.inverse_verified, "filtered": r.filtered}
    wit = [] if r.ok else [r.as_dict()]
    return Outcome.of(r.ok, res, wit)


COMPLEX_CHECKS = {
    "cohomology": k_cohomology,
    "cone_identity": k_cone_identity,
    "shift_roundtrip": k_shift_roundtrip,
    "homotopy_classes": k_homotopy_classes,
    "ext": k_ext,
    "derived_hom": k_derived_hom,
    "retraction": k_retraction,
    "triangle_closure": k_triangle_closure,
    "amalgamate": k_amalgamate,
    "parallelize": k_parallelize,
    "hom_comparison": k_hom_comparison,
    "hp_probe": k_hp_probe,
}


# ---------------------------------------------------------------------------
# running


def run_check(fx, chk: dict, index: int, budget: int | None = None, tiebreak: str = "normal") -> dict:
    table = COMPLEX_CHECKS if isinstance(fx, ComplexFixture) else CATEGORY_CHECKS
    kind = chk["check"]
    entry = {"check": kind, "args": {k: v for k, v in chk.items() if k not in ("check", "expect")}}
    b = Budget(budget)
    fn = table.get(kind)
    try:
        if fn is None:
            raise FixtureError(f"checks[{index}].check", f"unknown check type {kind!r}")
        out = fn(fx, chk, b, tiebreak)
    except KeyError as e:
        entry.update(status=PARSE, error=f"checks[{index}].{e.args[0]}: missing")
    except FixtureError as e:
        entry.update(status=PARSE, error=str(e))
    except BudgetExhausted as e:
        entry.update(status=BUDGET, error=str(e))
    except FormulaUnsupported as e:
        entry.update(status=PRECONDITION, error=str(e))
    except (ValueError, ConstructionFailed) as e:
        detail = getattr(e, "detail", None)
        entry.update(status=PRECONDITION if isinstance(e, ValueError) else FAIL, error=str(e))
        if detail:
            entry["witnesses"] = [detail]
    except (InternalInconsistency, LocfracError) as e:
        entry.update(status=FAIL, error=str(e), witnesses=list(getattr(e, "witnesses", [])))
    else:
        mism = expect_mismatches(chk.get("expect", {}), out.result)
        entry.update(
            status=PASS if out.ok and not mism else FAIL,
            law=out.ok,
            result=out.result,
            witnesses=out.witnesses,
        )
        if mism:
            entry["expect_mismatches"] = mism
    entry["steps"] = b.used
    return entry


def load_any(path: str):
    d, p = load_json(path)
    if is_complex_fixture(d):
        return parse_complex_fixture(d, str(p))
    return parse_fixture(d, str(p))


def run_fixture(path, budget: int | None = None, tiebreak: str = "normal", label: str | None = None) -> dict:
    rep = {"fixture": label or str(path)}
    try:
        d, _ = load_json(str(path))
        control = bool(d.get("negative_control", False)) if isinstance(d, dict) else False
        rep["negative_control"] = control
        fx = parse_complex_fixture(d, str(path)) if is_complex_fixture(d) else parse_fixture(d, str(path))
    except FixtureError as e:
        rep.update(kind=None, status=PARSE, error=str(e), key_path=e.path, checks=[])
        rep.setdefault("negative_control", False)
        return rep
    rep["kind"] = "complexes" if isinstance(fx, ComplexFixture) else "category"
    checks = []
    for k, chk in enumerate(fx.checks):
        log.info("%s: %s", rep["fixture"], chk["check"])
        checks.append(run_check(fx, chk, k, budget, tiebreak))
    bad = [c["status"] for c in checks if c["status"] != PASS]
    rep["status"] = next((s for s in SEVERITY if s in bad), PASS)
    rep["checks"] = checks
    return rep


def default_corpus() -> Path:
    return bundled_path("")


def run_corpus(root=None, budget: int | None = None, tiebreak: str = "normal") -> tuple[dict, int]:
    """Run every fixture below ``root``; return the report and an exit code.

    The run succeeds when every ordinary fixture passes and every negative
    control fails.
    """
    root = Path(root) if root is not None else default_corpus()
    if not root.is_dir():
        raise FixtureError(str(root), "corpus directory not found")
    files = sorted(root.rglob("*.json"), key=lambda p: p.relative_to(root).as_posix())
    fixtures = [run_fixture(p, budget, tiebreak, p.relative_to(root).as_posix()) for p in files]
    warnings = []
    if not fixtures:
        warnings.append("zero fixtures found")
        log.warning("no fixtures under %s", root)
    regular = [f for f in fixtures if not f["negative_control"]]
    controls = [f for f in fixtures if f["negative_control"]]
    reg_bad = [f for f in regular if f["status"] != PASS]
    ctl_passed = [f for f in controls if f["status"] == PASS]
    ctl_bad = [f for f in controls if f["status"] not in (PASS, FAIL)]
    n_checks = sum(len(f["checks"]) for f in fixtures)
    summary = {
        "fixtures": len(fixtures),
        "checks": n_checks,
        "passed": sum(1 for f in fixtures for c in f["checks"] if c["status"] == PASS),
        "failed": sum(1 for f in fixtures for c in f["checks"] if c["status"] != PASS),
        "controls": len(controls),
        "controls_failed": len(controls) - len(ctl_passed),
        "exactly_controls_fail": not reg_bad and not ctl_passed and not ctl_bad,
        "steps": sum(c["steps"] for f in fixtures for c in f["checks"]),
    }
    statuses = [f["status"] for f in reg_bad + ctl_bad] + [FAIL] * len(ctl_passed)
    worst = next((s for s in SEVERITY if s in statuses), PASS)
    report = {
        "command": "corpus",
        "config": {"budget": budget, "tiebreak": tiebreak},
        "summary": summary,
        "warnings": warnings,
        "fixtures": fixtures,
    }
    return report, EXIT_CODES[worst]


def verdicts(report: dict) -> list[tuple]:
    """``(fixture, check index, status)`` for comparing runs."""
    return [(f["fixture"], k, c["status"]) for f in report["fixtures"] for k, c in enumerate(f["checks"])]
