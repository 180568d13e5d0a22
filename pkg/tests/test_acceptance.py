"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import json

from locfrac.corpus import run_corpus, universal_probe_functors, verdicts
from locfrac.deligne import (
    Localizer,
    adjunction_transport_check,
    hom_bifunctor_check,
    ind_adjointness_check,
    localize_morphism,
    universal_property_probe,
)
from locfrac.fixtures import bundled_path, load_fixture, load_json
from locfrac.multsys import cross_check_formulas, localized_hom, materialize_localization, validate_mult_system
from locfrac.oracles import right_roof_classes
from locfrac.trider.amalgam import amalgamate_triangles, replace_triangle
from locfrac.trider.complexes import FModule, triangle_build
from locfrac.trider.homotopy import homotopy_classes
from locfrac.trider.io import parse_complex_fixture
from locfrac.trider.parallel import colimit_morphism, complex_parallelize, constant_morphism, hp_probe, reassemble, uniform_bound
from locfrac.trider.probes import inert_retraction_probe, triangle_closure_check
from locfrac.trider.resolutions import ext
from locfrac.trider.rings import CoeffRing

from test_resolutions import ext_oracle

CATEGORY_FIXTURES = ("chain3", "walking_arrow", "idempotent", "fork", "pair_cat")


def report(tag, ok, detail=""):
    print(f"{tag} {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"{tag}: {detail}"


def _systems():
    for name in CATEGORY_FIXTURES:
        fx = load_fixture(name)
        for cname in sorted(fx.classes):
            yield f"{name}.{cname}", fx.cls(cname)


def _complex_fixture(name):
    d, p = load_json(name)
    return parse_complex_fixture(d, str(p))


def test_ac1_localization_oracle():
    bad, pairs, crossed = [], 0, 0
    for label, s in _systems():
        rep = validate_mult_system(s)
        if not rep.right_system:
            continue
        c = s.category
        for x in c.objects:
            for y in c.objects:
                pairs += 1
                got = len(localized_hom(s, x, y, "right", rep))
                want = len(right_roof_classes(c, s.members, x, y))
                if got != want:
                    bad.append((label, x, y, got, want))
        if rep.left_system:
            crossed += 1
            if not cross_check_formulas(s, rep).agree:
                bad.append((label, "cross"))
    report("AC1", not bad and pairs > 0 and crossed > 0, f"pairs={pairs} bilateral_systems={crossed} mismatches={bad}")


def test_ac2_inverses():
    bad, n = [], 0
    for label, s in _systems():
        rep = validate_mult_system(s)
        for side, ok in (("right", rep.right_system), ("left", rep.left_system)):
            if not ok:
                continue
            lz = Localizer(s, side, report=rep)
            for f in s.sorted_members():
                n += 1
                if not localize_morphism(s, f, side, lz).inverse_verified:
                    bad.append((label, side, f))
    report("AC2", not bad and n > 0, f"morphisms={n} failures={bad}")


def test_ac3_ind_adjointness():
    bad, grids = [], 0
    for label, s in _systems():
        if not validate_mult_system(s).right_system:
            continue
        r = ind_adjointness_check(s)
        grids += 1
        if not r.ok or len(r.pairs) != len(s.category.objects) ** 2:
            bad.append((label, r.witnesses[:2]))
    report("AC3", not bad and grids > 0, f"systems={grids} failures={bad}")


def test_ac4_adjunction_transport():
    fx = load_fixture("chain3")
    f, g = fx.adjunctions["reflect"]
    pos = adjunction_transport_check(f, g, fx.cls("u_class"), fx.cls("sub_ids"))
    neg_fx = load_fixture("fork_transport")
    nf, ng = neg_fx.adjunctions["self"]
    neg = adjunction_transport_check(nf, ng, neg_fx.cls("s_both"), neg_fx.cls("ids"), enforce_axioms=False)
    ok = pos.ok and pos.formula.ok and pos.objects.ok and not neg.ok and bool(neg.witnesses)
    report("AC4", ok, f"positive={pos.ok} control_failed={not neg.ok} control_witnesses={len(neg.witnesses)}")


def test_ac5_universal_property():
    rows, bad = [], []
    for name in ("chain3", "walking_arrow"):
        s = load_fixture(name).cls("u_class")
        loc = materialize_localization(s, side="right")
        probes = universal_probe_functors(s, loc)
        if len(probes) < 3:
            bad.append((name, "fewer than 3 functors"))
        for label, g in probes:
            r = universal_property_probe(s, g, loc=loc)
            rows.append((name, label, r.lhs, r.rhs))
            if not r.bijective:
                bad.append((name, label))
    report("AC5", not bad, f"probes={len(rows)} failures={bad}")


def test_ac6_hom_bifunctor():
    s = load_fixture("chain3").cls("u_class")
    loc = materialize_localization(s, side="right")
    reps = [hom_bifunctor_check(s, x, y, loc) for x in s.category.objects for y in s.category.objects]
    bad = [(r.x, r.y) for r in reps if not r.ok]
    report("AC6", len(reps) == 9 and not bad, f"pairs={len(reps)} failures={bad}")


def test_ac7_ext_tables():
    z4, f2e, f2 = CoeffRing("cyclic", 2, 2), CoeffRing("dual", 2), CoeffRing("field", 2)
    frozen = {z4: [2, 2, 2, 2, 2], f2e: [2, 2, 2, 2, 2], f2: [2, 1, 1, 1, 1]}
    bad = []
    for r, want in frozen.items():
        k = FModule(r, (1,))
        for n in range(5):
            d = ext(k, k, n)
            a, b = (sorted(v) for v in d.routes.values())
            if d.size != want[n] or not d.agree or a != b:
                bad.append((r.name, n, "value or routes"))
            if d.size != ext_oracle(r, k, k, n):
                bad.append((r.name, n, "oracle"))
            for margin in (1, 2, 3):
                if sorted(ext(k, k, n, margin).factors) != sorted(d.factors):
                    bad.append((r.name, n, f"margin {margin}"))
    report("AC7", not bad, f"failures={bad}")


def test_ac8_inertness_and_triangles():
    free_fx = _complex_fixture("free_z4")
    retract = {n: inert_retraction_probe(free_fx.complex(n)).ok for n in ("R", "F", "G")}
    closures = {}
    for name in ("triangle_times2", "triangle_rotated"):
        fx = _complex_fixture(name)
        t = triangle_build(fx.map("f"))
        closures[name] = all(triangle_closure_check(u).ok for u in (t, t.rotate(), t.rotate().rotate()))
    neg = _complex_fixture("triangle_bad_certificate")
    cert = {int(k): neg.map(v) for k, v in neg.checks[0]["certificates"].items()}
    rejected = not triangle_closure_check(triangle_build(neg.map(neg.checks[0]["map"])), certificates=cert).ok
    ok = all(retract.values()) and all(closures.values()) and rejected and neg.negative_control
    report("AC8", ok, f"retraction={retract} closure={closures} control_rejected={rejected}")


def test_ac9_amalgamation():
    fx = _complex_fixture("amalgam_replacement")
    t = triangle_build(fx.map("f"))
    _, s1 = replace_triangle(t, 4)
    _, s2 = replace_triangle(t, 6, fx.complex("W"))
    a = amalgamate_triangles(t, s1, s2)
    failed = [x["name"] for x in a.assertions if not x["ok"]]
    report("AC9", a.ok and not failed and a.strategy == "pushout", f"assertions={len(a.assertions)} failed={failed}")


def test_ac10_parallelization():
    fx = _complex_fixture("parallel_two_stage")
    z = fx.ind_complex("Z")
    sys = complex_parallelize(z)
    roundtrip = reassemble(sys, z.ring, z.name).same_as(z)
    width = uniform_bound(sys)
    phis = [constant_morphism(fx.map("f")), constant_morphism(fx.map("g")), colimit_morphism(z)]
    # every chain map between the small complexes over Z/4, as constant systems
    zfx = _complex_fixture("z4_modules")
    for a in ("k", "R", "P", "M"):
        for b in ("k", "R", "P", "M"):
            for u in homotopy_classes(zfx.complex(a), zfx.complex(b)).representatives():
                phis.append(constant_morphism(u))
    probes = [hp_probe(p) for p in phis]
    bad = [k for k, r in enumerate(probes) if not r.ok]
    expected = [True, False, True]
    ok = roundtrip and width == {"lo": 0, "hi": 1, "N": 2} and not bad and [r.iso for r in probes[:3]] == expected
    report("AC10", ok, f"roundtrip={roundtrip} N={width['N']} probes={len(probes)} failures={bad}")


def test_ac11_determinism():
    a, code_a = run_corpus()
    b, code_b = run_corpus()
    c, code_c = run_corpus(tiebreak="reversed")
    same_bytes = json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def tokens(rep):
        return [(f["fixture"], k, ch["result"].get("tokens")) for f in rep["fixtures"] for k, ch in enumerate(f["checks"])
                if ch["check"] == "localize"]

    same_verdicts = verdicts(a) == verdicts(c) and tokens(a) == tokens(c)
    ok = same_bytes and same_verdicts and code_a == code_b == code_c == 0
    report("AC11", ok, f"fixtures={a['summary']['fixtures']} checks={a['summary']['checks']} identical={same_bytes} tiebreak_invariant={same_verdicts}")
