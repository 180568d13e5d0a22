"""Command-line front end; every verb prints one JSON report on stdout.

Exit codes: 0 pass, 1 law failure, 2 axiom or precondition failure,
3 budget exhausted, 4 parse error (the message names the key path).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus
from .deligne import adjunction_transport_check, deligne_localize, universal_property_probe
from .errors import (
    Budget,
    BudgetExhausted,
    ConstructionFailed,
    FixtureError,
    FormulaUnsupported,
    InternalInconsistency,
    LocfracError,
)
from .fincat import TIEBREAKS, constant_functor
from .fixtures import Fixture, category_to_json
from .indpro import ind_hom
from .multsys import localized_hom, materialize_localization, validate_mult_system
from .trider.io import ComplexFixture, parse_module_name
from .trider.resolutions import derived_hom, ext
from .trider.rings import ring_from_spec

log = logging.getLogger("locfrac")


@dataclass
class RunConfig:
    command: str
    fixtures: list = field(default_factory=list)
    budget: int | None = None
    output: str | None = None
    tiebreak: str = "normal"

    def __post_init__(self):
        if self.budget is not None and self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.tiebreak not in TIEBREAKS:
            raise ValueError(f"tie-break must be one of {TIEBREAKS}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(4, f"{self.prog}: error: {message}\n")


def degree_range(text: str) -> list[int]:
    """``3`` or ``0..4`` (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return list(range(int(a), int(b) + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a degree or range: {text!r}") from None


def _fixture(path: str) -> Fixture:
    fx = corpus.load_any(path)
    if not isinstance(fx, Fixture):
        raise FixtureError("<root>", "expected a category fixture")
    return fx


def _complex_fixture(path: str) -> ComplexFixture:
    fx = corpus.load_any(path)
    if not isinstance(fx, ComplexFixture):
        raise FixtureError("ring", "expected a complex fixture")
    return fx


# ---------------------------------------------------------------------------
# verbs; each returns (ok, result, witnesses)


def cmd_check_system(a, budget):
    s = _fixture(a.fixture).cls(a.cls)
    rep = validate_mult_system(s)
    need = {
        "right": rep.right_system,
        "left": rep.left_system,
        "bilateral": rep.right_system and rep.left_system,
        "any": rep.right_system or rep.left_system,
    }[a.side]
    if not need:
        raise FormulaUnsupported(a.side, rep.failures_for("right" if a.side == "any" else a.side))
    return True, rep.as_dict(), []


def cmd_hom(a, budget):
    s = _fixture(a.fixture).cls(a.cls)
    h = localized_hom(s, a.x, a.y, a.formula, budget=budget)
    return True, {"size": len(h), "classes": [c.token for c in h.classes()]}, []


def cmd_localize(a, budget):
    s = _fixture(a.fixture).cls(a.cls)
    loc = materialize_localization(s, side=a.side, tiebreak=a.tiebreak, budget=budget)
    doc = category_to_json(loc.category)
    if a.out:
        with open(a.out, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        log.info("wrote %s", a.out)
    res = {"side": loc.side, "objects": len(doc["objects"]), "morphisms": len(doc["morphisms"]), "out": a.out}
    if not a.out:
        res["category"] = doc
    return True, res, []


def cmd_ind_hom(a, budget):
    fx = _fixture(a.fixture)
    hs = ind_hom(fx.ind_object(a.X), fx.ind_object(a.Y), budget)
    return True, {"size": len(hs), "morphisms": [h.tokens() for h in hs]}, []


def cmd_deligne(a, budget):
    fx = _fixture(a.fixture)
    r = deligne_localize(fx.functor(a.functor), fx.cls(a.system), fx.cls(a.system_target), a.object, a.side, budget=budget)
    return True, r.as_dict(), []


def cmd_probe_universal(a, budget):
    fx = _fixture(a.fixture)
    s = fx.cls(a.system)
    loc = materialize_localization(s, side="right", tiebreak=a.tiebreak, budget=budget)
    f = fx.functor(a.functor) if a.functor else None
    s2 = fx.cls(a.system_target) if a.system_target else None
    if a.mode == "localizing":
        menu = corpus.universal_probe_functors(s, loc)
    else:
        if f is None or s2 is None:
            raise FixtureError("--functor", "deligne mode needs --functor and --system-target")
        # G lands in the localized target C'_{S'}
        tgt = materialize_localization(s2, side="right", tiebreak=a.tiebreak, budget=budget).category
        menu = [(f"const_{y}", constant_functor(loc.category, tgt, y)) for y in tgt.objects]
    res, wit = {}, []
    for name, g in menu:
        r = universal_property_probe(s, g, a.mode, f, s2, loc, budget)
        res[name] = r.as_dict()
        if not r.bijective:
            wit.append({"functor": name, **r.as_dict()})
    return not wit, {"mode": a.mode, "probes": res}, wit


def cmd_check_adjunction(a, budget):
    fx = _fixture(a.fixture)
    if a.adjunction not in fx.adjunctions:
        raise FixtureError(f"adjunctions.{a.adjunction}", "unknown adjunction")
    f, g = fx.adjunctions[a.adjunction]
    r = adjunction_transport_check(f, g, fx.cls(a.system), fx.cls(a.system_target), not a.no_enforce, budget)
    return r.ok, r.as_dict(), r.witnesses


def cmd_ext(a, budget):
    try:
        r = ring_from_spec(a.ring)
    except (ValueError, KeyError) as e:
        raise FixtureError("--ring", str(e)) from None
    m, nm = parse_module_name(r, a.src), parse_module_name(r, a.tgt)
    rows, wit = [], []
    for n in a.n:
        budget.tick("ext degree")
        d = ext(m, nm, n, a.margin)
        rows.append(d.as_dict())
    return not wit, {"ring": r.as_dict(), "src": m.orders, "tgt": nm.orders, "ext": rows}, wit


def cmd_derived_hom(a, budget):
    fx = _complex_fixture(a.fixture)
    x, y = fx.complex(a.x), fx.complex(a.y)
    rows = []
    for n in a.n:
        budget.tick("derived hom degree")
        rows.append(derived_hom(x, y, n, a.margin).as_dict())
    return True, {"x": a.x, "y": a.y, "derived_hom": rows}, []


def cmd_amalgamate(a, budget):
    fx = _complex_fixture(a.fixture)
    if a.map:
        reps = []
        for spec in a.replace:
            if spec == "id":
                reps.append({"identity": True})
            else:
                top, _, padding = spec.partition(":")
                reps.append({"top": int(top), **({"padding": padding} if padding else {})})
        if len(reps) != 2:
            raise FixtureError("--replace", "give exactly two replacements")
        checks = [{"check": "amalgamate", "map": a.map, "replacements": reps, "shortcut": not a.no_shortcut}]
    else:
        checks = [c for c in fx.checks if c["check"] == "amalgamate"]
        if not checks:
            raise FixtureError("checks", "no amalgamate checks in fixture; pass --map and --replace")
    out = [corpus.run_check(fx, c, k, a.budget, a.tiebreak) for k, c in enumerate(checks)]
    for o in out:
        if o["status"] == corpus.BUDGET:
            raise BudgetExhausted("amalgamate", a.budget)
        if o["status"] == corpus.PARSE:
            raise FixtureError("checks", o["error"])
    ok = all(o["status"] == corpus.PASS for o in out)
    return ok, {"amalgamations": out}, [w for o in out for w in o.get("witnesses", [])]


VERBS = {
    "check-system": cmd_check_system,
    "hom": cmd_hom,
    "localize": cmd_localize,
    "ind-hom": cmd_ind_hom,
    "deligne": cmd_deligne,
    "probe-universal": cmd_probe_universal,
    "check-adjunction": cmd_check_adjunction,
    "ext": cmd_ext,
    "derived-hom": cmd_derived_hom,
    "amalgamate": cmd_amalgamate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="maximum enumeration steps")
    common.add_argument("--tiebreak", choices=TIEBREAKS, default="normal")
    common.add_argument("--json", action="store_true", help="JSON report (the only output mode)")
    common.add_argument("--output", help="also write the report to this file")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = _Parser(prog="locfrac", description="Localization of finite categories and derived Hom over finite rings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("check-system", parents=[common], help="validate a multiplicative system")
    q.add_argument("fixture")
    q.add_argument("cls", metavar="class")
    q.add_argument("--side", choices=("right", "left", "bilateral", "any"), default="any")

    q = sub.add_parser("hom", parents=[common], help="localized Hom set")
    q.add_argument("fixture")
    q.add_argument("cls", metavar="class")
    q.add_argument("x")
    q.add_argument("y")
    q.add_argument("--formula", choices=("right", "left", "bilateral"), default="right")

    q = sub.add_parser("localize", parents=[common], help="materialize the localized category")
    q.add_argument("fixture")
    q.add_argument("cls", metavar="class")
    q.add_argument("--side", choices=("right", "left"), default=None)
    q.add_argument("--out")

    q = sub.add_parser("ind-hom", parents=[common], help="Hom between two ind-objects of a fixture")
    q.add_argument("fixture")
    q.add_argument("X")
    q.add_argument("Y")

    q = sub.add_parser("deligne", parents=[common], help="Deligne localization of a functor at an object")
    q.add_argument("fixture")
    q.add_argument("--functor", required=True)
    q.add_argument("--system", required=True)
    q.add_argument("--system-target", required=True)
    q.add_argument("--object", required=True)
    q.add_argument("--side", choices=("right", "left"), default="right")

    q = sub.add_parser("probe-universal", parents=[common], help="universal property over a menu of functors")
    q.add_argument("fixture")
    q.add_argument("--system", required=True)
    q.add_argument("--mode", choices=("localizing", "deligne"), default="localizing")
    q.add_argument("--functor")
    q.add_argument("--system-target")

    q = sub.add_parser("check-adjunction", parents=[common], help="transport an adjunction to the localizations")
    q.add_argument("fixture")
    q.add_argument("--adjunction", required=True)
    q.add_argument("--system", required=True)
    q.add_argument("--system-target", required=True)
    q.add_argument("--no-enforce", action="store_true", help="skip the axiom check (negative controls)")

    q = sub.add_parser("ext", parents=[common], help="Ext between modules over a finite chain ring")
    q.add_argument("--ring", required=True, help="z4, z8, z9, f2, f2e, ...")
    q.add_argument("--src", required=True, help="k, r, zN or a list of orders such as 4,2")
    q.add_argument("--tgt", required=True)
    q.add_argument("--n", type=degree_range, default=[0])
    q.add_argument("--margin", type=int, default=0)

    q = sub.add_parser("derived-hom", parents=[common], help="Hom in the derived category between fixture complexes")
    q.add_argument("fixture")
    q.add_argument("--x", required=True)
    q.add_argument("--y", required=True)
    q.add_argument("--n", type=degree_range, default=[0])
    q.add_argument("--margin", type=int, default=0)

    q = sub.add_parser("amalgamate", parents=[common], help="amalgamate two triangle replacements")
    q.add_argument("fixture")
    q.add_argument("--map")
    q.add_argument("--replace", action="append", default=[], help="TOP[:PADDING] or id; give twice")
    q.add_argument("--no-shortcut", action="store_true")

    q = sub.add_parser("corpus", parents=[common], help="run every fixture below a directory")
    q.add_argument("dir", nargs="?", default=None)
    return p


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2)
    print(text)
    if output:
        Path(output).write_text(text + "\n")


def run_command(args) -> tuple[dict, int]:
    cfg = RunConfig(args.command, [getattr(args, "fixture", None)], args.budget, args.output, args.tiebreak)
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("json", "verbose", "output")}
    if args.command == "corpus":
        report, code = corpus.run_corpus(args.dir, cfg.budget, cfg.tiebreak)
        report["command"] = echo
        return report, code
    budget = Budget(cfg.budget)
    report = {"command": echo}
    try:
        ok, result, witnesses = VERBS[args.command](args, budget)
        code = 0 if ok else 1
        report.update(ok=ok, result=result, witnesses=witnesses)
    except FixtureError as e:
        code = 4
        report.update(ok=False, error=str(e), key_path=e.path)
    except BudgetExhausted as e:
        code = 3
        report.update(ok=False, error=str(e))
    except FormulaUnsupported as e:
        code = 2
        report.update(ok=False, error=str(e), failed=e.failed)
    except (InternalInconsistency, ConstructionFailed) as e:
        code = 1
        wit = getattr(e, "witnesses", None) or [getattr(e, "detail", {})]
        report.update(ok=False, error=str(e), witnesses=wit)
    except (ValueError, LocfracError) as e:
        code = 2
        report.update(ok=False, error=str(e))
    report["exit_code"] = code
    report["steps"] = budget.used
    return report, code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        report, code = run_command(args)
    except FixtureError as e:
        report, code = {"ok": False, "error": str(e), "key_path": e.path, "exit_code": 4}, 4
    except ValueError as e:
        report, code = {"ok": False, "error": str(e), "exit_code": 2}, 2
    _emit(report, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
