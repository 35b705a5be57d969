"""Command-line front end.

Exit codes: 0 success/pass, 1 property failure, 2 usage error, 3 inconclusive
(fuel ran out before a verdict).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import corpus, suites
from .cps import (check_one_step_simulation, cps_colon, cps_standard,
                  cps_standard_mod, sn_translate)
from .measure import analyze, sight
from .reduce import ALL_RULES, Rule, is_sn, one_step, trace
from .syntax import (ParseError, parse_node, parse_target, print_target,
                     print_term, term_to_json, target_to_json)
from .target import TVar, is_sn_tgt
from .terms import canonicalize
from .types_ccv import cderiv_from_json, check_ccv
from .types_target import (NotBetaNormal, check_tgt, infer_nf, tderiv_from_json,
                           tderiv_to_json, type_sn)
from .verdicts import SN, NotSN, Unknown


def _read_term(args):
    text = args.term
    if text == "-":
        text = sys.stdin.read()
    return parse_node(text)


def _rules(args):
    if getattr(args, "filter", None):
        return frozenset(Rule(r.strip()) for r in args.filter.split(","))
    return ALL_RULES


def _emit(args, obj, text: str) -> None:
    print(json.dumps(obj, indent=2) if args.json else text)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="ccvmu", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("--json", action="store_true")
        return sp

    sp = add("parse", help="parse and reprint a term or jump")
    sp.add_argument("term")
    sp = add("canon", help="canonical form of a term or jump")
    sp.add_argument("term")
    sp = add("reduce", help="all one-step reducts of the equality class")
    sp.add_argument("term")
    sp.add_argument("--filter", help="comma-separated rule names")
    sp = add("trace", help="one reduction path")
    sp.add_argument("term")
    sp.add_argument("--fuel", type=int, default=100)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--filter")
    sp = add("sn", help="strong-normalization verdict")
    sp.add_argument("term")
    sp.add_argument("--fuel", type=int, default=2000)
    sp.add_argument("--filter")
    sp = add("sight", help="the sight ordinal of a term")
    sp.add_argument("term")
    sp = add("places", help="places, visions, breadths")
    sp.add_argument("term")
    sp = add("cps", help="CPS-translate a term")
    sp.add_argument("term")
    sp.add_argument("--variant", choices=["standard", "colon", "mod"], default="colon")
    sp = add("sntrans", help="dot-extended translation <<M>>[k]")
    sp.add_argument("term")
    sp = add("simulate", help="check one-step simulation for every reduct")
    sp.add_argument("term")
    sp.add_argument("--fuel", type=int, default=30)
    sp.add_argument("--filter")
    sp = add("check-deriv", help="check a derivation JSON file")
    sp.add_argument("file")
    sp.add_argument("--system", choices=["ccv", "target", "target-dot"], required=True)
    sp = add("typecheck-nf", help="infer a typing for a beta-normal target term")
    sp.add_argument("term")
    sp = add("type-sn", help="typing derivation for a beta-SN target term")
    sp.add_argument("term")
    sp.add_argument("--fuel", type=int, default=20000)
    sp = add("enumerate", help="enumerate the canonical corpus")
    sp.add_argument("--size", type=int, default=5)
    sp.add_argument("--count-only", action="store_true")
    sp = add("suite", help="run a property suite")
    sp.add_argument("name", choices=sorted(suites.SUITES))
    sp.add_argument("--size", type=int)
    sp.add_argument("--fuel", type=int)
    sp.add_argument("--seed", type=int)

    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0

    try:
        return _dispatch(args)
    except ParseError as e:
        print(f"syntax error at {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "parse":
        t = _read_term(args)
        _emit(args, term_to_json(t), print_term(t))
        return 0
    if cmd == "canon":
        t = canonicalize(_read_term(args))
        _emit(args, term_to_json(t), print_term(t))
        return 0
    if cmd == "reduce":
        t = _read_term(args)
        steps = one_step(t, _rules(args))
        if args.json:
            print(json.dumps([_step_json(s) for s in steps], indent=2))
        else:
            for s in steps:
                print(f"-- {s.rule.value} @ {'/'.join(s.path) or 'root'} --> "
                      f"{print_term(s.target)}")
        return 0
    if cmd == "trace":
        t = _read_term(args)
        strategy = ("random", args.seed) if args.seed is not None else "leftmost"
        path = trace(t, strategy, fuel=args.fuel, rules=_rules(args))
        if args.json:
            print(json.dumps([_step_json(s) for s in path], indent=2))
        else:
            for s in path:
                print(f"-- {s.rule.value} @ {'/'.join(s.path) or 'root'} --> "
                      f"{print_term(s.target)}")
        return 0
    if cmd == "sn":
        verdict = is_sn(_read_term(args), _rules(args), fuel=args.fuel)
        return _verdict_out(args, verdict)
    if cmd == "sight":
        s = sight(_read_term(args))
        _emit(args, {"cnf": s.cnf(), "exponents": list(s.exps)}, s.cnf())
        return 0
    if cmd == "places":
        a = analyze(_read_term(args))
        obj = {
            "places": [{"index": p.index, "marks": ["/".join(m) or "root" for m in p.marked],
                        "mu": p.is_mu} for p in a.places],
            "vision": {str(i): sorted(v) for i, v in a.vision.items()},
            "breadth": {str(i): b for i, b in a.breadth.items()},
            "sight": a.sight().cnf(),
        }
        if args.json:
            print(json.dumps(obj, indent=2))
        else:
            for pl in a.places:
                print(f"p{pl.index}{' (mu)' if pl.is_mu else ''}: "
                      f"marks {obj['places'][pl.index]['marks']}, "
                      f"vision {sorted(a.vision[pl.index])}, "
                      f"breadth {a.breadth[pl.index]}")
            print(f"sight: {a.sight().cnf()}")
        return 0
    if cmd == "cps":
        t = _read_term(args)
        fn = {"standard": cps_standard, "colon": cps_colon, "mod": cps_standard_mod}
        out = fn[args.variant](t)
        _emit(args, target_to_json(out), print_target(out))
        return 0
    if cmd == "sntrans":
        t = _read_term(args)
        out = sn_translate(t, TVar("k"))
        _emit(args, target_to_json(out), print_target(out))
        return 0
    if cmd == "simulate":
        t = _read_term(args)
        steps = one_step(t, _rules(args))
        bad = 0
        unknown = 0
        for s in steps:
            res = check_one_step_simulation(s, fuel=args.fuel)
            mark = "ok" if res.found else ("fuel" if res.inconclusive else "MISSING")
            unknown += res.inconclusive
            bad += not res.found and not res.inconclusive
            print(f"{s.rule.value}: {mark}"
                  + (f" ({res.steps} steps)" if res.found else ""))
        if bad:
            return 1
        return 3 if unknown else 0
    if cmd == "check-deriv":
        with open(args.file) as fh:
            obj = json.load(fh)
        if args.system == "ccv":
            r = check_ccv(cderiv_from_json(obj))
        else:
            r = check_tgt(tderiv_from_json(obj), dot_allowed=args.system == "target-dot")
        if r.ok:
            print("ok")
            return 0
        print(f"invalid at {'/'.join(map(str, r.path)) or 'root'}: {r.reason}")
        return 1
    if cmd == "typecheck-nf":
        try:
            d = infer_nf(parse_target(args.term))
        except NotBetaNormal as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        print(json.dumps(tderiv_to_json(d), indent=2))
        return 0
    if cmd == "type-sn":
        try:
            d = type_sn(parse_target(args.term), fuel=args.fuel)
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return 3 if "raise fuel" in str(e) else 2
        print(json.dumps(tderiv_to_json(d), indent=2))
        return 0
    if cmd == "enumerate":
        terms = corpus.enumerate_terms(args.size)
        if args.count_only:
            print(len(terms))
        elif args.json:
            print(json.dumps([print_term(t) for t in terms], indent=2))
        else:
            for t in terms:
                print(print_term(t))
        return 0
    if cmd == "suite":
        kwargs = {}
        if args.size is not None:
            kwargs["size"] = args.size
        if args.fuel is not None:
            kwargs["fuel"] = args.fuel
        if args.seed is not None:
            kwargs["seed"] = args.seed
        report = suites.run_suite(args.name, **kwargs)
        if args.json:
            print(json.dumps(report.to_json(), indent=2))
        else:
            print("\n".join(report.lines()))
        if report.passed:
            return 0
        return 3 if report.inconclusive and len(report.failures) == report.inconclusive else 1
    raise AssertionError(cmd)


def _step_json(s) -> dict:
    return {
        "rule": s.rule.value,
        "source": term_to_json(s.source),
        "target": term_to_json(s.target),
        "representative": term_to_json(s.representative),
        "path": list(s.path),
    }


def _verdict_out(args, verdict) -> int:
    if isinstance(verdict, SN):
        _emit(args, {"verdict": "SN", "max_len": verdict.max_len},
              f"SN (longest reduction: {verdict.max_len})")
        return 0
    if isinstance(verdict, NotSN):
        _emit(args, {"verdict": "NotSN", "cycle_length": len(verdict.cycle)},
              f"not SN (cycle of length {len(verdict.cycle)})")
        return 1
    assert isinstance(verdict, Unknown)
    _emit(args, {"verdict": "Unknown", "fuel_spent": verdict.fuel_spent},
          f"unknown (fuel spent: {verdict.fuel_spent})")
    return 3


if __name__ == "__main__":
    sys.exit(main())
