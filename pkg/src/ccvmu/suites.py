"""Property suites at desk scale, one per headline claim.

Each suite runs a decidable check over an exhaustive small corpus (or a
seeded random one) and reports pass/fail with counterexamples. Suites are
deterministic given their parameters, which are included in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import corpus, fixtures
from .cps import (FreshNames, SnTranslator, TildeEnv, check_one_step_simulation,
                  colon, cps_colon, cps_standard, cps_standard_mod,
                  reduces_to, sn_translate, _names_of)
from .derivations import sample_derivations
from .measure import analyze, sight, verify_sight_decrease
from .reduce import ALL_RULES, MU_FRAGMENT, is_sn, one_step
from .target import TVar, is_sn_tgt, joinable, tgt_alpha
from .terms import canonicalize, ccv_eq, representatives
from .transport import transport_aei16
from .types_ccv import check_ccv
from .types_target import NotBetaNormal, check_tgt, type_sn
from .verdicts import SN, Unknown
from .syntax import print_term

__all__ = ["SuiteReport", "SUITES", "run_suite"]


@dataclass
class SuiteReport:
    name: str
    passed: bool
    checked: int
    params: dict
    failures: list = field(default_factory=list)
    inconclusive: int = 0

    def lines(self) -> list[str]:
        status = "PASS" if self.passed else "FAIL"
        out = [f"[{status}] {self.name}: {self.checked} checks, "
               f"{len(self.failures)} failures, {self.inconclusive} inconclusive "
               f"(params {self.params})"]
        out += [f"    counterexample: {f}" for f in self.failures[:10]]
        return out

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "params": self.params, "failures": [str(f) for f in self.failures],
                "inconclusive": self.inconclusive}


def suite_sight_decrease(size: int = 7, ord_pool=("x", "y"), cont_pool=("k", "l")) -> SuiteReport:
    """Every mu-fragment step strictly lowers the sight ordinal."""
    terms = corpus.enumerate_terms(size, tuple(ord_pool), tuple(cont_pool))
    failures = []
    checked = 0
    for t in terms:
        for step in one_step(t, MU_FRAGMENT):
            checked += 1
            if not verify_sight_decrease(step):
                failures.append(f"{print_term(t)} --{step.rule.value}--> "
                                f"{print_term(step.target)}")
    return SuiteReport("sight-decrease", not failures, checked,
                       {"size": size, "ord_pool": list(ord_pool),
                        "cont_pool": list(cont_pool)}, failures)


def suite_mu_termination(size: int = 7, fuel: int = 4000,
                         ord_pool=("x", "y"), cont_pool=("k", "l")) -> SuiteReport:
    """The three-rule fragment has finite acyclic reduction graphs."""
    terms = corpus.enumerate_terms(size, tuple(ord_pool), tuple(cont_pool))
    failures = []
    inconclusive = 0
    for t in terms:
        verdict = is_sn(t, MU_FRAGMENT, fuel=fuel)
        if isinstance(verdict, Unknown):
            inconclusive += 1
            failures.append(f"{print_term(t)}: fuel ran out ({verdict.fuel_spent})")
        elif not isinstance(verdict, SN):
            failures.append(f"{print_term(t)}: cycle found")
    return SuiteReport("mu-termination", not failures, len(terms),
                       {"size": size, "fuel": fuel}, failures, inconclusive)


def suite_simulation(size: int = 6, fuel: int = 30, node_budget: int = 60000,
                     ord_pool=("x", "y"), cont_pool=("k", "l")) -> SuiteReport:
    """Every one-step source reduction maps to >= 1 dot-target steps."""
    terms = corpus.enumerate_terms(size, tuple(ord_pool), tuple(cont_pool))
    failures = []
    checked = 0
    inconclusive = 0
    for t in terms:
        for step in one_step(t, ALL_RULES):
            checked += 1
            res = check_one_step_simulation(step, fuel=fuel, node_budget=node_budget)
            if not res.found:
                inconclusive += res.inconclusive
                failures.append(
                    f"{print_term(step.source)} --{step.rule.value}--> "
                    f"{print_term(step.target)}"
                    + (" (budget exhausted)" if res.inconclusive else ""))
    return SuiteReport("simulation", not failures, checked,
                       {"size": size, "fuel": fuel, "node_budget": node_budget},
                       failures, inconclusive)


def suite_coherence(count: int = 1000, seed: int = 2024, size: int = 9) -> SuiteReport:
    """Class representatives translate identically; canonicalize is idempotent
    and constant on classes."""
    failures = []
    checked = 0
    for t in corpus.random_terms(count, seed, size):
        checked += 1
        c = canonicalize(t)
        if canonicalize(c) != c:
            failures.append(f"canonicalize not idempotent on {print_term(t)}")
            continue
        try:
            reps = representatives(c, cap=4096)
        except Exception as e:
            failures.append(f"class enumeration failed on {print_term(t)}: {e}")
            continue
        if any(canonicalize(r) != c for r in reps):
            failures.append(f"canonicalize not class-constant on {print_term(t)}")
            continue
        avoid = set()
        for r in reps:
            avoid |= _names_of(r)
        supply = FreshNames(avoid)
        k = supply.fresh("k")
        avoid = avoid | {k}

        def tr_sn(rep):
            tr = SnTranslator(avoid, TildeEnv(FreshNames(avoid)))
            return tgt_alpha(sn_translate(rep, TVar(k), tr))

        def tr_colon(rep):
            return tgt_alpha(colon(rep, TVar(k), FreshNames(avoid)))

        for fn, label in ((tr_sn, "sn_translate"), (tr_colon, "cps_colon"),
                          (lambda r: tgt_alpha(cps_standard(r)), "cps_standard")):
            images = {fn(r) for r in reps}
            if len(images) != 1:
                failures.append(f"{label} differs across the class of {print_term(t)}")
                break
    return SuiteReport("coherence", not failures, checked,
                       {"count": count, "seed": seed, "size": size}, failures)


def suite_tml91(fuel: int = 6000, tgt_fuel: int = 20000) -> SuiteReport:
    """Source SN and target SN of the colon translation agree on fixtures."""
    failures = []
    inconclusive = 0
    for fx in fixtures.ALL_FIXTURES:
        t = fx.term
        src = is_sn(t, ALL_RULES, fuel=fuel)
        tgt = is_sn_tgt(cps_colon(t), frozenset({"beta", "eta"}), fuel=tgt_fuel)
        if isinstance(src, Unknown) or isinstance(tgt, Unknown):
            inconclusive += 1
            failures.append(f"{fx.name}: inconclusive (src {type(src).__name__}, "
                            f"tgt {type(tgt).__name__})")
            continue
        src_sn = isinstance(src, SN)
        tgt_sn = isinstance(tgt, SN)
        if src_sn != tgt_sn or src_sn != fx.sn:
            failures.append(f"{fx.name}: source {'SN' if src_sn else 'not SN'}, "
                            f"target {'SN' if tgt_sn else 'not SN'}, "
                            f"expected {'SN' if fx.sn else 'not SN'}")
    return SuiteReport("tml91", not failures, len(fixtures.ALL_FIXTURES),
                       {"fixtures_version": fixtures.FIXTURES_VERSION,
                        "fuel": fuel, "tgt_fuel": tgt_fuel},
                       failures, inconclusive)


def suite_typed_sn(fuel: int = 6000, tgt_fuel: int = 60000) -> SuiteReport:
    """Valid derivations: subject SN, transport validates, image SN."""
    failures = []
    samples = sample_derivations()
    for name, deriv in samples:
        r = check_ccv(deriv)
        if not r:
            failures.append(f"{name}: derivation invalid: {r.reason}")
            continue
        subject = deriv.judgment.subject
        verdict = is_sn(subject, ALL_RULES, fuel=fuel)
        if not isinstance(verdict, SN):
            failures.append(f"{name}: subject not certified SN ({type(verdict).__name__})")
            continue
        try:
            res = transport_aei16(deriv)
        except Exception as e:
            failures.append(f"{name}: transport failed: {e}")
            continue
        chk = check_tgt(res.derivation, dot_allowed=True)
        if not chk:
            failures.append(f"{name}: transported derivation invalid: {chk.reason}")
            continue
        tv = is_sn_tgt(res.term, frozenset({"beta", "eta", "dot"}), fuel=tgt_fuel)
        if not isinstance(tv, SN):
            failures.append(f"{name}: translated term not certified SN "
                            f"({type(tv).__name__})")
    return SuiteReport("typed-sn", not failures, len(samples),
                       {"fuel": fuel, "tgt_fuel": tgt_fuel}, failures)


def suite_sn_typeable(size: int = 7, fuel: int = 20000,
                      ord_pool=("x",), cont_pool=("k",)) -> SuiteReport:
    """Every beta-SN sorted target term gets a valid derivation from type_sn."""
    terms = corpus.enumerate_target(size, tuple(ord_pool), tuple(cont_pool))
    failures = []
    checked = 0
    for t in terms:
        verdict = is_sn_tgt(t, frozenset({"beta"}), fuel=fuel)
        if not isinstance(verdict, SN):
            continue  # the claim quantifies over beta-SN terms only
        checked += 1
        try:
            d = type_sn(t, fuel=fuel)
        except (NotBetaNormal, ValueError, AssertionError) as e:
            failures.append(f"{t}: {e}")
            continue
        chk = check_tgt(d, dot_allowed=True)
        if not chk:
            failures.append(f"{t}: produced derivation invalid: {chk.reason}")
    return SuiteReport("sn-typeable", not failures, checked,
                       {"size": size, "fuel": fuel}, failures)


def suite_cps_agreement(size: int = 6, join_fuel: int = 8,
                        ord_pool=("x", "y"), cont_pool=("k", "l")) -> SuiteReport:
    """Standard and colon CPS are beta-eta joinable; the modified standard
    translation reduces to the colon translation."""
    terms = corpus.enumerate_terms(size, tuple(ord_pool), tuple(cont_pool))
    failures = []
    inconclusive = 0
    for t in terms:
        std = cps_standard(t)
        col = cps_colon(t)
        mod = cps_standard_mod(t)
        if not joinable(std, col, fuel=join_fuel):
            failures.append(f"join failed: {print_term(t)}")
            inconclusive += 1
            continue
        if tgt_alpha(mod) != tgt_alpha(col):
            res = reduces_to(mod, col, fuel=40, rules=frozenset({"beta"}))
            if not res.found:
                failures.append(f"mod does not reach colon: {print_term(t)}")
                inconclusive += res.inconclusive
    return SuiteReport("cps-agreement", not failures, len(terms),
                       {"size": size, "join_fuel": join_fuel}, failures, inconclusive)


def suite_paper_example() -> SuiteReport:
    """The five-place example: places, visions, breadths, sight == 1."""
    from .syntax import parse_term
    t = parse_term("let y = x in (mu k. [l] ((\\z. x2) y))")
    a = analyze(t)
    failures = []
    if len(a.places) != 5:
        failures.append(f"expected 5 places, got {len(a.places)}")
    else:
        expect_vision = {0: frozenset(), 1: frozenset(), 2: frozenset(),
                         3: frozenset(), 4: frozenset({0, 1, 2, 3})}
        if a.vision != expect_vision:
            failures.append(f"vision mismatch: {a.vision}")
        expect_breadth = {0: 0, 1: 0, 2: 0, 3: 0, 4: 1}
        if a.breadth != expect_breadth:
            failures.append(f"breadth mismatch: {a.breadth}")
        if a.mu_places != frozenset({0}):
            failures.append(f"mu places mismatch: {a.mu_places}")
        s = sight(t)
        if s.exps != (0,):
            failures.append(f"sight mismatch: {s}")
    return SuiteReport("paper-example", not failures, 1, {}, failures)


SUITES = {
    "sight-decrease": suite_sight_decrease,
    "mu-termination": suite_mu_termination,
    "simulation": suite_simulation,
    "coherence": suite_coherence,
    "tml91": suite_tml91,
    "typed-sn": suite_typed_sn,
    "sn-typeable": suite_sn_typeable,
    "cps-agreement": suite_cps_agreement,
    "paper-example": suite_paper_example,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    return SUITES[name](**kwargs)
