"""The ten-rule reduction on equality classes."""

import random

from ccvmu.corpus import enumerate_terms, random_term
from ccvmu.reduce import (ADMINISTRATIVE, ALL_RULES, MU_FRAGMENT, PRACTICAL,
                          Rule, is_sn, one_step, reducts, trace)
from ccvmu.syntax import parse_term, print_term
from ccvmu.terms import canonicalize, ccv_eq, free_names, is_value
from ccvmu.verdicts import SN, NotSN, Unknown


def targets(t, rules=ALL_RULES):
    return {print_term(s.target) for s in one_step(t, rules)}


def test_rule_classification():
    assert ADMINISTRATIVE == {Rule.AD1, Rule.AD2}
    assert PRACTICAL == ALL_RULES - ADMINISTRATIVE
    assert Rule.ETA_MU in PRACTICAL
    assert len(ALL_RULES) == 10


def test_beta_lambda_only_rule_for_identity_redex():
    steps = one_step(parse_term("(\\x. x) y"))
    assert {s.rule for s in steps} == {Rule.BETA_LAMBDA}
    assert targets(parse_term("(\\x. x) y")) == {"let x0 = y in x0"}


def test_beta_mu_instance():
    t = parse_term("let x = (mu k.[k] z) in y")
    out = targets(t, {Rule.BETA_MU})
    assert out == {"mu k0. [k0] let x0 = z in y"}


def test_eta_mu_instance():
    assert targets(parse_term("mu k.[k] x"), {Rule.ETA_MU}) == {"x"}
    # side condition: k free in the body blocks the rule
    assert targets(parse_term("mu k.[k] (mu l.[k] x)"), {Rule.ETA_MU}) == set()


def test_eta_lambda_side_condition():
    assert targets(parse_term("\\x. y x"), {Rule.ETA_LAMBDA}) == {"y"}
    assert targets(parse_term("\\x. x x"), {Rule.ETA_LAMBDA}) == set()


def test_ad_rules_need_non_values():
    assert targets(parse_term("x y"), ADMINISTRATIVE) == set()
    assert targets(parse_term("(x y) z"), {Rule.AD1}) == {"let x0 = x y in x0 z"}
    assert targets(parse_term("x (y z)"), {Rule.AD2}) == {"let x0 = y z in x x0"}


def test_exch_instance():
    t = parse_term("let x = y z in mu k. [k] x")
    out = targets(t, {Rule.EXCH})
    assert out == {"mu k0. [k0] let x0 = y z in x0"}


def test_class_ambiguity_exposes_beta_mu_choices():
    # both bracketings of the let chain contribute their own mu capture
    t = parse_term("let x = (mu k. [k] z) in (let y = w in m)")
    lhs = parse_term("let y = (let x = mu k. [k] z in w) in m")
    assert ccv_eq(t, lhs)
    out = one_step(t, {Rule.BETA_MU})
    assert len(out) == 2


def test_one_step_class_invariant():
    rng = random.Random(23)
    for _ in range(60):
        t = canonicalize(random_term(rng, rng.randint(3, 7)))
        from ccvmu.terms import representatives
        base = reducts(t)
        for r in representatives(t):
            assert reducts(r) == base


def test_side_conditions_audited():
    rng = random.Random(29)
    for _ in range(150):
        t = random_term(rng, rng.randint(2, 7))
        for step in one_step(t):
            rep, path = step.representative, step.path
            node = rep
            for p in path:
                node = getattr(node, {"fun": "fun", "arg": "arg", "body": "body",
                                      "jump": "jump"}[p])
            _assert_side_condition(step.rule, node)


def _assert_side_condition(rule, node):
    from ccvmu.terms import App, Lam, Let, Mu, Jmp
    match rule:
        case Rule.AD1:
            assert isinstance(node, App) and not is_value(node.fun)
        case Rule.AD2:
            assert isinstance(node, App) and is_value(node.fun) and not is_value(node.arg)
        case Rule.BETA_LAMBDA:
            assert isinstance(node, App) and isinstance(node.fun, Lam) and is_value(node.arg)
        case Rule.BETA_LET:
            assert isinstance(node, Let) and is_value(node.arg)
        case Rule.BETA_MU:
            assert isinstance(node, Let) and isinstance(node.arg, Mu)
        case Rule.BETA_JMP:
            assert isinstance(node, Jmp) and isinstance(node.body, Mu)
        case Rule.ETA_LAMBDA:
            assert isinstance(node, Lam) and node.binder not in free_names(node.body.fun)[0]
        case Rule.ETA_LET:
            assert isinstance(node, Let) and node.body == __import__("ccvmu").Var(node.binder)
        case Rule.ETA_MU:
            assert isinstance(node, Mu) and node.binder not in free_names(node.jump.body)[1]
        case Rule.EXCH:
            assert isinstance(node, Let) and isinstance(node.body, Mu) \
                and node.body.binder not in free_names(node.arg)[1]


def test_is_sn_no_redex():
    assert is_sn(parse_term("x")) == SN(0)


def test_is_sn_omega_cycle():
    v = is_sn(parse_term("(\\x. x x) (\\x. x x)"))
    assert isinstance(v, NotSN)
    assert len(v.cycle) == 2
    assert {s.rule for s in v.cycle} == {Rule.BETA_LAMBDA, Rule.BETA_LET}


def test_is_sn_identity_redex():
    assert is_sn(parse_term("(\\x. x) y")) == SN(2)


def test_is_sn_fuel_exhaustion():
    v = is_sn(parse_term("(\\x. x x) (\\x. x x)"), fuel=1)
    assert isinstance(v, Unknown)


def test_trace_normal_form():
    assert trace(parse_term("x")) == []


def test_trace_leftmost():
    path = trace(parse_term("(\\x. x) y"))
    assert len(path) == 2
    assert print_term(path[-1].target) == "y"


def test_trace_fuel():
    path = trace(parse_term("(\\x. x x) (\\x. x x)"), fuel=5)
    assert len(path) == 5


def test_trace_random_deterministic():
    t = parse_term("(\\x. \\y. x) z w")
    a = trace(t, ("random", 4))
    b = trace(t, ("random", 4))
    assert [s.target for s in a] == [s.target for s in b]


def test_mu_fragment_always_terminates_small():
    for t in enumerate_terms(5):
        assert isinstance(is_sn(t, MU_FRAGMENT, fuel=2000), SN)
