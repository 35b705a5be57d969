"""Places, visions, breadths, and the sight ordinal."""

import random

import pytest

from ccvmu.corpus import enumerate_terms, random_term
from ccvmu.measure import (Sight, analyze, natural_sum, ordinal_lt, sight,
                           verify_sight_decrease)
from ccvmu.reduce import MU_FRAGMENT, Rule, one_step
from ccvmu.syntax import parse_term
from ccvmu.terms import canonicalize, representatives


FIVE_PLACES = "let y = x in (mu k. [l] ((\\z. x2) y))"


def test_five_place_example():
    a = analyze(parse_term(FIVE_PLACES))
    assert len(a.places) == 5
    assert a.mu_places == frozenset({0})
    assert a.vision == {0: frozenset(), 1: frozenset(), 2: frozenset(),
                        3: frozenset(), 4: frozenset({0, 1, 2, 3})}
    assert a.breadth == {0: 0, 1: 0, 2: 0, 3: 0, 4: 1}
    assert sight(parse_term(FIVE_PLACES)) == Sight.of(0)  # omega^0 = 1


def test_places_of_variable_and_lambda():
    assert len(analyze(parse_term("x")).places) == 1
    assert len(analyze(parse_term("\\x. x")).places) == 2


def test_vision_of_mu_place_from_let_argument():
    t = parse_term("let x = (mu k.[k] z) in y")
    a = analyze(t)
    # p0 root/body, p1 the mu at argument position, p2 the jump body
    assert a.vision[1] == frozenset({0})
    assert a.breadth[1] == 1
    assert a.mu_places == frozenset({1})
    assert sight(t) == Sight.of(1)  # omega


def test_vision_transitive_on_corpus():
    for t in enumerate_terms(6, ("x",), ("k",)):
        a = analyze(t)
        for p, vs in a.vision.items():
            for q in vs:
                assert a.vision[q] <= vs


def test_bracketing_invariance():
    rng = random.Random(17)
    for _ in range(200):
        t = canonicalize(random_term(rng, rng.randint(3, 9)))
        base = analyze(t)
        base_breadths = sorted(base.breadth.values())
        for r in representatives(t):
            a = analyze(r)
            assert sorted(a.breadth.values()) == base_breadths
            assert a.sight() == base.sight()


def test_sight_examples():
    assert sight(parse_term("x")).is_zero
    assert sight(parse_term("mu k.[k] x")) == Sight.of(0)


def test_ordinal_comparison_and_sum():
    one = Sight.from_natural(1)
    omega = Sight.of(1)
    assert ordinal_lt(one, omega)
    assert natural_sum(Sight.of(1, 0, 0), Sight.of(1)) == Sight.of(1, 1, 0, 0)
    assert ordinal_lt(Sight.of(1, 1), Sight.of(2))  # omega*2 < omega^2
    assert not ordinal_lt(Sight.of(2), Sight.of(1, 1))
    assert Sight.of(1, 0, 0).cnf() == "w^1*1 + w^0*2"
    assert Sight.of().cnf() == "0"


def test_sight_decrease_examples():
    t = parse_term("let x = (mu k.[k] z) in y")
    for step in one_step(t, {Rule.BETA_MU}):
        assert sight(step.source) == Sight.of(1)
        assert sight(step.target) == Sight.of(0)
        assert verify_sight_decrease(step)
    for step in one_step(parse_term("mu k.[k] x"), {Rule.ETA_MU}):
        assert verify_sight_decrease(step)
    # beta_jmp: the inner mu place just vanishes
    for step in one_step(parse_term("mu l. [l] (mu k. [k] x)"), {Rule.BETA_JMP}):
        assert verify_sight_decrease(step)


def test_verify_sight_decrease_rejects_wrong_rule():
    step = one_step(parse_term("(\\x. x) y"))[0]
    assert step.rule == Rule.BETA_LAMBDA
    with pytest.raises(ValueError):
        verify_sight_decrease(step)


def test_sight_decrease_on_corpus_sample():
    for t in enumerate_terms(6, ("x",), ("k",)):
        for step in one_step(t, MU_FRAGMENT):
            assert verify_sight_decrease(step)
