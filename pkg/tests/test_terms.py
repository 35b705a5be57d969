"""Core syntax: canonical forms, class enumeration, substitutions."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from ccvmu.corpus import random_term, random_terms
from ccvmu.syntax import parse_node, parse_term, print_term
from ccvmu.terms import (App, ClassSizeExceeded, JLet, Jmp, Lam, Let, Mu, Var,
                         alpha_normalize, canonicalize, ccv_eq, free_names,
                         is_canonical, is_value, representatives, subst_coname,
                         subst_jump_context, subst_value, term_size)


def test_canonicalize_floats_inner_let():
    t = parse_term("let x = (let y = z in y) in x")
    assert print_term(canonicalize(t)) == "let x0 = z in let x1 = x0 in x1"


def test_canonicalize_absorbs_jump_let():
    j = parse_node("let x = w in [k] m")
    assert isinstance(j, JLet)
    c = canonicalize(j)
    assert isinstance(c, Jmp)
    assert print_term(c) == "[k] let x0 = w in m"


def test_canonicalize_idempotent_on_random_terms():
    rng = random.Random(7)
    for _ in range(1000):
        t = random_term(rng, rng.randint(2, 9))
        c = canonicalize(t)
        assert canonicalize(c) == c
        assert is_canonical(c)


def test_ccv_eq_axiom_instance():
    lhs = parse_term("let x = (let y = z in y) in x")
    rhs = parse_term("let y = z in (let x = y in x)")
    assert ccv_eq(lhs, rhs)


def test_ccv_eq_distinct_free_variables():
    assert not ccv_eq(Var("x"), Var("y"))


def test_ccv_eq_alpha():
    assert ccv_eq(parse_term("mu k.[k] x"), parse_term("mu l.[l] x"))


def test_representatives_singleton():
    assert representatives(Var("x")) == frozenset({Var("x")})


def test_representatives_two_bracketings():
    reps = representatives(canonicalize(parse_term("let y = z in (let x = y in x)")))
    assert len(reps) == 2
    texts = {print_term(r) for r in reps}
    assert texts == {"let x0 = z in let x1 = x0 in x1",
                     "let x0 = (let x1 = z in x1) in x0"}


def test_representatives_jump_let():
    j = canonicalize(parse_node("[k] (let x = n in m)"))
    reps = representatives(j)
    assert len(reps) == 2
    shapes = {type(r) for r in reps}
    assert shapes == {Jmp, JLet}


def test_representatives_closed_under_axioms():
    rng = random.Random(11)
    for _ in range(200):
        t = random_term(rng, rng.randint(2, 8))
        reps = representatives(canonicalize(t))
        for r in reps:
            assert representatives(r) == reps


def test_representatives_cap():
    # a long let chain has catalan-many bracketings
    t = parse_term("let a = x in let b = x in let c = x in let d = x in "
                   "let e = x in let f = x in let g = x in let h = x in "
                   "let i = x in let j = x in let m = x in let n = x in x")
    with pytest.raises(ClassSizeExceeded):
        representatives(canonicalize(t), cap=64)


def test_subst_value_basic():
    assert subst_value(Var("x"), "x", parse_term("\\y. y")) == parse_term("\\y. y")


def test_subst_value_shadowing():
    t = parse_term("\\x. x")
    assert subst_value(t, "x", Var("z")) == t


def test_subst_value_capture_avoided():
    t = parse_term("\\y. x")
    out = subst_value(t, "x", Var("y"))
    assert isinstance(out, Lam)
    assert out.binder != "y"
    assert out.body == Var("y")


def test_subst_value_rejects_non_values():
    with pytest.raises(ValueError):
        subst_value(Var("x"), "x", parse_term("y z"))


def test_subst_coname():
    assert subst_coname(parse_node("[k] x"), "k", "l") == parse_node("[l] x")
    assert subst_coname(parse_node("[m] x"), "k", "l") == parse_node("[m] x")
    inner_bound = parse_node("[k] (mu k. [k] y)")
    out = subst_coname(inner_bound, "k", "l")
    assert out == parse_node("[l] (mu k. [k] y)")


def test_subst_jump_context_single_occurrence():
    out = subst_jump_context(parse_node("[k] z"), "k", "x", Var("y"))
    assert out == canonicalize(parse_node("[k] (let x = z in y)"))


def test_subst_jump_context_no_occurrence():
    out = subst_jump_context(parse_node("[l] z"), "k", "x", Var("y"))
    assert out == canonicalize(parse_node("[l] z"))


def test_subst_jump_context_through_let_chain():
    j = parse_node("let w = n in [k] z")
    out = subst_jump_context(j, "k", "x", Var("y"))
    assert ccv_eq(out, parse_node("let w = n in [k] (let x = z in y)"))


def test_free_names():
    assert free_names(parse_term("\\x. x y")) == (frozenset({"y"}), frozenset())
    assert free_names(parse_term("mu k. [l] x")) == (frozenset({"x"}), frozenset({"l"}))


def test_is_value():
    assert is_value(Var("x"))
    assert is_value(parse_term("\\x. x y"))
    assert not is_value(parse_term("let x = y in x"))
    assert not is_value(parse_term("mu k. [k] x"))


def test_canonicalize_class_constant():
    rng = random.Random(3)
    for _ in range(300):
        t = random_term(rng, rng.randint(2, 8))
        c = canonicalize(t)
        for r in representatives(c):
            assert canonicalize(r) == c


def test_canonicalization_strictly_reduces_bad_nodes():
    # oriented steps remove lets-in-argument-position and jump-lets
    def bad_nodes(t):
        match t:
            case Var(_):
                return 0
            case Lam(_, b) | Mu(_, b) | Jmp(_, b):
                return bad_nodes(b)
            case App(f, a):
                return bad_nodes(f) + bad_nodes(a)
            case Let(b, _, a):
                return bad_nodes(b) + bad_nodes(a) + isinstance(a, Let)
            case JLet(b, _, a):
                return 1 + bad_nodes(b) + bad_nodes(a)

    rng = random.Random(5)
    for _ in range(300):
        t = random_term(rng, rng.randint(2, 9))
        assert bad_nodes(canonicalize(t)) == 0


def test_subst_commutes_with_canonicalize():
    # substituting a value then canonicalizing agrees along representatives
    rng = random.Random(13)
    done = 0
    for _ in range(400):
        t = random_term(rng, rng.randint(2, 7))
        fo, _ = free_names(t)
        if "x" not in fo:
            continue
        done += 1
        v = parse_term("\\w. w")
        base = canonicalize(subst_value(t, "x", v))
        for r in representatives(canonicalize(t)):
            assert canonicalize(subst_value(r, "x", v)) == base
    assert done > 50


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_size_is_class_invariant(seed):
    t = random_term(random.Random(seed), 7)
    sz = term_size(canonicalize(t))
    assert all(term_size(r) == sz for r in representatives(canonicalize(t)))


def test_alpha_normalize_keeps_free_names():
    t = parse_term("\\q. x q")
    out = alpha_normalize(t)
    assert free_names(out) == free_names(t)
