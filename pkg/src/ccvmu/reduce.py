"""The ten-rule one-step reduction, computed on equality classes.

A class reduces by a rule if some representative has a redex for it at some
position; the contractum is canonicalized and reducts are deduplicated up
to class equality. This realizes the intended scope ambiguity of the mu
capture rule: different bracketings of the same class expose different
continuations to beta_mu, and all of them are produced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator

from .terms import (App, JLet, Jmp, Jump, Lam, Let, Mu, Node, Term, Var,
                    canonicalize, fresh_name, free_names, is_value,
                    representatives, subst_coname, subst_jump_context,
                    subst_value)
from .verdicts import NotSN, SN, SnVerdict, Unknown, search_reduction_graph

__all__ = [
    "Rule", "ALL_RULES", "ADMINISTRATIVE", "VERTICAL", "PRACTICAL", "MU_FRAGMENT",
    "ReductionStep", "one_step", "reducts", "is_sn", "trace",
]


class Rule(str, Enum):
    AD1 = "ad1"
    AD2 = "ad2"
    BETA_LAMBDA = "beta_lambda"
    BETA_LET = "beta_let"
    BETA_MU = "beta_mu"
    BETA_JMP = "beta_jmp"
    ETA_LAMBDA = "eta_lambda"
    ETA_LET = "eta_let"
    ETA_MU = "eta_mu"
    EXCH = "exch"


ALL_RULES = frozenset(Rule)
ADMINISTRATIVE = frozenset({Rule.AD1, Rule.AD2})
VERTICAL = frozenset({Rule.ETA_MU})
PRACTICAL = ALL_RULES - ADMINISTRATIVE
MU_FRAGMENT = frozenset({Rule.BETA_MU, Rule.BETA_JMP, Rule.ETA_MU})


@dataclass(frozen=True)
class ReductionStep:
    source: Node  # canonical
    rule: Rule
    target: Node  # canonical
    representative: Node  # the class member the rule fired on
    path: tuple[str, ...]  # redex position within the representative


def _root_contracta(t: Node, rules: frozenset[Rule]) -> Iterator[tuple[Rule, Node]]:
    """Rule instances at the root of t, side conditions checked exactly."""
    match t:
        case App(f, a):
            if Rule.AD1 in rules and not is_value(f):
                z = fresh_name("z", free_names(t)[0])
                yield Rule.AD1, Let(App(Var(z), a), z, f)
            if Rule.AD2 in rules and is_value(f) and not is_value(a):
                z = fresh_name("z", free_names(t)[0])
                yield Rule.AD2, Let(App(f, Var(z)), z, a)
            if Rule.BETA_LAMBDA in rules and isinstance(f, Lam) and is_value(a):
                yield Rule.BETA_LAMBDA, Let(f.body, f.binder, a)
        case Let(body, x, arg):
            if Rule.BETA_LET in rules and is_value(arg):
                yield Rule.BETA_LET, subst_value(body, x, arg)
            if Rule.BETA_MU in rules and isinstance(arg, Mu):
                k, j = arg.binder, arg.jump
                if k in free_names(body)[1]:
                    k2 = fresh_name(k, free_names(body)[1] | free_names(j)[1])
                    j = subst_coname(j, k, k2)
                    k = k2
                yield Rule.BETA_MU, Mu(k, subst_jump_context(j, k, x, body))
            if Rule.ETA_LET in rules and body == Var(x):
                yield Rule.ETA_LET, arg
            if Rule.EXCH in rules and isinstance(body, Mu):
                if body.binder not in free_names(arg)[1]:
                    yield Rule.EXCH, Mu(body.binder, JLet(body.jump, x, arg))
        case Lam(x, App(f, Var(n))) if n == x:
            if Rule.ETA_LAMBDA in rules and is_value(f) and x not in free_names(f)[0]:
                yield Rule.ETA_LAMBDA, f
        case Mu(k, Jmp(k2, body)) if k2 == k:
            if Rule.ETA_MU in rules and k not in free_names(body)[1]:
                yield Rule.ETA_MU, body
        case Jmp(l, Mu(k, j)):
            if Rule.BETA_JMP in rules:
                yield Rule.BETA_JMP, subst_coname(j, k, l)
    return


def _redexes(t: Node, rules: frozenset[Rule],
             path: tuple[str, ...] = ()) -> Iterator[tuple[tuple[str, ...], Rule, Node]]:
    """All (path, rule, whole-term contractum) triples within t."""
    for rule, reduct in _root_contracta(t, rules):
        yield path, rule, reduct

    def nest(child: Node, step: str, rebuild: Callable[[Node], Node]):
        for p, rule, sub in _redexes(child, rules, path + (step,)):
            yield p, rule, rebuild(sub)

    match t:
        case Var(_):
            return
        case Lam(b, body):
            yield from nest(body, "body", lambda s: Lam(b, s))
        case App(f, a):
            yield from nest(f, "fun", lambda s: App(s, a))
            yield from nest(a, "arg", lambda s: App(f, s))
        case Let(body, b, arg):
            yield from nest(body, "body", lambda s: Let(s, b, arg))
            yield from nest(arg, "arg", lambda s: Let(body, b, s))
        case Mu(b, j):
            yield from nest(j, "jump", lambda s: Mu(b, s))
        case Jmp(k, body):
            yield from nest(body, "body", lambda s: Jmp(k, s))
        case JLet(body, b, arg):
            yield from nest(body, "body", lambda s: JLet(s, b, arg))
            yield from nest(arg, "arg", lambda s: JLet(body, b, s))


def one_step(t: Node, rules: Iterable[Rule] = ALL_RULES, cap: int = 4096) -> tuple[ReductionStep, ...]:
    """All one-step reducts of t's equality class, one step per (rule, class).

    Rules are applied at every position of every representative; the reducts
    are canonicalized and deduplicated by class equality. The returned order
    is deterministic.
    """
    rules = frozenset(rules)
    source = canonicalize(t)
    steps: list[ReductionStep] = []
    seen: set[tuple[Rule, Node]] = set()
    for rep in sorted(representatives(source, cap=cap), key=repr):
        for path, rule, whole in _redexes(rep, rules):
            tgt = canonicalize(whole)
            key = (rule, tgt)
            if key not in seen:
                seen.add(key)
                steps.append(ReductionStep(source, rule, tgt, rep, path))
    return tuple(steps)


def reducts(t: Node, rules: Iterable[Rule] = ALL_RULES, cap: int = 4096) -> frozenset[Node]:
    return frozenset(s.target for s in one_step(t, rules, cap=cap))


def is_sn(t: Node, rules: Iterable[Rule] = ALL_RULES, fuel: int = 2000,
          cap: int = 4096) -> SnVerdict:
    """Memoized exhaustive search over canonical forms.

    SN(n): the graph was exhausted, is acyclic, and its longest path is n.
    NotSN(cycle): a concrete cycle of steps was found.
    Unknown(spent): the node budget `fuel` ran out first.
    """
    rules = frozenset(rules)
    start = canonicalize(t)

    def succs(u: Node):
        return [(s, s.target) for s in one_step(u, rules, cap=cap)]

    verdict = search_reduction_graph(start, succs, fuel)
    if isinstance(verdict, NotSN):
        return NotSN(tuple(step for step, _ in verdict.cycle))
    return verdict


def trace(t: Node, strategy="leftmost", fuel: int = 100,
          rules: Iterable[Rule] = ALL_RULES) -> list[ReductionStep]:
    """One reduction path, ending at a normal form or when fuel runs out.

    strategy: "leftmost" (first step in the deterministic enumeration),
    ("random", seed), or a callable picking an index from the step tuple.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    rng = None
    if isinstance(strategy, tuple) and strategy[0] == "random":
        rng = random.Random(strategy[1])
    path: list[ReductionStep] = []
    cur = canonicalize(t)
    for _ in range(fuel):
        steps = one_step(cur, rules)
        if not steps:
            break
        if rng is not None:
            step = steps[rng.randrange(len(steps))]
        elif callable(strategy):
            step = steps[strategy(steps)]
        else:
            step = steps[0]
        path.append(step)
        cur = step.target
    return path
