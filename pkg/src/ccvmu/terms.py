"""Core syntax of the call-by-value lambda-mu calculus with let.

Terms and jumps are not freely generated: they are identified modulo two
associativity axioms, one floating a let out of argument position

    let x = (let y = N in M) in L  =  let y = N in (let x = M in L)   (y not free in L)

and one moving a let across a jumper

    [k](let x = M in L)  =  let x = M in [k]L.

``canonicalize`` orients both axioms (no let ever remains in argument
position, every jump-let is absorbed under its jumper) and renumbers binders,
so syntactic equality of canonical forms decides equality of the calculus.
``representatives`` enumerates the whole equality class, which is how
reduction on classes is realized downstream.

Ordinary variables (x, y, ...) and continuation variables (k, l, ...) live in
disjoint namespaces; a name's kind is determined by the position it occupies.
All values are immutable; every function here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Var", "Lam", "App", "Let", "Mu", "Jmp", "JLet", "Term", "Jump", "Node",
    "ClassSizeExceeded", "ScopeError",
    "is_value", "free_names", "all_names", "term_size",
    "subst_value", "subst_coname", "subst_jump_context",
    "alpha_normalize", "canonicalize", "is_canonical", "ccv_eq",
    "representatives", "fresh_name",
]


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Lam:
    binder: str
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Let:
    """let binder = arg in body; the binder scopes over body only."""

    body: "Term"
    binder: str
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Mu:
    binder: str
    jump: "Jump"


@dataclass(frozen=True, slots=True)
class Jmp:
    target: str
    body: "Term"


@dataclass(frozen=True, slots=True)
class JLet:
    """let binder = arg in body, where body is a jump."""

    body: "Jump"
    binder: str
    arg: "Term"


Term = Union[Var, Lam, App, Let, Mu]
Jump = Union[Jmp, JLet]
Node = Union[Term, Jump]


class ClassSizeExceeded(Exception):
    """Raised when an equality class grows past the configured cap."""


class ScopeError(Exception):
    """Raised on input that is not well-scoped for the requested operation."""


def is_value(t: Node) -> bool:
    """A value is a variable or a lambda abstraction; nothing else."""
    return isinstance(t, (Var, Lam))


def term_size(t: Node) -> int:
    match t:
        case Var(_):
            return 1
        case Lam(_, b) | Mu(_, b) | Jmp(_, b):
            return 1 + term_size(b)
        case App(f, a):
            return 1 + term_size(f) + term_size(a)
        case Let(b, _, a) | JLet(b, _, a):
            return 1 + term_size(b) + term_size(a)
    raise TypeError(t)


def free_names(t: Node) -> tuple[frozenset[str], frozenset[str]]:
    """Free (ordinary, continuation) names of a term or jump."""
    match t:
        case Var(n):
            return frozenset({n}), frozenset()
        case Lam(b, body):
            fo, fc = free_names(body)
            return fo - {b}, fc
        case App(f, a):
            fo1, fc1 = free_names(f)
            fo2, fc2 = free_names(a)
            return fo1 | fo2, fc1 | fc2
        case Let(body, b, arg) | JLet(body, b, arg):
            fo1, fc1 = free_names(body)
            fo2, fc2 = free_names(arg)
            return (fo1 - {b}) | fo2, fc1 | fc2
        case Mu(b, j):
            fo, fc = free_names(j)
            return fo, fc - {b}
        case Jmp(k, body):
            fo, fc = free_names(body)
            return fo, fc | {k}
    raise TypeError(t)


def all_names(t: Node) -> tuple[frozenset[str], frozenset[str]]:
    """All (ordinary, continuation) names occurring in t, free or bound."""
    match t:
        case Var(n):
            return frozenset({n}), frozenset()
        case Lam(b, body):
            fo, fc = all_names(body)
            return fo | {b}, fc
        case App(f, a):
            fo1, fc1 = all_names(f)
            fo2, fc2 = all_names(a)
            return fo1 | fo2, fc1 | fc2
        case Let(body, b, arg) | JLet(body, b, arg):
            fo1, fc1 = all_names(body)
            fo2, fc2 = all_names(arg)
            return fo1 | fo2 | {b}, fc1 | fc2
        case Mu(b, j):
            fo, fc = all_names(j)
            return fo, fc | {b}
        case Jmp(k, body):
            fo, fc = all_names(body)
            return fo, fc | {k}
    raise TypeError(t)


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    """A name starting with `base` that is not in `avoid`."""
    if base not in avoid:
        return base
    i = 0
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


# --- substitution ---------------------------------------------------------


def subst_value(t: Node, x: str, value: Term) -> Node:
    """Capture-avoiding substitution of a value for an ordinary variable.

    The calculus only ever substitutes values; anything else is rejected.
    """
    if not is_value(value):
        raise ValueError(f"only values may be substituted, got {type(value).__name__}")
    return _subst_ord(t, {x: value})


def _subst_ord(t: Node, sub: dict[str, Term]) -> Node:
    if not sub:
        return t
    match t:
        case Var(n):
            return sub.get(n, t)
        case Lam(b, body):
            b2, body2, sub2 = _push_ord_binder(b, body, sub)
            return Lam(b2, _subst_ord(body2, sub2))
        case App(f, a):
            return App(_subst_ord(f, sub), _subst_ord(a, sub))
        case Let(body, b, arg):
            arg2 = _subst_ord(arg, sub)
            b2, body2, sub2 = _push_ord_binder(b, body, sub)
            return Let(_subst_ord(body2, sub2), b2, arg2)
        case JLet(body, b, arg):
            arg2 = _subst_ord(arg, sub)
            b2, body2, sub2 = _push_ord_binder(b, body, sub)
            return JLet(_subst_ord(body2, sub2), b2, arg2)
        case Mu(b, j):
            return Mu(b, _subst_ord(j, sub))
        case Jmp(k, body):
            return Jmp(k, _subst_ord(body, sub))
    raise TypeError(t)


def _push_ord_binder(b: str, scope: Node, sub: dict[str, Term]):
    """Restrict a substitution under an ordinary binder, renaming on capture."""
    fo, _ = free_names(scope)
    sub2 = {k: v for k, v in sub.items() if k != b and k in fo}
    if not sub2:
        return b, scope, sub2
    clash = set()
    for v in sub2.values():
        clash |= free_names(v)[0]
    if b in clash:
        fo, _ = free_names(scope)
        avoid = clash | fo | set(sub2)
        b2 = fresh_name(b, avoid)
        scope2 = _subst_ord(scope, {b: Var(b2)})
        return b2, scope2, sub2
    return b, scope, sub2


def subst_coname(t: Node, k: str, l: str) -> Node:
    """Rename every free occurrence of continuation variable k to l."""
    return _subst_cont(t, {k: l})


def _subst_cont(t: Node, sub: dict[str, str]) -> Node:
    if not sub:
        return t
    match t:
        case Var(_):
            return t
        case Lam(b, body):
            return Lam(b, _subst_cont(body, sub))
        case App(f, a):
            return App(_subst_cont(f, sub), _subst_cont(a, sub))
        case Let(body, b, arg):
            return Let(_subst_cont(body, sub), b, _subst_cont(arg, sub))
        case JLet(body, b, arg):
            return JLet(_subst_cont(body, sub), b, _subst_cont(arg, sub))
        case Mu(b, j):
            sub2 = {k: v for k, v in sub.items() if k != b}
            if not sub2:
                return t
            if b in sub2.values():
                _, fc = free_names(j)
                b2 = fresh_name(b, set(sub2.values()) | fc | set(sub2))
                j = _subst_cont(j, {b: b2})
                b = b2
            return Mu(b, _subst_cont(j, sub2))
        case Jmp(target, body):
            return Jmp(sub.get(target, target), _subst_cont(body, sub))
    raise TypeError(t)


def subst_jump_context(j: Jump, k: str, x: str, m: Term) -> Jump:
    """Replace every free subjump [k]N by [k](let x = N in M), canonically.

    This is the context substitution performed by the beta_mu rule. Binders
    on the way to a rewritten jump are renamed whenever they would capture a
    free variable of M (or x itself).
    """
    mo, mc = free_names(m)

    def go(t: Node, live: bool) -> Node:
        match t:
            case Var(_):
                return t
            case Lam(b, body):
                b, body = shield_ord(b, body, live)
                return Lam(b, go(body, live))
            case App(f, a):
                return App(go(f, live), go(a, live))
            case Let(body, b, arg):
                arg2 = go(arg, live)
                b, body = shield_ord(b, body, live)
                return Let(go(body, live), b, arg2)
            case JLet(body, b, arg):
                arg2 = go(arg, live)
                b, body = shield_ord(b, body, live)
                return JLet(go(body, live), b, arg2)
            case Mu(b, j2):
                if b == k:
                    return Mu(b, go(j2, False))
                b, j2 = shield_cont(b, j2, live)
                return Mu(b, go(j2, live))
            case Jmp(target, body):
                body2 = go(body, live)
                if live and target == k:
                    return Jmp(k, Let(m, x, body2))
                return Jmp(target, body2)
        raise TypeError(t)

    def shield_ord(b: str, scope: Node, live: bool):
        if live and b in mo | {x}:
            fo, _ = free_names(scope)
            b2 = fresh_name(b, mo | {x} | fo)
            return b2, _subst_ord(scope, {b: Var(b2)})
        return b, scope

    def shield_cont(b: str, scope: Node, live: bool):
        if live and b in mc:
            _, fc = free_names(scope)
            b2 = fresh_name(b, mc | fc | {k})
            return b2, _subst_cont(scope, {b: b2})
        return b, scope

    return canonicalize(go(j, True))


# --- alpha normalization --------------------------------------------------


def alpha_normalize(t: Node) -> Node:
    """Renumber binders left to right (x0, x1, ... / k0, k1, ...).

    Every binder gets its own number; names free in the whole term are
    skipped by the supplies, so free occurrences are never captured. Two
    terms are alpha-equivalent iff their normal forms are equal.
    """
    fo, fc = free_names(t)
    counters = [0, 0]

    def fresh(kind: int, taken: frozenset[str]) -> str:
        prefix = "x" if kind == 0 else "k"
        while True:
            n = f"{prefix}{counters[kind]}"
            counters[kind] += 1
            if n not in taken:
                return n

    def go(t: Node, env_o: dict[str, str], env_c: dict[str, str]) -> Node:
        match t:
            case Var(n):
                return Var(env_o.get(n, n))
            case Lam(b, body):
                b2 = fresh(0, fo)
                return Lam(b2, go(body, {**env_o, b: b2}, env_c))
            case App(f, a):
                return App(go(f, env_o, env_c), go(a, env_o, env_c))
            case Let(body, b, arg):
                b2 = fresh(0, fo)
                body2 = go(body, {**env_o, b: b2}, env_c)
                return Let(body2, b2, go(arg, env_o, env_c))
            case JLet(body, b, arg):
                b2 = fresh(0, fo)
                body2 = go(body, {**env_o, b: b2}, env_c)
                return JLet(body2, b2, go(arg, env_o, env_c))
            case Mu(b, j):
                b2 = fresh(1, fc)
                return Mu(b2, go(j, env_o, {**env_c, b: b2}))
            case Jmp(k, body):
                return Jmp(env_c.get(k, k), go(body, env_o, env_c))
        raise TypeError(t)

    return go(t, {}, {})


# --- canonical forms ------------------------------------------------------


def _mk_let(body: Term, x: str, arg: Term) -> Term:
    # Maintains "no let in argument position" by floating arg-lets outward.
    if isinstance(arg, Let):
        y, m, n = arg.binder, arg.body, arg.arg
        avoid = free_names(body)[0] | (free_names(m)[0] - {y})
        if y in avoid:
            y2 = fresh_name(y, avoid | all_names(arg)[0] | {x})
            m = _subst_ord(m, {y: Var(y2)})
            y = y2
        return Let(_mk_let(body, x, m), y, n)
    return Let(body, x, arg)


def _canon_shape(t: Node) -> Node:
    match t:
        case Var(_):
            return t
        case Lam(b, body):
            return Lam(b, _canon_shape(body))
        case App(f, a):
            return App(_canon_shape(f), _canon_shape(a))
        case Let(body, b, arg):
            return _mk_let(_canon_shape(body), b, _canon_shape(arg))
        case Mu(b, j):
            return Mu(b, _canon_shape(j))
        case Jmp(k, body):
            return Jmp(k, _canon_shape(body))
        case JLet(body, b, arg):
            jb = _canon_shape(body)
            assert isinstance(jb, Jmp)
            return Jmp(jb.target, _mk_let(jb.body, b, _canon_shape(arg)))
    raise TypeError(t)


def canonicalize(t: Node) -> Node:
    """Orient both axioms, then alpha-normalize. Idempotent."""
    return alpha_normalize(_canon_shape(t))


def is_canonical(t: Node) -> bool:
    def shape_ok(t: Node) -> bool:
        match t:
            case Var(_):
                return True
            case Lam(_, body) | Mu(_, body) | Jmp(_, body):
                return shape_ok(body)
            case App(f, a):
                return shape_ok(f) and shape_ok(a)
            case Let(body, _, arg):
                return not isinstance(arg, Let) and shape_ok(body) and shape_ok(arg)
            case JLet(_, _, _):
                return False
        raise TypeError(t)

    return shape_ok(t) and alpha_normalize(t) == t


def ccv_eq(t1: Node, t2: Node) -> bool:
    """Equality modulo the two axioms and alpha."""
    return canonicalize(t1) == canonicalize(t2)


# --- equality-class enumeration -------------------------------------------


def _axiom_steps(t: Node) -> Iterator[Node]:
    """One application of either axiom, in either direction, at the root."""
    match t:
        case Let(body, x, arg):
            if isinstance(arg, Let):
                # float the argument's let outward
                y, m, n = arg.binder, arg.body, arg.arg
                avoid = free_names(body)[0] | (free_names(m)[0] - {y})
                if y in avoid:
                    y2 = fresh_name(y, avoid | all_names(arg)[0] | {x})
                    m = _subst_ord(m, {y: Var(y2)})
                    y = y2
                yield Let(Let(body, x, m), y, n)
            if isinstance(body, Let):
                # sink the outer let into argument position (side condition)
                inner = body
                if t.binder not in free_names(inner.body)[0]:
                    yield Let(inner.body, inner.binder, Let(inner.arg, t.binder, arg))
        case Jmp(k, body):
            if isinstance(body, Let):
                yield JLet(Jmp(k, body.body), body.binder, body.arg)
        case JLet(body, x, arg):
            if isinstance(body, Jmp):
                yield Jmp(body.target, Let(body.body, x, arg))
    return


def _neighbors(t: Node) -> Iterator[Node]:
    yield from _axiom_steps(t)
    match t:
        case Var(_):
            return
        case Lam(b, body):
            for v in _neighbors(body):
                yield Lam(b, v)
        case App(f, a):
            for v in _neighbors(f):
                yield App(v, a)
            for v in _neighbors(a):
                yield App(f, v)
        case Let(body, b, arg):
            for v in _neighbors(body):
                yield Let(v, b, arg)
            for v in _neighbors(arg):
                yield Let(body, b, v)
        case JLet(body, b, arg):
            for v in _neighbors(body):
                yield JLet(v, b, arg)
            for v in _neighbors(arg):
                yield JLet(body, b, v)
        case Mu(b, j):
            for v in _neighbors(j):
                yield Mu(b, v)
        case Jmp(k, body):
            for v in _neighbors(body):
                yield Jmp(k, v)


def representatives(t: Node, cap: int = 4096) -> frozenset[Node]:
    """The full equality class of t, each member alpha-normalized.

    Closed under both axioms in both directions; contains the canonical
    form. Raises ClassSizeExceeded past `cap` members.
    """
    start = canonicalize(t)
    seen: set[Node] = {start}
    queue: list[Node] = [start]
    while queue:
        u = queue.pop()
        for v in _neighbors(u):
            v = alpha_normalize(v)
            if v not in seen:
                seen.add(v)
                if len(seen) > cap:
                    raise ClassSizeExceeded(
                        f"equality class exceeds cap={cap}; term too large for "
                        f"class-complete reduction")
                queue.append(v)
    return frozenset(seen)
