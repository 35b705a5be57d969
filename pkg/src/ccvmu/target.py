"""The sorted target lambda calculus and its beta/eta/dot reduction.

Plain lambda terms extended with an associative infix dot whose reduction
rule discards everything left of its last component. Chains are kept
flattened, so one dot step deletes any contiguous segment of a chain that
does not contain the final element (closing the binary rule under
associativity and contexts).

Sorting stratifies terms into Term/Jump/Value/Continuation:

    T ::= \\k.Q | W W      Q ::= K W | T K (| Q.Q when dot is allowed)
    W ::= x | \\x.T        K ::= k | \\x.Q

CPS translations of source terms land exactly in this grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .verdicts import SnVerdict, search_reduction_graph

__all__ = [
    "TVar", "TLam", "TApp", "Dot", "TTerm", "dot",
    "tgt_free_vars", "tgt_all_vars", "tgt_size", "tgt_alpha", "tgt_subst",
    "SortFailure", "SortAssignment", "sort_check",
    "step_tgt", "is_sn_tgt", "joinable", "leftmost_beta_path", "contract_beta",
]


@dataclass(frozen=True, slots=True)
class TVar:
    name: str


@dataclass(frozen=True, slots=True)
class TLam:
    binder: str
    body: "TTerm"


@dataclass(frozen=True, slots=True)
class TApp:
    fun: "TTerm"
    arg: "TTerm"


@dataclass(frozen=True, slots=True)
class Dot:
    parts: tuple["TTerm", ...]  # length >= 2, no immediate Dot children


TTerm = Union[TVar, TLam, TApp, Dot]


def dot(*parts: TTerm) -> TTerm:
    """Build a flattened dot chain; a single part is returned as is."""
    flat: list[TTerm] = []
    for p in parts:
        if isinstance(p, Dot):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if not flat:
        raise ValueError("empty dot chain")
    if len(flat) == 1:
        return flat[0]
    return Dot(tuple(flat))


def tgt_size(t: TTerm) -> int:
    match t:
        case TVar(_):
            return 1
        case TLam(_, b):
            return 1 + tgt_size(b)
        case TApp(f, a):
            return 1 + tgt_size(f) + tgt_size(a)
        case Dot(parts):
            return len(parts) - 1 + sum(tgt_size(p) for p in parts)
    raise TypeError(t)


def tgt_free_vars(t: TTerm) -> frozenset[str]:
    match t:
        case TVar(n):
            return frozenset({n})
        case TLam(b, body):
            return tgt_free_vars(body) - {b}
        case TApp(f, a):
            return tgt_free_vars(f) | tgt_free_vars(a)
        case Dot(parts):
            out: frozenset[str] = frozenset()
            for p in parts:
                out |= tgt_free_vars(p)
            return out
    raise TypeError(t)


def tgt_all_vars(t: TTerm) -> frozenset[str]:
    match t:
        case TVar(n):
            return frozenset({n})
        case TLam(b, body):
            return tgt_all_vars(body) | {b}
        case TApp(f, a):
            return tgt_all_vars(f) | tgt_all_vars(a)
        case Dot(parts):
            out: frozenset[str] = frozenset()
            for p in parts:
                out |= tgt_all_vars(p)
            return out
    raise TypeError(t)


def _fresh(base: str, avoid) -> str:
    if base not in avoid:
        return base
    i = 0
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def tgt_subst(t: TTerm, sub: dict[str, TTerm]) -> TTerm:
    """Capture-avoiding simultaneous substitution."""
    if not sub:
        return t
    match t:
        case TVar(n):
            return sub.get(n, t)
        case TLam(b, body):
            fv = tgt_free_vars(body)
            sub2 = {k: v for k, v in sub.items() if k != b and k in fv}
            if not sub2:
                return t
            clash = frozenset()
            for v in sub2.values():
                clash |= tgt_free_vars(v)
            if b in clash:
                b2 = _fresh(b, clash | tgt_free_vars(body) | set(sub2))
                body = tgt_subst(body, {b: TVar(b2)})
                b = b2
            return TLam(b, tgt_subst(body, sub2))
        case TApp(f, a):
            return TApp(tgt_subst(f, sub), tgt_subst(a, sub))
        case Dot(parts):
            return dot(*[tgt_subst(p, sub) for p in parts])
    raise TypeError(t)


def tgt_alpha(t: TTerm) -> TTerm:
    """Alpha normal form: binders renumbered t0, t1, ... skipping free names."""
    free = tgt_free_vars(t)
    counter = [0]

    def fresh() -> str:
        while True:
            n = f"t{counter[0]}"
            counter[0] += 1
            if n not in free:
                return n

    def go(t: TTerm, env: dict[str, str]) -> TTerm:
        match t:
            case TVar(n):
                return TVar(env.get(n, n))
            case TLam(b, body):
                b2 = fresh()
                return TLam(b2, go(body, {**env, b: b2}))
            case TApp(f, a):
                return TApp(go(f, env), go(a, env))
            case Dot(parts):
                return Dot(tuple(go(p, env) for p in parts))
        raise TypeError(t)

    return go(t, {})


# --- sort checking ---------------------------------------------------------


@dataclass(frozen=True)
class SortFailure:
    path: tuple[int, ...]
    wanted: str
    reason: str

    @property
    def ok(self) -> bool:
        return False


@dataclass(frozen=True)
class SortAssignment:
    sorts: dict  # path -> one of "T" "Q" "W" "K"
    var_kinds: dict  # name -> "ord" | "cont" (free variables)

    @property
    def ok(self) -> bool:
        return True


_CHILD = {"fun": 0, "arg": 1, "body": 0}


def sort_check(t: TTerm, dot_allowed: bool = False,
               top: tuple[str, ...] = ("T", "Q", "W", "K")) -> SortAssignment | SortFailure:
    """Assign sorts per the four-sort grammar, or report the offending spot.

    Bound variables take the kind their binding position dictates; free
    variables take whatever kind their uses demand, consistently. The first
    assignment found wins; on failure the deepest failing position is
    reported.
    """
    deepest: list[SortFailure | None] = [None]

    def fail(path, wanted, reason):
        f = SortFailure(path, wanted, reason)
        if deepest[0] is None or len(f.path) >= len(deepest[0].path):
            deepest[0] = f
        return None

    def chk(t, want, path, env, free):
        # env: bound name -> kind; free: free name -> kind (mutated, undone)
        def var_kind_ok(n, kind):
            if n in env:
                return env[n] == kind
            if n in free:
                return free[n] == kind
            free[n] = kind
            return True

        def var_kind_undo(n, had):
            if n not in env and not had:
                free.pop(n, None)

        match t, want:
            case (TVar(n), "W") | (TVar(n), "K"):
                kind = "ord" if want == "W" else "cont"
                had = n in free
                if var_kind_ok(n, kind):
                    return {path: want}
                var_kind_undo(n, had)
                return fail(path, want, f"variable {n} has the wrong kind for sort {want}")
            case (TVar(_), _):
                return fail(path, want, f"a variable cannot have sort {want}")
            case (TLam(b, body), "T"):
                sub = chk(body, "Q", path + (0,), {**env, b: "cont"}, free)
                return None if sub is None else {path: "T", **sub}
            case (TLam(b, body), "W"):
                sub = chk(body, "T", path + (0,), {**env, b: "ord"}, free)
                return None if sub is None else {path: "W", **sub}
            case (TLam(b, body), "K"):
                sub = chk(body, "Q", path + (0,), {**env, b: "ord"}, free)
                return None if sub is None else {path: "K", **sub}
            case (TLam(_, _), _):
                return fail(path, want, f"an abstraction cannot have sort {want}")
            case (TApp(f, a), "T"):
                sf = chk(f, "W", path + (0,), env, free)
                if sf is not None:
                    sa = chk(a, "W", path + (1,), env, free)
                    if sa is not None:
                        return {path: "T", **sf, **sa}
                return fail(path, want, "application does not fit T ::= W W")
            case (TApp(f, a), "Q"):
                for fs, as_ in (("K", "W"), ("T", "K")):
                    snapshot = dict(free)
                    sf = chk(f, fs, path + (0,), env, free)
                    if sf is not None:
                        sa = chk(a, as_, path + (1,), env, free)
                        if sa is not None:
                            return {path: "Q", **sf, **sa}
                    free.clear()
                    free.update(snapshot)
                return fail(path, want, "application fits neither K W nor T K")
            case (TApp(_, _), _):
                return fail(path, want, f"an application cannot have sort {want}")
            case (Dot(parts), "Q") if dot_allowed:
                out = {path: "Q"}
                for i, p in enumerate(parts):
                    sp = chk(p, "Q", path + (i,), env, free)
                    if sp is None:
                        return None
                    out.update(sp)
                return out
            case (Dot(_), _):
                if dot_allowed:
                    return fail(path, want, "a dot chain only has sort Q")
                return fail(path, want, "dot operator not allowed here")
        raise TypeError(t)

    free: dict[str, str] = {}
    for want in top:
        free.clear()
        res = chk(t, want, (), {}, free)
        if res is not None:
            return SortAssignment(res, dict(free))
    assert deepest[0] is not None
    return deepest[0]


# --- reduction -------------------------------------------------------------


def _root_steps(t: TTerm, rules: frozenset[str]) -> Iterator[TTerm]:
    match t:
        case TApp(TLam(b, body), a) if "beta" in rules:
            yield tgt_subst(body, {b: a})
        case _:
            pass
    match t:
        case TLam(b, TApp(f, TVar(n))) if "eta" in rules and n == b and b not in tgt_free_vars(f):
            yield f
        case _:
            pass
    if "dot" in rules and isinstance(t, Dot):
        n = len(t.parts)
        # delete any contiguous segment that excludes the last element
        for i in range(n - 1):
            for j in range(i, n - 1):
                rest = t.parts[:i] + t.parts[j + 1:]
                yield dot(*rest)


def step_tgt(t: TTerm, rules=frozenset({"beta", "eta", "dot"})) -> set[TTerm]:
    """All one-step reducts (alpha-normalized) under the selected rules."""
    rules = frozenset(rules)
    out: set[TTerm] = set()

    def walk(t: TTerm, rebuild):
        for r in _root_steps(t, rules):
            out.add(tgt_alpha(rebuild(r)))
        match t:
            case TVar(_):
                pass
            case TLam(b, body):
                walk(body, lambda r, b=b: rebuild(TLam(b, r)))
            case TApp(f, a):
                walk(f, lambda r, a=a: rebuild(TApp(r, a)))
                walk(a, lambda r, f=f: rebuild(TApp(f, r)))
            case Dot(parts):
                for i, p in enumerate(parts):
                    walk(p, lambda r, i=i, parts=parts: rebuild(
                        dot(*parts[:i], r, *parts[i + 1:])))

    walk(t, lambda r: r)
    return out


def is_sn_tgt(t: TTerm, rules=frozenset({"beta", "eta", "dot"}), fuel: int = 10000) -> SnVerdict:
    """Exhaustive reduction-graph search: SN with the longest path length,
    NotSN with a concrete cycle, or Unknown when fuel runs out."""
    rules = frozenset(rules)
    return search_reduction_graph(
        tgt_alpha(t),
        lambda u: [(None, v) for v in sorted(step_tgt(u, rules), key=repr)],
        fuel)


def joinable(t1: TTerm, t2: TTerm, fuel: int = 6, rules=frozenset({"beta", "eta"}),
             cap: int = 20000) -> bool:
    """Bounded bidirectional search for a common reduct under beta-eta.

    True means a common reduct was found; False only means none was found
    within fuel, never a disproof.
    """
    a = {tgt_alpha(t1)}
    b = {tgt_alpha(t2)}
    seen_a = set(a)
    seen_b = set(b)
    for _ in range(fuel):
        if seen_a & seen_b:
            return True
        if len(seen_a) + len(seen_b) > cap:
            return False
        grow_a = len(seen_a) <= len(seen_b)
        frontier = a if grow_a else b
        new = set()
        for u in frontier:
            new |= step_tgt(u, rules)
        if grow_a:
            new -= seen_a
            seen_a |= new
            a = new
        else:
            new -= seen_b
            seen_b |= new
            b = new
        if not new and not (seen_a & seen_b):
            # this side is exhausted; keep growing the other side
            if grow_a:
                a = set()
            else:
                b = set()
            if not a and not b:
                break
    return bool(seen_a & seen_b)


# --- beta normalization with recorded redex paths ---------------------------


def leftmost_beta_path(t: TTerm) -> tuple[int, ...] | None:
    """Path (child indices) to the leftmost-outermost beta redex, or None."""
    match t:
        case TVar(_):
            return None
        case TApp(TLam(_, _), _):
            return ()
        case TLam(_, body):
            p = leftmost_beta_path(body)
            return None if p is None else (0,) + p
        case TApp(f, a):
            p = leftmost_beta_path(f)
            if p is not None:
                return (0,) + p
            p = leftmost_beta_path(a)
            return None if p is None else (1,) + p
        case Dot(parts):
            for i, part in enumerate(parts):
                p = leftmost_beta_path(part)
                if p is not None:
                    return (i,) + p
            return None
    raise TypeError(t)


def contract_beta(t: TTerm, path: tuple[int, ...]) -> TTerm:
    if not path:
        match t:
            case TApp(TLam(b, body), a):
                return tgt_subst(body, {b: a})
        raise ValueError(f"no beta redex at path in {t}")
    i = path[0]
    match t:
        case TLam(b, body):
            return TLam(b, contract_beta(body, path[1:]))
        case TApp(f, a):
            if i == 0:
                return TApp(contract_beta(f, path[1:]), a)
            return TApp(f, contract_beta(a, path[1:]))
        case Dot(parts):
            return dot(*parts[:i], contract_beta(parts[i], path[1:]), *parts[i + 1:])
    raise ValueError(f"bad path {path} in {t}")
