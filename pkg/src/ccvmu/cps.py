"""CPS translations into the sorted target calculus.

Three translations of source terms:

  * cps_standard   -- the textbook call-by-value CPS,
  * cps_colon      -- the colon translation, landing in the four-sort grammar,
  * cps_standard_mod -- the standard one with two rows modified so that it
    reduces to the colon translation.

plus the reduction-preserving translation into the dot-extended calculus.
That one pairs every continuation variable k with an independent variable
k~ and prefixes translations with (deletable) records of the continuations
that plain CPS would silently drop, so that every source reduction step
maps to at least one target step. Evaluation contexts decompose through it
via the pair (Q_E, K_E), and E-depth measures how far a redex sits from
evaluation position.

Standard and modified-standard CPS canonicalize their input first: unlike
the colon and dot translations they are not literally invariant across the
bracketing axioms, so they are read on the canonical representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .reduce import ReductionStep
from .terms import (App, JLet, Jmp, Jump, Lam, Let, Mu, Node, Term, Var,
                    all_names, canonicalize, free_names, is_value, term_size)
from .target import (Dot, TApp, TLam, TTerm, TVar, dot, step_tgt, tgt_alpha,
                     tgt_free_vars, tgt_size)

__all__ = [
    "FreshNames", "TildeEnv", "SnTranslator",
    "cps_standard", "cps_colon", "colon", "cps_standard_mod",
    "tilde", "sn_translate", "sn_translate_jump",
    "Hole", "AppL", "AppR", "LetArg", "EvalCtx", "plug", "build_eval_ctx",
    "e_depth", "e_depth_path",
    "SimulationResult", "check_one_step_simulation", "reduces_to",
]


class FreshNames:
    """Deterministic fresh-name supply; remembers everything it issued."""

    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.issued: set[str] = set()

    def fresh(self, base: str) -> str:
        if base not in self.avoid:
            name = base
        else:
            i = 0
            while f"{base}{i}" in self.avoid:
                i += 1
            name = f"{base}{i}"
        self.avoid.add(name)
        self.issued.add(name)
        return name


def _names_of(*nodes: Node) -> set[str]:
    out: set[str] = set()
    for n in nodes:
        fo, fc = all_names(n)
        out |= fo | fc
    return out


# --- standard CPS -----------------------------------------------------------


def cps_standard(t: Term) -> TTerm:
    """The standard call-by-value CPS, on the canonical representative."""
    t = canonicalize(t)
    names = FreshNames(_names_of(t))

    def go(t: Node) -> TTerm:
        if is_value(t):
            k = names.fresh("k")
            return TLam(k, TApp(TVar(k), star(t)))
        match t:
            case App(m, n):
                k = names.fresh("k")
                x = names.fresh("x")
                y = names.fresh("y")
                return TLam(k, TApp(go(m), TLam(x, TApp(go(n), TLam(y, TApp(
                    TApp(TVar(x), TVar(y)), TVar(k)))))))
            case Let(body, x, arg):
                k = names.fresh("k")
                return TLam(k, TApp(go(arg), TLam(x, TApp(go(body), TVar(k)))))
            case Mu(k, j):
                return TLam(k, goj(j))
        raise TypeError(t)

    def goj(j: Jump) -> TTerm:
        match j:
            case Jmp(k, m):
                return TApp(go(m), TVar(k))
            case JLet(body, x, arg):
                return TApp(go(arg), TLam(x, goj(body)))
        raise TypeError(j)

    def star(v: Term) -> TTerm:
        match v:
            case Var(n):
                return TVar(n)
            case Lam(x, m):
                return TLam(x, go(m))
        raise TypeError(v)

    return go(t)


def cps_standard_mod(t: Term) -> TTerm:
    """Standard CPS with the mu row and the abstraction row modified so the
    result beta-reduces to the colon translation."""
    t = canonicalize(t)
    names = FreshNames(_names_of(t))

    def go(t: Node) -> TTerm:
        if is_value(t):
            k = names.fresh("k")
            return TLam(k, TApp(TVar(k), star(t)))
        match t:
            case App(m, n):
                k = names.fresh("k")
                x = names.fresh("x")
                y = names.fresh("y")
                return TLam(k, TApp(go(m), TLam(x, TApp(go(n), TLam(y, TApp(
                    TApp(TVar(x), TVar(y)), TVar(k)))))))
            case Let(body, x, arg):
                k = names.fresh("k")
                return TLam(k, TApp(go(arg), TLam(x, TApp(go(body), TVar(k)))))
            case Mu(k, j):
                k2 = names.fresh("k")
                return TLam(k2, TApp(TLam(k, goj(j)), TVar(k2)))
        raise TypeError(t)

    def goj(j: Jump) -> TTerm:
        match j:
            case Jmp(k, m):
                return TApp(go(m), TVar(k))
            case JLet(body, x, arg):
                return TApp(go(arg), TLam(x, goj(body)))
        raise TypeError(j)

    def star(v: Term) -> TTerm:
        match v:
            case Var(n):
                return TVar(n)
            case Lam(x, m):
                k = names.fresh("k")
                return TLam(x, TLam(k, TApp(go(m), TVar(k))))
        raise TypeError(v)

    return go(t)


# --- colon translation ------------------------------------------------------


def colon(t: Term, k_cont: TTerm, names: FreshNames | None = None) -> TTerm:
    """The colon translation of a term against a continuation of sort K.

    Defined structurally on the given bracketing; it is literally invariant
    across the equality axioms, so no canonicalization happens here.
    """
    if names is None:
        names = FreshNames(_names_of(t) | tgt_free_vars(k_cont))
    return _colon(t, k_cont, names)


def _colon(t: Node, kc: TTerm, names: FreshNames) -> TTerm:
    if is_value(t):
        return TApp(kc, _colon_star(t, names))
    match t:
        case App(f, a):
            fv, av = is_value(f), is_value(a)
            if fv and av:
                return TApp(TApp(_colon_star(f, names), _colon_star(a, names)), kc)
            if fv:
                y = names.fresh("y")
                return _colon(a, TLam(y, TApp(TApp(_colon_star(f, names), TVar(y)), kc)), names)
            if av:
                x = names.fresh("x")
                return _colon(f, TLam(x, TApp(TApp(TVar(x), _colon_star(a, names)), kc)), names)
            x = names.fresh("x")
            y = names.fresh("y")
            inner = TLam(y, TApp(TApp(TVar(x), TVar(y)), kc))
            return _colon(f, TLam(x, _colon(a, inner, names)), names)
        case Let(body, x, arg):
            return _colon(arg, TLam(x, _colon(body, kc, names)), names)
        case Mu(k, j):
            return TApp(TLam(k, _colon_jump(j, names)), kc)
    raise TypeError(t)


def _colon_jump(j: Jump, names: FreshNames) -> TTerm:
    match j:
        case Jmp(k, m):
            return _colon(m, TVar(k), names)
        case JLet(body, x, arg):
            return _colon(arg, TLam(x, _colon_jump(body, names)), names)
    raise TypeError(j)


def _colon_star(v: Term, names: FreshNames) -> TTerm:
    match v:
        case Var(n):
            return TVar(n)
        case Lam(x, m):
            k = names.fresh("k")
            return TLam(x, TLam(k, _colon(m, TVar(k), names)))
    raise TypeError(v)


def cps_colon(t: Term) -> TTerm:
    names = FreshNames(_names_of(t))
    k = names.fresh("k")
    return TLam(k, _colon(t, TVar(k), names))


# --- the reduction-preserving translation ------------------------------------


class TildeEnv:
    """Explicit one-to-one pairing of continuation variables with fresh
    ordinary partners. Substituting k never implicitly substitutes its
    partner; the bijection is carried, never derived from names."""

    def __init__(self, names: FreshNames):
        self.names = names
        self._partner: dict[str, str] = {}

    def partner(self, k: str) -> str:
        if k not in self._partner:
            self._partner[k] = self.names.fresh(k + "t")
        return self._partner[k]

    def partners(self) -> dict[str, str]:
        return dict(self._partner)


def tilde(k_cont: TTerm, env: TildeEnv) -> TTerm:
    """K~ of a continuation: the partner variable, or the freed body."""
    match k_cont:
        case TVar(n):
            return TVar(env.partner(n))
        case TLam(_, q):
            return q
    raise ValueError("tilde is only defined on continuations (k or \\x.Q)")


class SnTranslator:
    """The dot-extended translation, with a per-instance fresh supply.

    Substitution of the bound continuation in the mu row is fused into the
    traversal (translating the jump with the actual continuation in place),
    which yields the same terms as translating with the variable and then
    substituting.
    """

    def __init__(self, avoid, tilde_env: TildeEnv | None = None):
        self.names = FreshNames(avoid)
        self.tilde = tilde_env if tilde_env is not None else TildeEnv(self.names)

    def cont_pair(self, k: str, cenv: dict) -> tuple[TTerm, TTerm]:
        if k in cenv:
            return cenv[k]
        return TVar(k), TVar(self.tilde.partner(k))

    def term(self, t: Term, kc: TTerm, kt: TTerm, cenv: dict | None = None) -> TTerm:
        """<<t>>[kc] at sort Q; kt must be the tilde of kc."""
        cenv = cenv or {}
        if is_value(t):
            return TApp(kc, self.value_star(t, cenv))
        match t:
            case App(f, a):
                if is_value(f) and is_value(a):
                    return TApp(TApp(TApp(self.value_star(f, cenv), kc), kt),
                                self.value_star(a, cenv))
                z = self.names.fresh("z")
                if is_value(f):
                    aux = Let(App(f, Var(z)), z, a)
                else:
                    aux = Let(App(Var(z), a), z, f)
                return dot(kt, self.term(aux, kc, kt, cenv))
            case Let(body, x, arg):
                q1 = self.term(body, kc, kt, cenv)
                cont = TLam(x, dot(kt, q1))
                return dot(q1, self.term(arg, cont, dot(kt, q1), cenv))
            case Mu(k, j):
                cenv2 = {**cenv, k: (kc, kt)}
                return dot(kt, self.jump(j, cenv2))
        raise TypeError(t)

    def jump(self, j: Jump, cenv: dict | None = None) -> TTerm:
        cenv = cenv or {}
        match j:
            case Jmp(k, m):
                kc, kt = self.cont_pair(k, cenv)
                return dot(kt, self.term(m, kc, kt, cenv))
            case JLet(body, x, arg):
                qj = self.jump(body, cenv)
                return dot(qj, self.term(arg, TLam(x, qj), qj, cenv))
        raise TypeError(j)

    def value_star(self, v: Term, cenv: dict | None = None) -> TTerm:
        # The outermost ordinary binder is fresh: the head copy of the body
        # keeps x free (a deletable record of the body before substitution),
        # only the guarded copy under the inner lambda binds x.
        cenv = cenv or {}
        match v:
            case Var(n):
                return TVar(n)
            case Lam(x, m):
                k = self.names.fresh("k")
                kt = self.tilde.partner(k)
                q = self.term(m, TVar(k), TVar(kt), cenv)
                x2 = self.names.fresh(x)
                return TLam(k, TLam(kt, TLam(x2, dot(
                    q, TApp(TLam(x, dot(TVar(kt), q)), TVar(x2))))))
        raise TypeError(v)


def sn_translate(t: Term, k_cont: TTerm, translator: SnTranslator | None = None) -> TTerm:
    """<<t>>[K] in the dot-extended target calculus."""
    if translator is None:
        translator = SnTranslator(_names_of(t) | tgt_free_vars(k_cont))
    kt = tilde(k_cont, translator.tilde)
    return translator.term(t, k_cont, kt)


def sn_translate_jump(j: Jump, translator: SnTranslator | None = None) -> TTerm:
    if translator is None:
        translator = SnTranslator(_names_of(j))
    return translator.jump(j)


# --- evaluation contexts ----------------------------------------------------


@dataclass(frozen=True)
class Hole:
    pass


@dataclass(frozen=True)
class AppL:
    """E[box M]: the hole sits in function position."""
    ctx: "EvalCtx"
    arg: Term


@dataclass(frozen=True)
class AppR:
    """E[V box]: the hole sits in argument position under a value."""
    ctx: "EvalCtx"
    value: Term


@dataclass(frozen=True)
class LetArg:
    """E[let binder = box in body]."""
    ctx: "EvalCtx"
    binder: str
    body: Term


EvalCtx = Union[Hole, AppL, AppR, LetArg]


def plug(e: EvalCtx, t: Term) -> Term:
    match e:
        case Hole():
            return t
        case AppL(ctx, m):
            return plug(ctx, App(t, m))
        case AppR(ctx, v):
            return plug(ctx, App(v, t))
        case LetArg(ctx, x, body):
            return plug(ctx, Let(body, x, t))
    raise TypeError(e)


def build_eval_ctx(e: EvalCtx, k_cont: TTerm,
                   translator: SnTranslator | None = None) -> tuple[Optional[TTerm], TTerm]:
    """The pair (Q_E, K_E): for a non-value N, <<E[N]>>[K] = Q_E . <<N>>[K_E].

    Q_E is None for contexts that contribute no prefix (then the dot is
    simply dropped).
    """
    if translator is None:
        avoid = _names_of(plug(e, Var("hole_"))) | tgt_free_vars(k_cont)
        translator = SnTranslator(avoid)

    def down(e: EvalCtx) -> tuple[Optional[TTerm], TTerm, TTerm]:
        match e:
            case Hole():
                return None, k_cont, tilde(k_cont, translator.tilde)
            case AppL(ctx, m):
                qe, ke, ket = down(ctx)
                z = translator.names.fresh("z")
                qzm = translator.term(App(Var(z), m), ke, ket)
                return _dot_opt(qe, ket, qzm), TLam(z, dot(ket, qzm)), dot(ket, qzm)
            case AppR(ctx, v):
                qe, ke, ket = down(ctx)
                z = translator.names.fresh("z")
                qvz = translator.term(App(v, Var(z)), ke, ket)
                return _dot_opt(qe, ket, qvz), TLam(z, dot(ket, qvz)), dot(ket, qvz)
            case LetArg(ctx, x, body):
                qe, ke, ket = down(ctx)
                qm = translator.term(body, ke, ket)
                return _dot_opt(qe, qm), TLam(x, dot(ket, qm)), dot(ket, qm)
        raise TypeError(e)

    qe, ke, _ = down(e)
    return qe, ke


def _dot_opt(qe: Optional[TTerm], *rest: TTerm) -> TTerm:
    parts = ([] if qe is None else [qe]) + list(rest)
    return dot(*parts)


# --- E-depth ----------------------------------------------------------------


def e_depth_path(t: Node, path: tuple[str, ...]) -> int:
    """Nesting depth of an occurrence beneath non-evaluation constructors."""
    d = 0
    cur: Node = t
    for step in path:
        match cur, step:
            case App(f, _), "fun":
                d += 0 if not is_value(f) else 1
                cur = f
            case App(f, a), "arg":
                d += 0 if is_value(f) else 1
                cur = a
            case Let(body, _, _), "body":
                d += 1
                cur = body
            case Let(_, _, arg), "arg":
                cur = arg
            case Lam(_, body), "body":
                d += 1
                cur = body
            case Mu(_, j), "jump":
                cur = j
            case Jmp(_, body), "body":
                d += 1
                cur = body
            case JLet(body, _, _), "body":
                d += 1
                cur = body
            case JLet(_, _, arg), "arg":
                cur = arg
            case _:
                raise ValueError(f"path step {step!r} does not fit {type(cur).__name__}")
    return d


def e_depth(t: Node, place, which: int = 0) -> int:
    """E-depth of the `which`-th term marked by a place (outermost first)."""
    if which >= len(place.marked):
        raise ValueError(f"place {place.index} marks only {len(place.marked)} terms")
    return e_depth_path(t, place.marked[which])


# --- one-step simulation ----------------------------------------------------


@dataclass(frozen=True)
class SimulationResult:
    found: bool
    steps: Optional[int]
    inconclusive: bool  # budget ran out before the search space was exhausted

    def __bool__(self) -> bool:
        return self.found


def _sim_normalize(t: TTerm, renameable: frozenset[str]) -> TTerm:
    """Alpha normal form that also renames junk free variables canonically
    by first occurrence: translations are compared up to the choice of
    generated fresh variables and of exposed binder names (the dead copies
    in front of dots expose the bound names of their source)."""
    mapping: dict[str, str] = {}

    def is_junk(n: str) -> bool:
        return n in renameable or n.startswith("~g")

    def scan(t: TTerm, bound: frozenset[str]):
        match t:
            case TVar(n):
                if is_junk(n) and n not in bound and n not in mapping:
                    mapping[n] = f"~g{len(mapping)}"
            case TLam(b, body):
                scan(body, bound | {b})
            case TApp(f, a):
                scan(f, bound)
                scan(a, bound)
            case Dot(parts):
                for p in parts:
                    scan(p, bound)

    scan(t, frozenset())

    def rename(t: TTerm, bound: frozenset[str]) -> TTerm:
        match t:
            case TVar(n):
                if n in mapping and n not in bound:
                    return TVar(mapping[n])
                return t
            case TLam(b, body):
                return TLam(b, rename(body, bound | {b}))
            case TApp(f, a):
                return TApp(rename(f, bound), rename(a, bound))
            case Dot(parts):
                return Dot(tuple(rename(p, bound) for p in parts))
        raise TypeError(t)

    return tgt_alpha(rename(t, frozenset()))


def reduces_to(source: TTerm, target: TTerm, fuel: int = 30, node_budget: int = 60000,
               rules=frozenset({"beta", "eta", "dot"}),
               renameable: frozenset[str] = frozenset()) -> SimulationResult:
    """Directed search: does source reduce to target in >= 1 steps?"""
    goal = _sim_normalize(target, renameable)
    start = _sim_normalize(source, renameable)
    size_cap = 2 * max(tgt_size(source), tgt_size(target)) + 24
    seen = {start}
    frontier = [start]
    for depth in range(1, fuel + 1):
        nxt = []
        for u in frontier:
            for v in step_tgt(u, rules):
                v = _sim_normalize(v, renameable)
                if v == goal:
                    return SimulationResult(True, depth, False)
                if v in seen or tgt_size(v) > size_cap:
                    continue
                seen.add(v)
                nxt.append(v)
                if len(seen) > node_budget:
                    return SimulationResult(False, None, True)
        if not nxt:
            return SimulationResult(False, None, False)
        frontier = nxt
    return SimulationResult(False, None, True)


def check_one_step_simulation(step: ReductionStep, fuel: int = 30,
                              node_budget: int = 60000) -> SimulationResult:
    """Search for <<source>>[k] ->+ <<target>>[k] in the dot-extended calculus.

    The comparison pins the genuinely free variables of the two terms, the
    continuation k and the tilde partners of free continuation variables;
    every other free variable of the translations (generated z's, exposed
    binder names) is junk and compared up to consistent renaming.
    """
    avoid = _names_of(step.source, step.target)
    names = FreshNames(avoid)
    k = names.fresh("k")
    shared_tilde = TildeEnv(FreshNames(avoid | {k}))
    tr_s = SnTranslator(avoid | {k}, shared_tilde)
    tr_t = SnTranslator(avoid | {k}, shared_tilde)
    s = sn_translate(step.source, TVar(k), tr_s)
    t = sn_translate(step.target, TVar(k), tr_t)
    so, sc = free_names(step.source)
    to, tc = free_names(step.target)
    pinned = so | sc | to | tc | {k}
    pinned |= set(shared_tilde.partners().values())
    renameable = frozenset((tgt_free_vars(s) | tgt_free_vars(t)) - pinned)
    return reduces_to(s, t, fuel=fuel, node_budget=node_budget, renameable=renameable)
