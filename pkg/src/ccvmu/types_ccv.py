"""Union-intersection types for the source calculus, and derivation checking.

Types come in three layers: raw types (atoms and arrows), subsidiary types
(nonempty intersections of raws), and types proper (nonempty unions of
subsidiaries). Intersection and union are associative-commutative but NOT
idempotent, so both are kept as sorted multisets. There is no empty
intersection and no empty union anywhere. Jumps are typed at the special
bottom type.

Derivations are explicit trees that get checked, not inferred. Judgments
normalize environment order away; index families across premises are
matched as multisets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .terms import App, JLet, Jmp, Lam, Let, Mu, Node, Var
from . import syntax

__all__ = [
    "CAtom", "CArrow", "CInter", "CUnion", "CBot", "BOT_CCV", "CRaw", "CType",
    "inter", "union", "usingleton", "subtype_ccv",
    "CcvJudgment", "CcvDerivation", "CheckResult",
    "env_get", "env_set", "check_ccv",
    "d_var", "d_lam", "d_app", "d_let", "d_mu", "d_jmp", "d_jlet", "d_sub",
    "ctype_to_json", "ctype_from_json", "cderiv_to_json", "cderiv_from_json",
]


@dataclass(frozen=True)
class CAtom:
    name: str


@dataclass(frozen=True)
class CArrow:
    dom: "CInter"
    cod: "CUnion"


CRaw = Union[CAtom, CArrow]


@dataclass(frozen=True)
class CInter:
    parts: tuple[CRaw, ...]  # sorted multiset, nonempty


@dataclass(frozen=True)
class CUnion:
    parts: tuple[CInter, ...]  # sorted multiset, nonempty


@dataclass(frozen=True)
class CBot:
    """The jump type; only ever the type of a jump judgment."""


BOT_CCV = CBot()
CType = Union[CUnion, CBot]


def _key(t) -> tuple:
    match t:
        case CAtom(n):
            return (0, n)
        case CArrow(d, c):
            return (1, _key(d), _key(c))
        case CInter(parts):
            return (2, tuple(_key(p) for p in parts))
        case CUnion(parts):
            return (3, tuple(_key(p) for p in parts))
    raise TypeError(t)


def inter(*raws: CRaw) -> CInter:
    if not raws:
        raise ValueError("empty intersection is not a type here")
    for r in raws:
        if not isinstance(r, (CAtom, CArrow)):
            raise TypeError(f"intersection parts must be raw types, got {r}")
    return CInter(tuple(sorted(raws, key=_key)))


def union(*subs: CInter) -> CUnion:
    if not subs:
        raise ValueError("empty union is not a type here")
    for s in subs:
        if not isinstance(s, CInter):
            raise TypeError(f"union parts must be subsidiary types, got {s}")
    return CUnion(tuple(sorted(subs, key=_key)))


def usingleton(raw: CRaw) -> CUnion:
    """The union-of-intersection view of a single raw type."""
    return union(inter(raw))


# --- subtyping --------------------------------------------------------------


def subtype_ccv(a, b) -> bool:
    """Derivability in the displayed subtype rules (syntax-directed search)."""
    if isinstance(a, (CAtom, CArrow)) and isinstance(b, (CAtom, CArrow)):
        return _raw_le(a, b)
    if isinstance(a, CInter) and isinstance(b, CInter):
        return _inter_le(a, b)
    if isinstance(a, CUnion) and isinstance(b, CUnion):
        return all(any(_inter_le(s, s2) for s2 in b.parts) for s in a.parts)
    raise ValueError(f"subtype categories do not match: {type(a).__name__} vs {type(b).__name__}")


def _raw_le(a: CRaw, b: CRaw) -> bool:
    match a, b:
        case CAtom(x), CAtom(y):
            return x == y
        case CArrow(d1, c1), CArrow(d2, c2):
            return _inter_le(d2, d1) and subtype_ccv(c1, c2)
        case _:
            return False


def _inter_le(a: CInter, b: CInter) -> bool:
    return all(any(_raw_le(r, r2) for r in a.parts) for r2 in b.parts)


# --- judgments and derivations ----------------------------------------------

Env = tuple[tuple[str, CInter], ...]
DEnv = tuple[tuple[str, CUnion], ...]


def env_get(env, name: str):
    for n, t in env:
        if n == name:
            return t
    return None


def env_set(env, name: str, t) -> tuple:
    items = [(n, v) for n, v in env if n != name]
    items.append((name, t))
    return tuple(sorted(items))


def mk_env(items) -> tuple:
    return tuple(sorted(dict(items).items()))


@dataclass(frozen=True)
class CcvJudgment:
    gamma: Env
    delta: DEnv
    subject: Node
    type_: CType


@dataclass(frozen=True)
class CcvDerivation:
    rule: str  # var lam app let mu jmp jlet sub
    judgment: CcvJudgment
    premises: tuple["CcvDerivation", ...] = ()


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    path: tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


OK = CheckResult(True)


def _err(path, reason) -> CheckResult:
    return CheckResult(False, tuple(path), reason)


def _domains_of(sub: CInter, cod: CUnion):
    """If every raw in `sub` is an arrow with codomain `cod`, the union of
    their domains; otherwise None."""
    doms = []
    for r in sub.parts:
        if not isinstance(r, CArrow) or r.cod != cod:
            return None
        doms.append(r.dom)
    return union(*doms)


def check_ccv(d: CcvDerivation) -> CheckResult:
    """Validate every node of a derivation; Err pinpoints the first bad one."""
    return _check_ccv(d, ())


def _check_ccv(d: CcvDerivation, path) -> CheckResult:
    j = d.judgment
    g, dl, subj, ty = j.gamma, j.delta, j.subject, j.type_

    def premise_envs_match(p: CcvJudgment, gamma=None, delta=None) -> bool:
        return p.gamma == (gamma if gamma is not None else g) and \
            p.delta == (delta if delta is not None else dl)

    match d.rule:
        case "var":
            if not isinstance(subj, Var):
                return _err(path, "var rule on a non-variable")
            s = env_get(g, subj.name)
            if s is None:
                return _err(path, f"{subj.name} not in environment")
            if ty != union(s):
                return _err(path, "variable type does not match its environment entry")
            if d.premises:
                return _err(path, "axiom with premises")
            return OK
        case "lam":
            if not isinstance(subj, Lam) or not d.premises:
                return _err(path, "lam rule needs a lambda subject and premises")
            arrows = []
            for i, p in enumerate(d.premises):
                pj = p.judgment
                if pj.subject != subj.body:
                    return _err(path, f"premise {i} subject is not the body")
                s_i = env_get(pj.gamma, subj.binder)
                if s_i is None:
                    return _err(path, f"premise {i} does not bind {subj.binder}")
                if pj.gamma != env_set(g, subj.binder, s_i) or pj.delta != dl:
                    return _err(path, f"premise {i} environment mismatch")
                if not isinstance(pj.type_, CUnion):
                    return _err(path, f"premise {i} types the body at bottom")
                arrows.append(CArrow(s_i, pj.type_))
            if ty != union(inter(*arrows)):
                return _err(path, "conclusion is not the intersection of the premise arrows")
            return _check_premises(d, path)
        case "app":
            if not isinstance(subj, App) or len(d.premises) < 2:
                return _err(path, "app rule needs an application and >= 2 premises")
            pm, pns = d.premises[0], d.premises[1:]
            if pm.judgment.subject != subj.fun:
                return _err(path, "first premise subject is not the function")
            if not isinstance(ty, CUnion) or not isinstance(pm.judgment.type_, CUnion):
                return _err(path, "app conclusion and function premise must have union types")
            if not premise_envs_match(pm.judgment):
                return _err(path, "function premise environment mismatch")
            wanted = []
            for s in pm.judgment.type_.parts:
                doms = _domains_of(s, ty)
                if doms is None:
                    return _err(path, "function type is not an intersection of arrows "
                                      "into the conclusion type")
                wanted.append(doms)
            got = []
            for i, p in enumerate(pns):
                pj = p.judgment
                if pj.subject != subj.arg:
                    return _err(path, f"argument premise {i} subject mismatch")
                if not premise_envs_match(pj):
                    return _err(path, f"argument premise {i} environment mismatch")
                if not isinstance(pj.type_, CUnion):
                    return _err(path, f"argument premise {i} typed at bottom")
                got.append(pj.type_)
            if sorted(wanted, key=_key) != sorted(got, key=_key):
                return _err(path, "argument premise family does not match the "
                                  "function type's disjuncts")
            return _check_premises(d, path)
        case "let" | "jlet":
            is_jlet = d.rule == "jlet"
            if is_jlet and not isinstance(subj, JLet):
                return _err(path, "jlet rule on a non-jump-let")
            if not is_jlet and not isinstance(subj, Let):
                return _err(path, "let rule on a non-let")
            if len(d.premises) < 2:
                return _err(path, "let rules need body premises plus one argument premise")
            body_ps, parg = d.premises[:-1], d.premises[-1]
            if is_jlet and ty != BOT_CCV:
                return _err(path, "jump-let conclusion must be bottom")
            subs = []
            for i, p in enumerate(body_ps):
                pj = p.judgment
                if pj.subject != subj.body:
                    return _err(path, f"body premise {i} subject mismatch")
                s_i = env_get(pj.gamma, subj.binder)
                if s_i is None:
                    return _err(path, f"body premise {i} does not bind {subj.binder}")
                if pj.gamma != env_set(g, subj.binder, s_i) or pj.delta != dl:
                    return _err(path, f"body premise {i} environment mismatch")
                if pj.type_ != (BOT_CCV if is_jlet else ty):
                    return _err(path, f"body premise {i} type mismatch")
                subs.append(s_i)
            pj = parg.judgment
            if pj.subject != subj.arg or not premise_envs_match(pj):
                return _err(path, "argument premise mismatch")
            if pj.type_ != union(*subs):
                return _err(path, "argument type is not the union of the binder types")
            return _check_premises(d, path)
        case "mu":
            if not isinstance(subj, Mu) or len(d.premises) != 1:
                return _err(path, "mu rule needs a mu subject and one premise")
            if not isinstance(ty, CUnion):
                return _err(path, "mu conclusion must be a union type")
            pj = d.premises[0].judgment
            if pj.subject != subj.jump or pj.type_ != BOT_CCV:
                return _err(path, "premise must type the jump at bottom")
            if pj.gamma != g or pj.delta != env_set(dl, subj.binder, ty):
                return _err(path, "premise environment must extend delta with the binder")
            return _check_premises(d, path)
        case "jmp":
            if not isinstance(subj, Jmp) or len(d.premises) != 1 or ty != BOT_CCV:
                return _err(path, "jmp rule needs a jump subject, one premise, bottom type")
            t_k = env_get(dl, subj.target)
            if t_k is None:
                return _err(path, f"{subj.target} not in the continuation environment")
            pj = d.premises[0].judgment
            if pj.subject != subj.body or pj.type_ != t_k:
                return _err(path, "premise must type the body at the jump target's type")
            if not premise_envs_match(pj):
                return _err(path, "premise environment mismatch")
            return _check_premises(d, path)
        case "sub":
            if len(d.premises) != 1:
                return _err(path, "subtype rule needs exactly one premise")
            pj = d.premises[0].judgment
            if pj.subject != subj or not premise_envs_match(pj):
                return _err(path, "subtype premise subject/environment mismatch")
            if not isinstance(pj.type_, CUnion) or not isinstance(ty, CUnion):
                return _err(path, "subtype rule applies to union types only")
            if not subtype_ccv(pj.type_, ty):
                return _err(path, "premise type is not a subtype of the conclusion type")
            return _check_premises(d, path)
    return _err(path, f"unknown rule {d.rule!r}")


def _check_premises(d: CcvDerivation, path) -> CheckResult:
    for i, p in enumerate(d.premises):
        r = _check_ccv(p, path + (i,))
        if not r:
            return r
    return OK


# --- builders (compute the conclusion judgment from the premises) ------------


def d_var(gamma, delta, x: str) -> CcvDerivation:
    s = env_get(gamma, x)
    if s is None:
        raise ValueError(f"{x} not bound in gamma")
    return CcvDerivation("var", CcvJudgment(gamma, delta, Var(x), union(s)))


def d_lam(x: str, premises) -> CcvDerivation:
    premises = tuple(premises)
    p0 = premises[0].judgment
    gamma = tuple((n, t) for n, t in p0.gamma if n != x)
    arrows = [CArrow(env_get(p.judgment.gamma, x), p.judgment.type_) for p in premises]
    ty = union(inter(*arrows))
    return CcvDerivation("lam", CcvJudgment(gamma, p0.delta, Lam(x, p0.subject), ty), premises)


def d_app(p_fun: CcvDerivation, p_args) -> CcvDerivation:
    p_args = tuple(p_args)
    jf = p_fun.judgment
    cods = {r.cod for s in jf.type_.parts for r in s.parts}
    if len(cods) != 1:
        raise ValueError("function type disjuncts must share one codomain")
    ty = cods.pop()
    subj = App(jf.subject, p_args[0].judgment.subject)
    return CcvDerivation("app", CcvJudgment(jf.gamma, jf.delta, subj, ty),
                         (p_fun,) + p_args)


def d_let(x: str, body_premises, p_arg: CcvDerivation) -> CcvDerivation:
    body_premises = tuple(body_premises)
    p0 = body_premises[0].judgment
    gamma = tuple((n, t) for n, t in p0.gamma if n != x)
    rule = "jlet" if p0.type_ == BOT_CCV else "let"
    cls = JLet if rule == "jlet" else Let
    subj = cls(p0.subject, x, p_arg.judgment.subject)
    ty = BOT_CCV if rule == "jlet" else p0.type_
    return CcvDerivation(rule, CcvJudgment(gamma, p0.delta, subj, ty),
                         body_premises + (p_arg,))


def d_jlet(x: str, body_premises, p_arg: CcvDerivation) -> CcvDerivation:
    return d_let(x, body_premises, p_arg)


def d_mu(k: str, premise: CcvDerivation) -> CcvDerivation:
    pj = premise.judgment
    ty = env_get(pj.delta, k)
    if ty is None:
        raise ValueError(f"{k} not bound in delta")
    delta = tuple((n, t) for n, t in pj.delta if n != k)
    return CcvDerivation("mu", CcvJudgment(pj.gamma, delta, Mu(k, pj.subject), ty),
                         (premise,))


def d_jmp(k: str, premise: CcvDerivation) -> CcvDerivation:
    pj = premise.judgment
    t_k = env_get(pj.delta, k)
    if t_k != pj.type_:
        raise ValueError(f"delta must give {k} the premise's type")
    return CcvDerivation("jmp", CcvJudgment(pj.gamma, pj.delta, Jmp(k, pj.subject),
                                            BOT_CCV), (premise,))


def d_sub(premise: CcvDerivation, ty: CUnion) -> CcvDerivation:
    pj = premise.judgment
    return CcvDerivation("sub", CcvJudgment(pj.gamma, pj.delta, pj.subject, ty),
                         (premise,))


# --- JSON --------------------------------------------------------------------


def ctype_to_json(t):
    match t:
        case CAtom(n):
            return {"tag": "Atom", "name": n}
        case CArrow(d, c):
            return {"tag": "Arrow", "dom": ctype_to_json(d), "cod": ctype_to_json(c)}
        case CInter(parts):
            return {"tag": "Inter", "parts": [ctype_to_json(p) for p in parts]}
        case CUnion(parts):
            return {"tag": "Union", "parts": [ctype_to_json(p) for p in parts]}
        case CBot():
            return {"tag": "Bot"}
    raise TypeError(t)


def ctype_from_json(obj):
    tag = obj["tag"]
    if tag == "Atom":
        return CAtom(obj["name"])
    if tag == "Arrow":
        return CArrow(ctype_from_json(obj["dom"]), ctype_from_json(obj["cod"]))
    if tag == "Inter":
        return inter(*[ctype_from_json(p) for p in obj["parts"]])
    if tag == "Union":
        return union(*[ctype_from_json(p) for p in obj["parts"]])
    if tag == "Bot":
        return BOT_CCV
    raise ValueError(f"unknown tag {tag!r}")


def cderiv_to_json(d: CcvDerivation):
    j = d.judgment
    return {
        "rule": d.rule,
        "judgment": {
            "gamma": {n: ctype_to_json(t) for n, t in j.gamma},
            "delta": {n: ctype_to_json(t) for n, t in j.delta},
            "subject": syntax.term_to_json(j.subject),
            "type": ctype_to_json(j.type_),
        },
        "premises": [cderiv_to_json(p) for p in d.premises],
    }


def cderiv_from_json(obj) -> CcvDerivation:
    j = obj["judgment"]
    judgment = CcvJudgment(
        mk_env({n: ctype_from_json(t) for n, t in j["gamma"].items()}.items()),
        mk_env({n: ctype_from_json(t) for n, t in j["delta"].items()}.items()),
        syntax.term_from_json(j["subject"]),
        ctype_from_json(j["type"]),
    )
    return CcvDerivation(obj["rule"], judgment,
                         tuple(cderiv_from_json(p) for p in obj["premises"]))
