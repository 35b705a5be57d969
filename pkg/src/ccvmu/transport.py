"""Type translation and derivation transport into the dot-extended calculus.

Union-intersection types translate by

    a* = a     (S -> T)* = T+ -> bot -> ~S*     (inter R)* = inter R*
    (union S)+ = inter ~S*                      [[T]] = ~T+

(writing ~X for X -> bot). The translation is monotone: S <= S' gives
S* <= S'*, and T <= T' gives T'+ <= T+, which lets inheritance nodes absorb
source subtype steps.

transport_aei16 turns a valid source derivation of Gamma |- M : T | Delta
into a valid dot-extended derivation of <<M>>[k] : bot under the translated
environments plus k : T+ and k~ : bot. The construction mirrors the
translation table: translation (which draws fresh names) happens once per
source occurrence, while the derivation builders are replayable closures,
because one translated piece may be typed several times, once per member of
an index family. Dead code sitting left of a dot is typed by choosing one
branch of the relevant family and putting the choice into the environment;
choices default to the first index and are recorded in the result.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cps import FreshNames, TildeEnv
from .terms import App, JLet, Jmp, Lam, Let, Mu, Var, all_names, is_value
from .target import TApp, TLam, TTerm, TVar, dot
from .types_ccv import (BOT_CCV, CArrow, CAtom, CInter, CRaw, CUnion,
                        CcvDerivation, check_ccv, env_get, subtype_ccv, union)
from .types_target import (BOT, SArrow, SAtom, SInter, TgtDerivation,
                           TgtJudgment, check_tgt, sinter, with_env)

__all__ = [
    "tr_raw", "tr_inter", "tr_plus", "tr_bracket", "translate_type",
    "TransportResult", "transport_aei16",
]


def tr_raw(r: CRaw):
    match r:
        case CAtom(n):
            return SAtom(n)
        case CArrow(dom, cod):
            return SArrow(tr_plus(cod), SArrow(sinter(BOT), SArrow(tr_inter(dom), BOT)))
    raise TypeError(r)


def tr_inter(s: CInter) -> SInter:
    return sinter(*(tr_raw(r) for r in s.parts))


def tr_plus(t: CUnion) -> SInter:
    return sinter(*(SArrow(tr_inter(s), BOT) for s in t.parts))


def tr_bracket(t: CUnion) -> SArrow:
    return SArrow(tr_plus(t), BOT)


def translate_type(t: CUnion) -> tuple[SInter, SArrow]:
    """The pair (T+, [[T]])."""
    return tr_plus(t), tr_bracket(t)


# --- transport ---------------------------------------------------------------


def _node(rule: str, subject: TTerm, ty, premises=()) -> TgtDerivation:
    return TgtDerivation(rule, TgtJudgment((), subject, ty), tuple(premises))


def _neg(s: CInter) -> SArrow:
    return SArrow(tr_inter(s), BOT)


@dataclass
class _KProv:
    """Typings of a continuation K at ~S* (per disjunct S) and of K~ at bot."""
    term: TTerm
    tilde_term: TTerm
    prove: object  # (CInter) -> TgtDerivation
    prove_tilde: object  # () -> TgtDerivation


def _var_kp(kname: str, ktname: str, t: CUnion) -> _KProv:
    def prove(s: CInter) -> TgtDerivation:
        if s not in t.parts:
            raise ValueError(f"{s} is not a disjunct of the continuation's type")
        return _node("var", TVar(kname), _neg(s))

    return _KProv(TVar(kname), TVar(ktname), prove,
                  lambda: _node("var", TVar(ktname), BOT))


def _weaken_kp(kp: _KProv, small: CUnion, big: CUnion) -> _KProv:
    def prove(s: CInter) -> TgtDerivation:
        for s2 in big.parts:
            if subtype_ccv(s, s2):
                return _node("sub", kp.term, _neg(s), (kp.prove(s2),))
        raise ValueError("subtype witness vanished during transport")

    return _KProv(kp.term, kp.tilde_term, prove, kp.prove_tilde)


def _unwrap_subs(d: CcvDerivation, kp: _KProv):
    while d.rule == "sub":
        inner = d.premises[0]
        kp = _weaken_kp(kp, inner.judgment.type_, d.judgment.type_)
        d = inner
    return d, kp


def _value_base(d: CcvDerivation) -> CcvDerivation:
    while d.rule == "sub":
        d = d.premises[0]
    if d.rule not in ("var", "lam"):
        raise ValueError(f"value typed by rule {d.rule!r}")
    return d


def _base_inter(d: CcvDerivation) -> CInter:
    ty = d.judgment.type_
    assert isinstance(ty, CUnion) and len(ty.parts) == 1
    return ty.parts[0]


@dataclass
class TransportResult:
    derivation: TgtDerivation
    term: TTerm
    k: str
    k_tilde: str
    choices: tuple[str, ...]


class _Transport:
    def __init__(self, avoid):
        self.names = FreshNames(avoid)
        self.tilde = TildeEnv(self.names)
        self.extras: dict[str, list] = {}
        self.choices: list[str] = []

    def extend_env(self, name: str, parts) -> None:
        self.extras.setdefault(name, []).extend(parts)

    def _pick_disjunct(self, base: CInter, t: CUnion) -> int:
        for i, s in enumerate(t.parts):
            if subtype_ccv(base, s):
                return i
        raise ValueError("no reachable disjunct; derivation invalid")

    @staticmethod
    def _pick_arrow(disjunct: CInter, arg_base: CInter) -> CArrow:
        for r in disjunct.parts:
            assert isinstance(r, CArrow)
            if subtype_ccv(arg_base, r.dom):
                return r
        raise ValueError("no arrow of the disjunct fits the argument")

    @staticmethod
    def _arg_premise_for(d: CcvDerivation, disjunct: CInter, used: set) -> CcvDerivation:
        want = union(*(r.dom for r in disjunct.parts))
        for idx, p in enumerate(d.premises[1:]):
            if idx not in used and p.judgment.type_ == want:
                used.add(idx)
                return p
        raise ValueError("no argument premise matches the disjunct")

    @staticmethod
    def _premise_binding(premises, x: str, s: CInter) -> CcvDerivation:
        for p in premises:
            if env_get(p.judgment.gamma, x) == s:
                return p
        raise ValueError(f"no premise binds {x} at the requested type")

    def _chain(self, wterm, wderiv, kc, kt, kp, arrow: CArrow, last_term, last_derivs):
        """w kc kt last : bot, through the translated arrow type of w."""
        a1 = TApp(wterm, kc)
        n1 = _node("app", a1, SArrow(sinter(BOT), _neg(arrow.dom)),
                   [wderiv] + [kp.prove(s) for s in arrow.cod.parts])
        a2 = TApp(a1, kt)
        n2 = _node("app", a2, _neg(arrow.dom), [n1, kp.prove_tilde()])
        a3 = TApp(a2, last_term)
        return _node("app", a3, BOT, [n2] + list(last_derivs))

    # -- terms ------------------------------------------------------------

    def build_term(self, t, kc: TTerm, kt: TTerm, cenv: dict):
        """Translate t against the continuation term kc (with kt its tilde);
        returns (q, derive) with derive(D, kp, denv) building a typing of q."""
        if is_value(t):
            wterm, wderive = self.build_value(t, cenv)
            q = TApp(kc, wterm)

            def derive(d, kp, denv):
                d2, kp2 = _unwrap_subs(d, kp)
                base = _value_base(d2)
                s0 = _base_inter(base)
                return _node("app", q, BOT, [kp2.prove(s0)] +
                             [wderive(base, denv, r) for r in s0.parts])

            return q, derive

        match t:
            case App(f, a) if is_value(f) and is_value(a):
                return self._build_app_vv(f, a, kc, kt, cenv)
            case App(f, a) if is_value(f):
                return self._build_app_vn(f, a, kc, kt, cenv)
            case App(f, a) if is_value(a):
                return self._build_app_nv(f, a, kc, kt, cenv)
            case App(f, a):
                return self._build_app_nn(f, a, kc, kt, cenv)
            case Let(body, x, arg):
                return self._build_let(body, x, arg, kc, kt, cenv)
            case Mu(k2, j):
                cenv2 = {**cenv, k2: (kc, kt)}
                qj, dj = self.build_jump(j, cenv2)
                q = dot(kt, qj)

                def derive(d, kp, denv):
                    d2, kp2 = _unwrap_subs(d, kp)
                    denv2 = {**denv, t.binder: kp2}
                    return _node("dot", q, BOT,
                                 [kp2.prove_tilde(), dj(d2.premises[0], denv2)])

                return q, derive
        raise TypeError(t)

    def _build_app_vv(self, f, a, kc, kt, cenv):
        wf, df = self.build_value(f, cenv)
        wa, da = self.build_value(a, cenv)
        q = TApp(TApp(TApp(wf, kc), kt), wa)

        def derive(d, kp, denv):
            d2, kp2 = _unwrap_subs(d, kp)
            p0 = d2.premises[0]
            base_f = _value_base(p0)
            i0 = self._pick_disjunct(_base_inter(base_f), p0.judgment.type_)
            self.choices.append(f"app-vv i0={i0}")
            disjunct = p0.judgment.type_.parts[i0]
            parg = self._arg_premise_for(d2, disjunct, set())
            base_a = _value_base(parg)
            arrow = self._pick_arrow(disjunct, _base_inter(base_a))
            return self._chain(wf, df(base_f, denv, arrow), kc, kt, kp2, arrow,
                               wa, [da(base_a, denv, r) for r in arrow.dom.parts])

        return q, derive

    def _build_app_vn(self, f, n, kc, kt, cenv):
        # <<V N>>[K] = K~ . Q' . <<N>>[\z. K~ . Q']  with Q' = V* K K~ z
        wf, df = self.build_value(f, cenv)
        z = self.names.fresh("z")
        qp = TApp(TApp(TApp(wf, kc), kt), TVar(z))
        cont = TLam(z, dot(kt, qp))
        qn, dn = self.build_term(n, cont, dot(kt, qp), cenv)
        q = dot(kt, qp, qn)

        def derive(d, kp, denv):
            d2, kp2 = _unwrap_subs(d, kp)
            p0 = d2.premises[0]
            base_f = _value_base(p0)
            i0 = self._pick_disjunct(_base_inter(base_f), p0.judgment.type_)
            disjunct = p0.judgment.type_.parts[i0]
            dead_arrow = disjunct.parts[0]
            self.choices.append(f"app-vn i0={i0} j0=0")
            self.extend_env(z, tr_inter(dead_arrow.dom).parts)
            parg = self._arg_premise_for(d2, disjunct, set())

            def q_prime(arrow: CArrow) -> TgtDerivation:
                return self._chain(
                    wf, df(base_f, denv, arrow), kc, kt, kp2, arrow, TVar(z),
                    [_node("var", TVar(z), tr_raw(r)) for r in arrow.dom.parts])

            def prove(s: CInter) -> TgtDerivation:
                arrow = next(r for r in disjunct.parts if r.dom == s)
                inner = _node("dot", dot(kt, qp), BOT,
                              [kp2.prove_tilde(), q_prime(arrow)])
                return _node("lam", cont, _neg(s), (inner,))

            kp_cont = _KProv(cont, dot(kt, qp), prove,
                             lambda: _node("dot", dot(kt, qp), BOT,
                                           [kp2.prove_tilde(), q_prime(dead_arrow)]))
            return _node("dot", q, BOT,
                         [kp2.prove_tilde(), q_prime(dead_arrow),
                          dn(parg, kp_cont, denv)])

        return q, derive

    def _build_app_nv(self, n, a, kc, kt, cenv):
        # <<N V>>[K] = K~ . Q'' . <<N>>[\z. K~ . Q'']  with Q'' = z K K~ V*
        wa, da = self.build_value(a, cenv)
        z = self.names.fresh("z")
        qp = TApp(TApp(TApp(TVar(z), kc), kt), wa)
        cont = TLam(z, dot(kt, qp))
        qn, dn = self.build_term(n, cont, dot(kt, qp), cenv)
        q = dot(kt, qp, qn)

        def derive(d, kp, denv):
            d2, kp2 = _unwrap_subs(d, kp)
            p0 = d2.premises[0]
            disjuncts = p0.judgment.type_.parts
            used: set = set()
            per_i = []
            for disjunct in disjuncts:
                parg = self._arg_premise_for(d2, disjunct, used)
                base_a = _value_base(parg)
                arrow = self._pick_arrow(disjunct, _base_inter(base_a))
                per_i.append((disjunct, parg, base_a, arrow))
            self.choices.append(f"app-nv i0=0 j0={[d_.parts.index(ar) for d_, _, _, ar in per_i]}")
            _, parg0, base_a0, arrow0 = per_i[0]
            self.extend_env(z, [tr_raw(arrow0)])

            def q_second(arrow: CArrow, base_a) -> TgtDerivation:
                zf = _node("var", TVar(z), tr_raw(arrow))
                return self._chain(TVar(z), zf, kc, kt, kp2, arrow, wa,
                                   [da(base_a, denv, r) for r in arrow.dom.parts])

            def prove(s: CInter) -> TgtDerivation:
                i = list(disjuncts).index(s)
                _, _, base_a, arrow = per_i[i]
                inner = _node("dot", dot(kt, qp), BOT,
                              [kp2.prove_tilde(), q_second(arrow, base_a)])
                return _node("lam", cont, _neg(s), (inner,))

            kp_cont = _KProv(cont, dot(kt, qp), prove,
                             lambda: _node("dot", dot(kt, qp), BOT,
                                           [kp2.prove_tilde(), q_second(arrow0, base_a0)]))
            return _node("dot", q, BOT,
                         [kp2.prove_tilde(), q_second(arrow0, base_a0),
                          dn(p0, kp_cont, denv)])

        return q, derive

    def _build_app_nn(self, n1, n2, kc, kt, cenv):
        # <<N1 N2>>[K] = K~ . QA . <<N1>>[\z. K~ . QA]
        # QA = <<z N2>>[K] = K~ . C . <<N2>>[\w. K~ . C],  C = z K K~ w
        z = self.names.fresh("z")
        w = self.names.fresh("z")
        c = TApp(TApp(TApp(TVar(z), kc), kt), TVar(w))
        cont_w = TLam(w, dot(kt, c))
        qn2, dn2 = self.build_term(n2, cont_w, dot(kt, c), cenv)
        qa = dot(kt, c, qn2)
        cont_z = TLam(z, dot(kt, qa))
        qn1, dn1 = self.build_term(n1, cont_z, dot(kt, qa), cenv)
        q = dot(kt, qa, qn1)

        def derive(d, kp, denv):
            d2, kp2 = _unwrap_subs(d, kp)
            p0 = d2.premises[0]
            disjuncts = p0.judgment.type_.parts
            used: set = set()
            per_i = []
            for disjunct in disjuncts:
                parg = self._arg_premise_for(d2, disjunct, used)
                arrow = disjunct.parts[0]
                assert isinstance(arrow, CArrow)
                per_i.append((disjunct, parg, arrow))
            self.choices.append("app-nn i0=0 j0=first")
            d_i0, _, _ = per_i[0]
            self.extend_env(z, [tr_raw(r) for r in d_i0.parts])
            for _, _, arrow in per_i:
                self.extend_env(w, tr_inter(arrow.dom).parts)

            def c_deriv(arrow: CArrow) -> TgtDerivation:
                zf = _node("var", TVar(z), tr_raw(arrow))
                return self._chain(TVar(z), zf, kc, kt, kp2, arrow, TVar(w),
                                   [_node("var", TVar(w), tr_raw(r))
                                    for r in arrow.dom.parts])

            def qa_deriv(i: int) -> TgtDerivation:
                disjunct, parg, dead_arrow = per_i[i]

                def w_prove(s: CInter) -> TgtDerivation:
                    arrow = next(r for r in disjunct.parts if r.dom == s)
                    inner = _node("dot", dot(kt, c), BOT,
                                  [kp2.prove_tilde(), c_deriv(arrow)])
                    return _node("lam", cont_w, _neg(s), (inner,))

                kp_w = _KProv(cont_w, dot(kt, c), w_prove,
                              lambda: _node("dot", dot(kt, c), BOT,
                                            [kp2.prove_tilde(), c_deriv(dead_arrow)]))
                return _node("dot", qa, BOT,
                             [kp2.prove_tilde(), c_deriv(dead_arrow),
                              dn2(parg, kp_w, denv)])

            def z_prove(s: CInter) -> TgtDerivation:
                i = list(disjuncts).index(s)
                inner = _node("dot", dot(kt, qa), BOT,
                              [kp2.prove_tilde(), qa_deriv(i)])
                return _node("lam", cont_z, _neg(s), (inner,))

            kp_z = _KProv(cont_z, dot(kt, qa), z_prove,
                          lambda: _node("dot", dot(kt, qa), BOT,
                                        [kp2.prove_tilde(), qa_deriv(0)]))
            return _node("dot", q, BOT,
                         [kp2.prove_tilde(), qa_deriv(0), dn1(p0, kp_z, denv)])

        return q, derive

    def _build_let(self, body, x, arg, kc, kt, cenv):
        q1, d1 = self.build_term(body, kc, kt, cenv)
        cont = TLam(x, dot(kt, q1))
        qn, dn = self.build_term(arg, cont, dot(kt, q1), cenv)
        q = dot(q1, qn)

        def derive(d, kp, denv):
            d2, kp2 = _unwrap_subs(d, kp)
            body_ps, parg = d2.premises[:-1], d2.premises[-1]
            self.choices.append("let i0=0")
            s_first = env_get(body_ps[0].judgment.gamma, x)
            self.extend_env(x, tr_inter(s_first).parts)

            def prove(s: CInter) -> TgtDerivation:
                p_i = self._premise_binding(body_ps, x, s)
                inner = _node("dot", dot(kt, q1), BOT,
                              [kp2.prove_tilde(), d1(p_i, kp2, denv)])
                return _node("lam", cont, _neg(s), (inner,))

            kp_cont = _KProv(cont, dot(kt, q1), prove,
                             lambda: _node("dot", dot(kt, q1), BOT,
                                           [kp2.prove_tilde(), d1(body_ps[0], kp2, denv)]))
            return _node("dot", q, BOT,
                         [d1(body_ps[0], kp2, denv), dn(parg, kp_cont, denv)])

        return q, derive

    # -- jumps ------------------------------------------------------------

    def build_jump(self, j, cenv: dict):
        match j:
            case Jmp(k, m):
                if k in cenv:
                    kc, kt = cenv[k]
                else:
                    kc, kt = TVar(k), TVar(self.tilde.partner(k))
                qm, dm = self.build_term(m, kc, kt, cenv)
                q = dot(kt, qm)

                def derive(dj, denv):
                    kp = denv.get(k)
                    if kp is None:
                        t_k = env_get(dj.judgment.delta, k)
                        kp = _var_kp(k, self.tilde.partner(k), t_k)
                    return _node("dot", q, BOT,
                                 [kp.prove_tilde(), dm(dj.premises[0], kp, denv)])

                return q, derive
            case JLet(body, x, arg):
                qj, djp = self.build_jump(body, cenv)
                cont = TLam(x, qj)
                qn, dn = self.build_term(arg, cont, qj, cenv)
                q = dot(qj, qn)

                def derive(dj, denv):
                    body_ps, parg = dj.premises[:-1], dj.premises[-1]
                    self.choices.append("jlet i0=0")
                    s_first = env_get(body_ps[0].judgment.gamma, x)
                    self.extend_env(x, tr_inter(s_first).parts)

                    def prove(s: CInter) -> TgtDerivation:
                        p_i = self._premise_binding(body_ps, x, s)
                        return _node("lam", cont, _neg(s), (djp(p_i, denv),))

                    kp_cont = _KProv(cont, qj, prove,
                                     lambda: djp(body_ps[0], denv))
                    return _node("dot", q, BOT,
                                 [djp(body_ps[0], denv), dn(parg, kp_cont, denv)])

                return q, derive
        raise TypeError(j)

    # -- values -----------------------------------------------------------

    def build_value(self, v, cenv: dict):
        match v:
            case Var(name):
                wterm = TVar(name)

                def derive(base, denv, r_target: CRaw):
                    s0 = _base_inter(base)
                    r0 = next(r for r in s0.parts if subtype_ccv(r, r_target))
                    node = _node("var", wterm, tr_raw(r0))
                    if r0 != r_target:
                        node = _node("sub", wterm, tr_raw(r_target), (node,))
                    return node

                return wterm, derive
            case Lam(x, m):
                # the head copy of the body keeps x free (dead code), so the
                # outermost ordinary binder is fresh; x gets a chosen-branch
                # environment entry, like any other dot-dead occurrence
                k2 = self.names.fresh("k")
                kt2 = self.tilde.partner(k2)
                qb, db = self.build_term(m, TVar(k2), TVar(kt2), cenv)
                x2 = self.names.fresh(x)
                inner_app = TApp(TLam(x, dot(TVar(kt2), qb)), TVar(x2))
                body = dot(qb, inner_app)
                wterm = TLam(k2, TLam(kt2, TLam(x2, body)))

                def derive(base, denv, r_target: CRaw):
                    s0 = _base_inter(base)
                    r0 = next(r for r in s0.parts if subtype_ccv(r, r_target))
                    assert isinstance(r0, CArrow)
                    p_i = next(p for p in base.premises
                               if env_get(p.judgment.gamma, x) == r0.dom
                               and p.judgment.type_ == r0.cod)
                    self.extend_env(x, tr_inter(r0.dom).parts)
                    kp_in = _var_kp(k2, kt2, r0.cod)
                    lam_inner = _node(
                        "lam", TLam(x, dot(TVar(kt2), qb)), _neg(r0.dom),
                        (_node("dot", dot(TVar(kt2), qb), BOT,
                               [_node("var", TVar(kt2), BOT),
                                db(p_i, kp_in, denv)]),))
                    app_d = _node("app", inner_app, BOT,
                                  [lam_inner] + [_node("var", TVar(x2), tr_raw(r))
                                                 for r in r0.dom.parts])
                    body_d = _node("dot", body, BOT,
                                   [db(p_i, kp_in, denv), app_d])
                    n_x = _node("lam", TLam(x2, body), _neg(r0.dom), (body_d,))
                    n_kt = _node("lam", TLam(kt2, TLam(x2, body)),
                                 SArrow(sinter(BOT), n_x.judgment.type_), (n_x,))
                    n_k = _node("lam", wterm,
                                SArrow(tr_plus(r0.cod), n_kt.judgment.type_), (n_kt,))
                    if r0 != r_target:
                        n_k = _node("sub", wterm, tr_raw(r_target), (n_k,))
                    return n_k

                return wterm, derive
        raise TypeError(v)


def transport_aei16(d: CcvDerivation) -> TransportResult:
    """Lift a source typing derivation along the dot-extended translation."""
    r = check_ccv(d)
    if not r:
        raise ValueError(f"input derivation invalid: {r.reason} at {r.path}")
    j = d.judgment
    if j.type_ == BOT_CCV:
        raise ValueError("transport is defined for term judgments, not jumps")
    fo, fc = all_names(j.subject)
    avoid = set(fo | fc)
    avoid |= {n for n, _ in j.gamma} | {n for n, _ in j.delta}
    tr = _Transport(avoid)
    k = tr.names.fresh("k")
    kt = tr.tilde.partner(k)
    term, derive = tr.build_term(j.subject, TVar(k), TVar(kt), {})
    kp0 = _var_kp(k, kt, j.type_)
    denv0 = {name: _var_kp(name, tr.tilde.partner(name), t) for name, t in j.delta}
    structure = derive(d, kp0, denv0)
    env: dict[str, list] = {}
    for name, s in j.gamma:
        env.setdefault(name, []).extend(tr_inter(s).parts)
    for name, t in j.delta:
        env.setdefault(name, []).extend(tr_plus(t).parts)
        env.setdefault(tr.tilde.partner(name), []).append(BOT)
    env.setdefault(k, []).extend(tr_plus(j.type_).parts)
    env.setdefault(kt, []).append(BOT)
    for name, parts in tr.extras.items():
        env.setdefault(name, []).extend(parts)
    out = with_env(structure, [(n, sinter(*parts)) for n, parts in env.items()])
    chk = check_tgt(out, dot_allowed=True)
    if not chk:
        raise AssertionError(f"transport produced an invalid derivation: "
                             f"{chk.reason} at {chk.path}")
    return TransportResult(out, term, k, kt, tuple(tr.choices))
