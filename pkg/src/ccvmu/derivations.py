"""Hand-built source typing derivations used by the typed-implies-SN suite."""

from __future__ import annotations

from .types_ccv import (CAtom, CArrow, CcvDerivation, d_app, d_jmp, d_lam,
                        d_let, d_mu, d_sub, d_var, inter, mk_env, union)

_A = CAtom("a")
_B = CAtom("b")


def sample_derivations() -> list[tuple[str, CcvDerivation]]:
    a, b = _A, _B
    ia, ib = inter(a), inter(b)
    ua, ub = union(ia), union(ib)
    out: list[tuple[str, CcvDerivation]] = []

    g_x = mk_env({"x": ia}.items())
    out.append(("axiom", d_var(g_x, (), "x")))

    out.append(("identity", d_lam("x", [d_var(g_x, (), "x")])))

    out.append(("identity-intersection", d_lam("x", [
        d_var(mk_env({"x": ia}.items()), (), "x"),
        d_var(mk_env({"x": ib}.items()), (), "x"),
    ])))

    g_y = mk_env({"y": ia}.items())
    g_xy = mk_env({"x": ia, "y": ia}.items())
    out.append(("apply-identity", d_app(
        d_lam("x", [d_var(g_xy, (), "x")]),
        [d_var(g_y, (), "y")])))

    out.append(("let-binding", d_let("x", [d_var(g_xy, (), "x")],
                                     d_var(g_y, (), "y"))))

    dk = mk_env({"k": ua}.items())
    out.append(("mu-jump", d_mu("k", d_jmp("k", d_var(g_x, dk, "x")))))

    g_xy2 = mk_env({"x": ia, "y": ia}.items())
    out.append(("jump-let", d_mu("k", d_let(
        "y",
        [d_jmp("k", d_var(g_xy2, dk, "y"))],
        d_var(g_x, dk, "x")))))

    g_ab = mk_env({"x": inter(a, b)}.items())
    out.append(("subtype-projection", d_sub(d_var(g_ab, (), "x"), union(ia))))

    # function typed at a genuine two-disjunct union, argument premise family of size 2
    g_yz = mk_env({"y": ia, "z": inter(a, b)}.items())
    const = d_lam("x", [
        d_var(mk_env({"x": ia, "y": ia, "z": inter(a, b)}.items()), (), "y"),
        d_var(mk_env({"x": ib, "y": ia, "z": inter(a, b)}.items()), (), "y"),
    ])
    const_union = d_sub(const, union(inter(CArrow(ia, ua)), inter(CArrow(ib, ua))))
    arg_a = d_sub(d_var(g_yz, (), "z"), union(ia))
    arg_b = d_sub(d_var(g_yz, (), "z"), union(ib))
    out.append(("union-application", d_app(const_union, [arg_a, arg_b])))

    arrow_aa = CArrow(ia, ua)
    sigma = inter(arrow_aa)
    arrow_self = CArrow(sigma, union(sigma))
    s1 = inter(arrow_self, arrow_aa)
    g_self = mk_env({"x": s1}.items())
    fun_side = d_sub(d_var(g_self, (), "x"), union(inter(arrow_self)))
    arg_side = d_sub(d_var(g_self, (), "x"), union(sigma))
    selfapp = d_app(fun_side, [arg_side])
    twins = d_lam("y", [
        d_var(mk_env({"y": ia}.items()), (), "y"),
        d_var(mk_env({"y": sigma}.items()), (), "y"),
    ])
    out.append(("self-application-let", d_let("x", [selfapp], twins)))

    g_fx = mk_env({"y": inter(CArrow(ia, ub))}.items())
    g_fx2 = mk_env({"x": ia, "y": inter(CArrow(ia, ub))}.items())
    out.append(("eta-shape", d_lam("x", [d_app(
        d_var(g_fx2, (), "y"), [d_var(g_fx2, (), "x")])])))

    dkl = mk_env({"k": ua, "l": ua}.items())
    out.append(("jump-through", d_mu("k", d_jmp("k", d_mu("l", d_jmp(
        "k", d_var(g_x, dkl, "x")))))))

    return out
