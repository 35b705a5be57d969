"""Exhaustive and random term corpora for the property suites.

Enumeration produces every well-scoped canonical term up to an AST-size
bound over fixed, small variable pools (free variables come from the pools;
binders may reuse pool names, so shadowing classes appear). Terms are
deduplicated up to class equality and the ordering is reproducible.
"""

from __future__ import annotations

import random

from .target import TApp, TLam, TTerm, TVar, tgt_alpha
from .terms import (App, JLet, Jmp, Jump, Lam, Let, Mu, Node, Term, Var,
                    canonicalize, term_size)

__all__ = ["enumerate_terms", "enumerate_target", "random_term", "random_terms"]


def enumerate_terms(max_size: int,
                    ord_pool: tuple[str, ...] = ("x", "y"),
                    cont_pool: tuple[str, ...] = ("k", "l"),
                    size_cap: int = 12) -> list[Term]:
    """All canonical terms of size <= max_size, deduplicated by class equality."""
    if max_size > size_cap:
        raise ValueError(f"size {max_size} exceeds the configured cap {size_cap}")

    terms: dict[int, list[Term]] = {}
    jumps: dict[int, list[Jump]] = {}

    def dedup(seq):
        seen = set()
        out = []
        for t in seq:
            c = canonicalize(t)
            if c not in seen:
                seen.add(c)
                out.append(c)
        return out

    for n in range(1, max_size + 1):
        ts: list[Term] = []
        if n == 1:
            ts += [Var(x) for x in ord_pool]
        if n >= 2:
            ts += [Lam(x, b) for x in ord_pool for b in terms[n - 1]]
            ts += [Mu(k, j) for k in cont_pool for j in jumps[n - 1]]
        if n >= 3:
            for i in range(1, n - 1):
                ts += [App(f, a) for f in terms[i] for a in terms[n - 1 - i]]
                ts += [Let(b, x, a)
                       for x in ord_pool
                       for b in terms[i]
                       for a in terms[n - 1 - i]
                       if not isinstance(a, Let)]
        terms[n] = dedup(ts)
        js: list[Jump] = []
        if n >= 2:
            js += [Jmp(k, m) for k in cont_pool for m in terms[n - 1]]
        jumps[n] = dedup(js)

    out: list[Term] = []
    for n in range(1, max_size + 1):
        out.extend(terms[n])
    return out


def enumerate_target(max_size: int,
                     ord_pool: tuple[str, ...] = ("x",),
                     cont_pool: tuple[str, ...] = ("k",)) -> list[TTerm]:
    """All sorted, dot-free target terms (any of the four sorts) up to size."""
    w: dict[int, list[TTerm]] = {}
    k_: dict[int, list[TTerm]] = {}
    t_: dict[int, list[TTerm]] = {}
    q_: dict[int, list[TTerm]] = {}

    def dedup(seq):
        seen = set()
        out = []
        for t in seq:
            a = tgt_alpha(t)
            if a not in seen:
                seen.add(a)
                out.append(a)
        return out

    def size(t: TTerm) -> int:
        match t:
            case TVar(_):
                return 1
            case TLam(_, b):
                return 1 + size(b)
            case TApp(f, a):
                return 1 + size(f) + size(a)
        raise TypeError(t)

    for n in range(1, max_size + 1):
        w[n] = dedup(([TVar(x) for x in ord_pool] if n == 1 else []) +
                     [TLam(x, b) for x in ord_pool for b in t_.get(n - 1, [])])
        k_[n] = dedup(([TVar(c) for c in cont_pool] if n == 1 else []) +
                      [TLam(x, b) for x in ord_pool for b in q_.get(n - 1, [])])
        ts: list[TTerm] = []
        if n >= 2:
            ts += [TLam(c, b) for c in cont_pool for b in q_.get(n - 1, [])]
        for i in range(1, n - 1):
            ts += [TApp(f, a) for f in w[i] for a in w[n - 1 - i]]
        t_[n] = dedup(ts)
        qs: list[TTerm] = []
        for i in range(1, n - 1):
            qs += [TApp(f, a) for f in k_[i] for a in w[n - 1 - i]]
            qs += [TApp(f, a) for f in t_[i] for a in k_[n - 1 - i]]
        q_[n] = dedup(qs)

    seen = set()
    out: list[TTerm] = []
    for n in range(1, max_size + 1):
        for group in (t_[n], q_[n], w[n], k_[n]):
            for t in group:
                if t not in seen:
                    seen.add(t)
                    out.append(t)
    return out


def random_term(rng: random.Random, size: int,
                ord_pool: tuple[str, ...] = ("x", "y"),
                cont_pool: tuple[str, ...] = ("k", "l")) -> Term:
    """A random well-scoped raw term of roughly the requested size.

    Raw means jump-lets and lets in argument position do occur, which is
    what the canonicalization and coherence suites want to see.
    """

    def term(n: int, ovars: tuple[str, ...], cvars: tuple[str, ...]) -> Term:
        if n <= 1:
            return Var(rng.choice(ovars))
        options = ["lam", "mu"]
        if n >= 3:
            options += ["app", "let"] * 2
        match rng.choice(options):
            case "lam":
                x = rng.choice(ord_pool)
                return Lam(x, term(n - 1, _add(ovars, x), cvars))
            case "mu":
                k = rng.choice(cont_pool)
                return Mu(k, jump(n - 1, ovars, _add(cvars, k)))
            case "app":
                i = rng.randint(1, n - 2)
                return App(term(i, ovars, cvars), term(n - 1 - i, ovars, cvars))
            case "let":
                i = rng.randint(1, n - 2)
                x = rng.choice(ord_pool)
                return Let(term(i, _add(ovars, x), cvars), x,
                           term(n - 1 - i, ovars, cvars))
        raise AssertionError

    def jump(n: int, ovars: tuple[str, ...], cvars: tuple[str, ...]) -> Jump:
        if n >= 3 and rng.random() < 0.4:
            i = rng.randint(1, n - 2)
            x = rng.choice(ord_pool)
            return JLet(jump(i, _add(ovars, x), cvars), x,
                        term(n - 1 - i, ovars, cvars))
        return Jmp(rng.choice(cvars), term(max(n - 1, 1), ovars, cvars))

    def _add(pool: tuple[str, ...], v: str) -> tuple[str, ...]:
        return pool if v in pool else pool + (v,)

    return term(max(size, 1), ord_pool, cont_pool)


def random_terms(count: int, seed: int, size: int = 9,
                 ord_pool: tuple[str, ...] = ("x", "y"),
                 cont_pool: tuple[str, ...] = ("k", "l")) -> list[Term]:
    rng = random.Random(seed)
    return [random_term(rng, rng.randint(2, size), ord_pool, cont_pool)
            for _ in range(count)]
