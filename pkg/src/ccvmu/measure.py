"""Places, visions, breadth, and the sight ordinal below omega^omega.

Because terms are identified up to let/jump associativity, "subterm" is not
a stable notion; places are the replacement. A place marks the location a
term starts from, so one place can mark several nested terms (the whole
term and the head of its spine, say). Visions say which places a place can
"see" to its left: a let argument sees the places of its let body, and a
place behind a jumper inherits the vision of the mu that binds the jumper.
Breadth is the height of the immediate-visibility tree; the sight of a term
is the natural sum of omega^breadth over its mu places. Sight strictly
decreases under beta_mu, beta_jmp and eta_mu, which is what makes the
mu fragment terminate.

All functions here take the canonical form (jumps written [k]M with lets
absorbed into the jump body, which is exactly the reading the place
generation wants); non-canonical input is canonicalized first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

from .reduce import MU_FRAGMENT, ReductionStep
from .terms import App, Jmp, Lam, Let, Mu, Node, Term, Var, canonicalize, is_canonical

__all__ = [
    "Place", "PlaceAnalysis", "analyze", "places", "vision", "breadth", "sight",
    "Sight", "ordinal_lt", "natural_sum", "verify_sight_decrease",
]

Path = tuple[str, ...]


@dataclass(frozen=True)
class Place:
    index: int
    marked: tuple[Path, ...]  # paths of the terms this place marks, outermost first
    is_mu: bool


@dataclass(frozen=True)
class PlaceAnalysis:
    term: Node
    places: tuple[Place, ...]
    vision: dict  # index -> frozenset of indices
    breadth: dict  # index -> int
    immediate: dict  # index -> frozenset of indices (the relation q -< p)

    @property
    def mu_places(self) -> frozenset[int]:
        return frozenset(p.index for p in self.places if p.is_mu)

    def sight(self) -> "Sight":
        return Sight.of(*(self.breadth[i] for i in sorted(self.mu_places)))


def analyze(t: Node) -> PlaceAnalysis:
    """Generate places left to right and compute visions and breadths."""
    if not is_canonical(t):
        t = canonicalize(t)
    marked: list[list[Path]] = []
    is_mu: list[bool] = []
    # provenance per place: ("letarg", places-of-the-let-body) |
    # ("jumpbody", binding-mu-place or None) | ("plain",)
    prov: list[tuple] = []

    def new_place(origin: tuple) -> int:
        marked.append([])
        is_mu.append(False)
        prov.append(origin)
        return len(marked) - 1

    def walk(p: int, t: Node, path: Path, env: dict[str, int]) -> frozenset[int]:
        marked[p].append(path)
        here = {p}
        match t:
            case Var(_):
                pass
            case App(f, a):
                here |= walk(p, f, path + ("fun",), env)
                q = new_place(("plain",))
                here |= walk(q, a, path + ("arg",), env)
            case Let(body, _, arg):
                body_places = walk(p, body, path + ("body",), env)
                here |= body_places
                q = new_place(("letarg", body_places))
                here |= walk(q, arg, path + ("arg",), env)
            case Lam(_, body):
                q = new_place(("plain",))
                here |= walk(q, body, path + ("body",), env)
            case Mu(k, Jmp(l, body)):
                is_mu[p] = True
                env2 = {**env, k: p}
                q = new_place(("jumpbody", env2.get(l)))
                here |= walk(q, body, path + ("jump", "body"), env2)
            case _:
                raise ValueError("place analysis requires a canonical term")
        return frozenset(here)

    root = new_place(("plain",))
    walk(root, t, (), {})

    n = len(marked)
    vision: dict[int, frozenset[int]] = {}
    for q in range(n):
        match prov[q]:
            case ("letarg", body_places):
                seen: set[int] = set()
                for r in body_places:
                    seen.add(r)
                    seen |= vision[r]
                vision[q] = frozenset(seen)
            case ("jumpbody", binder_place):
                vision[q] = vision[binder_place] if binder_place is not None else frozenset()
            case _:
                vision[q] = frozenset()

    breadth: dict[int, int] = {}
    for q in range(n):
        breadth[q] = max((breadth[r] for r in vision[q]), default=-1) + 1

    immediate: dict[int, frozenset[int]] = {}
    for p in range(n):
        vs = vision[p]
        immediate[p] = frozenset(
            q for q in vs if not any(q in vision[r] for r in vs))

    ps = tuple(Place(i, tuple(marked[i]), is_mu[i]) for i in range(n))
    return PlaceAnalysis(t, ps, vision, breadth, immediate)


def places(t: Node) -> tuple[Place, ...]:
    return analyze(t).places


def vision(t: Node) -> dict:
    return analyze(t).vision


def breadth(t: Node) -> dict:
    return analyze(t).breadth


def sight(t: Node) -> "Sight":
    return analyze(t).sight()


# --- ordinals below omega^omega ---------------------------------------------


@total_ordering
@dataclass(frozen=True)
class Sight:
    """An ordinal below omega^omega as a multiset of exponents.

    Stored as the exponents sorted descending; comparing the sorted tuples
    lexicographically (shorter prefix first) is exactly the ordinal order on
    Cantor normal forms, and the natural (Hessenberg) sum is multiset union.
    """

    exps: tuple[int, ...]

    @staticmethod
    def of(*exps: int) -> "Sight":
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be naturals")
        return Sight(tuple(sorted(exps, reverse=True)))

    @staticmethod
    def from_natural(n: int) -> "Sight":
        return Sight.of(*([0] * n))

    def __lt__(self, other: "Sight") -> bool:
        return self.exps < other.exps

    @property
    def is_zero(self) -> bool:
        return not self.exps

    def natural_sum(self, other: "Sight") -> "Sight":
        return Sight.of(*(self.exps + other.exps))

    def cnf(self) -> str:
        """Cantor normal form rendering, e.g. 'w^1*1 + w^0*2'."""
        if not self.exps:
            return "0"
        terms = []
        i = 0
        while i < len(self.exps):
            e = self.exps[i]
            j = i
            while j < len(self.exps) and self.exps[j] == e:
                j += 1
            terms.append(f"w^{e}*{j - i}")
            i = j
        return " + ".join(terms)

    def __str__(self) -> str:
        return self.cnf()


def ordinal_lt(a: Sight, b: Sight) -> bool:
    return a < b


def natural_sum(a: Sight, b: Sight) -> Sight:
    return a.natural_sum(b)


def verify_sight_decrease(step: ReductionStep) -> bool:
    """True iff sight(target) < sight(source); only for the mu-fragment rules."""
    if step.rule not in MU_FRAGMENT:
        raise ValueError(f"sight decrease is only guaranteed for "
                         f"{sorted(r.value for r in MU_FRAGMENT)}, got {step.rule.value}")
    return sight(step.target) < sight(step.source)
