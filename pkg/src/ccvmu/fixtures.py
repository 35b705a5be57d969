"""Curated reduction fixtures, versioned.

The SN list exercises every one of the ten rules somewhere along its
reduction graphs. All divergent fixtures loop through a cycle (a strongly
connected reduction graph), because unbounded-growth divergence is,
deliberately, only ever reported Unknown by the checkers. Enumeration at
small sizes misses most of the instructive divergent shapes, hence the
explicit list.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import parse_term

FIXTURES_VERSION = 1

_DELTA = "(\\x. x x) (\\x. x x)"
_MU_W = "\\x. mu k. [k] (x x)"  # applying this to itself loops through mu


@dataclass(frozen=True)
class Fixture:
    name: str
    text: str
    sn: bool

    @property
    def term(self):
        return parse_term(self.text)


SN_FIXTURES = tuple(Fixture(n, t, True) for n, t in [
    ("beta-lambda", "(\\x. x) y"),
    ("beta-let", "let x = y in x"),
    ("ad1", "(x y) z"),
    ("ad2", "x (y z)"),
    ("beta-mu", "let x = mu k. [k] z in y"),
    ("beta-jmp", "mu l. [l] (mu k. [k] x)"),
    ("eta-lambda", "\\x. y x"),
    ("eta-let", "let x = y z in x"),
    ("eta-mu", "mu k. [k] x"),
    ("exch", "let x = y z in mu k. [k] x"),
    ("double-id", "(\\x. x x) (\\y. y)"),
    ("two-args", "(\\x. \\y. x) z w"),
    ("id-under-mu", "mu k. [k] ((\\x. x) y)"),
    ("nested-let", "let x = (let y = z in y) in x"),
    ("mu-under-lambda", "(\\x. mu k. [k] x) y"),
    ("jump-let", "mu k. let x = y in [k] x"),
    ("capture-shape", "(\\x. \\y. x y) (\\z. z) w"),
    ("mu-arg-chain", "let x = mu k. [l] (y y) in x z"),
])

NON_SN_FIXTURES = tuple(Fixture(n, t, False) for n, t in [
    ("omega", _DELTA),
    ("omega-app-left", f"({_DELTA}) y"),
    ("omega-app-right", f"y ({_DELTA})"),
    ("omega-under-lambda", f"\\y. {_DELTA}"),
    ("omega-let-arg", f"let y = {_DELTA} in z"),
    ("omega-let-body", f"let y = z in {_DELTA}"),
    ("omega-under-mu", f"mu k. [k] ({_DELTA})"),
    ("omega-mu-let", f"let y = mu k. [k] ({_DELTA}) in z"),
    ("omega-deep", f"mu k. [k] (let y = {_DELTA} in z)"),
    ("omega-arg-of-lambda", f"(\\y. z) ({_DELTA})"),
    ("omega-by-let", "let x = \\x. x x in x x"),
    ("mu-loop", f"({_MU_W}) ({_MU_W})"),
    ("mu-loop-under-mu", f"mu m. [m] (({_MU_W}) ({_MU_W}))"),
    ("mu-loop-let", f"let y = ({_MU_W}) ({_MU_W}) in z"),
    ("mu-loop-applied", f"y (({_MU_W}) ({_MU_W}))"),
    ("omega-two-jumps", f"mu k. [k] (mu l. [l] ({_DELTA}))"),
])

ALL_FIXTURES = SN_FIXTURES + NON_SN_FIXTURES
