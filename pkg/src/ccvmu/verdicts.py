"""Fuel-bounded strong-normalization verdicts over reduction graphs.

A verdict is only ever SN when the whole reduction graph from the start
node was expanded and found acyclic (max_len is the longest path), and only
ever NotSN with a concrete cycle in hand. Running out of fuel yields
Unknown; divergence by unbounded growth therefore shows up as Unknown,
never NotSN.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

__all__ = ["SN", "NotSN", "Unknown", "SnVerdict", "search_reduction_graph"]


@dataclass(frozen=True)
class SN:
    max_len: int


@dataclass(frozen=True)
class NotSN:
    cycle: tuple  # ((label, node), ...) edges along the cycle, closing on its first node


@dataclass(frozen=True)
class Unknown:
    fuel_spent: int


SnVerdict = Union[SN, NotSN, Unknown]


def search_reduction_graph(start, succs: Callable, fuel: int) -> SnVerdict:
    """Exhaustive DFS over the graph generated by `succs`.

    `succs(node)` returns a list of (label, node) edges; `fuel` caps the
    number of distinct nodes expanded. Cycle detection happens during the
    DFS; on acyclic exhaustion the longest path from `start` is computed.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    expanded: dict = {}

    def expand(u):
        if u not in expanded:
            if len(expanded) >= fuel:
                return None
            expanded[u] = succs(u)
        return expanded[u]

    GRAY, BLACK = 1, 2
    color: dict = {}
    # frame: [node, edges, next_edge_index, incoming_label]
    stack: list[list] = [[start, None, 0, None]]
    pos: dict = {start: 0}
    while stack:
        frame = stack[-1]
        u = frame[0]
        if frame[1] is None:
            edges = expand(u)
            if edges is None:
                return Unknown(len(expanded))
            frame[1] = edges
            color[u] = GRAY
        if frame[2] < len(frame[1]):
            label, v = frame[1][frame[2]]
            frame[2] += 1
            c = color.get(v)
            if c == GRAY:
                i = pos[v]
                cyc = [(f[3], f[0]) for f in stack[i + 1:]]
                cyc.append((label, v))
                return NotSN(tuple(cyc))
            if c == BLACK:
                continue
            stack.append([v, None, 0, label])
            pos[v] = len(stack) - 1
        else:
            color[u] = BLACK
            pos.pop(u, None)
            stack.pop()

    longest: dict = {}
    work = [start]
    while work:
        u = work[-1]
        if u in longest:
            work.pop()
            continue
        pending = [v for _, v in expanded[u] if v not in longest]
        if pending:
            work.extend(pending)
        else:
            longest[u] = max((1 + longest[v] for _, v in expanded[u]), default=0)
            work.pop()
    return SN(longest[start])
