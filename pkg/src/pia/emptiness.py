"""Emptiness decision and witness extraction.

The key abstraction is the *arrangement*: the relative left-to-right order
of the currently placed pebbles, forgetting absolute positions.  A transition
sequence is realisable by some computation on some word exactly when it is
consistent at the arrangement level, so reachability over
(state, arrangement) pairs decides emptiness, and a shortest path can be
replayed into a concrete witness word.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import comb, factorial
from typing import Optional, Union

from .core import (
    LEFT_END,
    RIGHT_END,
    Move,
    MoveSpec,
    Pia,
    PiaError,
    Silent,
    Word,
)


class UnplacedBoundary(PiaError):
    """An interval endpoint names a pebble that is not currently placed."""


@dataclass(frozen=True)
class Arrangement:
    """Strict linear order on the placed pebbles, leftmost first."""

    order: tuple[int, ...]

    @property
    def placed(self) -> frozenset[int]:
        return frozenset(self.order)

    @classmethod
    def empty(cls) -> "Arrangement":
        return cls(())


def _insertion_gaps(order: tuple[int, ...], spec: MoveSpec) -> list[int]:
    """Gap indices of ``order`` (0..len) lying strictly between ``i`` and ``j``.

    Gap ``g`` means "immediately before order[g]"; endpoints are taken at the
    pebbles' current positions, so the moved pebble itself may serve as a
    bound.  Raises UnplacedBoundary for a pebble bound that is not placed.
    """
    k, i, j = spec
    if i == j:
        return []
    if i == LEFT_END:
        lo = -1
    else:
        if i not in order:
            raise UnplacedBoundary(f"left bound pebble {i} is unplaced")
        lo = order.index(i)
    if j == RIGHT_END:
        hi = len(order)
    else:
        if j not in order:
            raise UnplacedBoundary(f"right bound pebble {j} is unplaced")
        hi = order.index(j)
    return [g for g in range(lo + 1, hi + 1)]


def _apply_gap(order: tuple[int, ...], k: int, gap: int) -> tuple[int, ...]:
    seq = list(order)
    seq.insert(gap, -1)  # placeholder for the new slot of k
    if k in order:
        seq.remove(k)
    return tuple(k if p == -1 else p for p in seq)


def arrangement_update(a: Arrangement, move: MoveSpec) -> set[Arrangement]:
    """All arrangements reachable by performing ``move`` on ``a``.

    Empty when the open interval is empty (``i`` at or right of ``j``).
    """
    return {
        Arrangement(_apply_gap(a.order, move.k, g))
        for g in _insertion_gaps(a.order, move)
    }


def _node_bound(pia: Pia) -> int:
    m = pia.pebbles
    arrangements = sum(comb(m, k) * factorial(k) for k in range(m + 1))
    return len(pia.states) * arrangements


def _search(pia: Pia):
    """BFS over (state, arrangement); returns (goal node or None, parents)."""
    start = (pia.initial, Arrangement.empty())
    parents: dict = {start: None}
    if pia.initial in pia.accepting:
        return start, parents
    by_src: dict = {}
    for t in sorted(pia.transitions, key=repr):
        by_src.setdefault(t.src, []).append(t)
    bound = _node_bound(pia)
    queue = deque([start])
    while queue:
        state, arr = queue.popleft()
        for t in by_src.get(state, ()):
            if isinstance(t, Silent):
                targets = [(t.dst, arr, None)]
            else:
                try:
                    gaps = _insertion_gaps(arr.order, t.spec)
                except UnplacedBoundary:
                    continue
                targets = [
                    (t.dst, Arrangement(_apply_gap(arr.order, t.pebble, g)), g)
                    for g in gaps
                ]
            for dst, narr, gap in targets:
                node = (dst, narr)
                if node in parents:
                    continue
                parents[node] = ((state, arr), t, gap)
                assert len(parents) <= bound, "reachability exceeded node bound"
                if dst in pia.accepting:
                    return node, parents
                queue.append(node)
    return None, parents


def is_empty(pia: Pia) -> bool:
    """True iff the automaton accepts no word at all."""
    goal, _ = _search(pia)
    return goal is None


def witness(pia: Pia) -> Optional[Word]:
    """A shortest accepted word, or None when the language is empty.

    The shortest feasible transition sequence is replayed: each move inserts
    a fresh position into the leftmost concrete gap compatible with both the
    interval bounds and the arrangement slot chosen during the search.
    """
    goal, parents = _search(pia)
    if goal is None:
        return None
    path = []
    node = goal
    while parents[node] is not None:
        prev, t, gap = parents[node]
        path.append((t, gap))
        node = prev
    path.reverse()

    letters: list[str] = []          # the word under construction
    where: dict[int, int] = {}       # pebble -> index into letters
    order: tuple[int, ...] = ()      # current arrangement replayed alongside
    for t, gap in path:
        if isinstance(t, Silent):
            continue
        # Concrete bounds: the tighter of the interval endpoints and the
        # neighbours of the arrangement gap picked by the search.
        lo = -1
        if t.left != LEFT_END:
            lo = where[t.left]
        if gap > 0:
            lo = max(lo, where[order[gap - 1]])
        hi = len(letters)
        if t.right != RIGHT_END:
            hi = min(hi, where[t.right])
        if gap < len(order):
            hi = min(hi, where[order[gap]])
        pos = lo + 1
        assert pos <= hi, "replay broke the interval discipline"
        letters.insert(pos, t.letter)
        where = {k: (p + 1 if p >= pos else p) for k, p in where.items()}
        where[t.pebble] = pos
        order = _apply_gap(order, t.pebble, gap)
    return tuple(letters)
