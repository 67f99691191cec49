"""Effective closure constructions: union, concatenation, Kleene star,
shuffle, iterated shuffle, and letter-to-letter substitution.

Each construction builds a new automaton with fresh, deterministically
prefixed state names ("L." / "R.") and, where operands are combined,
disjoint pebble ranges (the right operand's pebbles are shifted).

The block-discipline constructions (concat, star) rest on two ideas:

* A *fence* pebble marks the first position of a block.  The block's
  interval references to the left input end are re-anchored to the fence,
  so its reads cannot stray left of its own start; references to the right
  input end are re-anchored to the previous block's fence, so they cannot
  stray right into it.  Together with the all-positions-read acceptance
  requirement this forces blocks to tile the word contiguously.

* The fence reads the block's leftmost position with a guessed letter
  before the block's own run begins, so the simulated run must account for
  that read itself.  Whenever the simulated automaton fires a move that
  could have read its leftmost position (the left bound is necessarily the
  input start), the construction may instead take a silent transition that
  marks the moved pebble as *virtually* sitting on the fence position;
  interval references to that pebble are redirected to the fence pebble
  until the simulated automaton moves it again.  This is sound because all
  other pebbles of the block sit strictly right of the fence.

Blocks gate interval bounds to pebbles placed within the current block:
when pebbles are reused across rounds (star, iterated shuffle) a stale
pebble left over from an earlier round must not serve as a bound, since a
fresh run of the operand could never have placed it.
"""

from __future__ import annotations

from itertools import chain
from typing import Iterable, Mapping, Union

from .core import (
    LEFT_END,
    RIGHT_END,
    Letter,
    Move,
    Pia,
    PiaError,
    Silent,
    State,
    Transition,
    make_pia,
)


class PartialMap(PiaError):
    """A letter substitution does not cover the whole alphabet."""


def _shift_ref(ref: Union[int, str], offset: int) -> Union[int, str]:
    return ref if isinstance(ref, str) else ref + offset


def _relabel(
    pia: Pia, prefix: str, pebble_offset: int
) -> tuple[dict[State, State], list[Transition]]:
    names = {q: f"{prefix}{q}" for q in pia.states}
    transitions: list[Transition] = []
    for t in sorted(pia.transitions, key=repr):
        if isinstance(t, Silent):
            transitions.append(Silent(names[t.src], names[t.dst]))
        else:
            transitions.append(
                Move(
                    names[t.src],
                    t.pebble + pebble_offset,
                    _shift_ref(t.left, pebble_offset),
                    _shift_ref(t.right, pebble_offset),
                    t.letter,
                    names[t.dst],
                )
            )
    return names, transitions


def _accepts_epsilon(pia: Pia) -> bool:
    """True iff the initial state reaches an accepting state via silents only."""
    seen = {pia.initial}
    stack = [pia.initial]
    while stack:
        q = stack.pop()
        if q in pia.accepting:
            return True
        for t in pia.transitions:
            if isinstance(t, Silent) and t.src == q and t.dst not in seen:
                seen.add(t.dst)
                stack.append(t.dst)
    return False


def _subsets(items) -> list[frozenset]:
    out = [frozenset()]
    for x in items:
        out += [s | {x} for s in out]
    return out


def union(a: Pia, b: Pia) -> Pia:
    """L(a) ∪ L(b): disjoint copies behind a fresh initial state."""
    la, ta = _relabel(a, "L.", 0)
    lb, tb = _relabel(b, "R.", a.pebbles)
    init = "u0"
    transitions = ta + tb + [Silent(init, la[a.initial]), Silent(init, lb[b.initial])]
    return make_pia(
        a.alphabet | b.alphabet,
        a.pebbles + b.pebbles,
        chain([init], la.values(), lb.values()),
        init,
        chain((la[q] for q in a.accepting), (lb[q] for q in b.accepting)),
        transitions,
    )


class _Block:
    """Fenced simulation of one operand block (see module docstring).

    States are (operand state, phase, placed) where phase is
    ``("pend", letter)`` right after the fence read, ``("via", k)`` while
    pebble ``k`` virtually sits on the fence, or ``"done"`` afterwards;
    ``placed`` is the set of operand pebbles placed within this block.
    """

    def __init__(
        self,
        pia: Pia,
        prefix: str,
        pebble_offset: int,
        fence: int,
        right_anchor: Union[int, str],
    ):
        self.pia = pia
        self.prefix = prefix
        self.offset = pebble_offset
        self.fence = fence
        self.anchor = right_anchor

    def name(self, q: State, phase, placed: frozenset) -> State:
        if isinstance(phase, tuple) and phase[0] == "pend":
            tag = f"pend[{phase[1]}]"
        elif isinstance(phase, tuple):
            tag = f"via{phase[1]}"
        else:
            tag = phase
        slots = "".join(map(str, sorted(placed)))
        return f"{self.prefix}{tag}.{slots}.{q}"

    def entry_moves(self, src: State) -> list[Move]:
        """Start the block: the fence reads its leftmost position."""
        return [
            Move(
                src,
                self.fence,
                LEFT_END,
                self.anchor,
                letter,
                self.name(self.pia.initial, ("pend", letter), frozenset()),
            )
            for letter in sorted(self.pia.alphabet)
        ]

    def _bound(self, ref, via, placed):
        """Translate an interval bound; None when gated out."""
        if ref == LEFT_END:
            return self.fence
        if ref == RIGHT_END:
            return self.anchor
        if ref == via:
            return self.fence
        if ref not in placed:
            return None
        return ref + self.offset

    def transitions(self) -> list[Transition]:
        phases = [("pend", x) for x in sorted(self.pia.alphabet)]
        phases += [("via", k) for k in range(1, self.pia.pebbles + 1)]
        phases.append("done")
        out: list[Transition] = []
        for t in sorted(self.pia.transitions, key=repr):
            for placed in _subsets(range(1, self.pia.pebbles + 1)):
                for phase in phases:
                    src = self.name(t.src, phase, placed)
                    if isinstance(t, Silent):
                        out.append(Silent(src, self.name(t.dst, phase, placed)))
                        continue
                    k, i, j = t.spec
                    via = phase[1] if phase != "done" and phase[0] == "via" else None
                    left = self._bound(i, via, placed)
                    right = self._bound(j, via, placed)
                    # Both bounds on the fence leaves an empty interval: the
                    # simulated move would read left of the block's leftmost
                    # position, which does not exist.
                    if left is not None and right is not None and left != right:
                        nphase = "done" if via == k else phase
                        dst = self.name(t.dst, nphase, placed | {k})
                        out.append(
                            Move(src, k + self.offset, left, right, t.letter, dst)
                        )
                    # Absorb the fence letter: only a move anchored at the
                    # input start can read the block's leftmost position, and
                    # its right bound must already be placed (hence strictly
                    # right of the fence).
                    if (
                        phase[0] == "pend"
                        and i == LEFT_END
                        and t.letter == phase[1]
                        and (not isinstance(j, int) or j in placed)
                    ):
                        out.append(
                            Silent(src, self.name(t.dst, ("via", k), placed))
                        )
        return out

    def done_states(self) -> set[State]:
        """Block finished: operand accepts and the fence letter is accounted for."""
        phases = [("via", k) for k in range(1, self.pia.pebbles + 1)] + ["done"]
        return {
            self.name(q, phase, placed)
            for q in sorted(self.pia.accepting)
            for phase in phases
            for placed in _subsets(range(1, self.pia.pebbles + 1))
        }

    def all_states(self) -> set[State]:
        phases = [("pend", x) for x in sorted(self.pia.alphabet)]
        phases += [("via", k) for k in range(1, self.pia.pebbles + 1)]
        phases.append("done")
        return {
            self.name(q, phase, placed)
            for q in sorted(self.pia.states)
            for phase in phases
            for placed in _subsets(range(1, self.pia.pebbles + 1))
        }


def concat(a: Pia, b: Pia) -> Pia:
    """L(a)·L(b).

    The right part runs first as a fenced block claiming a suffix of the
    word; the left part then runs with its right input end re-anchored to
    the fence, claiming the prefix.  When b accepts the empty word an
    unfenced copy of ``a`` covers the empty-suffix split.
    """
    fence = a.pebbles + b.pebbles + 1
    init = "c0"
    block = _Block(b, "R.", a.pebbles, fence, RIGHT_END)

    states: set[State] = {init} | block.all_states()
    transitions: list[Transition] = list(block.transitions())
    for t in block.entry_moves(init):
        transitions.append(t)

    aname = {q: f"L.{q}" for q in sorted(a.states)}
    states.update(aname.values())
    for t in sorted(a.transitions, key=repr):
        if isinstance(t, Silent):
            transitions.append(Silent(aname[t.src], aname[t.dst]))
        else:
            right = fence if t.right == RIGHT_END else t.right
            transitions.append(
                Move(aname[t.src], t.pebble, t.left, right, t.letter, aname[t.dst])
            )
    for q in sorted(block.done_states()):
        transitions.append(Silent(q, aname[a.initial]))
    accepting = {aname[q] for q in a.accepting}

    if _accepts_epsilon(b):
        ename, etrans = _relabel(a, "E.", 0)
        states.update(ename.values())
        transitions.extend(etrans)
        transitions.append(Silent(init, ename[a.initial]))
        accepting |= {ename[q] for q in a.accepting}

    return make_pia(
        a.alphabet | b.alphabet,
        a.pebbles + b.pebbles + 1,
        states,
        init,
        accepting,
        transitions,
    )


def star(a: Pia) -> Pia:
    """L(a)* via fenced blocks processed right to left.

    Two fence pebbles alternate: a block's right side is anchored to the
    previous (right-neighbour) block's fence, whose pebble is freed once
    that block's own left neighbour finishes.  Empty repetitions are
    redundant, so blocks are nonempty; the fresh initial state accepts ε.
    """
    f1, f2 = a.pebbles + 1, a.pebbles + 2
    init = "s0"
    variants = {
        (0, True): _Block(a, "B0f.", 0, f1, RIGHT_END),
        (0, False): _Block(a, "B0m.", 0, f1, f2),
        (1, False): _Block(a, "B1m.", 0, f2, f1),
    }
    states: set[State] = {init}
    transitions: list[Transition] = []
    accepting: set[State] = {init}

    for block in variants.values():
        states |= block.all_states()
        transitions += block.transitions()
        accepting |= block.done_states()

    transitions += variants[(0, True)].entry_moves(init)
    # A finished block chains into the next block to its left, on the other
    # fence pebble.
    for (parity, _), block in list(variants.items()):
        nxt = variants[(1 - parity, False)]
        for q in sorted(block.done_states()):
            transitions += nxt.entry_moves(q)

    return make_pia(a.alphabet, a.pebbles + 2, states, init, accepting, transitions)


def shuffle(a: Pia, b: Pia) -> Pia:
    """L(a) ⧢ L(b): run a to acceptance, then b, on disjoint pebbles.

    No fences are needed: interval constraints only relate pebbles of the
    same operand, so the two read sets may interleave arbitrarily, which is
    exactly the shuffle.
    """
    la, ta = _relabel(a, "L.", 0)
    lb, tb = _relabel(b, "R.", a.pebbles)
    transitions = ta + tb
    for q in sorted(a.accepting):
        transitions.append(Silent(la[q], lb[b.initial]))
    return make_pia(
        a.alphabet | b.alphabet,
        a.pebbles + b.pebbles,
        chain(la.values(), lb.values()),
        la[a.initial],
        (lb[q] for q in b.accepting),
        transitions,
    )


def shuffle_star(a: Pia) -> Pia:
    """Iterated shuffle of L(a), including the empty word.

    Rounds of ``a`` run sequentially on the same pebbles; interval bounds
    are gated to pebbles placed in the current round, so each round is a
    faithful fresh run of ``a`` on the positions it reads.
    """
    init = "i0"
    states: set[State] = {init}
    transitions: list[Transition] = []

    def name(q: State, placed: frozenset) -> State:
        return f"L.{''.join(map(str, sorted(placed)))}.{q}"

    all_placed = _subsets(range(1, a.pebbles + 1))
    for q in sorted(a.states):
        states.update(name(q, placed) for placed in all_placed)
    for t in sorted(a.transitions, key=repr):
        for placed in all_placed:
            if isinstance(t, Silent):
                transitions.append(Silent(name(t.src, placed), name(t.dst, placed)))
                continue
            k, i, j = t.spec
            if isinstance(i, int) and i not in placed:
                continue
            if isinstance(j, int) and j not in placed:
                continue
            transitions.append(
                Move(name(t.src, placed), k, i, j, t.letter, name(t.dst, placed | {k}))
            )

    start = name(a.initial, frozenset())
    transitions.append(Silent(init, start))
    accepting = {init}
    for q in sorted(a.accepting):
        for placed in all_placed:
            accepting.add(name(q, placed))
            transitions.append(Silent(name(q, placed), start))  # next round
    return make_pia(a.alphabet, a.pebbles, states, init, accepting, transitions)


def substitute(a: Pia, h: Mapping[Letter, Letter]) -> Pia:
    """Image of L(a) under a letter-to-letter substitution."""
    missing = sorted(a.alphabet - set(h))
    if missing:
        raise PartialMap(f"substitution misses letters {missing}")
    transitions: list[Transition] = []
    for t in sorted(a.transitions, key=repr):
        if isinstance(t, Silent):
            transitions.append(t)
        else:
            transitions.append(
                Move(t.src, t.pebble, t.left, t.right, h[t.letter], t.dst)
            )
    return make_pia(
        {h[x] for x in a.alphabet},
        a.pebbles,
        a.states,
        a.initial,
        a.accepting,
        transitions,
    )
