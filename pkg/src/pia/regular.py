"""Bridge between classical NFAs and unidirectional one-pebble automata.

A one-pebble automaton is *unidirectional* when its initial state has no
incoming transitions and every move from a non-initial state re-places
pebble 1 strictly to the right of itself (``Move(1, 1, ◁)``).  Such an
automaton reads positions left to right, so it accepts exactly a regular
language, with the same states as the corresponding NFA.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .core import (
    LEFT_END,
    RIGHT_END,
    Letter,
    Move,
    Pia,
    PiaError,
    Silent,
    State,
    Word,
    make_pia,
)


class NotUnidirectional(PiaError):
    """The automaton violates the unidirectional shape; carries the culprit."""


@dataclass(frozen=True)
class NfaTransition:
    src: State
    letter: Optional[Letter]  # None encodes an ε-move
    dst: State


@dataclass(frozen=True)
class Nfa:
    alphabet: frozenset[Letter]
    states: frozenset[State]
    initial: State
    accepting: frozenset[State]
    transitions: frozenset[NfaTransition]

    def accepts(self, word: Word) -> bool:
        """Standard subset simulation with ε-closure."""
        current = self._closure({self.initial})
        for letter in word:
            step = {
                t.dst
                for t in self.transitions
                if t.src in current and t.letter == letter
            }
            current = self._closure(step)
            if not current:
                return False
        return bool(current & self.accepting)

    def _closure(self, states: set[State]) -> set[State]:
        out = set(states)
        stack = list(states)
        while stack:
            q = stack.pop()
            for t in self.transitions:
                if t.src == q and t.letter is None and t.dst not in out:
                    out.add(t.dst)
                    stack.append(t.dst)
        return out


def make_nfa(
    alphabet: Iterable[Letter],
    states: Iterable[State],
    initial: State,
    accepting: Iterable[State],
    transitions: Iterable[NfaTransition],
) -> Nfa:
    return Nfa(
        frozenset(alphabet),
        frozenset(states),
        initial,
        frozenset(accepting),
        frozenset(transitions),
    )


def nfa_to_pia(n: Nfa) -> Pia:
    """Language-equal unidirectional one-pebble automaton.

    The initial state carries a left-end-anchored move for every letter
    transition leaving the ε-closure of the NFA's initial state (the first
    move of a run cannot anchor on the still-unplaced pebble); all other
    letter transitions become ``Move(1, 1, ◁)``, which only a placement on
    the leftmost unread position can ever follow up, so accepted words are
    read strictly left to right.  When the NFA's initial state has incoming
    edges, one fresh initial state is added to keep the initial state free
    of incoming transitions.
    """
    closure = n._closure({n.initial})
    has_incoming = any(t.dst == n.initial for t in n.transitions)
    init = "q0'" if has_incoming else n.initial
    while has_incoming and init in n.states:
        init += "'"
    transitions: list = []
    for t in sorted(n.transitions, key=repr):
        if t.letter is None:
            transitions.append(Silent(t.src, t.dst))
        elif has_incoming or t.src != n.initial:
            transitions.append(Move(t.src, 1, 1, RIGHT_END, t.letter, t.dst))
        if t.letter is not None and t.src in closure:
            transitions.append(Move(init, 1, LEFT_END, RIGHT_END, t.letter, t.dst))
    states = set(n.states) | {init}
    accepting = set(n.accepting)
    if has_incoming and closure & n.accepting:
        accepting.add(init)
    return make_pia(n.alphabet, 1, states, init, accepting, transitions)


def is_unidirectional(p: Pia) -> Optional[str]:
    """None when unidirectional, else a description of the first violation."""
    if p.pebbles != 1:
        return f"{p.pebbles} pebbles (need exactly 1)"
    for t in sorted(p.transitions, key=repr):
        if t.dst == p.initial:
            return f"initial state has incoming transition {t}"
    for t in sorted(p.transitions, key=repr):
        if isinstance(t, Move) and t.src != p.initial:
            if not (t.pebble == 1 and t.left == 1 and t.right == RIGHT_END):
                return f"non-initial move {t} is not Move(1, 1, {RIGHT_END})"
    return None


def pia_to_nfa(p: Pia) -> Nfa:
    """Language-equal NFA with the same states; requires unidirectional input.

    Moves from the initial state whose left bound is pebble 1 can never fire
    (the pebble is unplaced there and the initial state is never revisited),
    so they are dropped rather than translated.
    """
    problem = is_unidirectional(p)
    if problem is not None:
        raise NotUnidirectional(problem)
    transitions: list[NfaTransition] = []
    for t in sorted(p.transitions, key=repr):
        if isinstance(t, Silent):
            transitions.append(NfaTransition(t.src, None, t.dst))
        elif t.src == p.initial and (t.left != LEFT_END or t.right != RIGHT_END):
            continue
        else:
            transitions.append(NfaTransition(t.src, t.letter, t.dst))
    return make_nfa(p.alphabet, p.states, p.initial, p.accepting, transitions)


# --- JSON interchange (PIA format without pebbles) ---------------------------


def nfa_to_json_dict(n: Nfa) -> dict:
    transitions = []
    for t in sorted(n.transitions, key=repr):
        if t.letter is None:
            transitions.append({"kind": "silent", "from": t.src, "to": t.dst})
        else:
            transitions.append(
                {"kind": "letter", "from": t.src, "letter": t.letter, "to": t.dst}
            )
    return {
        "alphabet": sorted(n.alphabet),
        "states": sorted(n.states),
        "initial": n.initial,
        "accepting": sorted(n.accepting),
        "transitions": transitions,
    }


def nfa_from_json_dict(data: dict) -> Nfa:
    transitions = []
    for t in data["transitions"]:
        if t["kind"] == "silent":
            transitions.append(NfaTransition(t["from"], None, t["to"]))
        elif t["kind"] == "letter":
            transitions.append(NfaTransition(t["from"], t["letter"], t["to"]))
        else:
            raise ValueError(f"unknown transition kind {t['kind']!r}")
    return make_nfa(
        data["alphabet"],
        data["states"],
        data["initial"],
        data["accepting"],
        transitions,
    )


def nfa_to_json(n: Nfa) -> str:
    return json.dumps(nfa_to_json_dict(n), ensure_ascii=False, indent=2)


def nfa_from_json(text: str) -> Nfa:
    return nfa_from_json_dict(json.loads(text))
