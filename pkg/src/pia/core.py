"""Pebble-intervals automata: data model, run semantics, membership.

A pebble-intervals automaton reads a string in an arbitrary order.  A
``Move(k, i, j)`` transition places pebble ``k`` on a previously unread
position strictly between the current positions of pebbles ``i`` and ``j``
(the markers ``▷`` / ``◁`` stand for the ends of the input), reading the
letter there.  Silent transitions change only the state.  A word is
accepted when some computation ends in an accepting state with every
position read.

All types are immutable after construction; every function here is pure.
Positions are 1-indexed, ``0`` marks an unplaced pebble.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Union

LEFT_END = "▷"
RIGHT_END = "◁"

Letter = str
State = str
Word = tuple[Letter, ...]


class PiaError(Exception):
    pass


class AlphabetMismatch(PiaError):
    """The word uses letters outside the automaton's alphabet."""


class IllegalStep(PiaError):
    """A transition was applied to a configuration that does not enable it."""


class MoveSpec(NamedTuple):
    """Pebble/interval triple of a move: place ``k`` strictly between ``i`` and ``j``."""

    k: int
    i: Union[int, str]
    j: Union[int, str]


@dataclass(frozen=True)
class Silent:
    src: State
    dst: State


@dataclass(frozen=True)
class Move:
    src: State
    pebble: int
    left: Union[int, str]   # pebble index or LEFT_END
    right: Union[int, str]  # pebble index or RIGHT_END
    letter: Letter
    dst: State

    @property
    def spec(self) -> MoveSpec:
        return MoveSpec(self.pebble, self.left, self.right)


Transition = Union[Silent, Move]


@dataclass(frozen=True)
class Pia:
    alphabet: frozenset[Letter]
    pebbles: int
    states: frozenset[State]
    initial: State
    accepting: frozenset[State]
    transitions: frozenset[Transition]

    @property
    def size(self) -> int:
        return len(self.transitions) + len(self.alphabet) + len(self.states)

    def transitions_from(self, state: State) -> list[Transition]:
        return sorted(
            (t for t in self.transitions if t.src == state), key=repr
        )


def make_pia(
    alphabet: Iterable[Letter],
    pebbles: int,
    states: Iterable[State],
    initial: State,
    accepting: Iterable[State],
    transitions: Iterable[Transition],
) -> Pia:
    return Pia(
        alphabet=frozenset(alphabet),
        pebbles=pebbles,
        states=frozenset(states),
        initial=initial,
        accepting=frozenset(accepting),
        transitions=frozenset(transitions),
    )


@dataclass(frozen=True)
class PebbleAssignment:
    """Partial injective map from pebbles ``1..m`` to positions; 0 means unplaced."""

    slots: tuple[int, ...]

    @classmethod
    def empty(cls, pebbles: int) -> "PebbleAssignment":
        return cls((0,) * pebbles)

    def get(self, pebble: int) -> int:
        return self.slots[pebble - 1]

    def extended(self, ref: Union[int, str], length: int) -> Optional[int]:
        """Position of an interval endpoint; None when the pebble is unplaced."""
        if ref == LEFT_END:
            return 0
        if ref == RIGHT_END:
            return length + 1
        pos = self.slots[ref - 1]
        return pos if pos else None

    def place(self, pebble: int, pos: int) -> "PebbleAssignment":
        slots = list(self.slots)
        slots[pebble - 1] = pos
        return PebbleAssignment(tuple(slots))

    def placed(self) -> dict[int, int]:
        return {k + 1: p for k, p in enumerate(self.slots) if p}

    def is_injective(self) -> bool:
        used = [p for p in self.slots if p]
        return len(used) == len(set(used))


@dataclass(frozen=True)
class Configuration:
    """State, pebble assignment, and set of already-read positions."""

    state: State
    assignment: PebbleAssignment
    read: frozenset[int]

    @classmethod
    def initial(cls, pia: Pia) -> "Configuration":
        return cls(pia.initial, PebbleAssignment.empty(pia.pebbles), frozenset())

    def is_accepting(self, pia: Pia, length: int) -> bool:
        return self.state in pia.accepting and len(self.read) == length


def validate(pia: Pia) -> list[str]:
    """Check structural invariants; returns a list of violations (empty = valid)."""
    problems = []
    if pia.pebbles < 1:
        problems.append(f"pebble count must be positive, got {pia.pebbles}")
    if pia.initial not in pia.states:
        problems.append(f"initial state {pia.initial!r} not in states")
    for q in pia.accepting:
        if q not in pia.states:
            problems.append(f"accepting state {q!r} not in states")
    for t in sorted(pia.transitions, key=repr):
        if t.src not in pia.states:
            problems.append(f"transition {t} leaves unknown state {t.src!r}")
        if t.dst not in pia.states:
            problems.append(f"transition {t} enters unknown state {t.dst!r}")
        if isinstance(t, Move):
            k, i, j = t.spec
            if not (1 <= k <= pia.pebbles):
                problems.append(f"transition {t} moves unknown pebble {k}")
            if i != LEFT_END and not (
                isinstance(i, int) and 1 <= i <= pia.pebbles
            ):
                problems.append(f"transition {t} has bad left bound {i!r}")
            if j != RIGHT_END and not (
                isinstance(j, int) and 1 <= j <= pia.pebbles
            ):
                problems.append(f"transition {t} has bad right bound {j!r}")
            if i == j:
                problems.append(f"transition {t} has equal interval bounds")
            if t.letter not in pia.alphabet:
                problems.append(f"transition {t} reads unknown letter {t.letter!r}")
    return problems


def _legal_positions(
    cfg: Configuration, move: Move, word: Word
) -> Iterator[int]:
    """Unread positions in the open interval carrying the move's letter, left to right."""
    n = len(word)
    lo = cfg.assignment.extended(move.left, n)
    hi = cfg.assignment.extended(move.right, n)
    if lo is None or hi is None:
        return
    for pos in range(lo + 1, hi):
        if pos not in cfg.read and word[pos - 1] == move.letter:
            yield pos


def step(
    pia: Pia,
    cfg: Configuration,
    t: Transition,
    pos: Optional[int],
    word: Word,
) -> Configuration:
    """Apply one transition.  Raises IllegalStep when a precondition fails."""
    if t not in pia.transitions:
        raise IllegalStep(f"{t} is not a transition of this automaton")
    if isinstance(t, Silent):
        if t.src != cfg.state:
            raise IllegalStep(f"{t} does not leave state {cfg.state!r}")
        return Configuration(t.dst, cfg.assignment, cfg.read)
    if t.src != cfg.state:
        raise IllegalStep(f"{t} does not leave state {cfg.state!r}")
    if pos is None:
        raise IllegalStep("move transitions need a target position")
    # Read-once discipline: a position may never be read twice.
    if pos in cfg.read:
        raise IllegalStep(f"position {pos} was already read")
    if pos not in _legal_positions(cfg, t, word):
        raise IllegalStep(f"position {pos} is not a legal target for {t}")
    return Configuration(
        t.dst, cfg.assignment.place(t.pebble, pos), cfg.read | {pos}
    )


def _check_word(pia: Pia, word: Word) -> None:
    unknown = set(word) - pia.alphabet
    if unknown:
        raise AlphabetMismatch(f"letters {sorted(unknown)} not in alphabet")


def _indexed(pia: Pia) -> tuple[dict[State, int], list[list[tuple]]]:
    """State numbering and per-state compact adjacency used by the searches."""
    idx = {q: i for i, q in enumerate(sorted(pia.states))}
    adj: list[list[tuple]] = [[] for _ in idx]
    for t in sorted(pia.transitions, key=repr):
        if isinstance(t, Silent):
            adj[idx[t.src]].append((None, idx[t.dst]))
        else:
            adj[idx[t.src]].append(
                ((t.pebble, t.left, t.right, t.letter), idx[t.dst])
            )
    return idx, adj


def accepts(pia: Pia, word: Word) -> bool:
    """Decide membership by exhaustive search over configurations.

    Configurations are memoised as packed integers (state, pebble slots,
    read bitmask), which both cuts silent-transition cycles and shares
    repeated subproblems between branches.
    """
    word = tuple(word)
    _check_word(pia, word)
    n = len(word)
    m = pia.pebbles
    idx, adj = _indexed(pia)
    accepting = {idx[q] for q in pia.accepting}
    full = (1 << n) - 1
    radix = n + 1

    def pack(q: int, slots: tuple[int, ...], mask: int) -> int:
        key = q
        for s in slots:
            key = key * radix + s
        return (key << n) | mask

    start = (idx[pia.initial], (0,) * m, 0)
    seen = {pack(*start)}
    stack = [start]
    while stack:
        q, slots, mask = stack.pop()
        if q in accepting and mask == full:
            return True
        for label, dst in adj[q]:
            if label is None:
                nxt = (dst, slots, mask)
                key = pack(*nxt)
                if key not in seen:
                    seen.add(key)
                    stack.append(nxt)
                continue
            k, i, j, letter = label
            lo = 0 if i == LEFT_END else slots[i - 1]
            if lo == 0 and i != LEFT_END:
                continue
            hi = n + 1 if j == RIGHT_END else slots[j - 1]
            if hi == n + 1 and j != RIGHT_END:
                continue
            for pos in range(lo + 1, hi):
                bit = 1 << (pos - 1)
                if mask & bit or word[pos - 1] != letter:
                    continue
                nslots = slots[: k - 1] + (pos,) + slots[k:]
                nxt = (dst, nslots, mask | bit)
                key = pack(*nxt)
                if key not in seen:
                    seen.add(key)
                    stack.append(nxt)
    return False


def enumerate_accepted(pia: Pia, max_len: int) -> set[Word]:
    """All accepted words of length at most ``max_len``.

    Explores (state, slots, read-mask, letters-read-so-far) tuples per word
    length, choosing letters nondeterministically as moves fire, so the cost
    scales with the automaton's reachable behaviour rather than with
    ``|alphabet| ** max_len``.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    idx, adj = _indexed(pia)
    accepting = {idx[q] for q in pia.accepting}
    letters = sorted(pia.alphabet)
    lidx = {a: i for i, a in enumerate(letters)}
    out: set[Word] = set()
    for n in range(max_len + 1):
        full = (1 << n) - 1
        start = (idx[pia.initial], (0,) * pia.pebbles, 0, (None,) * n)
        seen = {start}
        stack = [start]
        while stack:
            q, slots, mask, chosen = stack.pop()
            if q in accepting and mask == full:
                out.add(tuple(letters[c] for c in chosen))
            for label, dst in adj[q]:
                if label is None:
                    nxt = (dst, slots, mask, chosen)
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
                    continue
                k, i, j, letter = label
                lo = 0 if i == LEFT_END else slots[i - 1]
                if lo == 0 and i != LEFT_END:
                    continue
                hi = n + 1 if j == RIGHT_END else slots[j - 1]
                if hi == n + 1 and j != RIGHT_END:
                    continue
                c = lidx[letter]
                for pos in range(lo + 1, hi):
                    bit = 1 << (pos - 1)
                    if mask & bit:
                        continue
                    nslots = slots[: k - 1] + (pos,) + slots[k:]
                    nchosen = chosen[: pos - 1] + (c,) + chosen[pos:]
                    nxt = (dst, nslots, mask | bit, nchosen)
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
    return out


# --- JSON interchange -------------------------------------------------------
#
# { "alphabet": [...], "pebbles": m, "states": [...], "initial": s,
#   "accepting": [...],
#   "transitions": [ {"kind": "silent", "from": q, "to": q2}
#                  | {"kind": "move", "from": q, "pebble": k,
#                     "left": i | "▷", "right": j | "◁",
#                     "letter": a, "to": q2} ] }


def pia_to_json_dict(pia: Pia) -> dict:
    transitions = []
    for t in sorted(pia.transitions, key=repr):
        if isinstance(t, Silent):
            transitions.append({"kind": "silent", "from": t.src, "to": t.dst})
        else:
            transitions.append(
                {
                    "kind": "move",
                    "from": t.src,
                    "pebble": t.pebble,
                    "left": t.left,
                    "right": t.right,
                    "letter": t.letter,
                    "to": t.dst,
                }
            )
    return {
        "alphabet": sorted(pia.alphabet),
        "pebbles": pia.pebbles,
        "states": sorted(pia.states),
        "initial": pia.initial,
        "accepting": sorted(pia.accepting),
        "transitions": transitions,
    }


def pia_from_json_dict(data: dict) -> Pia:
    transitions: list[Transition] = []
    for t in data["transitions"]:
        if t["kind"] == "silent":
            transitions.append(Silent(t["from"], t["to"]))
        elif t["kind"] == "move":
            transitions.append(
                Move(
                    t["from"],
                    t["pebble"],
                    t["left"],
                    t["right"],
                    t["letter"],
                    t["to"],
                )
            )
        else:
            raise ValueError(f"unknown transition kind {t['kind']!r}")
    return make_pia(
        data["alphabet"],
        data["pebbles"],
        data["states"],
        data["initial"],
        data["accepting"],
        transitions,
    )


def pia_to_json(pia: Pia) -> str:
    return json.dumps(pia_to_json_dict(pia), ensure_ascii=False, indent=2)


def pia_from_json(text: str) -> Pia:
    return pia_from_json_dict(json.loads(text))


def parse_word(text: str) -> Word:
    """Words are whitespace-separated letter tokens (supports multi-char letters)."""
    return tuple(text.split())
