"""Task words, data abstraction, extremal strings, and the syntactic
reconstruction calculus that decides consecutiveness.

A *task word* decorates each element of a data word with a task set: one
Promised/Completed mark per 2-type of the element's chosen witness type
set, Completed exactly when a witness pair exists.  Trimming removes the
top value class and recomputes marks.  The *data abstraction* keeps only
three value layers (top, second, rest); the *extremal string* keeps only
the per-(layer, type) outermost positions plus, per type, the outermost
rest-layer position still carrying a promise, so its length is bounded by
7 times the number of witness 2-types.

``rcon`` rebuilds the extremal string of an extension that gives fresh top
values to a new letter sequence ``r`` interleaved at positions ``g``:
layers shift down, and promises upgrade to completions when a layer-forced
pair realizes exactly the promised 2-type.  Two extremal strings are
consecutive exactly when some (r, g) reconstructs one from the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .datawords import DataWord, trim
from .logic import (
    COMPLETED,
    GammaLetter,
    LAYER_REST,
    LAYER_SECOND,
    LAYER_TOP,
    NormalFormSentence,
    PROMISED,
    TaskSet,
    WitnessTypeSet,
    omega_of_task_set,
    perf_two_type,
)

GammaString = tuple[GammaLetter, ...]


class NotConsecutive(Exception):
    pass


class NonMonotoneG(Exception):
    pass


@dataclass(frozen=True)
class TaskWord:
    """A data word over task sets, with the underlying letter word kept for
    recomputing marks."""

    base: DataWord
    task_sets: tuple[TaskSet, ...]

    def __len__(self) -> int:
        return len(self.base)

    def is_completed(self, nf: NormalFormSentence) -> bool:
        if not self.task_sets:
            return nf.epsilon_true
        return all(ts.all_completed() for ts in self.task_sets)


def _marks_for(
    nf: NormalFormSentence, d: DataWord, pos: int, omega: WitnessTypeSet
) -> TaskSet:
    marks = {}
    for t in omega.types:
        tid = nf.theta_id(t)
        found = any(
            t.holds_between(d, pos, q)
            for q in range(1, len(d) + 1)
            if q != pos
        )
        marks[tid] = COMPLETED if found else PROMISED
    return TaskSet.of(marks)


def make_task_word(
    d: DataWord,
    nf: NormalFormSentence,
    choice: tuple[WitnessTypeSet, ...],
) -> Optional[TaskWord]:
    """Decorate d with the chosen witness type sets; marks are computed by
    model checking.  None when some choice's letter does not match."""
    if len(choice) != len(d):
        raise ValueError("one witness type set per element required")
    for pos, omega in enumerate(choice, start=1):
        if omega.letter(nf) != d.letter(pos):
            return None
    return TaskWord(
        d,
        tuple(
            _marks_for(nf, d, pos, omega)
            for pos, omega in enumerate(choice, start=1)
        ),
    )


def task_word_choices(
    d: DataWord, nf: NormalFormSentence
) -> list[tuple[WitnessTypeSet, ...]]:
    """All witness-type-set choices compatible with the letters of d."""
    from itertools import product

    from .logic import witness_type_sets

    groups = witness_type_sets(nf)
    letter_index = {x: i + 1 for i, x in enumerate(nf.alphabet)}
    per_pos = []
    for pos in range(1, len(d) + 1):
        a = letter_index[d.letter(pos)]
        per_pos.append(sorted(groups[a], key=lambda o: repr(o.types)))
    return [tuple(c) for c in product(*per_pos)]


def trim_task_word(t: TaskWord, nf: NormalFormSentence) -> TaskWord:
    """The unique trimming: drop the top value class, keep each survivor's
    witness type set, recompute marks against the trimmed word."""
    d = t.base
    if not d.values:
        return t
    top = d.maxval
    trimmed = trim(d)
    survivors = [p for p in range(1, len(d) + 1) if d.value(p) != top]
    new_sets = []
    for new_pos, old_pos in enumerate(survivors, start=1):
        omega = omega_of_task_set(nf, t.task_sets[old_pos - 1])
        new_sets.append(_marks_for(nf, trimmed, new_pos, omega))
    return TaskWord(trimmed, tuple(new_sets))


def abst(t: TaskWord) -> GammaString:
    """Layer each element by value (top / second / rest) and project."""
    d = t.base
    top = d.maxval
    out = []
    for pos in range(1, len(d) + 1):
        v = d.value(pos)
        if v == top:
            layer = LAYER_TOP
        elif v == top - 1:
            layer = LAYER_SECOND
        else:
            layer = LAYER_REST
        out.append(GammaLetter(layer, t.task_sets[pos - 1]))
    return tuple(out)


@lru_cache(maxsize=None)
def extremal_positions(
    w: GammaString, nf: NormalFormSentence
) -> frozenset[int]:
    """Positions kept by ext: per (layer, type) the outermost two, plus per
    type the outermost rest-layer promise on the side its witness lies."""
    first: dict = {}
    last: dict = {}
    first_promise: dict[int, int] = {}
    last_promise: dict[int, int] = {}
    for p, letter in enumerate(w, start=1):
        layer = letter.layer
        for tid, mark in letter.tasks.marks:
            key = (layer, tid)
            first.setdefault(key, p)
            last[key] = p
            if layer == LAYER_REST and mark == PROMISED:
                first_promise.setdefault(tid, p)
                last_promise[tid] = p
    keep: set[int] = set(first.values()) | set(last.values())
    for tid, theta in enumerate(nf.existential_types):
        if theta.x_before_y:
            if tid in last_promise:
                keep.add(last_promise[tid])
        elif tid in first_promise:
            keep.add(first_promise[tid])
    return frozenset(keep)


def ext(w: GammaString, nf: NormalFormSentence) -> GammaString:
    """The extremal string of w (a fixpoint of itself)."""
    keep = sorted(extremal_positions(w, nf))
    out = tuple(w[p - 1] for p in keep)
    assert len(out) <= 7 * len(nf.existential_types)
    return out


@lru_cache(maxsize=None)
def down(s: GammaString) -> GammaString:
    """Shift layers for one more value class on top: top becomes second,
    everything else becomes rest."""
    shifted = {LAYER_TOP: LAYER_SECOND, LAYER_SECOND: LAYER_REST, LAYER_REST: LAYER_REST}
    return tuple(GammaLetter(shifted[g.layer], g.tasks) for g in s)


def _interleave(
    r: GammaString, g: tuple[int, ...], base: GammaString
) -> GammaString:
    total = len(r) + len(base)
    if len(g) != len(r):
        raise NonMonotoneG("g must give one position per letter of r")
    if any(not (1 <= p <= total) for p in g) or any(
        a >= b for a, b in zip(g, g[1:])
    ):
        raise NonMonotoneG(f"positions {g} are not strictly monotone in range")
    out: list[Optional[GammaLetter]] = [None] * total
    for letter, p in zip(r, g):
        out[p - 1] = letter
    it = iter(base)
    for i in range(total):
        if out[i] is None:
            out[i] = next(it)
    return tuple(out)  # type: ignore[arg-type]


@lru_cache(maxsize=None)
def _completes_right(
    nf: NormalFormSentence, a: GammaLetter, b: GammaLetter, tid: int
) -> bool:
    """Does the ordered pair (a, b) realize witness type tid for a?"""
    if a.layer != LAYER_TOP and b.layer != LAYER_TOP:
        return False
    return perf_two_type(nf, a, b) == nf.existential_types[tid]


@lru_cache(maxsize=None)
def _completes_left(
    nf: NormalFormSentence, a: GammaLetter, b: GammaLetter, tid: int
) -> bool:
    """Does the ordered pair (a, b) realize witness type tid for b?"""
    if a.layer != LAYER_TOP and b.layer != LAYER_TOP:
        return False
    return perf_two_type(nf, a, b).swap() == nf.existential_types[tid]


@lru_cache(maxsize=None)
def rcon(
    r: GammaString,
    g: tuple[int, ...],
    s0: GammaString,
    nf: NormalFormSentence,
) -> GammaString:
    """Reconstruct the abstraction after adding a fresh top class.

    ``r`` (top-layer, all-promised letters) is interleaved into the shifted
    ``s0`` at positions ``g``; then every promise upgrades to a completion
    when it was already completed, or when a pair involving a top-layer
    position realizes exactly the promised 2-type (witness strictly to the
    right for types with x first, strictly to the left otherwise).
    """
    for letter in r:
        if letter.layer != LAYER_TOP or not letter.tasks.all_promised():
            raise ValueError("r must consist of top-layer all-promised letters")
    s1 = _interleave(r, g, down(s0))
    n = len(s1)
    out = []
    for pos in range(1, n + 1):
        letter = s1[pos - 1]
        marks = {}
        for tid, mark in letter.tasks.marks:
            if mark == COMPLETED:
                marks[tid] = COMPLETED
                continue
            theta = nf.existential_types[tid]
            if theta.x_before_y:
                done = any(
                    _completes_right(nf, letter, s1[q - 1], tid)
                    for q in range(pos + 1, n + 1)
                )
            else:
                done = any(
                    _completes_left(nf, s1[q - 1], letter, tid)
                    for q in range(1, pos)
                )
            marks[tid] = COMPLETED if done else PROMISED
        out.append(GammaLetter(letter.layer, TaskSet.of(marks)))
    return tuple(out)


def _promoted_top_letters(s1: GammaString) -> GammaString:
    """The top layer of s1 with all marks reset to promises (the only
    candidate for r: with witnesses pruned to extremal elements, every new
    top element survives into the extremal string)."""
    return tuple(
        GammaLetter(LAYER_TOP, g.tasks.promised()) for g in s1 if g.is_top()
    )


@lru_cache(maxsize=None)
def consecutive(
    s0: GammaString, s1: GammaString, nf: NormalFormSentence
) -> Optional[tuple[GammaString, tuple[int, ...]]]:
    """Decide whether s1 can follow s0 (one more value class on top).

    Returns a reconstruction witness (r, g) with s1 = ext(rcon(r, g, s0)),
    or None.  r is determined by the top layer of s1; only the interleaving
    g is searched.
    """
    if ext(s0, nf) != s0 or ext(s1, nf) != s1:
        raise ValueError("consecutive() expects extremal strings")
    r = _promoted_top_letters(s1)
    if not r:
        # A nonempty task word always has extremal top elements, so only the
        # empty string can follow without new top letters.
        if s1 == () and s0 == ():
            return (), ()
        return None
    total = len(r) + len(s0)
    for g in combinations(range(1, total + 1), len(r)):
        if ext(rcon(r, g, s0, nf), nf) == s1:
            return r, g
    return None


@lru_cache(maxsize=None)
def partial_embedding(
    s0: GammaString,
    s1: GammaString,
    r: GammaString,
    g: tuple[int, ...],
    nf: NormalFormSentence,
) -> dict[int, int]:
    """Map each non-top position of s1 to its source position in s0.

    Requires s1 = ext(rcon(r, g, s0)); the map is injective and
    order-preserving and does not depend on which task word witnesses the
    pair, so the construction from (r, g) is canonical.
    """
    full = rcon(r, g, s0, nf)
    if ext(full, nf) != s1:
        raise NotConsecutive("(r, g) does not reconstruct s1 from s0")
    kept = sorted(extremal_positions(full, nf))
    g_set = set(g)
    base_positions = [p for p in range(1, len(full) + 1) if p not in g_set]
    source = {p: i + 1 for i, p in enumerate(base_positions)}
    out = {}
    for idx, p in enumerate(kept, start=1):
        if s1[idx - 1].is_top():
            continue
        out[idx] = source[p]
    return out
