"""Normal-form sentences over data words: 2-types, witness type sets, task
sets, the layered alphabet, and the pair formulas that pin down 2-types
between top-layer elements.

A normal-form sentence is a conjunction of a universal part (every distinct
pair of elements realizes one of an allowed set of 2-types) and an
existential part (every element with letter a needs, for each constraint
index b, a witness pair realizing one of the 2-types indexed (a, b, c)),
plus an empty-model flag and a letter-to-letter substitution into the
target alphabet.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Optional

from .datawords import (
    And,
    DataWord,
    Exists,
    Eq,
    Forall,
    Formula,
    Implies,
    LetterAtom,
    Le1,
    Le2,
    Not,
    Or,
    S2,
    TRUE,
    lt1,
    lt2,
    model_check_with,
    sim2,
)



class _CachedHash:
    """Hash memoisation for frozen dataclasses used as cache keys."""

    def __hash__(self):
        try:
            return object.__getattribute__(self, "_hash")
        except AttributeError:
            value = hash((type(self).__name__, *self.__dict__.values()))
            object.__setattr__(self, "_hash", value)
            return value


class NeitherTop(Exception):
    """A pair formula needs at least one top-layer operand."""


@dataclass(frozen=True)
class TwoType:
    """Maximal consistent description of a distinct ordered pair (x, y).

    ``x_before_y`` fixes the strict position order; ``le2_xy``/``le2_yx``
    are the signs of x ≲₂ y and y ≲₂ x; ``s2_xy``/``s2_yx`` the signs of
    the value-successor atoms.
    """

    __hash__ = _CachedHash.__hash__

    x_letter: str
    y_letter: str
    x_before_y: bool
    le2_xy: bool
    le2_yx: bool
    s2_xy: bool
    s2_yx: bool

    def is_consistent(self) -> bool:
        if not (self.le2_xy or self.le2_yx):
            return False  # value order is total
        if self.s2_xy and not (self.le2_xy and not self.le2_yx):
            return False  # successor implies strictly smaller
        if self.s2_yx and not (self.le2_yx and not self.le2_xy):
            return False
        return True

    def swap(self) -> "TwoType":
        """The same pair described with x and y exchanged."""
        return TwoType(
            x_letter=self.y_letter,
            y_letter=self.x_letter,
            x_before_y=not self.x_before_y,
            le2_xy=self.le2_yx,
            le2_yx=self.le2_xy,
            s2_xy=self.s2_yx,
            s2_yx=self.s2_xy,
        )

    def entails_x_first(self) -> bool:
        return self.x_before_y

    def to_formula(self, x: str = "x", y: str = "y") -> Formula:
        parts: list[Formula] = [
            LetterAtom(self.x_letter, x),
            LetterAtom(self.y_letter, y),
            lt1(x, y) if self.x_before_y else lt1(y, x),
            Le2(x, y) if self.le2_xy else Not(Le2(x, y)),
            Le2(y, x) if self.le2_yx else Not(Le2(y, x)),
            S2(x, y) if self.s2_xy else Not(S2(x, y)),
            S2(y, x) if self.s2_yx else Not(S2(y, x)),
        ]
        return And(*parts)

    def holds_between(self, d: DataWord, p: int, q: int) -> bool:
        """Does the distinct pair (p, q) of positions realize this type?"""
        if p == q:
            return False
        if d.letter(p) != self.x_letter or d.letter(q) != self.y_letter:
            return False
        if (p < q) != self.x_before_y:
            return False
        vp, vq = d.value(p), d.value(q)
        return (
            (vp <= vq) == self.le2_xy
            and (vq <= vp) == self.le2_yx
            and (vq == vp + 1) == self.s2_xy
            and (vp == vq + 1) == self.s2_yx
        )


def pair_type(d: DataWord, p: int, q: int) -> TwoType:
    """The 2-type realized by the distinct pair (p, q)."""
    if p == q:
        raise ValueError("2-types describe distinct pairs")
    vp, vq = d.value(p), d.value(q)
    return TwoType(
        x_letter=d.letter(p),
        y_letter=d.letter(q),
        x_before_y=p < q,
        le2_xy=vp <= vq,
        le2_yx=vq <= vp,
        s2_xy=vq == vp + 1,
        s2_yx=vp == vq + 1,
    )


def all_two_types(alphabet: Iterable[str]) -> list[TwoType]:
    """All consistent 2-types over the given letters."""
    letters = sorted(alphabet)
    out = []
    for xl, yl, order in product(letters, letters, (True, False)):
        # The five consistent value patterns: equal, strictly-below with or
        # without successor, and the two mirrored cases.
        for le_xy, le_yx, s_xy, s_yx in (
            (True, True, False, False),
            (True, False, True, False),
            (True, False, False, False),
            (False, True, False, True),
            (False, True, False, False),
        ):
            out.append(TwoType(xl, yl, order, le_xy, le_yx, s_xy, s_yx))
    return out


def realize_two_type(t: TwoType) -> Optional[DataWord]:
    """A data word of at most 3 positions whose first/last pair realizes t.

    Equal or successor values need two positions; a strict non-successor gap
    needs one filler element in between.  None when t is inconsistent.
    """
    if not t.is_consistent():
        return None
    if t.x_before_y:
        first_letter, second_letter = t.x_letter, t.y_letter
        below = t.le2_xy and not t.le2_yx  # earlier position strictly below
        above = t.le2_yx and not t.le2_xy
        succ = t.s2_xy or t.s2_yx
    else:
        first_letter, second_letter = t.y_letter, t.x_letter
        below = t.le2_yx and not t.le2_xy
        above = t.le2_xy and not t.le2_yx
        succ = t.s2_xy or t.s2_yx
    filler = t.x_letter
    if not below and not above:
        return DataWord((first_letter, second_letter), (1, 1))
    if below:
        if succ:
            return DataWord((first_letter, second_letter), (1, 2))
        return DataWord((first_letter, second_letter, filler), (1, 3, 2))
    if succ:
        return DataWord((first_letter, second_letter), (2, 1))
    return DataWord((first_letter, second_letter, filler), (3, 1, 2))


def _type_pair_positions(t: TwoType) -> tuple[int, int]:
    """(x position, y position) in the word built by realize_two_type."""
    return (1, 2) if t.x_before_y else (2, 1)


def check_realizes(t: TwoType) -> bool:
    """Verify the built word really realizes t (used as a self-check oracle)."""
    w = realize_two_type(t)
    if w is None:
        return False
    p, q = _type_pair_positions(t)
    return t.holds_between(w, p, q) and model_check_with(
        w, t.to_formula(), {"x": p, "y": q}
    )


# --- normal-form sentences ------------------------------------------------


@dataclass(frozen=True)
class NormalFormSentence:
    """Universal 2-type disjunction plus letter-indexed existential witnesses.

    ``theta_exists[(a, b, c)]`` is the witness 2-type for letter index a,
    constraint index b, alternative c (1-based indices); its x-letter must
    be the a-th alphabet letter.  ``epsilon_true`` tells whether the empty
    structure satisfies the sentence.  ``substitution`` maps the sentence's
    letters into the target alphabet.
    """

    __hash__ = _CachedHash.__hash__

    alphabet: tuple[str, ...]
    num_constraints: int  # B
    num_alternatives: int  # C
    theta_forall: frozenset[TwoType]
    theta_exists: tuple[tuple[tuple[int, int, int], TwoType], ...]
    epsilon_true: bool
    substitution: tuple[tuple[str, str], ...]

    @property
    def num_letters(self) -> int:  # A
        return len(self.alphabet)

    def exists_map(self) -> dict[tuple[int, int, int], TwoType]:
        return dict(self.theta_exists)

    def h(self) -> dict[str, str]:
        return dict(self.substitution)

    def target_alphabet(self) -> tuple[str, ...]:
        return tuple(sorted(set(dict(self.substitution).values())))

    @property
    def existential_types(self) -> tuple[TwoType, ...]:
        """Canonically ordered, deduplicated witness 2-types."""
        return _existential_types(self)

    def theta_id(self, t: TwoType) -> int:
        return self.existential_types.index(t)

    def validate(self) -> list[str]:
        problems = []
        exists = self.exists_map()
        for a in range(1, self.num_letters + 1):
            for b in range(1, self.num_constraints + 1):
                for c in range(1, self.num_alternatives + 1):
                    t = exists.get((a, b, c))
                    if t is None:
                        problems.append(f"missing witness type ({a},{b},{c})")
                    elif t.x_letter != self.alphabet[a - 1]:
                        problems.append(
                            f"witness type ({a},{b},{c}) has x-letter "
                            f"{t.x_letter!r}, expected {self.alphabet[a - 1]!r}"
                        )
                    elif not t.is_consistent():
                        problems.append(f"witness type ({a},{b},{c}) inconsistent")
        for t in self.theta_forall:
            if not t.is_consistent():
                problems.append(f"universal type {t} inconsistent")
        h = self.h()
        for letter in self.alphabet:
            if letter not in h:
                problems.append(f"substitution misses letter {letter!r}")
        return problems

    # Semantics.  The universal part is read over distinct pairs.

    def to_formula(self) -> Formula:
        chi = Or(*(t.to_formula() for t in sorted(self.theta_forall, key=repr)))
        universal = Forall("x", Forall("y", Or(Eq("x", "y"), chi)))
        exists = self.exists_map()
        constraints: list[Formula] = []
        for a in range(1, self.num_letters + 1):
            need = And(
                *(
                    Exists(
                        "y",
                        Or(
                            *(
                                exists[(a, b, c)].to_formula()
                                for c in range(1, self.num_alternatives + 1)
                            )
                        ),
                    )
                    for b in range(1, self.num_constraints + 1)
                )
            )
            constraints.append(
                Implies(LetterAtom(self.alphabet[a - 1], "x"), need)
            )
        existential = Forall("x", And(*constraints))
        eps = TRUE if self.epsilon_true else Exists("x", TRUE)
        return And(universal, eps, existential)

    def satisfied_by(self, d: DataWord) -> bool:
        """Direct evaluation over pair types; agrees with the formula route."""
        n = len(d)
        if n == 0:
            return self.epsilon_true
        for p in range(1, n + 1):
            for q in range(1, n + 1):
                if p != q and pair_type(d, p, q) not in self.theta_forall:
                    return False
        exists = self.exists_map()
        letter_index = {x: i + 1 for i, x in enumerate(self.alphabet)}
        for p in range(1, n + 1):
            a = letter_index.get(d.letter(p))
            if a is None:
                return False
            for b in range(1, self.num_constraints + 1):
                if not any(
                    exists[(a, b, c)].holds_between(d, p, q)
                    for c in range(1, self.num_alternatives + 1)
                    for q in range(1, n + 1)
                    if q != p
                ):
                    return False
        return True


@lru_cache(maxsize=None)
def _existential_types(nf: "NormalFormSentence") -> tuple[TwoType, ...]:
    seen: dict[TwoType, None] = {}
    for _, t in sorted(nf.theta_exists, key=lambda kv: kv[0]):
        seen.setdefault(t)
    return tuple(seen)


def expand_to_two_types(
    qf: Formula, alphabet: Iterable[str]
) -> frozenset[TwoType]:
    """The consistent 2-types (over distinct pairs) entailing a
    quantifier-free formula in x and y."""
    return frozenset(
        t for t in all_two_types(alphabet) if _qf_under_type(qf, t)
    )


def _qf_under_type(f: Formula, t: TwoType) -> bool:
    """Evaluate a quantifier-free formula under the atom values fixed by t."""
    from .datawords import (
        And as FAnd,
        Bottom,
        Implies as FImplies,
        Not as FNot,
        Or as FOr,
        Top,
    )

    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Le1):
        if f.a == f.b:
            return True
        return t.x_before_y if (f.a, f.b) == ("x", "y") else not t.x_before_y
    if isinstance(f, Le2):
        if f.a == f.b:
            return True
        return t.le2_xy if (f.a, f.b) == ("x", "y") else t.le2_yx
    if isinstance(f, S2):
        if f.a == f.b:
            return False
        return t.s2_xy if (f.a, f.b) == ("x", "y") else t.s2_yx
    if isinstance(f, Eq):
        return f.a == f.b
    if isinstance(f, LetterAtom):
        letter = t.x_letter if f.var == "x" else t.y_letter
        return letter == f.symbol
    if isinstance(f, FNot):
        return not _qf_under_type(f.sub, t)
    if isinstance(f, FAnd):
        return all(_qf_under_type(p, t) for p in f.parts)
    if isinstance(f, FOr):
        return any(_qf_under_type(p, t) for p in f.parts)
    if isinstance(f, FImplies):
        return (not _qf_under_type(f.left, t)) or _qf_under_type(f.right, t)
    raise ValueError(f"not quantifier-free: {f!r}")


# --- witness type sets and tasks -------------------------------------------


@dataclass(frozen=True)
class WitnessTypeSet:
    """A choice of one witness 2-type per constraint index, for one letter."""

    __hash__ = _CachedHash.__hash__

    letter_index: int  # a
    types: frozenset[TwoType]

    def letter(self, nf: NormalFormSentence) -> str:
        return nf.alphabet[self.letter_index - 1]


def witness_type_sets(
    nf: NormalFormSentence,
) -> dict[int, frozenset[WitnessTypeSet]]:
    """All witness type sets, grouped by letter index."""
    exists = nf.exists_map()
    out = {}
    for a in range(1, nf.num_letters + 1):
        choices = product(
            *(
                [exists[(a, b, c)] for c in range(1, nf.num_alternatives + 1)]
                for b in range(1, nf.num_constraints + 1)
            )
        )
        out[a] = frozenset(
            WitnessTypeSet(a, frozenset(chosen)) for chosen in choices
        )
    return out


@lru_cache(maxsize=None)
def all_witness_type_sets(nf: NormalFormSentence) -> frozenset[WitnessTypeSet]:
    out: set[WitnessTypeSet] = set()
    for group in witness_type_sets(nf).values():
        out |= group
    return frozenset(out)


PROMISED = "P"
COMPLETED = "C"


@dataclass(frozen=True)
class TaskSet:
    """Per-2-type Promised/Completed marks whose support is one witness set."""

    __hash__ = _CachedHash.__hash__

    marks: tuple[tuple[int, str], ...]  # sorted (theta_id, mark) pairs

    @classmethod
    def of(cls, marks: dict[int, str]) -> "TaskSet":
        return cls(tuple(sorted(marks.items())))

    def mark(self, tid: int) -> Optional[str]:
        return dict(self.marks).get(tid)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(tid for tid, _ in self.marks)

    def all_completed(self) -> bool:
        return all(m == COMPLETED for _, m in self.marks)

    def all_promised(self) -> bool:
        return all(m == PROMISED for _, m in self.marks)

    def promised(self) -> "TaskSet":
        return TaskSet.of({tid: PROMISED for tid, _ in self.marks})


@lru_cache(maxsize=None)
def omega_of_task_set(
    nf: NormalFormSentence, ts: TaskSet
) -> Optional[WitnessTypeSet]:
    """The unique witness type set a task set realizes, if any."""
    types = frozenset(nf.existential_types[tid] for tid in ts.support)
    for omega in all_witness_type_sets(nf):
        if omega.types == types:
            return omega
    return None


@lru_cache(maxsize=None)
def realizing_task_sets(nf: NormalFormSentence) -> tuple[TaskSet, ...]:
    """All task sets realizing some witness type set (the letter alphabet of
    task words)."""
    out = []
    for omega in sorted(
        all_witness_type_sets(nf), key=lambda o: (o.letter_index, repr(o.types))
    ):
        tids = sorted(nf.theta_id(t) for t in omega.types)
        for marks in product((PROMISED, COMPLETED), repeat=len(tids)):
            out.append(TaskSet.of(dict(zip(tids, marks))))
    return tuple(sorted(set(out), key=lambda ts: ts.marks))


LAYER_TOP = "1top"
LAYER_SECOND = "2top"
LAYER_REST = "rest"
LAYERS = (LAYER_TOP, LAYER_SECOND, LAYER_REST)


@dataclass(frozen=True)
class GammaLetter:
    """A layer tag paired with a realizing task set."""

    __hash__ = _CachedHash.__hash__

    layer: str
    tasks: TaskSet

    def is_top(self) -> bool:
        return self.layer == LAYER_TOP


@lru_cache(maxsize=None)
def gamma_letter_symbol(nf: NormalFormSentence, g: GammaLetter) -> str:
    """The alphabet letter carried by a layered symbol."""
    omega = omega_of_task_set(nf, g.tasks)
    if omega is None:
        raise ValueError(f"task set {g.tasks} realizes no witness set")
    return omega.letter(nf)


# --- pair formulas -----------------------------------------------------------


def perf(
    nf: NormalFormSentence, alpha: GammaLetter, beta: GammaLetter
) -> Formula:
    """The layer-determined description of a pair with x before y.

    Requires at least one operand in the top layer; then the letters, the
    position order, the value comparison, and the successor relation are all
    forced, so the formula is equivalent to a single 2-type.
    """
    if not (alpha.is_top() or beta.is_top()):
        raise NeitherTop("at least one operand must be in the top layer")
    parts: list[Formula] = [
        LetterAtom(gamma_letter_symbol(nf, alpha), "x"),
        LetterAtom(gamma_letter_symbol(nf, beta), "y"),
        lt1("x", "y"),
    ]
    if alpha.layer != LAYER_TOP:
        parts.append(lt2("x", "y"))
    elif beta.layer != LAYER_TOP:
        parts.append(lt2("y", "x"))
    else:
        parts.append(sim2("x", "y"))
    if alpha.layer == LAYER_SECOND:
        parts.append(S2("x", "y"))
    elif beta.layer == LAYER_SECOND:
        parts.append(S2("y", "x"))
    elif alpha.layer == LAYER_REST:
        parts.append(Not(S2("x", "y")))
    elif beta.layer == LAYER_REST:
        parts.append(Not(S2("y", "x")))
    return And(*parts)


@lru_cache(maxsize=None)
def perf_two_type(
    nf: NormalFormSentence, alpha: GammaLetter, beta: GammaLetter
) -> TwoType:
    """The unique 2-type equivalent to perf(alpha, beta) over data words."""
    if not (alpha.is_top() or beta.is_top()):
        raise NeitherTop("at least one operand must be in the top layer")
    if alpha.layer != LAYER_TOP:
        le2_xy, le2_yx = True, False
    elif beta.layer != LAYER_TOP:
        le2_xy, le2_yx = False, True
    else:
        le2_xy, le2_yx = True, True
    s2_xy = alpha.layer == LAYER_SECOND
    s2_yx = beta.layer == LAYER_SECOND
    return TwoType(
        x_letter=gamma_letter_symbol(nf, alpha),
        y_letter=gamma_letter_symbol(nf, beta),
        x_before_y=True,
        le2_xy=le2_xy,
        le2_yx=le2_yx,
        s2_xy=s2_xy,
        s2_yx=s2_yx,
    )


@lru_cache(maxsize=None)
def perfect_pair(
    nf: NormalFormSentence, a: GammaLetter, b: GammaLetter
) -> bool:
    """Does the ordered pair (a, b) satisfy the universal constraint both
    ways?  Only meaningful when one side is in the top layer."""
    t = perf_two_type(nf, a, b)
    return t in nf.theta_forall and t.swap() in nf.theta_forall


def is_perfect_string(
    w: tuple[GammaLetter, ...], nf: NormalFormSentence
) -> bool:
    """Every pair involving a top-layer letter must realize an allowed
    2-type in both orientations.  The empty string is perfect."""
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            if not (w[i].is_top() or w[j].is_top()):
                continue
            if not perfect_pair(nf, w[i], w[j]):
                return False
    return True


# --- JSON ---------------------------------------------------------------------
#
# 2-types are lists of signed atom tags, e.g.
#   ["x:ξ1", "y:ξ2", "x<1y", "x<=2y", "!y<=2x", "S2(x,y)", "!S2(y,x)"]


def two_type_to_tags(t: TwoType) -> list[str]:
    return [
        f"x:{t.x_letter}",
        f"y:{t.y_letter}",
        "x<1y" if t.x_before_y else "y<1x",
        ("" if t.le2_xy else "!") + "x<=2y",
        ("" if t.le2_yx else "!") + "y<=2x",
        ("" if t.s2_xy else "!") + "S2(x,y)",
        ("" if t.s2_yx else "!") + "S2(y,x)",
    ]


def two_type_from_tags(tags: list[str]) -> TwoType:
    fields: dict = {}
    for tag in tags:
        neg = tag.startswith("!")
        body = tag[1:] if neg else tag
        if body.startswith("x:"):
            fields["x_letter"] = body[2:]
        elif body.startswith("y:"):
            fields["y_letter"] = body[2:]
        elif body == "x<1y":
            fields["x_before_y"] = not neg
        elif body == "y<1x":
            fields["x_before_y"] = neg
        elif body == "x<=2y":
            fields["le2_xy"] = not neg
        elif body == "y<=2x":
            fields["le2_yx"] = not neg
        elif body == "S2(x,y)":
            fields["s2_xy"] = not neg
        elif body == "S2(y,x)":
            fields["s2_yx"] = not neg
        else:
            raise ValueError(f"unknown atom tag {tag!r}")
    return TwoType(**fields)


def sentence_to_json_dict(nf: NormalFormSentence) -> dict:
    return {
        "alphabet": list(nf.alphabet),
        "constraints": nf.num_constraints,
        "alternatives": nf.num_alternatives,
        "epsilon": nf.epsilon_true,
        "substitution": dict(nf.substitution),
        "theta_forall": [
            two_type_to_tags(t) for t in sorted(nf.theta_forall, key=repr)
        ],
        "theta_exists": [
            {"a": a, "b": b, "c": c, "type": two_type_to_tags(t)}
            for (a, b, c), t in sorted(nf.theta_exists, key=lambda kv: kv[0])
        ],
    }


def sentence_from_json_dict(data: dict) -> NormalFormSentence:
    return NormalFormSentence(
        alphabet=tuple(data["alphabet"]),
        num_constraints=data["constraints"],
        num_alternatives=data["alternatives"],
        theta_forall=frozenset(
            two_type_from_tags(tags) for tags in data["theta_forall"]
        ),
        theta_exists=tuple(
            ((e["a"], e["b"], e["c"]), two_type_from_tags(e["type"]))
            for e in data["theta_exists"]
        ),
        epsilon_true=data["epsilon"],
        substitution=tuple(sorted(data["substitution"].items())),
    )


def sentence_to_json(nf: NormalFormSentence) -> str:
    return json.dumps(sentence_to_json_dict(nf), ensure_ascii=False, indent=2)


def sentence_from_json(text: str) -> NormalFormSentence:
    return sentence_from_json_dict(json.loads(text))


def gamma_string_to_json_dict(
    nf: NormalFormSentence, w: tuple[GammaLetter, ...]
) -> list:
    return [
        {
            "layer": g.layer,
            "tasks": {str(tid): mark for tid, mark in g.tasks.marks},
        }
        for g in w
    ]


def gamma_string_from_json_dict(data: list) -> tuple[GammaLetter, ...]:
    return tuple(
        GammaLetter(
            entry["layer"],
            TaskSet.of({int(tid): mark for tid, mark in entry["tasks"].items()}),
        )
        for entry in data
    )
