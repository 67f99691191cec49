"""Data words and a brute-force model checker for two-variable logic.

A data word is a finite linearly ordered sequence of letters in which every
position additionally carries a *data value*: the rank of its class under a
total preorder.  Values are kept normalized (1..maxval with every rank
inhabited), which makes the preorder, its induced successor, and trimming
direct to compute.

The formula AST covers two-variable first-order logic over the vocabulary
{≤₁, ≲₂, S₂, =, letters}; ``model_check`` evaluates closed formulas by
exhaustive quantifier expansion and serves as the ground-truth oracle for
everything built on top.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Union

Var = str  # "x" or "y"


class FreeVariable(Exception):
    """model_check was handed a formula with a free variable."""


@dataclass(frozen=True)
class DataWord:
    letters: tuple[str, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.letters) != len(self.values):
            raise ValueError("letters and values must have equal length")
        if self.values:
            top = max(self.values)
            if set(self.values) != set(range(1, top + 1)):
                raise ValueError(f"values {self.values} are not normalized")

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def maxval(self) -> int:
        return max(self.values) if self.values else 0

    def letter(self, pos: int) -> str:
        return self.letters[pos - 1]

    def value(self, pos: int) -> int:
        return self.values[pos - 1]


EMPTY_DATA_WORD = DataWord((), ())


def string_projection(d: DataWord) -> tuple[str, ...]:
    """The letter sequence in position order; empty for the empty structure."""
    return d.letters


def trim(d: DataWord) -> DataWord:
    """Substructure induced by dropping all positions of maximal value."""
    if not d.values:
        return d
    top = d.maxval
    kept = [(a, v) for a, v in zip(d.letters, d.values) if v != top]
    return DataWord(tuple(a for a, _ in kept), tuple(v for _, v in kept))


# --- formulas -----------------------------------------------------------------


@dataclass(frozen=True)
class Le1:
    a: Var
    b: Var


@dataclass(frozen=True)
class Le2:
    a: Var
    b: Var


@dataclass(frozen=True)
class S2:
    a: Var
    b: Var


@dataclass(frozen=True)
class Eq:
    a: Var
    b: Var


@dataclass(frozen=True)
class LetterAtom:
    symbol: str
    var: Var


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]

    def __init__(self, *parts: "Formula"):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]

    def __init__(self, *parts: "Formula"):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


Formula = Union[
    Le1, Le2, S2, Eq, LetterAtom, Not, And, Or, Implies, Forall, Exists, Top, Bottom
]

TRUE = Top()
FALSE = Bottom()


def lt1(a: Var, b: Var) -> Formula:
    """Strict position order, a <₁ b."""
    return Not(Le1(b, a))


def lt2(a: Var, b: Var) -> Formula:
    """Strictly smaller data value, a ⋨₂ b."""
    return Not(Le2(b, a))


def sim2(a: Var, b: Var) -> Formula:
    """Same data value, a ∼₂ b."""
    return And(Le2(a, b), Le2(b, a))


def free_variables(f: Formula, bound: frozenset = frozenset()) -> set[Var]:
    if isinstance(f, (Le1, Le2, S2, Eq)):
        return {v for v in (f.a, f.b) if v not in bound}
    if isinstance(f, LetterAtom):
        return {f.var} - bound
    if isinstance(f, Not):
        return free_variables(f.sub, bound)
    if isinstance(f, (And, Or)):
        out: set[Var] = set()
        for p in f.parts:
            out |= free_variables(p, bound)
        return out
    if isinstance(f, Implies):
        return free_variables(f.left, bound) | free_variables(f.right, bound)
    if isinstance(f, (Forall, Exists)):
        return free_variables(f.body, bound | {f.var})
    return set()


def _eval(d: DataWord, f: Formula, env: dict[Var, int]) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Le1):
        return env[f.a] <= env[f.b]
    if isinstance(f, Le2):
        return d.value(env[f.a]) <= d.value(env[f.b])
    if isinstance(f, S2):
        return d.value(env[f.b]) == d.value(env[f.a]) + 1
    if isinstance(f, Eq):
        return env[f.a] == env[f.b]
    if isinstance(f, LetterAtom):
        return d.letter(env[f.var]) == f.symbol
    if isinstance(f, Not):
        return not _eval(d, f.sub, env)
    if isinstance(f, And):
        return all(_eval(d, p, env) for p in f.parts)
    if isinstance(f, Or):
        return any(_eval(d, p, env) for p in f.parts)
    if isinstance(f, Implies):
        return (not _eval(d, f.left, env)) or _eval(d, f.right, env)
    if isinstance(f, Forall):
        return all(
            _eval(d, f.body, {**env, f.var: p}) for p in range(1, len(d) + 1)
        )
    if isinstance(f, Exists):
        return any(
            _eval(d, f.body, {**env, f.var: p}) for p in range(1, len(d) + 1)
        )
    raise TypeError(f"not a formula: {f!r}")


def model_check(d: DataWord, f: Formula) -> bool:
    """Truth of a closed formula by exhaustive quantifier expansion."""
    free = free_variables(f)
    if free:
        raise FreeVariable(f"free variables {sorted(free)}")
    return _eval(d, f, {})


def model_check_with(d: DataWord, f: Formula, env: dict[Var, int]) -> bool:
    """Evaluate with an explicit assignment for the free variables."""
    missing = free_variables(f) - set(env)
    if missing:
        raise FreeVariable(f"unassigned variables {sorted(missing)}")
    return _eval(d, f, dict(env))


# --- enumeration --------------------------------------------------------------


def normalized_valuations(n: int) -> Iterator[tuple[int, ...]]:
    """All value tuples of length n that are surjective onto an initial segment."""
    if n == 0:
        yield ()
        return
    for vals in product(*(range(1, n + 1) for _ in range(n))):
        top = max(vals)
        if set(vals) == set(range(1, top + 1)):
            yield vals


def enumerate_datawords(
    alphabet: Iterable[str], max_n: int
) -> Iterator[DataWord]:
    """All data words with at most max_n positions, values normalized."""
    letters = sorted(alphabet)
    for n in range(max_n + 1):
        for ls in product(letters, repeat=n):
            for vals in normalized_valuations(n):
                yield DataWord(ls, vals)


# --- JSON ---------------------------------------------------------------------


def dataword_to_json_dict(d: DataWord) -> dict:
    return {"letters": list(d.letters), "values": list(d.values)}


def dataword_from_json_dict(data: dict) -> DataWord:
    return DataWord(tuple(data["letters"]), tuple(data["values"]))


def dataword_to_json(d: DataWord) -> str:
    return json.dumps(dataword_to_json_dict(d), ensure_ascii=False)


def dataword_from_json(text: str) -> DataWord:
    return dataword_from_json_dict(json.loads(text))
