"""Independent reference implementations used by the differential test
suites and the ``pia oracle compare`` command.

Everything here is deliberately naive: direct predicates on words, set
combinators computed from word sets, and brute-force enumeration.  None of
it shares code with the constructions it checks.
"""

from __future__ import annotations

import random
from itertools import combinations, product
from typing import Callable, Iterable, Iterator

from .core import LEFT_END, RIGHT_END, Move, Pia, Silent, Word, make_pia
from .regular import Nfa, NfaTransition, make_nfa

# --- reference predicates for the bundled automata ---------------------------


def is_balanced(word: Word) -> bool:
    """Dyck predicate: every prefix has at least as many [ as ]."""
    depth = 0
    for x in word:
        depth += 1 if x == "[" else -1
        if depth < 0:
            return False
    return depth == 0


def is_independently_balanced(word: Word) -> bool:
    """Each bracket type balanced on its own, prefixes never negative."""
    round_open = square_open = 0
    for x in word:
        if x == "(":
            round_open += 1
        elif x == ")":
            round_open -= 1
        elif x == "[":
            square_open += 1
        else:
            square_open -= 1
        if round_open < 0 or square_open < 0:
            return False
    return round_open == 0 and square_open == 0


def equal_counts_words(max_len: int) -> set[Word]:
    """{ a^n $ b^n # c^n } up to the length bound."""
    out = set()
    n = 0
    while 3 * n + 2 <= max_len:
        out.add(("a",) * n + ("$",) + ("b",) * n + ("#",) + ("c",) * n)
        n += 1
    return out


def copy_words(max_len: int) -> set[Word]:
    """{ w $ w : w nonempty over 0/1 } up to the length bound."""
    out = set()
    k = 1
    while 2 * k + 1 <= max_len:
        for w in product("01", repeat=k):
            out.add(tuple(w) + ("$",) + tuple(w))
        k += 1
    return out


def words_upto(alphabet: Iterable[str], max_len: int) -> Iterator[Word]:
    letters = sorted(alphabet)
    for n in range(max_len + 1):
        yield from product(letters, repeat=n)


def language_of(predicate: Callable[[Word], bool], alphabet, max_len: int) -> set[Word]:
    return {w for w in words_upto(alphabet, max_len) if predicate(w)}


def balanced_words(max_len: int) -> set[Word]:
    """All Dyck words up to the bound, by depth-pruned recursion."""
    out: set[Word] = set()

    def grow(prefix: tuple, depth: int):
        if depth == 0:
            out.add(prefix)
        remaining = max_len - len(prefix)
        if depth < remaining:
            grow(prefix + ("[",), depth + 1)
        if depth > 0:
            grow(prefix + ("]",), depth - 1)

    grow((), 0)
    return out


def independently_balanced_words(max_len: int) -> set[Word]:
    out: set[Word] = set()

    def grow(prefix: tuple, d1: int, d2: int):
        if d1 == 0 and d2 == 0:
            out.add(prefix)
        remaining = max_len - len(prefix)
        if d1 + d2 < remaining:
            grow(prefix + ("(",), d1 + 1, d2)
            grow(prefix + ("[",), d1, d2 + 1)
        if d1 > 0:
            grow(prefix + (")",), d1 - 1, d2)
        if d2 > 0:
            grow(prefix + ("]",), d1, d2 - 1)

    grow((), 0, 0)
    return out


# --- definitional language combinators ----------------------------------------


def set_union(a: set[Word], b: set[Word]) -> set[Word]:
    return a | b


def set_concat(a: set[Word], b: set[Word], max_len: int) -> set[Word]:
    return {
        u + v for u in a for v in b if len(u) + len(v) <= max_len
    }


def set_star(a: set[Word], max_len: int) -> set[Word]:
    out = {()}
    frontier = {()}
    while frontier:
        nxt = set()
        for u in frontier:
            for v in a:
                w = u + v
                if len(w) <= max_len and w not in out:
                    out.add(w)
                    nxt.add(w)
        frontier = nxt
    return out


def word_shuffles(u: Word, v: Word) -> set[Word]:
    """All interleavings of u and v (positions of u chosen in the result)."""
    n = len(u) + len(v)
    out = set()
    for spots in combinations(range(n), len(u)):
        w: list = [None] * n
        for x, i in zip(u, spots):
            w[i] = x
        it = iter(v)
        for i in range(n):
            if w[i] is None:
                w[i] = next(it)
        out.add(tuple(w))
    return out


def set_shuffle(a: set[Word], b: set[Word], max_len: int) -> set[Word]:
    out = set()
    for u in a:
        for v in b:
            if len(u) + len(v) <= max_len:
                out |= word_shuffles(u, v)
    return out


def set_shuffle_star(a: set[Word], max_len: int) -> set[Word]:
    """Iterated shuffle with the empty word, to a fixpoint within the bound."""
    out = {()}
    frontier = {()}
    while frontier:
        nxt = set()
        for u in frontier:
            for v in a:
                if len(u) + len(v) > max_len:
                    continue
                for w in word_shuffles(u, v):
                    if w not in out:
                        out.add(w)
                        nxt.add(w)
        frontier = nxt
    return out


def set_substitute(a: set[Word], h: dict[str, str]) -> set[Word]:
    return {tuple(h[x] for x in w) for w in a}


# --- random corpora -------------------------------------------------------------


def random_pia(
    rng: random.Random,
    max_states: int = 5,
    max_pebbles: int = 3,
    alphabet: tuple[str, ...] = ("a", "b"),
    max_transitions: int = 6,
) -> Pia:
    n_states = rng.randint(1, max_states)
    pebbles = rng.randint(1, max_pebbles)
    states = [f"q{i}" for i in range(n_states)]
    transitions = []
    for _ in range(rng.randint(1, max_transitions)):
        src, dst = rng.choice(states), rng.choice(states)
        if rng.random() < 0.2:
            transitions.append(Silent(src, dst))
            continue
        k = rng.randint(1, pebbles)
        left = rng.choice([LEFT_END] + list(range(1, pebbles + 1)))
        right = rng.choice([RIGHT_END] + list(range(1, pebbles + 1)))
        if left == right:
            right = RIGHT_END
        transitions.append(Move(src, k, left, right, rng.choice(alphabet), dst))
    accepting = [q for q in states if rng.random() < 0.5]
    if not accepting and rng.random() < 0.7:
        accepting = [rng.choice(states)]
    return make_pia(alphabet, pebbles, states, "q0", accepting, transitions)


def random_nfa(
    rng: random.Random,
    max_states: int = 5,
    alphabet: tuple[str, ...] = ("a", "b"),
    max_transitions: int = 8,
) -> Nfa:
    n_states = rng.randint(1, max_states)
    states = [f"n{i}" for i in range(n_states)]
    transitions = []
    for _ in range(rng.randint(1, max_transitions)):
        src, dst = rng.choice(states), rng.choice(states)
        letter = None if rng.random() < 0.15 else rng.choice(alphabet)
        transitions.append(NfaTransition(src, letter, dst))
    accepting = [q for q in states if rng.random() < 0.5]
    if not accepting and rng.random() < 0.7:
        accepting = [rng.choice(states)]
    return make_nfa(alphabet, states, "n0", accepting, transitions)
