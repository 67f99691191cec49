import random

import pytest

from pia.core import (
    AlphabetMismatch,
    Configuration,
    IllegalStep,
    LEFT_END,
    Move,
    PebbleAssignment,
    RIGHT_END,
    Silent,
    accepts,
    enumerate_accepted,
    make_pia,
    parse_word,
    pia_from_json,
    pia_to_json,
    step,
    validate,
)
from pia.fixtures import (
    copy_with_separator,
    dyck,
    epsilon_only,
    equal_counts_abc,
    independent_brackets,
)
from pia.oracles import is_balanced, random_pia, words_upto


def naive_accepts(pia, word):
    """Reference search without memoization: per-path visited set only."""
    n = len(word)
    full = frozenset(range(1, n + 1))

    def run(cfg, on_path):
        if cfg.state in pia.accepting and cfg.read == full:
            return True
        for t in pia.transitions_from(cfg.state):
            if isinstance(t, Silent):
                nxt = Configuration(t.dst, cfg.assignment, cfg.read)
                if nxt not in on_path and run(nxt, on_path | {nxt}):
                    return True
            else:
                lo = cfg.assignment.extended(t.left, n)
                hi = cfg.assignment.extended(t.right, n)
                if lo is None or hi is None:
                    continue
                for pos in range(lo + 1, hi):
                    if pos in cfg.read or word[pos - 1] != t.letter:
                        continue
                    nxt = Configuration(
                        t.dst,
                        cfg.assignment.place(t.pebble, pos),
                        cfg.read | {pos},
                    )
                    if run(nxt, on_path | {nxt}):
                        return True
        return False

    start = Configuration.initial(pia)
    return run(start, frozenset([start]))


def test_validate_accepts_bundled_automata():
    for pia in (dyck(), independent_brackets(), equal_counts_abc(), copy_with_separator()):
        assert validate(pia) == []


def test_validate_reports_unknown_state():
    pia = make_pia(["a"], 1, ["q0"], "q0", [], [Silent("q0", "nowhere")])
    problems = validate(pia)
    assert len(problems) == 1
    assert "nowhere" in problems[0]


def test_move_spec_may_reuse_moved_pebble_as_bound():
    # Only i != j is constrained; k may equal i or j.
    pia = make_pia(
        ["a"], 1, ["q0"], "q0", ["q0"],
        [Move("q0", 1, 1, RIGHT_END, "a", "q0")],
    )
    assert validate(pia) == []


def test_validate_rejects_equal_bounds():
    pia = make_pia(
        ["a"], 2, ["q0"], "q0", [], [Move("q0", 1, 2, 2, "a", "q0")]
    )
    assert any("equal interval bounds" in p for p in validate(pia))


def test_step_first_move_on_dyck():
    d = dyck()
    cfg = Configuration.initial(d)
    t = next(
        t for t in d.transitions if isinstance(t, Move) and t.letter == "["
    )
    nxt = step(d, cfg, t, 1, ("[", "]"))
    assert nxt.state == "q["
    assert nxt.assignment.get(1) == 1
    assert nxt.read == {1}


def test_step_silent_changes_only_state():
    pia = make_pia(["a"], 1, ["q0", "q1"], "q0", [], [Silent("q0", "q1")])
    cfg = Configuration.initial(pia)
    nxt = step(pia, cfg, Silent("q0", "q1"), None, ("a",))
    assert nxt.state == "q1"
    assert nxt.assignment == cfg.assignment
    assert nxt.read == cfg.read


def test_step_rejects_reread():
    d = dyck()
    cfg = Configuration.initial(d)
    t = next(
        t for t in d.transitions if isinstance(t, Move) and t.letter == "["
    )
    word = ("[", "[", "]", "]")
    cfg = step(d, cfg, t, 1, word)
    back = next(
        t for t in d.transitions if isinstance(t, Move) and t.letter == "]"
    )
    cfg = step(d, cfg, back, 3, word)
    with pytest.raises(IllegalStep):
        step(d, cfg, t, 3, word)  # position 3 already read


def test_accepts_dyck_basics():
    d = dyck()
    assert accepts(d, parse_word("[ ]"))
    assert not accepts(d, parse_word("] ["))
    assert accepts(d, ())
    with pytest.raises(AlphabetMismatch):
        accepts(d, ("x",))


def test_accepts_epsilon_with_accepting_initial():
    assert accepts(epsilon_only(), ())


def test_abc_language():
    abc = equal_counts_abc()
    assert accepts(abc, tuple("aa$bb#cc"))
    assert not accepts(abc, tuple("aa$b#cc"))
    assert accepts(abc, tuple("$#"))


def test_enumerate_dyck_four():
    got = enumerate_accepted(dyck(), 4)
    assert got == {(), ("[", "]"), ("[", "]", "[", "]"), ("[", "[", "]", "]")}


def test_enumerate_zero_length():
    assert enumerate_accepted(epsilon_only(), 0) == {()}
    assert enumerate_accepted(dyck(), 0) == {()}


def test_enumerate_copy_language_three():
    got = enumerate_accepted(copy_with_separator(), 3)
    assert got == {("0", "$", "0"), ("1", "$", "1")}


def test_accepts_matches_naive_search():
    rng = random.Random(11)
    for _ in range(40):
        pia = random_pia(rng, max_states=4, max_pebbles=2, max_transitions=5)
        for word in words_upto(pia.alphabet, 4):
            assert accepts(pia, word) == naive_accepts(pia, word), (pia, word)


def test_accepts_invariant_under_state_renaming():
    rng = random.Random(5)
    for _ in range(20):
        pia = random_pia(rng)
        names = {q: f"r{idx}" for idx, q in enumerate(sorted(pia.states))}
        renamed = make_pia(
            pia.alphabet,
            pia.pebbles,
            names.values(),
            names[pia.initial],
            (names[q] for q in pia.accepting),
            [
                Silent(names[t.src], names[t.dst])
                if isinstance(t, Silent)
                else Move(
                    names[t.src], t.pebble, t.left, t.right, t.letter, names[t.dst]
                )
                for t in pia.transitions
            ],
        )
        for word in words_upto(pia.alphabet, 4):
            assert accepts(pia, word) == accepts(renamed, word)


def test_read_count_equals_move_count():
    # Walk random legal steps and compare |read| with the moves taken.
    rng = random.Random(23)
    d = dyck()
    word = tuple("[][[]]")
    for _ in range(30):
        cfg = Configuration.initial(d)
        moves = 0
        for _ in range(10):
            options = []
            for t in d.transitions_from(cfg.state):
                if isinstance(t, Silent):
                    options.append((t, None))
                else:
                    lo = cfg.assignment.extended(t.left, len(word))
                    hi = cfg.assignment.extended(t.right, len(word))
                    if lo is None or hi is None:
                        continue
                    for pos in range(lo + 1, hi):
                        if pos not in cfg.read and word[pos - 1] == t.letter:
                            options.append((t, pos))
            if not options:
                break
            t, pos = rng.choice(options)
            cfg = step(d, cfg, t, pos, word)
            if pos is not None:
                moves += 1
            assert len(cfg.read) == moves
            assert cfg.assignment.is_injective()


def test_json_round_trip():
    for pia in (dyck(), equal_counts_abc(), copy_with_separator()):
        again = pia_from_json(pia_to_json(pia))
        assert again == pia


def test_size_is_reported():
    d = dyck()
    assert d.size == len(d.transitions) + len(d.alphabet) + len(d.states)


def test_dyck_agrees_with_balance_checker_to_length_8():
    d = dyck()
    for word in words_upto(["[", "]"], 8):
        assert accepts(d, word) == is_balanced(word)


def test_pebble_assignment_extension():
    a = PebbleAssignment.empty(2).place(1, 3)
    assert a.extended(LEFT_END, 5) == 0
    assert a.extended(RIGHT_END, 5) == 6
    assert a.extended(1, 5) == 3
    assert a.extended(2, 5) is None
