import random

import pytest

from pia.core import LEFT_END, Move, RIGHT_END, Silent, accepts, validate
from pia.fixtures import dyck
from pia.oracles import random_nfa, words_upto
from pia.regular import (
    NfaTransition,
    NotUnidirectional,
    is_unidirectional,
    make_nfa,
    nfa_from_json,
    nfa_to_json,
    nfa_to_pia,
    pia_to_nfa,
)


def a_star_nfa():
    return make_nfa(
        ["a"], ["n0"], "n0", ["n0"], [NfaTransition("n0", "a", "n0")]
    )


def ab_star_nfa():
    return make_nfa(
        ["a", "b"],
        ["n0", "n1"],
        "n0",
        ["n0"],
        [NfaTransition("n0", "a", "n1"), NfaTransition("n1", "b", "n0")],
    )


def test_a_star_bridge():
    pia = nfa_to_pia(a_star_nfa())
    assert validate(pia) == []
    assert is_unidirectional(pia) is None
    for k in range(11):
        assert accepts(pia, ("a",) * k)


def test_empty_nfa_gives_empty_pia():
    nfa = make_nfa(["a"], ["n0"], "n0", [], [])
    pia = nfa_to_pia(nfa)
    from pia.emptiness import is_empty

    assert is_empty(pia)


def test_ab_star_round_trip():
    nfa = ab_star_nfa()
    pia = nfa_to_pia(nfa)
    back = pia_to_nfa(pia)
    for w in words_upto("ab", 10):
        assert nfa.accepts(w) == accepts(pia, w) == back.accepts(w)


def test_single_accepting_state_no_transitions():
    nfa = make_nfa(["a"], ["n0"], "n0", ["n0"], [])
    pia = nfa_to_pia(nfa)
    assert accepts(pia, ())
    assert not accepts(pia, ("a",))
    back = pia_to_nfa(pia)
    assert back.accepts(()) and not back.accepts(("a",))


def test_dyck_is_not_unidirectional():
    with pytest.raises(NotUnidirectional):
        pia_to_nfa(dyck())


def test_initial_with_incoming_gets_fresh_state():
    nfa = make_nfa(
        ["a"], ["n0"], "n0", ["n0"], [NfaTransition("n0", "a", "n0")]
    )
    pia = nfa_to_pia(nfa)
    assert len(pia.states) == len(nfa.states) + 1
    assert is_unidirectional(pia) is None
    for k in range(8):
        assert accepts(pia, ("a",) * k)


def test_round_trip_corpus_language_equality():
    rng = random.Random(2024)
    for trial in range(60):
        nfa = random_nfa(rng)
        pia = nfa_to_pia(nfa)
        assert validate(pia) == []
        assert is_unidirectional(pia) is None
        assert len(pia.states) in (len(nfa.states), len(nfa.states) + 1)
        back = pia_to_nfa(pia)
        assert len(back.states) == len(pia.states)
        for w in words_upto(nfa.alphabet, 6):
            a = nfa.accepts(w)
            assert a == accepts(pia, w), (trial, w)
            assert a == back.accepts(w), (trial, w)


def test_infeasible_initial_moves_are_dropped():
    # A move from the initial state anchored on the unplaced pebble can
    # never fire; translating it would add words to the NFA.
    pia_states = ["q0", "q1"]
    pia = make_nfa  # silence linters; build the automaton directly below
    from pia.core import make_pia

    p = make_pia(
        ["a"],
        1,
        pia_states,
        "q0",
        ["q1"],
        [
            Move("q0", 1, LEFT_END, RIGHT_END, "a", "q1"),
            Move("q0", 1, 1, RIGHT_END, "a", "q1"),
        ],
    )
    assert is_unidirectional(p) is None
    back = pia_to_nfa(p)
    for w in words_upto("a", 5):
        assert back.accepts(w) == accepts(p, w)


def test_nfa_json_round_trip():
    nfa = ab_star_nfa()
    assert nfa_from_json(nfa_to_json(nfa)) == nfa
