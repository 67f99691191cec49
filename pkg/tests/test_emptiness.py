import random

import pytest

from pia.core import LEFT_END, MoveSpec, RIGHT_END, accepts, enumerate_accepted, make_pia
from pia.emptiness import (
    Arrangement,
    UnplacedBoundary,
    arrangement_update,
    is_empty,
    witness,
)
from pia.fixtures import dyck, empty_language, equal_counts_abc
from pia.oracles import random_pia


def test_first_pebble_single_slot():
    got = arrangement_update(Arrangement.empty(), MoveSpec(1, LEFT_END, RIGHT_END))
    assert got == {Arrangement((1,))}


def test_insert_between_two_pebbles():
    a = Arrangement((1, 2))
    got = arrangement_update(a, MoveSpec(3, 1, 2))
    assert got == {Arrangement((1, 3, 2))}


def test_empty_interval_gives_no_arrangements():
    a = Arrangement((2, 1))  # pebble 1 sits right of pebble 2
    assert arrangement_update(a, MoveSpec(3, 1, 2)) == set()


def test_unplaced_boundary_raises():
    with pytest.raises(UnplacedBoundary):
        arrangement_update(Arrangement.empty(), MoveSpec(1, 2, RIGHT_END))


def test_replacing_pebble_removes_old_slot():
    a = Arrangement((2, 1))
    got = arrangement_update(a, MoveSpec(2, 2, 1))
    # Pebble 2 re-placed strictly between its old position and pebble 1.
    assert got == {Arrangement((2, 1))}


def test_move_between_outer_pebbles_enumerates_gaps():
    a = Arrangement((1, 2, 3))
    got = arrangement_update(a, MoveSpec(4, LEFT_END, RIGHT_END))
    assert got == {
        Arrangement((4, 1, 2, 3)),
        Arrangement((1, 4, 2, 3)),
        Arrangement((1, 2, 4, 3)),
        Arrangement((1, 2, 3, 4)),
    }


def test_dyck_nonempty_with_epsilon_witness():
    assert not is_empty(dyck())
    assert witness(dyck()) == ()


def test_abc_witness_is_separators_only():
    w = witness(equal_counts_abc())
    assert w == ("$", "#")
    assert accepts(equal_counts_abc(), w)


def test_no_accepting_state_means_empty():
    assert is_empty(empty_language())
    assert witness(empty_language()) is None


def test_unreachable_accepting_state_is_empty():
    pia = make_pia(["a"], 1, ["q0", "q1"], "q0", ["q1"], [])
    assert is_empty(pia)


def test_random_corpus_agrees_with_enumeration():
    rng = random.Random(99)
    checked = 0
    for _ in range(120):
        pia = random_pia(rng)
        empt = is_empty(pia)
        w = witness(pia)
        assert empt == (w is None)
        if w is not None:
            assert accepts(pia, w)
        if w is None or len(w) <= 6:
            assert empt == (enumerate_accepted(pia, 6) == set()), pia
            checked += 1
    assert checked >= 80
