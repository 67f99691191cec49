import pytest

from pia.datawords import (
    And,
    DataWord,
    EMPTY_DATA_WORD,
    Exists,
    Forall,
    FreeVariable,
    LetterAtom,
    Le1,
    Le2,
    Not,
    S2,
    TRUE,
    dataword_from_json,
    dataword_to_json,
    enumerate_datawords,
    model_check,
    model_check_with,
    string_projection,
    trim,
)
from pia.fixtures import first_last_data_word


def test_projection_of_bundled_word():
    assert string_projection(first_last_data_word()) == (
        "ξ1", "ξ1", "ξ1", "ξ2", "ξ1", "ξ2",
    )


def test_projection_empty_and_single():
    assert string_projection(EMPTY_DATA_WORD) == ()
    assert string_projection(DataWord(("a",), (1,))) == ("a",)


def test_values_must_be_normalized():
    with pytest.raises(ValueError):
        DataWord(("a", "a"), (1, 3))


def test_successor_facts_on_bundled_word():
    d = first_last_data_word()
    # elements a..f sit at positions 1..6
    assert model_check_with(d, S2("x", "y"), {"x": 1, "y": 5})
    assert model_check_with(
        d, And(Not(S2("x", "y")), Le2("x", "y")), {"x": 2, "y": 5}
    )


def test_trim_removes_top_class():
    d = first_last_data_word()
    t = trim(d)
    assert string_projection(t) == ("ξ1", "ξ1", "ξ1", "ξ1")
    assert t.values == (2, 1, 4, 3)


def test_trim_single_class_gives_empty():
    assert trim(DataWord(("a", "b"), (1, 1))) == EMPTY_DATA_WORD


def test_double_trim_drops_two_classes():
    for d in enumerate_datawords("ab", 4):
        if d.maxval >= 2:
            assert trim(trim(d)).maxval == d.maxval - 2


def test_model_check_rejects_free_variables():
    with pytest.raises(FreeVariable):
        model_check(EMPTY_DATA_WORD, Le1("x", "y"))


def test_vacuous_universal_on_empty_word():
    f = Forall("x", Forall("y", Not(Le1("x", "y"))))
    assert model_check(EMPTY_DATA_WORD, f)
    assert not model_check(EMPTY_DATA_WORD, Exists("x", TRUE))


def test_sim2_is_conjunction_of_both_orders():
    d = DataWord(("a", "a", "a"), (1, 2, 1))
    both = And(Le2("x", "y"), Le2("y", "x"))
    assert model_check_with(d, both, {"x": 1, "y": 3})
    assert not model_check_with(d, both, {"x": 1, "y": 2})


def test_successor_matches_definition_on_small_words():
    # S2(p, q) iff p below q with no class strictly between.
    for d in enumerate_datawords("a", 4):
        n = len(d)
        for p in range(1, n + 1):
            for q in range(1, n + 1):
                expected = d.value(p) <= d.value(q) and not any(
                    d.value(p) < d.value(r) < d.value(q)
                    for r in range(1, n + 1)
                ) and d.value(p) != d.value(q)
                assert model_check_with(d, S2("x", "y"), {"x": p, "y": q}) == expected


def test_projection_commutes_with_trim():
    for d in enumerate_datawords("ab", 4):
        top = d.maxval
        expected = tuple(
            a for a, v in zip(d.letters, d.values) if v != top
        )
        assert string_projection(trim(d)) == expected


def test_enumeration_counts():
    assert list(enumerate_datawords("a", 0)) == [EMPTY_DATA_WORD]
    assert len([d for d in enumerate_datawords("a", 1) if len(d) == 1]) == 1
    assert len([d for d in enumerate_datawords("a", 2) if len(d) == 2]) == 3


def test_letter_atom_semantics():
    d = DataWord(("a", "b"), (1, 1))
    assert model_check(d, Exists("x", LetterAtom("b", "x")))
    assert not model_check(d, Forall("x", LetterAtom("a", "x")))


def test_dataword_json_round_trip():
    d = first_last_data_word()
    assert dataword_from_json(dataword_to_json(d)) == d
