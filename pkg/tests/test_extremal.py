import random

import pytest

from pia.datawords import enumerate_datawords
from pia.extremal import (
    NonMonotoneG,
    NotConsecutive,
    abst,
    consecutive,
    down,
    ext,
    extremal_positions,
    make_task_word,
    partial_embedding,
    rcon,
    task_word_choices,
    trim_task_word,
)
from pia.fixtures import (
    first_last_choice,
    first_last_data_word,
    first_last_sentence,
)
from pia.logic import GammaLetter, TaskSet, WitnessTypeSet, realizing_task_sets


@pytest.fixture(scope="module")
def nf():
    return first_last_sentence()


@pytest.fixture(scope="module")
def bundle(nf):
    d = first_last_data_word()
    t = make_task_word(d, nf, first_last_choice(nf))
    t1 = trim_task_word(t, nf)
    return d, t, t1


def letters(s):
    return [(g.layer, dict(g.tasks.marks)) for g in s]


def test_task_word_marks_all_completed(nf, bundle):
    _, t, _ = bundle
    assert t.is_completed(nf)
    # tid 0 = successor witness for ξ1, tid 1 = far witness for ξ1,
    # tid 2/3 = the ξ2 witnesses; interpretation per element a..f.
    assert [ts.marks for ts in t.task_sets] == [
        ((1, "C"),), ((1, "C"),), ((0, "C"),),
        ((2, "C"),), ((1, "C"),), ((3, "C"),),
    ]


def test_wrong_letter_choice_returns_none(nf):
    d = first_last_data_word()
    choice = list(first_last_choice(nf))
    choice[0], choice[3] = choice[3], choice[0]  # ξ2-set on a ξ1 element
    assert make_task_word(d, nf, tuple(choice)) is None


def test_empty_task_word_completed_iff_epsilon(nf):
    from pia.datawords import EMPTY_DATA_WORD

    t = make_task_word(EMPTY_DATA_WORD, nf, ())
    assert t is not None
    assert t.is_completed(nf) == nf.epsilon_true


def test_trimming_turns_completions_into_promises(nf, bundle):
    _, _, t1 = bundle
    assert [ts.marks for ts in t1.task_sets] == [
        ((1, "P"),), ((1, "P"),), ((0, "P"),), ((1, "P"),),
    ]


def test_trimming_is_deterministic(nf, bundle):
    _, t, _ = bundle
    assert trim_task_word(t, nf) == trim_task_word(t, nf)


def test_single_class_trims_to_empty(nf):
    from pia.datawords import DataWord

    d = DataWord(("ξ1", "ξ1"), (1, 1))
    groups = task_word_choices(d, nf)
    t = make_task_word(d, nf, groups[0])
    assert len(trim_task_word(t, nf)) == 0


def test_abstraction_layers(nf, bundle):
    _, t, t1 = bundle
    assert letters(abst(t)) == [
        ("rest", {1: "C"}), ("rest", {1: "C"}), ("2top", {0: "C"}),
        ("1top", {2: "C"}), ("rest", {1: "C"}), ("1top", {3: "C"}),
    ]
    assert letters(abst(t1)) == [
        ("rest", {1: "P"}), ("rest", {1: "P"}), ("1top", {0: "P"}),
        ("2top", {1: "P"}),
    ]


def test_single_class_abstraction_is_all_top(nf):
    from pia.datawords import DataWord

    d = DataWord(("ξ1",), (1,))
    t = make_task_word(d, nf, task_word_choices(d, nf)[0])
    assert [g.layer for g in abst(t)] == ["1top"]


def test_extremal_positions_of_bundled_strings(nf, bundle):
    _, t, t1 = bundle
    assert sorted(extremal_positions(abst(t), nf)) == [1, 3, 4, 5, 6]
    assert sorted(extremal_positions(abst(t1), nf)) == [1, 2, 3, 4]


def test_ext_is_idempotent_on_random_strings(nf):
    rng = random.Random(41)
    alphabet = [
        GammaLetter(layer, ts)
        for layer in ("1top", "2top", "rest")
        for ts in realizing_task_sets(nf)
    ]
    assert ext((), nf) == ()
    for _ in range(200):
        w = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 10)))
        s = ext(w, nf)
        assert ext(s, nf) == s
        assert len(s) <= 7 * len(nf.existential_types)


def test_down_shifts_layers(nf, bundle):
    _, _, t1 = bundle
    s1 = ext(abst(t1), nf)
    assert [g.layer for g in down(s1)] == ["rest", "rest", "2top", "rest"]
    assert down(()) == ()
    twice = down(down(s1))
    assert all(g.layer == "rest" for g in twice)


def test_rcon_reproduces_bundled_reconstruction(nf, bundle):
    _, t, t1 = bundle
    s, s1 = ext(abst(t), nf), ext(abst(t1), nf)
    r = (
        GammaLetter("1top", TaskSet.of({2: "P"})),
        GammaLetter("1top", TaskSet.of({3: "P"})),
    )
    built = rcon(r, (4, 6), s1, nf)
    assert built == abst(t)
    assert ext(built, nf) == s


def test_rcon_empty_r_never_upgrades(nf, bundle):
    _, _, t1 = bundle
    s1 = ext(abst(t1), nf)
    assert rcon((), (), s1, nf) == down(s1)


def test_rcon_rejects_nonmonotone_g(nf, bundle):
    _, _, t1 = bundle
    s1 = ext(abst(t1), nf)
    r = (
        GammaLetter("1top", TaskSet.of({2: "P"})),
        GammaLetter("1top", TaskSet.of({3: "P"})),
    )
    with pytest.raises(NonMonotoneG):
        rcon(r, (6, 4), s1, nf)
    with pytest.raises(NonMonotoneG):
        rcon(r, (4,), s1, nf)


def test_rcon_clause_two_matches_task_word_semantics(nf):
    # Hand-built instance: one promised ξ1 element plus a fresh ξ2 top to
    # its right; the syntactic upgrade must match the recomputed marks of
    # the corresponding extended data word.
    from pia.datawords import DataWord

    d0 = DataWord(("ξ1",), (1,))
    t0 = make_task_word(d0, nf, task_word_choices(d0, nf)[0])
    s0 = ext(abst(t0), nf)
    r = (GammaLetter("1top", TaskSet.of({2: "P"})),)
    built = rcon(r, (2,), s0, nf)
    d1 = DataWord(("ξ1", "ξ2"), (1, 2))
    choice = task_word_choices(d0, nf)[0] + (
        WitnessTypeSet(2, frozenset([nf.existential_types[2]])),
    )
    t1 = make_task_word(d1, nf, choice)
    assert built == abst(t1)


def test_consecutive_finds_bundled_witness(nf, bundle):
    _, t, t1 = bundle
    s, s1 = ext(abst(t), nf), ext(abst(t1), nf)
    result = consecutive(s1, s, nf)
    assert result is not None
    r, g = result
    assert [dict(x.tasks.marks) for x in r] == [{2: "P"}, {3: "P"}]
    assert ext(rcon(r, g, s1, nf), nf) == s


def test_consecutive_empty_pair(nf):
    assert consecutive((), (), nf) == ((), ())


def test_consecutive_rejects_non_extremal_input(nf):
    w = (
        GammaLetter("rest", TaskSet.of({1: "C"})),
        GammaLetter("rest", TaskSet.of({1: "C"})),
        GammaLetter("rest", TaskSet.of({1: "C"})),
    )
    assert ext(w, nf) != w
    with pytest.raises(ValueError):
        consecutive(w, w, nf)


def test_partial_embedding_of_bundled_pair(nf, bundle):
    _, t, t1 = bundle
    s, s1 = ext(abst(t), nf), ext(abst(t1), nf)
    r, g = consecutive(s1, s, nf)
    emb = partial_embedding(s1, s, r, g, nf)
    assert emb == {1: 1, 2: 3, 4: 4}
    # Layer correspondence: second-layer positions come from old tops.
    for src, dst in emb.items():
        if s[src - 1].layer == "2top":
            assert s1[dst - 1].layer == "1top"
        if s[src - 1].layer == "rest":
            assert s1[dst - 1].layer in ("2top", "rest")
    positions = [emb[k] for k in sorted(emb)]
    assert positions == sorted(positions)
    assert len(set(positions)) == len(positions)


def test_partial_embedding_rejects_wrong_witness(nf, bundle):
    _, t, t1 = bundle
    s, s1 = ext(abst(t), nf), ext(abst(t1), nf)
    r, _ = consecutive(s1, s, nf)
    with pytest.raises(NotConsecutive):
        partial_embedding(s1, s, r, (1, 2), nf)


def test_all_top_target_has_empty_embedding(nf):
    r = (
        GammaLetter("1top", TaskSet.of({1: "P"})),
        GammaLetter("1top", TaskSet.of({1: "P"})),
    )
    s1 = ext(rcon(r, (1, 2), (), nf), nf)
    assert all(g.is_top() for g in s1)
    assert partial_embedding((), s1, r, (1, 2), nf) == {}


def test_semantic_pairs_are_syntactically_consecutive(nf):
    # Small exhaustive slice; the full sweep runs in the acceptance suite.
    for d in enumerate_datawords(nf.alphabet, 3):
        if len(d) == 0:
            continue
        for choice in task_word_choices(d, nf):
            t = make_task_word(d, nf, choice)
            s1 = ext(abst(trim_task_word(t, nf)), nf)
            s = ext(abst(t), nf)
            assert consecutive(s1, s, nf) is not None, (d, choice)
