import pytest

from pia.datawords import And, Implies, LetterAtom, TRUE, model_check_with
from pia.fixtures import (
    XI1,
    XI2,
    epsilon_only_sentence,
    first_last_sentence,
    same_class_pair_sentence,
    two_class_sentence,
    unsat_pair_sentence,
)
from pia.logic import (
    GammaLetter,
    NeitherTop,
    TaskSet,
    WitnessTypeSet,
    all_two_types,
    all_witness_type_sets,
    check_realizes,
    expand_to_two_types,
    gamma_letter_symbol,
    is_perfect_string,
    omega_of_task_set,
    pair_type,
    perf,
    perf_two_type,
    realize_two_type,
    realizing_task_sets,
    sentence_from_json,
    sentence_to_json,
    two_type_from_tags,
    two_type_to_tags,
    witness_type_sets,
)
from pia.datawords import enumerate_datawords


def two_letter_types():
    return all_two_types((XI1, XI2))


def test_consistent_type_count():
    # 2 letter choices each for x and y, 2 orders, 5 value patterns.
    assert len(two_letter_types()) == 40
    assert all(t.is_consistent() for t in two_letter_types())


def test_every_consistent_type_is_realizable():
    for t in two_letter_types():
        assert check_realizes(t), t


def test_realizing_word_stays_small():
    sizes = {len(realize_two_type(t)) for t in two_letter_types()}
    assert sizes == {2, 3}


def test_pair_type_round_trip():
    for t in two_letter_types():
        w = realize_two_type(t)
        p, q = (1, 2) if t.x_before_y else (2, 1)
        assert pair_type(w, p, q) == t


def test_swap_is_involution():
    for t in two_letter_types():
        assert t.swap().swap() == t


def test_expand_true_and_false():
    assert expand_to_two_types(TRUE, (XI1, XI2)) == frozenset(two_letter_types())
    from pia.datawords import FALSE

    assert expand_to_two_types(FALSE, (XI1, XI2)) == frozenset()


def test_expand_universal_constraint_of_bundled_sentence():
    nf = first_last_sentence()
    # Excluded: both letters ξ2 with distinct values (8 of 40 types).
    assert len(nf.theta_forall) == 32
    for t in two_letter_types():
        excluded = (
            t.x_letter == XI2
            and t.y_letter == XI2
            and not (t.le2_xy and t.le2_yx)
        )
        assert (t in nf.theta_forall) == (not excluded)


def test_witness_type_sets_of_bundled_sentence():
    nf = first_last_sentence()
    groups = witness_type_sets(nf)
    assert {a: len(g) for a, g in groups.items()} == {1: 2, 2: 2}
    assert len(all_witness_type_sets(nf)) == 4
    assert all(len(o.types) == 1 for o in all_witness_type_sets(nf))


def test_witness_type_set_counts_choice_functions():
    # One letter, two constraint indices, two alternatives: four choices.
    from pia.logic import NormalFormSentence, TwoType

    t1 = TwoType(XI1, XI1, True, True, True, False, False)
    t2 = TwoType(XI1, XI1, False, True, True, False, False)
    t3 = TwoType(XI1, XI1, True, True, False, True, False)
    t4 = TwoType(XI1, XI1, False, False, True, False, True)
    nf = NormalFormSentence(
        alphabet=(XI1,),
        num_constraints=2,
        num_alternatives=2,
        theta_forall=frozenset(all_two_types((XI1,))),
        theta_exists=(
            ((1, 1, 1), t1),
            ((1, 1, 2), t2),
            ((1, 2, 1), t3),
            ((1, 2, 2), t4),
        ),
        epsilon_true=True,
        substitution=((XI1, XI1),),
    )
    assert len(witness_type_sets(nf)[1]) == 4


def test_task_sets_are_the_eight_singletons():
    nf = first_last_sentence()
    sets = realizing_task_sets(nf)
    assert len(sets) == 8
    assert all(len(ts.marks) == 1 for ts in sets)
    marks = {(tid, mark) for ts in sets for tid, mark in ts.marks}
    assert marks == {(tid, m) for tid in range(4) for m in "PC"}


def test_omega_recovery_is_identity():
    nf = first_last_sentence()
    for ts in realizing_task_sets(nf):
        omega = omega_of_task_set(nf, ts)
        assert omega is not None
        assert frozenset(nf.theta_id(t) for t in omega.types) == ts.support


def test_perf_of_bundled_pair():
    nf = first_last_sentence()
    alpha = GammaLetter("2top", TaskSet.of({0: "C"}))
    beta = GammaLetter("1top", TaskSet.of({2: "C"}))
    formula = perf(nf, alpha, beta)
    # ξ1(x) ∧ ξ2(y) ∧ x <1 y ∧ x strictly below y ∧ S2(x, y),
    # verified against an explicit model.
    from pia.datawords import DataWord

    witness = DataWord((XI1, XI2), (1, 2))
    assert model_check_with(witness, formula, {"x": 1, "y": 2})
    t = perf_two_type(nf, alpha, beta)
    assert t == nf.existential_types[0]
    assert t.s2_xy and t.le2_xy and not t.le2_yx and t.x_before_y


def test_perf_both_top_forces_equal_values():
    nf = first_last_sentence()
    a = GammaLetter("1top", TaskSet.of({0: "C"}))
    b = GammaLetter("1top", TaskSet.of({2: "P"}))
    t = perf_two_type(nf, a, b)
    assert t.le2_xy and t.le2_yx and not t.s2_xy and not t.s2_yx


def test_perf_rest_layer_negates_successor():
    nf = first_last_sentence()
    a = GammaLetter("rest", TaskSet.of({1: "P"}))
    b = GammaLetter("1top", TaskSet.of({2: "C"}))
    t = perf_two_type(nf, a, b)
    assert not t.s2_xy and not t.s2_yx
    assert t.le2_xy and not t.le2_yx


def test_perf_requires_a_top_operand():
    nf = first_last_sentence()
    a = GammaLetter("rest", TaskSet.of({1: "P"}))
    with pytest.raises(NeitherTop):
        perf(nf, a, a)
    with pytest.raises(NeitherTop):
        perf_two_type(nf, a, a)


def test_perf_types_realizable_and_entail_perf():
    nf = first_last_sentence()
    letters = [
        GammaLetter(layer, ts)
        for layer in ("1top", "2top", "rest")
        for ts in realizing_task_sets(nf)
    ]
    for a in letters:
        for b in letters:
            if not (a.layer == "1top" or b.layer == "1top"):
                continue
            t = perf_two_type(nf, a, b)
            w = realize_two_type(t)
            assert w is not None
            p, q = (1, 2) if t.x_before_y else (2, 1)
            assert model_check_with(w, perf(nf, a, b), {"x": p, "y": q})


def test_gamma_letter_symbol():
    nf = first_last_sentence()
    assert gamma_letter_symbol(nf, GammaLetter("rest", TaskSet.of({1: "C"}))) == XI1
    assert gamma_letter_symbol(nf, GammaLetter("1top", TaskSet.of({3: "P"}))) == XI2


def test_perfectness_of_strings():
    nf = first_last_sentence()
    assert is_perfect_string((), nf)
    good = (
        GammaLetter("rest", TaskSet.of({1: "C"})),
        GammaLetter("1top", TaskSet.of({2: "C"})),
    )
    assert is_perfect_string(good, nf)
    # Two ξ2-letters in different layers have distinct values: forbidden.
    bad = (
        GammaLetter("2top", TaskSet.of({2: "C"})),
        GammaLetter("1top", TaskSet.of({3: "C"})),
    )
    assert not is_perfect_string(bad, nf)


def test_sentence_validation_and_semantics_agree():
    for nf in (
        first_last_sentence(),
        unsat_pair_sentence(),
        epsilon_only_sentence(),
        two_class_sentence(),
        same_class_pair_sentence(),
    ):
        assert nf.validate() == []
        formula = nf.to_formula()
        for d in enumerate_datawords(nf.alphabet, 3):
            from pia.datawords import model_check

            assert nf.satisfied_by(d) == model_check(d, formula), (nf, d)


def test_sentence_json_round_trip():
    for nf in (first_last_sentence(), two_class_sentence()):
        assert sentence_from_json(sentence_to_json(nf)) == nf


def test_two_type_tags_round_trip():
    for t in two_letter_types():
        assert two_type_from_tags(two_type_to_tags(t)) == t
