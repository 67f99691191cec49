"""Ready-made automata and logic fixtures used by tests, docs, and the CLI.

The four bundled automata showcase the expressive range of the model: a
context-free language (well-nested brackets), a non-context-free one
(independently nested bracket pairs), and two counting languages.

The logic fixtures bundle a small worked sentence (projection language
ξ1(ξ1+ξ2)*ξ2 + ε) with its six-element companion data word, plus three
deliberately simple sentences: an unsatisfiable one, an empty-model-only
one, and two that force several value classes or class sizes.
"""

from __future__ import annotations

from .core import LEFT_END, RIGHT_END, Move, Pia, Silent, make_pia
from .datawords import And, DataWord, Implies, LetterAtom, sim2
from .logic import (
    NormalFormSentence,
    TwoType,
    WitnessTypeSet,
    all_two_types,
    expand_to_two_types,
)


def dyck() -> Pia:
    """Well-nested brackets over [ and ], one pebble.

    Repeatedly reads a [ anywhere, then a ] strictly to its right; a word is
    accepted iff every prefix has at least as many [ as ] and counts match.
    """
    return make_pia(
        alphabet=["[", "]"],
        pebbles=1,
        states=["q[", "q]"],
        initial="q]",
        accepting=["q]"],
        transitions=[
            Move("q]", 1, LEFT_END, RIGHT_END, "[", "q["),
            Move("q[", 1, 1, RIGHT_END, "]", "q]"),
        ],
    )


def independent_brackets() -> Pia:
    """Two bracket types, each well-nested with respect to itself only.

    Contains ( [ ) ] but not ( ]; not context-free.
    """
    return make_pia(
        alphabet=["(", ")", "[", "]"],
        pebbles=1,
        states=["q0", "q(", "q["],
        initial="q0",
        accepting=["q0"],
        transitions=[
            Move("q0", 1, LEFT_END, RIGHT_END, "(", "q("),
            Move("q(", 1, 1, RIGHT_END, ")", "q0"),
            Move("q0", 1, LEFT_END, RIGHT_END, "[", "q["),
            Move("q[", 1, 1, RIGHT_END, "]", "q0"),
        ],
    )


def equal_counts_abc() -> Pia:
    """{ a^n $ b^n # c^n : n >= 0 }, three pebbles.

    Pebbles 1 and 2 mark the separators; pebble 3 then cycles reading one a
    left of $, one b between $ and #, and one c right of #.
    """
    return make_pia(
        alphabet=["a", "b", "c", "$", "#"],
        pebbles=3,
        states=["q0", "q1", "q2", "q3", "q4"],
        initial="q0",
        accepting=["q2"],
        transitions=[
            Move("q0", 1, LEFT_END, RIGHT_END, "$", "q1"),
            Move("q1", 2, 1, RIGHT_END, "#", "q2"),
            Move("q2", 3, LEFT_END, 1, "a", "q3"),
            Move("q3", 3, 1, 2, "b", "q4"),
            Move("q4", 3, 2, RIGHT_END, "c", "q2"),
        ],
    )


def copy_with_separator() -> Pia:
    """{ w $ w : w over {0,1}, w nonempty }, three pebbles.

    Pebble 1 marks the $; pebbles 2 and 3 sweep the two copies left to
    right in lockstep, reading equal letters.
    """
    transitions = [Move("q0", 1, LEFT_END, RIGHT_END, "$", "q1")]
    for x in "01":
        # First matched pair: anywhere left of $ / anywhere right of $.
        transitions.append(Move("q1", 2, LEFT_END, 1, x, f"qf{x}"))
        transitions.append(Move(f"qf{x}", 3, 1, RIGHT_END, x, "q2"))
        # Later pairs: right of pebble 2 but left of $ / right of pebble 3.
        transitions.append(Move("q2", 2, 2, 1, x, f"qn{x}"))
        transitions.append(Move(f"qn{x}", 3, 3, RIGHT_END, x, "q2"))
    return make_pia(
        alphabet=["0", "1", "$"],
        pebbles=3,
        states=["q0", "q1", "qf0", "qf1", "qn0", "qn1", "q2"],
        initial="q0",
        accepting=["q2"],
        transitions=transitions,
    )


def empty_language() -> Pia:
    """A one-pebble automaton accepting nothing."""
    return make_pia(["a"], 1, ["q0"], "q0", [], [])


def epsilon_only() -> Pia:
    """A one-pebble automaton accepting exactly the empty word."""
    return make_pia(["a"], 1, ["q0"], "q0", ["q0"], [])


def single_word(word: tuple[str, ...], alphabet=None) -> Pia:
    """A one-pebble automaton accepting exactly the given word."""
    letters = sorted(set(word) if alphabet is None else alphabet)
    states = [f"q{i}" for i in range(len(word) + 1)]
    transitions = []
    for i, x in enumerate(word):
        left = LEFT_END if i == 0 else 1
        transitions.append(Move(f"q{i}", 1, left, RIGHT_END, x, f"q{i + 1}"))
    return make_pia(
        letters or ["a"], 1, states, "q0", [states[-1]], transitions
    )


# --- logic fixtures -----------------------------------------------------------

XI1, XI2 = "ξ1", "ξ2"


def _t(xl, yl, x_first, le2_xy, le2_yx, s2_xy, s2_yx) -> TwoType:
    return TwoType(xl, yl, x_first, le2_xy, le2_yx, s2_xy, s2_yx)


def first_last_sentence() -> NormalFormSentence:
    """Satisfied by the empty word and by words starting with ξ1, ending
    with ξ2, whose ξ2-elements form exactly the top value class.

    Universal part: any two ξ2-elements share a value.  Existential part:
    each ξ1-element needs a ξ2 strictly above it (successor or not) to its
    right; each ξ2-element needs a ξ1 strictly below it to its left.
    Projection language ξ1(ξ1+ξ2)*ξ2 + ε.
    """
    theta1 = _t(XI1, XI2, True, True, False, True, False)
    theta3 = _t(XI1, XI2, True, True, False, False, False)
    theta2 = _t(XI2, XI1, False, False, True, False, True)
    theta4 = _t(XI2, XI1, False, False, True, False, False)
    chi = Implies(
        And(LetterAtom(XI2, "x"), LetterAtom(XI2, "y")), sim2("x", "y")
    )
    return NormalFormSentence(
        alphabet=(XI1, XI2),
        num_constraints=1,
        num_alternatives=2,
        theta_forall=expand_to_two_types(chi, (XI1, XI2)),
        theta_exists=(
            ((1, 1, 1), theta1),
            ((1, 1, 2), theta3),
            ((2, 1, 1), theta2),
            ((2, 1, 2), theta4),
        ),
        epsilon_true=True,
        substitution=((XI1, XI1), (XI2, XI2)),
    )


def first_last_data_word() -> DataWord:
    """Six elements: letters ξ1 ξ1 ξ1 ξ2 ξ1 ξ2, the two ξ2 on top."""
    return DataWord(
        (XI1, XI1, XI1, XI2, XI1, XI2),
        (2, 1, 4, 5, 3, 5),
    )


def first_last_choice(nf: NormalFormSentence) -> tuple[WitnessTypeSet, ...]:
    """Witness type sets for the companion data word: θ3 for the first three
    ξ1-elements and the fifth, θ1 for the third, θ2/θ4 for the ξ2-elements."""
    exists = nf.exists_map()
    omega = {
        "theta1": WitnessTypeSet(1, frozenset([exists[(1, 1, 1)]])),
        "theta3": WitnessTypeSet(1, frozenset([exists[(1, 1, 2)]])),
        "theta2": WitnessTypeSet(2, frozenset([exists[(2, 1, 1)]])),
        "theta4": WitnessTypeSet(2, frozenset([exists[(2, 1, 2)]])),
    }
    return (
        omega["theta3"],  # a
        omega["theta3"],  # b
        omega["theta1"],  # c
        omega["theta2"],  # d
        omega["theta3"],  # e
        omega["theta4"],  # f
    )


def unsat_pair_sentence() -> NormalFormSentence:
    """Unsatisfiable: a nonempty model is required, every ξ1-element needs a
    partner, but no pair of elements is allowed at all."""
    theta = _t(XI1, XI1, True, True, True, False, False)
    return NormalFormSentence(
        alphabet=(XI1,),
        num_constraints=1,
        num_alternatives=1,
        theta_forall=frozenset(),
        theta_exists=(((1, 1, 1), theta),),
        epsilon_true=False,
        substitution=((XI1, XI1),),
    )


def epsilon_only_sentence() -> NormalFormSentence:
    """Only the empty structure: as above but the empty model is allowed."""
    theta = _t(XI1, XI1, True, True, True, False, False)
    return NormalFormSentence(
        alphabet=(XI1,),
        num_constraints=1,
        num_alternatives=1,
        theta_forall=frozenset(),
        theta_exists=(((1, 1, 1), theta),),
        epsilon_true=True,
        substitution=((XI1, XI1),),
    )


def two_class_sentence() -> NormalFormSentence:
    """Forces at least two value classes: every element needs a value
    successor to its right or a value predecessor to its left.
    Projection language { ξ1^n : n >= 2 }."""
    succ_right = _t(XI1, XI1, True, True, False, True, False)
    pred_left = _t(XI1, XI1, False, False, True, False, True)
    return NormalFormSentence(
        alphabet=(XI1,),
        num_constraints=1,
        num_alternatives=2,
        theta_forall=frozenset(all_two_types((XI1,))),
        theta_exists=(((1, 1, 1), succ_right), ((1, 1, 2), pred_left)),
        epsilon_true=False,
        substitution=((XI1, XI1),),
    )


def same_class_pair_sentence() -> NormalFormSentence:
    """Forces classes of size at least two: every element needs an
    equal-value partner on either side.  Projection language { ξ1^n : n >= 2 }."""
    right = _t(XI1, XI1, True, True, True, False, False)
    left = _t(XI1, XI1, False, True, True, False, False)
    return NormalFormSentence(
        alphabet=(XI1,),
        num_constraints=1,
        num_alternatives=2,
        theta_forall=frozenset(all_two_types((XI1,))),
        theta_exists=(((1, 1, 1), right), ((1, 1, 2), left)),
        epsilon_true=False,
        substitution=((XI1, XI1),),
    )


def first_last_regex(word: tuple[str, ...]) -> bool:
    """Membership in ξ1(ξ1+ξ2)*ξ2 + ε, the worked sentence's language."""
    if not word:
        return True
    return word[0] == XI1 and word[-1] == XI2 and set(word) <= {XI1, XI2}
