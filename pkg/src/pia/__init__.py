"""Pebble-intervals automata and a two-variable-logic satisfiability decider.

The package splits into an automaton half (core model, emptiness, closure
constructions, NFA bridge) and a logic half (data words, normal-form
sentences, extremal strings, and the lazy sentence automaton).
"""

from .core import (
    AlphabetMismatch,
    Configuration,
    IllegalStep,
    LEFT_END,
    Move,
    MoveSpec,
    PebbleAssignment,
    Pia,
    PiaError,
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
from .emptiness import Arrangement, UnplacedBoundary, arrangement_update, is_empty, witness
from .closure import PartialMap, concat, shuffle, shuffle_star, star, substitute, union
from .regular import (
    Nfa,
    NfaTransition,
    NotUnidirectional,
    make_nfa,
    nfa_from_json,
    nfa_to_json,
    nfa_to_pia,
    pia_to_nfa,
)
from .datawords import (
    DataWord,
    FreeVariable,
    enumerate_datawords,
    model_check,
    string_projection,
    trim,
)
from .logic import (
    GammaLetter,
    NeitherTop,
    NormalFormSentence,
    TaskSet,
    TwoType,
    WitnessTypeSet,
    expand_to_two_types,
    is_perfect_string,
    perf,
    perf_two_type,
    sentence_from_json,
    sentence_to_json,
    witness_type_sets,
)
from .extremal import (
    NonMonotoneG,
    NotConsecutive,
    TaskWord,
    abst,
    consecutive,
    down,
    ext,
    extremal_positions,
    make_task_word,
    partial_embedding,
    rcon,
    trim_task_word,
)
from .automaton import (
    SentenceAutomaton,
    build_states_lazily,
    projection_member,
    satisfiable,
    successors,
)

__all__ = [name for name in dir() if not name.startswith("_")]
