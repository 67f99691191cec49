"""Command-line surface: membership, emptiness, closure operations, the
NFA bridge, the sentence decision procedures, and the differential oracle
suites.

Exit codes: 0 for success / a positive answer, 1 for a negative answer,
2 for usage or input errors.  Words on the command line are
whitespace-separated letter tokens, so multi-character letters like "ξ1"
work.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import closure, core, emptiness, fixtures, oracles, regular
from .automaton import SentenceAutomaton
from .logic import sentence_from_json_dict


def _fail(message: str):
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(2)


def _load_pia(path: str) -> core.Pia:
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    pia = core.pia_from_json_dict(data)
    problems = core.validate(pia)
    if problems:
        _fail(f"invalid automaton {path}: " + "; ".join(problems))
    return pia


def _load_nfa(path: str) -> regular.Nfa:
    with open(path, encoding="utf-8") as f:
        return regular.nfa_from_json_dict(json.load(f))


def _load_sentence(path: str):
    with open(path, encoding="utf-8") as f:
        return sentence_from_json_dict(json.load(f))


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2)
        f.write("\n")


def cmd_check(args) -> int:
    pia = _load_pia(args.automaton)
    word = core.parse_word(args.word)
    try:
        ok = core.accepts(pia, word)
    except core.AlphabetMismatch as e:
        _fail(str(e))
    print("ACCEPT" if ok else "REJECT")
    return 0 if ok else 1


def cmd_enumerate(args) -> int:
    pia = _load_pia(args.automaton)
    for word in sorted(core.enumerate_accepted(pia, args.max_len)):
        print(" ".join(word) if word else "ε")
    return 0


def cmd_empty(args) -> int:
    pia = _load_pia(args.automaton)
    word = emptiness.witness(pia)
    if word is None:
        print("EMPTY")
        return 0
    print("NONEMPTY " + (" ".join(word) if word else "ε"))
    return 1


def cmd_witness(args) -> int:
    pia = _load_pia(args.automaton)
    word = emptiness.witness(pia)
    if word is None:
        print("EMPTY")
        return 1
    print(" ".join(word) if word else "ε")
    return 0


def cmd_op(args) -> int:
    operands = [_load_pia(path) for path in args.inputs]
    op = args.operation
    binary = {"union": closure.union, "concat": closure.concat, "shuffle": closure.shuffle}
    unary = {"star": closure.star, "shufflestar": closure.shuffle_star}
    if op in binary:
        if len(operands) != 2:
            _fail(f"{op} takes two automata")
        result = binary[op](*operands)
    elif op in unary:
        if len(operands) != 1:
            _fail(f"{op} takes one automaton")
        result = unary[op](operands[0])
    elif op == "subst":
        if len(operands) != 1 or not args.map:
            _fail("subst takes one automaton and --map entries")
        mapping = dict(entry.split("=", 1) for entry in args.map)
        result = closure.substitute(operands[0], mapping)
    else:
        _fail(f"unknown operation {op}")
    _write_json(args.output, core.pia_to_json_dict(result))
    print(f"wrote {args.output} ({len(result.states)} states, {result.pebbles} pebbles)")
    return 0


def cmd_nfa2pia(args) -> int:
    nfa = _load_nfa(args.input)
    _write_json(args.output, core.pia_to_json_dict(regular.nfa_to_pia(nfa)))
    print(f"wrote {args.output}")
    return 0


def cmd_pia2nfa(args) -> int:
    pia = _load_pia(args.input)
    try:
        nfa = regular.pia_to_nfa(pia)
    except regular.NotUnidirectional as e:
        _fail(f"not unidirectional: {e}")
    _write_json(args.output, regular.nfa_to_json_dict(nfa))
    print(f"wrote {args.output}")
    return 0


def cmd_fo2_sat(args) -> int:
    engine = SentenceAutomaton(_load_sentence(args.sentence))
    sat, word = engine.satisfiable()
    if sat:
        print("SAT " + (" ".join(word) if word else "ε"))
        return 0
    print("UNSAT")
    return 1


def cmd_fo2_member(args) -> int:
    engine = SentenceAutomaton(_load_sentence(args.sentence))
    ok = engine.projection_member(core.parse_word(args.word))
    print("ACCEPT" if ok else "REJECT")
    return 0 if ok else 1


def cmd_fo2_export(args) -> int:
    engine = SentenceAutomaton(_load_sentence(args.sentence))
    pia, complete = engine.export_pia(args.cap)
    _write_json(args.output, core.pia_to_json_dict(pia))
    if complete:
        print(f"wrote {args.output} ({len(pia.states)} states, complete)")
        return 0
    print(
        f"wrote {args.output} ({len(pia.states)} states, TRUNCATED at cap "
        f"{args.cap}; the lazy engine stays authoritative)",
        file=sys.stderr,
    )
    return 1


def _compare_closure(rng: random.Random, pairs: int, max_len: int) -> bool:
    ok = True
    for i in range(pairs):
        a = oracles.random_pia(rng, max_states=2, max_pebbles=1, max_transitions=3)
        b = oracles.random_pia(rng, max_states=2, max_pebbles=1, max_transitions=3)
        la = core.enumerate_accepted(a, max_len)
        lb = core.enumerate_accepted(b, max_len)
        checks = [
            ("union", closure.union(a, b), oracles.set_union(la, lb)),
            ("concat", closure.concat(a, b), oracles.set_concat(la, lb, max_len)),
            ("shuffle", closure.shuffle(a, b), oracles.set_shuffle(la, lb, max_len)),
            ("star", closure.star(a), oracles.set_star(la, max_len)),
        ]
        for name, built, expected in checks:
            got = core.enumerate_accepted(built, max_len)
            if got != expected:
                print(f"FAIL closure/{name} pair {i}")
                ok = False
    return ok


def _compare_regular(rng: random.Random, count: int, max_len: int) -> bool:
    ok = True
    for i in range(count):
        nfa = oracles.random_nfa(rng)
        pia = regular.nfa_to_pia(nfa)
        back = regular.pia_to_nfa(pia)
        for w in oracles.words_upto(nfa.alphabet, max_len):
            if not (nfa.accepts(w) == core.accepts(pia, w) == back.accepts(w)):
                print(f"FAIL regular round trip {i} on {' '.join(w) or 'ε'}")
                ok = False
                break
    return ok


def _compare_fo2(max_len: int) -> bool:
    ok = True
    engine = SentenceAutomaton(fixtures.first_last_sentence())
    for w in oracles.words_upto((fixtures.XI1, fixtures.XI2), max_len):
        if engine.projection_member(w) != fixtures.first_last_regex(w):
            print(f"FAIL fo2 membership on {' '.join(w) or 'ε'}")
            ok = False
    return ok


def cmd_oracle_compare(args) -> int:
    rng = random.Random(args.seed)
    all_ok = True
    for name, fn in [
        ("closure", lambda: _compare_closure(rng, args.pairs, 6)),
        ("regular", lambda: _compare_regular(rng, args.pairs, 6)),
        ("fo2", lambda: _compare_fo2(4)),
    ]:
        ok = fn()
        print(f"{name}: {'PASS' if ok else 'FAIL'}")
        all_ok = all_ok and ok
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pia",
        description="Pebble-intervals automata: membership, emptiness, "
        "closure constructions, and sentence decision procedures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide membership of a word")
    p.add_argument("automaton")
    p.add_argument("word", help="whitespace-separated letter tokens")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("enumerate", help="list accepted words up to a length")
    p.add_argument("automaton")
    p.add_argument("max_len", type=int)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("empty", help="decide emptiness (exit 0 iff empty)")
    p.add_argument("automaton")
    p.set_defaults(fn=cmd_empty)

    p = sub.add_parser("witness", help="print a shortest accepted word")
    p.add_argument("automaton")
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("op", help="closure constructions")
    p.add_argument(
        "operation",
        choices=["union", "concat", "star", "shuffle", "shufflestar", "subst"],
    )
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--map", nargs="*", help="letter=letter entries for subst")
    p.set_defaults(fn=cmd_op)

    p = sub.add_parser("nfa2pia", help="NFA to one-pebble automaton")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_nfa2pia)

    p = sub.add_parser("pia2nfa", help="unidirectional automaton to NFA")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_pia2nfa)

    fo2 = sub.add_parser("fo2", help="sentence decision procedures")
    fo2sub = fo2.add_subparsers(dest="fo2_command", required=True)
    p = fo2sub.add_parser("sat", help="finite satisfiability with witness")
    p.add_argument("sentence")
    p.set_defaults(fn=cmd_fo2_sat)
    p = fo2sub.add_parser("member", help="projection-language membership")
    p.add_argument("sentence")
    p.add_argument("word")
    p.set_defaults(fn=cmd_fo2_member)
    p = fo2sub.add_parser("export", help="materialize the sentence automaton")
    p.add_argument("sentence")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(fn=cmd_fo2_export)

    oracle = sub.add_parser("oracle", help="differential oracle suites")
    osub = oracle.add_subparsers(dest="oracle_command", required=True)
    p = osub.add_parser("compare", help="run the differential comparisons")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=10)
    p.set_defaults(fn=cmd_oracle_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, KeyError, ValueError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
