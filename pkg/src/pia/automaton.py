"""Lazy construction of the sentence automaton and its decision procedures.

The automaton guesses a sequence of consecutive perfect extremal strings
ending in a completed one, reading the input word along the way.  Its
states are:

* extremal states (s, τ): a perfect extremal string s has just been read,
  with the pebble assignment τ marking where its positions sit;
* prefix states (s, k, τ, flag): the first k letters of s have been
  handled; a designated extra pebble reads non-extremal positions along
  the way (flag remembers whether it has already moved at this boundary).

The raw state space is double exponential, so states are generated lazily
and two sound prunings keep desk-scale instances tractable:

* candidate successor strings carry at most two new top letters per
  witness type set (a third is never extremal and adds no completion
  opportunities), and reconstructions in which some new top letter does
  not survive into the extremal string are dropped as redundant;

* a promised type whose witness must carry a strictly larger value
  (anything except a strictly-above witness) can only be discharged while
  its element sits in the top or second layer; states carrying a promise
  that has provably missed its window are dead ends and are never
  enqueued.

Reachability over the pruned graph decides satisfiability (every generated
move is realizable: its interval bounds are always placed left of each
other), and membership runs a configuration search against the generated
transitions.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .core import (
    AlphabetMismatch,
    LEFT_END,
    RIGHT_END,
    Move,
    Pia,
    Silent,
    Word,
    make_pia,
)
from .extremal import (
    GammaString,
    down,
    ext,
    extremal_positions,
    partial_embedding,
    rcon,
)
from .logic import (
    GammaLetter,
    LAYER_TOP,
    NormalFormSentence,
    PROMISED,
    _CachedHash,
    gamma_letter_symbol,
    perfect_pair,
    realizing_task_sets,
)


@dataclass(frozen=True)
class ExtremalState:
    __hash__ = _CachedHash.__hash__

    string: GammaString
    tau: tuple[int, ...]  # slot per pebble, 0 = unplaced; last entry is m+1


@dataclass(frozen=True)
class PrefixState:
    """Mid-traversal state of one extremal string.

    ``phase`` 0: the letter at slot ``prefix_len`` is about to be read.
    ``phase`` 1/2: that slot is read and the gap immediately before it is
    open for non-extremal reads (2 once the designated pebble anchors the
    ascending chain); ``prefix_len`` may then also be ``len(string) + 1``
    for the gap after the last slot.
    """

    __hash__ = _CachedHash.__hash__

    string: GammaString
    prefix_len: int
    tau: tuple[int, ...]
    phase: int


AutState = Union[ExtremalState, PrefixState]


@dataclass(frozen=True)
class MoveLabel:
    pebble: int
    left: Union[int, str]
    right: Union[int, str]
    symbol: str  # sentence-alphabet letter


SILENT = None  # transition label for silent steps


def _check_state(q: AutState, m: int) -> None:
    tau = q.tau
    assert len(tau) == m + 1 and tau[m] == 0, "designated pebble must be free"
    placed = [p for p in tau[:m] if p]
    assert len(placed) == len(set(placed)), "pebble assignment not injective"
    n = len(q.string)
    if isinstance(q, ExtremalState):
        if n == 0:
            assert not placed
        else:
            assert set(range(1, n + 1)) <= set(placed)
    else:
        k = q.prefix_len
        done = k - 1 if q.phase == 0 else min(k, n)
        assert (1 <= k <= n) if q.phase == 0 else (1 <= k <= n + 1)
        assert set(range(1, done + 1)) <= set(placed)
        for slot in range(done + 1, n + 1):
            has = slot in placed
            assert has == (q.string[slot - 1].layer != LAYER_TOP)


class SentenceAutomaton:
    """Lazy automaton for one normal-form sentence (pebble count 7·|types|+1)."""

    def __init__(self, nf: NormalFormSentence):
        if nf.num_constraints < 1:
            raise ValueError("the automaton needs at least one constraint index")
        problems = nf.validate()
        if problems:
            raise ValueError("; ".join(problems))
        self.nf = nf
        self.m = 7 * len(nf.existential_types)
        self._succ_cache: dict = {}
        self._jump_cache: dict = {}
        self._jump_state_cache: dict = {}
        self._notext_cache: dict = {}
        self._top_letters = sorted(
            {
                GammaLetter(LAYER_TOP, ts.promised())
                for ts in realizing_task_sets(nf)
            },
            key=repr,
        )

    # --- state structure -------------------------------------------------------

    def initial(self) -> ExtremalState:
        return ExtremalState((), (0,) * (self.m + 1))

    def is_final(self, q: AutState) -> bool:
        if not isinstance(q, ExtremalState):
            return False
        if not q.string:
            return self.nf.epsilon_true
        return all(g.tasks.all_completed() for g in q.string)

    def _available_pebble(self, tau: tuple[int, ...]) -> int:
        for k in range(1, self.m + 1):
            if tau[k - 1] == 0:
                return k
        raise AssertionError("no available pebble (extremal string too long)")

    def _pebble_at(self, tau: tuple[int, ...], slot: int) -> Optional[int]:
        for k in range(1, self.m + 1):
            if tau[k - 1] == slot:
                return k
        return None

    # --- dead-promise pruning ---------------------------------------------------

    def _promise_alive(self, theta, layer: str) -> bool:
        """Can a promise for this type still be discharged from this layer on?

        All future completion witnesses are new top elements, hence strictly
        above in value: the type must demand a strictly larger witness.  A
        successor witness only exists while the element is about to sit in
        the second layer; a farther witness works from any layer.
        """
        if not (theta.le2_xy and not theta.le2_yx):
            return False
        if theta.s2_xy:
            return layer == LAYER_TOP
        return True

    def _string_alive(self, s: GammaString) -> bool:
        for g in s:
            for tid, mark in g.tasks.marks:
                if mark == PROMISED and not self._promise_alive(
                    self.nf.existential_types[tid], g.layer
                ):
                    return False
        return True

    # --- jump targets ------------------------------------------------------------

    def _candidate_targets(
        self,
        s0: GammaString,
        r_cap: Optional[int] = None,
        budget: Optional[tuple[tuple[str, int], ...]] = None,
    ) -> list[tuple]:
        """Perfect, live extremal strings one value class above s0, as
        (s1, (r, g)) pairs with s1 = ext(rcon(r, g, s0)).

        ``budget`` optionally caps how many new top letters may carry each
        target-alphabet letter (used by membership, where every new top
        letter consumes an unread input position).
        """
        full_cap = 2 * len(self.nf.existential_types)
        cap = full_cap if r_cap is None else min(r_cap, full_cap)
        key = (s0, cap, budget)
        if key in self._jump_cache:
            return self._jump_cache[key]
        nf = self.nf
        h = nf.h()
        base = down(s0)
        remaining = None if budget is None else Counter(dict(budget))
        found: dict[GammaString, tuple] = {}
        supports = {
            letter: letter.tasks.support for letter in self._top_letters
        }

        def all_survive(r: list) -> bool:
            # Every new top letter must stay extremal: min or max of the
            # positions sharing one of its types (independent of g, since
            # the base string contributes no top-layer letters).
            for i, letter in enumerate(r):
                ok = False
                for tid in supports[letter]:
                    spots = [j for j, x in enumerate(r) if tid in supports[x]]
                    if i == spots[0] or i == spots[-1]:
                        ok = True
                        break
                if not ok:
                    return False
            return True

        def place(r: list, g: list, used: Counter):
            if r:
                s1full = rcon(tuple(r), tuple(g), s0, nf)
                s1 = ext(s1full, nf)
                if (
                    s1 not in found
                    and sum(1 for x in s1 if x.is_top()) == len(r)
                    and self._string_alive(s1)
                ):
                    # Pairwise perfectness holds by construction: every
                    # insertion was checked against the whole string.
                    found[s1] = (tuple(r), tuple(g))
            if len(r) >= cap:
                return
            total = len(r) + 1 + len(s0)
            for letter in self._top_letters:
                if used[letter] >= 2:
                    continue
                if remaining is not None:
                    target = h[gamma_letter_symbol(nf, letter)]
                    spent = sum(
                        used[x]
                        for x in used
                        if h[gamma_letter_symbol(nf, x)] == target
                    )
                    if spent >= remaining[target]:
                        continue
                if not all(perfect_pair(nf, other, letter) for other in r):
                    continue
                r.append(letter)
                if not all_survive(r):
                    r.pop()
                    continue
                used[letter] += 1
                start = g[-1] + 1 if g else 1
                for pos in range(start, total + 1):
                    # Perfectness is monotone in insertions: prune pairs
                    # violating the universal constraint right away.
                    left_base = pos - 1 - len(r) + 1
                    if not all(
                        perfect_pair(nf, b, letter) for b in base[:left_base]
                    ):
                        continue
                    if not all(
                        perfect_pair(nf, letter, b) for b in base[left_base:]
                    ):
                        continue
                    g.append(pos)
                    place(r, g, used)
                    g.pop()
                used[letter] -= 1
                r.pop()

        place([], [], Counter())
        out = sorted(found.items(), key=repr)
        self._jump_cache[key] = out
        return out

    # --- non-extremal letters ------------------------------------------------------

    def _insertable(self, s: GammaString, at: int) -> list[GammaLetter]:
        """Top-layer letters that can sit just before slot ``at`` without
        being extremal.

        The inserted position itself must be non-extremal in the augmented
        string (not merely leave the extremal string equal as a sequence:
        a letter equal to an extremal one, inserted elsewhere, would shift
        which positions are extremal and desynchronise the pebbles from the
        true extremal elements).
        """
        key = (s, at)
        if key in self._notext_cache:
            return self._notext_cache[key]
        nf = self.nf
        out = []
        for letter in self._top_letters:
            augmented = s[: at - 1] + (letter,) + s[at - 1 :]
            if at not in extremal_positions(augmented, nf):
                out.append(letter)
        self._notext_cache[key] = out
        return out

    # --- transitions -----------------------------------------------------------------

    def _jump_state(
        self, q: ExtremalState, s1: GammaString, r: GammaString, g: tuple[int, ...]
    ) -> PrefixState:
        key = (q, s1, r, g)
        cached = self._jump_state_cache.get(key)
        if cached is not None:
            return cached
        emb = partial_embedding(q.string, s1, r, g, self.nf)
        inverse = {src: dst for dst, src in emb.items()}
        tau = tuple(
            inverse.get(q.tau[k], 0) if q.tau[k] else 0 for k in range(self.m)
        ) + (0,)
        state = PrefixState(s1, 1, tau, 0)
        self._jump_state_cache[key] = state
        return state

    def successors(
        self, q: AutState, r_cap: Optional[int] = None
    ) -> list[tuple[Optional[MoveLabel], AutState]]:
        key = (q, r_cap)
        if key in self._succ_cache:
            return self._succ_cache[key]
        _check_state(q, self.m)
        out: list[tuple[Optional[MoveLabel], AutState]] = []
        if isinstance(q, ExtremalState):
            for s1, (r, g) in self._candidate_targets(q.string, r_cap):
                if not s1:
                    continue
                out.append((SILENT, self._jump_state(q, s1, r, g)))
        else:
            s, k, tau = q.string, q.prefix_len, q.tau
            if q.phase == 0:
                # Read the letter at slot k.
                head = s[k - 1]
                if head.layer != LAYER_TOP:
                    out.append((SILENT, PrefixState(s, k, tau, 1)))
                else:
                    pebble = self._available_pebble(tau)
                    left = self._pebble_at(tau, k - 1) if k > 1 else LEFT_END
                    right: Union[int, str] = RIGHT_END
                    for slot in range(k + 1, len(s) + 1):
                        p = self._pebble_at(tau, slot)
                        if p is not None:
                            right = p
                            break
                    ntau = list(tau)
                    ntau[pebble - 1] = k
                    out.append(
                        (
                            MoveLabel(
                                pebble, left, right,
                                gamma_letter_symbol(self.nf, head),
                            ),
                            PrefixState(s, k, tuple(ntau), 1),
                        )
                    )
            else:
                # Non-extremal reads in the gap between slots k-1 and k,
                # fenced by their pebbles; repeated reads chain on the
                # designated pebble so the gap fills left to right.
                right = (
                    self._pebble_at(tau, k) if k <= len(s) else RIGHT_END
                )
                seen_symbols = set()
                for gamma in self._insertable(s, k):
                    symbol = gamma_letter_symbol(self.nf, gamma)
                    if symbol in seen_symbols:
                        continue
                    seen_symbols.add(symbol)
                    if q.phase == 2:
                        left: Union[int, str] = self.m + 1
                    else:
                        left = (
                            self._pebble_at(tau, k - 1) if k > 1 else LEFT_END
                        )
                    out.append(
                        (
                            MoveLabel(self.m + 1, left, right, symbol),
                            PrefixState(s, k, tau, 2),
                        )
                    )
                # Move on: next slot, the final gap, or the extremal state.
                if k < len(s):
                    out.append((SILENT, PrefixState(s, k + 1, tau, 0)))
                elif k == len(s):
                    out.append((SILENT, PrefixState(s, k + 1, tau, 1)))
                else:
                    out.append((SILENT, ExtremalState(s, tau)))
        for _, nxt in out:
            _check_state(nxt, self.m)
        self._succ_cache[key] = out
        return out

    # --- decision procedures -----------------------------------------------------
    #
    # Pebble identities are pure bookkeeping (renaming the pebbles of a run
    # never changes which positions it reads), so the deciders below run on
    # extremal strings alone with positions tracked per string slot; only the
    # materialised automaton keeps the explicit pebble assignments.

    def satisfiable(
        self, max_states: int = 500_000
    ) -> tuple[bool, Optional[Word]]:
        """Reachability of a completed perfect extremal string; on success a
        witness word over the target alphabet.

        Every generated move is realizable (its interval bounds are always
        placed left of each other), so string-level reachability decides the
        language's emptiness.  The search widens a cap on the number of new
        top letters per jump: narrow caps find satisfiable sentences
        quickly, and the final uncapped pass makes a negative conclusive.
        """
        full_cap = 2 * len(self.nf.existential_types)
        for cap in (1, 2, *range(4, full_cap + 1, 2)):
            cap = min(cap, full_cap)
            result = self._reach_strings(cap, max_states)
            if result is not None:
                return True, result
            if cap >= full_cap:
                break
        return False, None

    def _string_final(self, s: GammaString) -> bool:
        if not s:
            return self.nf.epsilon_true
        return all(g.tasks.all_completed() for g in s)

    def _reach_strings(self, r_cap: int, max_states: int) -> Optional[Word]:
        start: GammaString = ()
        if self._string_final(start):
            return ()
        parents: dict[GammaString, Optional[tuple]] = {start: None}
        queue = deque([start])
        while queue:
            s0 = queue.popleft()
            for s1, (r, g) in self._candidate_targets(s0, r_cap):
                if not s1 or s1 in parents:
                    continue
                parents[s1] = (s0, r, g)
                if len(parents) > max_states:
                    raise RuntimeError(
                        f"state cap {max_states} exceeded during reachability"
                    )
                if self._string_final(s1):
                    return self._replay_string_path(parents, s1)
                queue.append(s1)
        return None

    def _replay_string_path(self, parents, goal: GammaString) -> Word:
        """Realize one word along a string path: non-top slots inherit their
        positions through the embedding, new top slots take the leftmost
        gap inside their interval."""
        path = []
        node = goal
        while parents[node] is not None:
            s0, r, g = parents[node]
            path.append((node, r, g))
            node = s0
        path.reverse()
        h = self.nf.h()
        letters: list[str] = []
        slot_at: dict[int, int] = {}  # slot of the current string -> index
        prev: GammaString = ()
        for s1, r, g in path:
            emb = partial_embedding(prev, s1, r, g, self.nf)
            slot_at = {j: slot_at[emb[j]] for j in emb}
            for k in range(1, len(s1) + 1):
                if not s1[k - 1].is_top():
                    continue
                lo = slot_at[k - 1] if k > 1 else -1
                pos = lo + 1
                hi = len(letters)
                for later in range(k + 1, len(s1) + 1):
                    if later in slot_at:
                        hi = slot_at[later]
                        break
                assert pos <= hi, "replay broke the interval discipline"
                letters.insert(pos, gamma_letter_symbol(self.nf, s1[k - 1]))
                slot_at = {
                    j: (p + 1 if p >= pos else p) for j, p in slot_at.items()
                }
                slot_at[k] = pos
            prev = s1
        return tuple(h[x] for x in letters)

    def projection_member(self, word: Word) -> bool:
        """Is some preimage of the word under the substitution accepted?

        Search nodes are (string, slot index, gap phase) plus the slot and
        chain positions and the read mask.  Jump candidates are capped by
        the number of unread positions (every new top letter is read while
        traversing the next extremal string) and filtered against the
        unread letter multiset.
        """
        h = self.nf.h()
        word = tuple(word)
        unknown = set(word) - set(h.values())
        if unknown:
            raise AlphabetMismatch(
                f"letters {sorted(unknown)} not in target alphabet"
            )
        if not word:
            return self.nf.epsilon_true
        n = len(word)
        full = (1 << n) - 1
        jumps: dict = {}
        gap_symbols: dict = {}
        symbol_cache: dict = {}
        string_ids: dict[GammaString, int] = {}
        strings: list[GammaString] = []

        def intern(s: GammaString) -> int:
            sid = string_ids.get(s)
            if sid is None:
                sid = len(strings)
                string_ids[s] = sid
                strings.append(s)
            return sid

        def symbol(letter: GammaLetter) -> str:
            out = symbol_cache.get(letter)
            if out is None:
                out = h[gamma_letter_symbol(self.nf, letter)]
                symbol_cache[letter] = out
            return out

        # A node is (sid, k, phase, slots, chain, mask): slots maps slot
        # index (1-based, tuple) to its position, 0 while unplaced; chain is
        # the designated pebble's position while a gap chain is open, else
        # 0.  Phase 3 marks a finished string awaiting a jump.
        start = (intern(()), 0, 3, (), 0, 0)
        seen = {start}
        stack = [start]
        while stack:
            sid, k, phase, slots, chain, mask = stack.pop()
            s = strings[sid]
            if phase == 3:
                if mask == full and self._string_final(s):
                    return True
                budget = tuple(
                    sorted(
                        Counter(
                            word[p] for p in range(n) if not mask & (1 << p)
                        ).items()
                    )
                )
                key = (sid, budget)
                options = jumps.get(key)
                if options is None:
                    unread = sum(c for _, c in budget)
                    options = []
                    for s1, (r, g) in self._candidate_targets(
                        s, unread, budget
                    ):
                        if s1:
                            emb = partial_embedding(s, s1, r, g, self.nf)
                            options.append((intern(s1), len(s1), emb))
                    jumps[key] = options
                for sid1, n1, emb in options:
                    nslots = tuple(
                        slots[emb[j] - 1] if j in emb else 0
                        for j in range(1, n1 + 1)
                    )
                    node = (sid1, 1, 0, nslots, 0, mask)
                    if node not in seen:
                        seen.add(node)
                        stack.append(node)
                continue
            if phase == 0:
                # Read the letter at slot k.
                if not s[k - 1].is_top():
                    node = (sid, k, 1, slots, 0, mask)
                    if node not in seen:
                        seen.add(node)
                        stack.append(node)
                else:
                    lo = slots[k - 2] if k > 1 else 0
                    hi = n + 1
                    for later in range(k + 1, len(s) + 1):
                        if slots[later - 1]:
                            hi = slots[later - 1]
                            break
                    target = symbol(s[k - 1])
                    for pos in range(lo + 1, hi):
                        bit = 1 << (pos - 1)
                        if mask & bit or word[pos - 1] != target:
                            continue
                        nslots = slots[: k - 1] + (pos,) + slots[k:]
                        node = (sid, k, 1, nslots, 0, mask | bit)
                        if node not in seen:
                            seen.add(node)
                            stack.append(node)
                continue
            # phase 1/2: non-extremal reads in the gap before slot k, then
            # advance.
            lo = chain if phase == 2 else (slots[k - 2] if k > 1 else 0)
            hi = slots[k - 1] if k <= len(s) else n + 1
            targets = gap_symbols.get((sid, k))
            if targets is None:
                targets = {symbol(g) for g in self._insertable(s, k)}
                gap_symbols[(sid, k)] = targets
            for pos in range(lo + 1, hi):
                bit = 1 << (pos - 1)
                if mask & bit or word[pos - 1] not in targets:
                    continue
                node = (sid, k, 2, slots, pos, mask | bit)
                if node not in seen:
                    seen.add(node)
                    stack.append(node)
            if k < len(s):
                node = (sid, k + 1, 0, slots, 0, mask)
            elif k == len(s):
                node = (sid, k + 1, 1, slots, 0, mask)
            else:
                node = (sid, 0, 3, slots, 0, mask)
            if node not in seen:
                seen.add(node)
                stack.append(node)
        return False

    # --- materialisation -------------------------------------------------------

    def reachable_states(
        self, cap: Optional[int] = None
    ) -> tuple[list[AutState], bool]:
        """Breadth-first state list; second component is False when truncated."""
        start = self.initial()
        seen = {start}
        order = [start]
        queue = deque([start])
        complete = True
        while queue:
            q = queue.popleft()
            for _, nxt in self.successors(q):
                if nxt in seen:
                    continue
                if cap is not None and len(seen) >= cap:
                    complete = False
                    continue
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
        return order, complete

    def export_pia(self, cap: Optional[int] = None) -> tuple[Pia, bool]:
        """Materialize the reachable part as a concrete automaton over the
        sentence alphabet.  Second component is False when the cap truncated
        the state space (transitions into dropped states are omitted)."""
        states, complete = self.reachable_states(cap)
        index = {q: f"q{i}" for i, q in enumerate(states)}
        transitions = []
        for q in states:
            for label, nxt in self.successors(q):
                if nxt not in index:
                    continue
                if label is None:
                    transitions.append(Silent(index[q], index[nxt]))
                else:
                    transitions.append(
                        Move(
                            index[q],
                            label.pebble,
                            label.left,
                            label.right,
                            label.symbol,
                            index[nxt],
                        )
                    )
        pia = make_pia(
            self.nf.alphabet,
            self.m + 1,
            index.values(),
            index[self.initial()],
            (index[q] for q in states if self.is_final(q)),
            transitions,
        )
        return pia, complete


def build_states_lazily(nf: NormalFormSentence) -> Iterator[AutState]:
    """Deduplicated breadth-first stream of reachable states."""
    engine = SentenceAutomaton(nf)
    start = engine.initial()
    seen = {start}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        yield q
        for _, nxt in engine.successors(q):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)


def successors(q: AutState, nf: NormalFormSentence):
    return SentenceAutomaton(nf).successors(q)


def satisfiable(
    nf: NormalFormSentence, max_states: int = 500_000
) -> tuple[bool, Optional[Word]]:
    return SentenceAutomaton(nf).satisfiable(max_states)


def projection_member(nf: NormalFormSentence, word: Word) -> bool:
    return SentenceAutomaton(nf).projection_member(word)
