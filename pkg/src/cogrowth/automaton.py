"""The ergodic automaton recognizing the reduced words of a subgroup.

States are (vertex, incoming letter) pairs of the extended core; a
transition consumes a letter that is not the inverse of the letter the
state was entered by.  Initial and final states coincide (the states at
the root), the transition diagram is strongly connected, and every
accepted nonempty word has exactly |I| - 1 accepting paths.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core_graph import CollapseData, CoreGraph
from .errors import (
    DeterminismViolationError,
    NonIntegerCensusError,
    PreconditionError,
)
from .words import Alphabet, Letter, Word, letter_key

State = tuple[int, Letter]


def state_key(state: State):
    return (state[0], letter_key(state[1]))


def format_state(state: State, alphabet: Alphabet) -> str:
    return f"({state[0]},{alphabet.spell_caret(state[1])})"


class Automaton:
    """Deterministic acceptor with I = F; immutable after construction."""

    def __init__(self, alphabet, states, transitions, initial, final):
        self.alphabet = alphabet
        self.states = tuple(sorted(states, key=state_key))
        self.transitions = dict(transitions)
        self.initial = frozenset(initial)
        self.final = frozenset(final)
        out: dict[State, list[tuple[Letter, State]]] = {q: [] for q in self.states}
        for (q, letter), target in self.transitions.items():
            out[q].append((letter, target))
        self._out = {
            q: tuple(sorted(pairs, key=lambda p: letter_key(p[0])))
            for q, pairs in out.items()
        }

    def successors(self, state: State) -> tuple[tuple[Letter, State], ...]:
        return self._out[state]

    def step(self, state: State, letter: Letter):
        return self.transitions.get((state, letter))

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def ambiguity(self) -> int:
        return len(self.initial) - 1

    def validate(self):
        if self.initial != self.final:
            raise PreconditionError("initial and final state sets differ")
        for (q, letter), target in self.transitions.items():
            if target[1] != letter:
                raise PreconditionError("transition label differs from target letter")
            if letter == -q[1]:
                raise PreconditionError(
                    "transition labeled with the inverse of the entry letter"
                )
        if not self.is_ergodic():
            raise PreconditionError("transition diagram is not strongly connected")

    def is_ergodic(self) -> bool:
        if not self.states:
            return False
        fwd: dict[State, list[State]] = {q: [] for q in self.states}
        bwd: dict[State, list[State]] = {q: [] for q in self.states}
        for (q, _), target in self.transitions.items():
            fwd[q].append(target)
            bwd[target].append(q)
        start = self.states[0]
        for graph in (fwd, bwd):
            seen = {start}
            stack = [start]
            while stack:
                for w in graph[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(self.states):
                return False
        return True

    def to_json(self) -> str:
        spell = lambda q: format_state(q, self.alphabet)
        data = {
            "states": [spell(q) for q in self.states],
            "transitions": [
                {
                    "from": spell(q),
                    "label": self.alphabet.spell_caret(letter),
                    "to": spell(t),
                }
                for (q, letter), t in sorted(
                    self.transitions.items(),
                    key=lambda kv: (state_key(kv[0][0]), letter_key(kv[0][1])),
                )
            ],
            "initial": sorted(spell(q) for q in self.initial),
            "final": sorted(spell(q) for q in self.final),
        }
        return json.dumps(data, indent=2)

    def to_dot(self, dashed_into=frozenset()) -> str:
        """DOT rendering; transitions into `dashed_into` states are dashed
        (the edges a collapse would remove)."""
        spell = lambda q: format_state(q, self.alphabet)
        lines = ["digraph automaton {", "  rankdir=LR;"]
        for q in self.states:
            shape = "doublecircle" if q in self.initial else "circle"
            lines.append(f'  "{spell(q)}" [shape={shape}];')
        for (q, letter), t in sorted(
            self.transitions.items(),
            key=lambda kv: (state_key(kv[0][0]), letter_key(kv[0][1])),
        ):
            style = ", style=dashed" if t in dashed_into else ""
            lines.append(
                f'  "{spell(q)}" -> "{spell(t)}" [label="{self.alphabet.spell(letter)}"{style}];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_automaton(graph: CoreGraph) -> Automaton:
    """States, transitions and initial set read off the extended core."""
    states = []
    for v in graph.vertices:
        for letter in graph.out_letters(v):
            # an edge labeled l leaves v iff one labeled -l enters v
            states.append((v, -letter))
    transitions = {}
    for (v, entry) in states:
        for letter in graph.out_letters(v):
            if letter == -entry:
                continue
            transitions[((v, entry), letter)] = (graph.step(v, letter), letter)
    initial = {q for q in states if q[0] == graph.root}
    aut = Automaton(graph.alphabet, states, transitions, initial, initial)
    aut.validate()
    return aut


def accepts(aut: Automaton, word: Word) -> int:
    """Number of admissible paths labeled by the word.

    The empty word counts as accepted once; a nonempty accepted word has
    exactly |I| - 1 paths (the start whose entry letter is the inverse
    of the first letter cannot fire).
    """
    if not word:
        return 1
    count = 0
    for q in aut.initial:
        for letter in word:
            q = aut.step(q, letter)
            if q is None:
                break
        else:
            count += q in aut.final
    return count


@dataclass(frozen=True)
class SStateSet:
    """States removed by one collapse step, with their incident edges.

    ``elements`` fixes the order the matrix work uses: per collapse edge
    (origin id order), first (terminus, a), then (origin, a^-1).
    ``incoming[s]`` are the d origin states of edges into s (all labeled
    by s's letter) and ``outgoing[s]`` the d' pairs (letter, target).
    ``merge`` renames collapsed origin vertices to their termini.
    """

    a: Letter
    elements: tuple[State, ...]
    incoming: dict[State, tuple[State, ...]]
    outgoing: dict[State, tuple[tuple[Letter, State], ...]]
    merge: dict[int, int]

    @classmethod
    def from_collapse(cls, aut: Automaton, cd: CollapseData) -> "SStateSet":
        elements = []
        for o, a, t in sorted(cd.e_o):
            elements.extend([(t, a), (o, -a)])
        state_set = set(aut.states)
        missing = [s for s in elements if s not in state_set]
        if missing:
            raise PreconditionError(f"collapse states {missing} not in the automaton")
        incoming = {}
        outgoing = {}
        sset = set(elements)
        for s in elements:
            inc = tuple(
                sorted(
                    (q for (q, letter), t in aut.transitions.items() if t == s),
                    key=state_key,
                )
            )
            out = aut.successors(s)
            if not inc or not out:
                raise PreconditionError(f"collapse state {s} has a missing side")
            if any(q in sset for q in inc) or any(t in sset for _, t in out):
                raise DeterminismViolationError(
                    "collapse states are adjacent to each other"
                )
            incoming[s] = inc
            outgoing[s] = out
        return cls(cd.a, tuple(elements), incoming, outgoing, cd.merge_map())

    def rename(self, state: State) -> State:
        return (self.merge.get(state[0], state[0]), state[1])


def collapse_automaton(aut: Automaton, s: SStateSet) -> Automaton:
    """Replace each two-step path through a collapse state by one
    transition, drop the collapse states, and update the initial set
    when a collapse state sat at the root."""
    if not s.elements:
        raise PreconditionError("collapse needs a nonempty state set")
    sset = set(s.elements)
    transitions = {
        (s.rename(q), letter): s.rename(target)
        for (q, letter), target in aut.transitions.items()
        if q not in sset and target not in sset
    }
    for removed in s.elements:
        for origin in s.incoming[removed]:
            for letter, target in s.outgoing[removed]:
                key = (s.rename(origin), letter)
                new_target = s.rename(target)
                if transitions.get(key, new_target) != new_target:
                    raise DeterminismViolationError(
                        f"collapse doubly defines delta at {key}"
                    )
                transitions[key] = new_target

    initial = set(aut.initial)
    for removed in s.elements:
        if removed in aut.initial:
            initial.discard(removed)
            initial.update(s.incoming[removed])
    states = [s.rename(q) for q in aut.states if q not in sset]
    if len(states) != len(set(states)):
        raise DeterminismViolationError("vertex merge identified two states")
    initial = {s.rename(q) for q in initial}
    collapsed = Automaton(aut.alphabet, states, transitions, initial, initial)
    collapsed.validate()
    return collapsed


def _signature(aut: Automaton, seed: State):
    """Canonical encoding of the reachable part, relabeled breadth-first
    from the seed along the global letter order."""
    ids = {seed: 0}
    order = [seed]
    i = 0
    while i < len(order):
        for letter, target in aut.successors(order[i]):
            if target not in ids:
                ids[target] = len(ids)
                order.append(target)
        i += 1
    rows = []
    for q in order:
        rows.append(
            (
                tuple((letter, ids[t]) for letter, t in aut.successors(q)),
                q in aut.initial,
                q in aut.final,
            )
        )
    return tuple(rows)


def isomorphic(a1: Automaton, a2: Automaton) -> bool:
    """State bijection preserving transitions, labels, initial and final
    sets; decided by canonical breadth-first relabeling."""
    if (
        a1.alphabet.rank != a2.alphabet.rank
        or a1.n_states != a2.n_states
        or len(a1.initial) != len(a2.initial)
        or len(a1.transitions) != len(a2.transitions)
    ):
        return False
    if not a1.states:
        return True
    seed = min(a1.initial, key=state_key) if a1.initial else a1.states[0]
    sig = _signature(a1, seed)
    candidates = a2.initial if a1.initial else a2.states
    return any(_signature(a2, q) == sig for q in candidates)


def word_census(aut: Automaton, n_max: int) -> list[int]:
    """Number of accepted words of each length 1..n_max, computed by
    path counting divided by the ambiguity degree (exact integers)."""
    k = aut.ambiguity
    if k < 1:
        raise PreconditionError("census needs ambiguity >= 1")
    index = {q: i for i, q in enumerate(aut.states)}
    arrows = [(index[q], index[t]) for (q, _), t in aut.transitions.items()]
    final = [index[q] for q in aut.final]
    vec = [0] * len(aut.states)
    for q in aut.initial:
        vec[index[q]] = 1
    counts = []
    for n in range(1, n_max + 1):
        nxt = [0] * len(vec)
        for src, dst in arrows:
            nxt[dst] += vec[src]
        vec = nxt
        paths = sum(vec[i] for i in final)
        if paths % k:
            raise NonIntegerCensusError(
                f"{paths} paths of length {n} not divisible by ambiguity {k}"
            )
        counts.append(paths // k)
    return counts


def sample_accepted_word(aut: Automaton, rng, target_len: int) -> Word:
    """Random accepted word of length >= target_len: a random admissible
    walk, steered to the nearest final state once long enough."""
    dist = {q: 0 for q in aut.final}
    frontier = list(aut.final)
    back: dict[State, list[State]] = {q: [] for q in aut.states}
    for (q, _), t in aut.transitions.items():
        back[t].append(q)
    while frontier:
        nxt = []
        for q in frontier:
            for p in back[q]:
                if p not in dist:
                    dist[p] = dist[q] + 1
                    nxt.append(p)
        frontier = nxt
    q = rng.choice(sorted(aut.initial, key=state_key))
    word = []
    while len(word) < target_len or q not in aut.final:
        if len(word) < target_len:
            options = aut.successors(q)
            letter, q = options[rng.randrange(len(options))]
        else:
            letter, q = min(
                aut.successors(q), key=lambda p: (dist[p[1]], letter_key(p[0]))
            )
        word.append(letter)
    return tuple(word)
