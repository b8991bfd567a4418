"""Whitehead graphs, cut vertices, and the choice of collapse automorphism.

The Whitehead graph of a cyclically reduced word records consecutive
letter pairs (including the wrap-around pair); the Whitehead graph of a
labeled graph is the union of complete graphs on the per-vertex label
sets.  A cut vertex in either graph drives one reduction step: it
determines the automorphism (A, a) and, through the per-vertex
trichotomy, the set of core edges to collapse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core_graph import CollapseData, CoreGraph, LabelSets, label_sets
from .errors import (
    NoCutVertexError,
    NotCyclicallyReducedError,
    NoValidAutomorphismError,
    PreconditionError,
    TrichotomyFailure,
)
from .words import (
    Alphabet,
    Letter,
    WhiteheadAutomorphism,
    Word,
    apply_whitehead,
    cyclic_reduce,
    is_cyclically_reduced,
    letter_key,
    sigma,
)


class WhiteheadGraph:
    """Undirected graph on the 2m letters, with edge multiplicities.

    Connectivity analysis uses the simple graph; multiplicities are kept
    as metadata only.
    """

    def __init__(self, rank: int, edge_multiplicity: dict):
        self.rank = rank
        self.vertices = sigma(rank)
        self.multiplicity = dict(edge_multiplicity)
        adj: dict[Letter, set[Letter]] = {v: set() for v in self.vertices}
        for (u, v) in self.multiplicity:
            adj[u].add(v)
            adj[v].add(u)
        self.adjacency = adj

    @property
    def n_edges_simple(self) -> int:
        return len(self.multiplicity)

    @property
    def n_edges_multiset(self) -> int:
        return sum(self.multiplicity.values())

    def is_isolated(self, letter: Letter) -> bool:
        return not self.adjacency[letter]

    def component(self, letter: Letter, removed: Letter | None = None) -> frozenset:
        """Connected component of `letter` in the simple graph, optionally
        with one vertex deleted."""
        seen = {letter}
        stack = [letter]
        while stack:
            u = stack.pop()
            for v in self.adjacency[u]:
                if v != removed and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return frozenset(seen)

    def components_after_removal(self, letter: Letter) -> list[frozenset]:
        """Components of `letter`'s component once `letter` is deleted."""
        remaining = self.component(letter) - {letter}
        out = []
        seen: set[Letter] = set()
        for start in sorted(remaining, key=letter_key):
            if start in seen:
                continue
            comp = self.component(start, removed=letter)
            seen |= comp
            out.append(comp)
        return out

    def to_dot(self, alphabet: Alphabet) -> str:
        lines = ["graph whitehead {"]
        for v in self.vertices:
            lines.append(f'  "{alphabet.spell_caret(v)}";')
        for (u, v), mult in sorted(
            self.multiplicity.items(), key=lambda kv: (letter_key(kv[0][0]), letter_key(kv[0][1]))
        ):
            attr = f' [label="{mult}"]' if mult > 1 else ""
            lines.append(
                f'  "{alphabet.spell_caret(u)}" -- "{alphabet.spell_caret(v)}"{attr};'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def _edge(u: Letter, v: Letter) -> tuple[Letter, Letter]:
    return (u, v) if letter_key(u) <= letter_key(v) else (v, u)


def whitehead_graph_of_word(word: Word, rank: int) -> WhiteheadGraph:
    """One edge per consecutive pair (inverse of first to second), plus
    the wrap-around edge; the multiset has exactly |word| edges."""
    if not word or not is_cyclically_reduced(word):
        raise NotCyclicallyReducedError(
            "Whitehead graph needs a nonempty cyclically reduced word"
        )
    mult: dict[tuple[Letter, Letter], int] = {}
    for i in range(len(word)):
        first, second = word[i], word[(i + 1) % len(word)]
        e = _edge(-first, second)
        mult[e] = mult.get(e, 0) + 1
    return WhiteheadGraph(rank, mult)


def whitehead_graph_of_core(ls: LabelSets, rank: int) -> WhiteheadGraph:
    """Union of complete graphs on each label set."""
    mult: dict[tuple[Letter, Letter], int] = {}
    for v in sorted(ls.by_vertex):
        letters = sorted(ls.by_vertex[v], key=letter_key)
        for i, u in enumerate(letters):
            for w in letters[i + 1 :]:
                e = _edge(u, w)
                mult[e] = mult.get(e, 0) + 1
    return WhiteheadGraph(rank, mult)


@dataclass(frozen=True)
class CutVertexReport:
    """A non-isolated letter whose removal separates its component, or
    whose component misses its inverse (configuration 1 before 2)."""

    letter: Letter
    configuration: int
    witness: tuple[tuple[Letter, ...], ...]

    def to_json(self, alphabet: Alphabet) -> str:
        return json.dumps(
            {
                "letter": alphabet.spell_caret(self.letter),
                "configuration": self.configuration,
                "witness": [
                    [alphabet.spell_caret(l) for l in comp] for comp in self.witness
                ],
            }
        )


def find_cut_vertices(wg: WhiteheadGraph) -> list[CutVertexReport]:
    """All cut vertices, in the global letter order."""
    reports = []
    for a in wg.vertices:
        if wg.is_isolated(a):
            continue
        comp = wg.component(a)
        pieces = wg.components_after_removal(a)
        witness = tuple(tuple(sorted(p, key=letter_key)) for p in pieces)
        if -a not in comp:
            reports.append(CutVertexReport(a, 1, witness))
        elif len(pieces) > 1:
            reports.append(CutVertexReport(a, 2, witness))
    return reports


def _collapse_candidate(
    graph: CoreGraph, ls: LabelSets, wg: WhiteheadGraph, a: Letter
) -> tuple[WhiteheadAutomorphism, CollapseData]:
    """Try to build (A, a) and its collapse data; raises TrichotomyFailure."""
    pieces = [p for p in wg.components_after_removal(a) if -a not in p]
    members = frozenset().union(*pieces) if pieces else frozenset()
    if not members:
        raise TrichotomyFailure(f"letter {a}: empty side")
    phi = WhiteheadAutomorphism(a, members)

    s_o = []
    for v in graph.vertices:
        lv = ls.of(v)
        case1 = not (lv & members)
        case2 = lv <= members
        case3 = a in lv and lv <= members | {a}
        if case1 + case2 + case3 != 1:
            raise TrichotomyFailure(
                f"letter {a}: vertex {v} matches {case1 + case2 + case3} cases"
            )
        if case3:
            s_o.append(v)
    if not s_o:
        raise TrichotomyFailure(f"letter {a}: no vertex in the collapse case")

    e_o, s_t = [], []
    for v in s_o:
        t = graph.step(v, a)
        if a in ls.of(v) and -a in ls.of(v):
            raise TrichotomyFailure(f"letter {a}: vertex {v} carries both a and a^-1")
        # the endpoint label sets may share the collapse letter itself
        # (an a-chain, where t has its own outgoing a-edge) but nothing else
        if (ls.of(v) & ls.of(t)) - {a}:
            raise TrichotomyFailure(
                f"letter {a}: label sets of {v} and {t} overlap beyond the letter"
            )
        e_o.append((v, a, t))
        s_t.append(t)
    if set(s_o) & set(s_t):
        raise TrichotomyFailure(f"letter {a}: origin and terminus sets overlap")
    cd = CollapseData(
        a=a,
        s_o=tuple(s_o),
        e_o=tuple(e_o),
        s_t=tuple(s_t),
        e_t=tuple((t, -a, v) for v, _, t in e_o),
    )
    return phi, cd


def choose_automorphism(
    graph: CoreGraph,
) -> tuple[WhiteheadAutomorphism, CollapseData]:
    """Pick the first cut vertex (global letter order) whose side set
    passes the trichotomy at every vertex.

    Raises NoCutVertexError when the Whitehead graph has no cut vertex,
    which certifies the subgroup is not a free factor.  Raises
    NoValidAutomorphismError when cut vertices exist but none passes;
    nothing is asserted about the subgroup then.
    """
    if graph.n_vertices <= 1:
        raise PreconditionError("core already has a single vertex")
    ls = label_sets(graph)
    wg = whitehead_graph_of_core(ls, graph.alphabet.rank)
    cuts = find_cut_vertices(wg)
    if not cuts:
        raise NoCutVertexError(
            "no cut vertex in the Whitehead graph: the subgroup is not a free factor"
        )
    failures = []
    for report in cuts:
        try:
            return _collapse_candidate(graph, ls, wg, report.letter)
        except TrichotomyFailure as exc:
            failures.append(str(exc))
    raise NoValidAutomorphismError(
        "every cut vertex failed the trichotomy: " + "; ".join(failures)
    )


def cyclic_length(word: Word) -> int:
    core, _ = cyclic_reduce(word)
    return len(core)


def all_whitehead_automorphisms(rank: int):
    """Every (A, a) over the rank-m alphabet, in deterministic order:
    2m * 2^(2m-2) candidates."""
    letters = sigma(rank)
    for a in letters:
        rest = [l for l in letters if abs(l) != abs(a)]
        for mask in range(1 << len(rest)):
            members = frozenset(
                l for i, l in enumerate(rest) if mask >> i & 1
            )
            yield WhiteheadAutomorphism(a, members)


def reduce_primitive_word(
    word: Word, rank: int
) -> tuple[WhiteheadAutomorphism, Word] | None:
    """Exhaustively search for an automorphism strictly shrinking the
    cyclic length; returns None when no candidate shrinks it."""
    if not is_cyclically_reduced(word) or not word:
        raise PreconditionError("word must be nonempty and cyclically reduced")
    if len(word) == 1:
        raise PreconditionError("single letters are already minimal")
    base = len(word)
    for phi in all_whitehead_automorphisms(rank):
        image, _ = cyclic_reduce(apply_whitehead(phi, word))
        if len(image) < base:
            return phi, image
    return None
