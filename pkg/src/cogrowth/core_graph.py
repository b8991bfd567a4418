"""Core graph of a finitely generated subgroup, built by folding.

The core is a rooted directed graph whose edges carry positive generator
labels; the extended view doubles every edge with a reverse edge
carrying the inverse label.  Reduced root-to-root loops in the extended
view spell exactly the elements of the subgroup.

Vertex ids are assigned by depth-first discovery order from the root
along the global letter order, which makes the output independent of
generator order and fold order and reproduces the conventional
enumeration (root is 1).  Collapsed graphs keep the surviving ids of
their parent instead of renumbering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (
    CyclicOrTrivialSubgroupError,
    EmptyGeneratorError,
    FoldingViolationError,
    NotCyclicallyReducedError,
    PreconditionError,
)
from .words import Alphabet, Letter, Word, is_cyclically_reduced, letter_key


class CoreGraph:
    """Folded, connected, rooted labeled graph; immutable after build."""

    def __init__(self, alphabet: Alphabet, root: int, edges):
        self.alphabet = alphabet
        self.root = root
        self.edges = tuple(sorted(set(edges)))
        verts = {root}
        ext: dict[tuple[int, Letter], int] = {}
        for o, g, t in self.edges:
            if not 1 <= g <= alphabet.rank:
                raise ValueError(f"edge label {g} outside alphabet")
            verts.add(o)
            verts.add(t)
            for key, target in (((o, g), t), ((t, -g), o)):
                if key in ext and ext[key] != target:
                    raise FoldingViolationError(
                        f"two edges labeled {alphabet.spell(key[1])} at vertex {key[0]}"
                    )
                ext[key] = target
        self.vertices = tuple(sorted(verts))
        self._ext = ext
        out: dict[int, list[Letter]] = {v: [] for v in self.vertices}
        for (v, letter) in ext:
            out[v].append(letter)
        self._out_letters = {
            v: tuple(sorted(ls, key=letter_key)) for v, ls in out.items()
        }

    # -- basic queries ------------------------------------------------

    def step(self, vertex: int, letter: Letter):
        """Endpoint of the extended edge labeled `letter` at `vertex`, or None."""
        return self._ext.get((vertex, letter))

    def out_letters(self, vertex: int) -> tuple[Letter, ...]:
        """Labels of extended edges leaving `vertex`, in the global order."""
        return self._out_letters[vertex]

    def degree(self, vertex: int) -> int:
        return len(self._out_letters[vertex])

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def subgroup_rank(self) -> int:
        return self.n_edges - self.n_vertices + 1

    def __eq__(self, other):
        return (
            isinstance(other, CoreGraph)
            and self.alphabet == other.alphabet
            and self.root == other.root
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.alphabet, self.root, self.edges))

    def __repr__(self):
        return f"CoreGraph(root={self.root}, vertices={self.n_vertices}, edges={self.n_edges})"

    def validate(self):
        """Check the core invariants; raises PreconditionError."""
        seen = {self.root}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for letter in self._out_letters[v]:
                w = self._ext[(v, letter)]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != set(self.vertices):
            raise PreconditionError("graph is not connected")
        for v in self.vertices:
            if v != self.root and self.degree(v) < 2:
                raise PreconditionError(f"non-root vertex {v} has degree < 2")
        if self.edges and self.degree(self.root) < 1:
            raise PreconditionError("root has degree 0")

    # -- serialization ------------------------------------------------

    def to_json(self) -> str:
        data = {
            "alphabet": list(self.alphabet.names),
            "root": self.root,
            "vertices": list(self.vertices),
            "edges": [
                {"o": o, "label": self.alphabet.names[g - 1], "t": t}
                for o, g, t in self.edges
            ],
        }
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CoreGraph":
        data = json.loads(text)
        alphabet = Alphabet(tuple(data["alphabet"]))
        edges = [
            (e["o"], alphabet.index(e["label"]), e["t"]) for e in data["edges"]
        ]
        return cls(alphabet, data["root"], edges)

    def to_dot(self, extended: bool = False) -> str:
        lines = ["digraph core {", "  rankdir=LR;"]
        for v in self.vertices:
            shape = "doublecircle" if v == self.root else "circle"
            lines.append(f'  v{v} [shape={shape}, label="{v}"];')
        for o, g, t in self.edges:
            lines.append(f'  v{o} -> v{t} [label="{self.alphabet.spell(g)}"];')
            if extended:
                lines.append(
                    f'  v{t} -> v{o} [label="{self.alphabet.spell(-g)}", style=dashed];'
                )
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LabelSets:
    """Per-vertex sets of labels of outgoing extended edges."""

    by_vertex: dict[int, frozenset[Letter]]

    def of(self, vertex: int) -> frozenset[Letter]:
        return self.by_vertex[vertex]


@dataclass(frozen=True)
class CollapseData:
    """Edges to contract for one Whitehead reduction step.

    ``e_o`` are extended edges labeled ``a`` from the origin set to the
    terminus set; ``e_t`` are their reverses.  All four collections have
    equal size.
    """

    a: Letter
    s_o: tuple[int, ...]
    e_o: tuple[tuple[int, Letter, int], ...]
    s_t: tuple[int, ...]
    e_t: tuple[tuple[int, Letter, int], ...]

    def __post_init__(self):
        if not (len(self.s_o) == len(self.e_o) == len(self.s_t) == len(self.e_t)):
            raise PreconditionError("collapse sets must have equal sizes")
        for o, letter, t in self.e_o:
            if letter != self.a or o not in self.s_o or t not in self.s_t:
                raise PreconditionError("collapse edge inconsistent with its sets")
        if set(self.s_o) & set(self.s_t):
            raise PreconditionError("origin and terminus sets overlap")

    def merge_map(self) -> dict[int, int]:
        return {o: t for o, _, t in self.e_o}


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        root = x
        while self.parent.setdefault(root, root) != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int):
        self.parent[self.find(y)] = self.find(x)


def build_core(gens: list[Word], alphabet: Alphabet) -> CoreGraph:
    """Fold a wedge of generator loops into the core graph.

    Every generator must be nonempty and cyclically reduced; the
    generated subgroup must be non-trivial and non-cyclic.
    """
    for w in gens:
        if not w:
            raise EmptyGeneratorError("generators must be nonempty")
        if not is_cyclically_reduced(w):
            raise NotCyclicallyReducedError(
                "generators must be cyclically reduced"
            )
        for l in w:
            if abs(l) > alphabet.rank:
                raise PreconditionError("generator uses letters outside the alphabet")

    # wedge of loops at vertex 0, provisional ids
    edges: list[tuple[int, int, int]] = []
    fresh = 1
    for w in gens:
        prev = 0
        for i, letter in enumerate(w):
            nxt = 0 if i == len(w) - 1 else fresh
            if i < len(w) - 1:
                fresh += 1
            if letter > 0:
                edges.append((prev, letter, nxt))
            else:
                edges.append((nxt, -letter, prev))
            prev = nxt

    uf = _UnionFind()
    while True:
        out: dict[tuple[int, int], int] = {}
        inn: dict[tuple[int, int], int] = {}
        clash = None
        for o, g, t in edges:
            ro, rt = uf.find(o), uf.find(t)
            if (ro, g) in out and out[(ro, g)] != rt:
                clash = (out[(ro, g)], rt)
                break
            out[(ro, g)] = rt
            if (rt, g) in inn and inn[(rt, g)] != ro:
                clash = (inn[(rt, g)], ro)
                break
            inn[(rt, g)] = ro
        if clash is None:
            break
        uf.union(*clash)
    folded = {(uf.find(o), g, uf.find(t)) for o, g, t in edges}
    root = uf.find(0)

    # safety net: trim hanging vertices (a no-op for cyclically reduced input)
    while True:
        deg: dict[int, int] = {}
        for o, g, t in folded:
            deg[o] = deg.get(o, 0) + 1
            deg[t] = deg.get(t, 0) + 1
        hanging = {v for v, d in deg.items() if d < 2 and v != root}
        if not hanging:
            break
        folded = {
            (o, g, t) for o, g, t in folded if o not in hanging and t not in hanging
        }

    if len(folded) - len({v for e in folded for v in (e[0], e[2])} | {root}) + 1 < 2:
        raise CyclicOrTrivialSubgroupError(
            "subgroup is trivial or cyclic; the core has no branching"
        )

    graph = CoreGraph(alphabet, root, folded)
    renamed = _dfs_renumber(graph)
    graph = CoreGraph(
        alphabet,
        renamed[root],
        [(renamed[o], g, renamed[t]) for o, g, t in folded],
    )
    graph.validate()
    return graph


def _dfs_renumber(graph: CoreGraph) -> dict[int, int]:
    """Depth-first discovery ids (1-based) along the global letter order."""
    ids: dict[int, int] = {}
    stack = [graph.root]
    while stack:
        v = stack.pop()
        if v in ids:
            continue
        ids[v] = len(ids) + 1
        for letter in reversed(graph.out_letters(v)):
            stack.append(graph.step(v, letter))
    return ids


def label_sets(graph: CoreGraph) -> LabelSets:
    return LabelSets(
        {v: frozenset(graph.out_letters(v)) for v in graph.vertices}
    )


def membership(graph: CoreGraph, word: Word) -> bool:
    """True iff the reduced word labels a root-to-root extended path."""
    v = graph.root
    for letter in word:
        v = graph.step(v, letter)
        if v is None:
            return False
    return v == graph.root


def collapse_core(graph: CoreGraph, cd: CollapseData) -> CoreGraph:
    """Contract every collapse edge, identifying origins into termini.

    Surviving vertices keep their ids; the merged vertex keeps the
    terminus id.  Raises FoldingViolationError if the contraction would
    create a label clash (the trichotomy was not actually satisfied).
    """
    if not cd.e_o:
        raise PreconditionError("collapse needs at least one edge")
    for o, letter, t in cd.e_o:
        if graph.step(o, letter) != t:
            raise PreconditionError(f"collapse edge ({o},{letter},{t}) not in graph")
    merge = cd.merge_map()

    collapsed_positive = set()
    for o, letter, t in cd.e_o:
        collapsed_positive.add((o, letter, t) if letter > 0 else (t, -letter, o))
    new_edges = []
    for o, g, t in graph.edges:
        if (o, g, t) in collapsed_positive:
            continue
        new_edges.append((merge.get(o, o), g, merge.get(t, t)))
    if len(new_edges) != len(set(new_edges)):
        raise FoldingViolationError("contraction identified two parallel edges")

    result = CoreGraph(graph.alphabet, merge.get(graph.root, graph.root), new_edges)
    if not (
        result.n_vertices < graph.n_vertices and result.n_edges < graph.n_edges
    ):
        raise FoldingViolationError("contraction did not shrink the graph")
    result.validate()
    return result


def canonical_form(graph: CoreGraph):
    """Renumber by depth-first discovery; equal forms = rooted isomorphic."""
    ids = _dfs_renumber(graph)
    return tuple(sorted((ids[o], g, ids[t]) for o, g, t in graph.edges))


def rooted_isomorphic(g1: CoreGraph, g2: CoreGraph) -> bool:
    return g1.alphabet == g2.alphabet and canonical_form(g1) == canonical_form(g2)


def isomorphic_any_root(g1: CoreGraph, g2: CoreGraph) -> bool:
    """Rooted isomorphism after searching g2's root over all candidates."""
    if rooted_isomorphic(g1, g2):
        return True
    return any(
        canonical_form(g1) == canonical_form(CoreGraph(g2.alphabet, v, g2.edges))
        for v in g2.vertices
    )
