import random
from dataclasses import dataclass

import pytest

from cogrowth import Alphabet, WhiteheadAutomorphism, apply_whitehead, parse_word
from cogrowth.core_graph import build_core
from cogrowth.errors import CyclicOrTrivialSubgroupError
from cogrowth.words import is_cyclically_reduced, sigma

CORPUS_SEED = 20240811
ALPHABETS = {m: Alphabet(tuple("xyzt"[:m])) for m in (2, 3, 4)}

ACCEPTANCE_LINES = []


def record_acceptance(line):
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def example_alphabet():
    return ALPHABETS[4]


@pytest.fixture(scope="session")
def example_gens(example_alphabet):
    return [parse_word("yX", example_alphabet), parse_word("yzYzt", example_alphabet)]


@pytest.fixture(scope="session")
def example_core(example_gens, example_alphabet):
    return build_core(example_gens, example_alphabet)


@dataclass(frozen=True)
class Instance:
    label: str
    alphabet: Alphabet
    gens: tuple
    expect_no_cut_vertex: bool = False


def random_whitehead(rng, rank):
    letters = sigma(rank)
    a = letters[rng.randrange(len(letters))]
    rest = [l for l in letters if abs(l) != abs(a)]
    return WhiteheadAutomorphism(a, frozenset(l for l in rest if rng.random() < 0.5))


def random_free_factor(rng, rank, max_len=12):
    """Image of a proper partial basis under a random chain of Whitehead
    moves.

    Resampled until every image is cyclically reduced as produced (so the
    tuple is an exact automorphic image, hence a genuine free factor) and
    the core has several vertices.  Needs rank >= 3: the only non-cyclic
    free factor of a rank-2 group is the whole group, whose core is a
    single vertex.
    """
    while True:
        k = rng.randint(2, rank - 1)
        words = [(i + 1,) for i in range(k)]
        for _ in range(rng.randint(1, 7)):
            phi = random_whitehead(rng, rank)
            words = [apply_whitehead(phi, w) for w in words]
        if not all(w and is_cyclically_reduced(w) for w in words):
            continue
        if max(len(w) for w in words) > max_len:
            continue
        try:
            graph = build_core(list(words), ALPHABETS[rank])
        except CyclicOrTrivialSubgroupError:
            continue
        if graph.n_vertices >= 2:
            return tuple(words)


def build_corpus(n_random=200):
    rng = random.Random(CORPUS_SEED)
    instances = [
        Instance("worked-example", ALPHABETS[4],
                 (parse_word("yX", ALPHABETS[4]), parse_word("yzYzt", ALPHABETS[4]))),
        Instance("collapsed-example", ALPHABETS[4],
                 (parse_word("X", ALPHABETS[4]), parse_word("zYzt", ALPHABETS[4]))),
        Instance("squares-f2", ALPHABETS[2],
                 (parse_word("xx", ALPHABETS[2]), parse_word("yy", ALPHABETS[2])),
                 expect_no_cut_vertex=True),
        Instance("squares-f3", ALPHABETS[3],
                 tuple(parse_word(w, ALPHABETS[3]) for w in ("xx", "yy", "zz")),
                 expect_no_cut_vertex=True),
        Instance("even-f2", ALPHABETS[2],
                 tuple(parse_word(w, ALPHABETS[2]) for w in ("xx", "yy", "xy")),
                 expect_no_cut_vertex=True),
        Instance("mixed-square", ALPHABETS[2],
                 (parse_word("x", ALPHABETS[2]), parse_word("yy", ALPHABETS[2])),
                 expect_no_cut_vertex=True),
        Instance("full-basis-f2", ALPHABETS[2],
                 (parse_word("x", ALPHABETS[2]), parse_word("y", ALPHABETS[2]))),
    ]
    for i in range(n_random):
        rank = rng.choice([3, 4])
        gens = random_free_factor(rng, rank)
        instances.append(Instance(f"random-{i}", ALPHABETS[rank], gens))
    return instances


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()
