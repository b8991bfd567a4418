"""Letters, words, free/cyclic reduction, and Whitehead automorphisms.

A letter is a signed integer: ``+i`` is the i-th generator (1-based) and
``-i`` its inverse.  A word is a tuple of letters.  Both are plain
immutable values, safe to share and to use as dict keys.

Two text syntaxes are supported.  The compact one writes generators as
their lowercase names and inverses as the uppercase names ("yX" is
y * x^-1).  The explicit one separates letters with whitespace and marks
exponents with a caret ("y x^-1").  Parsing and printing round-trip
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import WordParseError

Letter = int
Word = tuple[int, ...]


def inv(letter: Letter) -> Letter:
    """Inverse of a letter (negation)."""
    return -letter


def letter_key(letter: Letter) -> tuple[int, int]:
    """Global sort key: by generator index, positive before inverse.

    This single order is the tie-breaker used by every enumeration
    downstream (vertex discovery, state orderings, cut-vertex search).
    """
    return (abs(letter), 0 if letter > 0 else 1)


def sigma(rank: int) -> tuple[Letter, ...]:
    """All 2*rank letters in the global order: x1, x1^-1, x2, x2^-1, ..."""
    out = []
    for g in range(1, rank + 1):
        out.extend((g, -g))
    return tuple(out)


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names for a free group of rank >= 2.

    Names must be distinct single lowercase ASCII letters so that the
    compact uppercase-inverse syntax is unambiguous.
    """

    names: tuple[str, ...]

    def __post_init__(self):
        if len(self.names) < 2:
            raise WordParseError("alphabet needs rank >= 2")
        for n in self.names:
            if len(n) != 1 or not ("a" <= n <= "z"):
                raise WordParseError(f"alphabet name {n!r} is not a lowercase letter")
        if len(set(self.names)) != len(self.names):
            raise WordParseError("alphabet names must be pairwise distinct")

    @property
    def rank(self) -> int:
        return len(self.names)

    @classmethod
    def from_spec(cls, spec: str) -> "Alphabet":
        """Parse "xyzt" or "x,y,z,t" into an alphabet."""
        names = spec.split(",") if "," in spec else list(spec.strip())
        return cls(tuple(n.strip() for n in names))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise WordParseError(f"unknown generator {name!r}") from None

    def spell(self, letter: Letter) -> str:
        name = self.names[abs(letter) - 1]
        return name if letter > 0 else name.upper()

    def spell_caret(self, letter: Letter) -> str:
        name = self.names[abs(letter) - 1]
        return name if letter > 0 else name + "^-1"


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse either word syntax; raises WordParseError with a column."""
    text = text.strip()
    if not text or text == "1":
        return ()
    if any(c.isspace() for c in text) or "^" in text or "*" in text:
        return _parse_explicit(text, alphabet)
    letters = []
    for col, ch in enumerate(text, start=1):
        if "a" <= ch <= "z":
            letters.append(alphabet.index(ch))
        elif "A" <= ch <= "Z":
            letters.append(-alphabet.index(ch.lower()))
        else:
            raise WordParseError(f"unexpected character {ch!r}", column=col)
    return tuple(letters)


def _parse_explicit(text: str, alphabet: Alphabet) -> Word:
    letters: list[int] = []
    col = 0
    for token in text.replace("*", " ").split():
        col = text.index(token, col) + 1
        name, caret, exp = token.partition("^")
        try:
            if "A" <= name <= "Z":
                base = -alphabet.index(name.lower())
            else:
                base = alphabet.index(name)
        except WordParseError as exc:
            raise WordParseError(str(exc), column=col) from None
        if caret:
            try:
                power = int(exp)
            except ValueError:
                raise WordParseError(f"bad exponent {exp!r}", column=col) from None
            if power == 0:
                raise WordParseError("zero exponent", column=col)
        else:
            power = 1
        letters.extend([base if power > 0 else -base] * abs(power))
        col += len(token) - 1
    return tuple(letters)


def format_word(word: Sequence[Letter], alphabet: Alphabet) -> str:
    """Compact rendering; the empty word prints as "1"."""
    if not word:
        return "1"
    return "".join(alphabet.spell(l) for l in word)


def free_reduce(word: Iterable[Letter]) -> Word:
    """The unique freely reduced word equal to the input; idempotent."""
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def is_reduced(word: Sequence[Letter]) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def is_cyclically_reduced(word: Sequence[Letter]) -> bool:
    if not is_reduced(word):
        return False
    return len(word) < 2 or word[0] != -word[-1]


def inverse_word(word: Sequence[Letter]) -> Word:
    return tuple(-l for l in reversed(word))


def cyclic_reduce(word: Iterable[Letter]) -> tuple[Word, Word]:
    """Split a word as conjugator * core * conjugator^-1.

    The core is cyclically reduced and the original word freely reduces
    to the recombination.  For an already cyclically reduced word the
    conjugator is empty.
    """
    w = list(free_reduce(word))
    prefix: list[int] = []
    while len(w) >= 2 and w[0] == -w[-1]:
        prefix.append(w[0])
        w = w[1:-1]
    return tuple(w), tuple(prefix)


@dataclass(frozen=True)
class WhiteheadAutomorphism:
    """The automorphism (A, a): a maps to itself and every other
    generator picks up ``a`` on the left iff it lies in A and ``a^-1``
    on the right iff its inverse lies in A.

    The inverse automorphism is (A, a^-1).
    """

    a: Letter
    members: frozenset[Letter]

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("multiplier letter must be nonzero")
        if self.a in self.members or -self.a in self.members:
            raise ValueError("A must avoid the multiplier and its inverse")
        if 0 in self.members:
            raise ValueError("letters are nonzero integers")

    def inverse(self) -> "WhiteheadAutomorphism":
        return WhiteheadAutomorphism(-self.a, self.members)

    def letter_image(self, letter: Letter) -> Word:
        if abs(letter) == abs(self.a):
            return (letter,)
        g = abs(letter)
        img = []
        if g in self.members:
            img.append(self.a)
        img.append(g)
        if -g in self.members:
            img.append(-self.a)
        if letter < 0:
            img = [-l for l in reversed(img)]
        return tuple(img)

    def format(self, alphabet: Alphabet) -> str:
        inside = ",".join(
            alphabet.spell(l) for l in sorted(self.members, key=letter_key)
        )
        return f"({{{inside}}}, {alphabet.spell(self.a)})"


def apply_whitehead(phi: WhiteheadAutomorphism, word: Iterable[Letter]) -> Word:
    """Image of a word under (A, a), freely reduced."""
    out: list[int] = []
    for letter in word:
        for l in phi.letter_image(letter):
            if out and out[-1] == -l:
                out.pop()
            else:
                out.append(l)
    return tuple(out)
