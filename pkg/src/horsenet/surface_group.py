"""Words in the fundamental group of a closed genus-g surface.

Generators are ordered ``a1, b1, ..., ag, bg`` and indexed ``1..2g``; a
letter is a signed index, negative for the inverse. The surface relator is
``[a1, b1] ... [ag, bg]`` with ``[a, b] = a b a^-1 b^-1``.

Words are freely reduced but never reduced modulo the relator: questions
that depend on the relator (crossings, simplicity) are answered through the
Fuchsian representation in :mod:`horsenet.hyperbolic`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "GroupWord",
    "WordError",
    "free_reduce",
    "cyclic_reduce",
    "abelianize",
    "is_primitive",
    "primitive_root",
    "compose",
    "invert",
    "conjugate",
    "power",
    "relator",
    "parse_word",
    "format_word",
    "letter_name",
]


class WordError(ValueError):
    """Raised for malformed letters, tokens or genus mismatches."""


_TOKEN = re.compile(r"^([aAbB])(\d+)$")


def letter_name(letter: int) -> str:
    """Name of a signed generator index; uppercase marks the inverse."""
    idx = abs(letter) - 1
    name = ("a" if idx % 2 == 0 else "b") + str(idx // 2 + 1)
    return name if letter > 0 else name.upper()


def _check_letters(letters: Iterable[int], genus: int) -> list[int]:
    if genus < 1:
        raise WordError(f"genus must be positive, got {genus}")
    out = []
    for x in letters:
        if not isinstance(x, int) or x == 0 or abs(x) > 2 * genus:
            raise WordError(f"invalid letter {x!r} for genus {genus}")
        out.append(x)
    return out


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


@dataclass(frozen=True)
class GroupWord:
    """A freely reduced word in the genus-``genus`` surface group.

    Construct through :func:`free_reduce` or :func:`parse_word`; the
    constructor itself reduces and validates, so every instance satisfies
    the invariants.
    """

    letters: tuple[int, ...]
    genus: int

    def __post_init__(self):
        letters = _reduce(_check_letters(self.letters, self.genus))
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return compose(self, other)

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"GroupWord({format_word(self)!r}, genus={self.genus})"

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @classmethod
    def identity(cls, genus: int) -> "GroupWord":
        return cls((), genus)

    @classmethod
    def generator(cls, index: int, genus: int) -> "GroupWord":
        return cls((index,), genus)


def free_reduce(letters: Sequence[int], genus: int) -> GroupWord:
    """Freely reduce a raw letter sequence.

    >>> str(free_reduce([1, 2, -2, 3], 2))
    'a1 a2'
    """
    return GroupWord(tuple(letters), genus)


def cyclic_reduce(w: GroupWord) -> GroupWord:
    """Strip matching first/last letters; the result is conjugate to ``w``."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return GroupWord(letters[i:j + 1], w.genus)


def cyclic_conjugator(w: GroupWord) -> GroupWord:
    """The prefix ``c`` with ``w = c * cyclic_reduce(w) * c^-1``."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return GroupWord(letters[:i], w.genus)


def abelianize(w: GroupWord) -> tuple[int, ...]:
    """Signed letter counts, i.e. the homology class in ``Z^{2g}``."""
    counts = [0] * (2 * w.genus)
    for x in w.letters:
        counts[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(counts)


def homology_vector(w: GroupWord, period: int = 1) -> tuple[Fraction, ...]:
    """``abelianize(w) / period`` as exact rationals."""
    if period < 1:
        raise WordError(f"period must be positive, got {period}")
    return tuple(Fraction(c, period) for c in abelianize(w))


def _smallest_period(seq: tuple[int, ...]) -> int:
    # prefix function; a string is a proper power iff n % (n - pi[-1]) == 0
    n = len(seq)
    pi = [0] * n
    for i in range(1, n):
        k = pi[i - 1]
        while k and seq[i] != seq[k]:
            k = pi[k - 1]
        if seq[i] == seq[k]:
            k += 1
        pi[i] = k
    p = n - pi[-1]
    return p if n % p == 0 else n


def primitive_root(w: GroupWord) -> tuple[GroupWord, int]:
    """Return ``(u, k)`` with ``cyclic_reduce(w) == u**k`` and ``u`` not a power.

    Raises :class:`WordError` on the identity.
    """
    if w.is_identity:
        raise WordError("the identity has no primitive root")
    core = cyclic_reduce(w).letters
    p = _smallest_period(core)
    return GroupWord(core[:p], w.genus), len(core) // p


def is_primitive(w: GroupWord) -> bool:
    """True iff the cyclically reduced form of ``w`` is not a proper power."""
    return primitive_root(w)[1] == 1


def compose(u: GroupWord, v: GroupWord) -> GroupWord:
    if u.genus != v.genus:
        raise WordError(f"genus mismatch: {u.genus} vs {v.genus}")
    return GroupWord(u.letters + v.letters, u.genus)


def invert(w: GroupWord) -> GroupWord:
    return GroupWord(tuple(-x for x in reversed(w.letters)), w.genus)


def conjugate(w: GroupWord, c: GroupWord) -> GroupWord:
    """``c w c^-1``."""
    return compose(compose(c, w), invert(c))


def power(w: GroupWord, k: int) -> GroupWord:
    if k < 0:
        return power(invert(w), -k)
    return GroupWord(w.letters * k, w.genus)


def relator(genus: int) -> GroupWord:
    """The surface relator ``[a1,b1]...[ag,bg]`` (unreduced it has length 4g)."""
    letters = []
    for i in range(genus):
        a, b = 2 * i + 1, 2 * i + 2
        letters += [a, b, -a, -b]
    return GroupWord(tuple(letters), genus)


def cyclic_rotations(w: GroupWord) -> set[tuple[int, ...]]:
    letters = w.letters
    return {letters[i:] + letters[:i] for i in range(len(letters))}


def same_cyclic_word(u: GroupWord, v: GroupWord) -> bool:
    """True iff the cyclic reductions of ``u`` and ``v`` agree up to rotation.

    Sufficient for conjugacy in the free group on the generators; the
    surface relator is ignored.
    """
    cu, cv = cyclic_reduce(u).letters, cyclic_reduce(v).letters
    if len(cu) != len(cv):
        return False
    return cu in cyclic_rotations(GroupWord(cv, v.genus)) if cu else True


def reduced_words(genus: int, max_length: int) -> Iterable[GroupWord]:
    """All freely reduced words of length ``<= max_length``, shortlex order."""
    alphabet = [x for i in range(1, 2 * genus + 1) for x in (i, -i)]
    frontier: list[tuple[int, ...]] = [()]
    yield GroupWord((), genus)
    for _ in range(max_length):
        nxt = []
        for prefix in frontier:
            for x in alphabet:
                if prefix and prefix[-1] == -x:
                    continue
                word = prefix + (x,)
                nxt.append(word)
                yield GroupWord(word, genus)
        frontier = nxt


def parse_word(text: str, genus: int) -> GroupWord:
    """Parse whitespace-separated tokens such as ``"a1 B1 a2"``.

    Uppercase marks the inverse. An empty string or ``"1"``/``"e"`` is the
    identity.
    """
    tokens = text.split()
    if tokens in ([], ["1"], ["e"]):
        return GroupWord((), genus)
    letters = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"bad token {tok!r} in word {text!r}")
        kind, num = m.group(1), int(m.group(2))
        if num < 1 or num > genus:
            raise WordError(f"generator index {num} out of range for genus {genus} in {text!r}")
        idx = 2 * (num - 1) + (1 if kind.lower() == "a" else 2)
        letters.append(idx if kind.islower() else -idx)
    return GroupWord(tuple(letters), genus)


def format_word(w: GroupWord) -> str:
    return " ".join(letter_name(x) for x in w.letters) if w.letters else "1"
