"""Freely reduced words in a free group of fixed rank.

A letter is a nonzero int: ``+i`` is the i-th generator, ``-i`` its inverse
(1-based).  On the text side generator ``i`` is the i-th lowercase letter and
its inverse the matching uppercase letter; the identity renders as ``"1"``.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PreconditionViolated, RankOutOfRange, UnknownLetter

MAX_RANK = 26
IDENTITY_TEXT = "1"


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs with a single stack pass."""
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_freely_reduced(letters: Sequence[int]) -> bool:
    return all(letters[k] != -letters[k + 1] for k in range(len(letters) - 1))


def letter_text(x: int) -> str:
    c = string.ascii_lowercase[abs(x) - 1]
    return c if x > 0 else c.upper()


def check_rank(rank: int) -> None:
    if not 1 <= rank <= MAX_RANK:
        raise RankOutOfRange(f"ambient rank must lie in 1..{MAX_RANK}, got {rank}")


@dataclass(frozen=True, order=True)
class Word:
    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        if not is_freely_reduced(self.letters):
            raise ValueError(f"letters {self.letters} are not freely reduced")
        for x in self.letters:
            if x == 0 or abs(x) > self.rank:
                raise ValueError(f"letter {x} outside rank {self.rank}")

    @classmethod
    def reduce(cls, letters: Iterable[int], rank: int) -> "Word":
        return cls(free_reduce(letters), rank)

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls((), rank)

    @classmethod
    def generator(cls, i: int, rank: int) -> "Word":
        return cls((i,), rank)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        # identity is falsy, like an empty sequence
        return bool(self.letters)

    def __str__(self):
        if not self.letters:
            return IDENTITY_TEXT
        return "".join(letter_text(x) for x in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r}, rank={self.rank})"

    def __mul__(self, other: "Word") -> "Word":
        if self.rank != other.rank:
            raise ValueError("cannot multiply words of different ambient rank")
        return Word.reduce(self.letters + other.letters, self.rank)

    def __invert__(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)), self.rank)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return (~self) ** (-k)
        core, conj = cyclic_reduce(self)
        # a cyclically reduced core never cancels against itself
        return conj * Word(core.letters * k, self.rank) * ~conj

    def conjugate(self, g: "Word") -> "Word":
        """Return ``g^-1 * self * g``."""
        return ~g * self * g

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]


def parse_word(text: str, rank: int) -> Word:
    """Parse ASCII text into a freely reduced word.

    >>> str(parse_word("aBba", 2))
    'aa'
    """
    check_rank(rank)
    text = text.strip()
    if text in ("", IDENTITY_TEXT):
        return Word.identity(rank)
    letters = []
    for pos, c in enumerate(text):
        if not c.isascii() or not c.isalpha():
            raise UnknownLetter(f"unexpected character {c!r} at position {pos}")
        i = string.ascii_lowercase.index(c.lower()) + 1
        if i > rank:
            raise UnknownLetter(f"letter {c!r} at position {pos} exceeds rank {rank}")
        letters.append(i if c.islower() else -i)
    return Word.reduce(letters, rank)


def parse_word_list(text: str, rank: int) -> list[Word]:
    """Parse a comma-separated list; blank input gives no words."""
    items = [t for t in (s.strip() for s in text.split(",")) if t]
    return [parse_word(t, rank) for t in items]


def render(w: Word) -> str:
    return str(w)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with core cyclically reduced."""
    letters = w.letters
    k = 0
    n = len(letters)
    while n - 2 * k >= 2 and letters[k] == -letters[n - 1 - k]:
        k += 1
    return Word(letters[k:n - k], w.rank), Word(letters[:k], w.rank)


def max_power(w: Word, g: int) -> int:
    """Longest run of ``g`` or ``g^-1`` in ``w``, scanning linearly."""
    best = run = 0
    prev = 0
    for x in w.letters:
        if abs(x) == g and x == prev:
            run += 1
        elif abs(x) == g:
            run = 1
        else:
            run = 0
        prev = x
        best = max(best, run)
    return best


def is_proper_power(w: Word) -> bool:
    """True when the cyclically reduced core of ``w`` is a proper power."""
    core, _ = cyclic_reduce(w)
    n = len(core)
    for d in range(1, n // 2 + 1):
        if n % d == 0 and core.letters == core.letters[:d] * (n // d):
            return True
    return False


def malnormal_generators(f: Word, p: int, q: int) -> tuple[Word, Word]:
    """Assemble ``g2 g1 g2^q f^2 g1 g2`` and ``g1 g2 f^2 g1^p g2 g1``.

    ``f`` must start with ``g1`` and end with ``g2``; ``p`` and ``q`` must be
    at least 3 and exceed the longest runs of ``g1`` and ``g2`` in ``f``.
    The pieces are concatenated without any cancellation.
    """
    if f.rank < 2:
        raise PreconditionViolated("ambient rank must be at least 2")
    if not f.letters or f.letters[0] != 1 or f.letters[-1] != 2:
        raise PreconditionViolated(f"{f} must begin with a and end with b")
    if p < 3 or p <= max_power(f, 1):
        raise PreconditionViolated(f"p={p} must be >= 3 and exceed the longest a-run of {f}")
    if q < 3 or q <= max_power(f, 2):
        raise PreconditionViolated(f"q={q} must be >= 3 and exceed the longest b-run of {f}")
    ff = f.letters * 2
    first = (2, 1) + (2,) * q + ff + (1, 2)
    second = (1, 2) + ff + (1,) * p + (2, 1)
    # Word() rejects unreduced input, so construction proves nothing cancelled
    return Word(first, f.rank), Word(second, f.rank)
