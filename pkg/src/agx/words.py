"""Finite group words and eventually periodic infinite words."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import WordSyntaxError

StateRef = Union[str, int]


@dataclass(frozen=True)
class GroupWord:
    """A signed word ``s1 s2 ... sn`` over the states of an automaton.

    Letters are ``(state, sign)`` pairs where ``state`` is a state name or
    index and ``sign`` is +1 or -1.  Evaluation follows the left action, so
    the rightmost letter acts first.
    """

    letters: tuple[tuple[StateRef, int], ...] = ()

    def __post_init__(self):
        norm = []
        for item in self.letters:
            if isinstance(item, (str, int)):
                item = (item, 1)
            state, sign = item
            if sign not in (1, -1):
                raise WordSyntaxError(f"bad sign {sign!r} for letter {state!r}")
            norm.append((state, sign))
        object.__setattr__(self, "letters", tuple(norm))

    @classmethod
    def parse(cls, text: str) -> GroupWord:
        """Parse the comma separated syntax ``"a,a,-a_1"``; ``""`` is the identity."""
        text = text.strip()
        if not text:
            return cls(())
        letters = []
        for tok in text.split(","):
            tok = tok.strip()
            sign = 1
            if tok.startswith("-"):
                sign, tok = -1, tok[1:].strip()
            if not tok:
                raise WordSyntaxError(f"empty generator name in {text!r}")
            letters.append((tok, sign))
        return cls(tuple(letters))

    @classmethod
    def of(cls, *states: StateRef) -> GroupWord:
        return cls(tuple((s, 1) for s in states))

    def inverse(self) -> GroupWord:
        return GroupWord(tuple((s, -e) for s, e in reversed(self.letters)))

    def __mul__(self, other: GroupWord) -> GroupWord:
        return GroupWord(self.letters + other.letters)

    def __pow__(self, k: int) -> GroupWord:
        if k < 0:
            return self.inverse() ** (-k)
        return GroupWord(self.letters * k)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return ",".join(("-" if e < 0 else "") + str(s) for s, e in self.letters)


def _primitive_root(per: tuple[int, ...]) -> tuple[int, ...]:
    n = len(per)
    for p in range(1, n):
        if n % p == 0 and per[:p] * (n // p) == per:
            return per[:p]
    return per


@dataclass(frozen=True, order=True)
class EPWord:
    """The infinite word ``pre . per per per ...`` in canonical form.

    Canonical means ``per`` is primitive and ``pre`` is as short as possible,
    so two values are equal as points of X^omega iff they compare equal.
    """

    pre: tuple[int, ...]
    per: tuple[int, ...]

    def __post_init__(self):
        pre = tuple(self.pre)
        per = tuple(self.per)
        if not per:
            raise WordSyntaxError("period of an eventually periodic word must be nonempty")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    @classmethod
    def parse(cls, text: str) -> EPWord:
        """Parse ``"u(v)^inf"`` or ``"u(v)"`` with single-digit letters."""
        m = re.fullmatch(r"\s*([0-9]*)\(([0-9]+)\)(\^inf)?\s*", text)
        if not m:
            raise WordSyntaxError(f"cannot parse eventually periodic word {text!r}")
        return cls(digits(m.group(1)), digits(m.group(2)))

    def prefix(self, length: int) -> tuple[int, ...]:
        out = list(self.pre[:length])
        while len(out) < length:
            out.extend(self.per)
        return tuple(out[:length])

    def shift(self, k: int) -> EPWord:
        """Drop the first ``k`` letters."""
        if k <= len(self.pre):
            return EPWord(self.pre[k:], self.per)
        r = (k - len(self.pre)) % len(self.per)
        return EPWord((), self.per[r:] + self.per[:r])

    def __str__(self):
        sep = "," if any(x > 9 for x in self.pre + self.per) else ""
        return f"{sep.join(map(str, self.pre))}({sep.join(map(str, self.per))})^inf"


def digits(text: str) -> tuple[int, ...]:
    """``"0110"`` -> ``(0, 1, 1, 0)``; a comma separated form is also accepted."""
    text = text.strip()
    if not text:
        return ()
    if "," in text:
        return tuple(int(t) for t in text.split(","))
    if not text.isdigit():
        raise WordSyntaxError(f"not a word over digits: {text!r}")
    return tuple(int(c) for c in text)


def all_words(q: int, n: int) -> Iterable[tuple[int, ...]]:
    """All words of length ``n`` in lexicographic order."""
    from itertools import product

    return product(range(q), repeat=n)
