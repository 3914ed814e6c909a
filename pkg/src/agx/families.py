"""Constructors for the automata used as fixtures throughout agx.

Tags understood by :func:`parse_spec`: ``adding``, ``omega:<binary word>``,
``hanoi:<k>`` and ``nonpoly_b``.  Hanoi automata use letter ``i - 1`` for
peg ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import Automaton, minimize, validate_automaton
from .errors import UnsupportedParameter

HANOI_MAX_PEGS = 8


@dataclass(frozen=True)
class FamilySpec:
    tag: str
    word: tuple[int, ...] = ()
    pegs: int = 0

    def __post_init__(self):
        if self.tag not in ("adding", "omega", "hanoi", "nonpoly_b"):
            raise UnsupportedParameter(f"unknown family {self.tag!r}")
        if self.tag == "omega" and any(x not in (0, 1) for x in self.word):
            raise UnsupportedParameter("omega family needs a binary word")
        if self.tag == "hanoi" and not 3 <= self.pegs <= HANOI_MAX_PEGS:
            raise UnsupportedParameter(f"hanoi needs 3 <= k <= {HANOI_MAX_PEGS}, got {self.pegs}")

    def __str__(self):
        if self.tag == "omega":
            return "omega:" + "".join(map(str, self.word))
        if self.tag == "hanoi":
            return f"hanoi:{self.pegs}"
        return self.tag


def parse_spec(text: str) -> FamilySpec:
    tag, _, param = text.strip().partition(":")
    if tag == "omega":
        if param and not set(param) <= {"0", "1"}:
            raise UnsupportedParameter(f"omega parameter must be binary, got {param!r}")
        return FamilySpec("omega", word=tuple(int(c) for c in param))
    if tag == "hanoi":
        try:
            k = int(param)
        except ValueError:
            raise UnsupportedParameter(f"hanoi parameter must be an integer, got {param!r}") from None
        return FamilySpec("hanoi", pegs=k)
    if param:
        raise UnsupportedParameter(f"family {tag!r} takes no parameter")
    return FamilySpec(tag)


def adding_machine() -> Automaton:
    return omega(())


def omega(v) -> Automaton:
    """Chain automaton for the binary word ``v = x1...xk``.

    ``a`` is the adding machine; ``a_i`` keeps reading ``x_i`` and on the
    opposite letter hands over to ``a_{i-1}`` (with ``a_0 = a``).
    """
    v = tuple(v)
    rows = {
        "e": ((0, 1), ("e", "e")),
        "a": ((1, 0), ("e", "a")),
    }
    for i, x in enumerate(v, start=1):
        prev = "a" if i == 1 else f"a_{i - 1}"
        nxt = [None, None]
        nxt[x] = f"a_{i}"
        nxt[1 - x] = prev
        rows[f"a_{i}"] = ((0, 1), tuple(nxt))
    # keep a before e for readability of the adding machine
    order = ["a", "e"] + [f"a_{i}" for i in range(1, len(v) + 1)]
    return Automaton.from_rows(2, {k: rows[k] for k in order}, identity="e")


def hanoi(k: int) -> Automaton:
    """Towers of Hanoi automaton on ``k`` pegs; state ``aij`` moves a disk between pegs i and j."""
    if not 3 <= k <= HANOI_MAX_PEGS:
        raise UnsupportedParameter(f"hanoi needs 3 <= k <= {HANOI_MAX_PEGS}, got {k}")
    rows = {}
    for i in range(k):
        for j in range(i + 1, k):
            out = list(range(k))
            out[i], out[j] = j, i
            nxt = [f"a{i + 1}{j + 1}"] * k
            nxt[i] = nxt[j] = "e"
            rows[f"a{i + 1}{j + 1}"] = (out, nxt)
    rows["e"] = (list(range(k)), ["e"] * k)
    return Automaton.from_rows(k, rows, identity="e")


def nonpoly_b() -> Automaton:
    """Binary automaton whose states b^k act as the 2-adic translation by k/3.

    ``c`` copies ``0`` and hands over to ``b`` after the first ``1``.  The
    states ``b^{+-1}, b^{+-2}, e`` form a subautomaton generating an infinite
    cyclic group.
    """
    rows = {
        "b": ((1, 0), ("b^-1", "b^2")),
        "c": ((0, 1), ("c", "b")),
        "b^-1": ((1, 0), ("b^-2", "b")),
        "b^2": ((0, 1), ("b", "b")),
        "b^-2": ((0, 1), ("b^-1", "b^-1")),
        "e": ((0, 1), ("e", "e")),
    }
    return Automaton.from_rows(2, rows, identity="e")


def build(spec: FamilySpec | str) -> Automaton:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if spec.tag == "adding":
        a = adding_machine()
    elif spec.tag == "omega":
        a = omega(spec.word)
    elif spec.tag == "hanoi":
        a = hanoi(spec.pegs)
    else:
        a = nonpoly_b()
    validate_automaton(a)
    return minimize(a)
