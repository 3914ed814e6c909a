"""Invertible Mealy automata and the action/restriction calculus.

An automaton over the alphabet ``{0, ..., q-1}`` is stored as two tables:
``out[s][x]`` is the letter written by state ``s`` on reading ``x`` and
``trans[s][x]`` is the state it moves to.  States act on words from the left,
so a group word ``s1 s2 ... sn`` is evaluated with ``sn`` first.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .errors import (
    InvalidAutomaton,
    InvalidOutputRow,
    InvalidTransition,
    LetterOutOfRange,
    OverflowAlphabet,
)
from .words import EPWord, GroupWord, StateRef

POWER_ALPHABET_CAP = 4096


@dataclass(frozen=True)
class Automaton:
    q: int
    names: tuple[str, ...]
    out: tuple[tuple[int, ...], ...]
    trans: tuple[tuple[int, ...], ...]
    identity: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "out", tuple(tuple(r) for r in self.out))
        object.__setattr__(self, "trans", tuple(tuple(r) for r in self.trans))
        if self.q < 2:
            raise InvalidAutomaton(f"alphabet needs at least two letters, got {self.q}")
        n = len(self.names)
        if len(set(self.names)) != n:
            raise InvalidAutomaton("state names must be distinct")
        if len(self.out) != n or len(self.trans) != n:
            raise InvalidAutomaton("tables must have one row per state")
        for name, o, t in zip(self.names, self.out, self.trans):
            if len(o) != self.q or len(t) != self.q:
                raise InvalidAutomaton(f"row of state {name!r} must have {self.q} entries")
        if self.identity is not None and not 0 <= self.identity < n:
            raise InvalidAutomaton(f"identity index {self.identity} out of range")

    @classmethod
    def from_rows(cls, q: int, rows: Mapping[str, tuple[Sequence[int], Sequence[str]]],
                  identity: str | None = None) -> Automaton:
        """Build from ``{name: (out_row, next_names)}`` in insertion order."""
        names = list(rows)
        idx = {n: i for i, n in enumerate(names)}
        out, trans = [], []
        for name, (o, nxt) in rows.items():
            out.append(tuple(o))
            row = []
            for x, t in enumerate(nxt):
                if t not in idx:
                    raise InvalidTransition(name, x)
                row.append(idx[t])
            trans.append(tuple(row))
        ident = None
        if identity is not None:
            if identity not in idx:
                raise InvalidAutomaton(f"identity state {identity!r} is not a state")
            ident = idx[identity]
        return cls(q, tuple(names), tuple(out), tuple(trans), ident)

    def __len__(self):
        return len(self.names)

    def index(self, s: StateRef) -> int:
        if isinstance(s, int):
            if not 0 <= s < len(self.names):
                raise InvalidAutomaton(f"no state with index {s}")
            return s
        try:
            return self.names.index(s)
        except ValueError:
            raise InvalidAutomaton(f"no state named {s!r}") from None

    def state_names(self, word: Sequence[int]) -> list[str]:
        return [self.names[i] for i in word]

    # JSON automaton document

    def to_document(self) -> dict[str, Any]:
        return {
            "alphabet_size": self.q,
            "states": list(self.names),
            "identity": None if self.identity is None else self.names[self.identity],
            "transitions": {
                name: {"out": list(self.out[i]), "next": [self.names[t] for t in self.trans[i]]}
                for i, name in enumerate(self.names)
            },
        }

    @classmethod
    def from_document(cls, doc: Any) -> Automaton:
        if not isinstance(doc, dict):
            raise InvalidAutomaton("$: automaton document must be a JSON object")
        extra = set(doc) - {"alphabet_size", "states", "identity", "transitions"}
        if extra:
            raise InvalidAutomaton(f"$: unknown fields {sorted(extra)}")
        for key in ("alphabet_size", "states", "transitions"):
            if key not in doc:
                raise InvalidAutomaton(f"$: missing field {key!r}")
        q = doc["alphabet_size"]
        if not isinstance(q, int) or isinstance(q, bool):
            raise InvalidAutomaton("$.alphabet_size: expected an integer")
        states = doc["states"]
        if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
            raise InvalidAutomaton("$.states: expected a list of names")
        trans = doc["transitions"]
        if not isinstance(trans, dict):
            raise InvalidAutomaton("$.transitions: expected an object")
        if set(trans) != set(states):
            raise InvalidAutomaton("$.transitions: keys must equal the state list")
        rows = {}
        for s in states:
            entry = trans[s]
            where = f"$.transitions.{s}"
            if not isinstance(entry, dict) or set(entry) != {"out", "next"}:
                raise InvalidAutomaton(f"{where}: expected exactly the fields 'out' and 'next'")
            o, nxt = entry["out"], entry["next"]
            if not isinstance(o, list) or not all(isinstance(y, int) for y in o):
                raise InvalidAutomaton(f"{where}.out: expected a list of integers")
            if not isinstance(nxt, list) or not all(isinstance(t, str) for t in nxt):
                raise InvalidAutomaton(f"{where}.next: expected a list of state names")
            rows[s] = (o, nxt)
        identity = doc.get("identity")
        if identity is not None and not isinstance(identity, str):
            raise InvalidAutomaton("$.identity: expected a state name or null")
        return cls.from_rows(q, rows, identity)

    def dumps(self) -> str:
        return json.dumps(self.to_document(), indent=2)

    @classmethod
    def loads(cls, text: str) -> Automaton:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidAutomaton(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_document(doc)


@dataclass(frozen=True)
class ValidationReport:
    invertible: bool
    n_states: int
    reachable_from_first: tuple[str, ...]
    unreachable_from_first: tuple[str, ...]
    trivial_state: str | None
    minimal: bool

    def to_dict(self):
        return {
            "valid": self.invertible,
            "n_states": self.n_states,
            "reachable_from_first": list(self.reachable_from_first),
            "unreachable_from_first": list(self.unreachable_from_first),
            "trivial_state": self.trivial_state,
            "minimal": self.minimal,
        }


def check_tables(a: Automaton) -> None:
    """Raise if some output row is not a permutation or a transition dangles."""
    n = len(a)
    for s, name in enumerate(a.names):
        if sorted(a.out[s]) != list(range(a.q)):
            raise InvalidOutputRow(name)
        for x, t in enumerate(a.trans[s]):
            if not 0 <= t < n:
                raise InvalidTransition(name, x)


def validate_automaton(a: Automaton) -> ValidationReport:
    check_tables(a)
    seen = {0}
    stack = [0]
    while stack:
        s = stack.pop()
        for t in a.trans[s]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    m, classes = minimize_with_map(a)
    triv = None
    if m.identity is not None:
        triv = next(a.names[s] for s in range(len(a)) if classes[s] == m.identity)
    return ValidationReport(
        invertible=True,
        n_states=len(a),
        reachable_from_first=tuple(a.names[s] for s in sorted(seen)),
        unreachable_from_first=tuple(a.names[s] for s in range(len(a)) if s not in seen),
        trivial_state=triv,
        minimal=len(m) == len(a),
    )


def refine_partition(out: Sequence[Sequence[int]], trans: Sequence[Sequence[int]]) -> list[int]:
    """Moore partition refinement; returns class ids numbered by first occurrence.

    States end up in one class iff they induce the same transformation of
    X^omega.
    """
    def renumber(keys):
        ids: dict[Any, int] = {}
        return [ids.setdefault(k, len(ids)) for k in keys]

    cls = renumber(tuple(o) for o in out)
    while True:
        new = renumber((cls[s], tuple(cls[t] for t in trans[s])) for s in range(len(out)))
        if max(new, default=-1) == max(cls, default=-1):
            return new
        cls = new


def minimize_with_map(a: Automaton) -> tuple[Automaton, list[int]]:
    """Quotient automaton plus the class index of every original state."""
    check_tables(a)
    cls = refine_partition(a.out, a.trans)
    k = max(cls) + 1
    rep = [-1] * k
    for s, c in enumerate(cls):
        if rep[c] < 0:
            rep[c] = s
    out = tuple(a.out[r] for r in rep)
    trans = tuple(tuple(cls[t] for t in a.trans[r]) for r in rep)
    ident = None
    idperm = tuple(range(a.q))
    for c in range(k):
        if out[c] == idperm and all(t == c for t in trans[c]):
            ident = c
            break
    return Automaton(a.q, tuple(a.names[r] for r in rep), out, trans, ident), cls


def minimize(a: Automaton) -> Automaton:
    return minimize_with_map(a)[0]


def _inverse_perm(p: Sequence[int]) -> list[int]:
    inv = [0] * len(p)
    for x, y in enumerate(p):
        inv[y] = x
    return inv


def inverse_name(name: str) -> str:
    return name[:-3] if name.endswith("^-1") else name + "^-1"


def _union_with_inverses(a: Automaton) -> Automaton:
    n = len(a)
    out = list(a.out)
    trans = list(a.trans)
    for s in range(n):
        inv = _inverse_perm(a.out[s])
        out.append(tuple(inv))
        trans.append(tuple(n + a.trans[s][inv[y]] for y in range(a.q)))
    names = list(a.names)
    taken = set(names)
    for name in a.names:
        alt = inverse_name(name)
        while alt in taken:
            alt += "'"
        taken.add(alt)
        names.append(alt)
    return Automaton(a.q, tuple(names), tuple(out), tuple(trans))


def inverse_automaton(a: Automaton) -> Automaton:
    """Minimized disjoint union of ``a`` and the formal inverses of its states.

    The inverse of ``s`` reads ``y``, writes ``x = out[s]^-1(y)`` and moves to
    the inverse of ``trans[s][x]``.  States are named ``s^-1`` unless they
    merge with an original state.
    """
    return minimize(_union_with_inverses(a))


@dataclass(frozen=True, eq=False)
class Symmetrized:
    """A symmetric self-similar generating set built from an automaton.

    ``mapping[(i, sign)]`` is the state of ``automaton`` realizing state ``i``
    of ``source`` (``sign=+1``) or its inverse (``sign=-1``); ``inverse[j]`` is
    the state acting as the inverse of state ``j``.
    """

    source: Automaton
    automaton: Automaton
    mapping: Mapping[tuple[int, int], int]
    inverse: tuple[int, ...]
    _lookup: Mapping[str, int] = field(default_factory=dict, repr=False)

    def resolve(self, g: GroupWord | Sequence[int]) -> tuple[int, ...]:
        """Translate a signed word into a positive word over ``automaton``."""
        if not isinstance(g, GroupWord):
            return tuple(self.mapping[(self.source.index(int(i)), 1)] for i in g)
        word = []
        for state, sign in g.letters:
            if isinstance(state, str) and state not in self.source.names and state in self._lookup:
                j = self._lookup[state]
                word.append(j if sign > 0 else self.inverse[j])
                continue
            word.append(self.mapping[(self.source.index(state), sign)])
        return tuple(word)

    def generators(self) -> list[int]:
        """Non-identity states, in index order."""
        return [s for s in range(len(self.automaton)) if s != self.automaton.identity]

    def invert(self, word: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.inverse[s] for s in reversed(word))


@functools.lru_cache(maxsize=256)
def symmetric_closure(a: Automaton) -> Symmetrized:
    union = _union_with_inverses(a)
    m, cls = minimize_with_map(union)
    n = len(a)
    mapping = {}
    for i in range(n):
        mapping[(i, 1)] = cls[i]
        mapping[(i, -1)] = cls[n + i]
    # inverse of a class: take any member and look up its partner
    inverse = [-1] * len(m)
    for j in range(2 * n):
        partner = j + n if j < n else j - n
        inverse[cls[j]] = cls[partner]
    lookup = {name: j for j, name in enumerate(m.names)}
    return Symmetrized(a, m, mapping, tuple(inverse), lookup)


def power_alphabet(a: Automaton, n: int, cap: int = POWER_ALPHABET_CAP) -> Automaton:
    """The automaton over X^n; the word x1..xn is the letter x1 + x2*q + ... ."""
    if n < 1:
        raise ValueError("power must be positive")
    Q = a.q ** n
    if Q > cap:
        raise OverflowAlphabet(f"alphabet size {a.q}^{n} = {Q} exceeds cap {cap}")
    words = [decode_letter(c, a.q, n) for c in range(Q)]
    out, trans = [], []
    for s in range(len(a)):
        orow, trow = [], []
        for w in words:
            img, rest = apply_state(a, s, w)
            orow.append(encode_letter(img, a.q))
            trow.append(rest)
        out.append(tuple(orow))
        trans.append(tuple(trow))
    return Automaton(Q, a.names, tuple(out), tuple(trans), a.identity)


def encode_letter(word: Sequence[int], q: int) -> int:
    return sum(x * q ** i for i, x in enumerate(word))


def decode_letter(code: int, q: int, n: int) -> tuple[int, ...]:
    word = []
    for _ in range(n):
        code, x = divmod(code, q)
        word.append(x)
    return tuple(word)


def _check_letters(a: Automaton, w: Sequence[int]) -> None:
    for x in w:
        if not 0 <= x < a.q:
            raise LetterOutOfRange(f"letter {x} outside alphabet of size {a.q}")


def apply_state(a: Automaton, s: StateRef, w: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Image of the finite word ``w`` under state ``s`` and the restriction ``s|_w``."""
    _check_letters(a, w)
    s = a.index(s)
    out, trans = a.out, a.trans
    img = []
    for x in w:
        img.append(out[s][x])
        s = trans[s][x]
    return tuple(img), s


def apply_group_word(a: Automaton, g: Sequence[int],
                     w: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Image ``g(w)`` and the induced presentation of ``g|_w``.

    ``g`` is a positive word of state indices; the induced presentation has
    the same length, its i-th letter being ``g[i]`` restricted at the word it
    actually reads.
    """
    _check_letters(a, w)
    out, trans = a.out, a.trans
    cur = list(g)
    img = []
    for x in w:
        for i in range(len(cur) - 1, -1, -1):
            s = cur[i]
            cur[i] = trans[s][x]
            x = out[s][x]
        img.append(x)
    return tuple(img), tuple(cur)


def restrict(a: Automaton, g: Sequence[int], x: int) -> tuple[int, tuple[int, ...]]:
    """One letter of the cocycle: ``(g(x), induced presentation of g|_x)``."""
    out, trans = a.out, a.trans
    res = list(g)
    for i in range(len(res) - 1, -1, -1):
        s = res[i]
        res[i] = trans[s][x]
        x = out[s][x]
    return x, tuple(res)


def act_epword(a: Automaton, g: Sequence[int], w: EPWord) -> EPWord:
    """Exact image of an eventually periodic word under a positive group word.

    After the preperiod the tuple of current restriction states is recorded at
    the start of each period block; the first repeated tuple closes the cycle
    of output blocks.
    """
    if not g:
        return w
    out, trans = a.out, a.trans
    cur = list(reversed(g))

    def block(letters):
        res = []
        for x in letters:
            for i, s in enumerate(cur):
                cur[i] = trans[s][x]
                x = out[s][x]
            res.append(x)
        return res

    head = block(w.pre)
    seen: dict[tuple[int, ...], int] = {}
    blocks = []
    while True:
        key = tuple(cur)
        if key in seen:
            break
        seen[key] = len(blocks)
        blocks.append(block(w.per))
    start = seen[key]
    pre = head + [y for b in blocks[:start] for y in b]
    per = [y for b in blocks[start:] for y in b]
    return EPWord(tuple(pre), tuple(per))


def trivial_automaton(q: int = 2) -> Automaton:
    return Automaton(q, ("e",), (tuple(range(q)),), ((0,) * q,), 0)


def subautomaton(a: Automaton, states: Sequence[StateRef]) -> Automaton:
    """Restrict ``a`` to ``states``, which must be closed under transitions."""
    keep = sorted({a.index(s) for s in states})
    pos = {s: i for i, s in enumerate(keep)}
    for s in keep:
        for x, t in enumerate(a.trans[s]):
            if t not in pos:
                raise InvalidTransition(a.names[s], x)
    ident = pos.get(a.identity) if a.identity is not None else None
    return Automaton(a.q, tuple(a.names[s] for s in keep), tuple(a.out[s] for s in keep),
                     tuple(tuple(pos[t] for t in a.trans[s]) for s in keep), ident)
