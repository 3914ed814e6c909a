"""Exact word problem for automaton groups.

A positive word over a symmetric automaton is trivial iff it fixes every
letter and each of its restrictions at a letter is trivial.  Restrictions of
a word are again words of the same length (the induced presentation), so the
search space is finite and the recursion is decided coinductively: a key met
again while it is still being explored is assumed trivial.  Answers are
committed to the cache per strongly connected block of the search, which
keeps the cache sound across queries.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .core import Automaton, Symmetrized, restrict, symmetric_closure
from .errors import BudgetExceeded
from .words import GroupWord, all_words

NAIVE_BUDGET = 1 << 20

Key = tuple[int, ...]


def reduce_key(sym: Symmetrized, word: Sequence[int]) -> Key:
    """Drop trivial-state letters and cancel adjacent ``s s^-1`` pairs."""
    ident = sym.automaton.identity
    inv = sym.inverse
    stack: list[int] = []
    for s in word:
        if s == ident:
            continue
        if stack and inv[stack[-1]] == s:
            stack.pop()
        else:
            stack.append(s)
    return tuple(stack)


@dataclass(eq=False)
class WordProblemSolver:
    """Memoized triviality test over one symmetrized automaton.

    ``letter_order`` only permutes the order in which restrictions are
    explored; answers do not depend on it.
    """

    sym: Symmetrized
    letter_order: tuple[int, ...] | None = None
    memo: dict[Key, bool] = field(default_factory=dict)
    visited: int = 0

    def __post_init__(self):
        a = self.sym.automaton
        if self.letter_order is None:
            self.letter_order = tuple(range(a.q))

    @classmethod
    def for_automaton(cls, a: Automaton, **kw) -> WordProblemSolver:
        return cls(symmetric_closure(a), **kw)

    def key(self, g: GroupWord | Sequence[int]) -> Key:
        return reduce_key(self.sym, self.sym.resolve(g) if isinstance(g, GroupWord) else g)

    def is_trivial(self, g: GroupWord | Sequence[int]) -> bool:
        """``g`` is either a GroupWord over the source automaton or a positive
        word of state indices of the symmetrized automaton."""
        return self._solve(self.key(g))

    def are_equal(self, g, h) -> bool:
        g, h = self.key(g), self.key(h)
        return self._solve(reduce_key(self.sym, g + self.sym.invert(h)))

    def _solve(self, root: Key) -> bool:
        if not root:
            return True
        if root in self.memo:
            return self.memo[root]
        a = self.sym.automaton
        letters = self.letter_order
        # iterative Tarjan over the graph of keys; a failure anywhere below
        # makes every key on the current path nontrivial
        index: dict[Key, int] = {}
        low: dict[Key, int] = {}
        on_stack: set[Key] = set()
        stack: list[Key] = []
        path: list[tuple[Key, list[Key]]] = []

        def open_node(k: Key) -> list[Key] | None:
            children = []
            for x in letters:
                y, r = restrict(a, k, x)
                if y != x:
                    return None
                children.append(reduce_key(self.sym, r))
            return children

        def fail() -> bool:
            for k, _ in path:
                self.memo[k] = False
            return False

        children = open_node(root)
        self.visited += 1
        if children is None:
            self.memo[root] = False
            return False
        index[root] = low[root] = 0
        stack.append(root)
        on_stack.add(root)
        path.append((root, children))
        while path:
            k, todo = path[-1]
            if todo:
                c = todo.pop()
                if not c or self.memo.get(c) is True:
                    continue
                if self.memo.get(c) is False:
                    return fail()
                if c in index:
                    if c in on_stack:
                        low[k] = min(low[k], index[c])
                    continue
                grand = open_node(c)
                self.visited += 1
                if grand is None:
                    self.memo[c] = False
                    return fail()
                index[c] = low[c] = len(index)
                stack.append(c)
                on_stack.add(c)
                path.append((c, grand))
                continue
            path.pop()
            if path:
                parent = path[-1][0]
                low[parent] = min(low[parent], low[k])
            if low[k] == index[k]:
                while True:
                    m = stack.pop()
                    on_stack.discard(m)
                    self.memo[m] = True
                    if m == k:
                        break
        return True


_solvers: dict[Automaton, WordProblemSolver] = {}


def solver(a: Automaton) -> WordProblemSolver:
    """Shared per-automaton solver (the cache only ever holds proven answers)."""
    s = _solvers.get(a)
    if s is None:
        s = _solvers[a] = WordProblemSolver.for_automaton(a)
    return s


def is_trivial(a: Automaton, g: GroupWord | Sequence[int]) -> bool:
    return solver(a).is_trivial(g)


def are_equal(a: Automaton, g, h) -> bool:
    return solver(a).are_equal(g, h)


UNKNOWN_AT_DEPTH = "unknown_at_depth"


def is_trivial_naive(a: Automaton, g: GroupWord | Sequence[int], depth: int,
                     budget: int = NAIVE_BUDGET) -> bool | str:
    """Semi-decision by brute force on X^depth.

    Returns ``False`` if some word of length ``depth`` is moved and
    ``UNKNOWN_AT_DEPTH`` otherwise; never claims triviality.
    """
    sym = symmetric_closure(a)
    m = sym.automaton
    if m.q ** depth > budget:
        raise BudgetExceeded(f"{m.q}^{depth} words exceed budget {budget}")
    word = sym.resolve(g) if isinstance(g, GroupWord) else tuple(g)
    if not word:
        return UNKNOWN_AT_DEPTH
    out, trans = m.out, m.trans
    rev = word[::-1]
    # walk X^depth level by level; words with the same tuple of restriction
    # states have the same future, so each level keeps one copy of each tuple
    level = {rev}
    for _ in range(depth):
        nxt_level = set()
        for cur in level:
            for x in range(m.q):
                nxt = []
                y = x
                for s in cur:
                    nxt.append(trans[s][y])
                    y = out[s][y]
                if y != x:
                    return False
                nxt_level.add(tuple(nxt))
        level = nxt_level
    return UNKNOWN_AT_DEPTH


def order_probe(a: Automaton, g: GroupWord | Sequence[int], max_order: int) -> int | None:
    """Smallest ``k <= max_order`` with ``g^k`` trivial, or None."""
    if max_order < 1:
        raise ValueError("max_order must be positive")
    s = solver(a)
    word = s.sym.resolve(g) if isinstance(g, GroupWord) else tuple(g)
    for k in range(1, max_order + 1):
        if s.is_trivial(word * k):
            return k
    return None


def random_word(sym: Symmetrized, length: int, rng: random.Random) -> tuple[int, ...]:
    gens = sym.generators()
    return tuple(rng.choice(gens) for _ in range(length))


def fixes_level(a: Automaton, word: Sequence[int], n: int) -> bool:
    """True if the positive word fixes every word of length ``n``."""
    from .core import apply_group_word

    return all(apply_group_word(a, word, w)[0] == w for w in all_words(a.q, n))
