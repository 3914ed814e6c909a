"""Cycle structure of automata: polynomial degree, nucleus, contraction probes."""
from __future__ import annotations

import csv
import io
import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .core import (
    Automaton,
    apply_group_word,
    minimize,
    refine_partition,
    restrict,
    symmetric_closure,
)
from .errors import NotPolynomial, SizeCapExceeded
from .wordproblem import reduce_key, solver
from .words import all_words

NOT_POLYNOMIAL = "not polynomial"


@dataclass
class ClassificationReport:
    names: tuple[str, ...]
    scc_list: list[list[str]]
    cycle_sccs: list[bool]
    is_polynomial: bool
    degree: int | str
    state_degree: dict[str, int | str]
    circuit_states: set[str]
    finitary_states: set[str]

    def to_dict(self):
        return {
            "scc_list": self.scc_list,
            "cycle_sccs": self.cycle_sccs,
            "is_polynomial": self.is_polynomial,
            "degree": self.degree,
            "state_degree": self.state_degree,
            "circuit_states": sorted(self.circuit_states),
            "finitary_states": sorted(self.finitary_states),
        }


def moore_graph(a: Automaton, skip_identity: bool = True) -> nx.DiGraph:
    g = nx.DiGraph()
    for s in range(len(a)):
        if skip_identity and s == a.identity:
            continue
        g.add_node(s)
        for t in a.trans[s]:
            if not (skip_identity and t == a.identity):
                g.add_edge(s, t)
    return g


def classify(a: Automaton) -> ClassificationReport:
    a = minimize(a)
    g = moore_graph(a)
    cond = nx.condensation(g)
    members = cond.graph["mapping"]  # state -> scc id

    def internal_arrows(s, comp):
        return sum(1 for t in a.trans[s] if t != a.identity and members.get(t) == comp)

    kind = {}  # scc id -> "none" | "cycle" | "tangle"
    for c in cond.nodes:
        arrows = [internal_arrows(s, c) for s in cond.nodes[c]["members"]]
        if sum(arrows) == 0:
            kind[c] = "none"
        elif all(k == 1 for k in arrows):
            kind[c] = "cycle"
        else:
            kind[c] = "tangle"

    # number of cycle components on the longest chain starting at each component
    chain: dict[int, int | None] = {}
    for c in reversed(list(nx.topological_sort(cond))):
        if kind[c] == "tangle":
            chain[c] = None
            continue
        below = [chain[d] for d in cond.successors(c)]
        if any(v is None for v in below):
            chain[c] = None
        else:
            chain[c] = (kind[c] == "cycle") + max(below, default=0)

    state_degree: dict[str, int | str] = {}
    for s in range(len(a)):
        if s == a.identity:
            state_degree[a.names[s]] = -1
            continue
        v = chain[members[s]]
        state_degree[a.names[s]] = NOT_POLYNOMIAL if v is None else v - 1
    order = sorted(cond.nodes, key=lambda c: min(cond.nodes[c]["members"]))
    is_poly = all(kind[c] != "tangle" for c in cond.nodes)
    if is_poly:
        degree = max((d for d in state_degree.values()), default=-1)
    else:
        degree = NOT_POLYNOMIAL
    return ClassificationReport(
        names=a.names,
        scc_list=[[a.names[s] for s in sorted(cond.nodes[c]["members"])] for c in order],
        cycle_sccs=[kind[c] == "cycle" for c in order],
        is_polynomial=is_poly,
        degree=degree,
        state_degree=state_degree,
        circuit_states={a.names[s] for c in cond.nodes if kind[c] != "none"
                        for s in cond.nodes[c]["members"]},
        finitary_states={n for n, d in state_degree.items() if d == -1},
    )


def activity_path_count(a: Automaton, n: int) -> int:
    """Number of arrow paths of length ``n`` that avoid the trivial state."""
    a = minimize(a)
    live = [s for s in range(len(a)) if s != a.identity]
    count = {s: 1 for s in live}
    for _ in range(n):
        count = {s: sum(count[t] for t in a.trans[s] if t != a.identity) for s in live}
    return sum(count.values())


# nucleus


@dataclass
class NucleusResult:
    contracting: bool
    nucleus: Automaton | None
    words: list[tuple[int, ...]]
    reason: str
    partial_size: int
    depth_cap: int
    size_cap: int
    symmetrized: Automaton = field(repr=False, default=None)

    def to_dict(self):
        d = {
            "outcome": "contracting" if self.contracting else "inconclusive",
            "reason": self.reason,
            "partial_size": self.partial_size,
            "depth_cap": self.depth_cap,
            "size_cap": self.size_cap,
        }
        if self.nucleus is not None:
            d["nucleus"] = list(self.nucleus.names)
            d["automaton"] = self.nucleus.to_document()
        return d


def _persistent(n_states: int, succ) -> set[int]:
    """States lying on a cycle or reachable from one."""
    g = nx.DiGraph()
    g.add_nodes_from(range(n_states))
    for s in range(n_states):
        for t in succ(s):
            g.add_edge(s, t)
    seeds = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or any(g.has_edge(s, s) for s in comp):
            seeds |= comp
    found = set(seeds)
    stack = list(seeds)
    while stack:
        s = stack.pop()
        for t in g.successors(s):
            if t not in found:
                found.add(t)
                stack.append(t)
    return found


def nucleus(a: Automaton, depth_cap: int = 16, size_cap: int = 512) -> NucleusResult:
    """Certify contraction by growing the set of persistent elements.

    Start from the persistent states of the symmetric closure.  Each round
    forms all pair products of the current set, keeps the pairs that are
    persistent in the pair-product automaton and adjoins those acting
    differently from every known element.  Behavioral equality is decided
    by partition refinement of the combined automaton.  The set is closed
    when a round adds nothing; ``depth_cap`` bounds the number of rounds and
    the verification depth.
    """
    sym = symmetric_closure(a)
    m = sym.automaton
    q = m.q
    keep = sorted(_persistent(len(m), lambda s: m.trans[s]))
    if m.identity is not None and m.identity not in keep:
        keep.append(m.identity)
    pos = {s: i for i, s in enumerate(keep)}
    out = [m.out[s] for s in keep]
    trans = [tuple(pos[t] for t in m.trans[s]) for s in keep]
    words = [(s,) if s != m.identity else () for s in keep]
    names = [m.names[s] for s in keep]

    def result(ok, reason):
        nuc = None
        if ok:
            ident = next((i for i, w in enumerate(words) if solver(a).is_trivial(w)), None)
            nuc = Automaton(q, tuple(names), tuple(out), tuple(trans), ident)
        return NucleusResult(ok, nuc, list(words), reason, len(words), depth_cap, size_cap, m)

    for _ in range(depth_cap):
        n = len(out)
        if n > size_cap:
            return result(False, f"nucleus candidate set exceeds size cap {size_cap}")

        def pair_succ(p):
            i, j = divmod(p, n)
            oj = out[j]
            return {trans[i][oj[x]] * n + trans[j][x] for x in range(q)}

        persistent = sorted(_persistent(n * n, pair_succ))
        ppos = {p: n + k for k, p in enumerate(persistent)}
        c_out = list(out)
        c_trans = list(trans)
        for p in persistent:
            i, j = divmod(p, n)
            oi, oj = out[i], out[j]
            c_out.append(tuple(oi[oj[x]] for x in range(q)))
            c_trans.append(tuple(ppos[trans[i][oj[x]] * n + trans[j][x]] for x in range(q)))
        cls = refine_partition(c_out, c_trans)
        known = {cls[i]: i for i in range(n)}
        fresh: dict[int, int] = {}
        for k, p in enumerate(persistent):
            c = cls[n + k]
            if c not in known and c not in fresh:
                fresh[c] = n + k
        if not fresh:
            if _verify_pairs(out, trans, q, depth_cap):
                return result(True, "closed")
            return result(False, f"pair products not contracted at depth {depth_cap}")
        # adjoin one representative per new class
        for c, rep in fresh.items():
            known[c] = len(out)
            i, j = divmod(persistent[rep - n], n)
            words.append(reduce_key(sym, words[i] + words[j]))
            name = f"{names[i]}*{names[j]}"
            while name in names:
                name += "'"
            names.append(name)
            out.append(c_out[rep])
            trans.append(None)
        for c, rep in fresh.items():
            trans[known[c]] = tuple(known[cls[t]] for t in c_trans[rep])
    return result(False, f"no closure within {depth_cap} rounds")


def _verify_pairs(out, trans, q, depth):
    """All pair products restricted at ``depth`` letters land in the set."""
    n = len(out)
    c_out = list(out)
    c_trans = list(trans)
    for i in range(n):
        for j in range(n):
            oi, oj = out[i], out[j]
            c_out.append(tuple(oi[oj[x]] for x in range(q)))
            c_trans.append(tuple(n + trans[i][oj[x]] * n + trans[j][x] for x in range(q)))
    cls = refine_partition(c_out, c_trans)
    known = {cls[i] for i in range(n)}
    level = set(range(n, n + n * n))
    for _ in range(depth):
        level = {t for p in level for t in c_trans[p]}
    return all(cls[p] in known for p in level)


def verify_nucleus(a: Automaton, res: NucleusResult) -> bool:
    """Independent re-check of a Contracting result via the word problem."""
    if not res.contracting:
        return False
    nuc = res.nucleus
    ws = solver(a)
    sym = ws.sym
    words = res.words
    m = sym.automaton

    def member(w):
        return any(ws.are_equal(w, v) for v in words)

    for w in words:
        for x in range(m.q):
            if not member(restrict(m, w, x)[1]):
                return False
        if not member(sym.invert(w)):
            return False
    if not any(ws.is_trivial(w) for w in words):
        return False
    for u, v in itertools.product(words, repeat=2):
        keys = {reduce_key(sym, u + v)}
        for _ in range(res.depth_cap):
            keys = {reduce_key(sym, restrict(m, k, x)[1]) for k in keys for x in range(m.q)}
        if not all(member(k) for k in keys):
            return False
    return nuc is not None


# weak contraction probe


@dataclass
class ProbeRow:
    n: int
    sample_index: int
    word: str
    minimal_depth: int | None
    outcome: str


@dataclass
class ProbeTable:
    degree: int
    depth_max: int
    rows: list[ProbeRow]

    def to_dict(self):
        return {
            "degree": self.degree,
            "depth_max": self.depth_max,
            "rows": [vars(r) for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "sample_index", "minimal_depth", "outcome"])
        for r in self.rows:
            w.writerow([r.n, r.sample_index, "" if r.minimal_depth is None else r.minimal_depth, r.outcome])
        return buf.getvalue()

    def all_ok(self) -> bool:
        return all(r.outcome == "ok" for r in self.rows)


def layer_degrees(a: Automaton) -> tuple[int, list[int]]:
    """Degree of ``a`` and the degree of every state of its symmetric closure."""
    sym = symmetric_closure(a)
    rep = classify(sym.automaton)
    if not rep.is_polynomial:
        raise NotPolynomial("automaton is not polynomial")
    return rep.degree, [rep.state_degree[nm] for nm in sym.automaton.names]


def dichotomy_depth(m: Automaton, word: Sequence[int], lower: set[int], depth_max: int) -> int | None:
    """Least depth at which every restriction of ``word`` either uses only
    letters from ``lower`` or is fixed, letter for letter, by restricting at
    some single letter."""
    level = {tuple(word)}
    for d in range(depth_max + 1):
        ok = True
        for p in level:
            if all(s in lower for s in p):
                continue
            if any(restrict(m, p, x)[1] == p for x in range(m.q)):
                continue
            ok = False
            break
        if ok:
            return d
        level = {restrict(m, p, x)[1] for p in level for x in range(m.q)}
    return None


def probe_weak_contraction(a: Automaton, word_lengths: Sequence[int], depth_max: int,
                           samples: int, seed: int = 0, exhaustive_up_to: int = 2) -> ProbeTable:
    degree, state_deg = layer_degrees(a)
    sym = symmetric_closure(a)
    m = sym.automaton
    lower = {s for s, d in enumerate(state_deg) if d <= degree - 1}
    gens = sym.generators()
    rng = random.Random(seed)
    rows = []
    for n in word_lengths:
        if n <= exhaustive_up_to or len(gens) ** n <= samples:
            batch = list(itertools.product(gens, repeat=n))
        else:
            batch = [tuple(rng.choice(gens) for _ in range(n)) for _ in range(samples)]
        for k, w in enumerate(batch):
            d = dichotomy_depth(m, w, lower, depth_max)
            rows.append(ProbeRow(n, k, ",".join(m.names[s] for s in w), d,
                                 "ok" if d is not None else "depth_exhausted"))
    return ProbeTable(degree, depth_max, rows)


# restriction spheres


def _fingerprint(m: Automaton, key, depth):
    return tuple(apply_group_word(m, key, w)[0] for w in all_words(m.q, depth))


def restriction_sphere(a: Automaton, prefix: Sequence[int], n: int,
                       size_cap: int = 4096) -> list[tuple[int, ...]]:
    """Distinct elements ``g|_prefix`` over all words ``g`` of length <= n.

    Returns one representative per element as a reduced positive word over
    the symmetric closure, choosing the shortest then lexicographically least
    one; the list is sorted the same way.
    """
    ws = solver(a)
    sym = ws.sym
    m = sym.automaton
    gens = sym.generators()
    keys = set()
    for length in range(n + 1):
        for g in itertools.product(gens, repeat=length):
            keys.add(reduce_key(sym, apply_group_word(m, g, prefix)[1]))
    depth = 1
    while m.q ** (depth + 1) <= 64:
        depth += 1
    buckets: dict[tuple, list[tuple[int, ...]]] = {}
    reps: list[tuple[int, ...]] = []
    for k in sorted(keys, key=lambda k: (len(k), k)):
        bucket = buckets.setdefault(_fingerprint(m, k, depth), [])
        if any(ws.are_equal(k, r) for r in bucket):
            continue
        bucket.append(k)
        reps.append(k)
        if len(reps) > size_cap:
            raise SizeCapExceeded(f"more than {size_cap} distinct restrictions", partial=reps)
    return reps
