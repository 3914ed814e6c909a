"""Schreier graphs on levels X^n and orbital balls around eventually periodic words."""
from __future__ import annotations

import csv
import io
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .core import Automaton, act_epword, symmetric_closure
from .errors import BudgetExceeded
from .words import EPWord, all_words

LEVEL_BUDGET = 3 ** 8
BALL_BUDGET = 2_000_000
EXACT_DIAMETER_LIMIT = 20_000


@dataclass
class SchreierGraph:
    """Simplicial graph: no loops, one edge per vertex pair, labels merged.

    ``edges`` maps ``(i, j)`` with ``i < j`` to the sorted tuple of generator
    names ``s`` with ``s(vertices[i]) == vertices[j]`` or the reverse.
    """

    vertices: list[Hashable]
    edges: dict[tuple[int, int], tuple[str, ...]]
    basepoint: int | None = None
    generators: tuple[str, ...] = ()
    _adj: list[list[int]] | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.vertices)

    def adjacency(self) -> list[list[int]]:
        if self._adj is None:
            adj: list[list[int]] = [[] for _ in self.vertices]
            for i, j in self.edges:
                adj[i].append(j)
                adj[j].append(i)
            for row in adj:
                row.sort()
            self._adj = adj
        return self._adj

    def index(self, v) -> int:
        return self.vertices.index(v)

    def vertex_name(self, i: int) -> str:
        return vertex_name(self.vertices[i])

    def to_dot(self) -> str:
        lines = ["graph schreier {"]
        for i in range(len(self.vertices)):
            extra = ' [shape=doublecircle]' if i == self.basepoint else ""
            lines.append(f'  "{self.vertex_name(i)}"{extra};')
        for (i, j), labels in sorted(self.edges.items()):
            lines.append(f'  "{self.vertex_name(i)}" -- "{self.vertex_name(j)}" [label="{",".join(labels)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "vertices": [self.vertex_name(i) for i in range(len(self.vertices))],
            "edges": [{"u": i, "v": j, "labels": list(lab)} for (i, j), lab in sorted(self.edges.items())],
            "basepoint": self.basepoint,
            "generators": list(self.generators),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def vertex_name(v) -> str:
    if isinstance(v, EPWord):
        return str(v)
    sep = "," if any(x > 9 for x in v) else ""
    return sep.join(map(str, v))


def _add_edge(edges, i, j, label):
    if i == j:
        return
    key = (i, j) if i < j else (j, i)
    edges.setdefault(key, set()).add(label)


def _freeze(edges):
    return {k: tuple(sorted(v)) for k, v in sorted(edges.items())}


def schreier_level_graph(a: Automaton, n: int, budget: int = LEVEL_BUDGET) -> SchreierGraph:
    """Action graph of the symmetrized generators on X^n (lexicographic vertices)."""
    sym = symmetric_closure(a)
    m = sym.automaton
    if m.q ** n > budget:
        raise BudgetExceeded(f"{m.q}^{n} vertices exceed budget {budget}")
    verts = list(all_words(m.q, n))
    index = {w: i for i, w in enumerate(verts)}
    gens = sym.generators()
    out, trans = m.out, m.trans
    edges: dict[tuple[int, int], set[str]] = {}
    for s in gens:
        name = m.names[s]
        for i, w in enumerate(verts):
            st = s
            img = []
            for x in w:
                img.append(out[st][x])
                st = trans[st][x]
            _add_edge(edges, i, index[tuple(img)], name)
    return SchreierGraph(verts, _freeze(edges), 0 if verts else None, tuple(m.names[s] for s in gens))


# metrics


@dataclass
class GraphMetrics:
    components: int
    diameter_per_component: list[int]
    diameter_exact: list[bool]
    ball_sizes_from_basepoint: list[int]

    def to_dict(self):
        return vars(self).copy()


def _csr(g: SchreierGraph) -> csr_matrix:
    n = len(g)
    if not g.edges:
        return csr_matrix((n, n), dtype=np.int8)
    ij = np.array(list(g.edges), dtype=np.int64)
    rows = np.concatenate([ij[:, 0], ij[:, 1]])
    cols = np.concatenate([ij[:, 1], ij[:, 0]])
    return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))


def bfs_distances(g: SchreierGraph, source: int) -> list[int]:
    """Distances from ``source``; -1 for unreachable vertices."""
    adj = g.adjacency()
    dist = [-1] * len(g)
    dist[source] = 0
    dq = deque([source])
    while dq:
        u = dq.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                dq.append(v)
    return dist


def ball_sizes(g: SchreierGraph, source: int) -> list[int]:
    dist = bfs_distances(g, source)
    reach = [d for d in dist if d >= 0]
    counts = [0] * (max(reach) + 1)
    for d in reach:
        counts[d] += 1
    return list(np.cumsum(counts).tolist())


def _eccentricities(mat: csr_matrix, sources: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    chunk = max(1, 8_000_000 // max(n, 1))
    ecc = np.empty(len(sources), dtype=np.int64)
    for k in range(0, len(sources), chunk):
        d = shortest_path(mat, method="D", unweighted=True, directed=False, indices=sources[k:k + chunk])
        d[np.isinf(d)] = -1
        ecc[k:k + chunk] = d.max(axis=1).astype(np.int64)
    return ecc


def _component_diameter(g, mat, members: np.ndarray) -> tuple[int, bool]:
    if len(members) <= EXACT_DIAMETER_LIMIT:
        return int(_eccentricities(mat, members).max()), True
    # double sweep lower bound, then an upper bound from the middle of the sweep path
    d0 = bfs_distances(g, int(members[0]))
    u = max(members, key=lambda v: d0[v])
    du = bfs_distances(g, int(u))
    w = max(members, key=lambda v: du[v])
    lower = du[w]
    dw = bfs_distances(g, int(w))
    mid = next(v for v in members if du[v] == lower // 2 and dw[v] == lower - lower // 2)
    upper = 2 * max(d for d in bfs_distances(g, int(mid)) if d >= 0)
    return lower, lower == upper


def graph_metrics(g: SchreierGraph) -> GraphMetrics:
    n = len(g)
    if n == 0:
        return GraphMetrics(0, [], [], [])
    mat = _csr(g)
    ncomp, labels = connected_components(mat, directed=False)
    # order components by their least vertex
    first = {}
    for v, c in enumerate(labels):
        first.setdefault(int(c), v)
    diam, exact = [], []
    for c in sorted(first, key=first.get):
        d, ok = _component_diameter(g, mat, np.flatnonzero(labels == c))
        diam.append(d)
        exact.append(ok)
    base = g.basepoint if g.basepoint is not None else 0
    return GraphMetrics(int(ncomp), diam, exact, ball_sizes(g, base))


# orbital graphs


def _epword(w) -> EPWord:
    if isinstance(w, EPWord):
        return w
    pre, per = w
    return EPWord(tuple(pre), tuple(per))


class _OrbitBFS:
    """Breadth-first expansion of the orbit of an eventually periodic word."""

    def __init__(self, a: Automaton, w, budget: int):
        self.sym = symmetric_closure(a)
        self.m = self.sym.automaton
        self.gens = self.sym.generators()
        self.budget = budget
        root = _epword(w)
        self.vertices = [root]
        self.index = {root: 0}
        self.frontier = [0]
        self.radius = 0
        self.images: dict[int, list[tuple[int, EPWord]]] = {}

    def neighbours(self, i):
        imgs = self.images.get(i)
        if imgs is None:
            w = self.vertices[i]
            imgs = self.images[i] = [(s, act_epword(self.m, (s,), w)) for s in self.gens]
        return imgs

    def expand(self):
        """Grow the ball by one; returns False if the budget would be exceeded."""
        new = []
        for i in self.frontier:
            for _, v in self.neighbours(i):
                if v not in self.index:
                    if len(self.vertices) >= self.budget:
                        return False
                    self.index[v] = len(self.vertices)
                    self.vertices.append(v)
                    new.append(self.index[v])
        self.frontier = new
        self.radius += 1
        return True


def orbital_ball(a: Automaton, w, r: int, budget: int = BALL_BUDGET) -> SchreierGraph:
    """Induced subgraph of the orbital Schreier graph on the ball of radius r around w."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    bfs = _OrbitBFS(a, w, budget)
    for _ in range(r):
        if not bfs.expand():
            raise BudgetExceeded(f"ball of radius {r} exceeds {budget} vertices", partial=len(bfs.vertices))
    m = bfs.m
    edges: dict[tuple[int, int], set[str]] = {}
    for i in range(len(bfs.vertices)):
        for s, v in bfs.neighbours(i):
            j = bfs.index.get(v)
            if j is not None:
                _add_edge(edges, i, j, m.names[s])
    return SchreierGraph(list(bfs.vertices), _freeze(edges), 0, tuple(m.names[s] for s in bfs.gens))


@dataclass
class GrowthSeries:
    rows: list[tuple[int, int]]
    basepoint: EPWord
    generators: tuple[str, ...]
    complete: bool = True

    @property
    def gamma(self) -> list[int]:
        return [g for _, g in self.rows]

    def exponent(self, r: int) -> float:
        """log gamma(r) / log r."""
        return math.log(self.rows[r][1]) / math.log(r)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "gamma"])
        w.writerows(self.rows)
        return buf.getvalue()

    def to_dict(self):
        return {
            "basepoint": str(self.basepoint),
            "generators": list(self.generators),
            "complete": self.complete,
            "rows": [{"r": r, "gamma": g} for r, g in self.rows],
        }


def growth_series(a: Automaton, w, r_max: int, budget: int = BALL_BUDGET) -> GrowthSeries:
    """Ball sizes gamma(0..r_max) from one expanding breadth-first search.

    On budget overflow raises BudgetExceeded whose ``partial`` is the series
    computed so far (flagged incomplete).
    """
    bfs = _OrbitBFS(a, w, budget)
    m = bfs.m
    gens = tuple(m.names[s] for s in bfs.gens)
    rows = [(0, 1)]
    for r in range(1, r_max + 1):
        if not bfs.expand():
            partial = GrowthSeries(rows, bfs.vertices[0], gens, complete=False)
            raise BudgetExceeded(f"ball of radius {r} exceeds {budget} vertices", partial=partial)
        rows.append((r, len(bfs.vertices)))
        # images of interior vertices are no longer needed
        if r >= 2:
            for i in range(rows[r - 2][1]):
                bfs.images.pop(i, None)
    return GrowthSeries(rows, bfs.vertices[0], gens)


def truncate(vertices: Sequence[EPWord], n: int) -> list[tuple[int, ...]]:
    return [v.prefix(n) for v in vertices]
