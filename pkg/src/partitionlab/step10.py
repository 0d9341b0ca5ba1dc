"""Bipartite minimum-weight vertex cover by max-flow, and the cyclic charging graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable

from .core import binomial

Vertex = Hashable


@dataclass
class BipartiteGraph:
    left: dict[Vertex, Fraction]
    right: dict[Vertex, Fraction]
    edges: list[tuple[Vertex, Vertex]] = field(default_factory=list)

    def __post_init__(self):
        both = set(self.left) & set(self.right)
        if both:
            raise ValueError(f"vertex {next(iter(both))!r} on both sides; graph is not bipartite")
        for u, v in self.edges:
            if u not in self.left or v not in self.right:
                raise ValueError(f"edge ({u!r}, {v!r}) does not go left -> right; graph is not bipartite")
        for w in list(self.left.values()) + list(self.right.values()):
            if w < 0:
                raise ValueError("vertex weights must be nonnegative")

    def degree(self, v: Vertex) -> int:
        return sum(1 for a, b in self.edges if a == v or b == v)

    def weight(self, vs: Iterable[Vertex]) -> Fraction:
        return sum((self.left.get(v, self.right.get(v, Fraction(0))) for v in vs), Fraction(0))

    def is_cover(self, vs) -> bool:
        vs = set(vs)
        return all(u in vs or v in vs for u, v in self.edges)


def _max_flow(cap: list[dict[int, int]], s: int, t: int) -> list[bool]:
    """Edmonds-Karp on an int-capacity residual graph; returns the source side of a min cut."""
    nv = len(cap)
    while True:
        parent = [-1] * nv
        parent[s] = s
        q = deque([s])
        while q and parent[t] < 0:
            u = q.popleft()
            for v, c in cap[u].items():
                if c > 0 and parent[v] < 0:
                    parent[v] = u
                    q.append(v)
        if parent[t] < 0:
            return [p >= 0 for p in parent]
        push = None
        v = t
        while v != s:
            u = parent[v]
            c = cap[u][v]
            push = c if push is None or c < push else push
            v = u
        v = t
        while v != s:
            u = parent[v]
            cap[u][v] -= push
            cap[v][u] = cap[v].get(u, 0) + push
            v = u


def min_weight_vertex_cover(g: BipartiteGraph) -> tuple[Fraction, set]:
    """Exact minimum-weight vertex cover via s-t min cut.

    source -> left (capacity w), right -> sink (capacity w), left -> right
    unbounded.  Rational weights are scaled by the LCM of their denominators.
    """
    lefts, rights = list(g.left), list(g.right)
    weights = [Fraction(g.left[v]) for v in lefts] + [Fraction(g.right[v]) for v in rights]
    scale = lcm(*(w.denominator for w in weights)) if weights else 1
    iw = [int(w * scale) for w in weights]
    big = sum(iw) + 1
    nl = len(lefts)
    s, t = nl + len(rights), nl + len(rights) + 1
    cap: list[dict[int, int]] = [dict() for _ in range(t + 1)]
    idx_l = {v: i for i, v in enumerate(lefts)}
    idx_r = {v: nl + i for i, v in enumerate(rights)}
    for i in range(nl):
        cap[s][i] = iw[i]
        cap[i].setdefault(s, 0)
    for j in range(len(rights)):
        cap[nl + j][t] = iw[nl + j]
        cap[t].setdefault(nl + j, 0)
    for u, v in g.edges:
        a, b = idx_l[u], idx_r[v]
        cap[a][b] = big
        cap[b].setdefault(a, 0)
    side = _max_flow(cap, s, t)
    cover = {v for v in lefts if not side[idx_l[v]]} | {v for v in rights if side[idx_r[v]]}
    return g.weight(cover), cover


@dataclass
class Step10Graph:
    m: int
    A: tuple[int, ...]
    w0: Fraction
    w1: Fraction
    w2: Fraction
    graph: BipartiteGraph

    @property
    def n(self) -> int:
        return 3 * self.m

    @property
    def a(self) -> int:
        return len(self.A)

    @property
    def U(self) -> list[int]:
        return sorted(p for _, p in self.graph.left)

    def part(self, name: str) -> list[int]:
        return sorted(p for k, p in self.graph.right if k == name)


def _mod(x: int, n: int) -> int:
    return (x - 1) % n + 1


def step10_graph(m: int, A: Iterable[int]) -> Step10Graph:
    """Forbidden-pair graph between missing (2m+1)-intervals and (m+1)-sets.

    Left vertices ("U", p) stand for H^{2m+1}(p); right vertices ("V1", p),
    ("V2", p), ("V3", p) stand for H_l^{m+1}(p), H_r^{m+1}(p), H^{m+1}(p).
    """
    n = 3 * m
    A = tuple(sorted({_mod(x, n) for x in A}))
    if not A:
        raise ValueError("A must be nonempty")
    if len(A) != len(set(A)) or any(not 1 <= x <= n for x in A):
        raise ValueError("A must be a set of positions in [n]")
    aset = set(A)
    for x in A:
        for d in (m, 2 * m):
            if _mod(x + d, n) in aset:
                raise ValueError(f"positions {x} and {_mod(x + d, n)} are at cyclic distance {d}")
    w0 = Fraction(binomial(n, m - 1))
    w1 = Fraction(m, m + 1) * w0
    w2 = 2 * w0 - binomial(n, m - 2)
    edges = []
    for x in A:
        edges.append((("U", x), ("V3", _mod(x - m, n))))
        edges.append((("U", _mod(x + 1, n)), ("V1", _mod(x + 1, n))))
        edges.append((("U", _mod(x + m, n)), ("V2", _mod(x + m, n))))
        edges.append((("U", _mod(x + m + 1, n)), ("V3", _mod(x + m + 1, n))))
    left = {u: w0 for u, _ in edges}
    deg3: dict[tuple, int] = {}
    for _, v in edges:
        if v[0] == "V3":
            deg3[v] = deg3.get(v, 0) + 1
    right = {}
    for _, v in edges:
        if v[0] in ("V1", "V2"):
            right[v] = w1
        else:
            right[v] = 2 * w0 if deg3[v] == 2 else w2
    return Step10Graph(m, A, w0, w1, w2, BipartiteGraph(left, right, edges))


def valid_positions(m: int, choice: Iterable[int]) -> tuple[int, ...]:
    """Map one choice per orbit {r, r+m, r+2m} (0 = skip, 1..3 = pick) to positions."""
    out = []
    for r, c in enumerate(choice, start=1):
        if c:
            out.append(r + (c - 1) * m)
    return tuple(out)
