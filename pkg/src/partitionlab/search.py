"""Exact and heuristic optimizers over 3-uniform conflict hypergraphs.

The exact solver is a branch-and-bound for maximum-weight independent sets in
a hypergraph (no edge fully chosen).  Weights are scaled to integers by the
LCM of their denominators.  The tree is cut at a fixed depth into subtrees
that are solved independently, each from the same greedy incumbent, so the
optimum, witness list and node count do not depend on the worker count.
"""

from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .core import Family, binomial, frac_str
from .gadgets import ConstraintSet, Gadget, Trace, constraints, trace_feasible, trace_from_ids
from .step10 import min_weight_vertex_cover, step10_graph, valid_positions

EXHAUSTIVE_MAX = 24


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("PARTITIONLAB_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class SearchConfig:
    budget_seconds: float = 3600.0
    seed: int = 0
    threads: int = field(default_factory=default_threads)
    witness_limit: int = 1
    split_depth: int = 6
    max_nodes: int | None = None


@dataclass
class SearchResult:
    optimum: Fraction
    witnesses: list[tuple[int, ...]]
    nodes: int
    proved: bool
    seed: int
    elapsed: float
    upper_bound: Fraction | None = None
    optimum_count: int | None = None
    extra: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "optimum": frac_str(self.optimum),
            "witnesses": [list(w) for w in self.witnesses],
            "nodes_explored": self.nodes,
            "proved": self.proved,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed * 1000, 3),
            "upper_bound": None if self.upper_bound is None else frac_str(self.upper_bound),
            "optimum_count": self.optimum_count,
            **self.extra,
        }

    def key(self) -> tuple:
        """Everything that must agree between runs, timing excluded."""
        return (self.optimum, tuple(self.witnesses), self.nodes, self.proved, self.optimum_count)


def integer_weights(weights: Sequence[Fraction]) -> tuple[list[int], int]:
    ws = [Fraction(w) for w in weights]
    scale = lcm(*(w.denominator for w in ws)) if ws else 1
    return [int(w * scale) for w in ws], scale


# -- branch and bound ---------------------------------------------------------

@dataclass
class _Problem:
    weights: list[int]
    edges: list[tuple[int, ...]]
    order: list[int]  # branching order
    pairs: list[list[tuple[int, int]]]  # per var: the other two members of its triples
    singles: list[list[int]]  # per var: partners in 2-edges


def _make_problem(weights: list[int], edges: Sequence[Sequence[int]]) -> _Problem:
    k = len(weights)
    order = sorted(range(k), key=lambda i: (-weights[i], i))
    pairs: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    singles: list[list[int]] = [[] for _ in range(k)]
    norm = []
    for e in edges:
        e = tuple(sorted(set(e)))
        norm.append(e)
        if len(e) == 3:
            a, b, c = e
            pairs[a].append((b, c))
            pairs[b].append((a, c))
            pairs[c].append((a, b))
        elif len(e) == 2:
            a, b = e
            singles[a].append(b)
            singles[b].append(a)
        elif len(e) != 1:
            raise ValueError("only edges of size 1..3 are supported")
    return _Problem(weights, sorted(set(norm)), order, pairs, singles)


def _choose(p: _Problem, v: int, chosen: int, excluded: int) -> tuple[int, int] | None:
    """Add v to the solution and exclude every var it would complete an edge with."""
    bit = 1 << v
    if excluded & bit:
        return None
    chosen |= bit
    for a, b in p.pairs[v]:
        ca, cb = chosen >> a & 1, chosen >> b & 1
        if ca and cb:
            return None
        if ca:
            excluded |= 1 << b
        elif cb:
            excluded |= 1 << a
    for a in p.singles[v]:
        if chosen >> a & 1:
            return None
        excluded |= 1 << a
    return chosen, excluded


def _upper_bound(p: _Problem, chosen: int, excluded: int, cur: int, free_weight: int) -> int:
    # every edge still fully open needs one member dropped; disjoint such
    # edges can be charged independently
    used = 0
    deduct = 0
    w = p.weights
    for e in p.edges:
        open_ = []
        dead = False
        for v in e:
            bit = 1 << v
            if excluded & bit:
                dead = True
                break
            if not chosen & bit:
                open_.append(v)
        if dead or not open_:
            continue
        mask = 0
        for v in open_:
            mask |= 1 << v
        if used & mask:
            continue
        used |= mask
        deduct += min(w[v] for v in open_)
    return cur + free_weight - deduct


def _greedy(p: _Problem) -> tuple[int, int]:
    chosen = excluded = 0
    for v in p.order:
        if (chosen | excluded) >> v & 1:
            continue
        nxt = _choose(p, v, chosen, excluded)
        if nxt is None:
            excluded |= 1 << v
        else:
            chosen, excluded = nxt
    value = sum(p.weights[v] for v in range(len(p.weights)) if chosen >> v & 1)
    return value, chosen


def _value(p: _Problem, chosen: int) -> int:
    return sum(p.weights[v] for v in range(len(p.weights)) if chosen >> v & 1)


class _Budget(Exception):
    pass


def _solve_subtree(p: _Problem, chosen: int, excluded: int, incumbent: int, limit: int,
                   deadline: float | None, max_nodes: int | None):
    """DFS from a fixed partial assignment; returns (best, witnesses, nodes, complete)."""
    best = incumbent
    found: list[int] = []
    nodes = 0
    k = len(p.weights)
    allbits = (1 << k) - 1
    w = p.weights

    def rec(chosen: int, excluded: int, cur: int, pos: int):
        nonlocal best, found, nodes
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise _Budget
        if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
            raise _Budget
        decided = chosen | excluded
        free = allbits & ~decided
        free_w = 0
        f = free
        while f:
            low = f & -f
            free_w += w[low.bit_length() - 1]
            f ^= low
        if not free:
            if cur > best:
                best, found = cur, [chosen]
            elif cur == best and len(found) < limit:
                found.append(chosen)
            return
        ub = _upper_bound(p, chosen, excluded, cur, free_w)
        if ub < best or (ub == best and len(found) >= limit):
            return
        while decided >> p.order[pos] & 1:
            pos += 1
        v = p.order[pos]
        nxt = _choose(p, v, chosen, excluded)
        if nxt is not None:
            rec(nxt[0], nxt[1], cur + w[v], pos + 1)
        rec(chosen, excluded | 1 << v, cur, pos + 1)

    try:
        rec(chosen, excluded, _value(p, chosen), 0)
        complete = True
    except _Budget:
        complete = False
    return best, found, nodes, complete


def _split(p: _Problem, depth: int) -> tuple[list[tuple[int, int]], int]:
    """Partial assignments at the split depth, in DFS (include-first) order."""
    out = []
    nodes = 0
    k = len(p.weights)

    def rec(chosen, excluded, pos, d):
        nonlocal nodes
        nodes += 1
        decided = chosen | excluded
        while pos < k and decided >> p.order[pos] & 1:
            pos += 1
        if d == depth or pos >= k:
            out.append((chosen, excluded))
            return
        v = p.order[pos]
        nxt = _choose(p, v, chosen, excluded)
        if nxt is not None:
            rec(nxt[0], nxt[1], pos + 1, d + 1)
        rec(chosen, excluded | 1 << v, pos + 1, d + 1)

    rec(0, 0, 0, 0)
    return out, nodes


def _run_job(args):
    p, chosen, excluded, incumbent, limit, deadline_left, max_nodes = args
    deadline = None if deadline_left is None else time.monotonic() + deadline_left
    return _solve_subtree(p, chosen, excluded, incumbent, limit, deadline, max_nodes)


def solve_mwis(weights: Sequence[Fraction], edges: Sequence[Sequence[int]],
               cfg: SearchConfig | None = None) -> SearchResult:
    """Maximum total weight of a var set containing no edge entirely."""
    cfg = cfg or SearchConfig()
    t0 = time.monotonic()
    iw, scale = integer_weights(weights)
    p = _make_problem(iw, edges)
    inc_value, _ = _greedy(p)
    # start just below the greedy value so the tie-collecting search re-finds it
    incumbent = inc_value - 1
    limit = max(cfg.witness_limit, 1)
    jobs, split_nodes = _split(p, cfg.split_depth)
    left = cfg.budget_seconds
    args = [(p, c, e, incumbent, limit, left, cfg.max_nodes) for c, e in jobs]
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
            results = list(ex.map(_run_job, args))
    else:
        deadline = time.monotonic() + left
        results = [_solve_subtree(p, c, e, incumbent, limit, deadline, cfg.max_nodes) for c, e in jobs]
    best = max(r[0] for r in results)
    wits: list[int] = []
    for r in results:
        if r[0] == best:
            wits.extend(r[1])
    nodes = split_nodes + sum(r[2] for r in results)
    proved = all(r[3] for r in results)
    saturated = len(wits) >= cfg.witness_limit
    wits = wits[:cfg.witness_limit]
    k = len(iw)
    witnesses = [tuple(v for v in range(k) if c >> v & 1) for c in wits]
    res = SearchResult(Fraction(best, scale), witnesses, nodes, proved, cfg.seed,
                       time.monotonic() - t0)
    res.optimum_count = len(wits) if proved and not saturated else None
    if not proved:
        res.upper_bound = Fraction(sum(iw), scale)
    return res


def exhaustive_mwis(weights: Sequence[Fraction], edges: Sequence[Sequence[int]]) -> SearchResult:
    """Plain 2^k enumeration with numpy (k <= 24); an independent oracle."""
    t0 = time.monotonic()
    k = len(weights)
    if k > EXHAUSTIVE_MAX:
        raise ValueError(f"exhaustive enumeration limited to {EXHAUSTIVE_MAX} vars, got {k}")
    iw, scale = integer_weights(weights)
    allm = np.arange(1 << k, dtype=np.int64)
    bad = np.zeros(1 << k, dtype=bool)
    for e in edges:
        em = 0
        for v in e:
            em |= 1 << v
        bad |= (allm & em) == em
    val = np.zeros(1 << k, dtype=np.int64)
    for v in range(k):
        val += iw[v] * ((allm >> v) & 1)
    val[bad] = -1
    best = int(val.max())
    hits = np.flatnonzero(val == best)
    first = int(hits[0])
    res = SearchResult(Fraction(best, scale), [tuple(v for v in range(k) if first >> v & 1)],
                       1 << k, True, 0, time.monotonic() - t0)
    res.optimum_count = int(hits.size)
    return res


# -- gadgets ------------------------------------------------------------------

def exact_max_trace(g: Gadget, cs: ConstraintSet | None = None,
                    cfg: SearchConfig | None = None) -> SearchResult:
    cs = cs if cs is not None else constraints(g)
    res = solve_mwis([s.weight for s in g.slots], cs.forbidden, cfg)
    for w in res.witnesses:
        if not trace_feasible(trace_from_ids(g, w), cs):
            raise AssertionError("branch-and-bound returned an infeasible trace")
    return res


def exhaustive_max_trace(g: Gadget, cs: ConstraintSet | None = None) -> SearchResult:
    cs = cs if cs is not None else constraints(g)
    return exhaustive_mwis([s.weight for s in g.slots], cs.forbidden)


def heuristic_max_trace(g: Gadget, cs: ConstraintSet | None = None, cfg: SearchConfig | None = None,
                        iters: int = 100_000, restarts: int = 4,
                        seed_traces: Sequence[Sequence[bool]] | None = None,
                        t_start: float = 0.05, t_end: float = 1e-4) -> SearchResult:
    """Seeded simulated annealing over feasible traces (never a proof).

    An add move that completes forbidden triples is repaired by dropping the
    lightest other member of each.  Temperatures are relative to the mean
    slot weight.  Restart r uses its own stream spawned from the seed;
    restart r < len(seed_traces) starts from seed trace r.
    """
    cfg = cfg or SearchConfig()
    cs = cs if cs is not None else constraints(g)
    t0 = time.monotonic()
    iw, scale = integer_weights([s.weight for s in g.slots])
    k = len(iw)
    tri_of: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for a, b, c in cs.forbidden:
        tri_of[a].append((b, c))
        tri_of[b].append((a, c))
        tri_of[c].append((a, b))
    seeds = [list(map(bool, s)) for s in (seed_traces or [])]
    for s in seeds:
        if len(s) != k:
            raise ValueError("seed trace length does not match the gadget")
        if not trace_feasible(Trace(g, tuple(s)), cs):
            raise ValueError("seed trace is infeasible")

    def value(sol):
        return sum(iw[i] for i in range(k) if sol[i])

    best_val, best_sol = -1, None
    for s in seeds:
        v = value(s)
        if v > best_val:
            best_val, best_sol = v, s[:]
    if best_sol is None:
        best_val, best_sol = 0, [False] * k
    mean_w = (sum(iw) / k) if k else 1.0
    streams = np.random.SeedSequence(cfg.seed).spawn(max(restarts, 1))
    per = iters // max(restarts, 1) if restarts else 0
    trace_log = []
    for r in range(restarts if iters > 0 else 0):
        rng = random.Random(int(streams[r].generate_state(1, dtype=np.uint64)[0]))
        sol = seeds[r][:] if r < len(seeds) else [False] * k
        cur = value(sol)
        r_best = cur
        for it in range(per):
            frac = it / max(per - 1, 1)
            temp = mean_w * t_start * (t_end / t_start) ** frac
            v = rng.randrange(k)
            if sol[v]:
                delta = -iw[v]
                drops = [v]
                adds = []
            else:
                drops = []
                for a, b in tri_of[v]:
                    if sol[a] and sol[b]:
                        d = a if (iw[a], a) <= (iw[b], b) else b
                        if d not in drops:
                            drops.append(d)
                delta = iw[v] - sum(iw[d] for d in drops)
                adds = [v]
            if delta >= 0 or rng.random() < math.exp(delta / temp):
                for d in drops:
                    sol[d] = False
                for a in adds:
                    sol[a] = True
                cur += delta
                if cur > r_best:
                    r_best = cur
                if cur > best_val:
                    best_val, best_sol = cur, sol[:]
        trace_log.append({"restart": r, "best": frac_str(Fraction(r_best, scale))})
    witness = tuple(i for i in range(k) if best_sol[i])
    if not trace_feasible(trace_from_ids(g, witness), cs):
        raise AssertionError("annealing produced an infeasible trace")
    res = SearchResult(Fraction(best_val, scale), [witness], iters, False, cfg.seed,
                       time.monotonic() - t0)
    res.extra = {"restarts": trace_log}
    return res


# -- m(n) ---------------------------------------------------------------------

def mn_hypergraph(n: int) -> tuple[list[int], list[tuple[int, int, int]]]:
    """Vertices are the nonempty subsets of [n] (vertex i is mask i+1).

    ∅ can never lie in a partition-free family under the literal reading.
    """
    verts = list(range(1, 1 << n))
    edges = []
    for a in verts:
        rest = ((1 << n) - 1) & ~a
        b = rest
        while b:
            if b > a:
                edges.append((a - 1, b - 1, (a | b) - 1))
            b = (b - 1) & rest
    return verts, edges


def exact_mn(n: int, cfg: SearchConfig | None = None) -> SearchResult:
    if not 2 <= n <= 9:
        raise ValueError(f"exact_mn supports 2 <= n <= 9, got {n}")
    cfg = cfg or SearchConfig()
    verts, edges = mn_hypergraph(n)
    res = solve_mwis([1] * len(verts), edges, cfg)
    kleitman = sum(binomial(n, t) for t in range(n // 3 + 1, 2 * (n // 3) + 2))
    res.extra = {
        "n": n,
        "families": [[verts[i] for i in w] for w in res.witnesses],
        "kleitman_size": kleitman,
    }
    return res


def mn_families(res: SearchResult, n: int) -> list[Family]:
    return [Family(n, ms) for ms in res.extra["families"]]


# -- charging-graph cover sweep ----------------------------------------------

@dataclass
class LembpReport:
    m: int
    checked: int
    all_pass: bool
    min_slack: Fraction
    min_slack_A: tuple[int, ...]
    failures: list[tuple[int, ...]]
    interval_U: int
    eq15_all: bool

    def to_json_obj(self) -> dict:
        return {
            "m": self.m, "checked": self.checked, "all_pass": self.all_pass,
            "min_slack": frac_str(self.min_slack), "min_slack_A": list(self.min_slack_A),
            "failures": [list(a) for a in self.failures], "interval_U": self.interval_U,
            "eq15_all": self.eq15_all,
        }


def lembp_exhaustive(m: int) -> LembpReport:
    """Cover weight >= a C(3m, m) for every valid nonempty charged set A."""
    if not 2 <= m <= 8:
        raise ValueError(f"lembp_exhaustive supports 2 <= m <= 8, got {m}")
    from itertools import product
    from .core import eq15_holds
    n = 3 * m
    cm = binomial(n, m)
    checked = 0
    fails = []
    best_slack, best_a = None, ()
    for choice in product(range(4), repeat=m):
        A = valid_positions(m, choice)
        if not A:
            continue
        checked += 1
        g = step10_graph(m, A)
        w, cover = min_weight_vertex_cover(g.graph)
        if not g.graph.is_cover(cover):
            raise AssertionError("flow returned a non-cover")
        slack = w - len(A) * cm
        if slack < 0:
            fails.append(A)
        if best_slack is None or slack < best_slack:
            best_slack, best_a = slack, A
    interval = step10_graph(m, range(1, m + 1))
    return LembpReport(m, checked, not fails, best_slack, best_a, fails, len(interval.U),
                       all(eq15_holds(m, a) for a in range(1, m + 1)))
