"""Independent brute-force oracles shared by the unit and acceptance suites."""

import math
import random
from fractions import Fraction
from itertools import product

import numpy as np

from partitionlab.certificates import atom_eq1, atom_eq12, atom_eq13, atom_eq19
from partitionlab.checkers import (is_cross_partition_free, is_partition_free, is_r_partition_free,
                                   is_t_pseudo_partition_free)
from partitionlab.core import Family, layer_profile
from partitionlab.step10 import BipartiteGraph


def brute_cover(g: BipartiteGraph) -> Fraction:
    """Minimum-weight vertex cover over all 2^|V| subsets, vectorised with numpy."""
    verts = list(g.left) + list(g.right)
    idx = {v: i for i, v in enumerate(verts)}
    ws = [Fraction(g.left.get(v, g.right.get(v))) for v in verts]
    scale = math.lcm(*(w.denominator for w in ws))
    iw = np.array([int(w * scale) for w in ws], dtype=np.int64)
    masks = np.arange(1 << len(verts), dtype=np.int64)
    ok = np.ones(masks.shape, dtype=bool)
    for u, v in g.edges:
        ok &= (masks & ((1 << idx[u]) | (1 << idx[v]))) != 0
    bits = (masks[:, None] >> np.arange(len(verts))) & 1
    totals = bits @ iw
    return Fraction(int(totals[ok].min()), scale)


def random_bipartite(rng, max_vertices=16) -> BipartiteGraph:
    nl = rng.randint(1, max_vertices // 2)
    nr = rng.randint(1, max_vertices - nl)
    left = {("L", i): Fraction(rng.randint(0, 12), rng.randint(1, 4)) for i in range(nl)}
    right = {("R", j): Fraction(rng.randint(0, 12), rng.randint(1, 4)) for j in range(nr)}
    edges = [(u, v) for u in left for v in right if rng.random() < 0.3]
    return BipartiteGraph(left, right, edges)


def middle_heavy_family(rng, n) -> Family:
    # mostly middle layers so the atoms come close to tight
    lo, hi = n // 3, 2 * (n // 3) + 1
    p_mid, p_out = rng.uniform(0.5, 1.0), rng.uniform(0.0, 0.3)
    return Family(n, [b for b in range(1 << n)
                      if rng.random() < (p_mid if lo <= b.bit_count() <= hi else p_out)])


def prune_cross(fams):
    fams = list(fams)
    while True:
        res = is_cross_partition_free(*fams)
        if res.holds:
            return fams
        k = res.witness.union_index - 1
        fams[k] = fams[k].without([res.witness.sets[k]])


def prune_single(f, checker):
    while True:
        res = checker(f)
        if res.holds:
            return f
        f = f.without([res.witness.sets[0]])


def atom_soundness(trials: int, seed: int):
    """Evaluate every atom instance on random free families; returns (violations, tight, evaluated)."""
    rng = random.Random(seed)
    violations = tight = evaluated = 0
    for _ in range(trials):
        n = rng.randint(3, 7)
        triple = prune_cross([middle_heavy_family(rng, n) for _ in range(3)])
        ys = [list(layer_profile(f).y) for f in triple]
        f = prune_single(middle_heavy_family(rng, n), is_partition_free)
        y1 = [list(layer_profile(f).y)]
        t = rng.randint(1, 3)
        g = prune_single(middle_heavy_family(rng, n), lambda h: is_t_pseudo_partition_free(h, t))
        yg = [list(layer_profile(g).y)]
        for s in product(range(n + 1), repeat=3):
            if sum(s) <= n:
                for atom, y in ((atom_eq1(n, *s), ys), (atom_eq13(n, *s), ys), (atom_eq12(n, *s), y1)):
                    lhs = atom.lhs(y)
                    violations += lhs < atom.rhs
                    tight += lhs == atom.rhs
                    evaluated += 1
            if sum(s) == n + t - 1:
                violations += not atom_eq19(n, t, *s).holds_for(yg)
                evaluated += 1
    return violations, tight, evaluated


def violating_corpus(count: int, seed: int):
    """Yield (kind, families, result) for random families that violate some property."""
    rng = random.Random(seed)
    kinds = ("pf", "cross", "r-pf", "pseudo")
    made = 0
    while made < count:
        kind = kinds[made % len(kinds)]
        n = rng.randint(2, 7)
        p = rng.uniform(0.1, 0.4)
        rand = lambda: Family(n, [b for b in range(1 << n) if rng.random() < p])  # noqa: E731
        if kind == "pf":
            fams = [rand()]
            res = is_partition_free(fams[0])
        elif kind == "cross":
            fams = [rand(), rand(), rand()]
            res = is_cross_partition_free(*fams)
        elif kind == "r-pf":
            fams = [rand()]
            res = is_r_partition_free(fams[0], 3)
        else:
            fams = [rand()]
            res = is_t_pseudo_partition_free(fams[0], 2)
        if res.holds:
            continue
        made += 1
        yield kind, fams, res

