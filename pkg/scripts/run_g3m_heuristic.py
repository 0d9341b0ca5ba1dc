"""Seeded annealing over the 360-slot cyclic gadget, looking for traces above the bound."""
import argparse

from partitionlab.constructions import kleitman_family, tilde_kx
from partitionlab.core import frac_str
from partitionlab.gadgets import build_3m, constraints, gadget_rhs, trace_of
from partitionlab.search import SearchConfig, heuristic_max_trace


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=6)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--iters", type=int, default=100_000)
    ap.add_argument("--restarts", type=int, default=4)
    args = ap.parse_args()

    g = build_3m(args.m)
    cs = constraints(g)
    rhs = gadget_rhs(g)
    n = 3 * args.m
    start = [trace_of(g, kleitman_family(n)).chosen, trace_of(g, tilde_kx(n, 1)).chosen]
    worst = None
    for seed in range(args.seeds):
        res = heuristic_max_trace(g, cs, SearchConfig(seed=seed, threads=1), iters=args.iters,
                                  restarts=args.restarts, seed_traces=start)
        gap = rhs - res.optimum
        worst = gap if worst is None else min(worst, gap)
        print(f"seed {seed:2d}: best {frac_str(res.optimum)}  gap to bound {frac_str(gap)}")
    print(f"bound {frac_str(rhs)}; smallest gap {frac_str(worst)}; "
          f"{'COUNTEREXAMPLE' if worst < 0 else 'no trace above the bound'}")


if __name__ == "__main__":
    main()
