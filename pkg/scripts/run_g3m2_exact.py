"""Exact branch-and-bound over the 57-slot three-family gadget at m = 6.

Prints the optimum, compares it with the gadget right-hand side and checks
that the three equality configurations attain it.
"""
import argparse
import json

from partitionlab.core import frac_str
from partitionlab.gadgets import build_3m2, constraints, equality_families, gadget_rhs, trace_feasible, trace_of
from partitionlab.search import SearchConfig, default_threads, exact_max_trace


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=6)
    ap.add_argument("--threads", type=int, default=default_threads())
    ap.add_argument("--budget-secs", type=float, default=1800)
    args = ap.parse_args()

    g = build_3m2(args.m)
    cs = constraints(g)
    res = exact_max_trace(g, cs, SearchConfig(budget_seconds=args.budget_secs, threads=args.threads))
    rhs = gadget_rhs(g)
    traces = {}
    for name, fams in equality_families(g).items():
        t = trace_of(g, fams)
        traces[name] = {"weight": frac_str(t.weight()), "feasible": trace_feasible(t, cs).holds}
    out = {"m": args.m, "slots": len(g.slots), "triples": len(cs), "rhs": frac_str(rhs),
           "search": res.to_json_obj(), "equality_traces": traces,
           "optimum_equals_rhs": res.proved and res.optimum == rhs}
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
