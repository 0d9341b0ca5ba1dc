"""Exact m(n), the largest partition-free family over [n], for small n."""
import argparse
import time

from partitionlab.core import frac_str
from partitionlab.search import SearchConfig, default_threads, exact_mn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4, 5, 6])
    ap.add_argument("--budget-secs", type=float, default=3600)
    ap.add_argument("--threads", type=int, default=default_threads())
    ap.add_argument("--witnesses", type=int, default=100)
    args = ap.parse_args()

    for n in args.n:
        t0 = time.monotonic()
        res = exact_mn(n, SearchConfig(budget_seconds=args.budget_secs, threads=args.threads,
                                       witness_limit=args.witnesses))
        rel = "=" if res.proved else ">="
        count = res.optimum_count if res.optimum_count is not None else "?"
        print(f"m({n}) {rel} {frac_str(res.optimum)}  (Kleitman size {res.extra['kleitman_size']}, "
              f"optimal families {count}, nodes {res.nodes}, {time.monotonic() - t0:.1f}s)")


if __name__ == "__main__":
    main()
