"""Exhaustive min-weight vertex cover sweep over all valid charged sets A."""
import argparse

from partitionlab.core import frac_str
from partitionlab.search import lembp_exhaustive


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    args = ap.parse_args()
    for m in args.m:
        rep = lembp_exhaustive(m)
        print(f"m={m}: {rep.checked} sets, all pass={rep.all_pass}, min slack {frac_str(rep.min_slack)} "
              f"at A={rep.min_slack_A}, failures {len(rep.failures)}, interval |U|={rep.interval_U}")


if __name__ == "__main__":
    main()
