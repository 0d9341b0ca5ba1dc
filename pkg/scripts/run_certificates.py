"""Verify every builtin certificate over its full parameter range."""
from partitionlab.certificates import verify_builtin
from partitionlab.core import frac_str


def main():
    jobs = [("table1", m, None) for m in range(2, 17)]
    jobs += [(name, m, None) for name in ("clach_3m2", "clach2_3m") for m in range(6, 13)]
    jobs += [("table3_pseudo", m, t) for t in range(1, 6) for m in range(8 * t, 41)]
    bad = 0
    for name, m, t in jobs:
        rep = verify_builtin(name, m, t)
        bad += not rep.passed
        tag = f"{name} m={m}" + (f" t={t}" if t else "")
        print(f"{'ok  ' if rep.passed else 'FAIL'} {tag}: bound {frac_str(rep.bound.bound)}"
              + (f"  {rep.failures}" if rep.failures else ""))
    print(f"{len(jobs) - bad}/{len(jobs)} certificates verified")


if __name__ == "__main__":
    main()
