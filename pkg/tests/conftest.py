import random
import sys

from hypothesis import HealthCheck, settings, strategies as st

from partitionlab.core import Family

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def families(draw, n_min=1, n_max=7, density=None):
    n = draw(st.integers(n_min, n_max))
    p = density if density is not None else draw(st.floats(0.05, 0.6))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    return Family(n, [b for b in range(1 << n) if rng.random() < p])


def brute_partition_witness(fams, distinct=False):
    """Naive triple loop: (A, B, C) with A in F1, B in F2, C in F3, A ∩ B = ∅, A ∪ B = C."""
    f1, f2, f3 = fams
    for a in f1:
        for b in f2:
            if a & b:
                continue
            if distinct and (a == 0 or b == 0):
                continue
            if (a | b) in f3.members:
                return a, b, a | b
    return None


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
