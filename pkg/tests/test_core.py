import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from partitionlab.core import (Family, Subset, band_family, binomial, elements_of, eq005_holds,
                               eq15_holds, families_from_json_obj, families_to_json_obj, frac_str,
                               layer_masks, layer_profile, mask_of, parse_frac, popcount)

from conftest import families


@given(st.integers(0, 200), st.integers(-3, 203))
def test_binomial_matches_math_comb(n, k):
    want = math.comb(n, k) if 0 <= k <= n else 0
    assert binomial(n, k) == want


@given(st.integers(1, 200), st.integers(1, 200))
def test_pascal_rule(n, k):
    assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_binomial_range():
    with pytest.raises(ValueError):
        binomial(201, 3)
    assert binomial(5, 6) == 0 and binomial(5, -1) == 0


@given(st.sets(st.integers(1, 64)))
def test_mask_roundtrip(s):
    m = mask_of(s)
    assert elements_of(m) == sorted(s)
    assert popcount(m) == len(s)


def test_mask_of_rejects_out_of_range():
    with pytest.raises(ValueError):
        mask_of([0])
    with pytest.raises(ValueError):
        mask_of([5], n=4)


@given(st.integers(1, 64).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1))))
def test_subset_algebra(args):
    n, a, b = args
    A, B = Subset(n, a), Subset(n, b)
    assert set((A | B).elements()) == set(A.elements()) | set(B.elements())
    assert set((A & B).elements()) == set(A.elements()) & set(B.elements())
    assert set((A - B).elements()) == set(A.elements()) - set(B.elements())
    assert len(A.complement()) == n - len(A)
    assert A.complement().complement() == A
    if A.isdisjoint(B):
        assert len(A.disjoint_union(B)) == len(A) + len(B)
    else:
        with pytest.raises(ValueError):
            A.disjoint_union(B)


def test_subset_bounds():
    with pytest.raises(ValueError):
        Subset(3, 0b1000)
    with pytest.raises(ValueError):
        Subset(65, 0)
    with pytest.raises(ValueError):
        Subset(2, 1) | Subset(3, 1)


def test_family_dedup_and_validation():
    f = Family(3, [1, 1, 3])
    assert len(f) == 2
    with pytest.raises(ValueError):
        Family(3, [8])
    with pytest.raises(ValueError):
        Family(3, [1]) | Family(4, [1])


@given(st.integers(0, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
def test_layer_masks(args):
    n, k = args
    ms = layer_masks(n, k)
    assert len(ms) == binomial(n, k)
    assert all(popcount(x) == k for x in ms)
    assert ms == sorted(ms)


@given(families())
def test_profile_invariant(f):
    p = layer_profile(f)
    for t in range(f.n + 1):
        assert p.f[t] + p.y[t] == binomial(f.n, t)
    assert p.size == len(f)


def test_band_family_size():
    f = band_family(7, 3, 5)
    assert len(f) == sum(binomial(7, t) for t in range(3, 6))


@given(families(n_max=6))
def test_json_roundtrip(f):
    assert families_from_json_obj(families_to_json_obj([f])) == [f]
    assert families_from_json_obj(families_to_json_obj([f, f, f])) == [f, f, f]


def test_json_rejects_unsorted_member():
    with pytest.raises(ValueError):
        Family.from_json_obj({"n": 3, "members": [[2, 1]]})


def test_fraction_strings():
    assert frac_str(Fraction(6, 7)) == "6/7"
    assert frac_str(4) == "4"
    assert parse_frac("3/4") == Fraction(3, 4)


def test_lower_layers_sum_small_case():
    # 3 <= n: C(n,0) < C(n,1) trivially
    r = eq005_holds(9)
    assert r.holds
    assert r.per_k[3] == (1 + 9 + 36, 84)


def test_charge_inequality_matches_direct_comparison():
    # direct math.comb comparison as oracle
    for m in range(1, 30):
        for a in range(0, m + 1):
            lhs = (2 * a + 1) * math.comb(3 * m, m - 1)
            assert eq15_holds(m, a) == (lhs >= a * math.comb(3 * m, m))
