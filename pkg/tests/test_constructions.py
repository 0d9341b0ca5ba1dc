import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from partitionlab.checkers import is_cross_partition_free, is_partition_free, is_r_partition_free
from partitionlab.constructions import (build, construction_identities, double, example4_total,
                                        example4_triple, kleitman_family, knr, pseudo_family,
                                        pseudo_family_ms, tilde_kx)
from partitionlab.core import Family, mask_of

from conftest import families


def band_sum(n, lo, hi):
    return sum(math.comb(n, t) for t in range(lo, hi + 1))


@pytest.mark.parametrize("n,size", [(4, 10), (6, 41), (7, 91)])
def test_kleitman_sizes(n, size):
    assert len(kleitman_family(n)) == size
    m = n // 3
    assert size == band_sum(n, m + 1, 2 * m + 1)


def test_kleitman_needs_n3():
    with pytest.raises(ValueError):
        kleitman_family(2)


def test_double():
    d = double(kleitman_family(7))
    assert len(d) == 182 == band_sum(8, 3, 5)
    assert len(double(Family(5))) == 0
    with pytest.raises(ValueError):
        double(Family(64))


@given(families(n_max=8))
def test_double_size(f):
    assert len(double(f)) == 2 * len(f)


def _random_pf(n, seed):
    # greedy partition-free family: add random sets while the property holds
    import random
    rng = random.Random(seed)
    order = list(range(1, 1 << n))
    rng.shuffle(order)
    members = []
    for b in order[: 3 * n]:
        trial = Family(n, members + [b])
        if is_partition_free(trial).holds:
            members.append(b)
    return Family(n, members)


@given(st.integers(2, 8), st.integers(0, 10_000))
def test_double_preserves_partition_freeness(n, seed):
    f = _random_pf(n, seed)
    assert is_partition_free(f).holds
    assert is_partition_free(double(f)).holds


def test_tilde_kx():
    t = tilde_kx(6, 1)
    assert len(t) == 41
    assert mask_of([1, 2]) in t
    # only the (2m+1)-sets through x are removed
    assert mask_of([1, 2, 3, 4, 5]) not in t and mask_of([2, 3, 4, 5, 6]) in t
    assert len(tilde_kx(9, 3)) == 372
    with pytest.raises(ValueError):
        tilde_kx(7, 1)


def test_example4_sizes():
    a, b, c = example4_triple(2)
    assert (len(a), len(b), len(c)) == (56, 35, 35)
    direct, formula = example4_total(2)
    assert direct == 126 == formula
    assert Fraction(math.comb(6, 2)) == Fraction(5, 2) * math.comb(6, 5)


@pytest.mark.parametrize("m", [2, 3])
def test_extremal_constructions_are_free(m):
    n = 3 * m
    for x in range(1, n + 1):
        assert is_partition_free(tilde_kx(n, x)).holds
    assert is_cross_partition_free(*example4_triple(m)).holds


def test_knr():
    # with m = n // 2 the r = 2 band starts above the Kleitman band
    for n in (6, 7, 8):
        assert knr(n, 2) != kleitman_family(n)
        assert {b.bit_count() for b in knr(n, 2)} == set(range(n // 2 + 1, n + 1))
    f = knr(7, 3)
    assert {b.bit_count() for b in f} == set(range(3, 8))
    assert is_r_partition_free(f, 3).holds


def test_pseudo_family():
    assert len(pseudo_family(10, 3, 5)) == 582
    assert pseudo_family(4, 0, 0).members == frozenset({0})
    assert {b.bit_count() for b in pseudo_family_ms(10, 4, 1)} == {4, 5, 6}
    with pytest.raises(ValueError):
        pseudo_family(4, 3, 2)


def test_identities():
    rep = construction_identities(12)
    assert len(rep.rows) == 36 and rep.all_hold
    m1 = [r for r in rep.rows if r[0] == 1]
    assert any(r[2] == r[3] == 20 for r in m1)
    m2 = {r[1]: (r[2], r[3]) for r in rep.rows if r[0] == 2}
    assert sorted(m2.values()) == sorted([(182, 182), (5, 5), (15, 15)])


def test_build_dispatch():
    assert len(build("kleitman", n=6)[0]) == 41
    assert len(build("example4", m=2)) == 3
    with pytest.raises(ValueError):
        build("kleitman")
    with pytest.raises(ValueError):
        build("nope", n=3)
