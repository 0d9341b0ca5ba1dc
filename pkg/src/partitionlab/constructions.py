"""Builders for the named extremal families and their cardinality identities."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import MAX_N, Family, band_family, binomial, check_n, layer_masks

CONSTRUCTION_NAMES = ("kleitman", "double", "tilde", "example4", "knr", "pseudo")


def kleitman_m(n: int) -> int:
    """The m with n in {3m, 3m+1, 3m+2}."""
    return n // 3


def kleitman_family(n: int) -> Family:
    """K(n): all sets with m+1 <= |K| <= 2m+1 where n = 3m + l, 0 <= l <= 2."""
    if n < 3:
        raise ValueError(f"kleitman_family needs n >= 3, got {n}")
    m = kleitman_m(n)
    return band_family(n, m + 1, 2 * m + 1)


def double(family: Family) -> Family:
    """F^d over [n+1]: every G with G ∩ [n] in F."""
    n = family.n
    if n >= MAX_N:
        raise ValueError("cannot double a family over n = 64")
    top = 1 << n
    masks = list(family.members)
    return Family._trusted(n + 1, masks + [b | top for b in masks])


def tilde_kx(n: int, x: int) -> Family:
    """K(3m) plus the m-sets through x, minus the (2m+1)-sets through x."""
    if n % 3 or n < 3:
        raise ValueError(f"tilde_kx needs n = 3m with m >= 1, got {n}")
    if not 1 <= x <= n:
        raise ValueError(f"element x={x} outside [1, {n}]")
    m = n // 3
    bit = 1 << (x - 1)
    base = kleitman_family(n)
    add = [b for b in layer_masks(n, m) if b & bit]
    drop = {b for b in layer_masks(n, 2 * m + 1) if b & bit}
    return Family._trusted(n, [b for b in base.members if b not in drop] + add)


def example4_triple(m: int) -> tuple[Family, Family, Family]:
    """A = {m <= |A| <= 2m+1}, B = C = {m+1 <= |B| <= 2m} over [3m]."""
    if m < 1:
        raise ValueError(f"example4_triple needs m >= 1, got {m}")
    n = 3 * m
    a = band_family(n, m, 2 * m + 1)
    b = band_family(n, m + 1, 2 * m)
    return a, b, b


def knr_m(n: int, r: int) -> int:
    return n // r


def knr(n: int, r: int) -> Family:
    """K(n, r) = {m+1 <= |K| <= rm+r-1} for n = rm + q, capped at n."""
    if r < 2 or n < r:
        raise ValueError(f"knr needs r >= 2 and n >= r, got n={n}, r={r}")
    m = knr_m(n, r)
    return band_family(n, m + 1, min(r * m + r - 1, n))


def pseudo_family(n: int, lo: int, hi: int) -> Family:
    """All sets with lo <= |K| <= hi (closed band)."""
    check_n(n)
    if not 0 <= lo <= hi <= n:
        raise ValueError(f"pseudo_family needs 0 <= lo <= hi <= n, got lo={lo}, hi={hi}, n={n}")
    return band_family(n, lo, hi)


def pseudo_family_ms(n: int, m: int, s: int) -> Family:
    """K_s(n) = {m <= |K| < 2m - s}, i.e. the band [m, 2m-s-1]."""
    return pseudo_family(n, m, 2 * m - s - 1)


@dataclass
class IdentityReport:
    m_max: int
    # (m, identity name, lhs, rhs, holds)
    rows: list[tuple[int, str, Fraction, Fraction, bool]] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(r[4] for r in self.rows)


def _band_sum(n: int, lo: int, hi: int) -> int:
    return sum(binomial(n, t) for t in range(lo, hi + 1))


def construction_identities(m_max: int) -> IdentityReport:
    """Doubling identity, binomial symmetry C(3m-1,m-1) = C(3m-1,2m) and
    C(3m,m) = (2m+1)/m C(3m,2m+1), for every 1 <= m <= m_max."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    rep = IdentityReport(m_max)
    for m in range(1, m_max + 1):
        lhs = Fraction(2 * _band_sum(3 * m + 1, m + 1, 2 * m + 1))
        rhs = Fraction(_band_sum(3 * m + 2, m + 1, 2 * m + 1))
        rep.rows.append((m, "doubling", lhs, rhs, lhs == rhs))
        lhs = Fraction(binomial(3 * m - 1, m - 1))
        rhs = Fraction(binomial(3 * m - 1, 2 * m))
        rep.rows.append((m, "tilde_symmetry", lhs, rhs, lhs == rhs))
        lhs = Fraction(binomial(3 * m, m))
        rhs = Fraction(2 * m + 1, m) * binomial(3 * m, 2 * m + 1)
        rep.rows.append((m, "example4", lhs, rhs, lhs == rhs))
    return rep


def example4_total(m: int) -> tuple[int, Fraction]:
    """(|A|+|B|+|C|, 3|K(3m)| + C(3m,2m+1)/m) computed from binomials."""
    n = 3 * m
    direct = _band_sum(n, m, 2 * m + 1) + 2 * _band_sum(n, m + 1, 2 * m)
    formula = 3 * _band_sum(n, m + 1, 2 * m + 1) + Fraction(binomial(n, 2 * m + 1), m)
    return direct, formula


def build(name: str, *, n: int | None = None, m: int | None = None, r: int | None = None,
          x: int | None = None, lo: int | None = None, hi: int | None = None,
          s: int | None = None) -> list[Family]:
    """Dispatch by construction name; returns one family (three for example4)."""
    def need(v, label):
        if v is None:
            raise ValueError(f"construction {name!r} needs --{label}")
        return v

    if name == "kleitman":
        return [kleitman_family(need(n, "n"))]
    if name == "double":
        return [double(kleitman_family(need(n, "n")))]
    if name == "tilde":
        return [tilde_kx(need(n, "n"), need(x, "x"))]
    if name == "example4":
        return list(example4_triple(need(m, "m")))
    if name == "knr":
        return [knr(need(n, "n"), need(r, "r"))]
    if name == "pseudo":
        if lo is not None or hi is not None:
            return [pseudo_family(need(n, "n"), need(lo, "lo"), need(hi, "hi"))]
        return [pseudo_family_ms(need(n, "n"), need(m, "m"), need(s, "s"))]
    raise ValueError(f"unknown construction {name!r}; expected one of {CONSTRUCTION_NAMES}")
