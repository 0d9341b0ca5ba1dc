"""Exact arithmetic, bitmask subsets, families and layer profiles.

Subsets of [n] are stored as integer bitmasks: element ``e`` (1-based) lives
in bit ``e - 1``.  Everything that leaves the process (JSON, CLI output) uses
sorted 1-based element lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_N = 64
MAX_BINOMIAL_N = 200
# ground sets up to this size get numpy-backed layer enumeration
DENSE_N = 24


def _pascal_rows(limit: int) -> tuple[tuple[int, ...], ...]:
    rows = [(1,)]
    for _ in range(limit):
        prev = rows[-1]
        rows.append((1,) + tuple(prev[i] + prev[i + 1] for i in range(len(prev) - 1)) + (1,))
    return tuple(rows)


# built once at import, so concurrent first access needs no locking
_ROWS = _pascal_rows(MAX_BINOMIAL_N)


def binomial(n: int, k: int) -> int:
    """Exact C(n, k) for 0 <= n <= 200, zero outside 0 <= k <= n."""
    if not 0 <= n <= MAX_BINOMIAL_N:
        raise ValueError(f"binomial: n={n} outside supported range 0..{MAX_BINOMIAL_N}")
    if k < 0 or k > n:
        return 0
    return _ROWS[n][k]


def popcount(mask: int) -> int:
    return mask.bit_count()


def mask_of(elements: Iterable[int], n: int | None = None) -> int:
    """Bitmask of 1-based ``elements``; validates against ``n`` when given."""
    mask = 0
    for e in elements:
        e = int(e)
        if e < 1 or (n is not None and e > n):
            raise ValueError(f"element {e} outside [1, {n}]")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"ground-set size n={n} outside 1..{MAX_N}")


@dataclass(frozen=True, order=True)
class Subset:
    """An immutable subset of [n]."""

    n: int
    bits: int

    def __post_init__(self):
        check_n(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} has elements beyond n={self.n}")

    @classmethod
    def of(cls, n: int, elements: Iterable[int]) -> "Subset":
        return cls(n, mask_of(elements, n))

    def elements(self) -> list[int]:
        return elements_of(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, element: int) -> bool:
        return 1 <= element <= self.n and bool(self.bits >> (element - 1) & 1)

    def _same_n(self, other: "Subset") -> None:
        if other.n != self.n:
            raise ValueError(f"subsets over different ground sets ({self.n} vs {other.n})")

    def __or__(self, other: "Subset") -> "Subset":
        self._same_n(other)
        return Subset(self.n, self.bits | other.bits)

    def __and__(self, other: "Subset") -> "Subset":
        self._same_n(other)
        return Subset(self.n, self.bits & other.bits)

    def __sub__(self, other: "Subset") -> "Subset":
        self._same_n(other)
        return Subset(self.n, self.bits & ~other.bits)

    def isdisjoint(self, other: "Subset") -> bool:
        self._same_n(other)
        return not self.bits & other.bits

    def disjoint_union(self, other: "Subset") -> "Subset":
        if not self.isdisjoint(other):
            raise ValueError("disjoint union of intersecting sets")
        return self | other

    def complement(self) -> "Subset":
        return Subset(self.n, full_mask(self.n) & ~self.bits)

    def __repr__(self) -> str:
        return f"Subset({self.n}, {self.elements()})"


class Family:
    """A deduplicated collection of subsets of [n], stored as bitmasks."""

    __slots__ = ("n", "members", "_sorted")

    def __init__(self, n: int, members: Iterable[int | Subset] = ()):
        check_n(n)
        masks = set()
        limit = 1 << n
        for s in members:
            if isinstance(s, Subset):
                if s.n != n:
                    raise ValueError(f"subset over n={s.n} added to family over n={n}")
                s = s.bits
            s = int(s)
            if not 0 <= s < limit:
                raise ValueError(f"mask {s:#x} is not a subset of [{n}]")
            masks.add(s)
        self.n = n
        self.members: frozenset[int] = frozenset(masks)
        self._sorted: tuple[int, ...] | None = None

    @classmethod
    def _trusted(cls, n: int, masks: Iterable[int]) -> "Family":
        # skips per-member validation; callers guarantee masks < 2**n
        fam = cls.__new__(cls)
        fam.n = n
        fam.members = frozenset(masks)
        fam._sorted = None
        return fam

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls(n, (mask_of(s, n) for s in sets))

    def masks(self) -> tuple[int, ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self.members))
        return self._sorted

    def __contains__(self, s: int | Subset) -> bool:
        if isinstance(s, Subset):
            return s.n == self.n and s.bits in self.members
        return s in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.masks())

    def __eq__(self, other) -> bool:
        return isinstance(other, Family) and self.n == other.n and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.n, self.members))

    def __repr__(self) -> str:
        return f"Family(n={self.n}, size={len(self)})"

    def subsets(self) -> list[Subset]:
        return [Subset(self.n, b) for b in self.masks()]

    def layer(self, k: int) -> list[int]:
        return [b for b in self.masks() if b.bit_count() == k]

    def __or__(self, other: "Family") -> "Family":
        _same_ground(self, other)
        return Family._trusted(self.n, self.members | other.members)

    def __sub__(self, other: "Family") -> "Family":
        _same_ground(self, other)
        return Family._trusted(self.n, self.members - other.members)

    def __and__(self, other: "Family") -> "Family":
        _same_ground(self, other)
        return Family._trusted(self.n, self.members & other.members)

    def without(self, masks: Iterable[int]) -> "Family":
        return Family._trusted(self.n, self.members - set(masks))

    def to_json_obj(self) -> dict:
        return {"n": self.n, "members": [elements_of(b) for b in self.masks()]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Family":
        n = int(obj["n"])
        sets = obj["members"]
        for s in sets:
            if any(b <= a for a, b in zip(s, s[1:])):
                raise ValueError(f"member {s} is not strictly increasing")
        return cls.from_sets(n, sets)


def _same_ground(a: Family, b: Family) -> None:
    if a.n != b.n:
        raise ValueError(f"families over different ground sets ({a.n} vs {b.n})")


def layer_masks(n: int, k: int) -> list[int]:
    """All k-subsets of [n] as ascending masks."""
    if k < 0 or k > n:
        return []
    if n <= DENSE_N:
        return _dense_layers(n)[k].tolist()
    return sorted(sum(1 << i for i in c) for c in combinations(range(n), k))


@lru_cache(maxsize=8)
def _dense_layers(n: int) -> list[np.ndarray]:
    allm = np.arange(1 << n, dtype=np.int64)
    pc = np.bitwise_count(allm)
    return [allm[pc == k] for k in range(n + 1)]


def band_family(n: int, lo: int, hi: int) -> Family:
    """All subsets of [n] with lo <= |K| <= hi."""
    check_n(n)
    masks: list[int] = []
    for k in range(max(lo, 0), min(hi, n) + 1):
        masks.extend(layer_masks(n, k))
    return Family._trusted(n, masks)


@dataclass(frozen=True)
class LayerProfile:
    n: int
    f: tuple[int, ...]
    y: tuple[int, ...]

    def __post_init__(self):
        for t in range(self.n + 1):
            if self.f[t] + self.y[t] != binomial(self.n, t):
                raise ValueError(f"layer {t}: f + y != C({self.n},{t})")

    @property
    def size(self) -> int:
        return sum(self.f)


def layer_profile(family: Family) -> LayerProfile:
    n = family.n
    f = [0] * (n + 1)
    for b in family.members:
        f[b.bit_count()] += 1
    y = tuple(binomial(n, t) - f[t] for t in range(n + 1))
    return LayerProfile(n, tuple(f), y)


@dataclass(frozen=True)
class Eq005Report:
    n: int
    holds: bool
    # k -> (sum of lower binomials, C(n, k))
    per_k: dict[int, tuple[int, int]]


def eq005_holds(n: int) -> Eq005Report:
    """Check sum_{j<k} C(n,j) < C(n,k) for every 1 <= k <= n/3."""
    if n < 3:
        raise ValueError("eq005_holds needs n >= 3")
    per_k = {}
    acc = 0
    holds = True
    for k in range(1, n // 3 + 1):
        acc += binomial(n, k - 1)
        per_k[k] = (acc, binomial(n, k))
        holds = holds and acc < binomial(n, k)
    return Eq005Report(n, holds, per_k)


def eq15_holds(m: int, a: int) -> bool:
    """(2a+1) C(3m, m-1) >= a C(3m, m)."""
    return (2 * a + 1) * binomial(3 * m, m - 1) >= a * binomial(3 * m, m)


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def frac_str(x: Fraction | int) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s: str | int) -> Fraction:
    return Fraction(s)


def load_families(path: str | Path) -> list[Family]:
    """Read a family file: one family object, or {"n":..,"families":[...]}."""
    obj = json.loads(Path(path).read_text())
    return families_from_json_obj(obj)


def families_from_json_obj(obj) -> list[Family]:
    if isinstance(obj, dict) and "families" in obj:
        n = int(obj["n"])
        out = []
        for fam in obj["families"]:
            if isinstance(fam, dict):
                out.append(Family.from_json_obj({"n": fam.get("n", n), **fam}))
            else:
                out.append(Family.from_json_obj({"n": n, "members": fam}))
        return out
    return [Family.from_json_obj(obj)]


def families_to_json_obj(families: Sequence[Family]) -> dict:
    if len(families) == 1:
        return families[0].to_json_obj()
    n = families[0].n
    for f in families:
        _same_ground(families[0], f)
    return {"n": n, "families": [[elements_of(b) for b in f.masks()] for f in families]}
