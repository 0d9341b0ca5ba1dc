"""Exhaustive checkers for the forbidden configurations, with witnesses.

Quantifiers follow the literal reading: the members named in a configuration
need not be distinct.  That only matters for the empty set, which is disjoint
from itself, so any family containing ∅ has the violation (∅, ∅, ∅) or
(F, ∅, F).  ``distinct=True`` forbids ∅ as a part, which is what the
pairwise-distinct reading amounts to.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .core import Family, binomial, elements_of

PROPERTIES = ("pf", "cross-pf", "r-pf", "r-box", "pseudo", "cross-int")


@dataclass(frozen=True)
class Witness:
    """An offending tuple of sets.

    ``sets`` is ordered per kind:
      partition   (F0, F1, F2) with F0 = F1 ⊔ F2
      cross       (A, B, C), one per family; ``union_index`` names the union slot
      r-partition (union, part_1, ..., part_r)
      r-box       (B_1, ..., B_r)
      pseudo      (C, A, B) with C = A ∪ B
      cross-int   (G1 member, G2 member), disjoint
    """

    kind: str
    n: int
    sets: tuple[int, ...]
    family_indices: tuple[int, ...]
    union_index: int | None = None
    t: int | None = None

    def to_json_obj(self) -> dict:
        obj = {
            "kind": self.kind,
            "sets": [elements_of(s) for s in self.sets],
            "family_indices": list(self.family_indices),
        }
        if self.union_index is not None:
            obj["union_index"] = self.union_index
        if self.t is not None:
            obj["t"] = self.t
        return obj

    def replay(self, families: Sequence[Family]) -> bool:
        """True iff the witness is a genuine violation in ``families``."""
        for s, i in zip(self.sets, self.family_indices):
            if s not in families[i - 1]:
                return False
        s = self.sets
        if self.kind in ("partition", "cross"):
            if self.kind == "partition":
                u, a, b = s
            else:
                u = s[self.union_index - 1]
                a, b = (s[j] for j in range(3) if j != self.union_index - 1)
            return not a & b and a | b == u
        if self.kind == "r-partition":
            parts = s[1:]
            acc = 0
            for p in parts:
                if acc & p:
                    return False
                acc |= p
            return acc == s[0]
        if self.kind == "r-box":
            acc = 0
            for p in s:
                if acc & p:
                    return False
                acc |= p
            if acc == 0:
                return False
            fam = families[0]
            for k in range(1, len(s) + 1):
                for combo in combinations(s, k):
                    u = 0
                    for p in combo:
                        u |= p
                    if u and u not in fam:
                        return False
            return True
        if self.kind == "pseudo":
            c, a, b = s
            return a | b == c and (a & b).bit_count() < self.t
        if self.kind == "cross-int":
            return not s[0] & s[1]
        raise ValueError(f"unknown witness kind {self.kind!r}")


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.holds


def _by_layer(family: Family) -> dict[int, list[int]]:
    layers: dict[int, list[int]] = {}
    for b in family.masks():
        layers.setdefault(b.bit_count(), []).append(b)
    return layers


def _first_pair(xs: Sequence[int], ylayers: dict[int, list[int]], unions: Family,
                distinct: bool) -> tuple[int, int] | None:
    """Smallest (x, y) with x <= y, x ∩ y = ∅ and x ∪ y in ``unions``.

    x ranges over ``xs`` (ascending), y over ``ylayers``.
    """
    usizes = {b.bit_count() for b in unions.members}
    umembers = unions.members
    for x in xs:
        if distinct and x == 0:
            continue
        kx = x.bit_count()
        best = None
        for j, ys in ylayers.items():
            if kx + j not in usizes:
                continue
            start = bisect_left(ys, x)
            for y in ys[start:]:
                if best is not None and y >= best:
                    break
                if x & y or (distinct and y == 0):
                    continue
                if x | y in umembers:
                    best = y
                    break
        if best is not None:
            return x, best
    return None


def is_partition_free(family: Family, distinct: bool = False) -> CheckResult:
    """No F0, F1, F2 in the family with F1 ∩ F2 = ∅ and F0 = F1 ∪ F2."""
    pair = _first_pair(family.masks(), _by_layer(family), family, distinct)
    if pair is None:
        return CheckResult(True)
    a, b = pair
    return CheckResult(False, Witness("partition", family.n, (a | b, a, b), (1, 1, 1)))


def _cross_min(xs: Family, ys: Family, us: Family, distinct: bool):
    # the global minimum has its smaller part on one of the two sides
    out = []
    p = _first_pair(xs.masks(), _by_layer(ys), us, distinct)
    if p is not None:
        out.append(p)
    q = _first_pair(ys.masks(), _by_layer(xs), us, distinct)
    if q is not None:
        out.append((q[1], q[0]))
    if not out:
        return None
    return min(out, key=lambda xy: (min(xy), max(xy)))


def is_cross_partition_free(f1: Family, f2: Family, f3: Family,
                            distinct: bool = False) -> CheckResult:
    """No A in F1, B in F2, C in F3 with one equal to the disjoint union of the others."""
    fams = (f1, f2, f3)
    if len({f.n for f in fams}) != 1:
        raise ValueError("cross check over families with different n")
    cands = []
    for u in range(3):
        i, j = (k for k in range(3) if k != u)
        p = _cross_min(fams[i], fams[j], fams[u], distinct)
        if p is None:
            continue
        sets = [0, 0, 0]
        sets[i], sets[j] = p
        sets[u] = p[0] | p[1]
        cands.append((tuple(sorted(sets)), u, tuple(sets)))
    if not cands:
        return CheckResult(True)
    _, u, sets = min(cands)
    return CheckResult(False, Witness("cross", f1.n, sets, (1, 2, 3), union_index=u + 1))


def is_r_partition_free(family: Family, r: int, distinct: bool = False) -> CheckResult:
    """No r pairwise disjoint members whose union is also a member."""
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    members = family.members
    if not members:
        return CheckResult(True)
    if 0 in members and not distinct:
        return CheckResult(False, Witness("r-partition", family.n, (0,) * (r + 1), (1,) * (r + 1)))
    masks = [b for b in family.masks() if b]
    cap = max(b.bit_count() for b in members)
    # smallest sizes bound how much room the remaining parts need
    sizes = sorted(b.bit_count() for b in masks)
    if len(sizes) < r or sum(sizes[:r]) > cap:
        return CheckResult(True)
    need = [0] * (r + 1)
    for k in range(1, r + 1):
        need[k] = sum(sizes[:k])

    def dfs(start: int, used: int, size: int, parts: list[int]):
        depth = len(parts)
        if depth == r:
            return parts[:] if used in members else None
        left = r - depth
        for idx in range(start, len(masks)):
            b = masks[idx]
            if b & used:
                continue
            s = size + b.bit_count()
            if s + need[left - 1] > cap:
                continue
            parts.append(b)
            got = dfs(idx + 1, used | b, s, parts)
            parts.pop()
            if got is not None:
                return got
        return None

    found = dfs(0, 0, 0, [])
    if found is None:
        return CheckResult(True)
    union = 0
    for p in found:
        union |= p
    return CheckResult(False, Witness("r-partition", family.n, (union, *found), (1,) * (r + 1)))


def contains_r_box(family: Family, r: int, allow_empty: bool = False) -> CheckResult:
    """Pairwise disjoint B_1..B_r whose nonempty unions all lie in the family.

    Blocks are nonempty unless ``allow_empty``; even then at least one block
    must be nonempty, otherwise the configuration is vacuous.
    """
    if not 2 <= r <= 5:
        raise ValueError(f"r-box check supports 2 <= r <= 5, got {r}")
    members = family.members
    masks = [b for b in family.masks() if b]
    if allow_empty:
        if masks:
            return CheckResult(True, Witness("r-box", family.n, (masks[0],) + (0,) * (r - 1), (1,) * r))
        return CheckResult(False)

    def dfs(start: int, used: int, unions: list[int], blocks: list[int]):
        if len(blocks) == r:
            return blocks[:]
        for idx in range(start, len(masks)):
            b = masks[idx]
            if b & used:
                continue
            new = [u | b for u in unions]
            if any(u not in members for u in new):
                continue
            blocks.append(b)
            got = dfs(idx + 1, used | b, unions + new, blocks)
            blocks.pop()
            if got is not None:
                return got
        return None

    # unions starts with the empty union so that new contains b itself
    found = dfs(0, 0, [0], [])
    if found is None:
        return CheckResult(False)
    return CheckResult(True, Witness("r-box", family.n, tuple(found), (1,) * r))


def is_t_pseudo_partition_free(family: Family, t: int) -> CheckResult:
    """No A, B, C in the family with A ∪ B = C and |A ∩ B| < t."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    masks = family.masks()
    members = family.members
    layers = _by_layer(family)
    usizes = sorted(layers)
    for a in masks:
        ka = a.bit_count()
        best = None
        for kb, bs in layers.items():
            lo, hi = max(ka, kb, ka + kb - t + 1), ka + kb
            if not any(lo <= s <= hi for s in usizes):
                continue
            for b in bs[bisect_left(bs, a):]:
                if best is not None and b >= best:
                    break
                if (a & b).bit_count() < t and a | b in members:
                    best = b
                    break
        if best is not None:
            return CheckResult(False, Witness("pseudo", family.n, (a | best, a, best), (1, 1, 1), t=t))
    return CheckResult(True)


def _uniform_size(g: Family) -> int | None:
    sizes = {b.bit_count() for b in g.members}
    if len(sizes) > 1:
        raise ValueError(f"family is not uniform (sizes {sorted(sizes)})")
    return sizes.pop() if sizes else None


def are_cross_intersecting(g1: Family, g2: Family) -> CheckResult:
    if g1.n != g2.n:
        raise ValueError("families over different n")
    for a in g1.masks():
        for b in g2.masks():
            if not a & b:
                return CheckResult(False, Witness("cross-int", g1.n, (a, b), (1, 2)))
    return CheckResult(True)


def eq20_bound(n: int, t: int, c: Fraction) -> Fraction:
    return max(Fraction(binomial(n, t)), (c + 1) * binomial(n - 1, t - 1))


def eq20_bound_check(g1: Family, g2: Family, c) -> bool:
    """|G1| + c|G2| <= max{C(n,t), (c+1) C(n-1,t-1)} for uniform t-families."""
    c = Fraction(c)
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if g1.n != g2.n:
        raise ValueError("families over different n")
    t1, t2 = _uniform_size(g1), _uniform_size(g2)
    if t1 is not None and t2 is not None and t1 != t2:
        raise ValueError(f"families are uniform of different sizes {t1} and {t2}")
    t = t1 if t1 is not None else t2
    if t is None:
        return True
    if g1.n < 2 * t:
        raise ValueError(f"need n >= 2t, got n={g1.n}, t={t}")
    if len(g1) < len(g2):
        raise ValueError("need |G1| >= |G2|")
    return len(g1) + c * len(g2) <= eq20_bound(g1.n, t, c)


@dataclass
class Claim1Report:
    max_memberships: int
    feasible_patterns: int
    maximizers: list[tuple[int, ...]] = field(default_factory=list)


# pattern slots: S1∈F1, S2∈F2, S3∈F3, S2∪S3∈F1, S1∪S3∈F2, S1∪S2∈F3
CLAIM1_SLOTS = ("S1@F1", "S2@F2", "S3@F3", "S2uS3@F1", "S1uS3@F2", "S1uS2@F3")
# {S_i∈F_i, S_j∈F_j, S_i∪S_j∈F_k} for the three rotations
CLAIM1_FORBIDDEN = ((1, 2, 3), (0, 2, 4), (0, 1, 5))


def claim1_exhaustive() -> Claim1Report:
    best = -1
    count = 0
    maximizers: list[tuple[int, ...]] = []
    for pat in product((0, 1), repeat=6):
        if any(all(pat[i] for i in tri) for tri in CLAIM1_FORBIDDEN):
            continue
        count += 1
        k = sum(pat)
        if k > best:
            best, maximizers = k, []
        if k == best:
            maximizers.append(pat)
    return Claim1Report(best, count, maximizers)


def check(prop: str, families: Sequence[Family], *, r: int | None = None, t: int | None = None,
          distinct: bool = False, allow_empty: bool = False, c=None) -> CheckResult:
    """Dispatch by CLI property name.  For r-box, ``holds`` means box-free."""
    if prop == "pf":
        return is_partition_free(_one(families), distinct)
    if prop == "cross-pf":
        if len(families) != 3:
            raise ValueError("cross-pf needs exactly three families")
        return is_cross_partition_free(*families, distinct=distinct)
    if prop == "r-pf":
        return is_r_partition_free(_one(families), _need(r, "r"), distinct)
    if prop == "r-box":
        res = contains_r_box(_one(families), _need(r, "r"), allow_empty)
        return CheckResult(not res.holds, res.witness)
    if prop == "pseudo":
        return is_t_pseudo_partition_free(_one(families), _need(t, "t"))
    if prop == "cross-int":
        if len(families) != 2:
            raise ValueError("cross-int needs exactly two families")
        res = are_cross_intersecting(*families)
        if res.holds and c is not None:
            return CheckResult(eq20_bound_check(*families, c))
        return res
    raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")


def _one(families: Sequence[Family]) -> Family:
    if len(families) != 1:
        raise ValueError(f"property needs exactly one family, got {len(families)}")
    return families[0]


def _need(v, label):
    if v is None:
        raise ValueError(f"property needs --{label}")
    return v
