"""Weighted gadget families, their forbidden triples, and traces.

Three gadgets are built at one canonical placement each:

* ``g3m2``: three groups of 19 sets over [3m+2] (cross setting)
* ``g3m``: 20n interval-based sets on the n-cycle, n = 3m (single family)
* ``prop1``: three groups of 7 sets over [3m] (cross setting)

A trace is the membership pattern of candidate families on the slots.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .certificates import eq2_weights, eq4_weights
from .checkers import CheckResult, Witness
from .core import Family, binomial, frac_str, full_mask, mask_of
from .step10 import (BipartiteGraph, Step10Graph, min_weight_vertex_cover,  # noqa: F401
                     step10_graph, valid_positions)

KINDS = ("g3m2", "g3m", "prop1")
CLI_KINDS = {"3m2": "g3m2", "3m": "g3m", "prop1": "prop1"}


@dataclass(frozen=True)
class Slot:
    slot_id: int
    group: int  # family index 1..3, or cyclic position x for g3m
    label: str
    set: int
    weight: Fraction

    @property
    def size(self) -> int:
        return self.set.bit_count()


@dataclass
class Gadget:
    n: int
    m: int
    kind: str
    slots: list[Slot]
    ck: dict[int, Fraction]
    rotation: int = 0
    # (relation, slot labels...) collected while building, rechecked by validate
    relations: list[tuple] = field(default_factory=list)

    @property
    def cross(self) -> bool:
        return self.kind != "g3m"

    def by_label(self, group: int, label: str) -> Slot:
        for s in self.slots:
            if s.group == group and s.label == label:
                return s
        raise KeyError((group, label))

    def total_weight(self) -> Fraction:
        return sum((s.weight for s in self.slots), Fraction(0))

    def to_json_obj(self) -> dict:
        from .core import elements_of
        return {
            "kind": self.kind, "n": self.n, "m": self.m, "rotation": self.rotation,
            "slots": [{"id": s.slot_id, "group": s.group, "label": s.label,
                       "set": elements_of(s.set), "weight": frac_str(s.weight)} for s in self.slots],
            "ck": {str(k): frac_str(v) for k, v in sorted(self.ck.items())},
        }


class _Builder:
    def __init__(self, n: int):
        self.n = n
        self.slots: list[Slot] = []
        self.relations: list[tuple] = []

    def add(self, group: int, label: str, mask: int, weight) -> int:
        sid = len(self.slots)
        self.slots.append(Slot(sid, group, label, mask, Fraction(weight)))
        return sid


def _c(n: int, k: int) -> Fraction:
    return Fraction(binomial(n, k))


def build_3m2(m: int) -> Gadget:
    """Three 19-set groups over [3m+2]; H_i^{m-1} are consecutive blocks after [5]."""
    if m < 6:
        raise ValueError(f"g3m2 needs m >= 6, got {m}")
    n = 3 * m + 2
    full = full_mask(n)
    ck = eq2_weights(m)
    base = {1: mask_of(range(6, m + 5)), 2: mask_of(range(m + 5, 2 * m + 4)),
            3: mask_of(range(2 * m + 4, 3 * m + 3))}
    hm = {i: base[i] | 1 << (i - 1) for i in (1, 2, 3)}
    e = lambda x: 1 << (x - 1)  # noqa: E731
    b = _Builder(n)
    C = lambda k: _c(n, k)  # noqa: E731
    for i in (1, 2, 3):
        j, k = (x for x in (1, 2, 3) if x != i)
        b.add(i, "m-1", base[i], C(m - 1))
        b.add(i, "m", hm[i], C(m))
        for x in (4, 5):
            b.add(i, f"m+1({x})", hm[i] | e(x), C(m + 1) / 2)
        for jj in (j, k):
            for x in (4, 5):
                b.add(i, f"m+2({jj},{x})", hm[i] | e(jj) | e(x), Fraction(3, 32) * C(m + 2))
        central = hm[i] | e(4) | e(5)
        b.add(i, "m+2", central, Fraction(3, 8) * C(m + 2))
        for jj in (j, k):
            b.add(i, f"m+3({jj})", central | e(jj), ck[m + 3] * C(m + 3) / 2)
        b.add(i, "2m-2", base[j] | base[k], ck[2 * m - 2] * C(2 * m - 2))
        b.add(i, f"2m-1({j})", hm[j] | base[k], ck[2 * m - 1] * C(2 * m - 1) / 2)
        b.add(i, f"2m-1({k})", hm[k] | base[j], ck[2 * m - 1] * C(2 * m - 1) / 2)
        b.add(i, "2m", hm[j] | hm[k], ck[2 * m] * C(2 * m))
        for x, y in ((4, 5), (5, 4)):
            b.add(i, f"2m+1({y})", full & ~(hm[i] | e(x)), C(2 * m + 1) / 2)
        b.add(i, "2m+2", full & ~hm[i], C(2 * m + 2))
        b.add(i, "2m+3", full & ~base[i], C(2 * m + 3))
        rel = b.relations
        rel.append(("adds", i, "m", i, "m-1", i))
        for x in (4, 5):
            rel.append(("adds", i, f"m+1({x})", i, "m", x))
        rel.append(("complement", i, "2m+2", i, "m"))
        rel.append(("complement", i, "2m+3", i, "m-1"))
        for x, y in ((4, 5), (5, 4)):
            rel.append(("complement", i, f"2m+1({y})", i, f"m+1({x})"))
        rel.append(("dunion", i, "2m-2", j, "m-1", k, "m-1"))
        rel.append(("dunion", i, "2m", j, "m", k, "m"))
        rel.append(("dunion", i, f"2m-1({j})", j, "m", k, "m-1"))
        rel.append(("dunion", i, f"2m-1({k})", k, "m", j, "m-1"))
    return Gadget(n, m, "g3m2", b.slots, ck, relations=b.relations)


def _interval(x: int, j: int, n: int) -> int:
    """[x-j+1, x] on the n-cycle (1-based)."""
    mask = 0
    for e in range(x - j + 1, x + 1):
        mask |= 1 << ((e - 1) % n)
    return mask


def _pt(x: int, n: int) -> int:
    return 1 << ((x - 1) % n)


def build_3m(m: int, rotation: int = 0) -> Gadget:
    """The cyclic gadget on [3m]; each position x carries 20 sets.

    ``rotation`` relabels the cycle by x -> x + rotation.
    """
    if m < 6:
        raise ValueError(f"g3m needs m >= 6, got {m}")
    n = 3 * m
    if not 0 <= rotation < n:
        raise ValueError(f"rotation must be in [0, {n})")
    ck = eq4_weights(m)
    C = lambda k: _c(n, k)  # noqa: E731
    iv = lambda x, j: _interval(x + rotation, j, n)  # noqa: E731
    pt = lambda x: _pt(x + rotation, n)  # noqa: E731
    sizes_I = list(range(m - 2, m + 2)) + list(range(2 * m - 1, 2 * m + 4))
    b = _Builder(n)
    for x in range(1, n + 1):
        for j in sizes_I:
            if j == m + 1:
                w = 2 * C(m - 1)
            elif j == 2 * m - 1:
                w = Fraction(2, 7) * C(m + 1)
            else:
                w = C(j)
            b.add(x, f"I{j}", iv(x, j), w)
        wlr = Fraction(m, 4 * m + 2) * C(m + 1)
        b.add(x, "l(m+1)", iv(x - m - 1, m) | pt(x), wlr)
        b.add(x, "r(m+1)", iv(x, m) | pt(x - 2 * m), wlr)
        for jj in (2, 3):
            w = C(m + jj) / 6
            b.add(x, f"l(m+{jj})", iv(x - m - 1, m + jj - 1) | pt(x), w)
            b.add(x, f"r(m+{jj})", iv(x, m + jj - 1) | pt(x - 2 * m - jj + 1), w)
        b.add(x, "s(m+2)", iv(x, m) | pt(x - 2 * m - 1) | pt(x - 2 * m), C(m + 2) / 6)
        b.add(x, "a(2m-2)", iv(x, m) | iv(x - m - 1, m - 2), C(2 * m - 2) / 4)
        b.add(x, "b(2m-2)", iv(x, m - 1) | iv(x - m, m - 1), C(2 * m - 2) / 4)
        b.add(x, "r(2m-1)", iv(x, m) | iv(x - m - 1, m - 1), Fraction(2, 7) * C(2 * m - 1))
        b.add(x, "l(2m-1)", iv(x, m - 1) | iv(x - m, m), Fraction(2, 7) * C(2 * m - 1))
    return Gadget(n, m, "g3m", b.slots, ck, rotation=rotation)


def build_prop1(m: int) -> Gadget:
    """Three 7-set groups over [3m] from the equipartition H_i^m = {i} ∪ B_i."""
    if m < 4:
        raise ValueError(f"prop1 needs m >= 4, got {m}")
    n = 3 * m
    full = full_mask(n)
    blocks = {1: mask_of(range(4, m + 3)), 2: mask_of(range(m + 3, 2 * m + 2)),
              3: mask_of(range(2 * m + 2, 3 * m + 1))}
    hm = {i: blocks[i] | 1 << (i - 1) for i in (1, 2, 3)}
    C = lambda k: _c(n, k)  # noqa: E731
    heavy = C(m - 1) + 1
    b = _Builder(n)
    for i in (1, 2, 3):
        j, k = (x for x in (1, 2, 3) if x != i)
        b.add(i, "m-1", blocks[i], C(m - 1))
        b.add(i, "m", hm[i], C(m))
        b.add(i, f"m+1({j})", hm[i] | 1 << (j - 1), heavy)
        b.add(i, f"m+1({k})", hm[i] | 1 << (k - 1), heavy)
        b.add(i, "2m-2", blocks[j] | blocks[k], heavy)
        b.add(i, "2m", hm[j] | hm[k], C(2 * m))
        b.add(i, "2m+1", full & ~blocks[i], C(2 * m + 1))
        rel = b.relations
        rel.append(("adds", i, "m", i, "m-1", i))
        rel.append(("adds", i, f"m+1({j})", i, "m", j))
        rel.append(("adds", i, f"m+1({k})", i, "m", k))
        rel.append(("dunion", i, "2m-2", j, "m-1", k, "m-1"))
        rel.append(("dunion", i, "2m", j, "m", k, "m"))
        rel.append(("complement", i, "2m+1", i, "m-1"))
    # prop1 has no c_k normalization of its own; record the realised ratios
    ck: dict[int, Fraction] = defaultdict(Fraction)
    for s in b.slots:
        if s.group == 1:
            ck[s.size] += s.weight / C(s.size)
    return Gadget(n, m, "prop1", b.slots, dict(ck), relations=b.relations)


def build(kind: str, m: int, rotation: int = 0) -> Gadget:
    kind = CLI_KINDS.get(kind, kind)
    if kind == "g3m2":
        return build_3m2(m)
    if kind == "g3m":
        return build_3m(m, rotation)
    if kind == "prop1":
        return build_prop1(m)
    raise ValueError(f"unknown gadget kind {kind!r}")


# -- validation ---------------------------------------------------------------

def _label_size(kind: str, m: int, label: str) -> int:
    """Size implied by a slot label, parsed independently of the builders."""
    core = label
    if kind == "g3m" and label.startswith("I"):
        return int(label[1:])
    if "(" in label:
        if kind == "g3m":
            core = label[label.index("(") + 1:-1]
        else:
            core = label[:label.index("(")]
    if core.startswith("2m"):
        base, rest = 2 * m, core[2:]
    else:
        base, rest = m, core[1:]
    return base + (int(rest) if rest else 0)


@dataclass
class ValidationReport:
    passed: bool
    checks: int
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def _cyc_interval_check(x: int, j: int, n: int, rotation: int, mask: int) -> bool:
    # independent construction: full-run rotation of the low j bits
    base = (1 << j) - 1
    start = (x + rotation - j) % n  # 0-based index of x-j+1
    rot = ((base << start) | (base >> (n - start))) & full_mask(n)
    return rot == mask


def validate(g: Gadget) -> ValidationReport:
    fails: list[str] = []
    checks = 0
    n, m = g.n, g.m
    sets = [s.set for s in g.slots]
    checks += 1
    if len(set(sets)) != len(sets):
        seen = {}
        for s in g.slots:
            if s.set in seen:
                fails.append(f"slots {seen[s.set]} and {s.slot_id} are the same set")
                break
            seen[s.set] = s.slot_id
    for s in g.slots:
        checks += 1
        if s.size != _label_size(g.kind, m, s.label):
            fails.append(f"slot {s.slot_id} ({s.group}:{s.label}) has size {s.size}")
        if s.set >> n:
            fails.append(f"slot {s.slot_id} leaves [n]")
    full = full_mask(n)
    lookup = {(s.group, s.label): s.set for s in g.slots}
    for rel in g.relations:
        checks += 1
        kind = rel[0]
        if kind == "adds":
            _, gi, big, gs, small, x = rel
            ok = lookup[(gi, big)] == lookup[(gs, small)] | 1 << (x - 1) and not lookup[(gs, small)] >> (x - 1) & 1
        elif kind == "complement":
            _, ga, a, gb, bl = rel
            ok = lookup[(ga, a)] == full & ~lookup[(gb, bl)]
        elif kind == "dunion":
            _, gu, u, ga, a, gb, bl = rel
            pa, pb = lookup[(ga, a)], lookup[(gb, bl)]
            ok = not pa & pb and pa | pb == lookup[(gu, u)]
        else:
            ok = False
        if not ok:
            fails.append(f"relation {rel} fails")
    if g.kind == "g3m":
        fails += _validate_cyclic(g)
        checks += len(g.slots)
    fails += _validate_weights(g)
    checks += len(g.slots)
    return ValidationReport(not fails, checks, fails)


def _validate_cyclic(g: Gadget) -> list[str]:
    n, m, r = g.n, g.m, g.rotation
    fails = []
    by = {(s.group, s.label): s.set for s in g.slots}

    def interval(x, j):
        base = (1 << j) - 1
        start = (x + r - j) % n
        return ((base << start) | (base >> (n - start))) & full_mask(n)

    def pt(x):
        return 1 << ((x + r - 1) % n)

    for x in range(1, n + 1):
        for s in g.slots:
            if s.group != x or not s.label.startswith("I"):
                continue
            j = int(s.label[1:])
            if not _cyc_interval_check(x, j, n, r, s.set):
                fails.append(f"interval slot {s.slot_id} ({x}:{s.label}) is not [x-j+1, x]")
        pieces = {
            "l(m+1)": (interval(x - m - 1, m), pt(x)),
            "r(m+1)": (interval(x, m), pt(x - 2 * m)),
            "a(2m-2)": (interval(x, m), interval(x - m - 1, m - 2)),
            "b(2m-2)": (interval(x, m - 1), interval(x - m, m - 1)),
            "r(2m-1)": (interval(x, m), interval(x - m - 1, m - 1)),
            "l(2m-1)": (interval(x, m - 1), interval(x - m, m)),
        }
        for label, (p, q) in pieces.items():
            if p & q or by[(x, label)] != p | q:
                fails.append(f"slot {x}:{label} is not the disjoint union of its two pieces")
    return fails


def _validate_weights(g: Gadget) -> list[str]:
    n, m = g.n, g.m
    fails = []
    groups: dict[tuple[int, int], list[Slot]] = defaultdict(list)
    for s in g.slots:
        groups[(s.group, s.size)].append(s)
    if g.kind == "prop1":
        heavy = _c(n, m - 1) + 1
        for s in g.slots:
            want = heavy if s.label.startswith("m+1(") or s.label == "2m-2" else _c(n, s.size)
            if s.weight != want:
                fails.append(f"slot {s.slot_id} ({s.group}:{s.label}) weight {s.weight} != {want}")
        return fails
    for (grp, k), members in sorted(groups.items()):
        total = sum((s.weight for s in members), Fraction(0))
        want = g.ck.get(k, Fraction(0)) * _c(n, k)
        if total != want:
            odd = _odd_one_out(g, members)
            fails.append(f"group {grp} layer {k}: weight {frac_str(total)} != c_k C(n,k) = "
                         f"{frac_str(want)}; suspect slot {odd.slot_id} ({odd.label})")
    if g.kind == "g3m2":
        for s in g.slots:
            if s.size == m + 2:
                want = Fraction(3, 8 if s.label == "m+2" else 32) * _c(n, m + 2)
                if s.weight != want:
                    fails.append(f"slot {s.slot_id} ({s.group}:{s.label}) weight {s.weight} != {want}")
        # equal weights within a size class apart from the central/lateral split
        for (grp, k), members in groups.items():
            if k == m + 2:
                continue
            if len({s.weight for s in members}) > 1:
                odd = _odd_one_out(g, members)
                fails.append(f"slot {odd.slot_id} ({grp}:{odd.label}) breaks equal weights in layer {k}")
    else:
        # identity behind the central (m+1) weight
        if 2 * _c(n, m - 1) != Fraction(m + 1, 2 * m + 1) * _c(n, m + 1):
            fails.append("2C(n,m-1) != (m+1)/(2m+1) C(n,m+1)")
        # every position must carry the same weights label by label
        ref = {s.label: s.weight for s in g.slots if s.group == 1}
        for s in g.slots:
            if s.weight != ref[s.label]:
                fails.append(f"slot {s.slot_id} ({s.group}:{s.label}) weight {s.weight} != {ref[s.label]}")
        for k, c in g.ck.items():
            tot = sum((s.weight for s in g.slots if s.size == k), Fraction(0))
            if tot != c * n * _c(n, k):
                fails.append(f"layer {k}: total {frac_str(tot)} != c_k n C(n,k)")
    return fails


def _odd_one_out(g: Gadget, members: list[Slot]) -> Slot:
    """The slot whose weight differs from its counterparts elsewhere in the gadget."""
    for s in members:
        peers = [t.weight for t in g.slots if t.label == s.label and t.slot_id != s.slot_id]
        if peers and all(w != s.weight for w in peers):
            return s
    return members[0]


# -- constraints and rhs ------------------------------------------------------

@dataclass
class ConstraintSet:
    forbidden: list[tuple[int, int, int]]
    # for each triple, the slot id playing the union role
    union_slot: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.forbidden)


def constraints(g: Gadget) -> ConstraintSet:
    """All forbidden triples, sorted canonically.

    Cross gadgets: one slot per group, union role anywhere.
    g3m: any three distinct slots with C = A ⊔ B.
    """
    index: dict[tuple[int, int], int] = {}
    if g.cross:
        for s in g.slots:
            index[(s.group, s.set)] = s.slot_id
    else:
        for s in g.slots:
            index[(0, s.set)] = s.slot_id
    out = {}
    slots = g.slots
    for a in range(len(slots)):
        sa = slots[a]
        for b in range(a + 1, len(slots)):
            sb = slots[b]
            if sa.set & sb.set:
                continue
            if g.cross:
                if sa.group == sb.group:
                    continue
                third = 6 - sa.group - sb.group
                u = index.get((third, sa.set | sb.set))
            else:
                u = index.get((0, sa.set | sb.set))
            if u is None:
                continue
            tri = tuple(sorted((sa.slot_id, sb.slot_id, u)))
            out[tri] = u
    keys = sorted(out)
    return ConstraintSet(keys, [out[k] for k in keys])


def gadget_rhs(g: Gadget) -> Fraction:
    """Right-hand side of the gadget inequality.

    For g3m2 and g3m it bounds the present weight; for prop1 it is the
    minimum missing weight.
    """
    n, m = g.n, g.m
    if g.kind == "g3m2":
        ks = list(range(m + 1, m + 4)) + list(range(2 * m - 2, 2 * m + 2))
        return 3 * sum((g.ck.get(k, 0) * _c(n, k) for k in ks), Fraction(0))
    if g.kind == "g3m":
        ks = list(range(m + 1, m + 4)) + list(range(2 * m - 2, 2 * m + 2))
        return n * sum((g.ck.get(k, 0) * _c(n, k) for k in ks), Fraction(0))
    return 2 * _c(n, m) + 5 * _c(n, m - 1)


def max_present_bound(g: Gadget) -> Fraction:
    """The gadget inequality as a bound on present weight."""
    if g.kind == "prop1":
        return g.total_weight() - gadget_rhs(g)
    return gadget_rhs(g)


# -- traces -------------------------------------------------------------------

@dataclass(frozen=True)
class Trace:
    gadget: Gadget
    chosen: tuple[bool, ...]

    def weight(self) -> Fraction:
        return trace_weight(self)

    def missing_weight(self) -> Fraction:
        return self.gadget.total_weight() - self.weight()


def trace_of(g: Gadget, families: Sequence[Family] | Family) -> Trace:
    if isinstance(families, Family):
        families = [families]
    want = 3 if g.cross else 1
    if len(families) != want:
        raise ValueError(f"{g.kind} traces need {want} families, got {len(families)}")
    for f in families:
        if f.n != g.n:
            raise ValueError(f"family over n={f.n}, gadget over n={g.n}")
    chosen = []
    for s in g.slots:
        fam = families[s.group - 1] if g.cross else families[0]
        chosen.append(s.set in fam)
    return Trace(g, tuple(chosen))


def trace_from_ids(g: Gadget, ids) -> Trace:
    ids = set(ids)
    return Trace(g, tuple(s.slot_id in ids for s in g.slots))


def trace_weight(t: Trace) -> Fraction:
    return sum((s.weight for s, c in zip(t.gadget.slots, t.chosen) if c), Fraction(0))


def trace_feasible(t: Trace, cs: ConstraintSet) -> CheckResult:
    g = t.gadget
    for tri, u in zip(cs.forbidden, cs.union_slot):
        if all(t.chosen[i] for i in tri):
            parts = [i for i in tri if i != u]
            if g.cross:
                order = sorted(tri, key=lambda i: g.slots[i].group)
                sets = tuple(g.slots[i].set for i in order)
                uidx = [g.slots[i].group for i in order].index(g.slots[u].group) + 1
                w = Witness("cross", g.n, sets, (1, 2, 3), union_index=uidx)
            else:
                sets = (g.slots[u].set, g.slots[parts[0]].set, g.slots[parts[1]].set)
                w = Witness("partition", g.n, sets, (1, 1, 1))
            return CheckResult(False, w)
    return CheckResult(True)


def equality_families(g: Gadget) -> dict[str, list[Family]]:
    """The extremal families whose traces should attain the gadget bound."""
    from .constructions import double, example4_triple, kleitman_family, tilde_kx
    from .core import band_family
    n, m = g.n, g.m
    if g.kind == "g3m2":
        k = kleitman_family(n)
        kd = double(kleitman_family(n - 1))
        f1 = band_family(n, m + 2, 2 * m + 1)
        f2 = band_family(n, m + 1, 2 * m + 2)
        return {"K(3m+2)^3": [k, k, k], "K(3m+1)^d^3": [kd, kd, kd], "asymmetric": [f1, f2, f2]}
    if g.kind == "g3m":
        out = {"K(3m)": [kleitman_family(n)]}
        for x in range(1, n + 1):
            out[f"tilde_K_{x}"] = [tilde_kx(n, x)]
        return out
    return {"example4": list(example4_triple(m))}
