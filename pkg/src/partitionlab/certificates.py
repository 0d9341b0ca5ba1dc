"""Linear-combination certificates over layer profiles.

An atom is an inequality  Σ coeff[(i, t)] · y_i^t >= rhs  where y_i^t counts
the t-sets missing from family i.  A certificate is a nonnegative combination
of atoms.  If every combined coefficient β(i, t) is at most 1, then
Σ_i |F_i| <= familyCount · 2^n − rhsTotal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .core import binomial, frac_str

BUILTINS = ("table1", "clach_3m2", "clach2_3m", "table3_pseudo")
# caps on the (m+1)-layer coefficient of table3_pseudo: the displayed chain
# value, and what the same chain gives with 8/15 applied only once at the end
PSEUDO_CAP_DISPLAYED = Fraction(3076, 3375)
PSEUDO_CAP = Fraction(4, 15) + Fraction(128, 225) + Fraction(64, 225) * Fraction(8, 15)

Key = tuple[int, int]  # (family index, layer)


@dataclass(frozen=True)
class InequalityAtom:
    n: int
    coefficients: Mapping[Key, Fraction]
    rhs: Fraction
    provenance: str
    family_count: int = 3
    axiom: bool = False

    def lhs(self, ys: list[list[int]] | tuple) -> Fraction:
        """Evaluate Σ coeff · y for per-family missing counts ``ys[i-1][t]``."""
        return sum((c * ys[i - 1][t] for (i, t), c in self.coefficients.items()), Fraction(0))

    def holds_for(self, ys) -> bool:
        return self.lhs(ys) >= self.rhs


def _add(coeffs: dict, key: Key, value: Fraction) -> None:
    coeffs[key] = coeffs.get(key, Fraction(0)) + value


def _check_sizes(n: int, sizes: Iterable[int]) -> None:
    if n < 0 or any(s < 0 for s in sizes):
        raise ValueError(f"sizes must be nonnegative, got {tuple(sizes)}")


def atom_eq1(n: int, s1: int, s2: int, s3: int) -> InequalityAtom:
    """Three-family atom: family i pays at layers s_i and s_{i+} + s_{i-}."""
    s = (s1, s2, s3)
    _check_sizes(n, s)
    total = sum(s)
    if total > n:
        raise ValueError(f"eq1 needs s1+s2+s3 <= n, got {total} > {n}")
    coeffs: dict[Key, Fraction] = {}
    for i in range(3):
        other = total - s[i]
        _add(coeffs, (i + 1, s[i]), Fraction(1, binomial(n, s[i])))
        _add(coeffs, (i + 1, other), Fraction(1, binomial(n, other)))
    return InequalityAtom(n, coeffs, Fraction(2), f"eq1({s1},{s2},{s3})")


def atom_eq13(n: int, s1: int, s2: int, s3: int) -> InequalityAtom:
    """eq1 summed over the cyclic rotations; symmetric in the families."""
    coeffs: dict[Key, Fraction] = {}
    for rot in ((s1, s2, s3), (s2, s3, s1), (s3, s1, s2)):
        for k, v in atom_eq1(n, *rot).coefficients.items():
            _add(coeffs, k, v)
    return InequalityAtom(n, coeffs, Fraction(6), f"eq13({s1},{s2},{s3})")


def atom_eq12(n: int, s1: int, s2: int, s3: int) -> InequalityAtom:
    """eq1 with all three families equal, collapsed onto family 1."""
    coeffs: dict[Key, Fraction] = {}
    for (_, t), v in atom_eq1(n, s1, s2, s3).coefficients.items():
        _add(coeffs, (1, t), v)
    return InequalityAtom(n, coeffs, Fraction(2), f"eq12({s1},{s2},{s3})", family_count=1)


def atom_eq19(n: int, t: int, s1: int, s2: int, s3: int) -> InequalityAtom:
    """Single-family atom for t-pseudo partition-free families, s1+s2+s3 = n+t-1."""
    s = (s1, s2, s3)
    _check_sizes(n, s)
    if t < 1:
        raise ValueError(f"eq19 needs t >= 1, got {t}")
    if sum(s) != n + t - 1:
        raise ValueError(f"eq19 needs s1+s2+s3 = n+t-1 = {n + t - 1}, got {sum(s)}")
    if any(x > n for x in s):
        raise ValueError("eq19 sizes must not exceed n")
    coeffs: dict[Key, Fraction] = {}
    for x in s:
        c = Fraction(1, binomial(n, x))
        _add(coeffs, (1, x), c)
        _add(coeffs, (1, n - x), c)
    return InequalityAtom(n, coeffs, Fraction(2), f"eq19(t={t};{s1},{s2},{s3})", family_count=1)


def atom_axiom(n: int, coefficients: Mapping[Key, Fraction], rhs, ref: str,
               family_count: int = 1) -> InequalityAtom:
    """An externally justified inequality, passed through and flagged."""
    coeffs = {k: Fraction(v) for k, v in coefficients.items()}
    bad = [k for k, v in coeffs.items() if v < 0]
    if bad:
        raise ValueError(f"axiom {ref}: negative coefficient at {bad[0]}")
    rhs = Fraction(rhs)
    return InequalityAtom(n, coeffs, rhs, f"axiom({ref})", family_count=family_count, axiom=True)


@dataclass
class Certificate:
    atoms: list[tuple[InequalityAtom, Fraction]]
    name: str = ""


@dataclass
class CoefficientVector:
    n: int
    family_count: int
    beta: dict[Key, Fraction]
    rhs_total: Fraction
    strict_layers: tuple[int, ...]
    axioms: tuple[str, ...] = ()

    def b(self, i: int, t: int) -> Fraction:
        return self.beta.get((i, t), Fraction(0))

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "family_count": self.family_count,
            "beta": {f"{i}:{t}": frac_str(self.b(i, t))
                     for i in range(1, self.family_count + 1) for t in range(self.n + 1)},
            "rhs_total": frac_str(self.rhs_total),
            "strict_layers": list(self.strict_layers),
            "axioms": list(self.axioms),
        }


def combine(cert: Certificate | Iterable[tuple[InequalityAtom, Fraction]]) -> CoefficientVector:
    atoms = cert.atoms if isinstance(cert, Certificate) else list(cert)
    if not atoms:
        raise ValueError("cannot combine an empty certificate")
    n = atoms[0][0].n
    fc = max(a.family_count for a, _ in atoms)
    beta: dict[Key, Fraction] = {}
    rhs = Fraction(0)
    axioms = []
    for atom, mult in atoms:
        if atom.n != n:
            raise ValueError(f"certificate mixes n={n} and n={atom.n}")
        mult = Fraction(mult)
        if mult < 0:
            raise ValueError(f"negative multiplier on {atom.provenance}")
        if atom.axiom and atom.provenance not in axioms:
            axioms.append(atom.provenance)
        if mult == 0:
            continue
        for k, v in atom.coefficients.items():
            _add(beta, k, mult * v)
        rhs += mult * atom.rhs
    full = {(i, t): beta.get((i, t), Fraction(0)) for i in range(1, fc + 1) for t in range(n + 1)}
    strict = tuple(t for t in range(n + 1) if any(full[(i, t)] < 1 for i in range(1, fc + 1)))
    return CoefficientVector(n, fc, full, rhs, strict, tuple(axioms))


@dataclass
class BoundResult:
    valid: bool
    bound: Fraction | None
    strict_layers: tuple[int, ...] = ()
    offending: Key | None = None

    def __bool__(self) -> bool:
        return self.valid


def implied_bound(cv: CoefficientVector, family_count: int | None = None) -> BoundResult:
    fc = cv.family_count if family_count is None else family_count
    for i in range(1, fc + 1):
        for t in range(cv.n + 1):
            if cv.b(i, t) > 1:
                return BoundResult(False, None, offending=(i, t))
    return BoundResult(True, fc * Fraction(2) ** cv.n - cv.rhs_total, cv.strict_layers)


def _c(n: int, k: int) -> Fraction:
    return Fraction(binomial(n, k))


def _layered_axiom(n: int, ck: Mapping[int, Fraction], rhs: Fraction, ref: str,
                   families: int) -> InequalityAtom:
    coeffs = {(i, k): Fraction(v) for i in range(1, families + 1) for k, v in ck.items() if v}
    return atom_axiom(n, coeffs, rhs, ref, family_count=families)


def eq2_weights(m: int) -> dict[int, Fraction]:
    """Layer weights c_k for the three-group gadget over [3m+2]."""
    one, q3, half = Fraction(1), Fraction(3, 4), Fraction(1, 2)
    ck = {k: one for k in (m - 1, m, m + 1, 2 * m + 1, 2 * m + 2, 2 * m + 3)}
    ck.update({m + 2: q3, 2 * m: q3, m + 3: half, 2 * m - 2: half, 2 * m - 1: half})
    return ck


def eq4_weights(m: int) -> dict[int, Fraction]:
    """Layer weights c_j for the cyclic gadget over [3m]."""
    ck = {k: Fraction(1) for k in (m - 2, m - 1, m, m + 1, 2 * m, 2 * m + 1, 2 * m + 2, 2 * m + 3)}
    ck.update({m + 2: Fraction(1, 2), 2 * m - 2: Fraction(1, 2), m + 3: Fraction(1, 3),
               2 * m - 1: Fraction(6, 7)})
    return ck


def axiom_eq2(m: int) -> InequalityAtom:
    n = 3 * m + 2
    rhs = 3 * sum(_c(n, k) for k in (m - 1, m, 2 * m + 2, 2 * m + 3))
    return _layered_axiom(n, eq2_weights(m), rhs, "eq2", 3)


def axiom_eq4(m: int) -> InequalityAtom:
    n = 3 * m
    rhs = sum(_c(n, k) for k in (m - 2, m - 1, m, 2 * m + 2, 2 * m + 3))
    return _layered_axiom(n, eq4_weights(m), rhs, "eq4", 1)


def axiom_eq6(m: int) -> InequalityAtom:
    n = 3 * m
    base = _c(n, m - 3)
    coeffs = {(1, m - 3): Fraction(1), (1, m + 2): base / _c(n, m + 2),
              (1, 2 * m - 1): base / _c(n, m + 1)}
    return atom_axiom(n, coeffs, base, "eq6", family_count=1)


def _check_range(name: str, ok: bool, detail: str) -> None:
    if not ok:
        raise ValueError(f"builtin {name!r}: {detail}")


def builtin(name: str, m: int, t: int | None = None) -> Certificate:
    if name == "table1":
        _check_range(name, m >= 2, f"needs m >= 2, got {m}")
        n = 3 * m + 1
        atoms = [(atom_eq13(n, m, m, m + 1), _c(n, m) / 2)]
        atoms += [(atom_eq13(n, m - j, m + 1, m + j), _c(n, m - j)) for j in range(1, m + 1)]
    elif name == "clach_3m2":
        _check_range(name, m >= 6, f"needs m >= 6, got {m}")
        n = 3 * m + 2
        atoms = [(axiom_eq2(m), Fraction(1))]
        atoms += [(atom_eq13(n, s, m + 2, 2 * m - s), _c(n, s)) for s in range(m - 1)]
    elif name == "clach2_3m":
        _check_range(name, m >= 6, f"needs m >= 6, got {m}")
        n = 3 * m
        atoms = [(axiom_eq4(m), Fraction(1))]
        atoms += [(atom_eq12(n, s, m + 2, 2 * m - 2 - s), _c(n, s)) for s in range(m - 3)]
        atoms.append((axiom_eq6(m), Fraction(1)))
    elif name == "table3_pseudo":
        _check_range(name, t is not None and 1 <= t and 8 * t <= m,
                     f"needs 1 <= t <= m/8, got m={m}, t={t}")
        n = 3 * m - t + 2
        atoms = [(atom_eq19(n, t, m, m, m + 1), _c(n, m) / 2)]
        for j in range(1, m + 1):
            lo, hi = (j + 1) // 2, (j + 2) // 2
            atoms.append((atom_eq19(n, t, m - j, m + lo, m + hi), _c(n, m - j)))
    else:
        raise ValueError(f"unknown builtin {name!r}; expected one of {BUILTINS}")
    return Certificate(atoms, name)


@dataclass
class Expectation:
    n: int
    family_count: int
    unit: tuple[int, ...]
    strict: tuple[int, ...]
    bound: Fraction


def expectation(name: str, m: int, t: int | None = None) -> Expectation:
    """Layers where β must be exactly 1, the strict band, and the target bound."""
    def band(n, lo, hi):
        return sum((_c(n, k) for k in range(lo, hi + 1)), Fraction(0))

    if name == "table1":
        n, fc, top_unit, lo_strict, hi_strict, hi_bound = 3 * m + 1, 3, m, m + 1, 2 * m, 2 * m + 1
    elif name == "clach_3m2":
        n, fc, top_unit, lo_strict, hi_strict, hi_bound = 3 * m + 2, 3, m + 1, m + 2, 2 * m, 2 * m + 1
    elif name == "clach2_3m":
        n, fc, top_unit, lo_strict, hi_strict, hi_bound = 3 * m, 1, m + 1, m + 2, 2 * m - 1, 2 * m + 1
    elif name == "table3_pseudo":
        n = 3 * m - t + 2
        fc, top_unit, lo_strict, hi_strict, hi_bound = 1, m, m + 1, 2 * m - t + 1, 2 * m - t + 2
    else:
        raise ValueError(f"unknown builtin {name!r}")
    unit = tuple(range(0, top_unit + 1)) + tuple(range(hi_strict + 1, n + 1))
    strict = tuple(range(lo_strict, hi_strict + 1))
    return Expectation(n, fc, unit, strict, fc * band(n, m + 1, hi_bound))


@dataclass
class VerifyReport:
    name: str
    m: int
    t: int | None
    passed: bool
    cv: CoefficientVector
    bound: BoundResult
    expected: Expectation
    failures: list[str] = field(default_factory=list)
    atoms: list[tuple[str, Fraction]] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "name": self.name, "m": self.m, "t": self.t, "n": self.cv.n,
            "passed": self.passed,
            "atoms": [{"atom": a, "multiplier": frac_str(x)} for a, x in self.atoms],
            "axioms": list(self.cv.axioms),
            "coefficients": self.cv.to_json_obj(),
            "implied_bound": frac_str(self.bound.bound) if self.bound.valid else None,
            "expected_bound": frac_str(self.expected.bound),
            "unit_layers": list(self.expected.unit),
            "strict_layers": list(self.expected.strict),
            "failures": self.failures,
            "notes": self.notes,
        }


def verify_builtin(name: str, m: int, t: int | None = None) -> VerifyReport:
    cert = builtin(name, m, t)
    cv = combine(cert)
    exp = expectation(name, m, t)
    bound = implied_bound(cv, exp.family_count)
    fails = []
    for i in range(1, exp.family_count + 1):
        for layer in exp.unit:
            if cv.b(i, layer) != 1:
                fails.append(f"beta({i},{layer}) = {frac_str(cv.b(i, layer))}, expected 1")
        for layer in exp.strict:
            if not cv.b(i, layer) < 1:
                fails.append(f"beta({i},{layer}) = {frac_str(cv.b(i, layer))}, expected < 1")
    if not bound.valid:
        fails.append(f"beta > 1 at {bound.offending}")
    elif bound.bound != exp.bound:
        fails.append(f"implied bound {bound.bound} != {exp.bound}")
    notes = {}
    if name == "table3_pseudo":
        b = cv.b(1, m + 1)
        if not b < PSEUDO_CAP:
            fails.append(f"beta(1,{m + 1}) = {frac_str(b)} not below {frac_str(PSEUDO_CAP)}")
        notes = {"beta_m_plus_1": frac_str(b), "cap": frac_str(PSEUDO_CAP),
                 "below_displayed_cap": b < PSEUDO_CAP_DISPLAYED}
    atoms = [(a.provenance, x) for a, x in cert.atoms]
    return VerifyReport(name, m, t, not fails, cv, bound, exp, fails, atoms, notes)
