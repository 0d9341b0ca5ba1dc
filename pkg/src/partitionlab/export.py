"""WCNF / LP model export for external solvers, and re-import of their answers.

Slot (or vertex) i becomes variable x_{i+1}.  Each forbidden triple is a hard
clause (¬a ∨ ¬b ∨ ¬c); each weight is a soft unit clause.  Rational weights
are multiplied by the LCM of their denominators; the manifest records that
denominator so an external optimum rescales to the exact value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .core import elements_of, frac_str
from .gadgets import Gadget, constraints
from .search import integer_weights, mn_hypergraph

FORMATS = ("wcnf", "lp")


@dataclass
class ModelProblem:
    name: str
    weights: list[Fraction]
    edges: list[tuple[int, ...]]
    labels: list[str]
    meta: dict = field(default_factory=dict)


def gadget_problem(g: Gadget) -> ModelProblem:
    cs = constraints(g)
    labels = [f"{s.group}:{s.label}" for s in g.slots]
    meta = {"kind": g.kind, "n": g.n, "m": g.m, "rotation": g.rotation}
    return ModelProblem(f"{g.kind}(m={g.m})", [s.weight for s in g.slots], list(cs.forbidden), labels, meta)


def mn_problem(n: int) -> ModelProblem:
    verts, edges = mn_hypergraph(n)
    labels = [str(elements_of(v)) for v in verts]
    return ModelProblem(f"m({n})", [Fraction(1)] * len(verts), edges, labels, {"kind": "mn", "n": n})


def to_wcnf(p: ModelProblem) -> tuple[str, dict]:
    iw, scale = integer_weights(p.weights)
    top = sum(iw) + 1
    soft = [(w, i + 1) for i, w in enumerate(iw) if w > 0]
    lines = [f"c {p.name}", f"c weights scaled by {scale}",
             f"p wcnf {len(iw)} {len(p.edges) + len(soft)} {top}"]
    for e in p.edges:
        lines.append(f"{top} " + " ".join(f"-{v + 1}" for v in e) + " 0")
    for w, v in soft:
        lines.append(f"{w} {v} 0")
    return "\n".join(lines) + "\n", _manifest(p, "wcnf", iw, scale, top)


def to_lp(p: ModelProblem) -> tuple[str, dict]:
    iw, scale = integer_weights(p.weights)
    terms = " + ".join(f"{w} x{i + 1}" for i, w in enumerate(iw)) or "0 x1"
    lines = [f"\\ {p.name}, weights scaled by {scale}", "Maximize", f" obj: {terms}", "Subject To"]
    for k, e in enumerate(p.edges):
        lhs = " + ".join(f"x{v + 1}" for v in e)
        lines.append(f" t{k + 1}: {lhs} <= {len(e) - 1}")
    lines.append("Binary")
    lines.extend(f" x{i + 1}" for i in range(len(iw)))
    lines.append("End")
    return "\n".join(lines) + "\n", _manifest(p, "lp", iw, scale, None)


def _manifest(p: ModelProblem, fmt: str, iw: list[int], scale: int, top) -> dict:
    return {
        "problem": p.name, "format": fmt, **p.meta,
        "num_vars": len(iw), "num_hard": len(p.edges),
        "denominator": scale, "top": top,
        "weights": iw, "labels": p.labels,
        "hard": [list(e) for e in p.edges],
    }


def export_model(p: ModelProblem, fmt: str, out: str | Path) -> tuple[Path, Path]:
    """Write the model to ``out`` and its manifest to ``out`` + '.manifest.json'."""
    if fmt == "wcnf":
        text, manifest = to_wcnf(p)
    elif fmt == "lp":
        text, manifest = to_lp(p)
    else:
        raise ValueError(f"unsupported format {fmt!r}; expected one of {FORMATS}")
    out = Path(out)
    out.write_text(text)
    mpath = out.with_name(out.name + ".manifest.json")
    mpath.write_text(json.dumps(manifest, indent=1))
    return out, mpath


def parse_assignment(text: str) -> list[int]:
    """True variables from MaxSAT 'v' lines, or a bare list of literals."""
    lits: list[int] = []
    v_lines = [ln[1:] for ln in text.splitlines() if ln.startswith("v ")]
    source = v_lines if v_lines else [ln for ln in text.splitlines() if ln and ln[0] not in "cos"]
    for ln in source:
        for tok in ln.split():
            if tok.lstrip("-").isdigit():
                lits.append(int(tok))
    return sorted(x for x in lits if x > 0)


@dataclass
class ImportedOptimum:
    value: Fraction
    true_vars: list[int]
    feasible: bool

    def to_json_obj(self) -> dict:
        return {"value": frac_str(self.value), "true_vars": self.true_vars, "feasible": self.feasible}


def import_optimum(manifest: dict, true_vars: Iterable[int]) -> ImportedOptimum:
    """Rescale an external solution (1-based true variables) to the exact objective."""
    tv = sorted(set(int(v) for v in true_vars))
    if any(not 1 <= v <= manifest["num_vars"] for v in tv):
        raise ValueError("assignment mentions a variable outside the model")
    on = set(tv)
    feasible = not any(all(v + 1 in on for v in e) for e in manifest["hard"])
    total = sum(manifest["weights"][v - 1] for v in tv)
    return ImportedOptimum(Fraction(total, manifest["denominator"]), tv, feasible)


def solution_from_ids(ids: Sequence[int]) -> list[int]:
    return [i + 1 for i in ids]
