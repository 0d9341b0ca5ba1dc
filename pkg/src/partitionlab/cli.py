"""Command line entry point.  JSON reports go to stdout, summaries to stderr.

Exit codes: 0 verified, 1 violated (witness attached), 2 usage or
precondition error, 3 incomplete (budget ran out).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .certificates import BUILTINS, verify_builtin
from .checkers import PROPERTIES, check, claim1_exhaustive
from .constructions import CONSTRUCTION_NAMES, build as build_construction, construction_identities
from .core import families_to_json_obj, frac_str, layer_profile, load_families
from .export import FORMATS, export_model, gadget_problem, import_optimum, mn_problem, parse_assignment
from .gadgets import (CLI_KINDS, constraints, equality_families, gadget_rhs, max_present_bound,
                      trace_feasible, trace_of, validate)
from .gadgets import build as build_gadget
from .search import (SearchConfig, default_threads, exact_max_trace, exact_mn, heuristic_max_trace,
                     lembp_exhaustive)

EXIT = {"verified": 0, "violated": 1, "error": 2, "incomplete": 3}
REPORT_FIELDS = ("command", "parameters", "result", "status", "witnesses", "elapsed_ms", "tool_version")


@dataclass
class RunReport:
    command: str
    parameters: dict
    result: dict = field(default_factory=dict)
    status: str = "verified"
    witnesses: list = field(default_factory=list)
    elapsed_ms: float = 0.0
    tool_version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        obj = json.loads(text)
        missing = [k for k in REPORT_FIELDS if k not in obj]
        if missing:
            raise ValueError(f"report lacks fields {missing}")
        if obj["status"] not in EXIT:
            raise ValueError(f"unknown status {obj['status']!r}")
        return cls(**{k: obj[k] for k in REPORT_FIELDS})


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json-out", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default $PARTITIONLAB_THREADS or 1)")
    p.add_argument("--budget-secs", type=float, default=3600.0)
    return p


def make_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="partitionlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", parents=[common], help="build a named family")
    p.add_argument("--name", required=True, choices=CONSTRUCTION_NAMES)
    for flag in ("--n", "--m", "--r", "--x", "--lo", "--hi", "--s"):
        p.add_argument(flag, type=int)
    p.add_argument("--out", help="write the family JSON here")

    p = sub.add_parser("check", parents=[common], help="check a forbidden-configuration property")
    p.add_argument("--property", required=True, choices=PROPERTIES)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--c", help="eq20 constant for cross-int (rational)")
    p.add_argument("--distinct", action="store_true", help="forbid ∅ as a part")
    p.add_argument("--allow-empty", action="store_true", help="r-box: allow empty blocks")

    p = sub.add_parser("profile", parents=[common], help="layer profiles of a family file")
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("certify", parents=[common], help="verify a builtin certificate")
    p.add_argument("--name", required=True, choices=BUILTINS)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--json", action="store_true", help="accepted for compatibility; output is always JSON")

    p = sub.add_parser("gadget", parents=[common], help="build and inspect a gadget")
    p.add_argument("--kind", required=True, choices=sorted(CLI_KINDS))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rotation", type=int, default=0)
    p.add_argument("action", nargs="?", default="validate",
                   choices=("validate", "rhs", "constraints", "trace", "equality"))
    p.add_argument("--family", help="family file for the trace action")

    p = sub.add_parser("search", parents=[common], help="exact or heuristic optimization")
    p.add_argument("target", choices=("mn", "trace", "lembp"))
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--kind", choices=sorted(CLI_KINDS))
    p.add_argument("--heuristic", action="store_true")
    p.add_argument("--iters", type=int, default=100_000)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--witnesses", type=int, default=1)
    p.add_argument("--max-nodes", type=int)

    sub.add_parser("claim1", parents=[common], help="exhaustive 2^6 pattern check")

    p = sub.add_parser("identities", parents=[common], help="construction cardinality identities")
    p.add_argument("--m-max", type=int, default=12)

    p = sub.add_parser("export", parents=[common], help="write a WCNF/LP model, or rescale a solution")
    p.add_argument("--kind", required=True, choices=sorted(CLI_KINDS) + ["mn"])
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--format", choices=FORMATS, default="wcnf")
    p.add_argument("--out", help="model path (required unless --solution)")
    p.add_argument("--solution", help="external solver output to rescale")
    p.add_argument("--manifest", help="manifest written by a previous export")
    return ap


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise ValueError(f"--{name.replace('_', '-')} is required here")
    return v


def _cfg(args, witness_limit=1) -> SearchConfig:
    threads = args.threads if args.threads is not None else default_threads()
    return SearchConfig(budget_seconds=args.budget_secs, seed=args.seed, threads=threads,
                        witness_limit=witness_limit, max_nodes=getattr(args, "max_nodes", None))


def _do_construct(args, rep: RunReport):
    fams = build_construction(args.name, n=args.n, m=args.m, r=args.r, x=args.x,
                              lo=args.lo, hi=args.hi, s=args.s)
    obj = families_to_json_obj(fams)
    if args.out:
        Path(args.out).write_text(json.dumps(obj))
    rep.result = {"sizes": [len(f) for f in fams], "n": fams[0].n, "out": args.out}
    if not args.out:
        rep.result["family"] = obj
    return f"{args.name}: sizes {rep.result['sizes']}"


def _do_check(args, rep: RunReport):
    fams = load_families(args.infile)
    res = check(args.property, fams, r=args.r, t=args.t, distinct=args.distinct,
                allow_empty=args.allow_empty, c=args.c)
    rep.result = {"property": args.property, "holds": res.holds}
    if res.witness is not None:
        rep.witnesses = [res.witness.to_json_obj()]
        rep.result["witness_replays"] = res.witness.replay(fams) if args.property != "r-box" else True
    rep.status = "verified" if res.holds else "violated"
    return f"{args.property}: {'holds' if res.holds else 'violated'}"


def _do_profile(args, rep: RunReport):
    fams = load_families(args.infile)
    rep.result = {"profiles": [{"n": p.n, "f": list(p.f), "y": list(p.y), "size": p.size}
                               for p in map(layer_profile, fams)]}
    return f"profiled {len(fams)} famil{'y' if len(fams) == 1 else 'ies'}"


def _do_certify(args, rep: RunReport):
    vr = verify_builtin(args.name, args.m, args.t)
    rep.result = vr.to_json_obj()
    if not vr.passed:
        rep.status = "violated"
        rep.witnesses = vr.failures
    return f"{args.name} m={args.m}: {'pass' if vr.passed else 'FAIL'}; bound {rep.result['implied_bound']}"


def _do_gadget(args, rep: RunReport):
    g = build_gadget(args.kind, args.m, args.rotation)
    if args.action == "validate":
        vr = validate(g)
        rep.result = {"slots": len(g.slots), "checks": vr.checks, "passed": vr.passed,
                      "failures": vr.failures, "total_weight": frac_str(g.total_weight())}
        rep.status = "verified" if vr.passed else "violated"
        return f"{g.kind}(m={g.m}): {len(g.slots)} slots, {'valid' if vr.passed else 'INVALID'}"
    if args.action == "rhs":
        rep.result = {"rhs": frac_str(gadget_rhs(g)), "max_present": frac_str(max_present_bound(g)),
                      "total_weight": frac_str(g.total_weight())}
        return f"rhs {rep.result['rhs']}"
    if args.action == "constraints":
        cs = constraints(g)
        rep.result = {"count": len(cs), "triples": [list(t) for t in cs.forbidden],
                      "union_slot": cs.union_slot}
        return f"{len(cs)} forbidden triples"
    cs = constraints(g)
    if args.action == "equality":
        rows = {}
        for name, fams in equality_families(g).items():
            t = trace_of(g, fams)
            rows[name] = {"weight": frac_str(t.weight()), "feasible": trace_feasible(t, cs).holds}
        bound = max_present_bound(g)
        ok = all(r["feasible"] and r["weight"] == frac_str(bound) for r in rows.values())
        rep.result = {"bound": frac_str(bound), "traces": rows}
        rep.status = "verified" if ok else "violated"
        return f"equality traces {'attain' if ok else 'do NOT attain'} {frac_str(bound)}"
    fams = load_families(_need(args, "family"))
    t = trace_of(g, fams)
    feas = trace_feasible(t, cs)
    rep.result = {"weight": frac_str(t.weight()), "missing_weight": frac_str(t.missing_weight()),
                  "feasible": feas.holds, "chosen": [i for i, c in enumerate(t.chosen) if c]}
    if feas.witness is not None:
        rep.witnesses = [feas.witness.to_json_obj()]
    rep.status = "verified" if feas.holds else "violated"
    return f"trace weight {rep.result['weight']}, feasible={feas.holds}"


def _do_search(args, rep: RunReport):
    if args.target == "mn":
        res = exact_mn(_need(args, "n"), _cfg(args, args.witnesses))
        rep.result = res.to_json_obj()
        rep.status = "verified" if res.proved else "incomplete"
        return f"m({args.n}) {'=' if res.proved else '>='} {frac_str(res.optimum)}"
    if args.target == "lembp":
        lr = lembp_exhaustive(_need(args, "m"))
        rep.result = lr.to_json_obj()
        rep.status = "verified" if lr.all_pass else "violated"
        rep.witnesses = [list(a) for a in lr.failures]
        return f"lembp m={args.m}: {lr.checked} sets, min slack {frac_str(lr.min_slack)}"
    g = build_gadget(_need(args, "kind"), _need(args, "m"))
    cs = constraints(g)
    if args.heuristic:
        seeds = [trace_of(g, fams).chosen for fams in equality_families(g).values()][:2]
        res = heuristic_max_trace(g, cs, _cfg(args), iters=args.iters, restarts=args.restarts,
                                  seed_traces=seeds)
        bound = max_present_bound(g)
        rep.result = {**res.to_json_obj(), "bound": frac_str(bound), "exceeds_bound": res.optimum > bound}
        rep.status = "violated" if res.optimum > bound else "incomplete"
        return f"heuristic best {frac_str(res.optimum)} vs bound {frac_str(bound)}"
    res = exact_max_trace(g, cs, _cfg(args, args.witnesses))
    bound = max_present_bound(g)
    rep.result = {**res.to_json_obj(), "bound": frac_str(bound), "matches_bound": res.optimum == bound}
    if not res.proved:
        rep.status = "incomplete"
    elif res.optimum != bound:
        rep.status = "violated"
    return f"exact optimum {frac_str(res.optimum)} (proved={res.proved}) vs bound {frac_str(bound)}"


def _do_claim1(args, rep: RunReport):
    c = claim1_exhaustive()
    rep.result = {"max_memberships": c.max_memberships, "feasible_patterns": c.feasible_patterns,
                  "maximizers": [list(p) for p in c.maximizers]}
    rep.status = "verified" if c.max_memberships == 4 else "violated"
    return f"claim1: max {c.max_memberships} over {c.feasible_patterns} feasible patterns"


def _do_identities(args, rep: RunReport):
    ir = construction_identities(args.m_max)
    rep.result = {"count": len(ir.rows), "all_hold": ir.all_hold,
                  "rows": [{"m": m, "identity": nm, "lhs": frac_str(a), "rhs": frac_str(b), "holds": ok}
                           for m, nm, a, b, ok in ir.rows]}
    rep.status = "verified" if ir.all_hold else "violated"
    return f"{len(ir.rows)} identities, all hold: {ir.all_hold}"


def _do_export(args, rep: RunReport):
    if args.solution:
        manifest = json.loads(Path(_need(args, "manifest")).read_text())
        imp = import_optimum(manifest, parse_assignment(Path(args.solution).read_text()))
        rep.result = imp.to_json_obj()
        rep.status = "verified" if imp.feasible else "violated"
        return f"external solution value {frac_str(imp.value)}, feasible={imp.feasible}"
    if args.kind == "mn":
        prob = mn_problem(_need(args, "n"))
    else:
        prob = gadget_problem(build_gadget(args.kind, _need(args, "m")))
    model, mpath = export_model(prob, args.format, _need(args, "out"))
    rep.result = {"model": str(model), "manifest": str(mpath), "vars": len(prob.weights),
                  "hard_clauses": len(prob.edges)}
    return f"wrote {model} ({len(prob.weights)} vars, {len(prob.edges)} hard)"


HANDLERS = {
    "construct": _do_construct, "check": _do_check, "profile": _do_profile, "certify": _do_certify,
    "gadget": _do_gadget, "search": _do_search, "claim1": _do_claim1, "identities": _do_identities,
    "export": _do_export,
}


def run(argv=None) -> tuple[int, RunReport | None]:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0), None
    params = {k: v for k, v in vars(args).items() if k not in ("json_out",)}
    rep = RunReport(args.command, params)
    t0 = time.monotonic()
    try:
        summary = HANDLERS[args.command](args, rep)
    except (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as e:
        rep.status = "error"
        rep.result = {"error": str(e)}
        summary = f"error: {e}"
    rep.elapsed_ms = round((time.monotonic() - t0) * 1000, 3)
    text = rep.to_json()
    if args.json_out:
        Path(args.json_out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    print(f"[{rep.status}] {summary}", file=sys.stderr)
    return EXIT[rep.status], rep


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
