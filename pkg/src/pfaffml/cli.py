"""Command-line front end.

    pfaffml check SYSTEM [--dir x ...] [--irreducible] [--json]
    pfaffml transform [SYSTEM] --pipeline steps.json --out result.json
    pfaffml equiv A B [--seed 0] [--out witness.json]
    pfaffml fixtures list | emit [--out DIR]

SYSTEM is a JSON file or the name of a built-in fixture. Directions are a
variable name from the system's "vars" or a 1-based index. Exit codes: 0 pass,
1 failed check or "No", 2 parse/input error, 3 inconclusive.
"""
from __future__ import annotations

import argparse
import json
import sys as _sys
from pathlib import Path

from . import corpus
from .analysis import check_assumptions, check_integrability, gauge_equivalent, is_irreducible
from .errors import PfaffError, ParseError, UnknownFixture
from .exact import Q
from .system import PfaffianSystem, dumps, load_file, validate
from .transforms import (TransformOutput, addition, bo_extend, dr_middle_convolution,
                         inverse_laplace, inverse_middle_laplace, laplace, middle_convolution,
                         middle_laplace)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

OPS = ("bo", "laplace", "ilaplace", "ml", "iml", "add", "mc", "drmc")


def load_input(ref: str) -> PfaffianSystem:
    """A file path, or a fixture name when no such file exists."""
    if Path(ref).exists():
        return load_file(ref)
    if ref in corpus.names():
        return corpus.builtin(ref).system
    raise ParseError(f"{ref}: no such file or fixture")


def resolve_direction(sys: PfaffianSystem, d) -> int:
    """Variable name or 1-based integer (int or digit string) -> 0-based index."""
    if isinstance(d, str) and d in sys.vars:
        return sys.vars.index(d)
    try:
        k = int(d)
    except (TypeError, ValueError):
        raise ParseError(f"direction {d!r}: not a variable of {list(sys.vars)}") from None
    if isinstance(d, bool) or not 1 <= k <= sys.n:
        raise ParseError(f"direction {d!r}: expected 1..{sys.n}")
    return k - 1


# ------------------------------------------------------------------ pipelines

def parse_pipeline(doc) -> dict:
    """Accept a bare list of steps or {"steps": [...], "input": ..., "output": ...}."""
    if isinstance(doc, list):
        doc = {"steps": doc}
    if not isinstance(doc, dict) or not isinstance(doc.get("steps"), list):
        raise ParseError("pipeline: expected a list of steps or an object with 'steps'")
    for k, st in enumerate(doc["steps"]):
        if not isinstance(st, dict) or "op" not in st:
            raise ParseError(f"steps[{k}]: expected an object with 'op'")
        if st["op"] not in OPS:
            raise ParseError(f"steps[{k}].op: {st['op']!r} not one of {', '.join(OPS)}")
        if st["op"] != "drmc" and "dir" not in st:
            raise ParseError(f"steps[{k}]: missing 'dir'")
    return doc


def _rational_map(doc, path) -> dict:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected an object of label -> rational")
    return {k: _rational(v, f"{path}.{k}") for k, v in doc.items()}


def _rational(v, path):
    if isinstance(v, float):
        raise ParseError(f"{path}: floats are not accepted, use a string such as \"1/7\"")
    try:
        return Q(v)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{path}: {e}") from None


def _record(step: dict, before: PfaffianSystem, out) -> dict:
    rec = {"op": step["op"], "dir": step.get("dir"), "input_rank": before.N}
    if isinstance(out, TransformOutput):
        rec["output_rank"] = out.system.N
        if out.unprojected is not None:
            rec["unprojected_rank"] = out.unprojected.N
        if out.kernel is not None:
            rec["kernel_dim"] = out.kernel.dim
            rec["kernel"] = out.kernel.to_json()
        if out.projection is not None:
            rec["quotient_map"] = out.projection.to_json()
        if out.gauge is not None:
            rec["normalizing_gauge"] = out.gauge.to_json()
        if "iml" in out.stages:
            rec["ml_kernel_dim"] = out.stages["ml"].kernel.dim
            rec["iml_kernel_dim"] = out.stages["iml"].kernel.dim
        if "K_inf" in out.stages:
            rec["K_dim"] = out.stages["K"].dim
            rec["K_inf_dim"] = out.stages["K_inf"].dim
    else:
        rec["output_rank"] = out.N
    return rec


def run_step(sys: PfaffianSystem, step: dict, index: int = 0):
    """Apply one pipeline step; returns (system, provenance record)."""
    op = step["op"]
    path = f"steps[{index}]"
    if op == "drmc":
        out = dr_middle_convolution(sys, _rational(step.get("beta"), f"{path}.beta"))
        return out.system, _record(step, sys, out)
    x = resolve_direction(sys, step["dir"])
    if op == "add":
        out = addition(sys, x, _rational_map(step.get("alpha", {}), f"{path}.alpha"))
        return out, _record(step, sys, out)
    if op == "mc":
        lam = step.get("lambda", step.get("lam", {}))
        out = middle_convolution(sys, x, _rational_map(lam, f"{path}.lambda"))
    else:
        fn = {"bo": bo_extend, "laplace": laplace, "ilaplace": inverse_laplace,
              "ml": middle_laplace, "iml": inverse_middle_laplace}[op]
        out = fn(sys, x)
    return out.system, _record(step, sys, out)


def run_pipeline(sys: PfaffianSystem, steps) -> tuple:
    records = []
    for k, st in enumerate(steps):
        sys, rec = run_step(sys, st, k)
        records.append(rec)
    return sys, records


# ------------------------------------------------------------------ commands

def _emit(report: dict, as_json: bool, lines):
    if as_json:
        print(json.dumps(report, indent=1, sort_keys=True))
    else:
        for ln in lines:
            print(ln)


def cmd_check(args) -> int:
    sysm = load_input(args.input)
    report = {"input": args.input, "checks": {}}
    checks = report["checks"]
    lines = []
    violations = validate(sysm)
    checks["validate"] = {"pass": not violations, "violations": violations}
    lines.append(f"validate: {'pass' if not violations else 'FAIL'}")
    lines += [f"  {v}" for v in violations]
    integ = check_integrability(sysm) if not violations else False
    checks["integrability"] = {"pass": integ}
    lines.append(f"integrability: {'pass' if integ else 'FAIL'}")
    inconclusive = False
    for d in args.dir or []:
        x = resolve_direction(sysm, d)
        name = sysm.vars[x]
        rep = check_assumptions(sysm, x)
        checks[f"assumptions[{name}]"] = rep.to_json()
        lines.append(f"assumptions[{name}]: {'pass' if rep.passed else 'FAIL'}")
        lines += [f"  {m}" for m in rep.messages]
        if args.irreducible:
            v = is_irreducible(sysm, x)
            ok = v.status == "AbsolutelyIrreducible"
            inconclusive |= v.status == "Indeterminate"
            checks[f"irreducible[{name}]"] = dict(v.to_json(), **{"pass": ok})
            lines.append(f"irreducible[{name}]: {v.status} (algebra dim {v.algebra_dim})")
            if v.witness is not None:
                lines.append(f"  invariant subspace of dim {v.witness.dim}: "
                             f"{v.witness.to_json()['basis']}")
    passed = all(c["pass"] for c in checks.values())
    report["pass"] = passed
    _emit(report, args.json, lines + [f"result: {'pass' if passed else 'FAIL'}"])
    if passed:
        return EXIT_OK
    failed_hard = any(not c["pass"] and c.get("status") != "Indeterminate"
                      for c in checks.values())
    return EXIT_INCONCLUSIVE if inconclusive and not failed_hard else EXIT_FAIL


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON: {e}") from None


def cmd_transform(args) -> int:
    spec = parse_pipeline(_read_json(args.pipeline))
    ref = args.input or spec.get("input")
    if not ref:
        raise ParseError("no input system given (positional argument or pipeline 'input')")
    out_path = args.out or spec.get("output")
    sysm = load_input(ref)
    result, records = run_pipeline(sysm, spec["steps"])
    text = dumps(result) + "\n"
    prov = {"input": ref, "steps": records, "output_rank": result.N}
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        side = Path(str(out_path) + ".provenance.json")
        side.write_text(json.dumps(prov, indent=1, sort_keys=True) + "\n", encoding="utf-8")
        if not args.json:
            for r in records:
                extra = f", kernel dim {r['kernel_dim']}" if "kernel_dim" in r else ""
                print(f"{r['op']} dir={r['dir']}: rank {r['input_rank']} -> "
                      f"{r['output_rank']}{extra}")
            print(f"wrote {out_path} and {side}")
        else:
            print(json.dumps(prov, indent=1, sort_keys=True))
    else:
        _sys.stdout.write(text)
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = load_input(args.a), load_input(args.b)
    res = gauge_equivalent(a, b, seed=args.seed)
    report = {"status": res.status, "detail": res.detail,
              "witness": None if res.witness is None else res.witness.to_json()}
    if args.out and res.witness is not None:
        Path(args.out).write_text(json.dumps({"P": res.witness.to_json(),
                                              "convention": "B = P^-1 A P"}, indent=1) + "\n",
                                  encoding="utf-8")
    lines = [f"{res.status}: {res.detail}"]
    if res.witness is not None and not args.out:
        lines.append(f"P = {res.witness.to_json()}")
    _emit(report, args.json, lines)
    return {"Yes": EXIT_OK, "No": EXIT_FAIL}.get(res.status, EXIT_INCONCLUSIVE)


def cmd_fixtures(args) -> int:
    if args.action == "list":
        rows = [(n, corpus.builtin(n)) for n in corpus.names()]
        if args.json:
            print(json.dumps([{"name": n, "n": f.system.n, "N": f.system.N,
                               "provenance": f.provenance} for n, f in rows], indent=1))
        else:
            for n, f in rows:
                print(f"{n:14s} n={f.system.n} N={f.system.N}  {f.provenance}")
        return EXIT_OK
    paths = corpus.emit(args.out or "fixtures")
    for p in paths:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pfaffml", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("check", help="validate, integrability, assumptions, irreducibility")
    p.add_argument("input")
    p.add_argument("--dir", action="append", help="direction (name or 1-based index); repeatable")
    p.add_argument("--irreducible", action="store_true",
                   help="also require absolute irreducibility in each --dir")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("transform", help="run a pipeline of transforms")
    p.add_argument("input", nargs="?")
    p.add_argument("--pipeline", required=True)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("equiv", help="decide constant gauge equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out", help="write the witness P here on Yes")
    common(p)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("fixtures", help="list or emit the built-in systems")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("--out", help="directory for emit (default ./fixtures)")
    common(p)
    p.set_defaults(func=cmd_fixtures)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UnknownFixture) as e:
        print(f"error: {e}", file=_sys.stderr)
        return EXIT_PARSE
    except PfaffError as e:
        print(f"error: {type(e).__name__}: {e}", file=_sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    _sys.exit(main())
