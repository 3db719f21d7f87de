"""Command-line front end.

    singinv analyze --poly "x^4+x^3*y^2+y^6" --vars x,y [--checks all] [--format json|text]
    singinv batch --family families.txt --out records.jsonl [--jobs 4]
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import re
import shlex
import sys
import time
from itertools import product

from .errors import NotIsolated, ParseError, SinginvError
from .invariants import SCHEMA_VERSION, analyze, parse_checks
from .parsing import parse_polynomial

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_ISOLATED = 2


def parse_vars(text: str) -> list:
    names = [v.strip() for v in text.split(",")]
    if not names or any(not v for v in names):
        raise ValueError(f"bad variable list {text!r}")
    for v in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
            raise ValueError(f"bad variable name {v!r}")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate variable names in {text!r}")
    return names


def build_report(poly_text: str, names, checks="all", timings: bool = False) -> dict:
    """Report dictionary for one polynomial.  NotIsolated becomes an error
    entry; input errors propagate."""
    f = parse_polynomial(poly_text, names)
    stages = {} if timings else None
    t0 = time.perf_counter()
    try:
        report = analyze(f, names, checks, stages)
    except NotIsolated as exc:
        from .invariants import Singularity, SingularityReport, format_polynomial

        S = Singularity(f)
        report = SingularityReport(poly=format_polynomial(f, names), vars=list(names), mu=S.mu, tau=S.tau)
        report.error = f"NotIsolated: {exc}"
    if timings:
        stages["total"] = round((time.perf_counter() - t0) * 1000, 3)
        report.timings_ms = stages
    return report.to_dict()


def _text_lines(obj, indent=0):
    pad = "  " * indent
    for key, value in obj.items():
        if isinstance(value, dict):
            yield f"{pad}{key}:"
            yield from _text_lines(value, indent + 1)
        elif isinstance(value, list) and value and isinstance(value[0], str) and key == "generators":
            yield f"{pad}{key}:"
            for item in value:
                yield f"{pad}  {item}"
        else:
            yield f"{pad}{key}: {_scalar(value)}"


def _scalar(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def format_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False)
    return "\n".join(_text_lines(report))


def run_analyze(args) -> int:
    try:
        names = parse_vars(args.vars)
        checks = parse_checks(args.checks)
        report = build_report(args.poly, names, checks, args.timings)
    except (ParseError, ValueError, SinginvError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(format_report(report, args.format))
    if report["error"] and report["error"].startswith("NotIsolated"):
        return EXIT_NOT_ISOLATED
    return EXIT_OK


# -- batch ------------------------------------------------------------------

_RANGE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*):(-?\d+)\.\.(-?\d+)$")


def parse_ranges(text: str) -> list:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        m = _RANGE.match(item)
        if not m:
            raise ValueError(f"bad range {item!r} (expected name:lo..hi)")
        lo, hi = int(m.group(2)), int(m.group(3))
        if hi < lo:
            raise ValueError(f"empty range {item!r}")
        out.append((m.group(1), list(range(lo, hi + 1))))
    return out


def parse_family(text: str) -> list:
    """One family per non-blank, non-comment line of key=value fields."""
    families = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = {}
        for token in shlex.split(line):
            if "=" not in token:
                raise ValueError(f"line {lineno}: expected key=value, got {token!r}")
            key, value = token.split("=", 1)
            if key not in ("template", "ranges", "coeff", "vars", "checks", "name"):
                raise ValueError(f"line {lineno}: unknown field {key!r}")
            fields[key] = value
        if "template" not in fields:
            raise ValueError(f"line {lineno}: missing template")
        params = parse_ranges(fields.get("ranges", "")) + parse_ranges(fields.get("coeff", ""))
        names = [p for p, _ in params]
        if len(set(names)) != len(names):
            raise ValueError(f"line {lineno}: parameter listed twice")
        vars_ = parse_vars(fields.get("vars", "x,y"))
        clash = set(names) & set(vars_)
        if clash:
            raise ValueError(f"line {lineno}: parameters {sorted(clash)} clash with variables")
        checks = fields.get("checks", "all")
        parse_checks(checks)
        families.append(
            {
                "name": fields.get("name", fields["template"]),
                "template": fields["template"],
                "params": params,
                "vars": vars_,
                "checks": checks,
            }
        )
    return families


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def instantiate(template: str, values: dict) -> str:
    """Substitute parameter values; exponents are inserted bare, every other
    occurrence is parenthesized."""

    def repl(m):
        name = m.group(0)
        if name not in values:
            return name
        v = values[name]
        before = template[: m.start()].rstrip()
        if before.endswith("^"):
            if v < 0:
                raise ValueError(f"negative exponent {name}={v}")
            return str(v)
        return f"({v})"

    return _IDENT.sub(repl, template)


def family_instances(fam: dict):
    names = [p for p, _ in fam["params"]]
    for combo in product(*(vals for _, vals in fam["params"])):
        values = dict(zip(names, combo))
        key = fam["name"] + "|" + ",".join(f"{k}={v}" for k, v in values.items())
        yield {
            "key": key,
            "family": fam["name"],
            "template": fam["template"],
            "params": values,
            "vars": fam["vars"],
            "checks": fam["checks"],
        }


def run_instance(task: dict) -> dict:
    """Never raises: failures land in the record's error field."""
    record = {"schema_version": SCHEMA_VERSION, **task, "poly": None, "report": None, "error": None}
    t0 = time.perf_counter()
    try:
        poly = instantiate(task["template"], task["params"])
        record["poly"] = poly
        record["report"] = build_report(poly, task["vars"], task["checks"], timings=True)
        record["error"] = record["report"]["error"]
    except Exception as exc:  # noqa: BLE001 - recorded, batch continues
        record["error"] = f"{type(exc).__name__}: {exc}"
    record["timings_ms"] = {"total": round((time.perf_counter() - t0) * 1000, 3)}
    return record


def read_records(path: str) -> dict:
    records = {}
    if not os.path.exists(path):
        return records
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                continue  # torn write from an interrupted run
            if isinstance(rec, dict) and "key" in rec:
                records[rec["key"]] = rec
    return records


def summarize(records) -> dict:
    summary = {
        "total": 0,
        "quasihomogeneous": 0,
        "not_isolated": 0,
        "errors": 0,
        "conjecture_violations": 0,
        "bound_failures": 0,
    }
    for rec in records:
        summary["total"] += 1
        err = rec.get("error")
        if err:
            if err.startswith("NotIsolated"):
                summary["not_isolated"] += 1
            else:
                summary["errors"] += 1
            continue
        rep = rec.get("report") or {}
        if rep.get("quasihomogeneous", {}).get("saito"):
            summary["quasihomogeneous"] += 1
        checks = rep.get("identity_checks") or {}
        if checks.get("conjecture_colon_not_in_tjurina") is False:
            summary["conjecture_violations"] += 1
        if checks.get("bounds") is False or checks.get("small_difference") is False:
            summary["bound_failures"] += 1
    return summary


def run_batch(family_path: str, out_path: str, jobs: int = 1) -> dict:
    with open(family_path, encoding="utf-8") as fh:
        families = parse_family(fh.read())
    tasks = [t for fam in families for t in family_instances(fam)]
    done = read_records(out_path)
    todo = [t for t in tasks if t["key"] not in done]
    if todo:
        needs_newline = os.path.exists(out_path) and os.path.getsize(out_path) > 0 and not _ends_with_newline(out_path)
        with open(out_path, "a", encoding="utf-8") as out:
            if needs_newline:
                out.write("\n")
            if jobs > 1:
                with multiprocessing.Pool(jobs) as pool:
                    for rec in pool.imap_unordered(run_instance, todo):
                        _append(out, rec, done)
            else:
                for task in todo:
                    _append(out, run_instance(task), done)
    keys = {t["key"] for t in tasks}
    return summarize(done[k] for k in sorted(keys) if k in done)


def _ends_with_newline(path: str) -> bool:
    with open(path, "rb") as fh:
        fh.seek(-1, os.SEEK_END)
        return fh.read(1) == b"\n"


def _append(out, rec: dict, done: dict):
    out.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
    out.flush()
    done[rec["key"]] = rec


def run_batch_cli(args) -> int:
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        summary = run_batch(args.family, args.out, args.jobs)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singinv", description="Invariants of isolated hypersurface singularities")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one polynomial at the origin")
    a.add_argument("--poly", required=True, help="polynomial, e.g. 'x^4+x^3*y^2+y^6'")
    a.add_argument("--vars", required=True, help="comma-separated variable names, e.g. x,y")
    a.add_argument("--checks", default="all", help="'all' or a comma list of: mu,tau,quasihomogeneity,ebs,beta,delta,hilbert,derlog,identities")
    a.add_argument("--format", choices=("json", "text"), default="json")
    a.add_argument("--timings", action="store_true", help="include per-stage timings (output is then not byte-stable)")
    a.set_defaults(func=run_analyze)

    b = sub.add_parser("batch", help="analyze a generated family, appending JSON lines")
    b.add_argument("--family", required=True, help="family file, one template line per family")
    b.add_argument("--out", required=True, help="output file (JSON lines, appended)")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=run_batch_cli)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
