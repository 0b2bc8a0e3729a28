"""Command-line front end.

Exit status: 0 when every certificate holds, 1 for input errors, 2 when a
certificate is violated or a uniqueness theorem is contradicted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .dsl import ElaborationError, ParseError, evaluate, load_fixture, parse_fixture
from .nevanlinna import DegenerateInputError, nevanlinna_report, smt_constants_check
from .pl import InequalityCertificate, VerdictKind
from .rational import IdenticalToTargetError, target_str
from .search import PLANTS, SearchConfig, SearchReport, iter_search
from .serialize import SCHEMA_VERSION, certificate_to_json, pl_to_json, q_str
from .smt import DegenerateFamilyError, lemma1_check, theorem1_check
from .uniqueness import (Decision, SharingHypothesisError, lemma2_check, lemma3_check, theorem2_applicable,
                         theorem2_averaged_check, theorem2_check, theorem3_applicable, theorem3_minimal_level,
                         theorem3_threshold, uniqueness_decide)
from .valued import INF, as_prime

PRIME_ENV = "PADIC_NEVANLINNA_PRIME"
EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2
THEOREMS = ("smt", "lemma1", "theorem1", "lemma2", "theorem2", "lemma3", "theorem3", "cor1")


class InputError(Exception):
    pass


# -- argument helpers ------------------------------------------------------------------

def split_top(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    out.append("".join(cur).strip())
    if any(not x for x in out):
        raise InputError(f"empty item in list {text!r}")
    return out


_RANGE = re.compile(r"^([A-Za-z_]+)(\d+)\.\.(?:\1)?(\d+)$")


def expand_names(items: Sequence[str]) -> list[str]:
    """Expand ``a1..a6`` into ``a1, a2, ..., a6``; other items pass through."""
    out = []
    for item in items:
        m = _RANGE.match(item)
        if m:
            lo, hi = int(m.group(2)), int(m.group(3))
            if lo > hi:
                raise InputError(f"empty range {item!r}")
            out.extend(f"{m.group(1)}{i}" for i in range(lo, hi + 1))
        else:
            out.append(item)
    return out


def parse_levels(text: Optional[str], q: int) -> list:
    if text is None:
        return [None] * q
    vals = []
    for item in split_top(text):
        if item.lower() in ("inf", "infinity"):
            vals.append(None)
        else:
            try:
                k = int(item)
            except ValueError:
                raise InputError(f"truncation level {item!r} is not an integer or inf") from None
            if k < 1:
                raise InputError(f"truncation level {k} must be >= 1")
            vals.append(k)
    if len(vals) == 1:
        vals = vals * q
    if len(vals) != q:
        raise InputError(f"expected {q} truncation levels, got {len(vals)}")
    return vals


def parse_smax(text: Optional[str]) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        s = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--smax {text!r} is not a rational number") from None
    if s <= 0:
        raise InputError("--smax must be positive")
    return s


def resolve_prime(value: Optional[str]) -> int:
    raw = value if value is not None else os.environ.get(PRIME_ENV, "2")
    try:
        return int(as_prime(int(raw)))
    except ValueError as exc:
        raise InputError(f"invalid prime {raw!r}: {exc}") from None


class Session:
    """Fixture definitions elaborated under one prime."""

    def __init__(self, fixture_path: Optional[str], prime: int):
        self.prime = prime
        fx = load_fixture(fixture_path) if fixture_path else parse_fixture("")
        self.env = fx.elaborate(prime)

    def value(self, text: str):
        if text in self.env:
            return self.env[text]
        return evaluate(text, self.prime, self.env)

    def function(self, name: str):
        v = self.value(name)
        if v is INF:
            raise InputError(f"{name!r} is inf, not a function")
        return v

    def targets(self, text: str) -> list:
        return [self.value(t) for t in expand_names(split_top(text))]


# -- output ----------------------------------------------------------------------------

def _write(text: str, out: Optional[str]):
    if out in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _csv(rows: list[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


# -- report ----------------------------------------------------------------------------

REPORT_FIELDS = ("N", "Nbar", "m", "T")


def cmd_report(args) -> int:
    prime = resolve_prime(args.prime)
    smax = parse_smax(args.smax)
    sess = Session(args.fixture, prime)
    f = sess.function(args.fn)
    targets = sess.targets(args.targets) if args.targets else []
    levels = [int(k) for k in split_top(args.levels)] if args.levels else []
    rep = nevanlinna_report(f, prime, targets, smax, levels)
    if args.format == "csv":
        rows = []
        for name, entry in rep.targets.items():
            knots = sorted(set().union(*(entry[k].knots() for k in entry)))
            if smax is not None:
                knots = sorted(set(knots) | {smax})
            for s in knots:
                row = {"target": name, "s": q_str(s)}
                row.update({k: q_str(entry[k](s)) for k in entry})
                rows.append(row)
        extra = sorted({k for e in rep.targets.values() for k in e} - set(REPORT_FIELDS))
        _write(_csv(rows, ["target", "s", *REPORT_FIELDS, *extra]), args.out)
        return EXIT_OK
    body = {
        "schema": SCHEMA_VERSION,
        "command": "report",
        "prime": prime,
        "smax": None if smax is None else q_str(smax),
        "function": str(f),
        "m": pl_to_json(rep.m),
        "N": pl_to_json(rep.N),
        "T": pl_to_json(rep.T),
        "targets": {name: {k: pl_to_json(v) for k, v in entry.items()}
                    for name, entry in rep.targets.items()},
    }
    _write(_json(body), args.out)
    return EXIT_OK


# -- verify ----------------------------------------------------------------------------

def _cert_status(certs) -> int:
    return EXIT_VIOLATION if any(c.verdict.kind is VerdictKind.VIOLATED for c in certs) else EXIT_OK


def _decision_json(v) -> dict:
    out = {"decision": v.decision.value, "reason": v.reason,
           "margin": None if v.margin is None else q_str(v.margin)}
    if v.witness is not None:
        out["witness"] = {"f_only": str(v.witness.f_only), "g_only": str(v.witness.g_only)}
    return out


def cmd_verify(args) -> int:
    prime = resolve_prime(args.prime)
    smax = parse_smax(args.smax)
    sess = Session(args.fixture, prime)
    f = sess.function(args.fn)
    family = sess.targets(args.family)
    q = len(family)
    g = sess.function(args.g) if args.g else None
    body: dict = {"schema": SCHEMA_VERSION, "command": "verify", "theorem": args.theorem,
                  "prime": prime, "smax": None if smax is None else q_str(smax),
                  "function": str(f), "family": [target_str(a) for a in family]}
    certs: list[InequalityCertificate] = []
    status = EXIT_OK

    def need_g():
        if g is None:
            raise InputError(f"{args.theorem} needs a second function (--g)")
        body["g"] = str(g)
        return g

    th = args.theorem
    if th == "smt":
        certs.append(smt_constants_check(f, family, prime, smax))
    elif th == "lemma1":
        certs.append(lemma1_check(f, family, prime, smax))
    elif th == "theorem1":
        certs.append(theorem1_check(f, family, prime, args.mode, smax))
    elif th == "lemma2":
        subset = [int(i) for i in split_top(args.subset)] if args.subset else [0, 1, 2, 3]
        certs.append(lemma2_check(f, need_g(), family, parse_levels(args.k, q), subset, prime, smax))
    elif th == "lemma3":
        levels = parse_levels(args.k, 1)
        certs.append(lemma3_check(f, family, levels[0], prime, smax))
    elif th in ("theorem2", "theorem3", "cor1"):
        g = need_g()
        if th == "cor1":
            if q != 5:
                raise InputError(f"cor1 takes exactly five targets, got {q}")
            levels = [None] * 5
        else:
            levels = parse_levels(args.k, q)
        if q < 5:
            raise InputError(f"{th} needs q >= 5 targets, got {q}")
        ok2, margin = theorem2_applicable(q, levels)
        body["theorem2_applicable"] = ok2
        body["margin"] = q_str(margin)
        if th == "theorem3":
            if len(set(levels)) != 1:
                raise InputError("theorem3 takes one common truncation level")
            body["threshold"] = q_str(theorem3_threshold(q))
            body["minimal_level"] = theorem3_minimal_level(q)
            body["theorem3_applicable"] = theorem3_applicable(q, levels[0])
            certs.append(lemma3_check(f, family, levels[0], prime, smax))
        verdict = uniqueness_decide(f, g, family, levels)
        body["uniqueness"] = _decision_json(verdict)
        if verdict.decision is Decision.PAPER_CONTRADICTION:
            status = EXIT_VIOLATION
        if f != g and verdict.decision is not Decision.HYPOTHESES_FAILED:
            try:
                certs.append(theorem2_averaged_check(f, g, family, levels, prime, smax))
            except SharingHypothesisError:
                pass
            certs.append(theorem2_check(f, g, family, levels, prime, smax))
    body["certificates"] = [certificate_to_json(c) for c in certs]
    status = max(status, _cert_status(certs))
    body["exit_status"] = status
    if args.format == "csv":
        rows = [{"certificate": c.label, "verdict": str(c.verdict), **row}
                for c in certs for row in certificate_to_json(c)["slack_table"]]
        _write(_csv(rows, ["certificate", "verdict", "s", "lhs", "rhs", "slack", "budget"]), args.out)
    else:
        _write(_json(body), args.out)
    return status


# -- search ----------------------------------------------------------------------------

def cmd_search(args) -> int:
    primes = tuple(int(as_prime(int(x))) for x in split_top(args.prime)) if args.prime \
        else (resolve_prime(None),)
    cfg = SearchConfig(seed=args.seed, trials=args.trials, max_degree=args.max_deg,
                       primes=primes, plants=tuple(args.plant or ()), verify_every=args.verify_every)
    report = SearchReport(cfg)
    lines = []
    for rec in iter_search(cfg):
        report.records.append(rec)
        lines.append(json.dumps(rec, sort_keys=True))
    summary = report.summary
    lines.append(json.dumps({"summary": summary, "config": {
        "seed": cfg.seed, "trials": cfg.trials, "max_degree": cfg.max_degree,
        "primes": list(cfg.primes), "plants": list(cfg.plants), "verify_every": cfg.verify_every}}, sort_keys=True))
    _write("\n".join(lines) + "\n", args.out)
    bad = summary["contradictions"] or summary["verifier_violations"]
    return EXIT_VIOLATION if bad else EXIT_OK


# -- parser -----------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="padic-nevanlinna",
                 description="Exact p-adic Nevanlinna functionals and theorem checkers.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fixture=True):
        p.add_argument("--prime", help=f"prime p (default: ${PRIME_ENV} or 2)")
        p.add_argument("--smax", help="right end of the log-radius window; omit for s in [0, inf)")
        if fixture:
            p.add_argument("-f", "--fixture", help="fixture file of 'name := expr' lines")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("-o", "--out", help="output path (default: stdout)")

    rp = sub.add_parser("report", help="m, N, N-bar and T breakpoint tables")
    common(rp)
    rp.add_argument("--fn", required=True, help="function name or expression")
    rp.add_argument("--targets", help="comma-separated targets, e.g. 0,1,inf")
    rp.add_argument("--levels", help="truncation levels k for N-bar_{k)} and N-bar_{(k+1}")
    rp.set_defaults(run=cmd_report)

    vp = sub.add_parser("verify", help="run a theorem checker and emit its certificate")
    vp.add_argument("theorem", choices=THEOREMS)
    common(vp)
    vp.add_argument("--fn", required=True, help="function name or expression")
    vp.add_argument("--g", help="second function for the uniqueness checks")
    vp.add_argument("--family", required=True, help="targets, e.g. a1..a6 or inf,0,1,z,z+1")
    vp.add_argument("--k", help="truncation levels: one per target or a single common value; inf allowed")
    vp.add_argument("--subset", help="four target indices for lemma2 (default 0,1,2,3)")
    vp.add_argument("--mode", choices=("direct", "averaged"), default="direct")
    vp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("search", help="seeded search for pairs sharing many constants")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--max-deg", type=int, default=3)
    sp.add_argument("--prime", help="comma-separated primes cycled across trials")
    sp.add_argument("--verify-every", type=int, default=1, help="run the SMT checkers on every n-th trial")
    sp.add_argument("--plant", action="append", choices=PLANTS, help="add a planted pair (repeatable)")
    sp.add_argument("-o", "--out", help="output path (default: stdout)")
    sp.set_defaults(run=cmd_search)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (InputError, ParseError, ElaborationError, DegenerateInputError, DegenerateFamilyError,
            SharingHypothesisError, IdenticalToTargetError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.command == "verify" and args.format == "json":
            _write(_json({"schema": SCHEMA_VERSION, "command": "verify", "theorem": args.theorem,
                          "error": str(exc), "exit_status": EXIT_INPUT}), args.out)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
