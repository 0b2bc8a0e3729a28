"""Lossless JSON encoding of PL functions, verdicts and certificates.

Rationals are always written as ``"n/d"`` strings.  Values nested inside
certificate ``details`` carry a one-key tag (``{"$pl": ...}``) so they decode
back to the same Python objects.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from .pl import InequalityCertificate, PLFunction, Verdict, VerdictKind
from .poly import Polynomial
from .rational import RationalFunction
from .valued import INF

SCHEMA_VERSION = 1


def q_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def q_parse(s: str) -> Fraction:
    if not isinstance(s, str):
        raise ValueError(f"rational must be an 'n/d' string, got {s!r}")
    return Fraction(s)


def _opt(x) -> Optional[str]:
    return None if x is None else q_str(x)


def _opt_parse(s) -> Optional[Fraction]:
    return None if s is None else q_parse(s)


def pl_to_json(f: PLFunction) -> dict:
    return {"domain_end": _opt(f.domain_end), "value_at_0": q_str(f.value_at_0),
            "pieces": [[q_str(s), q_str(m)] for s, m in f.pieces]}


def pl_from_json(d: dict) -> PLFunction:
    return PLFunction(q_parse(d["value_at_0"]), [(q_parse(s), q_parse(m)) for s, m in d["pieces"]],
                      _opt_parse(d["domain_end"]))


def verdict_to_json(v: Verdict) -> dict:
    return {"kind": v.kind.value, "constant": _opt(v.constant), "ratio": _opt(v.ratio),
            "witness": _opt(v.witness), "text": str(v)}


def verdict_from_json(d: dict) -> Verdict:
    return Verdict(VerdictKind(d["kind"]), _opt_parse(d["constant"]), _opt_parse(d["ratio"]),
                   _opt_parse(d["witness"]))


def slack_table(c: InequalityCertificate) -> list[dict]:
    """Values of both sides, slack and budget at every knot of the slack."""
    knots = sorted(set(c.lhs.knots()) | set(c.rhs.knots()) | set(c.small_budget.knots()))
    if c.slack.domain_end is not None:
        knots = sorted(set(knots) | {c.slack.domain_end})
    return [{"s": q_str(s), "lhs": q_str(c.lhs(s)), "rhs": q_str(c.rhs(s)),
             "slack": q_str(c.slack(s)), "budget": q_str(c.small_budget(s))} for s in knots]


def certificate_to_json(c: InequalityCertificate, *, table: bool = True) -> dict:
    out = {
        "label": c.label,
        "lhs": pl_to_json(c.lhs),
        "rhs": pl_to_json(c.rhs),
        "slack": pl_to_json(c.slack),
        "small_budget": pl_to_json(c.small_budget),
        "min_slack": _opt(c.min_slack),
        "final_slope_gap": q_str(c.final_slope_gap),
        "budget_ratio": _opt(c.budget_ratio),
        "verdict": verdict_to_json(c.verdict),
        "details": {k: encode_value(v) for k, v in c.details.items()},
    }
    if table:
        out["slack_table"] = slack_table(c)
    return out


def certificate_from_json(d: dict) -> InequalityCertificate:
    return InequalityCertificate(
        label=d["label"],
        lhs=pl_from_json(d["lhs"]),
        rhs=pl_from_json(d["rhs"]),
        slack=pl_from_json(d["slack"]),
        small_budget=pl_from_json(d["small_budget"]),
        min_slack=_opt_parse(d["min_slack"]),
        final_slope_gap=q_parse(d["final_slope_gap"]),
        budget_ratio=_opt_parse(d["budget_ratio"]),
        verdict=verdict_from_json(d["verdict"]),
        details={k: decode_value(v) for k, v in d["details"].items()},
    )


def encode_value(v: Any) -> Any:
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return {"$rational": q_str(v)}
    if v is INF:
        return {"$inf": True}
    if isinstance(v, PLFunction):
        return {"$pl": pl_to_json(v)}
    if isinstance(v, InequalityCertificate):
        return {"$certificate": certificate_to_json(v, table=False)}
    if isinstance(v, Polynomial):
        return {"$polynomial": [q_str(c) for c in v.coeffs]}
    if isinstance(v, RationalFunction):
        return {"$function": {"num": [q_str(c) for c in v.num.coeffs],
                              "den": [q_str(c) for c in v.den.coeffs], "text": str(v)}}
    if isinstance(v, tuple):
        return {"$tuple": [encode_value(x) for x in v]}
    if isinstance(v, list):
        return [encode_value(x) for x in v]
    if isinstance(v, dict):
        if any(not isinstance(k, str) for k in v):
            raise TypeError("only string keys are serializable")
        return {k: encode_value(x) for k, x in v.items()}
    raise TypeError(f"cannot serialize {type(v).__name__}")


_TAGS = {
    "$rational": lambda x: q_parse(x),
    "$inf": lambda x: INF,
    "$pl": pl_from_json,
    "$certificate": certificate_from_json,
    "$polynomial": lambda x: Polynomial([q_parse(c) for c in x]),
    "$function": lambda x: RationalFunction(Polynomial([q_parse(c) for c in x["num"]]),
                                            Polynomial([q_parse(c) for c in x["den"]]), reduced=True),
    "$tuple": lambda x: tuple(decode_value(y) for y in x),
}


def decode_value(v: Any) -> Any:
    if isinstance(v, list):
        return [decode_value(x) for x in v]
    if isinstance(v, dict):
        if len(v) == 1:
            (k, x), = v.items()
            if k in _TAGS:
                return _TAGS[k](x)
        return {k: decode_value(x) for k, x in v.items()}
    return v


def dumps(obj: Any, **kw) -> str:
    """JSON text for a PL function, certificate or plain data, with a schema version."""
    if isinstance(obj, PLFunction):
        body = {"schema": SCHEMA_VERSION, "type": "pl", "value": pl_to_json(obj)}
    elif isinstance(obj, InequalityCertificate):
        body = {"schema": SCHEMA_VERSION, "type": "certificate", "value": certificate_to_json(obj)}
    else:
        body = {"schema": SCHEMA_VERSION, "type": "value", "value": encode_value(obj)}
    return json.dumps(body, sort_keys=True, **kw)


def loads(text: str) -> Any:
    body = json.loads(text)
    if body.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {body.get('schema')!r}")
    kind, value = body["type"], body["value"]
    if kind == "pl":
        return pl_from_json(value)
    if kind == "certificate":
        return certificate_from_json(value)
    if kind == "value":
        return decode_value(value)
    raise ValueError(f"unknown payload type {kind!r}")
