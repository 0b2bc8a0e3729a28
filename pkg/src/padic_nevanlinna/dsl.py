"""Expression language for functions and targets.

Grammar (precedence ``^`` > unary ``-`` > ``* /`` > ``+ -``)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | NAME | 'inf' | '(' expr ')'
             | 'prod' '(' NAME '=' expr '..' expr ',' expr ')'
             | 'deriv' '(' expr ')'

``z`` is the variable, ``p`` is bound to the prime at elaboration, and other
names refer to bound product indices or earlier fixture definitions.
Fixture files hold one ``name := expr`` per line; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional, Union

from .rational import RationalFunction
from .valued import INF, Prime, as_prime

RESERVED = frozenset({"z", "p", "inf", "prod", "deriv"})
MAX_EXPONENT = 4096
MAX_PRODUCT_TERMS = 4096


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected=frozenset()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        exp = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"line {line}, column {column}: {message}{exp}")


class ElaborationError(ValueError):
    pass


# -- AST --------------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = (1, 1)


@dataclass(frozen=True)
class Name:
    name: str
    pos: tuple = (1, 1)


@dataclass(frozen=True)
class Inf:
    pos: tuple = (1, 1)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: tuple = (1, 1)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: tuple = (1, 1)


@dataclass(frozen=True)
class Prod:
    var: str
    lo: "Expr"
    hi: "Expr"
    body: "Expr"
    pos: tuple = (1, 1)


@dataclass(frozen=True)
class Deriv:
    operand: "Expr"
    pos: tuple = (1, 1)


Expr = Union[Num, Name, Inf, Neg, BinOp, Prod, Deriv]


def same_tree(a: Expr, b: Expr) -> bool:
    """Structural equality ignoring source positions."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Num):
        return a.value == b.value
    if isinstance(a, Name):
        return a.name == b.name
    if isinstance(a, Inf):
        return True
    if isinstance(a, (Neg, Deriv)):
        return same_tree(a.operand, b.operand)
    if isinstance(a, BinOp):
        return a.op == b.op and same_tree(a.left, b.left) and same_tree(a.right, b.right)
    return (a.var == b.var and same_tree(a.lo, b.lo) and same_tree(a.hi, b.hi)
            and same_tree(a.body, b.body))


# -- lexer -------------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\.\.|[-+*/^(),=]))")
_START = frozenset({"number", "name", "(", "-"})


@dataclass(frozen=True)
class _Tok:
    kind: str  # "number", "name", an operator, or "end"
    text: str
    column: int


def _lex(text: str, line: int, col0: int) -> list[_Tok]:
    toks, i = [], 0
    while True:
        while i < len(text) and text[i].isspace():
            i += 1
        if i >= len(text):
            toks.append(_Tok("end", "", col0 + i))
            return toks
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", line, col0 + i)
        start = m.start(m.lastgroup)
        kind = {"num": "number", "name": "name"}.get(m.lastgroup) or m.group("op")
        toks.append(_Tok(kind, m.group(m.lastgroup), col0 + start))
        i = m.end()


class _Parser:
    def __init__(self, text: str, line: int, col0: int, names):
        self.toks = _lex(text, line, col0)
        self.i = 0
        self.line = line
        self.names = names
        self.bound: list[str] = []

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        return ParseError(f"unexpected {what}", self.line, t.column, expected)

    def take(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            raise self.fail({kind})
        t = self.tok
        self.i += 1
        return t

    def pos(self):
        return (self.line, self.tok.column)

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise self.fail({"+", "-", "*", "/", "^", "end of input"})
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind in ("+", "-"):
            pos, op = self.pos(), self.take(self.tok.kind).kind
            e = BinOp(op, e, self.term(), pos)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.kind in ("*", "/"):
            pos, op = self.pos(), self.take(self.tok.kind).kind
            e = BinOp(op, e, self.unary(), pos)
        return e

    def unary(self) -> Expr:
        if self.tok.kind == "-":
            pos = self.pos()
            self.take("-")
            return Neg(self.unary(), pos)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "^":
            pos = self.pos()
            self.take("^")
            return BinOp("^", base, self.unary(), pos)
        return base

    def atom(self) -> Expr:
        t, pos = self.tok, self.pos()
        if t.kind == "number":
            self.i += 1
            return Num(int(t.text), pos)
        if t.kind == "(":
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        if t.kind != "name":
            raise self.fail(_START)
        self.i += 1
        if t.text == "inf":
            return Inf(pos)
        if t.text == "prod":
            return self.prod(pos)
        if t.text == "deriv":
            self.take("(")
            e = self.expr()
            self.take(")")
            return Deriv(e, pos)
        if (self.names is not None and t.text not in ("z", "p") and t.text not in self.bound
                and t.text not in self.names):
            raise ParseError(f"unknown identifier {t.text!r}", self.line, t.column)
        return Name(t.text, pos)

    def prod(self, pos) -> Prod:
        self.take("(")
        var_tok = self.take("name")
        if var_tok.text in RESERVED:
            raise ParseError(f"{var_tok.text!r} is reserved", self.line, var_tok.column)
        self.take("=")
        lo = self.expr()
        self.take("..")
        hi = self.expr()
        self.take(",")
        self.bound.append(var_tok.text)
        try:
            body = self.expr()
        finally:
            self.bound.pop()
        self.take(")")
        return Prod(var_tok.text, lo, hi, body, pos)


def parse(text: str, names=None, *, line: int = 1, column: int = 1) -> Expr:
    """Parse one expression.

    When ``names`` is given, identifiers other than ``z``, ``p`` and bound
    product indices must belong to it.
    """
    return _Parser(text, line, column, names).parse()


# -- elaboration ----------------------------------------------------------------------

Value = Union[RationalFunction, type(INF)]


def _int_value(v, what: str, pos) -> int:
    if v is INF or not v.is_constant() or v.constant_value().denominator != 1:
        raise ElaborationError(f"{what} at line {pos[0]}, column {pos[1]} must be an integer constant")
    return int(v.constant_value())


def elaborate(e: Expr, prime: Prime | int, env: Optional[Mapping[str, Value]] = None) -> Value:
    """Evaluate to an exact rational function (or ``INF`` for a bare ``inf``)."""
    p = as_prime(prime)
    env = dict(env or {})
    if isinstance(e, Inf):
        return INF
    return _elab_fn(e, int(p), env)


def _elab_fn(e: Expr, p: int, env) -> RationalFunction:
    if isinstance(e, Num):
        return RationalFunction.constant(e.value)
    if isinstance(e, Name):
        if e.name == "z":
            return RationalFunction.z()
        if e.name == "p":
            return RationalFunction.constant(p)
        if e.name not in env:
            raise ElaborationError(f"unknown identifier {e.name!r} at line {e.pos[0]}, column {e.pos[1]}")
        v = env[e.name]
        if v is INF:
            raise ElaborationError(f"{e.name!r} is inf and cannot appear inside an expression")
        return v
    if isinstance(e, Inf):
        raise ElaborationError(f"inf at line {e.pos[0]}, column {e.pos[1]} is only allowed as a whole target")
    if isinstance(e, Neg):
        return -_elab_fn(e.operand, p, env)
    if isinstance(e, Deriv):
        return _elab_fn(e.operand, p, env).derivative()
    if isinstance(e, Prod):
        lo = _int_value(_elab_fn(e.lo, p, env), "product lower bound", e.pos)
        hi = _int_value(_elab_fn(e.hi, p, env), "product upper bound", e.pos)
        if lo > hi:
            raise ElaborationError(f"empty product range {lo}..{hi}")
        if hi - lo + 1 > MAX_PRODUCT_TERMS:
            raise ElaborationError(f"product with more than {MAX_PRODUCT_TERMS} factors")
        out = RationalFunction.constant(1)
        for k in range(lo, hi + 1):
            out = out * _elab_fn(e.body, p, {**env, e.var: RationalFunction.constant(k)})
        return out
    left = _elab_fn(e.left, p, env)
    if e.op == "^":
        n = _int_value(_elab_fn(e.right, p, env), "exponent", e.pos)
        if abs(n) > MAX_EXPONENT:
            raise ElaborationError(f"exponent {n} exceeds {MAX_EXPONENT}")
        if n < 0 and left.is_zero():
            raise ElaborationError("negative power of the zero function")
        return left ** n
    right = _elab_fn(e.right, p, env)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    if right.is_zero():
        raise ElaborationError(f"division by the zero function at line {e.pos[0]}, column {e.pos[1]}")
    return left / right


def evaluate(text: str, prime: Prime | int, env: Optional[Mapping[str, Value]] = None) -> Value:
    return elaborate(parse(text, set(env or ())), prime, env)


# -- printing -----------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_text(e: Expr) -> str:
    """Print an AST so that reparsing gives the same tree."""
    return _show(e, 0)


def _show(e: Expr, ctx: int) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Inf):
        return "inf"
    if isinstance(e, Deriv):
        return f"deriv({_show(e.operand, 0)})"
    if isinstance(e, Prod):
        return f"prod({e.var}={_show(e.lo, 0)}..{_show(e.hi, 0)}, {_show(e.body, 0)})"
    if isinstance(e, Neg):
        s = "-" + _show(e.operand, _PREC["neg"])
        return f"({s})" if ctx > _PREC["neg"] else s
    prec = _PREC[e.op]
    if e.op == "^":
        s = f"{_show(e.left, prec + 1)}^{_show(e.right, _PREC['neg'])}"
    else:
        s = f"{_show(e.left, prec)} {e.op} {_show(e.right, prec + 1)}"
    return f"({s})" if ctx > prec else s


def value_to_text(v: Value) -> str:
    return "inf" if v is INF else str(v)


# -- fixtures ----------------------------------------------------------------------------

@dataclass
class Fixture:
    definitions: dict  # name -> Expr, in file order

    def elaborate(self, prime: Prime | int) -> dict:
        env: dict = {}
        for name, expr in self.definitions.items():
            env[name] = elaborate(expr, prime, env)
        return env


_DEF = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*:=")


def parse_fixture(text: str) -> Fixture:
    defs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _DEF.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected a definition", lineno, col, {"name :="})
        name = m.group(1)
        if name in RESERVED:
            raise ParseError(f"{name!r} is reserved", lineno, m.start(1) + 1)
        if name in defs:
            raise ParseError(f"{name!r} is defined twice", lineno, m.start(1) + 1)
        body = line[m.end():]
        defs[name] = parse(body, set(defs), line=lineno, column=m.end() + 1)
    return Fixture(defs)


def load_fixture(path: Union[str, Path]) -> Fixture:
    return parse_fixture(Path(path).read_text(encoding="utf-8"))
