"""A small arithmetic expression language evaluated on jets.

Grammar (EBNF, ASCII only; ``^`` is right-associative and binds tighter
than unary minus, so ``-x^2`` is ``-(x^2)``)::

    expr   = term , { ("+" | "-") , term } ;
    term   = unary , { ("*" | "/") , unary } ;
    unary  = "-" , unary | power ;
    power  = atom , [ "^" , unary ] ;
    atom   = number | ident | ident , "(" , expr , ")" | "(" , expr , ")" ;
    number = digits , [ "." , [ digits ] ] , [ exponent ] | "." , digits , [ exponent ] ;
    exponent = ("e" | "E") , [ "+" | "-" ] , digits ;

Functions: sin, cos, exp, log, sqrt, tanh, atan.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import DomainError, ParseError
from .jets import Jet, Jet1, Jet2, elementary

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "tanh", "atan")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expression"


Expression = Union[Num, Var, Neg, BinOp, Call]


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


def _byte_offset(source: str, pos: int) -> int:
    return len(source[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, source: str, allowed: frozenset[str]):
        self.source = source
        self.allowed = allowed
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, _byte_offset(self.source, tok[2]))

    def expect(self, text):
        tok = self.peek()
        if tok[1] != text or tok[0] == "end":
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            self.fail(f"expected {text!r}, found {found}")
        return self.take()

    def parse(self) -> Expression:
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self):
        left = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self):
        left = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            left = BinOp(op, left, self.unary())
        return left

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        tok = self.peek()
        kind, text, _ = tok
        if kind == "num":
            self.take()
            return Num(float(text))
        if kind == "ident":
            self.take()
            if self.peek()[:2] == ("op", "("):
                if text not in FUNCTIONS:
                    self.fail(f"unknown function {text!r}", tok)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text not in self.allowed:
                allowed = ", ".join(sorted(self.allowed)) or "none"
                self.fail(f"variable {text!r} not allowed (allowed: {allowed})", tok)
            return Var(text)
        if tok[:2] == ("op", "("):
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        self.fail("unexpected end of input" if kind == "end" else f"unexpected {text!r}")


def parse(source: str | bytes, allowed_vars: Iterable[str]) -> Expression:
    """Parse ``source`` into an AST, rejecting variables outside ``allowed_vars``."""
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("source is not valid UTF-8", exc.start) from None
    return _Parser(source, frozenset(allowed_vars)).parse()


# ---------------------------------------------------------------------------
# rendering

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e: Expression) -> int:
    if isinstance(e, BinOp):
        return 4 if e.op == "^" else _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 5


def _wrap(e: Expression, cond: bool) -> str:
    s = render(e)
    return f"({s})" if cond else s


def render(e: Expression) -> str:
    """Source text that parses back to the same tree."""
    if isinstance(e, Num):
        if e.value < 0 or not np.isfinite(e.value):
            raise ValueError(f"literal {e.value!r} has no source form")
        v = float(e.value)
        return str(int(v)) if v.is_integer() and v < 1e15 else repr(v)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({render(e.arg)})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _prec(e.operand) < 3)
    if e.op == "^":
        return _wrap(e.left, _prec(e.left) < 5) + "^" + _wrap(e.right, _prec(e.right) < 3)
    p = _PREC[e.op]
    return (_wrap(e.left, _prec(e.left) < p) + e.op
            + _wrap(e.right, _prec(e.right) <= p))


def variables(e: Expression) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, (Neg, Call)):
        return variables(e.operand if isinstance(e, Neg) else e.arg)
    return variables(e.left) | variables(e.right)


def substitute(e: Expression, name: str, replacement: Expression) -> Expression:
    """Replace every reference to ``name`` (no simplification)."""
    if isinstance(e, Var):
        return replacement if e.name == name else e
    if isinstance(e, Num):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, name, replacement))
    if isinstance(e, Call):
        return Call(e.func, substitute(e.arg, name, replacement))
    return BinOp(e.op, substitute(e.left, name, replacement), substitute(e.right, name, replacement))


# ---------------------------------------------------------------------------
# evaluation

def _integer_literal(e: Expression) -> int | None:
    """Value of an exponent written as an integer literal, possibly negated."""
    if isinstance(e, Neg):
        n = _integer_literal(e.operand)
        return None if n is None else -n
    if isinstance(e, Num) and float(e.value).is_integer():
        return int(e.value)
    return None


def _plain_ipow(base, n: int):
    base = np.asarray(base, dtype=float) if np.ndim(base) else float(base)
    if n < 0:
        ok = np.asarray(base) != 0
        if not ok.all():
            raise DomainError("division by zero", ~ok if np.ndim(base) else None)
    return base ** n if np.ndim(base) else float(base) ** n


def _plain_div(a, b):
    ok = np.asarray(b) != 0
    if not ok.all():
        raise DomainError("division by zero", ~ok if ok.ndim else None)
    return a / b


def _eval(e: Expression, env: Mapping[str, object]):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise ParseError(f"variable {e.name!r} is unbound") from None
    try:
        if isinstance(e, Neg):
            return -_eval(e.operand, env)
        if isinstance(e, Call):
            return elementary(e.func, _eval(e.arg, env))
        a = _eval(e.left, env)
        n = _integer_literal(e.right) if e.op == "^" else None
        if n is not None:
            return a.ipow(n) if isinstance(a, Jet) else _plain_ipow(a, n)
        b = _eval(e.right, env)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            return a / b if isinstance(b, Jet) else _plain_div(a, b)
        # general power: exp(b*log(a)), a > 0
        if isinstance(b, Jet):
            return elementary("exp", b * elementary("log", a))
        if isinstance(a, Jet):
            return a.power(float(b))
        ok = np.asarray(a) > 0
        if not ok.all():
            raise DomainError("non-integer power of non-positive base", ~ok if ok.ndim else None)
        return np.power(a, b)
    except DomainError as exc:
        if exc.node is None:
            raise DomainError(exc.reason, exc.mask, render(e)) from None
        raise


def evaluate(e: Expression, **env):
    """Evaluate with plain numbers/arrays or jets bound to variable names."""
    return _eval(e, env)


def eval_jet1(e: Expression, at: Jet1) -> Jet1:
    """Value and derivatives of a one-variable expression at a Jet1 point."""
    names = variables(e)
    if len(names) > 1:
        raise ValueError(f"expression uses {len(names)} variables; eval_jet1 needs at most one")
    env = {name: at for name in names}
    out = _eval(e, env)
    return out if isinstance(out, Jet) else Jet1.constant(out, at.order)


def eval_jet2(e: Expression, x_seed: Jet2, t_seed: Jet2) -> Jet2:
    """Bivariate derivatives of an expression in {x, t}."""
    extra = variables(e) - {"x", "t"}
    if extra:
        raise ValueError(f"eval_jet2 binds only x and t, found {sorted(extra)}")
    out = _eval(e, {"x": x_seed, "t": t_seed})
    if isinstance(out, Jet):
        return out
    return Jet2.constant(out, min(x_seed.order, t_seed.order))


def univariate(e: Expression, s, order: int = 3) -> list:
    """Plain derivatives ``[f(s), f'(s), ...]`` of a one-variable expression."""
    return eval_jet1(e, Jet1.variable(s, order=order)).derivatives()
