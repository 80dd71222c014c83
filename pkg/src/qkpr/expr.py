"""Tiny arithmetic grammar for angle arguments such as ``5*pi/18`` or ``acos(1/sqrt3)``.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | call
    call   := FUNC call | atom
    atom   := NUMBER | 'pi' | '(' expr ')'

A function applied to a bare atom (``sqrt3``, ``sqrt 2``) binds tighter than
any operator.
"""

from __future__ import annotations

import math
import re

FUNCS = {
    "acos": math.acos,
    "asin": math.asin,
    "atan": math.atan,
    "sqrt": math.sqrt,
    "cos": math.cos,
    "sin": math.sin,
}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>acos|asin|atan|sqrt|cos|sin|pi)"
    r"|(?P<op>[-+*/()]))"
)


class ExprError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprError(f"cannot parse {text!r} at position {pos}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, val = self.take()
        if val != value:
            raise ExprError(f"expected {value!r} in {self.text!r}")

    def parse(self) -> float:
        if not self.tokens:
            raise ExprError("empty expression")
        val = self.expr()
        if self.i != len(self.tokens):
            raise ExprError(f"trailing input in {self.text!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op = self.take()
            rhs = self.unary()
            if op == "*":
                val *= rhs
            else:
                if rhs == 0:
                    raise ExprError(f"division by zero in {self.text!r}")
                val /= rhs
        return val

    def unary(self):
        if self.peek()[1] in ("+", "-"):
            _, op = self.take()
            val = self.unary()
            return -val if op == "-" else val
        return self.call()

    def call(self):
        kind, val = self.peek()
        if kind == "name" and val in FUNCS:
            self.take()
            arg = self.call()
            try:
                return FUNCS[val](arg)
            except ValueError:
                raise ExprError(f"{val}({arg}) is undefined") from None
        return self.atom()

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return float(val)
        if val == "pi":
            return math.pi
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ExprError(f"unexpected {val!r} in {self.text!r}")


def evaluate(text: str) -> float:
    """Evaluate an angle expression to a float (radians)."""
    return _Parser(str(text)).parse()
