"""Infix grammar for analytic functions of ``z``.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') unary)?          exponent: integer constant
    atom   := NUMBER | 'z' | 'i' | 'pi' | '(' expr ')'
            | FUNC '(' expr ')'                   FUNC in exp log sin cos sinh cosh
            | JAC '(' expr ';' expr ')'           JAC in sn cn dn, modulus constant

``str(f)`` of any tree without a numeric primitive prints in this grammar, so
``parse(str(f))`` evaluates identically to ``f``.
"""
from __future__ import annotations

import math
import re

from . import analytic as an
from .errors import ExpressionParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>\*\*|[-+*/^(),;]))"
)
_FUNCS = {"exp", "log", "sin", "cos", "sinh", "cosh"}
_JACOBI = {"sn", "cn", "dn"}


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    out.append(("end", ""))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ExpressionParseError(f"expected {value!r} but found {tok[1] or 'end'!r} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        f = self.expr()
        if self.peek()[0] != "end":
            raise ExpressionParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            g = self.unary()
            f = f * g if op == "*" else f / g
        return f

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            n = self._constant(self.unary())
            if n.imag != 0 or not float(n.real).is_integer():
                raise ExpressionParseError(f"exponent must be an integer, got {n!r}")
            return base ** int(n.real)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return an.const(float(val))
        if kind == "name":
            if val == "z":
                return an.Z
            if val == "i":
                return an.const(1j)
            if val == "pi":
                return an.const(math.pi)
            if val in _FUNCS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return an.Func(val, arg)
            if val in _JACOBI:
                self.take("(")
                arg = self.expr()
                self.take(";")
                k = self._constant(self.expr())
                self.take(")")
                if k.imag != 0:
                    raise ExpressionParseError("elliptic modulus must be real")
                try:
                    return getattr(an, val)(arg, k.real)
                except ValueError as exc:
                    raise ExpressionParseError(str(exc)) from exc
            raise ExpressionParseError(f"unknown name {val!r}")
        if val == "(":
            f = self.expr()
            self.take(")")
            return f
        raise ExpressionParseError(f"unexpected token {val or 'end'!r} in {self.text!r}")

    @staticmethod
    def _constant(f) -> complex:
        if not f.is_constant():
            raise ExpressionParseError("expected a constant expression")
        return complex(an.evaluate(f, 0j))


def parse_expression(text: str) -> an.AnalyticFn:
    if not text or not text.strip():
        raise ExpressionParseError("empty expression")
    return _Parser(text).parse()
