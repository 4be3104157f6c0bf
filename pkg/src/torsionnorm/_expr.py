"""Tiny recursive-descent parser for arithmetic expressions.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | '(' expr ')'

The parser is generic: evaluation is delegated to an ``Evaluator`` so the
same code builds rational functions and skew Laurent polynomials.
"""

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            col = pos + 1
            while col <= len(text) and text[col - 1].isspace():
                col += 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", text=text, line=1, column=col)
        num, name, op = m.groups()
        start = m.start(m.lastindex) + 1
        if op == "**":
            op = "^"
        tokens.append((("int", int(num)) if num else ("name", name) if name else ("op", op), start))
        pos = m.end()
    return tokens


class Evaluator:
    """Callbacks used by :func:`parse_expression`."""

    def integer(self, n):
        raise NotImplementedError

    def name(self, ident):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        raise NotImplementedError

    def power(self, a, n):
        raise NotImplementedError


def parse_expression(text, ev):
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty expression", text=text, line=1, column=1)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def column():
        return tokens[pos][1] if pos < len(tokens) else len(text) + 1

    def fail(msg, col=None):
        raise ParseError(msg, text=text, line=1, column=col or column())

    def wrap(fn, *args):
        col = column()
        try:
            return fn(*args)
        except ParseError:
            raise
        except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
            fail(str(exc), col)

    def expect_op(op):
        nonlocal pos
        if peek() != ("op", op):
            fail(f"expected {op!r}")
        pos += 1

    def expr():
        nonlocal pos
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = peek()[1]
            pos += 1
            rhs = term()
            val = ev.add(val, rhs) if op == "+" else ev.sub(val, rhs)
        return val

    def term():
        nonlocal pos
        val = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = peek()[1]
            col = column()
            pos += 1
            rhs = unary()
            if op == "*":
                val = ev.mul(val, rhs)
            else:
                try:
                    val = ev.div(val, rhs)
                except ParseError:
                    raise
                except (ValueError, ArithmeticError) as exc:
                    fail(str(exc), col)
        return val

    def unary():
        nonlocal pos
        if peek() == ("op", "-"):
            pos += 1
            return ev.neg(unary())
        if peek() == ("op", "+"):
            pos += 1
            return unary()
        return power()

    def power():
        nonlocal pos
        base = atom()
        if peek() == ("op", "^"):
            col = column()
            pos += 1
            sign = 1
            if peek() == ("op", "-"):
                sign = -1
                pos += 1
            elif peek() == ("op", "("):
                # allow t^(-2)
                pos += 1
                if peek() == ("op", "-"):
                    sign = -1
                    pos += 1
                if peek() is None or peek()[0] != "int":
                    fail("expected integer exponent")
                n = peek()[1]
                pos += 1
                expect_op(")")
                try:
                    return ev.power(base, sign * n)
                except (ValueError, ArithmeticError) as exc:
                    fail(str(exc), col)
            if peek() is None or peek()[0] != "int":
                fail("expected integer exponent")
            n = peek()[1]
            pos += 1
            try:
                return ev.power(base, sign * n)
            except (ValueError, ArithmeticError) as exc:
                fail(str(exc), col)
        return base

    def atom():
        nonlocal pos
        tok = peek()
        if tok is None:
            fail("unexpected end of expression")
        kind, val = tok
        if kind == "int":
            pos += 1
            return ev.integer(val)
        if kind == "name":
            col = column()
            pos += 1
            try:
                return ev.name(val)
            except KeyError:
                fail(f"unknown symbol {val!r}", col)
        if tok == ("op", "("):
            pos += 1
            val = expr()
            expect_op(")")
            return val
        fail(f"unexpected token {val!r}")

    result = wrap(expr)
    if pos != len(tokens):
        fail(f"unexpected token {tokens[pos][0][1]!r}")
    return result
