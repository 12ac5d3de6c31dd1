"""Infix parser for the symbolic kernel's expression syntax.

Grammar (conventional precedence, ``^`` binds tightest, then unary minus,
then ``* /``, then ``+ -``)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom (('^' | '**') exponent)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

``i`` is the imaginary unit; ``sin``, ``cos``, ``exp`` are the only
functions.  Numbers are integers or exact decimals; rationals are written
with ``/``.  Every other name must be declared in the caller's vocabulary.
The printer (``str`` on an expression) emits the same syntax.
"""

from __future__ import annotations

from fractions import Fraction

from .symbolic import Expr, SymbolicError, rational, symbol, _apply_function, I

_RESERVED = {"i", "sin", "cos", "exp"}


class ParseError(SymbolicError):
    """Syntax or vocabulary error, with 1-based line/column position."""

    def __init__(self, message, line, col, text=""):
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, column {col})")


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    n = len(text)
    pos = 0
    while pos < n:
        ch = text[pos]
        if ch == "\n":
            line += 1
            col = 1
            pos += 1
            continue
        if ch.isspace():
            pos += 1
            col += 1
            continue
        start_col = col
        if ch.isdigit() or (ch == "." and pos + 1 < n and text[pos + 1].isdigit()):
            j = pos
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            lit = text[pos:j]
            try:
                value = Fraction(lit)
            except ValueError:
                raise ParseError(f"bad number literal '{lit}'", line, start_col)
            tokens.append(_Token("number", value, line, start_col))
            col += j - pos
            pos = j
            continue
        if ch.isalpha() or ch == "_":
            j = pos
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[pos:j], line, start_col))
            col += j - pos
            pos = j
            continue
        if ch == "*" and pos + 1 < n and text[pos + 1] == "*":
            tokens.append(_Token("op", "^", line, start_col))
            pos += 2
            col += 2
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, line, start_col))
            pos += 1
            col += 1
            continue
        raise ParseError(f"unexpected character '{ch}'", line, col)
    tokens.append(_Token("end", None, line, col))
    return tokens


class _Parser:
    def __init__(self, tokens, allowed):
        self.tokens = tokens
        self.pos = 0
        self.allowed = allowed

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect_op(self, op):
        t = self.next()
        if t.kind != "op" or t.value != op:
            raise ParseError(f"expected '{op}'", t.line, t.col)
        return t

    def parse_expr(self):
        e = self.parse_term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in "+-":
                self.next()
                rhs = self.parse_term()
                e = e + rhs if t.value == "+" else e - rhs
            else:
                return e

    def parse_term(self):
        e = self.parse_unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in "*/":
                self.next()
                rhs = self.parse_unary()
                if t.value == "*":
                    e = e * rhs
                else:
                    try:
                        e = e / rhs
                    except SymbolicError as err:
                        raise ParseError(str(err), t.line, t.col) from None
            else:
                return e

    def parse_unary(self):
        t = self.peek()
        if t.kind == "op" and t.value == "-":
            self.next()
            return -self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        t = self.peek()
        if t.kind == "op" and t.value == "^":
            self.next()
            n = self.parse_exponent()
            try:
                return base ** n
            except SymbolicError as err:
                raise ParseError(str(err), t.line, t.col) from None
        return base

    def parse_exponent(self):
        t = self.next()
        sign = 1
        if t.kind == "op" and t.value == "-":
            sign = -1
            t = self.next()
        if t.kind == "op" and t.value == "(":
            inner = self.parse_exponent()
            self.expect_op(")")
            return sign * inner
        if t.kind == "number" and t.value.denominator == 1:
            return sign * t.value.numerator
        raise ParseError("exponent must be an integer", t.line, t.col)

    def parse_atom(self):
        t = self.next()
        if t.kind == "number":
            return rational(t.value)
        if t.kind == "op" and t.value == "(":
            e = self.parse_expr()
            self.expect_op(")")
            return e
        if t.kind == "name":
            name = t.value
            if name == "i":
                return I
            if name in ("sin", "cos", "exp"):
                self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")")
                try:
                    return _apply_function(name, arg)
                except SymbolicError as err:
                    raise ParseError(str(err), t.line, t.col) from None
            if self.allowed is not None and name not in self.allowed:
                raise ParseError(f"unknown symbol '{name}'", t.line, t.col)
            return symbol(name)
        raise ParseError("expected a number, name or '('", t.line, t.col)


def parse(text, allowed=None):
    """Parse ``text`` into an expression.

    ``allowed`` is the vocabulary of legal symbol names (coordinates and
    parameters); pass None to accept any name.  Raises :class:`ParseError`
    with line/column on malformed input or undeclared symbols.
    """
    if allowed is not None:
        allowed = set(allowed)
        bad = allowed & _RESERVED
        if bad:
            raise SymbolicError(f"reserved names cannot be symbols: {sorted(bad)}")
    parser = _Parser(_tokenize(text), allowed)
    e = parser.parse_expr()
    t = parser.peek()
    if t.kind != "end":
        raise ParseError("unexpected trailing input", t.line, t.col)
    return e
