"""Recursive-descent parser for the field expression grammar.

Grammar: numbers, named coordinates (x0..x3, or t for curve components),
parentheses, ``+ - * / ^``, and the functions exp, ln, sin, cos.  ``^`` is
right-associative and binds tighter than unary minus.
"""

from __future__ import annotations

import re

from . import expr as ex

__all__ = ["ParseError", "parse", "COORD_VARS", "CURVE_VARS"]

COORD_VARS = {"x0": 0, "x1": 1, "x2": 2, "x3": 3}
CURVE_VARS = {"t": 0}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


class ParseError(ValueError):
    """Syntax or identifier error; ``offset`` is the byte offset in the source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            stripped = src[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", len(src) - len(stripped))
        if m.lastgroup is None:  # trailing whitespace only
            break
        tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, variables: dict[str, int]):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val, off = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", off)
        return self.advance()

    def parse_expr(self) -> ex.Node:
        node = self.parse_term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.parse_term()
                node = ex.add(node, rhs) if val == "+" else ex.sub(node, rhs)
            else:
                return node

    def parse_term(self) -> ex.Node:
        node = self.parse_unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.parse_unary()
                node = ex.mul(node, rhs) if val == "*" else ex.div(node, rhs)
            else:
                return node

    def parse_unary(self) -> ex.Node:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return ex.neg(self.parse_unary())
        if kind == "op" and val == "+":
            self.advance()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> ex.Node:
        base = self.parse_atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            # exponent may carry a sign and chains right-associatively
            return ex.powr(base, self.parse_unary())
        return base

    def parse_atom(self) -> ex.Node:
        kind, val, off = self.advance()
        if kind == "num":
            return ex.Const(float(val))
        if kind == "ident":
            if val in ex.FUNCTIONS:
                self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")")
                return ex.func(val, arg)
            if val in self.variables:
                return ex.Coord(self.variables[val])
            raise ParseError(f"unknown identifier {val!r}", off)
        if kind == "op" and val == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input", off)


def parse(src: str, variables: dict[str, int] | None = None) -> ex.Node:
    """Parse ``src`` into an expression tree.

    ``variables`` maps identifier names to coordinate indices; the default
    accepts the chart coordinates x0..x3.
    """
    p = _Parser(src, COORD_VARS if variables is None else variables)
    node = p.parse_expr()
    kind, val, off = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected token {val!r} after expression", off)
    return node
