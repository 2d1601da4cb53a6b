"""Expression trees over chart coordinates with exact differentiation.

Nodes cover the closed-form function class used everywhere else in the
package: constants, coordinates, the four arithmetic operations, powers,
and exp/ln/sin/cos.  Differentiation is symbolic (never finite differences)
so that algebraic identities downstream hold to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Node",
    "Const",
    "Coord",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Neg",
    "Func",
    "FieldDomainError",
    "add",
    "sub",
    "mul",
    "div",
    "powr",
    "neg",
    "func",
    "diff",
    "evaluate",
    "to_source",
    "substitute",
    "compile_tape",
    "OP_CONST",
    "OP_COORD",
    "OP_ADD",
    "OP_SUB",
    "OP_MUL",
    "OP_DIV",
    "OP_POW",
    "OP_NEG",
    "OP_EXP",
    "OP_LN",
    "OP_SIN",
    "OP_COS",
    "ZERO",
    "ONE",
]


class FieldDomainError(ArithmeticError):
    """Evaluation left the domain of the expression (division by zero, ...)."""


class Node:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Const(Node):
    value: float


@dataclass(frozen=True, slots=True)
class Coord(Node):
    index: int


@dataclass(frozen=True, slots=True)
class Add(Node):
    a: Node
    b: Node


@dataclass(frozen=True, slots=True)
class Sub(Node):
    a: Node
    b: Node


@dataclass(frozen=True, slots=True)
class Mul(Node):
    a: Node
    b: Node


@dataclass(frozen=True, slots=True)
class Div(Node):
    a: Node
    b: Node


@dataclass(frozen=True, slots=True)
class Pow(Node):
    a: Node
    b: Node


@dataclass(frozen=True, slots=True)
class Neg(Node):
    a: Node


FUNCTIONS = ("exp", "ln", "sin", "cos")


@dataclass(frozen=True, slots=True)
class Func(Node):
    name: str
    a: Node


ZERO = Const(0.0)
ONE = Const(1.0)


def _is_const(n: Node, v: float | None = None) -> bool:
    return isinstance(n, Const) and (v is None or n.value == v)


# ---------------------------------------------------------------------------
# Smart constructors.  They fold the cheap safe cases so derivative trees do
# not balloon, but deliberately do not normalize: domain errors (1/0, ln(-1))
# must surface at evaluation time, not construction time.

def add(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def sub(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if a == b:
        return ZERO
    if _is_const(a, 0.0):
        return neg(b)
    return Sub(a, b)


def mul(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a, -1.0):
        return neg(b)
    if _is_const(b, -1.0):
        return neg(a)
    return Mul(a, b)


def div(a: Node, b: Node) -> Node:
    if _is_const(b, 1.0):
        return a
    if _is_const(a, 0.0) and not _is_const(b, 0.0):
        return ZERO
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return Const(a.value / b.value)
    return Div(a, b)


def powr(a: Node, b: Node) -> Node:
    if _is_const(b, 1.0):
        return a
    if _is_const(b, 0.0):
        return ONE
    if _is_const(a) and _is_const(b):
        try:
            v = math.pow(a.value, b.value)
        except (ValueError, OverflowError):
            return Pow(a, b)
        if math.isfinite(v):
            return Const(v)
    return Pow(a, b)


def neg(a: Node) -> Node:
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.a
    return Neg(a)


def func(name: str, a: Node) -> Node:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    if _is_const(a):
        try:
            return Const(_FUNC_EVAL[name](a.value))
        except (FieldDomainError, OverflowError):
            pass
    return Func(name, a)


def _eval_ln(x: float) -> float:
    if x <= 0.0:
        raise FieldDomainError(f"ln of nonpositive value {x!r}")
    return math.log(x)


_FUNC_EVAL = {
    "exp": math.exp,
    "ln": _eval_ln,
    "sin": math.sin,
    "cos": math.cos,
}


# ---------------------------------------------------------------------------
# Differentiation and evaluation.

def diff(n: Node, i: int) -> Node:
    """Exact partial derivative of ``n`` with respect to coordinate ``i``."""
    if isinstance(n, Const):
        return ZERO
    if isinstance(n, Coord):
        return ONE if n.index == i else ZERO
    if isinstance(n, Add):
        return add(diff(n.a, i), diff(n.b, i))
    if isinstance(n, Sub):
        return sub(diff(n.a, i), diff(n.b, i))
    if isinstance(n, Neg):
        return neg(diff(n.a, i))
    if isinstance(n, Mul):
        return add(mul(diff(n.a, i), n.b), mul(n.a, diff(n.b, i)))
    if isinstance(n, Div):
        return div(sub(mul(diff(n.a, i), n.b), mul(n.a, diff(n.b, i))), mul(n.b, n.b))
    if isinstance(n, Pow):
        if isinstance(n.b, Const):
            c = n.b.value
            return mul(mul(Const(c), powr(n.a, Const(c - 1.0))), diff(n.a, i))
        # general f^g = exp(g ln f)
        return mul(
            n,
            add(mul(diff(n.b, i), func("ln", n.a)), mul(n.b, div(diff(n.a, i), n.a))),
        )
    if isinstance(n, Func):
        da = diff(n.a, i)
        if n.name == "exp":
            return mul(Func("exp", n.a), da)
        if n.name == "ln":
            return div(da, n.a)
        if n.name == "sin":
            return mul(Func("cos", n.a), da)
        if n.name == "cos":
            return neg(mul(Func("sin", n.a), da))
    raise TypeError(f"cannot differentiate node {n!r}")


def evaluate(n: Node, xs) -> float:
    """Evaluate at coordinates ``xs`` (indexable), raising FieldDomainError
    when the point lies outside the expression's domain."""
    if isinstance(n, Const):
        return n.value
    if isinstance(n, Coord):
        return float(xs[n.index])
    if isinstance(n, Add):
        return evaluate(n.a, xs) + evaluate(n.b, xs)
    if isinstance(n, Sub):
        return evaluate(n.a, xs) - evaluate(n.b, xs)
    if isinstance(n, Neg):
        return -evaluate(n.a, xs)
    if isinstance(n, Mul):
        return evaluate(n.a, xs) * evaluate(n.b, xs)
    if isinstance(n, Div):
        den = evaluate(n.b, xs)
        if den == 0.0:
            raise FieldDomainError("division by zero")
        return evaluate(n.a, xs) / den
    if isinstance(n, Pow):
        base = evaluate(n.a, xs)
        expo = evaluate(n.b, xs)
        try:
            v = math.pow(base, expo)
        except OverflowError as e:
            raise FieldDomainError("overflow in power") from e
        except ValueError as e:
            raise FieldDomainError(
                f"power domain error for base {base!r}, exponent {expo!r}"
            ) from e
        return v
    if isinstance(n, Func):
        v = evaluate(n.a, xs)
        try:
            return _FUNC_EVAL[n.name](v)
        except OverflowError as e:
            raise FieldDomainError(f"overflow in {n.name}") from e
    raise TypeError(f"cannot evaluate node {n!r}")


def substitute(n: Node, repl: dict[int, Node]) -> Node:
    """Replace coordinate nodes by expressions (used to compose fields with
    curves and frame transforms)."""
    if isinstance(n, Const):
        return n
    if isinstance(n, Coord):
        return repl.get(n.index, n)
    if isinstance(n, Add):
        return add(substitute(n.a, repl), substitute(n.b, repl))
    if isinstance(n, Sub):
        return sub(substitute(n.a, repl), substitute(n.b, repl))
    if isinstance(n, Neg):
        return neg(substitute(n.a, repl))
    if isinstance(n, Mul):
        return mul(substitute(n.a, repl), substitute(n.b, repl))
    if isinstance(n, Div):
        return div(substitute(n.a, repl), substitute(n.b, repl))
    if isinstance(n, Pow):
        return powr(substitute(n.a, repl), substitute(n.b, repl))
    if isinstance(n, Func):
        return func(n.name, substitute(n.a, repl))
    raise TypeError(f"cannot substitute into node {n!r}")


# ---------------------------------------------------------------------------
# Canonical printing.  Minimal parentheses; round-trips through the parser.

_PREC_ADD = 10
_PREC_MUL = 20
_PREC_NEG = 25
_PREC_POW = 30
_PREC_ATOM = 100


def _fmt_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _render(n: Node) -> tuple[str, int]:
    if isinstance(n, Const):
        s = _fmt_number(n.value)
        return (s, _PREC_NEG if s.startswith("-") else _PREC_ATOM)
    if isinstance(n, Coord):
        return (f"x{n.index}", _PREC_ATOM)
    if isinstance(n, Add):
        return (f"{_wrap(n.a, _PREC_ADD)} + {_wrap(n.b, _PREC_ADD)}", _PREC_ADD)
    if isinstance(n, Sub):
        return (f"{_wrap(n.a, _PREC_ADD)} - {_wrap(n.b, _PREC_ADD + 1)}", _PREC_ADD)
    if isinstance(n, Mul):
        return (f"{_wrap(n.a, _PREC_MUL)}*{_wrap(n.b, _PREC_MUL)}", _PREC_MUL)
    if isinstance(n, Div):
        return (f"{_wrap(n.a, _PREC_MUL)}/{_wrap(n.b, _PREC_MUL + 1)}", _PREC_MUL)
    if isinstance(n, Neg):
        return (f"-{_wrap(n.a, _PREC_NEG + 1)}", _PREC_NEG)
    if isinstance(n, Pow):
        # right-associative; base binds tighter than the operator itself
        return (f"{_wrap(n.a, _PREC_POW + 1)}^{_wrap(n.b, _PREC_POW)}", _PREC_POW)
    if isinstance(n, Func):
        return (f"{n.name}({_render(n.a)[0]})", _PREC_ATOM)
    raise TypeError(f"cannot print node {n!r}")


def _wrap(n: Node, minimum: int) -> str:
    s, prec = _render(n)
    return f"({s})" if prec < minimum else s


def to_source(n: Node) -> str:
    return _render(n)[0]


# ---------------------------------------------------------------------------
# Tape compilation for the numeric kernel: a postfix stack program stored as
# parallel opcode/argument arrays.

OP_CONST = 0
OP_COORD = 1
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_DIV = 5
OP_POW = 6
OP_NEG = 7
OP_EXP = 8
OP_LN = 9
OP_SIN = 10
OP_COS = 11

_FUNC_OPS = {"exp": OP_EXP, "ln": OP_LN, "sin": OP_SIN, "cos": OP_COS}


def compile_tape(n: Node) -> tuple[list[int], list[float], int]:
    """Flatten ``n`` into (opcodes, arguments, required stack depth)."""
    codes: list[int] = []
    args: list[float] = []

    def emit(node: Node) -> int:
        if isinstance(node, Const):
            codes.append(OP_CONST)
            args.append(node.value)
            return 1
        if isinstance(node, Coord):
            codes.append(OP_COORD)
            args.append(float(node.index))
            return 1
        if isinstance(node, (Add, Sub, Mul, Div, Pow)):
            da = emit(node.a)
            db = emit(node.b)
            codes.append(
                {
                    Add: OP_ADD,
                    Sub: OP_SUB,
                    Mul: OP_MUL,
                    Div: OP_DIV,
                    Pow: OP_POW,
                }[type(node)]
            )
            args.append(0.0)
            return max(da, 1 + db)
        if isinstance(node, Neg):
            d = emit(node.a)
            codes.append(OP_NEG)
            args.append(0.0)
            return d
        if isinstance(node, Func):
            d = emit(node.a)
            codes.append(_FUNC_OPS[node.name])
            args.append(0.0)
            return d
        raise TypeError(f"cannot compile node {node!r}")

    depth = emit(n)
    return codes, args, depth
