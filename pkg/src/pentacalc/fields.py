"""Differentiable scalar fields over the four chart coordinates.

A ScalarField wraps an expression tree and provides exact partial
derivatives, scalar and batch evaluation, composition, and printing.  The
engine covers closed-form C-infinity expressions, which is all the identity
suites need; there is no CAS-style normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel, parser
from . import expr as ex
from .expr import FieldDomainError

__all__ = [
    "Point",
    "ScalarField",
    "NumericField",
    "FieldDomainError",
    "parse_field",
    "parse_curve_component",
    "eval_field",
    "partial",
    "field_combine",
    "as_xs",
    "concat_tapes",
]


@dataclass(frozen=True)
class Point:
    """A chart point: four real coordinates x0..x3, all finite."""

    x0: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        for v in (self.x0, self.x1, self.x2, self.x3):
            if not math.isfinite(v):
                raise ValueError(f"non-finite coordinate {v!r}")

    @classmethod
    def of(cls, seq) -> "Point":
        a, b, c, d = (float(v) for v in seq)
        return cls(a, b, c, d)

    def coords(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    def __getitem__(self, i: int) -> float:
        return (self.x0, self.x1, self.x2, self.x3)[i]

    def __iter__(self):
        return iter((self.x0, self.x1, self.x2, self.x3))


def as_xs(p) -> np.ndarray:
    """Coerce a Point or 4-sequence to a coordinate array."""
    if isinstance(p, Point):
        return p.coords()
    a = np.asarray(p, dtype=np.float64)
    if a.shape != (4,):
        raise ValueError(f"expected 4 coordinates, got shape {a.shape}")
    return a


class ScalarField:
    """Immutable differentiable field; all operations are re-entrant."""

    __slots__ = ("expr", "_tape", "_partials")

    def __init__(self, node: ex.Node):
        if not isinstance(node, ex.Node):
            raise TypeError("ScalarField wraps an expression node")
        object.__setattr__(self, "expr", node)
        object.__setattr__(self, "_tape", None)
        object.__setattr__(self, "_partials", {})

    def __setattr__(self, *a):
        raise AttributeError("ScalarField is immutable")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def constant(cls, v: float) -> "ScalarField":
        return cls(ex.Const(float(v)))

    @classmethod
    def coordinate(cls, i: int) -> "ScalarField":
        if i not in (0, 1, 2, 3):
            raise ValueError("coordinate index must be 0..3")
        return cls(ex.Coord(i))

    @staticmethod
    def wrap(v) -> "ScalarField":
        if isinstance(v, ScalarField):
            return v
        if isinstance(v, (int, float, np.floating, np.integer)):
            return ScalarField.constant(float(v))
        raise TypeError(f"cannot interpret {v!r} as a scalar field")

    # -- evaluation ----------------------------------------------------------

    def eval(self, p) -> float:
        return ex.evaluate(self.expr, as_xs(p))

    def eval_many(self, X) -> np.ndarray:
        codes, args = self.tape
        return _kernel.eval_many(codes, args, np.asarray(X, dtype=np.float64))

    def __call__(self, p) -> float:
        return self.eval(p)

    @property
    def tape(self):
        if self._tape is None:
            codes, args, depth = ex.compile_tape(self.expr)
            if depth > 120:
                raise ValueError("expression too deep for the numeric kernel")
            object.__setattr__(
                self,
                "_tape",
                (np.array(codes, dtype=np.int32), np.array(args, dtype=np.float64)),
            )
        return self._tape

    # -- calculus ------------------------------------------------------------

    def partial(self, i: int) -> "ScalarField":
        if i not in (0, 1, 2, 3):
            raise ValueError("coordinate index must be 0..3")
        cached = self._partials.get(i)
        if cached is None:
            cached = ScalarField(ex.diff(self.expr, i))
            self._partials[i] = cached
        return cached

    def compose(self, parts) -> "ScalarField":
        """Substitute coordinate i by parts[i]; parts shorter than 4 leave the
        remaining coordinates in place."""
        repl = {i: ScalarField.wrap(f).expr for i, f in enumerate(parts)}
        return ScalarField(ex.substitute(self.expr, repl))

    @property
    def is_zero(self) -> bool:
        return self.expr == ex.ZERO or (
            isinstance(self.expr, ex.Const) and self.expr.value == 0.0
        )

    @property
    def is_constant(self) -> bool:
        return isinstance(self.expr, ex.Const)

    # -- algebra -------------------------------------------------------------

    def __add__(self, other):
        return ScalarField(ex.add(self.expr, ScalarField.wrap(other).expr))

    __radd__ = __add__

    def __sub__(self, other):
        return ScalarField(ex.sub(self.expr, ScalarField.wrap(other).expr))

    def __rsub__(self, other):
        return ScalarField(ex.sub(ScalarField.wrap(other).expr, self.expr))

    def __mul__(self, other):
        return ScalarField(ex.mul(self.expr, ScalarField.wrap(other).expr))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ScalarField(ex.div(self.expr, ScalarField.wrap(other).expr))

    def __rtruediv__(self, other):
        return ScalarField(ex.div(ScalarField.wrap(other).expr, self.expr))

    def __pow__(self, other):
        return ScalarField(ex.powr(self.expr, ScalarField.wrap(other).expr))

    def __neg__(self):
        return ScalarField(ex.neg(self.expr))

    def __eq__(self, other):
        return isinstance(other, ScalarField) and self.expr == other.expr

    def __hash__(self):
        return hash(self.expr)

    def __repr__(self):
        return f"ScalarField({ex.to_source(self.expr)!r})"

    def to_source(self) -> str:
        """Canonical text form; parses back to an equivalent field."""
        return ex.to_source(self.expr)


ZERO_FIELD = ScalarField(ex.ZERO)
ONE_FIELD = ScalarField(ex.ONE)


class NumericField:
    """Opaque point -> real evaluator (e.g. the image of a flow transform).

    Deterministic for fixed integrator settings; carries an optional batch
    evaluator for probe matrices.
    """

    __slots__ = ("_fn", "_batch")

    def __init__(self, fn, batch=None):
        self._fn = fn
        self._batch = batch

    def eval(self, p) -> float:
        return float(self._fn(as_xs(p)))

    __call__ = eval

    def eval_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if self._batch is not None:
            return np.asarray(self._batch(X), dtype=np.float64)
        return np.array([self._fn(row) for row in X])


def as_evaluable(f):
    """Accept a ScalarField, NumericField, or plain number."""
    if isinstance(f, (ScalarField, NumericField)):
        return f
    return ScalarField.wrap(f)


# ---------------------------------------------------------------------------
# Module-level operations mirroring the public contract.

def parse_field(src: str) -> ScalarField:
    """Parse an expression over x0..x3 into a ScalarField.

    Raises parser.ParseError (with byte offset) on syntax errors or unknown
    identifiers.
    """
    return ScalarField(parser.parse(src))


def parse_curve_component(src: str) -> ScalarField:
    """Parse an expression in the single variable t (stored as coordinate 0)."""
    return ScalarField(parser.parse(src, parser.CURVE_VARS))


def eval_field(f: ScalarField, p) -> float:
    return f.eval(p)


def partial(f: ScalarField, alpha: int) -> ScalarField:
    """Exact partial derivative along coordinate alpha (0..3)."""
    return f.partial(alpha)


def field_combine(op: str, f: ScalarField, g) -> ScalarField:
    """Pointwise combination: op is '+', '*', or 'scale' (g a real factor)."""
    if op in ("+", "add"):
        return f + ScalarField.wrap(g)
    if op in ("*", "mul"):
        return f * ScalarField.wrap(g)
    if op == "scale":
        return ScalarField.constant(float(g)) * f if not isinstance(g, ScalarField) else g * f
    raise ValueError(f"unknown combination {op!r}")


def concat_tapes(fs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Concatenate the tapes of several fields for the multi-tape kernels."""
    codes = []
    args = []
    offsets = [0]
    for f in fs:
        c, a = f.tape
        codes.append(c)
        args.append(a)
        offsets.append(offsets[-1] + len(c))
    return (
        np.concatenate(codes) if codes else np.empty(0, dtype=np.int32),
        np.concatenate(args) if args else np.empty(0),
        np.array(offsets, dtype=np.int32),
    )
