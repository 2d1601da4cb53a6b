"""Five-vectors and five-vector fields as differential-algebraic operators.

A five-vector field acts on scalar fields as u^a d_a + u5 * 1; the fifth
basis direction is stored at slot 4 while printable index labels remain
{0, 1, 2, 3, 5}.  The canonical reference frame is the passive regular
coordinate frame {d_0..d_3, 1}; every other frame is a field-valued 5x5
transform from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import Constants
from .fields import (
    NumericField,
    Point,
    ScalarField,
    as_xs,
)

__all__ = [
    "INDEX_LABELS",
    "Frame",
    "FiveVector",
    "FiveVectorField",
    "FourVector",
    "FourVectorField",
    "ParametrizedCurve",
    "CommutationTable",
    "AxiomCheck",
    "CoordinateBasisCheck",
    "CurveMismatchError",
    "FrameError",
    "apply",
    "check_five_axioms",
    "from_curve",
    "curve_equivalence",
    "equivalence_class",
    "decompose",
    "change_basis",
    "symmetry_transform",
    "commutator",
    "four_bracket",
    "commutation_constants",
    "is_coordinate_basis",
    "canonical_frame",
    "active_frame",
    "passive_frame",
    "normalized_frame",
    "coordinate_frame",
    "five_field",
    "sym_inv",
    "MINKOWSKI_ETA",
]

INDEX_LABELS = (0, 1, 2, 3, 5)

MINKOWSKI_ETA = np.diag([1.0, -1.0, -1.0, -1.0])

_S0 = ScalarField.constant(0.0)
_S1 = ScalarField.constant(1.0)


class FrameError(ValueError):
    """Frame does not satisfy the constraints required by an operation."""


class CurveMismatchError(ValueError):
    """Curves do not pass through the stated anchor point."""


def _wrap_field(v) -> ScalarField:
    return ScalarField.wrap(v)


def _field_matrix(entries) -> tuple[tuple[ScalarField, ...], ...]:
    return tuple(tuple(_wrap_field(e) for e in row) for row in entries)


@dataclass(frozen=True)
class Frame:
    """Ordered basis of five five-vector fields.

    ``matrix[A][B]`` is the canonical component A of frame vector B, so the
    columns are the basis vectors expressed in {d_0..d_3, 1}.
    """

    matrix: tuple[tuple[ScalarField, ...], ...]
    flavor: str
    constants: Constants

    FLAVORS = (
        "standard",
        "regular-active",
        "regular-passive",
        "regular-normalized",
        "coordinate",
    )

    def __post_init__(self):
        if self.flavor not in self.FLAVORS:
            raise FrameError(f"unknown frame flavor {self.flavor!r}")
        if len(self.matrix) != 5 or any(len(r) != 5 for r in self.matrix):
            raise FrameError("frame matrix must be 5x5")

    # -- numeric access -------------------------------------------------------

    def matrix_at(self, p) -> np.ndarray:
        xs = as_xs(p)
        return np.array([[f.eval(xs) for f in row] for row in self.matrix])

    def inverse_at(self, p) -> np.ndarray:
        m = self.matrix_at(p)
        det = np.linalg.det(m)
        if abs(det) < 1e-12:
            raise FrameError(f"frame is singular at {tuple(as_xs(p))}")
        return np.linalg.inv(m)

    @property
    def is_identity(self) -> bool:
        return all(
            self.matrix[a][b] == (_S1 if a == b else _S0)
            for a in range(5)
            for b in range(5)
        )

    @property
    def is_regular(self) -> bool:
        return self.flavor in (
            "regular-active",
            "regular-passive",
            "regular-normalized",
        )

    @property
    def is_standard(self) -> bool:
        # every supported flavor keeps e5 in the algebraic subspace
        return all(self.matrix[a][4].is_zero for a in range(4))

    def vector_field(self, B: int) -> "FiveVectorField":
        """Frame vector B as a field in the canonical frame."""
        col = [self.matrix[a][B] for a in range(5)]
        return FiveVectorField(tuple(col[:4]), col[4], canonical_frame(self.constants))

    def e5_lambda_field(self) -> ScalarField:
        """The curve-parameter value carried by the fifth frame vector."""
        return self.matrix[4][4] / self.constants.fifth_coefficient

    def validate(self, probes) -> None:
        """Check flavor constraints and invertibility at the probe points."""
        pts = np.asarray(probes, dtype=np.float64)
        for a in range(4):
            if _max_abs(self.matrix[a][4], pts) > 1e-9:
                raise FrameError("standard frame requires L^alpha_5 = 0")
        if self.is_regular or self.flavor == "coordinate":
            for b in range(4):
                if _max_abs(self.matrix[4][b], pts) > 1e-9 and self.flavor != "coordinate":
                    raise FrameError("regular frame requires L^5_alpha = 0")
            c = self.constants
            expected = {
                "regular-active": c.varsigma,
                "regular-passive": 1.0,
                "regular-normalized": c.varsigma / c.root_xi,
                "coordinate": c.varsigma,
            }[self.flavor]
            if _max_abs(self.matrix[4][4] - expected, pts) > 1e-9:
                raise FrameError(f"{self.flavor} frame has wrong fifth vector")
        for p in pts:
            self.inverse_at(p)


def _max_abs(f: ScalarField, pts: np.ndarray) -> float:
    return float(np.abs(f.eval_many(pts)).max()) if len(pts) else 0.0


def canonical_frame(constants: Constants | None = None) -> Frame:
    """The passive regular coordinate frame {d_alpha, 1}."""
    c = constants or Constants()
    entries = [[1.0 if a == b else 0.0 for b in range(5)] for a in range(5)]
    return Frame(_field_matrix(entries), "regular-passive", c)


def active_frame(constants: Constants) -> Frame:
    entries = [[1.0 if a == b else 0.0 for b in range(5)] for a in range(5)]
    entries[4][4] = constants.varsigma
    return Frame(_field_matrix(entries), "regular-active", constants)


def passive_frame(constants: Constants) -> Frame:
    return Frame(canonical_frame(constants).matrix, "regular-passive", constants)


def normalized_frame(constants: Constants) -> Frame:
    entries = [[1.0 if a == b else 0.0 for b in range(5)] for a in range(5)]
    entries[4][4] = constants.varsigma / constants.root_xi
    return Frame(_field_matrix(entries), "regular-normalized", constants)


def coordinate_frame(constants: Constants | None = None) -> Frame:
    """e_alpha = d_alpha + x^alpha * varsigma * 1, e5 = varsigma * 1."""
    c = constants or Constants()
    entries: list[list] = [[1.0 if a == b else 0.0 for b in range(5)] for a in range(5)]
    for b in range(4):
        entries[4][b] = ScalarField.coordinate(b) * c.varsigma
    entries[4][4] = c.varsigma
    return Frame(_field_matrix(entries), "coordinate", c)


# ---------------------------------------------------------------------------
# Vectors.

@dataclass(frozen=True)
class FiveVector:
    """A five-vector at a point, with components in ``frame``."""

    components: tuple[float, ...]
    frame: Frame
    at: Point

    def __post_init__(self):
        if len(self.components) != 5:
            raise ValueError("five components required")
        object.__setattr__(
            self, "components", tuple(float(v) for v in self.components)
        )
        if not np.isfinite(self.components).all():
            raise ValueError("non-finite five-vector components")

    def canonical_components(self) -> np.ndarray:
        if self.frame.is_identity:
            return np.array(self.components)
        return self.frame.matrix_at(self.at) @ np.array(self.components)

    @property
    def lam(self) -> float:
        """Curve-parameter value carried by the vector."""
        return self.canonical_components()[4] / self.frame.constants.fifth_coefficient

    def in_frame(self, frame: Frame) -> "FiveVector":
        comps = frame.inverse_at(self.at) @ self.canonical_components()
        return FiveVector(tuple(comps), frame, self.at)

    def __add__(self, other: "FiveVector") -> "FiveVector":
        _check_same_context(self, other)
        return FiveVector(
            tuple(a + b for a, b in zip(self.components, other.components)),
            self.frame,
            self.at,
        )

    def __sub__(self, other: "FiveVector") -> "FiveVector":
        _check_same_context(self, other)
        return FiveVector(
            tuple(a - b for a, b in zip(self.components, other.components)),
            self.frame,
            self.at,
        )

    def __mul__(self, k: float) -> "FiveVector":
        return FiveVector(tuple(k * a for a in self.components), self.frame, self.at)

    __rmul__ = __mul__


def _check_same_context(u: FiveVector, v: FiveVector):
    if u.frame != v.frame or u.at != v.at:
        raise FrameError("five-vectors live in different frames or points")


@dataclass(frozen=True)
class FourVector:
    """Tangent four-vector; ``basis`` is a 4x4 matrix of fields whose columns
    express the associated basis in coordinate directions (None = identity)."""

    components: tuple[float, ...]
    at: Point
    basis: tuple[tuple[ScalarField, ...], ...] | None = None

    def __post_init__(self):
        if len(self.components) != 4:
            raise ValueError("four components required")
        object.__setattr__(
            self, "components", tuple(float(v) for v in self.components)
        )
        if not np.isfinite(self.components).all():
            raise ValueError("non-finite four-vector components")

    def canonical_components(self) -> np.ndarray:
        comps = np.array(self.components)
        if self.basis is None:
            return comps
        m = np.array([[f.eval(self.at) for f in row] for row in self.basis])
        return m @ comps

    def __add__(self, other: "FourVector") -> "FourVector":
        if self.basis != other.basis or self.at != other.at:
            raise FrameError("four-vectors live in different bases or points")
        return FourVector(
            tuple(a + b for a, b in zip(self.components, other.components)),
            self.at,
            self.basis,
        )

    def __mul__(self, k: float) -> "FourVector":
        return FourVector(tuple(k * a for a in self.components), self.at, self.basis)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# Fields.

@dataclass(frozen=True)
class FiveVectorField:
    """Field of operators u^alpha d_alpha + u5 * 1, components in ``frame``."""

    u4: tuple[ScalarField, ...]
    u5: ScalarField
    frame: Frame

    def __post_init__(self):
        object.__setattr__(self, "u4", tuple(_wrap_field(f) for f in self.u4))
        object.__setattr__(self, "u5", _wrap_field(self.u5))
        if len(self.u4) != 4:
            raise ValueError("four differential components required")

    def canonical(self) -> "FiveVectorField":
        if self.frame.is_identity:
            if self.frame.flavor == "regular-passive":
                return self
            return FiveVectorField(self.u4, self.u5, canonical_frame(self.frame.constants))
        comps = list(self.u4) + [self.u5]
        out = []
        for a in range(5):
            acc = _S0
            for b in range(5):
                acc = acc + self.frame.matrix[a][b] * comps[b]
            out.append(acc)
        return FiveVectorField(tuple(out[:4]), out[4], canonical_frame(self.frame.constants))

    def at(self, p) -> FiveVector:
        xs = as_xs(p)
        comps = [f.eval(xs) for f in self.u4] + [self.u5.eval(xs)]
        return FiveVector(tuple(comps), self.frame, Point.of(xs))

    @property
    def components(self) -> tuple[ScalarField, ...]:
        return self.u4 + (self.u5,)

    def lam_field(self) -> ScalarField:
        return self.canonical().u5 / self.frame.constants.fifth_coefficient

    @property
    def has_zero_four_part(self) -> bool:
        return all(f.is_zero for f in self.canonical().u4)

    def __add__(self, other: "FiveVectorField") -> "FiveVectorField":
        if self.frame != other.frame:
            raise FrameError("fields live in different frames")
        return FiveVectorField(
            tuple(a + b for a, b in zip(self.u4, other.u4)),
            self.u5 + other.u5,
            self.frame,
        )

    def __sub__(self, other: "FiveVectorField") -> "FiveVectorField":
        if self.frame != other.frame:
            raise FrameError("fields live in different frames")
        return FiveVectorField(
            tuple(a - b for a, b in zip(self.u4, other.u4)),
            self.u5 - other.u5,
            self.frame,
        )

    def scale(self, f) -> "FiveVectorField":
        g = _wrap_field(f)
        return FiveVectorField(
            tuple(g * a for a in self.u4), g * self.u5, self.frame
        )

    def apply(self, f) -> ScalarField:
        return apply(self, f)


def five_field(u0, u1, u2, u3, u5, frame: Frame | None = None) -> FiveVectorField:
    return FiveVectorField(
        (u0, u1, u2, u3), u5, frame or canonical_frame()
    )


@dataclass(frozen=True)
class FourVectorField:
    components: tuple[ScalarField, ...]
    basis: tuple[tuple[ScalarField, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "components", tuple(_wrap_field(f) for f in self.components)
        )
        if len(self.components) != 4:
            raise ValueError("four components required")

    def canonical(self) -> "FourVectorField":
        if self.basis is None:
            return self
        out = []
        for a in range(4):
            acc = _S0
            for b in range(4):
                acc = acc + self.basis[a][b] * self.components[b]
            out.append(acc)
        return FourVectorField(tuple(out))

    def at(self, p) -> FourVector:
        xs = as_xs(p)
        return FourVector(
            tuple(f.eval(xs) for f in self.components), Point.of(xs), self.basis
        )


# ---------------------------------------------------------------------------
# Curves.

@dataclass(frozen=True)
class ParametrizedCurve:
    """Path t -> x(t) given by four one-variable fields; the curve parameter
    at path(0) is ``lambda0`` and advances with t."""

    path: tuple[ScalarField, ...]
    lambda0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(_wrap_field(f) for f in self.path))
        if len(self.path) != 4:
            raise ValueError("a curve needs four coordinate functions")

    @classmethod
    def from_exprs(cls, sources, lambda0: float = 0.0) -> "ParametrizedCurve":
        from .fields import parse_curve_component

        return cls(tuple(parse_curve_component(s) for s in sources), lambda0)

    def point_at(self, t: float) -> Point:
        arg = np.array([t, 0.0, 0.0, 0.0])
        return Point.of([f.eval(arg) for f in self.path])

    def tangent_at(self, t: float) -> np.ndarray:
        arg = np.array([t, 0.0, 0.0, 0.0])
        return np.array([f.partial(0).eval(arg) for f in self.path])

    def velocity(self) -> tuple[ScalarField, ...]:
        return tuple(f.partial(0) for f in self.path)


# ---------------------------------------------------------------------------
# Operator action and the operator axioms.

def apply(u: FiveVectorField, f: ScalarField) -> ScalarField:
    """Return u^alpha d_alpha f + u5 f (components taken in the canonical
    frame, so the action is frame-invariant)."""
    uc = u.canonical()
    f = _wrap_field(f)
    acc = uc.u5 * f
    for alpha in range(4):
        acc = acc + uc.u4[alpha] * f.partial(alpha)
    return acc


@dataclass(frozen=True)
class AxiomCheck:
    passed: bool
    witness: str | None = None
    detail: str | None = None
    max_error: float = 0.0

    def __bool__(self):
        return self.passed


_CONSTANT_PROBES = (2.5, -3.0, 7.0)


def _as_operator(candidate):
    if isinstance(candidate, FiveVectorField):
        return lambda f: apply(candidate, f)
    if isinstance(candidate, tuple) and len(candidate) == 2:
        u4, u5 = candidate
        field = FiveVectorField(tuple(u4), u5, canonical_frame())
        return lambda f: apply(field, f)
    if callable(candidate):
        return candidate
    raise TypeError("candidate must be a field, (u4, u5) pair, or callable")


def _values(f, pts: np.ndarray) -> np.ndarray:
    if isinstance(f, (ScalarField, NumericField)):
        return f.eval_many(pts)
    return np.full(len(pts), float(f))


def check_five_axioms(candidate, probes, *, probe_points=None, tol: float = 1e-9) -> AxiomCheck:
    """Verify the three operator axioms on the probe fields.

    Checks additivity, the constancy rule u[k] = upsilon * k with
    upsilon = u[1], and the modified product rule
    u[fg] = u[f] g + f u[g] - u[1] f g.  Returns the first violated axiom
    as the witness; failure is a result, not an error.
    """
    if not probes:
        raise ValueError("probe fields must be non-empty")
    from .probes import probe_points as default_probes

    pts = default_probes() if probe_points is None else np.asarray(probe_points)
    op = _as_operator(candidate)
    probes = [_wrap_field(f) for f in probes]
    nonconst = [f for f in probes if not f.is_constant] or probes

    def fail(axiom, detail, err):
        return AxiomCheck(False, axiom, detail, float(err))

    # additivity on non-constant pairs
    for f, g in _pairs(nonconst):
        lhs = _values(op(f + g), pts)
        rhs = _values(op(f), pts) + _values(op(g), pts)
        err = np.abs(lhs - rhs).max()
        if err > tol:
            return fail("additivity", f"u[f+g] != u[f]+u[g] for f={f!r}, g={g!r}", err)

    # constancy: upsilon is characteristic of the operator
    upsilon = op(_S1)
    ups_vals = _values(upsilon, pts)
    for k in _CONSTANT_PROBES:
        lhs = _values(op(ScalarField.constant(k)), pts)
        err = np.abs(lhs - k * ups_vals).max()
        if err > tol:
            return fail("constancy", f"u[{k}] != {k} * u[1]", err)

    # modified product rule
    for f, g in _pairs(probes):
        lhs = _values(op(f * g), pts)
        rhs = (
            _values(op(f), pts) * _values(g, pts)
            + _values(f, pts) * _values(op(g), pts)
            - ups_vals * _values(f, pts) * _values(g, pts)
        )
        err = np.abs(lhs - rhs).max()
        if err > tol:
            return fail("product", f"modified Leibniz fails for f={f!r}, g={g!r}", err)

    return AxiomCheck(True)


def _pairs(fs):
    for i in range(len(fs)):
        for j in range(i, len(fs)):
            yield fs[i], fs[j]


# ---------------------------------------------------------------------------
# Curves to vectors and the equivalence relations.

def from_curve(c: ParametrizedCurve, t: float, constants: Constants | None = None) -> FiveVector:
    """Tangent five-vector of the curve at parameter t.

    Components are (dx/dt | lambda) with lambda = lambda0 + t; the frame is
    the active regular one, so the algebraic operator coefficient is b*lambda
    with b fixed by the mode carried in ``constants``.
    """
    c_ = constants or Constants()
    tangent = c.tangent_at(t)
    if not np.isfinite(tangent).all():
        raise ValueError(f"non-finite curve tangent at t={t}")
    lam = c.lambda0 + t
    frame = active_frame(c_) if c_.mode == "dimensional" else canonical_frame(c_)
    return FiveVector(tuple(tangent) + (lam,), frame, c.point_at(t))


def curve_equivalence(
    a: ParametrizedCurve,
    b: ParametrizedCurve,
    at,
    relation: int,
    tol: float = 1e-9,
) -> bool:
    """Test equivalence of two curves at their shared anchor (t = 0).

    relation 1: tangents proportional by a positive factor; relation 2:
    tangents equal; relation 3: tangents equal and parameter values agree.
    """
    anchor = as_xs(at)
    for c in (a, b):
        if np.abs(as_xs(c.point_at(0.0)) - anchor).max() > 1e-9:
            raise CurveMismatchError("curve does not pass through the anchor at t=0")
    ta, tb = a.tangent_at(0.0), b.tangent_at(0.0)
    scale = 1.0 + max(np.abs(ta).max(), np.abs(tb).max())
    if relation == 1:
        norm_b = float(tb @ tb)
        if norm_b == 0.0:
            return bool(np.abs(ta).max() <= tol * scale)
        factor = float(ta @ tb) / norm_b
        return factor > 0 and np.abs(ta - factor * tb).max() <= tol * scale
    if relation == 2:
        return bool(np.abs(ta - tb).max() <= tol * scale)
    if relation == 3:
        return (
            np.abs(ta - tb).max() <= tol * scale
            and abs(a.lambda0 - b.lambda0) <= tol
        )
    raise ValueError("relation must be 1, 2 or 3")


def equivalence_class(u):
    """Forget the parameter value: five-vectors map to four-vectors with the
    same differential components in the associated basis (e5 maps to zero)."""
    if isinstance(u, FiveVector):
        basis = _associated_basis(u.frame)
        return FourVector(u.components[:4], u.at, basis)
    if isinstance(u, FiveVectorField):
        basis = _associated_basis(u.frame)
        return FourVectorField(u.u4, basis)
    raise TypeError("expected a five-vector or five-vector field")


def _associated_basis(frame: Frame):
    if frame.is_identity or all(
        frame.matrix[a][b] == (_S1 if a == b else _S0)
        for a in range(4)
        for b in range(4)
    ):
        return None
    return tuple(tuple(frame.matrix[a][b] for b in range(4)) for a in range(4))


def decompose(u):
    """Split into the purely differential part (in Z) and the purely
    algebraic part (in E), both expressed in the canonical frame."""
    if isinstance(u, FiveVector):
        frame = canonical_frame(u.frame.constants)
        c = u.canonical_components()
        z = FiveVector((c[0], c[1], c[2], c[3], 0.0), frame, u.at)
        e = FiveVector((0.0, 0.0, 0.0, 0.0, c[4]), frame, u.at)
        return z, e
    if isinstance(u, FiveVectorField):
        uc = u.canonical()
        z = FiveVectorField(uc.u4, _S0, uc.frame)
        e = FiveVectorField((_S0, _S0, _S0, _S0), uc.u5, uc.frame)
        return z, e
    raise TypeError("expected a five-vector or five-vector field")


# ---------------------------------------------------------------------------
# Basis transforms.

def _as_matrix5(L) -> np.ndarray:
    m = np.asarray(L, dtype=np.float64)
    if m.shape != (5, 5):
        raise ValueError("transform must be 5x5")
    return m


def change_basis(u: FiveVector, L, *, standard: bool = False) -> FiveVector:
    """Express a vector given in the primed frame e'_A = e_B L^B_A back in
    its unprimed frame: components transform inversely to basis vectors.

    With ``standard=True`` the transform must keep the fifth basis vector in
    the algebraic subspace (L^alpha_5 = 0).
    """
    m = _as_matrix5(L)
    if abs(np.linalg.det(m)) < 1e-12:
        raise ValueError("singular basis transform")
    if standard and np.abs(m[:4, 4]).max() > 1e-12:
        raise FrameError("standard transform requires L^alpha_5 = 0")
    comps = m @ np.array(u.components)
    return FiveVector(tuple(comps), u.frame, u.at)


def symmetry_transform(Lam, tol: float = 1e-10) -> np.ndarray:
    """Embed a Lorentz matrix as the 5x5 block transform that fixes the
    algebraic direction: L^alpha_beta = Lam, L^5_5 = 1, mixed entries 0."""
    m = np.asarray(Lam, dtype=np.float64)
    if m.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    residual = np.abs(m.T @ MINKOWSKI_ETA @ m - MINKOWSKI_ETA).max()
    if residual > tol:
        raise ValueError(f"matrix is not in O(3,1) (residual {residual:.3e})")
    out = np.eye(5)
    out[:4, :4] = m
    return out


# ---------------------------------------------------------------------------
# Commutators.

def commutator(u: FiveVectorField, v: FiveVectorField) -> FiveVectorField:
    """[u, v] with components u^b d_b v^A - v^b d_b u^A in the canonical
    frame (the derivative along the algebraic direction vanishes)."""
    uc, vc = u.canonical(), v.canonical()
    out = []
    for A in range(5):
        va = vc.components[A]
        ua = uc.components[A]
        acc = _S0
        for beta in range(4):
            acc = acc + uc.u4[beta] * va.partial(beta) - vc.u4[beta] * ua.partial(beta)
        out.append(acc)
    return FiveVectorField(tuple(out[:4]), out[4], uc.frame)


def four_bracket(U: FourVectorField, V: FourVectorField) -> FourVectorField:
    Uc, Vc = U.canonical(), V.canonical()
    out = []
    for mu in range(4):
        acc = _S0
        for nu in range(4):
            acc = (
                acc
                + Uc.components[nu] * Vc.components[mu].partial(nu)
                - Vc.components[nu] * Uc.components[mu].partial(nu)
            )
        out.append(acc)
    return FourVectorField(tuple(out))


@dataclass(frozen=True)
class CommutationTable:
    """C[A][B][D] with [e_A, e_B] = C_AB^D e_D; antisymmetric in A, B."""

    C: tuple

    def field(self, A: int, B: int, D: int) -> ScalarField:
        return self.C[A][B][D]

    def at(self, p) -> np.ndarray:
        xs = as_xs(p)
        return np.array(
            [[[f.eval(xs) for f in row] for row in plane] for plane in self.C]
        )


def sym_inv(matrix: list[list[ScalarField]]) -> list[list[ScalarField]]:
    """Symbolic Gauss-Jordan inverse of a matrix of fields.

    Pivots prefer nonzero constants to keep the expression trees small; a
    column with no structurally nonzero candidate raises FrameError.
    """
    n = len(matrix)
    a = [[_wrap_field(matrix[i][j]) for j in range(n)] for i in range(n)]
    inv = [[_S1 if i == j else _S0 for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if a[r][col].is_constant and not a[r][col].is_zero:
                pivot = r
                break
        if pivot is None:
            for r in range(col, n):
                if not a[r][col].is_zero:
                    pivot = r
                    break
        if pivot is None:
            raise FrameError("matrix of fields is structurally singular")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        a[col] = [f / p for f in a[col]]
        inv[col] = [f / p for f in inv[col]]
        for r in range(n):
            if r == col or a[r][col].is_zero:
                continue
            factor = a[r][col]
            a[r] = [f - factor * g for f, g in zip(a[r], a[col])]
            inv[r] = [f - factor * g for f, g in zip(inv[r], inv[col])]
    return inv


def commutation_constants(frame: Frame) -> CommutationTable:
    """Commutation constants of the frame fields, solved symbolically
    against the frame matrix."""
    inv = sym_inv([list(row) for row in frame.matrix])
    vectors = [frame.vector_field(B) for B in range(5)]
    table = [[None] * 5 for _ in range(5)]
    for A in range(5):
        table[A][A] = tuple(_S0 for _ in range(5))
        for B in range(A + 1, 5):
            w = commutator(vectors[A], vectors[B])
            comps = list(w.u4) + [w.u5]
            cs = []
            for D in range(5):
                acc = _S0
                for E in range(5):
                    acc = acc + inv[D][E] * comps[E]
                cs.append(acc)
            table[A][B] = tuple(cs)
    full = [
        [
            table[A][B] if A <= B else tuple(-f for f in table[B][A])
            for B in range(5)
        ]
        for A in range(5)
    ]
    return CommutationTable(tuple(tuple(row) for row in full))


@dataclass(frozen=True)
class CoordinateBasisCheck:
    passed: bool
    witness: str | None = None
    max_error: float = 0.0

    def __bool__(self):
        return self.passed


def is_coordinate_basis(frame: Frame, probe_points=None, tol: float = 1e-9) -> CoordinateBasisCheck:
    """Check the two conditions for the frame vectors to be tangent to
    coordinate lines: vanishing brackets of the differential parts, and
    bracket [Z_alpha, E_beta] = delta * b * 1 with the algebraic parts."""
    from .probes import probe_points as default_probes

    if not frame.is_standard:
        raise FrameError("coordinate-basis test requires a standard frame")
    pts = default_probes() if probe_points is None else np.asarray(probe_points)
    b = frame.constants.fifth_coefficient
    z = [[frame.matrix[a][col] for a in range(4)] for col in range(4)]
    phi = [frame.matrix[4][col] for col in range(4)]

    worst = 0.0
    for al in range(4):
        for be in range(al + 1, 4):
            for gam in range(4):
                acc = _S0
                for mu in range(4):
                    acc = (
                        acc
                        + z[al][mu] * z[be][gam].partial(mu)
                        - z[be][mu] * z[al][gam].partial(mu)
                    )
                err = _max_abs(acc, pts)
                worst = max(worst, err)
                if err > tol:
                    return CoordinateBasisCheck(False, f"16a:({al},{be})", err)
    for al in range(4):
        for be in range(4):
            acc = _S0
            for mu in range(4):
                acc = acc + z[al][mu] * phi[be].partial(mu)
            expected = b if al == be else 0.0
            err = _max_abs(acc - expected, pts)
            worst = max(worst, err)
            if err > tol:
                return CoordinateBasisCheck(False, f"16b:({al},{be})", err)
    return CoordinateBasisCheck(True, None, worst)
