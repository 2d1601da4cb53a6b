"""Simple bivectors with algebraic directional vector, and the induced
isomorphism between four-vectors and five-vector bivectors.

Wedging with the unit algebraic vector n identifies the equivalence class
of a five-vector with a bivector; with h(n, n) = 1 the induced product
reproduces the four-vector metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    FiveVector,
    FiveVectorField,
    FourVectorField,
    Frame,
    FrameError,
    canonical_frame,
)
from .connection import Connection, covariant_derivative, covariant_derivative_fields
from .constants import Constants
from .fields import Point, ScalarField, as_xs
from .products import MetricField, g5, h

__all__ = [
    "SimpleBivector",
    "wedge",
    "bivector_inner",
    "n_vector",
    "unit_e_lambda",
    "associated_four_basis",
    "AssociatedFourBasis",
    "h_field",
    "g_field",
    "lambda_field",
    "nabla_h",
    "nabla_lambda",
]

_S0 = ScalarField.constant(0.0)


@dataclass(frozen=True)
class SimpleBivector:
    """u wedge e with e algebraic; the value only sees the class of u."""

    representative: FiveVector
    directional: FiveVector

    def matrix(self) -> np.ndarray:
        u = self.representative.canonical_components()
        e = self.directional.canonical_components()
        return np.outer(u, e) - np.outer(e, u)

    def __eq__(self, other):
        if not isinstance(other, SimpleBivector):
            return NotImplemented
        return (
            self.representative.at == other.representative.at
            and np.array_equal(self.matrix(), other.matrix())
        )

    def close_to(self, other: "SimpleBivector", tol: float = 1e-9) -> bool:
        return bool(np.abs(self.matrix() - other.matrix()).max() <= tol)

    @property
    def is_zero(self) -> bool:
        return bool(np.abs(self.matrix()).max() == 0.0)


def wedge(u: FiveVector, e: FiveVector) -> SimpleBivector:
    """u wedge e for a nonzero algebraic e; u and u + (algebraic) give the
    same bivector."""
    ec = e.canonical_components()
    if np.abs(ec[:4]).max() > 1e-12:
        raise ValueError("directional vector must be algebraic")
    if ec[4] == 0.0:
        raise ValueError("directional vector must be nonzero")
    return SimpleBivector(u, e)


def bivector_inner(
    a: SimpleBivector,
    b: SimpleBivector,
    m: MetricField,
    c: Constants,
    p,
) -> float:
    """Inner product induced by h on simple bivectors:
    h(u ^ e, v ^ e') = h(u, v) h(e, e') - h(u, e') h(v, e)."""
    u, e = a.representative, a.directional
    v, ep = b.representative, b.directional
    return (
        h(u, v, m, c, p) * h(e, ep, m, c, p)
        - h(u, ep, m, c, p) * h(v, e, m, c, p)
    )


def unit_e_lambda(c: Constants) -> float:
    """Parameter value of the unit algebraic vector n."""
    return 1.0 / c.root_xi


def n_vector(c: Constants, at, frame: Frame | None = None) -> FiveVector:
    """The distinguished algebraic vector with h(n, n) = sign(xi)."""
    frame = frame or canonical_frame(c)
    canon = np.zeros(5)
    canon[4] = c.fifth_coefficient / c.root_xi
    v = FiveVector(tuple(canon), canonical_frame(c), Point.of(as_xs(at)))
    return v if frame.is_identity else v.in_frame(frame)


# ---------------------------------------------------------------------------
# Field-level products (symbolic; used by the identity suites).

def lambda_field(v: FiveVectorField) -> ScalarField:
    return v.lam_field()


def g_field(u: FiveVectorField, v: FiveVectorField, m: MetricField) -> ScalarField:
    uc, vc = u.canonical(), v.canonical()
    acc = _S0
    for a in range(4):
        for b in range(4):
            acc = acc + m.field(a, b) * uc.u4[a] * vc.u4[b]
    return acc


def h_field(u: FiveVectorField, v: FiveVectorField, m: MetricField, c: Constants) -> ScalarField:
    return g_field(u, v, m) + ScalarField.constant(c.xi) * lambda_field(u) * lambda_field(v)


# ---------------------------------------------------------------------------
# Associated four-vector basis.

@dataclass(frozen=True)
class AssociatedFourBasis:
    """E_a = xi^(1/2) lambda_{e5} (class of e_a), plus derived component
    relations for the metric and connection."""

    vectors: tuple[FourVectorField, ...]
    scale: ScalarField
    derived_metric: tuple
    frame: Frame

    def derived_gamma(self, G: Connection):
        """Gamma^a_{b mu} = G^a_{b mu} + delta^a_b G^5_{5 mu}."""
        out = []
        for a in range(4):
            plane = []
            for b in range(4):
                row = []
                for mu in range(4):
                    f = G.G[a][b][mu]
                    if a == b:
                        f = f + G.G[4][4][mu]
                    row.append(f)
                plane.append(tuple(row))
            out.append(tuple(plane))
        return tuple(out)


def associated_four_basis(frame: Frame, c: Constants, m: MetricField) -> AssociatedFourBasis:
    """The kinematically associated four-basis of a standard frame.

    Requires xi > 0 (the bivector signature choice); the scale factor is
    xi^(1/2) lambda_{e5} and the derived metric components satisfy
    g_ab = h55 h_ab - h_a5 h_b5.
    """
    if c.xi <= 0:
        raise ValueError("associated basis requires xi > 0")
    if not frame.is_standard:
        raise FrameError("associated basis requires a standard frame")
    lam_e5 = frame.matrix[4][4] / c.fifth_coefficient
    scale = ScalarField.constant(c.xi**0.5) * lam_e5
    vectors = []
    for al in range(4):
        comps = tuple(scale * frame.matrix[a][al] for a in range(4))
        vectors.append(FourVectorField(comps))
    # frame components of h and the derived metric relation
    lam = [frame.matrix[4][B] / c.fifth_coefficient for B in range(5)]
    hmat = [[None] * 5 for _ in range(5)]
    for A in range(5):
        for B in range(5):
            acc = _S0
            for a in range(4):
                for b in range(4):
                    acc = acc + m.field(a, b) * frame.matrix[a][A] * frame.matrix[b][B]
            hmat[A][B] = acc + ScalarField.constant(c.xi) * lam[A] * lam[B]
    derived = tuple(
        tuple(
            hmat[4][4] * hmat[a][b] - hmat[a][4] * hmat[b][4]
            for b in range(4)
        )
        for a in range(4)
    )
    return AssociatedFourBasis(tuple(vectors), scale, derived, frame)


# ---------------------------------------------------------------------------
# First covariant derivative of h and of the parameter form.

def nabla_h(
    direction,
    v: FiveVectorField,
    w: FiveVectorField,
    G: Connection,
    m: MetricField,
    c: Constants,
) -> tuple[ScalarField, ScalarField]:
    """Both sides of {nabla_U h}(v, w) = xi g(U,V) lambda_w + xi g(U,W) lambda_v.

    The left side is computed as d_U[h(v,w)] - h(nabla_U v, w) - h(v, nabla_U w),
    the right side from the metric and the parameter fields; both are returned
    as scalar fields for independent evaluation.
    """
    dcomp = _direction_components(direction)
    hvw = h_field(v, w, m, c)
    lhs = _S0
    for mu in range(4):
        lhs = lhs + dcomp[mu] * hvw.partial(mu)
    nabla_v = _covariant_along(dcomp, v, G)
    nabla_w = _covariant_along(dcomp, w, G)
    lhs = lhs - h_field(nabla_v, w, m, c) - h_field(v, nabla_w, m, c)

    xi = ScalarField.constant(c.xi)
    gUV = _g_direction(dcomp, v, m)
    gUW = _g_direction(dcomp, w, m)
    rhs = xi * gUV * lambda_field(w) + xi * gUW * lambda_field(v)
    return lhs, rhs


def nabla_lambda(
    u,
    v: FiveVectorField,
    G: Connection,
    m: MetricField,
) -> tuple[ScalarField, ScalarField]:
    """Both sides of {nabla_u lambda}_v = g(u, v):
    d_u lambda_v - lambda_{nabla_u v} on the left, the degenerate product on
    the right."""
    dcomp = _direction_components(u)
    lam_v = lambda_field(v)
    lhs = _S0
    for mu in range(4):
        lhs = lhs + dcomp[mu] * lam_v.partial(mu)
    nabla_v = _covariant_along(dcomp, v, G)
    lhs = lhs - lambda_field(nabla_v)
    rhs = _g_direction(dcomp, v, m)
    return lhs, rhs


def _direction_components(direction) -> list[ScalarField]:
    """Differential components of a direction given as a five-vector(-field),
    four-vector(-field), or plain sequence."""
    if isinstance(direction, FiveVectorField):
        return list(direction.canonical().u4)
    if isinstance(direction, FiveVector):
        return [ScalarField.constant(x) for x in direction.canonical_components()[:4]]
    if isinstance(direction, FourVectorField):
        return list(direction.canonical().components)
    if hasattr(direction, "components"):
        return [ScalarField.constant(float(x)) for x in direction.components]
    return [ScalarField.wrap(x) for x in direction]


def _covariant_along(dcomp, v: FiveVectorField, G: Connection) -> FiveVectorField:
    nabla = covariant_derivative_fields(v, G)
    out = []
    for A in range(5):
        acc = _S0
        for mu in range(4):
            acc = acc + dcomp[mu] * nabla[A][mu]
        out.append(acc)
    return FiveVectorField(tuple(out[:4]), out[4], G.frame)


def _g_direction(dcomp, v: FiveVectorField, m: MetricField) -> ScalarField:
    vc = v.canonical()
    acc = _S0
    for a in range(4):
        for b in range(4):
            acc = acc + m.field(a, b) * dcomp[a] * vc.u4[b]
    return acc
