"""The five-vector connection: coefficients, covariant derivatives, and
parallel transport.

The four-vector block is the Levi-Civita connection of the metric; the
fifth row obeys G^5_{alpha mu} = -varsigma g_{alpha mu} (with the flavor
scaling of the regular frame), G^5_{5 mu} = 0, G^alpha_{5 mu} = 0, and
differentiation along the algebraic direction vanishes (G^A_{B 5} = 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernel
from .algebra import (
    FiveVector,
    FiveVectorField,
    FourVector,
    Frame,
    FrameError,
    ParametrizedCurve,
    canonical_frame,
    sym_inv,
)
from .constants import Constants
from .fields import Point, ScalarField, as_xs, concat_tapes
from .lieflow import FlowError, FlowSettings
from .products import MetricField

__all__ = [
    "Connection",
    "christoffel",
    "christoffel_fields",
    "build_connection",
    "transform_connection",
    "covariant_derivative",
    "covariant_derivative_fields",
    "transport",
    "transport_four",
    "transport_form_components",
]

_S0 = ScalarField.constant(0.0)
_S1 = ScalarField.constant(1.0)

_christoffel_cache: dict[MetricField, tuple] = {}


def christoffel_fields(m: MetricField):
    """Symbolic Levi-Civita coefficients Gamma^a_{b mu} of the metric."""
    cached = _christoffel_cache.get(m)
    if cached is not None:
        return cached
    inv = m.inverse_fields()
    dg = [[[m.field(a, b).partial(mu) for mu in range(4)] for b in range(4)] for a in range(4)]
    out = []
    for a in range(4):
        plane = []
        for b in range(4):
            row = []
            for mu in range(4):
                acc = _S0
                for nu in range(4):
                    acc = acc + inv[a][nu] * (
                        dg[nu][mu][b] + dg[nu][b][mu] - dg[b][mu][nu]
                    )
                row.append(ScalarField.constant(0.5) * acc)
            plane.append(tuple(row))
        out.append(tuple(plane))
    result = tuple(out)
    _christoffel_cache[m] = result
    return result


def christoffel(m: MetricField, p) -> np.ndarray:
    """Numeric Gamma^a_{b mu}(p), assembled from exact metric derivatives
    and the numeric inverse metric (independent of the symbolic path)."""
    xs = as_xs(p)
    ginv = m.inverse_at(xs)
    dg = np.empty((4, 4, 4))
    for a in range(4):
        for b in range(4):
            f = m.field(a, b)
            for mu in range(4):
                dg[a][b][mu] = f.partial(mu).eval(xs)
    gamma = np.empty((4, 4, 4))
    for a in range(4):
        for b in range(4):
            for mu in range(4):
                acc = 0.0
                for nu in range(4):
                    acc += ginv[a, nu] * (dg[nu, mu, b] + dg[nu, b, mu] - dg[b, mu, nu])
                gamma[a, b, mu] = 0.5 * acc
    return gamma


@dataclass(frozen=True)
class Connection:
    """Coefficients G[A][B][C] (C the differentiation index) in ``frame``."""

    G: tuple
    frame: Frame
    constants: Constants
    metric: MetricField

    def field(self, A: int, B: int, C: int) -> ScalarField:
        return self.G[A][B][C]

    def at(self, p) -> np.ndarray:
        xs = as_xs(p)
        return np.array(
            [[[f.eval(xs) for f in row] for row in plane] for plane in self.G]
        )


_FIFTH_ROW_SCALE = {
    "regular-active": lambda c: 1.0,
    "regular-passive": lambda c: c.varsigma,
    "regular-normalized": lambda c: c.root_xi,
}


def build_connection(m: MetricField, c: Constants, frame: Frame) -> Connection:
    """Connection coefficients in a regular frame.

    The four-block is Levi-Civita; the fifth row follows the flavor table
    (active: -g, passive: -varsigma g, normalized: -|xi|^(1/2) g); every
    coefficient with a fifth differentiation or middle index vanishes.
    """
    if frame.flavor not in _FIFTH_ROW_SCALE:
        raise FrameError(f"unsupported frame flavor {frame.flavor!r} (transform from a regular frame instead)")
    gamma = christoffel_fields(m)
    scale = _FIFTH_ROW_SCALE[frame.flavor](c)
    G = [[[_S0 for _ in range(5)] for _ in range(5)] for _ in range(5)]
    for a in range(4):
        for b in range(4):
            for mu in range(4):
                G[a][b][mu] = gamma[a][b][mu]
    for al in range(4):
        for mu in range(4):
            G[4][al][mu] = ScalarField.constant(-scale) * m.field(al, mu)
    return Connection(
        tuple(tuple(tuple(r) for r in plane) for plane in G), frame, c, m
    )


def transform_connection(G: Connection, L, target_frame: Frame | None = None) -> Connection:
    """Connection coefficients after the basis change e'_A = e_B L^B_A.

    The inhomogeneous term differentiates L along the old frame directions;
    standard-to-standard transforms keep the fifth differentiation index
    trivial.
    """
    Lf = [[ScalarField.wrap(e) for e in row] for row in np.asarray(L, dtype=object)]
    if len(Lf) != 5 or any(len(r) != 5 for r in Lf):
        raise ValueError("transform must be 5x5")
    Linv = sym_inv(Lf)
    old = G.G
    # differential parts of the old frame vectors, for the directional derivative
    zcomp = [[G.frame.matrix[nu][F] for nu in range(4)] for F in range(5)]
    out = [[[_S0 for _ in range(5)] for _ in range(5)] for _ in range(5)]
    for A in range(5):
        for B in range(5):
            for C in range(5):
                acc = _S0
                for D in range(5):
                    inner = _S0
                    for E in range(5):
                        for F in range(5):
                            gdef = old[D][E][F]
                            if gdef.is_zero:
                                continue
                            inner = inner + gdef * Lf[E][B] * Lf[F][C]
                    # inhomogeneous term: derivative of L^D_B along e_F
                    for F in range(5):
                        if Lf[F][C].is_zero:
                            continue
                        dL = _S0
                        for nu in range(4):
                            if zcomp[F][nu].is_zero:
                                continue
                            dL = dL + zcomp[F][nu] * Lf[D][B].partial(nu)
                        inner = inner + dL * Lf[F][C]
                    acc = acc + Linv[A][D] * inner
                out[A][B][C] = acc
    frame = target_frame
    if frame is None:
        matrix = []
        for a in range(5):
            row = []
            for b in range(5):
                acc = _S0
                for d in range(5):
                    acc = acc + G.frame.matrix[a][d] * Lf[d][b]
                row.append(acc)
            matrix.append(tuple(row))
        frame = Frame(tuple(matrix), "standard", G.constants)
    return Connection(
        tuple(tuple(tuple(r) for r in plane) for plane in out),
        frame,
        G.constants,
        G.metric,
    )


# ---------------------------------------------------------------------------
# Covariant differentiation.

def covariant_derivative_fields(v: FiveVectorField, G: Connection):
    """The 5x4 table of fields (nabla_mu v)^A = d_mu v^A + G^A_{B mu} v^B.

    Components of v are taken in the connection's frame; differentiation
    along the fifth direction vanishes identically.
    """
    comps = _components_in_connection_frame(v, G)
    out = []
    for A in range(5):
        row = []
        for mu in range(4):
            acc = comps[A].partial(mu)
            for B in range(5):
                gab = G.G[A][B][mu]
                if gab.is_zero:
                    continue
                acc = acc + gab * comps[B]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _components_in_connection_frame(v: FiveVectorField, G: Connection):
    if v.frame == G.frame:
        return list(v.components)
    vc = v.canonical()
    if G.frame.is_identity:
        return list(vc.components)
    inv = sym_inv([list(row) for row in G.frame.matrix])
    return [
        sum(
            (inv[A][B] * vc.components[B] for B in range(5)),
            start=_S0,
        )
        for A in range(5)
    ]


def covariant_derivative(direction, v: FiveVectorField, G: Connection) -> FiveVectorField:
    """nabla along a direction vector; only its differential components
    enter, so the derivative along any algebraic vector is zero."""
    nabla = covariant_derivative_fields(v, G)
    if isinstance(direction, FiveVector):
        dcomp = direction.in_frame(G.frame).components[:4]
    elif isinstance(direction, FourVector):
        dcomp = direction.components
    else:
        dcomp = tuple(direction)[:4]
    out = []
    for A in range(5):
        acc = _S0
        for mu in range(4):
            acc = acc + ScalarField.wrap(float(dcomp[mu])) * nabla[A][mu]
        out.append(acc)
    return FiveVectorField(tuple(out[:4]), out[4], G.frame)


# ---------------------------------------------------------------------------
# Parallel transport.

def _tangent_fields_in_frame(curve: ParametrizedCurve, frame: Frame):
    """Curve tangent components along the frame's differential directions,
    as one-variable fields of the curve parameter."""
    vel = curve.velocity()
    # standard frames keep (L^-1)^mu_5 = 0, so only the differential block
    # enters; when that block is the identity the tangent passes through
    if all(
        frame.matrix[a][b] == (_S1 if a == b else _S0)
        for a in range(4)
        for b in range(4)
    ):
        return list(vel)
    inv = sym_inv([list(row) for row in frame.matrix])
    out = []
    for mu in range(4):
        acc = _S0
        for nu in range(4):
            entry = inv[mu][nu]
            if entry.is_zero:
                continue
            acc = acc + entry.compose(curve.path) * vel[nu]
        out.append(acc)
    return out


def _transport_matrix_fields(G: Connection, curve: ParametrizedCurve, sign: float, transpose: bool):
    """Matrix fields A[A][B](t) for the linear transport equation along the
    curve: dv/dt = -G v xdot (vectors) or dw/dt = +G^T w xdot (forms)."""
    tang = _tangent_fields_in_frame(curve, G.frame)
    mats = []
    for A in range(5):
        row = []
        for B in range(5):
            acc = _S0
            for mu in range(4):
                gf = G.G[B][A][mu] if transpose else G.G[A][B][mu]
                if gf.is_zero:
                    continue
                acc = acc + gf.compose(curve.path) * tang[mu]
            row.append(ScalarField.constant(sign) * acc)
        mats.append(row)
    return [f for row in mats for f in row]


def _run_linear(mat_fields, V0: np.ndarray, t0: float, t1: float, s: FlowSettings):
    codes, args, offs = concat_tapes(mat_fields)
    V, status = _kernel.linear_rk4(codes, args, offs, V0, t0, t1, s.nsteps(t1 - t0))
    if (status != _kernel.OK).any():
        raise FlowError("transport integration left finite bounds")
    return V


def transport(
    v0: FiveVector,
    curve: ParametrizedCurve,
    t0: float,
    t1: float,
    G: Connection,
    s: FlowSettings | None = None,
) -> FiveVector:
    """Parallel transport along the curve segment; linear in v0."""
    s = s or FlowSettings.default()
    start = curve.point_at(t0)
    if np.abs(as_xs(start) - as_xs(v0.at)).max() > 1e-9:
        raise ValueError("vector is not attached to the curve at t0")
    comps = np.array(v0.in_frame(G.frame).components)[None, :]
    mats = _transport_matrix_fields(G, curve, -1.0, transpose=False)
    V = _run_linear(mats, comps, t0, t1, s)
    return FiveVector(tuple(V[0]), G.frame, curve.point_at(t1))


def transport_form_components(
    w0,
    curve: ParametrizedCurve,
    t0: float,
    t1: float,
    G: Connection,
    s: FlowSettings | None = None,
) -> np.ndarray:
    """Transport covariant components (conserving every contraction)."""
    s = s or FlowSettings.default()
    comps = np.asarray(w0, dtype=np.float64)[None, :]
    mats = _transport_matrix_fields(G, curve, 1.0, transpose=True)
    return _run_linear(mats, comps, t0, t1, s)[0]


def transport_four(
    U0: FourVector,
    curve: ParametrizedCurve,
    t0: float,
    t1: float,
    m: MetricField,
    s: FlowSettings | None = None,
) -> FourVector:
    """Levi-Civita transport of a four-vector (independent code path used to
    check the class-map equivariance of five-vector transport)."""
    s = s or FlowSettings.default()
    gamma = christoffel_fields(m)
    vel = curve.velocity()
    mats = []
    for a in range(4):
        for b in range(4):
            acc = _S0
            for mu in range(4):
                gf = gamma[a][b][mu]
                if gf.is_zero:
                    continue
                acc = acc + gf.compose(curve.path) * vel[mu]
            mats.append(ScalarField.constant(-1.0) * acc)
    comps = np.array(U0.components, dtype=np.float64)[None, :]
    V = _run_linear(mats, comps, t0, t1, s)
    return FourVector(tuple(V[0]), curve.point_at(t1))
