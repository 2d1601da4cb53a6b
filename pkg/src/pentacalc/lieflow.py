"""Integral curves, the finite transforms Phi_t and Psi_t, and Lie
derivatives along five-vector fields.

Phi_t pulls scalar functions back along the flow of the differential part;
Psi_t additionally multiplies by the exponential of the integrated fifth
component, so Psi_t{f} = Psi_t{1} * Phi_t{f}.  Lie derivatives are the
t-derivatives of these transforms at zero; tensors with lower indices carry
the (1+k) convention with the distinguished default k = -1.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .algebra import (
    FiveVectorField,
    Frame,
    FrameError,
    apply,
    canonical_frame,
    commutator,
)
from .constants import Constants
from .fields import NumericField, ScalarField, as_evaluable, as_xs, concat_tapes

__all__ = [
    "FlowSettings",
    "FlowError",
    "FiveTensorField",
    "RankZeroField",
    "flow_point",
    "flow_points",
    "phi_pull",
    "psi_transform",
    "psi_scale_factor",
    "lie_scalar",
    "lie_fivevector",
    "lie_tensor",
    "lie_rank_zero",
    "psi_tensor_values",
    "psi_vector_values",
    "tensor_from_fields",
]

STEP_ENV = "PENTACALC_STEPS"


class FlowError(RuntimeError):
    """Flow integration failed (left finite bounds, or the four-part of the
    generating field vanished mid-curve)."""


@dataclass(frozen=True)
class FlowSettings:
    """Fixed-step RK4 settings: ``step_count`` steps per unit parameter."""

    step_count: int = 1000

    def __post_init__(self):
        if self.step_count < 16:
            raise ValueError("step_count must be at least 16")

    @classmethod
    def default(cls) -> "FlowSettings":
        env = os.environ.get(STEP_ENV)
        return cls(int(env)) if env else cls()

    def nsteps(self, t: float) -> int:
        if t == 0.0:
            return 0
        return max(16, int(math.ceil(abs(t) * self.step_count)))


def _flow_tapes(u: FiveVectorField):
    uc = u.canonical()
    return concat_tapes(list(uc.u4) + [uc.u5])


def _raise_flow_error(status: np.ndarray):
    if (status == _kernel.STALLED).any():
        raise FlowError("four-part of the field vanished along the trajectory")
    if (status != _kernel.OK).any():
        raise FlowError("trajectory left finite bounds")


def flow_points(u: FiveVectorField, X: np.ndarray, t: float, s: FlowSettings):
    """Flow a batch of points a parametric distance t; returns (X_t, I_t)
    where I_t is the integral of the fifth component along each trajectory."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if u.has_zero_four_part:
        uc = u.canonical()
        return X.copy(), t * uc.u5.eval_many(X)
    codes, args, offs = _flow_tapes(u)
    out, I, status = _kernel.flow_rk4(codes, args, offs, X, t, s.nsteps(t))
    _raise_flow_error(status)
    return out, I


def flow_point(u: FiveVectorField, p, t: float, s: FlowSettings | None = None):
    """Point a parametric distance t along the integral curve through p."""
    from .fields import Point

    s = s or FlowSettings.default()
    X, _ = flow_points(u, as_xs(p)[None, :], t, s)
    return Point.of(X[0])


def phi_pull(f, u: FiveVectorField, t: float, s: FlowSettings | None = None) -> NumericField:
    """Finite pullback: the returned field evaluates to f at the flow
    preimage, so (phi_pull f)(flow_point(p, t)) == f(p)."""
    s = s or FlowSettings.default()
    f = as_evaluable(f)

    def batch(X):
        Y, _ = flow_points(u, X, -t, s)
        return f.eval_many(Y)

    return NumericField(lambda xs: batch(xs[None, :])[0], batch)


def psi_transform(f, u: FiveVectorField, t: float, s: FlowSettings | None = None) -> NumericField:
    """Finite transform with the exponential factor of the integrated fifth
    component; reduces to phi_pull when the fifth component vanishes and to
    exp(-t u5) * f for purely algebraic fields."""
    s = s or FlowSettings.default()
    f = as_evaluable(f)

    def batch(X):
        Y, I = flow_points(u, X, -t, s)
        return np.exp(I) * f.eval_many(Y)

    return NumericField(lambda xs: batch(xs[None, :])[0], batch)


def psi_scale_factor(u: FiveVectorField, t: float, s: FlowSettings | None = None) -> NumericField:
    """Psi_t applied to the constant unity function."""
    return psi_transform(ScalarField.constant(1.0), u, t, s)


# ---------------------------------------------------------------------------
# Lie derivatives.

def lie_scalar(u: FiveVectorField, f: ScalarField) -> ScalarField:
    """Lie derivative of a scalar function: the operator action u[f]."""
    return apply(u, f)


def lie_fivevector(u: FiveVectorField, v: FiveVectorField) -> FiveVectorField:
    """Lie derivative of a five-vector field: the commutator [u, v]."""
    return commutator(u, v)


@dataclass(frozen=True)
class RankZeroField:
    """A five-tensor field of rank zero.

    Distinct from a scalar function: rank-zero tensors transform by plain
    composition with the flow, so their Lie derivative has no algebraic
    term.
    """

    f: ScalarField

    def __post_init__(self):
        object.__setattr__(self, "f", ScalarField.wrap(self.f))


def lie_rank_zero(u: FiveVectorField, f: RankZeroField) -> RankZeroField:
    uc = u.canonical()
    acc = ScalarField.constant(0.0)
    for alpha in range(4):
        acc = acc + uc.u4[alpha] * f.f.partial(alpha)
    return RankZeroField(acc)


@dataclass(frozen=True)
class FiveTensorField:
    """Rank (m, n) five-tensor field; components stored flat in C order over
    index tuples drawn from the five basis directions."""

    m: int
    n: int
    components: tuple[ScalarField, ...]
    frame: Frame

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("tensor rank must be non-negative")
        expected = 5 ** (self.m + self.n)
        object.__setattr__(
            self,
            "components",
            tuple(ScalarField.wrap(f) for f in self.components),
        )
        if len(self.components) != expected:
            raise ValueError(f"expected {expected} components")

    @property
    def rank(self) -> tuple[int, int]:
        return (self.m, self.n)

    def component(self, idx: tuple[int, ...]) -> ScalarField:
        return self.components[_flat_index(idx)]

    def values_at(self, p) -> np.ndarray:
        xs = as_xs(p)
        vals = np.array([f.eval(xs) for f in self.components])
        return vals.reshape((5,) * (self.m + self.n)) if self.m + self.n else vals[0]


def _flat_index(idx: tuple[int, ...]) -> int:
    flat = 0
    for i in idx:
        flat = 5 * flat + i
    return flat


def tensor_from_fields(m: int, n: int, entries, frame: Frame | None = None) -> FiveTensorField:
    """Build a tensor from a nested sequence (or flat list) of fields."""
    frame = frame or canonical_frame()
    arr = np.asarray(entries, dtype=object).reshape(-1)
    return FiveTensorField(m, n, tuple(arr), frame)


def _require_regular_coordinate(frame: Frame):
    ok = frame.is_identity or (
        frame.is_regular
        and all(
            frame.matrix[a][b] == (ScalarField.constant(1.0) if a == b else ScalarField.constant(0.0))
            for a in range(4)
            for b in range(4)
        )
        and all(frame.matrix[4][b].is_zero for b in range(4))
        and frame.matrix[4][4].is_constant
    )
    if not ok:
        raise FrameError("operation requires a regular coordinate frame")


def lie_tensor(u: FiveVectorField, T: FiveTensorField, c: Constants | None = None) -> FiveTensorField:
    """Lie derivative of an arbitrary five-tensor field.

    Components: the transport term u^H d_H T, the n (1+k) u5 T term, minus
    one derivative contraction per upper index, plus one per lower index.
    With the default k = -1 the u5 term drops and the result depends only on
    derivatives of u5.
    """
    c = c or u.frame.constants
    _require_regular_coordinate(T.frame)
    uc = u.canonical()
    if not T.frame.is_identity:
        # regular coordinate frames differ from the canonical one only by a
        # constant rescale of the fifth direction; components of u transform
        # accordingly while d_5 = 0 keeps the formula shape intact.
        scale = T.frame.matrix[4][4]
        u_comps = list(uc.u4) + [uc.u5 / scale]
    else:
        u_comps = list(uc.u4) + [uc.u5]
    m, n, rank = T.m, T.n, T.m + T.n
    coef = n * (1.0 + c.k)
    out = []
    for idx in itertools.product(range(5), repeat=rank):
        acc = ScalarField.constant(0.0)
        Tidx = T.component(idx)
        for alpha in range(4):
            acc = acc + u_comps[alpha] * Tidx.partial(alpha)
        if coef:
            acc = acc + ScalarField.constant(coef) * u_comps[4] * Tidx
        for i in range(m):
            for H in range(4):  # the derivative along the fifth direction vanishes
                swapped = idx[:i] + (H,) + idx[i + 1 :]
                acc = acc - T.component(swapped) * u_comps[idx[i]].partial(H)
        for j in range(n):
            slot = m + j
            B = idx[slot]
            if B == 4:
                continue
            for H in range(5):
                swapped = idx[:slot] + (H,) + idx[slot + 1 :]
                acc = acc + T.component(swapped) * u_comps[H].partial(B)
        out.append(acc)
    return FiveTensorField(m, n, tuple(out), T.frame)


# ---------------------------------------------------------------------------
# Finite transport of tensor components along the flow.  This is the
# independent realization used by the finite-difference oracles: ordinary
# pushforward for the differential block, with the gradient of
# ln Psi_t{1} mixing the fifth row, all Jacobians taken by central
# differences of the flow map.

def _flow_map_batch(u: FiveVectorField, X: np.ndarray, t: float, s: FlowSettings):
    Y, I = flow_points(u, X, t, s)
    return Y, I


def _jacobian_and_grad(u: FiveVectorField, q: np.ndarray, t: float, s: FlowSettings, step: float):
    """(D phi_t)(phi_{-t} q) and grad_q ln Psi_t{1}(q) by central differences."""
    # base backward flow
    Yq, Iq = _flow_map_batch(u, q[None, :], -t, s)
    p = Yq[0]
    # forward Jacobian at p
    offsets = np.zeros((8, 4))
    for a in range(4):
        offsets[2 * a, a] = step
        offsets[2 * a + 1, a] = -step
    Yf, _ = _flow_map_batch(u, p[None, :] + offsets, t, s)
    B = np.empty((4, 4))
    for a in range(4):
        B[:, a] = (Yf[2 * a] - Yf[2 * a + 1]) / (2.0 * step)
    # gradient over q of the accumulated fifth integral (ln Psi_t{1}(q) = I(-t))
    _, Ib = _flow_map_batch(u, q[None, :] + offsets, -t, s)
    grad = np.empty(4)
    for a in range(4):
        grad[a] = (Ib[2 * a] - Ib[2 * a + 1]) / (2.0 * step)
    return p, B, grad


def _transport_matrix(u: FiveVectorField, q, t: float, s: FlowSettings, step: float):
    q = as_xs(q)
    p, B, grad = _jacobian_and_grad(u, q, t, s, step)
    M = np.zeros((5, 5))
    M[:4, :4] = B
    M[4, :4] = -grad @ B
    M[4, 4] = 1.0
    return p, M


def psi_vector_values(u: FiveVectorField, v: FiveVectorField, t: float, s: FlowSettings, q, step: float = 1e-5):
    """Components of the finite Psi_t image of v at the point q."""
    p, M = _transport_matrix(u, q, t, s, step)
    vc = v.canonical()
    comps = np.array([f.eval(p) for f in vc.components])
    return M @ comps


def psi_tensor_values(u: FiveVectorField, T, t: float, s: FlowSettings, q, step: float = 1e-5):
    """Values of the finite Psi_t image of a tensor (or rank-zero field) at q.

    Upper indices transport by the matrix M, lower ones by its inverse, so
    every full contraction transports as a rank-zero field.
    """
    if isinstance(T, RankZeroField):
        Y, _ = flow_points(u, as_xs(q)[None, :], -t, s)
        return T.f.eval(Y[0])
    p, M = _transport_matrix(u, q, t, s, step)
    N = np.linalg.inv(M)
    vals = T.values_at(p)
    rank = T.m + T.n
    if rank == 0:
        return float(vals)
    # contract slot by slot
    out = vals
    for slot in range(T.m):
        out = np.tensordot(M, out, axes=(1, slot))
        out = np.moveaxis(out, 0, slot)
    for j in range(T.n):
        slot = T.m + j
        out = np.tensordot(N.T, out, axes=(1, slot))
        out = np.moveaxis(out, 0, slot)
    return out
