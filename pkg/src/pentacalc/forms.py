"""Five-vector 1-forms and p-forms: dual bases, the two index-lowering maps,
transport, and the distinguished parameter forms.

Components are covariant in the dual of a standard frame.  In regular
frames the split between forms annihilating the algebraic direction and
forms annihilating the differential subspace is the plain index split
{0..3} versus {5}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (
    FiveVector,
    FiveVectorField,
    Frame,
    FrameError,
    ParametrizedCurve,
    canonical_frame,
)
from .connection import Connection, transport_form_components
from .constants import Constants
from .fields import Point, ScalarField, as_xs
from .lieflow import FlowSettings
from .products import MetricField

__all__ = [
    "FiveForm",
    "FiveFormField",
    "PFormField",
    "contract",
    "contract_value",
    "decompose_form",
    "theta_g",
    "theta_h",
    "theta_g_field",
    "theta_h_field",
    "h_frame_matrix",
    "raise_with_g",
    "transport_form",
    "x_form",
    "j_form",
    "wedge_forms",
    "form_change_basis",
]

_S0 = ScalarField.constant(0.0)


@dataclass(frozen=True)
class FiveFormField:
    """Linear form field with components w_A in the dual of ``frame``."""

    components: tuple[ScalarField, ...]
    frame: Frame

    def __post_init__(self):
        object.__setattr__(
            self, "components", tuple(ScalarField.wrap(f) for f in self.components)
        )
        if len(self.components) != 5:
            raise ValueError("five components required")

    def at(self, p) -> "FiveForm":
        xs = as_xs(p)
        return FiveForm(
            tuple(f.eval(xs) for f in self.components), self.frame, Point.of(xs)
        )


@dataclass(frozen=True)
class FiveForm:
    """A linear form at a point (dual components in ``frame``)."""

    components: tuple[float, ...]
    frame: Frame
    at: Point

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(float(v) for v in self.components))
        if len(self.components) != 5:
            raise ValueError("five components required")


def contract(w: FiveFormField, v: FiveVectorField) -> ScalarField:
    """w_A v^A; the fields must share a frame."""
    if w.frame != v.frame:
        raise FrameError("form and vector live in different frames")
    acc = _S0
    for A in range(5):
        acc = acc + w.components[A] * v.components[A]
    return acc


def contract_value(w: FiveForm, v: FiveVector) -> float:
    if w.frame != v.frame:
        v = v.in_frame(w.frame)
    return float(np.dot(w.components, v.components))


def _require_regular(frame: Frame):
    if not frame.is_regular:
        raise FrameError("operation requires a regular frame")


def decompose_form(w):
    """Split into the part annihilating the algebraic subspace and the part
    annihilating the differential one (regular frames: index split)."""
    if isinstance(w, (FiveForm, FiveFormField)):
        _require_regular(w.frame)
        comps = w.components
        if isinstance(w, FiveForm):
            z = FiveForm(comps[:4] + (0.0,), w.frame, w.at)
            e = FiveForm((0.0,) * 4 + (comps[4],), w.frame, w.at)
        else:
            z = FiveFormField(comps[:4] + (_S0,), w.frame)
            e = FiveFormField((_S0,) * 4 + (comps[4],), w.frame)
        return z, e
    if isinstance(w, PFormField):
        _require_regular(w.frame)
        zdata = {}
        edata = {}
        for idx, f in w.data:
            (edata if 4 in idx else zdata)[idx] = f
        return (
            PFormField.from_dict(w.degree, zdata, w.frame),
            PFormField.from_dict(w.degree, edata, w.frame),
        )
    raise TypeError("expected a form or p-form")


# ---------------------------------------------------------------------------
# Index lowering and raising.

def _frame_metric_block(frame: Frame, m: MetricField):
    """Metric components in the frame's associated four-basis (regular
    frames built on the coordinate basis keep the canonical components)."""
    out = []
    for a in range(4):
        row = []
        for b in range(4):
            acc = _S0
            for mu in range(4):
                for nu in range(4):
                    acc = acc + m.field(mu, nu) * frame.matrix[mu][a] * frame.matrix[nu][b]
            row.append(acc)
        out.append(row)
    return out


def theta_g_field(u: FiveVectorField, m: MetricField) -> FiveFormField:
    """Lower with the degenerate product: components g_AB u^B, fifth row and
    column zero.  Not injective: algebraic vectors map to the zero form."""
    _require_regular(u.frame)
    gm = _frame_metric_block(u.frame, m)
    comps = []
    for a in range(4):
        acc = _S0
        for b in range(4):
            acc = acc + gm[a][b] * u.u4[b]
        comps.append(acc)
    comps.append(_S0)
    return FiveFormField(tuple(comps), u.frame)


def theta_g(u: FiveVector, m: MetricField) -> FiveForm:
    _require_regular(u.frame)
    gm = _eval_block(_frame_metric_block(u.frame, m), u.at)
    comps = list(gm @ np.array(u.components[:4])) + [0.0]
    return FiveForm(tuple(comps), u.frame, u.at)


def h_frame_matrix(frame: Frame, m: MetricField, c: Constants):
    """h_AB in a regular frame: the metric block plus xi lambda_e5^2 at the
    fifth diagonal slot."""
    _require_regular(frame)
    block = _frame_metric_block(frame, m)
    lam_e5 = frame.matrix[4][4] / c.fifth_coefficient
    h55 = ScalarField.constant(c.xi) * lam_e5 * lam_e5
    rows = []
    for a in range(4):
        rows.append(tuple(block[a]) + (_S0,))
    rows.append((_S0,) * 4 + (h55,))
    return tuple(rows)


def theta_h_field(u: FiveVectorField, m: MetricField, c: Constants) -> FiveFormField:
    """Lower with the nondegenerate product; a bijection mapping the
    differential subspace onto its annihilator counterpart."""
    hm = h_frame_matrix(u.frame, m, c)
    comps = []
    for A in range(5):
        acc = _S0
        for B in range(5):
            if hm[A][B].is_zero:
                continue
            acc = acc + hm[A][B] * u.components[B]
        comps.append(acc)
    return FiveFormField(tuple(comps), u.frame)


def theta_h(u: FiveVector, m: MetricField, c: Constants) -> FiveForm:
    hm = _eval_block(h_frame_matrix(u.frame, m, c), u.at)
    comps = hm @ np.array(u.components)
    return FiveForm(tuple(comps), u.frame, u.at)


def theta_h_inverse(w: FiveForm, m: MetricField, c: Constants) -> FiveVector:
    hm = _eval_block(h_frame_matrix(w.frame, m, c), w.at)
    comps = np.linalg.solve(hm, np.array(w.components))
    return FiveVector(tuple(comps), w.frame, w.at)


def raise_with_g(w: FiveForm, m: MetricField) -> FiveVector:
    """The unique differential vector with theta_g image w; defined only on
    forms annihilating the algebraic direction."""
    _require_regular(w.frame)
    if w.components[4] != 0.0:
        raise ValueError("g-raising undefined outside the annihilator of the algebraic subspace")
    gm = _eval_block(_frame_metric_block(w.frame, m), w.at)
    four = np.linalg.solve(gm, np.array(w.components[:4]))
    return FiveVector(tuple(four) + (0.0,), w.frame, w.at)


def _eval_block(rows, p) -> np.ndarray:
    xs = as_xs(p)
    return np.array([[f.eval(xs) for f in row] for row in rows])


# ---------------------------------------------------------------------------
# Transport and the distinguished forms.

def transport_form(
    w0: FiveForm,
    curve: ParametrizedCurve,
    t0: float,
    t1: float,
    G: Connection,
    s: FlowSettings | None = None,
) -> FiveForm:
    """Parallel transport conserving every contraction with transported
    vectors: dw_A/dt = +G^B_{A mu} w_B xdot^mu."""
    if w0.frame != G.frame:
        raise FrameError("form components must be given in the connection frame")
    comps = transport_form_components(w0.components, curve, t0, t1, G, s)
    return FiveForm(tuple(comps), G.frame, curve.point_at(t1))


def x_form(frame: Frame) -> FiveFormField:
    """The parameter form: contraction with any vector returns its curve
    parameter value; the fifth dual form of an active regular frame."""
    _require_regular(frame)
    lam_e5 = frame.matrix[4][4] / frame.constants.fifth_coefficient
    return FiveFormField((_S0, _S0, _S0, _S0, lam_e5), frame)


def j_form(frame: Frame) -> FiveFormField:
    """The fifth dual form of the passive regular frame, expressed in
    ``frame``; contraction with a vector gives its canonical fifth
    component."""
    _require_regular(frame)
    return FiveFormField((_S0, _S0, _S0, _S0, frame.matrix[4][4]), frame)


def form_change_basis(w: FiveFormField, L, target: Frame) -> FiveFormField:
    """Dual components transform covariantly: w'_A = w_B L^B_A."""
    Lf = [[ScalarField.wrap(e) for e in row] for row in np.asarray(L, dtype=object)]
    comps = []
    for A in range(5):
        acc = _S0
        for B in range(5):
            acc = acc + w.components[B] * Lf[B][A]
        comps.append(acc)
    return FiveFormField(tuple(comps), target)


# ---------------------------------------------------------------------------
# p-forms.

def _sort_parity(idx):
    """Sorted index tuple and permutation sign; None for repeated indices."""
    idx = tuple(idx)
    perm = sorted(range(len(idx)), key=lambda i: idx[i])
    sorted_idx = tuple(idx[i] for i in perm)
    for a, b in zip(sorted_idx, sorted_idx[1:]):
        if a == b:
            return None, 0
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sorted_idx, sign


@dataclass(frozen=True)
class PFormField:
    """Fully antisymmetric degree-p form; only strictly increasing index
    tuples are stored."""

    degree: int
    data: tuple  # pairs (sorted index tuple, ScalarField)
    frame: Frame

    @classmethod
    def from_dict(cls, degree: int, entries: dict, frame: Frame) -> "PFormField":
        if degree < 0 or degree > 5:
            raise ValueError("degree must be 0..5")
        clean = []
        for idx, f in sorted(entries.items()):
            f = ScalarField.wrap(f)
            if len(idx) != degree:
                raise ValueError("index tuple does not match the degree")
            if list(idx) != sorted(set(idx)):
                raise ValueError("store only strictly increasing index tuples")
            if not f.is_zero:
                clean.append((tuple(idx), f))
        return cls(degree, tuple(clean), frame)

    @classmethod
    def from_one_form(cls, w: FiveFormField) -> "PFormField":
        return cls.from_dict(
            1, {(A,): w.components[A] for A in range(5)}, w.frame
        )

    def component(self, idx) -> ScalarField:
        sorted_idx, sign = _sort_parity(idx)
        if sorted_idx is None:
            return _S0
        for key, f in self.data:
            if key == sorted_idx:
                return f if sign == 1 else -f
        return _S0

    @property
    def is_zero(self) -> bool:
        return not self.data

    def add(self, other: "PFormField") -> "PFormField":
        if self.degree != other.degree or self.frame != other.frame:
            raise ValueError("can only add forms of equal degree and frame")
        entries = dict(self.data)
        for idx, f in other.data:
            entries[idx] = entries.get(idx, _S0) + f
        return PFormField.from_dict(self.degree, entries, self.frame)

    def scale(self, k) -> "PFormField":
        kf = ScalarField.wrap(k)
        return PFormField.from_dict(
            self.degree, {idx: kf * f for idx, f in self.data}, self.frame
        )


def wedge_forms(a: PFormField, b: PFormField) -> PFormField:
    """Antisymmetrized product with the determinant normalization, so the
    permutation sum carries 1/(p! q!); associative and graded-commutative."""
    if a.frame != b.frame:
        raise FrameError("forms live in different frames")
    p, q = a.degree, b.degree
    if p + q > 5:
        raise ValueError("wedge degree exceeds the dimension")
    if p == 0:
        scalar = a.component(()) if not a.is_zero else _S0
        return b.scale(scalar)
    if q == 0:
        scalar = b.component(()) if not b.is_zero else _S0
        return a.scale(scalar)
    entries: dict = {}
    for idx in itertools.combinations(range(5), p + q):
        acc = _S0
        for subset in itertools.combinations(range(p + q), p):
            left = tuple(idx[i] for i in subset)
            right = tuple(idx[i] for i in range(p + q) if i not in subset)
            # shuffle sign: parity of moving the subset to the front
            sign = 1
            for rank, i in enumerate(subset):
                sign *= (-1) ** (i - rank)
            term = a.component(left) * b.component(right)
            acc = acc + (term if sign == 1 else -term)
        if not acc.is_zero:
            entries[idx] = acc
    return PFormField.from_dict(p + q, entries, a.frame)
