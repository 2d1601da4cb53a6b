"""Inner products: the four-vector metric g, its degenerate five-vector
lift (kernel E), the parameter product h'' (kernel Z), and the
nondegenerate combination h = g + xi * h''.
"""

from __future__ import annotations

import numpy as np

from .algebra import FiveVector, FourVector, FrameError, MINKOWSKI_ETA, sym_inv
from .constants import Constants
from .fields import ScalarField, as_xs, concat_tapes, parse_field
from . import _kernel

__all__ = [
    "Constants",
    "MetricField",
    "SpacelikeIntervalError",
    "g4",
    "g5",
    "h_second",
    "h",
    "invariant_form_check",
    "curve_interval",
    "minkowski_metric",
    "conformal_exp_metric",
    "diag_poly_metric",
    "METRIC_PRESETS",
]


class SpacelikeIntervalError(ArithmeticError):
    """Negative radicand under the interval integrand."""

    def __init__(self, t: float, value: float):
        super().__init__(f"negative radicand {value:.6e} at t={t!r}")
        self.t = t
        self.value = value


class MetricField:
    """Symmetric 4x4 field of metric components with signature (+,-,-,-)."""

    __slots__ = ("rows", "_inv", "_partials")

    def __init__(self, rows):
        rows = tuple(tuple(ScalarField.wrap(f) for f in r) for r in rows)
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("metric must be 4x4")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_inv", None)
        object.__setattr__(self, "_partials", None)

    def __setattr__(self, *a):
        raise AttributeError("MetricField is immutable")

    def __eq__(self, other):
        return isinstance(other, MetricField) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def field(self, a: int, b: int) -> ScalarField:
        return self.rows[a][b]

    def at(self, p) -> np.ndarray:
        xs = as_xs(p)
        return np.array([[f.eval(xs) for f in r] for r in self.rows])

    def inverse_fields(self):
        """Symbolic inverse metric (cached)."""
        if self._inv is None:
            inv = sym_inv([list(r) for r in self.rows])
            object.__setattr__(self, "_inv", tuple(tuple(r) for r in inv))
        return self._inv

    def inverse_at(self, p) -> np.ndarray:
        m = self.at(p)
        det = np.linalg.det(m)
        if abs(det) < 1e-12:
            raise ValueError(f"metric is singular at {tuple(as_xs(p))}")
        return np.linalg.inv(m)

    def check_signature(self, probe_pts) -> None:
        """Require one positive and three negative eigenvalues at every probe."""
        for p in np.asarray(probe_pts, dtype=np.float64):
            w = np.linalg.eigvalsh(self.at(p))
            if not (np.sum(w > 0) == 1 and np.sum(w < 0) == 3):
                raise ValueError(
                    f"metric signature is not (+,-,-,-) at {tuple(p)}: eigenvalues {w}"
                )

    def check_symmetry(self, probe_pts, tol: float = 1e-12) -> None:
        for p in np.asarray(probe_pts, dtype=np.float64):
            m = self.at(p)
            if np.abs(m - m.T).max() > tol:
                raise ValueError(f"metric is not symmetric at {tuple(p)}")


def minkowski_metric() -> MetricField:
    return MetricField([[MINKOWSKI_ETA[a][b] for b in range(4)] for a in range(4)])


def conformal_exp_metric() -> MetricField:
    g = [[ScalarField.constant(0.0)] * 4 for _ in range(4)]
    g[0][0] = ScalarField.constant(1.0)
    g[1][1] = -parse_field("exp(2*x0)")
    g[2][2] = ScalarField.constant(-1.0)
    g[3][3] = ScalarField.constant(-1.0)
    return MetricField(g)


def diag_poly_metric() -> MetricField:
    g = [[ScalarField.constant(0.0)] * 4 for _ in range(4)]
    g[0][0] = parse_field("1 + x0^2")
    g[1][1] = ScalarField.constant(-1.0)
    g[2][2] = ScalarField.constant(-1.0)
    g[3][3] = ScalarField.constant(-1.0)
    return MetricField(g)


METRIC_PRESETS = {
    "minkowski": minkowski_metric,
    "conformal-exp": conformal_exp_metric,
    "diag-poly": diag_poly_metric,
}


# ---------------------------------------------------------------------------
# Products.

def g4(U: FourVector, V: FourVector, m: MetricField, p) -> float:
    """g_ab(p) U^a V^b, components taken in a basis whose metric is m at p."""
    gm = m.at(p)
    return float(np.array(U.components) @ gm @ np.array(V.components))


def g5(u: FiveVector, v: FiveVector, m: MetricField, p) -> float:
    """Degenerate five-vector product: the metric applied to the equivalence
    classes; independent of the fifth components, kernel exactly E."""
    gm = m.at(p)
    uc = u.canonical_components()[:4]
    vc = v.canonical_components()[:4]
    return float(uc @ gm @ vc)


def _require_regular(u: FiveVector):
    if not u.frame.is_regular:
        raise FrameError("operation requires a regular frame")


def h_second(u: FiveVector, v: FiveVector) -> float:
    """Product of the curve-parameter values; kernel exactly Z."""
    _require_regular(u)
    _require_regular(v)
    return u.lam * v.lam


def h(u: FiveVector, v: FiveVector, m: MetricField, c: Constants, p) -> float:
    """Nondegenerate product g5(u, v) + xi * lambda_u * lambda_v."""
    _require_regular(u)
    _require_regular(v)
    return g5(u, v, m, p) + c.xi * u.lam * v.lam


def invariant_form_check(h_matrix, tol: float = 1e-10) -> bool:
    """Pass iff the matrix has the symmetry-invariant block form
    diag(a * eta, b) with nonzero a and b."""
    m = np.asarray(h_matrix, dtype=np.float64)
    if m.shape != (5, 5):
        raise ValueError("expected a 5x5 matrix")
    if np.abs(m - m.T).max() > tol:
        return False
    a = m[0, 0]
    b = m[4, 4]
    if abs(a) <= tol or abs(b) <= tol:
        return False
    if np.abs(m[:4, :4] - a * MINKOWSKI_ETA).max() > tol:
        return False
    if np.abs(m[:4, 4]).max() > tol or np.abs(m[4, :4]).max() > tol:
        return False
    return True


# ---------------------------------------------------------------------------
# Interval of a curve segment.

def curve_interval(curve, t0: float, t1: float, m: MetricField, steps: int = 1024) -> float:
    """Integral of sqrt(g(xdot, xdot)) dt by composite Simpson quadrature.

    The segment must be timelike or null everywhere; a negative radicand is
    reported with the offending parameter value.
    """
    if not t1 > t0:
        raise ValueError("t1 must exceed t0")
    if steps % 2:
        steps += 1
    vel = curve.velocity()
    radicand = ScalarField.constant(0.0)
    for a in range(4):
        for b in range(4):
            gc = m.field(a, b).compose(curve.path)
            radicand = radicand + gc * vel[a] * vel[b]
    ts = np.linspace(t0, t1, steps + 1)
    pts = np.zeros((ts.size, 4))
    pts[:, 0] = ts
    codes, args, _ = concat_tapes([radicand])
    vals = _kernel.eval_many(codes, args, pts)
    bad = vals < -1e-12
    if bad.any():
        i = int(np.argmax(bad))
        raise SpacelikeIntervalError(float(ts[i]), float(vals[i]))
    integrand = np.sqrt(np.clip(vals, 0.0, None))
    hstep = (t1 - t0) / steps
    weights = np.ones(ts.size)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return float(hstep / 3.0 * (weights @ integrand))
