"""Pure-numpy kernel: tape evaluation and fixed-step RK4 loops.

Same contract as the compiled extension; selected automatically when the
extension is unavailable or PENTACALC_PURE_PYTHON=1.  Vectorizes over the
batch dimension, so large probe batches amortize the interpreter overhead.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"

# status codes shared with the compiled kernel
OK = 0
NONFINITE = 1
STALLED = 2

_BOUND = 1.0e6

_OP_CONST = 0
_OP_COORD = 1
_OP_ADD = 2
_OP_SUB = 3
_OP_MUL = 4
_OP_DIV = 5
_OP_POW = 6
_OP_NEG = 7
_OP_EXP = 8
_OP_LN = 9
_OP_SIN = 10
_OP_COS = 11


def _eval_batch(codes, args, X, out):
    """Run one tape over the rows of X (n, dim), writing values to out (n,)."""
    n = X.shape[0]
    stack = []
    with np.errstate(all="ignore"):
        for code, arg in zip(codes, args):
            if code == _OP_CONST:
                stack.append(np.full(n, arg))
            elif code == _OP_COORD:
                stack.append(X[:, int(arg)].copy())
            elif code == _OP_ADD:
                b = stack.pop()
                stack[-1] += b
            elif code == _OP_SUB:
                b = stack.pop()
                stack[-1] -= b
            elif code == _OP_MUL:
                b = stack.pop()
                stack[-1] *= b
            elif code == _OP_DIV:
                b = stack.pop()
                stack[-1] /= b
            elif code == _OP_POW:
                b = stack.pop()
                stack[-1] = np.power(stack[-1], b)
            elif code == _OP_NEG:
                stack[-1] = -stack[-1]
            elif code == _OP_EXP:
                stack[-1] = np.exp(stack[-1])
            elif code == _OP_LN:
                stack[-1] = np.log(stack[-1])
            elif code == _OP_SIN:
                stack[-1] = np.sin(stack[-1])
            elif code == _OP_COS:
                stack[-1] = np.cos(stack[-1])
            else:
                raise ValueError(f"bad opcode {code}")
    out[:] = stack[-1]


def eval_many(codes, args, X):
    """Evaluate one tape at every row of X (n, dim) -> (n,) float64."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    out = np.empty(X.shape[0])
    _eval_batch(codes, args, X, out)
    return out


def _eval_tapes(codes, args, offsets, X, out):
    for j in range(len(offsets) - 1):
        lo, hi = offsets[j], offsets[j + 1]
        _eval_batch(codes[lo:hi], args[lo:hi], X, out[j])


def flow_rk4(codes, args, offsets, X0, t, nsteps, check_stall=True):
    """Integrate dx/ds = u(x), dI/ds = u5(x) from s=0 to s=t.

    ``offsets`` delimits five concatenated tapes (u^0..u^3, u^5) over the
    four chart coordinates.  Returns (X, I, status) with one status byte per
    row: 0 ok, 1 non-finite or out of bounds, 2 vanishing four-part.
    """
    X = np.array(X0, dtype=np.float64, copy=True)
    n = X.shape[0]
    I = np.zeros(n)
    status = np.zeros(n, dtype=np.uint8)
    if t == 0.0 or nsteps == 0:
        return X, I, status
    h = t / nsteps
    k = np.empty((5, n))

    def rhs(Y, out):
        _eval_tapes(codes, args, offsets, Y, out)

    k1 = np.empty((5, n))
    k2 = np.empty((5, n))
    k3 = np.empty((5, n))
    k4 = np.empty((5, n))
    for _ in range(nsteps):
        rhs(X, k1)
        if check_stall:
            speed = np.abs(k1[:4]).max(axis=0)
            stalled = (speed < 1e-12 * (1.0 + np.abs(X).max(axis=1))) & (status == OK)
            status[stalled] = STALLED
        rhs(X + 0.5 * h * k1[:4].T, k2)
        rhs(X + 0.5 * h * k2[:4].T, k3)
        rhs(X + h * k3[:4].T, k4)
        k[:] = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        X += h * k[:4].T
        I += h * k[4]
        bad = (~np.isfinite(X).all(axis=1)) | (np.abs(X).max(axis=1) > _BOUND)
        status[bad & (status == OK)] = NONFINITE
    bad = ~np.isfinite(I)
    status[bad & (status == OK)] = NONFINITE
    return X, I, status


def linear_rk4(codes, args, offsets, V0, t0, t1, nsteps):
    """Integrate dv/ds = A(s) v with A the d*d matrix of one-variable tapes.

    Returns (V, status); V0 has shape (n, d), every row follows the same
    matrix function so A is evaluated once per quadrature node.
    """
    V = np.array(V0, dtype=np.float64, copy=True)
    n, d = V.shape
    status = np.zeros(n, dtype=np.uint8)
    if nsteps == 0 or t0 == t1:
        return V, status
    h = (t1 - t0) / nsteps
    # quadrature nodes: t0, t0 + h/2, t0 + h, ... (2*nsteps + 1 of them)
    ts = t0 + 0.5 * h * np.arange(2 * nsteps + 1)
    T = np.zeros((ts.size, 4))
    T[:, 0] = ts
    mats = np.empty((d * d, ts.size))
    _eval_tapes(codes, args, offsets, T, mats)
    A = mats.reshape(d, d, ts.size)
    for step in range(nsteps):
        A0 = A[:, :, 2 * step]
        Ah = A[:, :, 2 * step + 1]
        A1 = A[:, :, 2 * step + 2]
        k1 = V @ A0.T
        k2 = (V + 0.5 * h * k1) @ Ah.T
        k3 = (V + 0.5 * h * k2) @ Ah.T
        k4 = (V + h * k3) @ A1.T
        V += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    bad = ~np.isfinite(V).all(axis=1)
    status[bad] = NONFINITE
    return V, status
