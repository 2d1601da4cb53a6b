# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel: tape evaluation and fixed-step RK4 loops.

Mirrors the pure-python fallback (_pykernel) instruction for instruction;
tests assert the two agree to roundoff.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, fabs, isfinite, log, pow, sin

cnp.import_array()

IMPLEMENTATION = "cython"

OK = 0
NONFINITE = 1
STALLED = 2

cdef int C_OK = 0
cdef int C_NONFINITE = 1
cdef int C_STALLED = 2

DEF MAX_STACK = 128
DEF MAX_DIM = 8

cdef double _BOUND = 1.0e6


cdef double _eval_tape(const cnp.int32_t* codes, const double* args, Py_ssize_t n,
                       const double* x) noexcept nogil:
    cdef double stack[MAX_STACK]
    cdef Py_ssize_t sp = 0
    cdef Py_ssize_t i
    cdef int code
    cdef double a
    for i in range(n):
        code = codes[i]
        a = args[i]
        if code == 0:    # CONST
            stack[sp] = a
            sp += 1
        elif code == 1:  # COORD
            stack[sp] = x[<int> a]
            sp += 1
        elif code == 2:  # ADD
            sp -= 1
            stack[sp - 1] = stack[sp - 1] + stack[sp]
        elif code == 3:  # SUB
            sp -= 1
            stack[sp - 1] = stack[sp - 1] - stack[sp]
        elif code == 4:  # MUL
            sp -= 1
            stack[sp - 1] = stack[sp - 1] * stack[sp]
        elif code == 5:  # DIV
            sp -= 1
            stack[sp - 1] = stack[sp - 1] / stack[sp]
        elif code == 6:  # POW
            sp -= 1
            stack[sp - 1] = pow(stack[sp - 1], stack[sp])
        elif code == 7:  # NEG
            stack[sp - 1] = -stack[sp - 1]
        elif code == 8:  # EXP
            stack[sp - 1] = exp(stack[sp - 1])
        elif code == 9:  # LN
            stack[sp - 1] = log(stack[sp - 1])
        elif code == 10: # SIN
            stack[sp - 1] = sin(stack[sp - 1])
        else:            # COS
            stack[sp - 1] = cos(stack[sp - 1])
    return stack[0]


def eval_many(codes, args, X):
    """Evaluate one tape at every row of X (n, dim) -> (n,) float64."""
    cdef cnp.ndarray[cnp.int32_t, ndim=1] c = np.ascontiguousarray(codes, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.ascontiguousarray(args, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef Py_ssize_t i
    cdef Py_ssize_t ntape = c.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _eval_tape(&c[0], &a[0], ntape, &pts[i, 0])
    return out


cdef void _eval_tapes(const cnp.int32_t* codes, const double* args, const cnp.int32_t* offsets,
                      Py_ssize_t ntapes, const double* x, double* out) noexcept nogil:
    cdef Py_ssize_t j
    for j in range(ntapes):
        out[j] = _eval_tape(codes + offsets[j], args + offsets[j],
                            offsets[j + 1] - offsets[j], x)


def flow_rk4(codes, args, offsets, X0, double t, int nsteps, bint check_stall=True):
    """Integrate dx/ds = u(x), dI/ds = u5(x) from s=0 to s=t.

    Returns (X, I, status); see the python kernel for the status codes.
    """
    cdef cnp.ndarray[cnp.int32_t, ndim=1] c = np.ascontiguousarray(codes, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.ascontiguousarray(args, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] offs = np.ascontiguousarray(offsets, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] X = np.array(X0, dtype=np.float64, copy=True)
    cdef Py_ssize_t n = X.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] I = np.zeros(n)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] status = np.zeros(n, dtype=np.uint8)
    if t == 0.0 or nsteps == 0:
        return X, I, status
    cdef double h = t / nsteps
    cdef double x[4]
    cdef double y[4]
    cdef double k1[5]
    cdef double k2[5]
    cdef double k3[5]
    cdef double k4[5]
    cdef double ii, speed, scale
    cdef Py_ssize_t row, step, d
    cdef int st
    with nogil:
        for row in range(n):
            for d in range(4):
                x[d] = X[row, d]
            ii = 0.0
            st = C_OK
            for step in range(nsteps):
                _eval_tapes(&c[0], &a[0], &offs[0], 5, x, k1)
                if check_stall and st == C_OK:
                    speed = 0.0
                    scale = 0.0
                    for d in range(4):
                        if fabs(k1[d]) > speed:
                            speed = fabs(k1[d])
                        if fabs(x[d]) > scale:
                            scale = fabs(x[d])
                    if speed < 1e-12 * (1.0 + scale):
                        st = C_STALLED
                for d in range(4):
                    y[d] = x[d] + 0.5 * h * k1[d]
                _eval_tapes(&c[0], &a[0], &offs[0], 5, y, k2)
                for d in range(4):
                    y[d] = x[d] + 0.5 * h * k2[d]
                _eval_tapes(&c[0], &a[0], &offs[0], 5, y, k3)
                for d in range(4):
                    y[d] = x[d] + h * k3[d]
                _eval_tapes(&c[0], &a[0], &offs[0], 5, y, k4)
                for d in range(4):
                    x[d] = x[d] + h * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]) / 6.0
                ii = ii + h * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4]) / 6.0
                if st == C_OK:
                    for d in range(4):
                        if not isfinite(x[d]) or fabs(x[d]) > _BOUND:
                            st = C_NONFINITE
                            break
            if st == C_OK and not isfinite(ii):
                st = C_NONFINITE
            for d in range(4):
                X[row, d] = x[d]
            I[row] = ii
            status[row] = <unsigned char> st
    return X, I, status


def linear_rk4(codes, args, offsets, V0, double t0, double t1, int nsteps):
    """Integrate dv/ds = A(s) v for the d*d matrix tapes A (variable: s)."""
    cdef cnp.ndarray[cnp.int32_t, ndim=1] c = np.ascontiguousarray(codes, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.ascontiguousarray(args, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] offs = np.ascontiguousarray(offsets, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] V = np.array(V0, dtype=np.float64, copy=True)
    cdef Py_ssize_t n = V.shape[0]
    cdef Py_ssize_t d = V.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] status = np.zeros(n, dtype=np.uint8)
    if nsteps == 0 or t0 == t1 or n == 0:
        return V, status
    if d > MAX_DIM:
        raise ValueError("matrix dimension too large for the compiled kernel")
    cdef double h = (t1 - t0) / nsteps
    cdef double A0[MAX_DIM * MAX_DIM]
    cdef double Ah[MAX_DIM * MAX_DIM]
    cdef double A1[MAX_DIM * MAX_DIM]
    cdef double k1[MAX_DIM]
    cdef double k2[MAX_DIM]
    cdef double k3[MAX_DIM]
    cdef double k4[MAX_DIM]
    cdef double w[MAX_DIM]
    cdef double v[MAX_DIM]
    cdef double tpt[4]
    cdef double s
    cdef Py_ssize_t step, row, i, j
    tpt[1] = 0.0
    tpt[2] = 0.0
    tpt[3] = 0.0
    with nogil:
        for step in range(nsteps):
            s = t0 + step * h
            tpt[0] = s
            _eval_tapes(&c[0], &a[0], &offs[0], d * d, tpt, A0)
            tpt[0] = s + 0.5 * h
            _eval_tapes(&c[0], &a[0], &offs[0], d * d, tpt, Ah)
            tpt[0] = s + h
            _eval_tapes(&c[0], &a[0], &offs[0], d * d, tpt, A1)
            for row in range(n):
                for i in range(d):
                    v[i] = V[row, i]
                for i in range(d):
                    k1[i] = 0.0
                    for j in range(d):
                        k1[i] += A0[i * d + j] * v[j]
                for i in range(d):
                    w[i] = v[i] + 0.5 * h * k1[i]
                for i in range(d):
                    k2[i] = 0.0
                    for j in range(d):
                        k2[i] += Ah[i * d + j] * w[j]
                for i in range(d):
                    w[i] = v[i] + 0.5 * h * k2[i]
                for i in range(d):
                    k3[i] = 0.0
                    for j in range(d):
                        k3[i] += Ah[i * d + j] * w[j]
                for i in range(d):
                    w[i] = v[i] + h * k3[i]
                for i in range(d):
                    k4[i] = 0.0
                    for j in range(d):
                        k4[i] += A1[i * d + j] * w[j]
                for i in range(d):
                    V[row, i] = v[i] + h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0
        for row in range(n):
            for i in range(d):
                if not isfinite(V[row, i]):
                    status[row] = C_NONFINITE
                    break
    return V, status
