"""Numeric kernel selection.

The compiled Cython extension is preferred; the pure-numpy fallback is used
when the extension is missing or PENTACALC_PURE_PYTHON=1 is set.  Both
expose the same three entry points (eval_many, flow_rk4, linear_rk4) and the
status codes OK / NONFINITE / STALLED.
"""

import os

if os.environ.get("PENTACALC_PURE_PYTHON") == "1":
    from . import _pykernel as impl
else:
    try:
        from . import _ckernel as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernel as impl

IMPLEMENTATION = impl.IMPLEMENTATION
OK = impl.OK
NONFINITE = impl.NONFINITE
STALLED = impl.STALLED
eval_many = impl.eval_many
flow_rk4 = impl.flow_rk4
linear_rk4 = impl.linear_rk4

__all__ = [
    "IMPLEMENTATION",
    "OK",
    "NONFINITE",
    "STALLED",
    "eval_many",
    "flow_rk4",
    "linear_rk4",
]
