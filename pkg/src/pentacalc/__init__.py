"""Five-vector calculus over a four-dimensional chart.

Tangent five-vectors are the operators u^alpha d_alpha + u5 * 1.  The
package provides the operator algebra and commutators, the degenerate and
nondegenerate inner products, finite flow transforms and Lie derivatives,
the fifth-rule connection with parallel transport, the bivector isomorphism
onto four-vectors, five-vector forms, and a scenario-driven identity
harness with a CLI.
"""

__version__ = "0.1.0"

from ._kernel import IMPLEMENTATION as kernel_implementation
from .constants import Constants
from .fields import (
    FieldDomainError,
    NumericField,
    Point,
    ScalarField,
    eval_field,
    field_combine,
    parse_field,
    partial,
)
from .parser import ParseError

__all__ = [
    "__version__",
    "kernel_implementation",
    "Constants",
    "Point",
    "ScalarField",
    "NumericField",
    "FieldDomainError",
    "ParseError",
    "parse_field",
    "eval_field",
    "partial",
    "field_combine",
]
