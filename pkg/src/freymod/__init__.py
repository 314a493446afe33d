"""Computational skeleton of the modular method for x^r + y^r = d z^p.

Exact arithmetic in the ring of integers of Q(zeta_r)^+, prime ideals and
valuations, the Frey curve and its local reduction, the symplectic
elimination density sets, the p-adic parity obstruction, and brute-force
search oracles.
"""

from .errors import (
    DegenerateCurve,
    FreyError,
    InvariantViolation,
    RejectedInput,
    UndefinedValuation,
)
from .cyclotomic import RealCyclotomicField, RingElement, real_cyclotomic_field

__version__ = "0.1.0"

__all__ = [
    "DegenerateCurve",
    "FreyError",
    "InvariantViolation",
    "RejectedInput",
    "UndefinedValuation",
    "RealCyclotomicField",
    "RingElement",
    "real_cyclotomic_field",
]
