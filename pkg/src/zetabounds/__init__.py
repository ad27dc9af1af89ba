"""Certified bounds for zeta'/zeta and 1/zeta near the line Re s = 1."""
from .numerics import CONSTANTS, CertifiedReal, PrecisionContext

__all__ = ["CONSTANTS", "CertifiedReal", "PrecisionContext"]
__version__ = "0.1.0"
