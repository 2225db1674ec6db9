"""Geodesic penetration spectra on cusped hyperbolic surfaces.

Computes Lagrange values of geodesics via boundary expansions, builds
bounded-cuspidal-type Cantor sets on the boundary circle, decomposes targets
into (perturbed) sums of Cantor sets, and constructs/verifies Hall-ray
witness geodesics for the hyperbolic height and for Lipschitz-perturbed
proper height functions.
"""

import mpmath as mp

DEFAULT_PRECISION_BITS = 128

# All real quantities need well over float64 mantissa; raise the working
# precision once at import (never lower a user-chosen higher setting).
if mp.mp.prec < DEFAULT_PRECISION_BITS:
    mp.mp.prec = DEFAULT_PRECISION_BITS


def set_precision(bits: int) -> None:
    """Set the global working precision in bits (>= 80 required)."""
    if bits < 80:
        raise ValueError("precision below 80 bits is not supported")
    mp.mp.prec = bits


__version__ = "0.1.0"
