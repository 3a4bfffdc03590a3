"""Numerical laboratory for Schrodinger and heat flows on the Heisenberg group.

The package evaluates the explicit oscillatory-integral kernels of the
sublaplacian flows on H^d, the radial Fourier transform built on scaled
Hermite functions, and the dispersive quantities (sup-norm constants,
Strichartz-window decay rates, concentration identities) that go with them.
Everything is desk scale: d = 1 by default, direct quadrature, no FFTs.
"""

from .group import GroupPoint, homogeneous_dimension
from .fourier import RadialFunction, SpectralCoefficients, FrequencyPoint
from .kernels import KernelQuery, KernelValue, StripViolation, ZeroTime
from .solutions import LineData
from .special import TruncationBudget

__version__ = "0.1.0"

__all__ = [
    "GroupPoint",
    "homogeneous_dimension",
    "RadialFunction",
    "SpectralCoefficients",
    "FrequencyPoint",
    "KernelQuery",
    "KernelValue",
    "StripViolation",
    "ZeroTime",
    "LineData",
    "TruncationBudget",
    "__version__",
]
