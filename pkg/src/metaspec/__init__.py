"""Spectra of quadratic Hamiltonians H_A, A in u(d), and of metaplectic operators mu(g), g in U(d).

Exact combinatorics (denumerants, Ehrhart polynomials, Weyl counts) sit next to
a small Jacobi eigensolver and finite Fock-space blocks that check them.
"""

from .errors import (
    InputValidationError,
    MetaspecError,
    NumericalError,
    PreconditionError,
)
from .rational import RationalFrequencies, rationalize
from .symbols import LieAlgebraElement, from_blocks, from_complex

__version__ = "0.1.0"

__all__ = [
    "InputValidationError",
    "LieAlgebraElement",
    "MetaspecError",
    "NumericalError",
    "PreconditionError",
    "RationalFrequencies",
    "__version__",
    "from_blocks",
    "from_complex",
    "rationalize",
]
