"""Exact verification of left-symmetric algebroids, bialgebroids and their doubles.

All arithmetic happens in the fraction field Q(x_1..x_n), so every identity
is checked with zero tolerance.
"""

__version__ = "0.1.0"

from .algebroid import (  # noqa: E402
    LEFT_SYMMETRIC,
    LIE,
    AlgebroidStructure,
    check_left_symmetric,
    check_lie_algebroid,
    multiply,
    semidirect_symplectic,
)
from .bialgebroid import BialgebroidCandidate, SymTensor, check_bialgebroid, s_bracket  # noqa: E402
from .report import Report  # noqa: E402
from .scalar import Base, Scalar, VectorField, parse_scalar  # noqa: E402
from .tensors import Covector, FormTensor, PolyTensor, Section  # noqa: E402

__all__ = [
    "LEFT_SYMMETRIC", "LIE", "AlgebroidStructure", "Base", "BialgebroidCandidate", "Covector",
    "FormTensor", "PolyTensor", "Report", "Scalar", "Section", "SymTensor", "VectorField",
    "check_bialgebroid", "check_left_symmetric", "check_lie_algebroid", "multiply", "parse_scalar",
    "s_bracket", "semidirect_symplectic",
]
