"""N-matrix detection and construction via recursive Schur complements."""

from .core import (
    DEFAULT_TOL,
    INDETERMINATE,
    ContractError,
    MatrixFormatError,
    SingularMatrix,
    SingularPivot,
    Tolerance,
    determinant,
    inverse,
    parse_matrix,
    format_matrix,
    read_matrix,
    write_matrix,
    schur_complement,
)
from .detect import (
    DetectReport,
    MatrixClass,
    classify,
    is_almost_p_matrix,
    is_n_matrix,
    is_p_matrix,
    sign_partition,
)
from .construct import ConstructionParams, ConstructionTrace, construct, ncon1, ncon2

__version__ = "0.1.0"
