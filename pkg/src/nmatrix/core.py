"""Dense real square-matrix helpers shared by the detectors, oracle and constructors.

Matrices are plain ``float64`` numpy arrays. Index subsets are 1-based and
ascending everywhere in the public API; conversion to 0-based positions
happens only at the numpy boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import lapack

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "INDETERMINATE",
    "ContractError",
    "SingularPivot",
    "SingularMatrix",
    "MatrixFormatError",
    "as_matrix",
    "scale_of",
    "sign_of",
    "index_subset",
    "complement",
    "principal_submatrix",
    "determinant",
    "schur_complement",
    "rank_one_update",
    "inverse",
    "permutation_similarity",
    "inverse_permutation",
    "n_category",
    "parse_matrix",
    "format_matrix",
    "read_matrix",
    "write_matrix",
]


@dataclass(frozen=True)
class Tolerance:
    """Thresholds for floating-point sign decisions.

    ``eps`` is relative to ``max(1, max|entry|)`` of the matrix whose entry
    or minor is being signed; ``pivot_eps`` guards eliminations.
    """

    eps: float = 1e-9
    pivot_eps: float = 1e-12

    def __post_init__(self):
        if not (self.eps >= 0 and self.pivot_eps >= 0):
            raise ValueError(f"tolerances must be nonnegative, got {self}")


DEFAULT_TOL = Tolerance()


class _Indeterminate:
    """Third verdict for signs that land in the dead zone around zero.

    Deliberately has no truth value so that ``if verdict:`` cannot silently
    treat it as True or False.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INDETERMINATE"

    def __bool__(self):
        raise TypeError("an indeterminate verdict has no truth value; compare with `is`")

    def __reduce__(self):
        return (_Indeterminate, ())


INDETERMINATE = _Indeterminate()


class ContractError(ValueError):
    """A caller broke an operation's precondition (shape, index range, bijection)."""


class SingularPivot(ArithmeticError):
    def __init__(self, alpha: tuple[int, ...], value: float):
        self.alpha = alpha
        self.value = value
        super().__init__(f"A[{_fmt_set(alpha)}] is singular (det = {value:.3g})")


class SingularMatrix(ArithmeticError):
    pass


class MatrixFormatError(ValueError):
    pass


def _fmt_set(alpha: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in alpha) + "}"


def as_matrix(A) -> np.ndarray:
    """Copy ``A`` into a finite float64 square array of order at least 1."""
    M = np.array(A, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] < 1:
        raise ContractError("matrix order must be at least 1")
    if not np.all(np.isfinite(M)):
        raise ContractError("matrix entries must be finite")
    return M


def scale_of(M: np.ndarray) -> float:
    """``max(1, largest absolute entry)``; 1 for an empty array."""
    if M.size == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(M))))


def sign_of(value: float, scale: float, eps: float) -> int:
    """+1 / -1 outside the dead zone ``|value| <= eps * scale``, else 0."""
    if value > eps * scale:
        return 1
    if value < -eps * scale:
        return -1
    return 0


def index_subset(members: Iterable[int], n: int, *, allow_empty: bool = False) -> tuple[int, ...]:
    """Validate a 1-based subset of {1..n} and return it in ascending order."""
    alpha = tuple(sorted(int(i) for i in members))
    if len(set(alpha)) != len(alpha):
        raise ContractError(f"duplicate indices in {alpha}")
    if alpha and (alpha[0] < 1 or alpha[-1] > n):
        raise ContractError(f"indices {alpha} out of range 1..{n}")
    if not alpha and not allow_empty:
        raise ContractError("index subset must be nonempty")
    return alpha


def complement(alpha: Iterable[int], n: int) -> tuple[int, ...]:
    chosen = set(index_subset(alpha, n, allow_empty=True))
    return tuple(i for i in range(1, n + 1) if i not in chosen)


def _pos(alpha: Sequence[int]) -> np.ndarray:
    return np.asarray(alpha, dtype=np.intp) - 1


def principal_submatrix(A, alpha: Iterable[int]) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    alpha = index_subset(alpha, A.shape[0])
    p = _pos(alpha)
    return A[np.ix_(p, p)]


def determinant(A, tol: Tolerance = DEFAULT_TOL) -> float:
    """Determinant by LU factorisation with partial pivoting (LAPACK ``dgetrf``).

    The empty matrix has determinant 1. A factorisation with a pivot below
    ``tol.pivot_eps * scale`` is treated as singular and returns 0.0.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n == 0:
        return 1.0
    lu, piv, info = lapack.dgetrf(A)
    if info > 0:
        return 0.0
    diag = np.diag(lu)
    if np.min(np.abs(diag)) <= tol.pivot_eps * scale_of(A):
        return 0.0
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    det = float(np.prod(diag))
    return -det if swaps % 2 else det


def schur_complement(A, alpha: Iterable[int], tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``A[ᾱ] - A[ᾱ,α] A[α]^{-1} A[α,ᾱ]`` for a proper nonempty subset α."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    alpha = index_subset(alpha, n)
    rest = complement(alpha, n)
    if not rest:
        raise ContractError("Schur complement of the whole matrix is vacuous")
    p, q = _pos(alpha), _pos(rest)
    A11 = A[np.ix_(p, p)]
    d = determinant(A11, tol)
    if abs(d) <= tol.pivot_eps * scale_of(A11):
        raise SingularPivot(alpha, d)
    return A[np.ix_(q, q)] - A[np.ix_(q, p)] @ np.linalg.solve(A11, A[np.ix_(p, q)])


def rank_one_update(A, x, y, t: float) -> np.ndarray:
    """``A + t x y^T``."""
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    n = A.shape[0]
    if x.shape != (n,) or y.shape != (n,):
        raise ContractError(f"x, y must have length {n}, got {x.size} and {y.size}")
    return A + t * np.outer(x, y)


def inverse(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    d = determinant(A, tol)
    if abs(d) <= tol.pivot_eps * scale_of(A) ** n:
        raise SingularMatrix(f"matrix is singular to working precision (det = {d:.3g})")
    return np.linalg.inv(A)


def _check_perm(perm: Sequence[int], n: int) -> np.ndarray:
    p = np.asarray(perm, dtype=np.intp).ravel()
    if p.size != n or sorted(p.tolist()) != list(range(1, n + 1)):
        raise ContractError(f"{list(perm)} is not a permutation of 1..{n}")
    return p - 1


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    p = _check_perm(perm, len(perm))
    return tuple(int(i) + 1 for i in np.argsort(p))


def permutation_similarity(A, perm: Sequence[int]) -> np.ndarray:
    """Return ``P A P^T`` where entry (i, j) of the result is ``A(π⁻¹(i), π⁻¹(j))``.

    ``perm`` is the permutation in one-line notation, ``perm[i-1] = π(i)``.
    """
    A = np.asarray(A, dtype=float)
    p = _check_perm(perm, A.shape[0])
    inv = np.argsort(p)
    return A[np.ix_(inv, inv)]


def n_category(A, tol: Tolerance = DEFAULT_TOL):
    """Category of an N-matrix from its entry signs: 1, 2, or INDETERMINATE.

    Category 1 needs one clearly positive entry; category 2 needs every entry
    clearly negative. The N property itself is not checked here.
    """
    A = np.asarray(A, dtype=float)
    thr = tol.eps * scale_of(A)
    if np.any(A > thr):
        return 1
    if np.all(A < -thr):
        return 2
    return INDETERMINATE


def parse_matrix(text: str) -> np.ndarray:
    """Parse the plain matrix format: order on the first line, then n rows.

    Entries are separated by whitespace and/or commas; lines starting with
    ``#`` and blank lines are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise MatrixFormatError(f"first line must be the matrix order, got {lines[0]!r}") from None
    if n < 1:
        raise MatrixFormatError(f"matrix order must be positive, got {n}")
    rows = lines[1:]
    if len(rows) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(rows)}")
    out = np.empty((n, n))
    for i, row in enumerate(rows):
        fields = row.replace(",", " ").split()
        if len(fields) != n:
            raise MatrixFormatError(f"row {i + 1} has {len(fields)} entries, expected {n}")
        try:
            out[i] = [float(f) for f in fields]
        except ValueError as exc:
            raise MatrixFormatError(f"row {i + 1}: {exc}") from None
    if not np.all(np.isfinite(out)):
        raise MatrixFormatError("matrix entries must be finite")
    return out


def format_matrix(A) -> str:
    # repr() of a Python float round-trips exactly
    A = np.asarray(A, dtype=float)
    rows = [" ".join(repr(float(v)) for v in row) for row in A]
    return "\n".join([str(A.shape[0]), *rows]) + "\n"


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return parse_matrix(fh.read())


def write_matrix(A, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(A))

