"""Recursive P-, N- and almost-P-matrix tests.

Every test pivots on the leading diagonal entry and recurses on two
children of order ``n - 1``::

    b = A[2:n, 2:n]                          # trailing principal submatrix
    c = b - (A[2:n, 1] / A[1, 1]) A[1, 2:n]  # Schur complement of A[1, 1]

A node of the P-test needs a positive pivot and two P children. A node of
the N-test needs a negative pivot, an N child ``b`` and a P child ``c``.
The tree has ``2**(n-1) - 1`` internal nodes, one Schur complement each.

A pivot is signed only when it clears ``tol.eps`` times the larger of
``max(1, max|entry|)`` of its node and the largest magnitude that entered
the node's computation; otherwise the test reports INDETERMINATE. The
second term keeps cancellation noise in a Schur complement formed from
huge entries from being read as a sign.

Two evaluation orders are provided. ``engine="recursive"`` walks the tree
depth first exactly like the reference pseudocode. ``engine="level"``
evaluates each depth of the tree at once as a stacked numpy array, which
performs the same arithmetic per node and is much faster for large ``n``.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .core import (
    DEFAULT_TOL,
    INDETERMINATE,
    SingularMatrix,
    Tolerance,
    as_matrix,
    determinant,
    inverse,
    n_category,
    scale_of,
    sign_of,
)

__all__ = [
    "MatrixClass",
    "DetectReport",
    "SignPartition",
    "is_p_matrix",
    "is_n_matrix",
    "is_almost_p_matrix",
    "classify",
    "sign_partition",
    "ENGINES",
]

ENGINES = ("recursive", "level")


class MatrixClass(enum.Enum):
    P = "P"
    N_CATEGORY1 = "N_Category1"
    N_CATEGORY2 = "N_Category2"
    ALMOST_P = "AlmostP"
    NOT_CLASSIFIED = "NotClassified"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value

    @property
    def is_n(self) -> bool:
        return self in (MatrixClass.N_CATEGORY1, MatrixClass.N_CATEGORY2)


@dataclass
class DetectReport:
    """Outcome of one recursive test plus the counters of the walk.

    ``verdict`` is True, False or INDETERMINATE. ``matrix_class`` is the
    class the test established (NOT_CLASSIFIED when it failed).
    """

    test: str
    verdict: object
    matrix_class: MatrixClass
    schur_count: int = 0
    max_depth: int = 0
    fail_witness: Optional[str] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = _verdict_str(self.verdict)
        d["matrix_class"] = self.matrix_class.value
        return d


def _verdict_str(v) -> str:
    if v is INDETERMINATE:
        return "indeterminate"
    return "true" if v else "false"


@dataclass
class _Walk:
    schur_count: int = 0
    max_depth: int = 0
    failed: Optional[str] = None
    dead: Optional[str] = None

    def fail(self, msg: str) -> None:
        if self.failed is None:
            self.failed = msg

    def stall(self, msg: str) -> None:
        if self.dead is None:
            self.dead = msg


def _and3(*vals):
    if any(v is False for v in vals):
        return False
    if any(v is INDETERMINATE for v in vals):
        return INDETERMINATE
    return True


def _node_label(path: str, n: int) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Decode a branch path ('b'/'c' letters) into (pivot index, rows, eliminated).

    The node matrix is ``A[E ∪ R] / A[E]`` restricted to ``R``.
    """
    rows = list(range(1, n + 1))
    elim: list[int] = []
    for step in path:
        head = rows.pop(0)
        if step == "c":
            elim.append(head)
    return rows[0], tuple(rows), tuple(elim)


def _describe(path: str, n: int, value: float, want: int, dead: bool) -> str:
    pivot, rows, elim = _node_label(path, n)
    fmt = lambda s: "{" + ",".join(map(str, s)) + "}"
    where = f"A[{fmt(sorted(rows + elim))}]/A[{fmt(elim)}]" if elim else f"A[{fmt(rows)}]"
    if dead:
        return f"pivot for index {pivot} in {where} is {value:.6g}, too close to zero to sign"
    need = "positive" if want > 0 else "negative"
    return f"pivot for index {pivot} in {where} is {value:.6g}, expected {need}"


def _recursive(M, want, tol, walk, depth, early_exit, path, n, err):
    walk.max_depth = max(walk.max_depth, depth)
    pivot = M[0, 0]
    s = sign_of(pivot, max(scale_of(M), err), tol.eps)
    if s == 0:
        walk.stall(_describe(path, n, pivot, want, dead=True))
        return INDETERMINATE
    ok = s == want
    if not ok:
        walk.fail(_describe(path, n, pivot, want, dead=False))
        if early_exit:
            return False
    if M.shape[0] == 1:
        return ok
    b = M[1:, 1:]
    d = M[1:, 0] / pivot
    c = b - np.outer(d, M[0, 1:])
    err_c = max(err, np.abs(b).max(), np.abs(d).max() * np.abs(M[0, 1:]).max())
    walk.schur_count += 1
    rb = _recursive(b, want, tol, walk, depth + 1, early_exit, path + "b", n, err)
    if rb is False and early_exit:
        return False
    rc = _recursive(c, 1, tol, walk, depth + 1, early_exit, path + "c", n, err_c)
    return _and3(ok, rb, rc)


def _path_of(node_id: int, depth: int) -> str:
    return "".join("c" if (node_id >> (depth - 1 - i)) & 1 else "b" for i in range(depth))


def _interleave(u, v):
    out = np.empty((2 * u.shape[0],) + u.shape[1:], dtype=np.result_type(u, v))
    out[0::2], out[1::2] = u, v
    return out


def _level(A, root_want, tol, walk, early_exit, n):
    stack = A[None, :, :]
    want = np.array([root_want])
    err = np.zeros(1)
    ids = np.zeros(1, dtype=np.int64)
    depth = 0
    while True:
        walk.max_depth = depth
        piv = stack[:, 0, 0]
        thr = tol.eps * np.maximum(np.maximum(1.0, np.abs(stack).max(axis=(1, 2))), err)
        dead = np.abs(piv) <= thr
        bad = ~dead & (np.sign(piv) != want)
        for mask, record in ((bad, walk.fail), (dead, walk.stall)):
            if mask.any():
                j = int(np.flatnonzero(mask)[0])
                record(_describe(_path_of(int(ids[j]), depth), n, float(piv[j]), int(want[j]), mask is dead))
        if bad.any() and early_exit:
            break
        k = stack.shape[1]
        if k == 1:
            break
        live = ~dead if not early_exit else ~(dead | bad)
        if not live.any():
            break
        S, w, e, ids = stack[live], want[live], err[live], ids[live]
        b = S[:, 1:, 1:]
        d = S[:, 1:, 0] / S[:, 0, 0][:, None]
        row = S[:, 0, 1:]
        c = b - d[:, :, None] * row[:, None, :]
        e_c = np.maximum(e, np.maximum(np.abs(b).max(axis=(1, 2)), np.abs(d).max(axis=1) * np.abs(row).max(axis=1)))
        walk.schur_count += S.shape[0]
        stack = _interleave(b, c)
        want = _interleave(w, np.ones_like(w))
        err = _interleave(e, e_c)
        ids = _interleave(2 * ids, 2 * ids + 1)
        depth += 1
    if walk.failed:
        return False
    return INDETERMINATE if walk.dead else True


def _class_for(verdict, success: MatrixClass) -> MatrixClass:
    if verdict is INDETERMINATE:
        return MatrixClass.INDETERMINATE
    return success if verdict else MatrixClass.NOT_CLASSIFIED


def _run(A, root_want, tol, early_exit, engine):
    A = as_matrix(A)
    n = A.shape[0]
    walk = _Walk()
    if engine == "recursive":
        verdict = _recursive(A, root_want, tol, walk, 0, early_exit, "", n, 0.0)
    elif engine == "level":
        verdict = _level(A, root_want, tol, walk, early_exit, n)
    else:
        raise ValueError(f"unknown engine {engine!r}, expected one of {ENGINES}")
    if verdict is INDETERMINATE:
        witness = walk.dead
    else:
        witness = None if verdict else walk.failed
    return A, verdict, walk, witness


def is_p_matrix(A, tol: Tolerance = DEFAULT_TOL, *, early_exit: bool = True,
                engine: str = "recursive") -> DetectReport:
    """Decide whether every principal minor of ``A`` is positive.

    With ``early_exit=False`` the walk continues past failed pivots (only a
    pivot in the dead zone stops a branch), so counters describe the whole
    tree.
    """
    _, verdict, walk, witness = _run(A, 1, tol, early_exit, engine)
    cls = _class_for(verdict, MatrixClass.P)
    return DetectReport("p", verdict, cls, walk.schur_count, walk.max_depth, witness)


def is_n_matrix(A, tol: Tolerance = DEFAULT_TOL, *, early_exit: bool = True,
                engine: str = "recursive") -> DetectReport:
    """Decide whether every principal minor of ``A`` is negative.

    A positive verdict also reports the category read off the entry signs.
    """
    M, verdict, walk, witness = _run(A, -1, tol, early_exit, engine)
    cls = _class_for(verdict, MatrixClass.N_CATEGORY1)
    if verdict is True:
        cat = n_category(M, tol)
        if cat is INDETERMINATE:
            cls = MatrixClass.INDETERMINATE
        elif cat == 2:
            cls = MatrixClass.N_CATEGORY2
    return DetectReport("n", verdict, cls, walk.schur_count, walk.max_depth, witness)


def is_almost_p_matrix(A, tol: Tolerance = DEFAULT_TOL, *, early_exit: bool = True,
                       engine: str = "recursive") -> DetectReport:
    """Almost-P test via inversion: ``A`` is almost P iff ``det A < 0`` and ``A^{-1}`` is N."""
    A = as_matrix(A)
    try:
        Ainv = inverse(A, tol)
    except SingularMatrix:
        return DetectReport("almost-p", False, MatrixClass.NOT_CLASSIFIED, fail_witness="singular")
    det = determinant(A, tol)
    s = sign_of(det, scale_of(A), tol.eps)
    if s == 0:
        return DetectReport("almost-p", INDETERMINATE, MatrixClass.INDETERMINATE,
                            fail_witness=f"det(A) = {det:.6g} is too close to zero to sign")
    if s > 0:
        return DetectReport("almost-p", False, MatrixClass.NOT_CLASSIFIED,
                            fail_witness=f"det(A) = {det:.6g} is not negative")
    inner = is_n_matrix(Ainv, tol, early_exit=early_exit, engine=engine)
    cls = _class_for(inner.verdict, MatrixClass.ALMOST_P)
    witness = None if inner.fail_witness is None else f"inverse: {inner.fail_witness}"
    return DetectReport("almost-p", inner.verdict, cls, inner.schur_count, inner.max_depth, witness)


def classify(A, tol: Tolerance = DEFAULT_TOL, *, engine: str = "recursive") -> MatrixClass:
    """Run the P-, N- and almost-P tests in that order; the first positive verdict wins.

    A 1x1 negative matrix is both N and almost P; it is reported as N.
    INDETERMINATE is returned only if no test succeeded and at least one
    landed in the dead zone.
    """
    reports = []
    for test in (is_p_matrix, is_n_matrix, is_almost_p_matrix):
        rep = test(A, tol, engine=engine)
        if rep.verdict is True:
            return rep.matrix_class
        reports.append(rep)
    if any(r.verdict is INDETERMINATE for r in reports):
        return MatrixClass.INDETERMINATE
    return MatrixClass.NOT_CLASSIFIED


@dataclass(frozen=True)
class SignPartition:
    """Block split of a first-category N-matrix.

    ``block`` is the leading index set S; ``perm`` (one-line notation) moves
    S to the front, so ``permutation_similarity(A, perm)`` has negative
    diagonal blocks and positive off-diagonal blocks.
    """

    block: tuple[int, ...]
    perm: tuple[int, ...]


def sign_partition(A, tol: Tolerance = DEFAULT_TOL):
    """Recover the two-block sign pattern of a first-category N-matrix.

    Returns a SignPartition, None when no consistent split exists (including
    the all-negative case), or INDETERMINATE if some entry is too close to
    zero to sign.
    """
    A = as_matrix(A)
    n = A.shape[0]
    thr = tol.eps * scale_of(A)
    signs = np.where(A > thr, 1, np.where(A < -thr, -1, 0))
    if np.any(signs == 0):
        return INDETERMINATE
    in_s = signs[0] < 0
    in_s[0] = True
    if in_s.all():
        return None
    required = np.where(in_s[:, None] == in_s[None, :], -1, 1)
    if np.any(signs != required):
        return None
    block = tuple(int(i) + 1 for i in np.flatnonzero(in_s))
    order = block + tuple(int(i) + 1 for i in np.flatnonzero(~in_s))
    perm = [0] * n
    for pos, idx in enumerate(order, start=1):
        perm[idx - 1] = pos
    return SignPartition(block, tuple(perm))
