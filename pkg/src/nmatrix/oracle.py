"""Brute-force ground truth.

Everything here is deliberately naive: each principal minor is its own LU
factorisation, classes are read straight off the definitions, and the
negative-eigenvalue count goes through the characteristic polynomial and
exact Sturm sequences rather than an eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .core import (
    DEFAULT_TOL,
    INDETERMINATE,
    Tolerance,
    as_matrix,
    determinant,
    n_category,
    scale_of,
    sign_of,
)
from .detect import MatrixClass

__all__ = [
    "CapExceeded",
    "MinorTable",
    "RootCount",
    "BorderConstraint",
    "MINOR_CAP",
    "EIGEN_CAP",
    "subsets",
    "all_principal_minors",
    "classify_bruteforce",
    "border_constraints",
    "exact_border_threshold",
    "characteristic_polynomial",
    "negative_real_roots",
    "negative_real_eigenvalue_count",
]

MINOR_CAP = 20
EIGEN_CAP = 8


class CapExceeded(RuntimeError):
    pass


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceeded(f"order {n} exceeds the configured cap {cap}")


def subsets(n: int) -> Iterator[tuple[int, ...]]:
    """Nonempty subsets of {1..n} in binary-counter order (bit i-1 selects index i)."""
    for mask in range(1, 1 << n):
        yield tuple(i + 1 for i in range(n) if mask >> i & 1)


def _fmt_set(alpha) -> str:
    return "{" + ",".join(map(str, alpha)) + "}"


@dataclass
class MinorTable:
    n: int
    minors: dict

    def __getitem__(self, alpha) -> float:
        return self.minors[tuple(alpha)]

    def __len__(self):
        return len(self.minors)

    def __iter__(self):
        return iter(self.minors.items())

    def to_text(self) -> str:
        return "".join(f"{_fmt_set(a)}: {v!r}\n" for a, v in self.minors.items())

    @classmethod
    def from_text(cls, text: str) -> "MinorTable":
        minors = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, value = line.split(":")
            alpha = tuple(int(i) for i in key.strip().strip("{}").split(","))
            minors[alpha] = float(value)
        n = max(max(a) for a in minors)
        return cls(n, minors)


def all_principal_minors(A, tol: Tolerance = DEFAULT_TOL, cap: int = MINOR_CAP) -> MinorTable:
    A = as_matrix(A)
    n = A.shape[0]
    _check_cap(n, cap)
    minors = {}
    for alpha in subsets(n):
        p = np.asarray(alpha) - 1
        minors[alpha] = determinant(A[np.ix_(p, p)], tol)
    return MinorTable(n, minors)


def classify_bruteforce(A, tol: Tolerance = DEFAULT_TOL, cap: int = MINOR_CAP) -> MatrixClass:
    """Classify ``A`` from the sign of every principal minor.

    A class is reported once all minors it constrains are clearly signed;
    INDETERMINATE means no class was certified while some class was still
    possible because of minors in the dead zone.
    """
    A = as_matrix(A)
    n = A.shape[0]
    table = all_principal_minors(A, tol, cap)
    signs = {}
    for alpha, v in table:
        p = np.asarray(alpha) - 1
        signs[alpha] = sign_of(v, scale_of(A[np.ix_(p, p)]), tol.eps)
    full = tuple(range(1, n + 1))
    proper = [s for a, s in signs.items() if a != full]

    def status(required):
        got = list(required)
        if all(s == r for s, r in got):
            return True
        if any(s == -r for s, r in got):
            return False
        return INDETERMINATE

    p_status = status((s, 1) for s in signs.values())
    n_status = status((s, -1) for s in signs.values())
    ap_status = status([(s, 1) for s in proper] + [(signs[full], -1)])
    if p_status is True:
        return MatrixClass.P
    if n_status is True:
        cat = n_category(A, tol)
        if cat is INDETERMINATE:
            return MatrixClass.INDETERMINATE
        return MatrixClass.N_CATEGORY1 if cat == 1 else MatrixClass.N_CATEGORY2
    if ap_status is True:
        return MatrixClass.ALMOST_P
    if INDETERMINATE in (p_status, n_status, ap_status):
        return MatrixClass.INDETERMINATE
    return MatrixClass.NOT_CLASSIFIED


def _cofactor_adjugate(M: np.ndarray, tol: Tolerance) -> np.ndarray:
    k = M.shape[0]
    if k == 1:
        return np.ones((1, 1))
    adj = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            minor = np.delete(np.delete(M, j, axis=0), i, axis=1)
            adj[i, j] = (-1) ** (i + j) * determinant(minor, tol)
    return adj


def _adjugate(M: np.ndarray, det: float, tol: Tolerance) -> np.ndarray:
    if abs(det) > tol.pivot_eps * scale_of(M) ** M.shape[0]:
        return det * np.linalg.inv(M)
    return _cofactor_adjugate(M, tol)


@dataclass(frozen=True)
class BorderConstraint:
    """``det (A + t x y^T)[alpha] = intercept + slope * t``.

    ``slope_scale`` is ``|y|^T |adj| |x|``, the size of the terms summed into
    the slope, used to decide whether the slope is distinguishable from zero.
    """

    alpha: tuple
    intercept: float
    slope: float
    slope_scale: float = 0.0

    def value(self, t: float) -> float:
        return self.intercept + self.slope * t


def border_constraints(A, x, y, tol: Tolerance = DEFAULT_TOL, cap: int = MINOR_CAP) -> list[BorderConstraint]:
    """Affine minor constraints of ``A + t x y^T``, one per nonempty subset.

    The slope is ``y[α]^T adj(A[α]) x[α]``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    _check_cap(n, cap)
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    out = []
    for alpha in subsets(n):
        p = np.asarray(alpha) - 1
        M = A[np.ix_(p, p)]
        d = determinant(M, tol)
        adj = _adjugate(M, d, tol)
        slope = float(y[p] @ adj @ x[p])
        out.append(BorderConstraint(alpha, d, slope, float(np.abs(y[p]) @ np.abs(adj) @ np.abs(x[p]))))
    return out


def exact_border_threshold(A, x, y, tol: Tolerance = DEFAULT_TOL, cap: int = MINOR_CAP) -> Optional[float]:
    """Smallest ``t_min`` such that ``A + t x y^T`` is a P-matrix for every ``t > t_min``.

    Returns None when no such ray exists: some constraint that is not
    already positive has a non-positive slope, or some slope is negative
    (the constraint would fail for large ``t``). Returns ``-inf`` when every
    constraint is positive and flat.
    """
    A = as_matrix(A)
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    t_min = -math.inf
    for con in border_constraints(A, x, y, tol, cap):
        p = np.asarray(con.alpha) - 1
        s_sub = scale_of(A[np.ix_(p, p)])
        d_sign = sign_of(con.intercept, s_sub, tol.eps)
        s_sign = sign_of(con.slope, max(1.0, con.slope_scale), tol.eps)
        if s_sign < 0:
            return None
        if s_sign == 0:
            if d_sign <= 0:
                return None
            continue
        t_min = max(t_min, -con.intercept / con.slope)
    return t_min


def characteristic_polynomial(A) -> np.ndarray:
    """Coefficients of ``det(tI - A)``, highest degree first, by Faddeev-LeVerrier."""
    A = as_matrix(A)
    n = A.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    M = np.zeros_like(A)
    eye = np.eye(n)
    for k in range(1, n + 1):
        M = A @ M + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(A @ M) / k
    return coeffs


# Exact polynomial arithmetic over Q; polynomials are lists of Fractions,
# highest degree first, with no leading zeros (the zero polynomial is []).

def _trim(p):
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return p[i:]


def _deriv(p):
    n = len(p) - 1
    return _trim([c * (n - i) for i, c in enumerate(p[:-1])])


def _rem(a, b):
    a = list(a)
    while len(a) >= len(b) and a:
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a = _trim(a)
    return a


def _gcd(a, b):
    while b:
        a, b = b, _rem(a, b)
    return [c / a[0] for c in a]


def _eval(p, t):
    acc = Fraction(0)
    for c in p:
        acc = acc * t + c
    return acc


def _sturm_chain(p):
    chain = [p, _deriv(p)]
    while chain[-1]:
        r = _rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return [q for q in chain if q]


def _variations(chain, t) -> int:
    vals = [v for v in (_eval(q, t) for q in chain) if v != 0]
    return sum(1 for a, b in zip(vals, vals[1:]) if (a > 0) != (b > 0))


def _distinct_roots(p, lo, hi) -> int:
    """Distinct real roots of ``p`` in ``(lo, hi]``."""
    if len(p) <= 1:
        return 0
    chain = _sturm_chain(p)
    return _variations(chain, lo) - _variations(chain, hi)


@dataclass(frozen=True)
class RootCount:
    """Negative real eigenvalues: ``count`` with multiplicity, ``distinct`` locations."""

    count: int
    distinct: int

    @property
    def repeated(self) -> bool:
        return self.count != self.distinct


def negative_real_roots(A, tol: Tolerance = DEFAULT_TOL, cap: int = EIGEN_CAP):
    """Count real roots of the characteristic polynomial in ``[-R, -δ)``.

    ``R = 1 + max absolute row sum`` bounds the spectrum and ``δ = eps * scale``.
    Counting is exact (Sturm sequences over the rationals) on the
    floating-point coefficients; multiplicity is recovered through the
    square-free chain ``p, gcd(p, p'), ...``. Returns INDETERMINATE when a
    root lies within ``δ`` of zero.
    """
    A = as_matrix(A)
    n = A.shape[0]
    _check_cap(n, cap)
    p = [Fraction(float(c)) for c in characteristic_polynomial(A)]
    R = Fraction(1 + float(np.max(np.sum(np.abs(A), axis=1))))
    delta = Fraction(tol.eps * scale_of(A))
    if _eval(p, -delta) == 0 or _distinct_roots(p, -delta, delta) > 0:
        return INDETERMINATE
    distinct = _distinct_roots(p, -R, -delta)
    count = 0
    g = p
    while len(g) > 1:
        count += _distinct_roots(g, -R, -delta)
        g = _gcd(g, _deriv(g))
    return RootCount(count, distinct)


def negative_real_eigenvalue_count(A, tol: Tolerance = DEFAULT_TOL, cap: int = EIGEN_CAP):
    """Number of negative real eigenvalues counted with multiplicity, or INDETERMINATE."""
    r = negative_real_roots(A, tol, cap)
    return r if r is INDETERMINATE else r.count
