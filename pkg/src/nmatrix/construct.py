"""Grow N-matrices one bordered row and column at a time.

A step appends column ``x``, row ``y^T`` and corner ``a < 0`` to an N-matrix
``A``. The result is again an N-matrix exactly when ``x`` and ``y`` carry
the right signs and ``A - (1/a) x y^T`` is a P-matrix. Writing
``t = -1/a``, every principal minor of ``A + t x y^T`` is affine in ``t``,
so the feasible ``t`` form an upward-closed ray whenever they exist; the
search below doubles ``t`` from 1 and resamples ``x, y`` if it runs out.

Second-category matrices (every entry negative) start from a negative
scalar and use negative borders throughout. First-category matrices start
from a second-category ``k x k`` block and use borders that are positive on
the first ``k`` coordinates and negative on the rest, which yields the
two-block sign pattern directly.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    INDETERMINATE,
    ContractError,
    Tolerance,
    as_matrix,
    format_matrix,
    parse_matrix,
    rank_one_update,
    scale_of,
)
from .detect import ENGINES, is_n_matrix, is_p_matrix, sign_partition

__all__ = [
    "SignPatternError",
    "InfeasibleBorder",
    "ConstructionStuck",
    "BorderStep",
    "ConstructionParams",
    "ConstructionTrace",
    "border_signs",
    "border",
    "certify_border",
    "append_border",
    "find_feasible_border",
    "strip_border",
    "ncon1",
    "ncon2",
    "construct",
]


class SignPatternError(ValueError):
    pass


class InfeasibleBorder(ValueError):
    def __init__(self, msg: str, witness: Optional[str] = None):
        self.witness = witness
        super().__init__(msg if witness is None else f"{msg}: {witness}")


class ConstructionStuck(RuntimeError):
    def __init__(self, msg: str, witness: Optional[str] = None):
        self.witness = witness
        super().__init__(msg if witness is None else f"{msg} (last failure: {witness})")


@dataclass(eq=False)
class BorderStep:
    x: np.ndarray
    y: np.ndarray
    a: float
    t: float
    certified: bool = False
    certificate: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).ravel()
        self.y = np.asarray(self.y, dtype=float).ravel()
        if not (self.a < 0 and self.t > 0):
            raise ContractError(f"border needs a < 0 and t > 0, got a={self.a}, t={self.t}")
        if self.x.shape != self.y.shape:
            raise ContractError("x and y must have the same length")


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    category: int = 2
    k: Optional[int] = None
    seed: int = 0
    magnitude: float = 2.0
    max_doublings: int = 60
    resample_budget: int = 50
    uniform_attempts: int = 5
    margin_doublings: int = 1
    tol: Tolerance = DEFAULT_TOL
    engine: str = "level"

    def __post_init__(self):
        if self.category not in (1, 2):
            raise ContractError(f"category must be 1 or 2, got {self.category}")
        if self.category == 1:
            if self.n < 2:
                raise ContractError("a first-category N-matrix needs n >= 2")
            if self.k is None or not 1 <= self.k < self.n:
                raise ContractError(f"category 1 needs 1 <= k < n, got k={self.k}, n={self.n}")
        elif self.n < 1:
            raise ContractError("n must be at least 1")
        if not self.magnitude > 0:
            raise ContractError("magnitude must be positive")
        if self.engine not in ENGINES:
            raise ContractError(f"engine must be one of {ENGINES}")
        if self.max_doublings < 0 or self.resample_budget < 1 or min(self.uniform_attempts, self.margin_doublings) < 0:
            raise ContractError("doubling and attempt counts must be >= 0 and resample_budget >= 1")


@dataclass
class ConstructionTrace:
    base: np.ndarray
    steps: list
    result: np.ndarray

    def replay(self) -> np.ndarray:
        A = self.base
        for step in self.steps:
            A = border(A, step.x, step.y, step.a)
        return A

    def to_text(self) -> str:
        """Trace as comment lines followed by the result in the plain matrix format.

        The output therefore parses as the result matrix on its own.
        """
        vec = lambda v: "[" + ", ".join(repr(float(e)) for e in v) + "]"
        lines = ["# base"]
        lines += ["# " + ln for ln in format_matrix(self.base).splitlines()]
        for i, s in enumerate(self.steps, start=1):
            lines.append(f"# step {i}: a={float(s.a)!r} x={vec(s.x)} y={vec(s.y)} t={float(s.t)!r}")
        lines.append("# result")
        return "\n".join(lines) + "\n" + format_matrix(self.result)

    @classmethod
    def from_text(cls, text: str) -> "ConstructionTrace":
        comments = [ln[1:].strip() for ln in text.splitlines() if ln.startswith("#")]
        start, stop = comments.index("base") + 1, comments.index("result")
        step_lines = [c for c in comments[start:stop] if c.startswith("step ")]
        base_lines = [c for c in comments[start:stop] if not c.startswith("step ")]
        pattern = re.compile(r"step \d+: a=(\S+) x=\[(.*)\] y=\[(.*)\] t=(\S+)")
        steps = []
        for ln in step_lines:
            a, x, y, t = pattern.fullmatch(ln).groups()
            steps.append(BorderStep([float(v) for v in x.split(",")], [float(v) for v in y.split(",")],
                                    float(a), float(t), certified=False))
        return cls(parse_matrix("\n".join(base_lines)), steps, parse_matrix(text))


def border_signs(order: int, k: Optional[int] = None) -> np.ndarray:
    """Required signs of ``x`` and ``y`` when bordering a matrix of the given order.

    All -1 for the second category; for the first category +1 on the first
    ``k`` coordinates and -1 after.
    """
    signs = -np.ones(order, dtype=int)
    if k is not None:
        if not 1 <= k <= order:
            raise ContractError(f"block size k={k} out of range for order {order}")
        signs[:k] = 1
    return signs


def border(A, x, y, a: float) -> np.ndarray:
    """``[[A, x], [y^T, a]]`` with no checks."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    U = np.empty((n + 1, n + 1))
    U[:n, :n] = A
    U[:n, n] = x
    U[n, :n] = y
    U[n, n] = a
    return U


def _check_signs(name, v, signs, eps):
    s = max(1.0, float(np.max(np.abs(v))))
    for i, (vi, si) in enumerate(zip(v, signs), start=1):
        if not vi * si > eps * s:
            need = "positive" if si > 0 else "negative"
            raise SignPatternError(f"{name}({i}) = {vi!r} must be {need}")


def certify_border(A, x, y, a: float, required_signs, tol: Tolerance = DEFAULT_TOL,
                   engine: str = "level") -> BorderStep:
    """Check the bordering conditions and return the certified step.

    Raises SignPatternError for a wrongly signed ``a``, ``x`` or ``y`` and
    InfeasibleBorder when ``A - (1/a) x y^T`` is not certifiably P.
    """
    A = as_matrix(A)
    n = A.shape[0]
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    signs = np.asarray(required_signs).ravel()
    if not (x.size == y.size == signs.size == n):
        raise ContractError(f"x, y and the sign pattern must all have length {n}")
    if not a < -tol.eps:
        raise SignPatternError(f"corner a = {a!r} must be negative")
    _check_signs("x", x, signs, tol.eps)
    _check_signs("y", y, signs, tol.eps)
    t = -1.0 / a
    P = rank_one_update(A, x, y, t)
    rep = is_p_matrix(P, tol, engine=engine)
    if rep.verdict is not True:
        raise InfeasibleBorder("A - (1/a) x y^T is not a P-matrix", rep.fail_witness)
    return BorderStep(x, y, float(a), t, certified=True, certificate=P)


def append_border(A, x, y, a: float, required_signs, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    step = certify_border(A, x, y, a, required_signs, tol)
    return border(A, step.x, step.y, step.a)


def _sample_uniform(rng, A, signs, params, attempt):
    # entrywise uniform on (0, magnitude], then signed
    return tuple(signs * params.magnitude * (1.0 - rng.random(signs.size)) for _ in range(2))


def _sample_clone(rng, A, signs, params, attempt):
    """Perturbed scaled copy of an existing index ``j``: ``x ~ λ A[:, j]``, ``y ~ μ A[j, :]``.

    An exact copy admits every corner ``a`` in ``(λ μ A(j, j), 0)``, and
    feasibility is an open condition, so the relative perturbation shrinks
    with ``attempt``. Multiplicative noise below 1 keeps every sign.
    """
    j = rng.integers(A.shape[0])
    delta = 0.5 ** attempt
    out = []
    for base in (A[:, j], A[j, :]):
        # scales in [1, 2] keep the new corner comparable to A(j, j)
        lam = rng.uniform(1.0, 2.0)
        out.append(signs * lam * np.abs(base) * (1.0 + delta * rng.uniform(-1.0, 1.0, signs.size)))
    return tuple(out)


def _widen(A, x, y, t, P, params):
    # a t just past the threshold leaves some minor of the bordered matrix
    # near zero; extra doublings keep a margin while the certificate holds
    for _ in range(params.margin_doublings):
        P2 = rank_one_update(A, x, y, 2 * t)
        if is_p_matrix(P2, params.tol, engine=params.engine).verdict is not True:
            break
        t, P = 2 * t, P2
    return t, P


def find_feasible_border(A, required_signs, params: ConstructionParams, rng,
                         x=None, y=None) -> BorderStep:
    """Search for a certified border of ``A`` with the given sign pattern.

    The first ``params.uniform_attempts`` samples draw ``|x|, |y|`` uniformly
    from ``(0, magnitude]``; later ones perturb a scaled copy of an existing
    row and column of ``A`` (see :func:`_sample_clone`). For each sample,
    ``t`` runs over ``1, 2, 4, ...`` until ``A + t x y^T`` is certified P,
    then is doubled ``params.margin_doublings`` more times while it stays
    certified. Supplying both ``x`` and ``y`` searches ``t`` only.
    """
    A = as_matrix(A)
    signs = np.asarray(required_signs).ravel()
    forced = x is not None and y is not None
    witness = None
    for attempt in range(1 if forced else params.resample_budget):
        if forced:
            xs, ys = np.asarray(x, dtype=float).ravel(), np.asarray(y, dtype=float).ravel()
        elif attempt < params.uniform_attempts:
            xs, ys = _sample_uniform(rng, A, signs, params, attempt)
        else:
            xs, ys = _sample_clone(rng, A, signs, params, attempt - params.uniform_attempts)
        for j in range(params.max_doublings + 1):
            t = 2.0 ** j
            P = rank_one_update(A, xs, ys, t)
            rep = is_p_matrix(P, params.tol, engine=params.engine)
            if rep.verdict is True:
                t, P = _widen(A, xs, ys, t, P, params)
                return BorderStep(xs, ys, -1.0 / t, t, certified=True, certificate=P)
            witness = rep.fail_witness
            if rep.verdict is INDETERMINATE:
                # rounding noise only grows with t
                break
    raise ConstructionStuck(f"no feasible border found for order {A.shape[0]}", witness)


def strip_border(A, k: Optional[int] = None, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, BorderStep]:
    """Split off the last row and column and certify them as a border step.

    This is the inductive step run backwards: for an N-matrix of the second
    category (``k=None``) or of the first category in two-block form with
    leading block size ``k``, the pieces must satisfy the bordering
    conditions. Raises SignPatternError or InfeasibleBorder otherwise.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if n < 2:
        raise ContractError("need order at least 2 to strip a border")
    head = A[:-1, :-1]
    return head, certify_border(head, A[:-1, -1], A[-1, :-1], float(A[-1, -1]),
                                border_signs(n - 1, k), tol)


def _base_scalar(params, rng) -> np.ndarray:
    return -params.magnitude * (1.0 - rng.random((1, 1)))


def _grow(A, params, rng, k, borders):
    steps = []
    for i in range(params.n - A.shape[0]):
        signs = border_signs(A.shape[0], k)
        if borders is not None:
            a, x, y = borders[i]
            step = certify_border(A, x, y, a, signs, params.tol, params.engine)
        else:
            step = find_feasible_border(A, signs, params, rng)
        steps.append(step)
        A = border(A, step.x, step.y, step.a)
    return A, steps


def _check_injected(params, base, borders):
    if borders is not None and base.shape[0] + len(borders) != params.n:
        raise ContractError(
            f"base of order {base.shape[0]} plus {len(borders)} borders does not reach n={params.n}")


def ncon2(params: ConstructionParams, rng=None, *, base=None,
          borders: Optional[Sequence] = None) -> ConstructionTrace:
    """Build a second-category N-matrix of order ``params.n``.

    ``base`` (a negative scalar, or any second-category N-matrix) and
    ``borders`` (a sequence of ``(a, x, y)``) inject fixed choices instead
    of sampling them; injected borders are still certified.
    """
    if params.category != 2:
        raise ContractError("ncon2 builds second-category matrices; use ncon1 for category 1")
    rng = np.random.default_rng(params.seed) if rng is None else rng
    base = _base_scalar(params, rng) if base is None else as_matrix(base)
    _check_injected(params, base, borders)
    result, steps = _grow(base, params, rng, None, borders)
    rep = is_n_matrix(result, params.tol, engine=params.engine)
    if rep.verdict is not True or not np.all(result < -params.tol.eps * scale_of(result)):
        raise ConstructionStuck("constructed matrix failed second-category certification", rep.fail_witness)
    return ConstructionTrace(base, steps, result)


def ncon1(params: ConstructionParams, rng=None, *, base=None,
          borders: Optional[Sequence] = None) -> ConstructionTrace:
    """Build a first-category N-matrix of order ``params.n`` in two-block form.

    The leading ``k x k`` block comes from :func:`ncon2` unless ``base`` is
    given. Rows and columns ``1..k`` form one block and ``k+1..n`` the other.
    """
    if params.category != 1:
        raise ContractError("ncon1 builds first-category matrices; use ncon2 for category 2")
    rng = np.random.default_rng(params.seed) if rng is None else rng
    k = params.k
    if base is None:
        inner = dataclasses.replace(params, n=k, category=2, k=None)
        base = ncon2(inner, rng).result
    else:
        base = as_matrix(base)
        if base.shape[0] != k:
            raise ContractError(f"base must have order k={k}, got {base.shape[0]}")
    _check_injected(params, base, borders)
    result, steps = _grow(base, params, rng, k, borders)
    rep = is_n_matrix(result, params.tol, engine=params.engine)
    part = sign_partition(result, params.tol)
    if rep.verdict is not True:
        raise ConstructionStuck("constructed matrix is not a certified N-matrix", rep.fail_witness)
    if part is None or part is INDETERMINATE or part.block != tuple(range(1, k + 1)):
        raise ConstructionStuck(f"constructed matrix does not split into blocks at k={k}")
    return ConstructionTrace(base, steps, result)


def construct(params: ConstructionParams, rng=None) -> ConstructionTrace:
    return (ncon1 if params.category == 1 else ncon2)(params, rng)
