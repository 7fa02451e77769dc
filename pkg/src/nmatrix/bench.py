"""Recursive detection versus exhaustive minor enumeration on N-matrices.

N-matrix inputs are the worst case for the recursive test: every pivot
passes, so the whole tree of ``2**(n-1) - 1`` Schur complements is formed.
The recursion is timed with the level-order engine; the depth-first engine
spends most of its time in interpreter overhead and would measure Python
calls rather than the algorithm.
"""

from __future__ import annotations

import time
from dataclasses import astuple, dataclass

import numpy as np

from .construct import ConstructionParams, construct
from .detect import is_n_matrix
from .oracle import MINOR_CAP, CapExceeded, all_principal_minors

CSV_HEADER = "n,t_recursive_ns,t_naive_ns,schur_count"


@dataclass
class BenchRow:
    n: int
    t_recursive_ns: int
    t_naive_ns: int
    schur_count: int

    @property
    def ratio(self) -> float:
        return self.t_naive_ns / max(self.t_recursive_ns, 1)


def _best_ns(fn, repeats: int) -> int:
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        fn()
        dt = time.perf_counter_ns() - t0
        best = dt if best is None else min(best, dt)
    return best


def bench_matrix(n: int, trial: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng([seed, n, trial])
    return construct(ConstructionParams(n=n, category=2), rng).result


def bench_order(n: int, trials: int = 3, seed: int = 0, repeats: int = 3) -> BenchRow:
    """Best-of timings over ``trials`` constructed N-matrices of order ``n``."""
    t_rec, t_naive, count = [], [], None
    for trial in range(trials):
        A = bench_matrix(n, trial, seed)
        rep = is_n_matrix(A, early_exit=False, engine="level")
        if rep.verdict is not True:
            raise RuntimeError(f"benchmark input of order {n} is not a certified N-matrix")
        count = rep.schur_count
        t_rec.append(_best_ns(lambda: is_n_matrix(A, early_exit=False, engine="level"), repeats))
        t_naive.append(_best_ns(lambda: all_principal_minors(A), 1))
    return BenchRow(n, min(t_rec), min(t_naive), count)


def run_bench(nmin: int, nmax: int, trials: int = 3, seed: int = 0, cap: int = MINOR_CAP) -> list[BenchRow]:
    if nmax > cap:
        raise CapExceeded(f"nmax={nmax} exceeds the oracle cap {cap}")
    if not 1 <= nmin <= nmax:
        raise ValueError(f"need 1 <= nmin <= nmax, got {nmin}, {nmax}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    return [bench_order(n, trials, seed) for n in range(nmin, nmax + 1)]


def to_csv(rows) -> str:
    lines = [CSV_HEADER] + [",".join(str(v) for v in astuple(r)) for r in rows]
    return "\n".join(lines) + "\n"
