"""Command-line interface.

Exit codes: 0 the property holds, 1 it fails, 2 a sign fell in the dead
zone, 3 bad input or flags, 4 a size cap or search budget was exhausted.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from itertools import combinations

from .bench import run_bench, to_csv
from .construct import ConstructionParams, ConstructionStuck, construct
from .core import (
    INDETERMINATE,
    ContractError,
    MatrixFormatError,
    SingularMatrix,
    SingularPivot,
    Tolerance,
    format_matrix,
    inverse,
    parse_matrix,
    schur_complement,
)
from .detect import (
    MatrixClass,
    classify,
    is_almost_p_matrix,
    is_n_matrix,
    is_p_matrix,
)
from .oracle import (
    EIGEN_CAP,
    MINOR_CAP,
    CapExceeded,
    all_principal_minors,
    classify_bruteforce,
    negative_real_roots,
)


class ExitStatus(enum.IntEnum):
    HOLDS = 0
    FAILS = 1
    INDETERMINATE = 2
    BAD_INPUT = 3
    EXHAUSTED = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _status_of(verdict) -> ExitStatus:
    if verdict is INDETERMINATE:
        return ExitStatus.INDETERMINATE
    return ExitStatus.HOLDS if verdict else ExitStatus.FAILS


def _read(path: str):
    if path == "-":
        return parse_matrix(sys.stdin.read())
    with open(path) as fh:
        return parse_matrix(fh.read())


def _emit(text: str, out=None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_NAMES = {"p": "a P-matrix", "n": "an N-matrix", "almost-p": "an almost P-matrix"}
_TESTS = {"p": is_p_matrix, "n": is_n_matrix, "almost-p": is_almost_p_matrix}


def cmd_detect(args) -> ExitStatus:
    A = _read(args.file)
    tol = Tolerance(eps=args.eps) if args.eps is not None else Tolerance()
    rep = _TESTS[args.cls](A, tol)
    if args.json:
        print(json.dumps(rep.to_dict(), sort_keys=True))
        return _status_of(rep.verdict)
    if rep.verdict is True:
        if args.cls == "n":
            cat = {MatrixClass.N_CATEGORY1: "1", MatrixClass.N_CATEGORY2: "2"}.get(rep.matrix_class, "indeterminate")
            print(f"N-matrix, category {cat}")
        else:
            print("P-matrix" if args.cls == "p" else "almost P-matrix")
    elif rep.verdict is False:
        print(f"not {_NAMES[args.cls]}")
        print(f"witness: {rep.fail_witness}")
    else:
        print(f"indeterminate: {rep.fail_witness}")
    if args.counters:
        print(f"schur_count: {rep.schur_count}")
        print(f"max_depth: {rep.max_depth}")
    return _status_of(rep.verdict)


def cmd_minors(args) -> ExitStatus:
    A = _read(args.file)
    table = all_principal_minors(A)
    sys.stdout.write(table.to_text())
    if args.classify:
        cls = classify_bruteforce(A)
        print(cls.value)
        if cls is MatrixClass.INDETERMINATE:
            return ExitStatus.INDETERMINATE
    return ExitStatus.HOLDS


def cmd_construct(args) -> ExitStatus:
    params = ConstructionParams(n=args.n, category=args.category, k=args.k, seed=args.seed,
                                magnitude=args.magnitude)
    trace = construct(params)
    _emit(trace.to_text() if args.trace else format_matrix(trace.result), args.out)
    return ExitStatus.HOLDS


def cmd_invert(args) -> ExitStatus:
    A = _read(args.file)
    try:
        _emit(format_matrix(inverse(A)), args.out)
    except SingularMatrix as exc:
        print(f"singular: {exc}", file=sys.stderr)
        return ExitStatus.FAILS
    return ExitStatus.HOLDS


def _verify_checks(A, deep: bool):
    """Yield (status, name, detail); status is PASS, FAIL, N/A or INDETERMINATE."""
    n = A.shape[0]
    if n > MINOR_CAP:
        raise CapExceeded(f"order {n} exceeds the oracle cap {MINOR_CAP}")
    if deep and n > EIGEN_CAP:
        raise CapExceeded(f"--deep needs order at most {EIGEN_CAP}, got {n}")
    fast, slow = classify(A), classify_bruteforce(A)
    undecided = MatrixClass.INDETERMINATE in (fast, slow)
    status = "INDETERMINATE" if undecided else ("PASS" if fast is slow else "FAIL")
    yield status, "recursive/brute-force agreement", f"recursive {fast}, brute force {slow}"
    if undecided:
        yield "INDETERMINATE", "recognized class", str(slow)
    else:
        ok = slow is not MatrixClass.NOT_CLASSIFIED
        yield ("PASS" if ok else "FAIL"), "recognized class", str(slow)
    names = ["N4 Schur complements are P", "N1 inverse is almost P"] + (["N6 one negative real eigenvalue"] if deep else [])
    if not slow.is_n:
        for name in names:
            yield "N/A", name, "not applicable (not N)"
        return
    worst, where = "PASS", "all proper subsets"
    for size in range(1, n):
        for alpha in combinations(range(1, n + 1), size):
            try:
                v = is_p_matrix(schur_complement(A, alpha)).verdict
            except SingularPivot:
                v = INDETERMINATE
            if v is not True:
                label = "{" + ",".join(map(str, alpha)) + "}"
                if v is False:
                    worst, where = "FAIL", f"A/A[{label}] is not P"
                    break
                if worst == "PASS":
                    worst, where = "INDETERMINATE", f"A/A[{label}] undecided"
        if worst == "FAIL":
            break
    yield worst, names[0], where
    try:
        B = inverse(A)
    except SingularMatrix:
        yield "FAIL", names[1], "singular"
    else:
        inv_slow = classify_bruteforce(B)
        inv_fast = is_almost_p_matrix(B).verdict
        if inv_slow is MatrixClass.ALMOST_P and inv_fast is True:
            yield "PASS", names[1], "brute force AlmostP, recursive almost-P test true"
        elif inv_slow is MatrixClass.INDETERMINATE or inv_fast is INDETERMINATE:
            yield "INDETERMINATE", names[1], f"brute force {inv_slow}"
        else:
            yield "FAIL", names[1], f"brute force {inv_slow}, recursive almost-P test {inv_fast}"
    if deep:
        roots = negative_real_roots(A)
        if roots is INDETERMINATE:
            yield "INDETERMINATE", names[2], "eigenvalue near zero"
        else:
            ok = roots.count == 1
            yield ("PASS" if ok else "FAIL"), names[2], f"count {roots.count}"


def cmd_verify(args) -> ExitStatus:
    A = _read(args.file)
    statuses = []
    for status, name, detail in _verify_checks(A, args.deep):
        print(f"{status:<13} {name}: {detail}")
        statuses.append(status)
    if "FAIL" in statuses:
        return ExitStatus.FAILS
    if "INDETERMINATE" in statuses:
        return ExitStatus.INDETERMINATE
    return ExitStatus.HOLDS


def cmd_bench(args) -> ExitStatus:
    rows = run_bench(args.nmin, args.nmax, args.trials, args.seed)
    text = to_csv(rows)
    sys.stdout.write(text)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
    bad = [r.n for r in rows if r.schur_count != 2 ** (r.n - 1) - 1]
    return ExitStatus.FAILS if bad else ExitStatus.HOLDS


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nmatrix", description="Detect and construct N-, P- and almost P-matrices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("detect", help="run a recursive class test on a matrix file")
    p.add_argument("cls", choices=["p", "n", "almost-p"])
    p.add_argument("file")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--counters", action="store_true")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("minors", help="print every principal minor")
    p.add_argument("file")
    p.add_argument("--classify", action="store_true")
    p.set_defaults(func=cmd_minors)

    p = sub.add_parser("construct", help="build a random N-matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--category", type=int, choices=[1, 2], default=2)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--magnitude", type=float, default=2.0)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("invert", help="print the inverse (an N-matrix inverts to an almost P-matrix)")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("verify", help="cross-check a matrix against the brute-force oracle")
    p.add_argument("file")
    p.add_argument("--deep", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time recursive detection against minor enumeration")
    p.add_argument("--nmin", type=int, default=1)
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return int(args.func(args))
    except _UsageError as exc:
        print(f"nmatrix: error: {exc}", file=sys.stderr)
        return int(ExitStatus.BAD_INPUT)
    except (CapExceeded, ConstructionStuck) as exc:
        print(f"nmatrix: {exc}", file=sys.stderr)
        return int(ExitStatus.EXHAUSTED)
    except (MatrixFormatError, ContractError, OSError, ValueError) as exc:
        print(f"nmatrix: {exc}", file=sys.stderr)
        return int(ExitStatus.BAD_INPUT)


if __name__ == "__main__":
    sys.exit(main())
