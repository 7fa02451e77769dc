import numpy as np
import pytest

from nmatrix.construct import (
    BorderStep,
    ConstructionParams,
    ConstructionStuck,
    ConstructionTrace,
    InfeasibleBorder,
    SignPatternError,
    border,
    border_signs,
    certify_border,
    construct,
    find_feasible_border,
    ncon1,
    ncon2,
    strip_border,
)
from nmatrix.core import ContractError, parse_matrix
from nmatrix.detect import MatrixClass, sign_partition
from nmatrix.oracle import classify_bruteforce

EX1_BORDERS = [(-1.0, [2.0], [2.0]), (-1.0, [2.0, -1], [2.0, -2])]
EX2_BORDERS = [(-1.0, [-1.0], [-2.0]), (-1.0, [-2.0, -1], [-3.0, -2])]


def test_first_example_injected(ex1):
    tr = ncon1(ConstructionParams(n=3, category=1, k=1), base=[[-1.0]], borders=EX1_BORDERS)
    np.testing.assert_array_equal(tr.result, ex1)
    np.testing.assert_array_equal(tr.steps[0].certificate, [[3]])
    np.testing.assert_array_equal(tr.steps[1].certificate, [[3, -2], [0, 1]])


def test_second_example_injected(ex2):
    tr = ncon2(ConstructionParams(n=3), base=[[-1.0]], borders=EX2_BORDERS)
    np.testing.assert_array_equal(tr.result, ex2)
    np.testing.assert_array_equal(tr.steps[0].certificate, [[1]])
    np.testing.assert_array_equal(tr.steps[1].certificate, [[5, 3], [1, 1]])


def test_injected_border_is_still_certified():
    bad = [(-1.0, [-1.0], [-0.1])]
    with pytest.raises(InfeasibleBorder):
        ncon2(ConstructionParams(n=2), base=[[-1.0]], borders=bad)
    with pytest.raises(SignPatternError):
        ncon2(ConstructionParams(n=2), base=[[-1.0]], borders=[(-1.0, [1.0], [-1.0])])
    with pytest.raises(ContractError):
        ncon2(ConstructionParams(n=3), base=[[-1.0]], borders=EX2_BORDERS[:1])


def test_border_signs():
    np.testing.assert_array_equal(border_signs(3), [-1, -1, -1])
    np.testing.assert_array_equal(border_signs(3, 1), [1, -1, -1])
    np.testing.assert_array_equal(border_signs(1, 1), [1])


@pytest.mark.parametrize("kwargs", [
    dict(n=0), dict(n=2, category=3), dict(n=2, category=1, k=2), dict(n=1, category=1, k=1),
    dict(n=3, category=1), dict(n=3, magnitude=0.0), dict(n=3, engine="x"), dict(n=3, resample_budget=0),
])
def test_params_validation(kwargs):
    with pytest.raises(ContractError):
        ConstructionParams(**kwargs)


def test_border_step_validation():
    with pytest.raises(ContractError):
        BorderStep([1.0], [1.0], a=1.0, t=1.0)


@pytest.mark.parametrize("category", [1, 2])
def test_replay_and_determinism(category):
    p = ConstructionParams(n=6, category=category, k=2 if category == 1 else None, seed=11)
    a, b = construct(p), construct(p)
    np.testing.assert_array_equal(a.result, b.result)
    np.testing.assert_array_equal(a.replay(), a.result)


def test_trace_text_round_trip():
    tr = construct(ConstructionParams(n=5, category=1, k=2, seed=3))
    text = tr.to_text()
    back = ConstructionTrace.from_text(text)
    np.testing.assert_array_equal(back.base, tr.base)
    np.testing.assert_array_equal(back.result, tr.result)
    np.testing.assert_array_equal(back.replay(), tr.result)
    np.testing.assert_array_equal(parse_matrix(text), tr.result)


@pytest.mark.parametrize("category", [1, 2])
def test_strip_border_undoes_construction(category):
    k = 2 if category == 1 else None
    tr = construct(ConstructionParams(n=5, category=category, k=k, seed=4))
    A = tr.result
    for step in reversed(tr.steps):
        head, got = strip_border(A, k)
        assert got.certified
        np.testing.assert_array_equal(got.x, step.x)
        np.testing.assert_array_equal(got.y, step.y)
        A = head
    np.testing.assert_array_equal(A, tr.base)


def test_strip_border_of_example(ex1):
    head, step = strip_border(ex1, 1)
    np.testing.assert_array_equal(head, [[-1, 2], [2, -1]])
    np.testing.assert_array_equal(step.certificate, [[3, -2], [0, 1]])


def test_zero_border_gets_stuck():
    p = ConstructionParams(n=3, resample_budget=3)
    rng = np.random.default_rng(0)
    with pytest.raises(ConstructionStuck):
        find_feasible_border(np.array([[-1.0]]), border_signs(1), p, rng, x=[0.0], y=[0.0])


def test_certify_rejects_nonnegative_corner():
    with pytest.raises(SignPatternError):
        certify_border(np.array([[-1.0]]), [-1.0], [-1.0], 0.0, border_signs(1))


@pytest.mark.parametrize("n", [1, 2, 4, 8, 12])
def test_constructions_are_n_matrices(n):
    tr = construct(ConstructionParams(n=n, seed=n))
    assert np.all(tr.result < 0)
    if n >= 2:
        k = max(1, n // 3)
        tr = construct(ConstructionParams(n=n, category=1, k=k, seed=n))
        assert sign_partition(tr.result).block == tuple(range(1, k + 1))
    if n <= 8:
        assert classify_bruteforce(tr.result).is_n


def test_border_layout():
    U = border(np.array([[1.0]]), [2.0], [3.0], -4.0)
    np.testing.assert_array_equal(U, [[1, 2], [3, -4]])
