import math

import numpy as np
import pytest
from hypothesis import assume, given, settings

from nmatrix.core import INDETERMINATE, rank_one_update
from nmatrix.detect import MatrixClass, is_p_matrix
from nmatrix.oracle import (
    CapExceeded,
    MinorTable,
    all_principal_minors,
    border_constraints,
    characteristic_polynomial,
    classify_bruteforce,
    exact_border_threshold,
    negative_real_eigenvalue_count,
    negative_real_roots,
    subsets,
)

from conftest import square

EX1_A2 = np.array([[-1.0, 2], [2, -1]])
EX2_A2 = np.array([[-1.0, -1], [-2, -1]])


def test_subset_order():
    assert list(subsets(2)) == [(1,), (2,), (1, 2)]
    assert len(list(subsets(5))) == 31


def test_minor_values():
    table = all_principal_minors(EX1_A2)
    assert [v for _, v in table] == pytest.approx([-1, -1, -3])
    assert [v for _, v in all_principal_minors(np.eye(2))] == [1, 1, 1]


def test_minor_table_text_round_trip(ex1):
    table = all_principal_minors(ex1)
    back = MinorTable.from_text(table.to_text())
    assert back.n == 3 and back.minors == table.minors
    assert table.to_text().splitlines()[2].startswith("{1,2}: ")


def test_caps():
    with pytest.raises(CapExceeded):
        all_principal_minors(np.eye(3), cap=2)
    with pytest.raises(CapExceeded):
        negative_real_roots(np.eye(9))


def test_classify_bruteforce_examples(ex1, ex2):
    assert classify_bruteforce(ex1) is MatrixClass.N_CATEGORY1
    assert classify_bruteforce(ex2) is MatrixClass.N_CATEGORY2
    assert classify_bruteforce(np.eye(3)) is MatrixClass.P
    assert classify_bruteforce(np.linalg.inv(ex1)) is MatrixClass.ALMOST_P
    assert classify_bruteforce(-np.eye(2)) is MatrixClass.NOT_CLASSIFIED
    assert classify_bruteforce(np.array([[0.0]])) is MatrixClass.INDETERMINATE
    # a decided failure elsewhere outranks a dead-zone minor
    assert classify_bruteforce(np.diag([0.0, 1.0, -1.0])) is MatrixClass.NOT_CLASSIFIED


@pytest.mark.parametrize("A, x, y", [
    (EX1_A2, [2.0, -1], [2.0, -2]),
    (EX2_A2, [-2.0, -1], [-3.0, -2]),
])
def test_threshold_on_worked_examples(A, x, y):
    t_min = exact_border_threshold(A, x, y)
    assert t_min == pytest.approx(0.5)
    assert is_p_matrix(rank_one_update(A, x, y, 1.0)).verdict is True


def test_threshold_none_without_ray():
    assert exact_border_threshold(EX1_A2, [0.0, 0.0], [1.0, 1.0]) is None
    assert exact_border_threshold(np.eye(2), [1.0, 0.0], [-1.0, 0.0]) is None
    assert exact_border_threshold(np.eye(2), [0.0, 0.0], [0.0, 0.0]) == -math.inf


@settings(max_examples=100, deadline=None)
@given(square(1, 4))
def test_border_constraints_are_affine(A):
    rng = np.random.default_rng(0)
    x, y = rng.uniform(-1, 1, A.shape[0]), rng.uniform(-1, 1, A.shape[0])
    cons = border_constraints(A, x, y)
    for t in (0.5, 2.0):
        table = all_principal_minors(rank_one_update(A, x, y, t))
        for con in cons:
            assert con.value(t) == pytest.approx(table[con.alpha], rel=1e-7, abs=1e-7)


@settings(max_examples=100, deadline=None)
@given(square(1, 7))
def test_characteristic_polynomial_matches_numpy(A):
    np.testing.assert_allclose(characteristic_polynomial(A), np.poly(A), rtol=1e-7, atol=1e-7)


def test_negative_eigenvalue_counts(ex1, ex2):
    assert negative_real_eigenvalue_count(ex1) == 1
    assert negative_real_eigenvalue_count(ex2) == 1
    assert negative_real_eigenvalue_count(np.eye(3)) == 0
    r = negative_real_roots(-np.eye(2))
    assert (r.count, r.distinct, r.repeated) == (2, 1, True)
    assert negative_real_eigenvalue_count(np.zeros((2, 2))) is INDETERMINATE


@settings(max_examples=150, deadline=None)
@given(square(1, 6))
def test_negative_eigenvalue_count_matches_eigensolver(A):
    ev = np.linalg.eigvals(A)
    # stay clear of near-zero, near-real-axis and clustered eigenvalues
    assume(np.min(np.abs(ev)) > 1e-2)
    assume(np.all((np.abs(ev.imag) < 1e-12) | (np.abs(ev.imag) > 1e-2)))
    gaps = np.abs(ev[:, None] - ev[None, :]) + np.eye(len(ev))
    assume(np.min(gaps) > 1e-3)
    expected = int(np.sum((np.abs(ev.imag) < 1e-12) & (ev.real < 0)))
    assert negative_real_eigenvalue_count(A) == expected
