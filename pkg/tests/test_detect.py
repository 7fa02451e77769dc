import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmatrix.construct import ConstructionParams, construct
from nmatrix.core import INDETERMINATE, inverse, permutation_similarity, schur_complement
from nmatrix.detect import (
    MatrixClass,
    classify,
    is_almost_p_matrix,
    is_n_matrix,
    is_p_matrix,
    sign_partition,
)
from nmatrix.oracle import classify_bruteforce

from conftest import square


def n_matrix(n, category=2, seed=0):
    k = max(1, n // 2) if category == 1 else None
    return construct(ConstructionParams(n=n, category=category, k=k, seed=seed)).result


def test_worked_examples(ex1, ex2):
    assert classify(ex1) is MatrixClass.N_CATEGORY1
    assert classify(ex2) is MatrixClass.N_CATEGORY2
    rep = is_n_matrix(ex1)
    assert rep.verdict is True and rep.schur_count == 3 and rep.max_depth == 2


def test_scalars():
    assert is_p_matrix([[2.0]]).verdict is True
    assert is_p_matrix([[-1.0]]).verdict is False
    assert is_n_matrix([[-1.0]]).verdict is True
    assert is_n_matrix([[0.0]]).verdict is INDETERMINATE
    assert classify([[-1.0]]) is MatrixClass.N_CATEGORY2
    assert classify([[0.0]]) is MatrixClass.INDETERMINATE


def test_identity_and_negated_identity():
    assert classify(np.eye(3)) is MatrixClass.P
    # principal minors of -I alternate in sign
    assert classify(-np.eye(2)) is MatrixClass.NOT_CLASSIFIED


def test_early_exit_witness(ex1):
    rep = is_p_matrix(ex1)
    assert rep.verdict is False
    assert rep.schur_count == 0
    assert "index 1" in rep.fail_witness and "expected positive" in rep.fail_witness


def test_dead_zone_pivot_is_indeterminate():
    rep = is_n_matrix(np.array([[0.0, 1.0], [1.0, -1.0]]))
    assert rep.verdict is INDETERMINATE
    assert rep.matrix_class is MatrixClass.INDETERMINATE
    assert rep.to_dict()["verdict"] == "indeterminate"


def test_flipped_diagonal_fails(ex1):
    ex1[0, 0] = 1.0
    assert is_n_matrix(ex1).verdict is False
    assert classify(ex1) is MatrixClass.NOT_CLASSIFIED


def test_unknown_engine():
    with pytest.raises(ValueError):
        is_p_matrix(np.eye(2), engine="nope")


@settings(max_examples=150, deadline=None)
@given(square(1, 6), st.booleans())
def test_engines_agree(A, early):
    for fn in (is_p_matrix, is_n_matrix):
        r = fn(A, early_exit=early, engine="recursive")
        l = fn(A, early_exit=early, engine="level")
        assert r.verdict is l.verdict
        assert r.matrix_class is l.matrix_class
        if not early:
            assert r.schur_count == l.schur_count


@pytest.mark.parametrize("n", range(1, 13))
@pytest.mark.parametrize("engine", ["recursive", "level"])
def test_node_count_law(n, engine):
    rng = np.random.default_rng(n)
    P = np.eye(n) * n + rng.uniform(-0.4, 0.4, (n, n))
    for fn, A in ((is_p_matrix, P), (is_n_matrix, n_matrix(n, seed=n))):
        rep = fn(A, early_exit=False, engine=engine)
        assert rep.verdict is True
        assert rep.schur_count == 2 ** (n - 1) - 1
        assert rep.max_depth == n - 1


@pytest.mark.parametrize("seed", range(10))
def test_schur_complements_of_n_matrix_are_p(seed):
    A = n_matrix(5, category=1 + seed % 2, seed=seed)
    for mask in range(1, 2 ** 5 - 1):
        alpha = [i + 1 for i in range(5) if mask >> i & 1]
        assert is_p_matrix(schur_complement(A, alpha)).verdict is True


@pytest.mark.parametrize("seed", range(10))
def test_inverse_round_trip(seed):
    A = n_matrix(2 + seed % 5, category=1 + seed % 2, seed=seed)
    assert is_almost_p_matrix(inverse(A)).verdict is True
    assert classify(inverse(A)) is MatrixClass.ALMOST_P
    assert is_n_matrix(inverse(inverse(A))).verdict is True


def test_almost_p_edge_cases():
    assert is_almost_p_matrix(np.array([[1.0, 2], [2, 4]])).verdict is False
    assert is_almost_p_matrix(np.eye(2)).verdict is False
    assert is_almost_p_matrix([[-1.0]]).verdict is True


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10 ** 6), st.data())
def test_class_invariant_under_permutation(n, seed, data):
    A = np.random.default_rng(seed).uniform(-2, 2, (n, n))
    perm = data.draw(st.permutations(range(1, n + 1)))
    B = permutation_similarity(A, perm)
    a, b = classify_bruteforce(A), classify_bruteforce(B)
    if MatrixClass.INDETERMINATE not in (a, b):
        assert a is b
        assert classify(B) is b


def test_sign_partition_examples(ex1, ex2):
    part = sign_partition(ex1)
    assert part.block == (1,)
    assert sign_partition(ex2) is None
    B = np.array([[-1.0, -1, 1], [-1, -1, 1], [1, 1, -1]])
    assert sign_partition(B).block == (1, 2)
    # inconsistent off-block signs
    C = np.array([[-1.0, 1, -1], [1, -1, -1], [1, 1, -1]])
    assert sign_partition(C) is None
    D = np.array([[-1.0, 0.0], [1.0, -1.0]])
    assert sign_partition(D) is INDETERMINATE


def test_sign_partition_permutation_brings_block_first():
    A = np.array([[-1.0, 1, -1], [1, -1, 1], [-1, 1, -1]])
    part = sign_partition(A)
    assert part.block == (1, 3)
    B = permutation_similarity(A, part.perm)
    assert np.all(B[:2, :2] < 0) and np.all(B[2:, 2:] < 0)
    assert np.all(B[:2, 2:] > 0) and np.all(B[2:, :2] > 0)
