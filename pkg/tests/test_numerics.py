import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shorted.errors import InvalidInput
from shorted.numerics import (
    DEFAULT_TOL,
    TolPolicy,
    adjoint,
    as_mat,
    gamma,
    numerical_rank,
    operator_norm,
    pinv,
    svd,
    threshold,
)

from conftest import rand_complex, rand_low_rank, rand_unitary


def test_svd_examples():
    assert np.allclose(svd(np.diag([3.0, 1.0])).S, [3, 1])
    assert np.allclose(svd(np.zeros((2, 2))).S, [0, 0])
    assert np.allclose(svd([[0.0, 1.0], [0.0, 0.0]]).S, [1, 0])


def test_svd_reconstructs_and_is_deterministic(rng):
    m = rand_complex(rng, 7, 4)
    u, s, vh = svd(m)
    assert np.linalg.norm((u * s) @ vh - m) < 1e-13
    again = svd(m)
    assert np.array_equal(again.U, u) and np.array_equal(again.S, s)


def test_svd_empty():
    u, s, vh = svd(np.zeros((3, 0)), full_matrices=True)
    assert u.shape == (3, 3) and s.size == 0 and vh.shape == (0, 0)


def test_numerical_rank_examples():
    assert numerical_rank(np.eye(3)) == 3
    assert numerical_rank(np.diag([1.0, 1e-16])) == 1
    assert numerical_rank([[1.0, 2.0], [3.0, 6.0]]) == 1


def test_pinv_examples():
    assert np.allclose(pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))
    assert np.allclose(pinv(np.eye(3)), np.eye(3))
    expected = np.array([[1.0, 3.0], [2.0, 6.0]]) / 50.0
    assert np.linalg.norm(pinv([[1.0, 2.0], [3.0, 6.0]]) - expected) < 1e-15


def test_gamma_examples():
    assert gamma(np.diag([3.0, 0.0])) == pytest.approx(3.0)
    assert gamma(np.eye(5)) == pytest.approx(1.0)
    assert gamma(np.zeros((3, 3))) == float("inf")


def test_gamma_truncated_diagonal_operator():
    # compressions x_3/3, x_4, x_5/5, ... of the diagonal operator at n = 8
    diag = [1, 1, 1 / 3, 1, 1 / 5, 1, 1 / 7, 1]
    assert gamma(np.diag(diag)) == pytest.approx(1 / 7)


def test_operator_norm_examples():
    assert operator_norm(np.diag([2.0, 1.0])) == pytest.approx(2.0)
    assert operator_norm(np.zeros((2, 3))) == 0.0
    assert operator_norm([[0.0, 5.0], [0.0, 0.0]]) == pytest.approx(5.0)
    assert operator_norm(np.zeros((0, 0))) == 0.0


def test_threshold_scales_with_sigma_max():
    tol = TolPolicy()
    assert threshold(np.array([1e6, 1.0]), tol) == pytest.approx(1e-4)
    assert threshold(np.array([1e-20]), tol) == tol.abs_floor
    assert threshold(np.array([1.0]), tol, scale=1e4) == pytest.approx(1e-6)


def test_rank_invariant_under_global_rescaling(rng):
    m = rand_low_rank(rng, 9, 7, 3)
    assert {numerical_rank(c * m) for c in (1e-8, 1.0, 1e8)} == {3}


@pytest.mark.parametrize("bad", [[1.0, 2.0], [[np.nan, 1.0]], [[np.inf]], "abc", [[1, 2], [3]]])
def test_as_mat_rejects(bad):
    with pytest.raises(InvalidInput):
        as_mat(bad)


@pytest.mark.parametrize("field", ["rank_rtol", "eq_rtol", "abs_floor"])
def test_tol_policy_validates(field):
    with pytest.raises(InvalidInput, match=field):
        TolPolicy(**{field: -1.0})


def test_penrose_residuals_random(rng):
    worst = 0.0
    for i in range(500):
        rows, cols = rng.integers(1, 41, size=2)
        if i % 2:
            m = rand_low_rank(rng, rows, cols, int(rng.integers(0, min(rows, cols) + 1)))
        else:
            m = rand_complex(rng, rows, cols)
        p = pinv(m)
        scale = 1.0 + operator_norm(m)
        res = max(
            operator_norm(m @ p @ m - m),
            operator_norm(p @ m @ p - p),
            operator_norm(adjoint(m @ p) - m @ p),
            operator_norm(adjoint(p @ m) - p @ m),
        )
        worst = max(worst, res / scale)
    assert worst <= DEFAULT_TOL.eq_rtol


def test_gamma_times_pinv_norm_is_one(rng):
    for _ in range(100):
        rows, cols = rng.integers(1, 20, size=2)
        m = rand_low_rank(rng, rows, cols, int(rng.integers(1, min(rows, cols) + 1)))
        assert gamma(m) * operator_norm(pinv(m)) == pytest.approx(1.0, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 12), st.integers(0, 2**32 - 1))
def test_rank_unitarily_invariant(rows, cols, rank, seed):
    rng = np.random.default_rng(seed)
    rank = min(rank, rows, cols)
    m = rand_low_rank(rng, rows, cols, rank) if rank else np.zeros((rows, cols))
    rotated = rand_unitary(rng, rows) @ m @ rand_unitary(rng, cols)
    assert numerical_rank(m) == numerical_rank(rotated) == rank
