import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shorted.errors import InvalidInput
from shorted.subspaces import (
    Subspace,
    complement,
    coordinate,
    equals,
    from_spanning,
    full,
    includes,
    intersect,
    null_of,
    preimage,
    projector,
    range_of,
    subspace_sum,
    zero,
)

from conftest import T_2X2, rand_low_rank, rand_subspace

SQ2 = np.sqrt(2.0)


def span(*cols):
    return from_spanning(np.array(cols, dtype=float).T)


def test_subspace_validates_orthonormality():
    with pytest.raises(InvalidInput, match="orthonormal"):
        Subspace(np.array([[1.0], [1.0]]))
    with pytest.raises(InvalidInput):
        Subspace(np.eye(2, 3))


def test_subspace_does_not_touch_caller_array():
    b = np.eye(3)[:, :2]
    s = Subspace(b)
    assert b.flags.writeable
    assert not s.basis.flags.writeable


def test_from_spanning_examples():
    assert span([1, 0, 0], [2, 0, 0]).dim == 1
    assert from_spanning(np.zeros((4, 0))).dim == 0
    assert span([1, 2], [2, 4.0000000001]).dim == 1


def test_complement_examples():
    assert equals(complement(span([1, 0])), span([0, 1]))[0]
    assert complement(full(3)).dim == 0
    assert equals(complement(span([1, 2])), span([2, -1]))[0]


def test_includes_examples():
    assert includes(coordinate(2, [0, 1]), coordinate(2, [0])) == (True, 0.0)
    ok, defect = includes(coordinate(3, [0, 1]), coordinate(3, [2]))
    assert not ok and defect == pytest.approx(1.0)
    ok, defect = includes(coordinate(2, [0]), span([1, 1]))
    assert not ok and defect == pytest.approx(1 / SQ2)


def test_intersect_examples():
    e = lambda *i: coordinate(3, i)  # noqa: E731
    assert equals(intersect(e(0, 1), e(1, 2)), e(1))[0]
    s = e(0, 2)
    assert equals(intersect(s, s), s)[0]
    assert equals(intersect(span([1, 1, 0]), e(0, 1)), span([1, 1, 0]))[0]


def test_sum_examples():
    assert equals(subspace_sum(coordinate(2, [0]), coordinate(2, [1])), full(2))[0]
    s = span([1, 2, 3])
    assert equals(subspace_sum(s, zero(3)), s)[0]
    assert subspace_sum(span([1, 1]), span([1, -1])).dim == 2


def test_range_and_null_examples():
    assert equals(range_of(T_2X2), span([1, 3]))[0]
    assert null_of(np.eye(3)).dim == 0
    assert equals(null_of([[0.0, 1.0], [0.0, 0.0]]), coordinate(2, [0]))[0]


def test_preimage_examples():
    s = span([1, 2, 0])
    assert equals(preimage(np.eye(3), s), s)[0]
    assert preimage(np.zeros((3, 3)), s).dim == 3
    assert equals(preimage(T_2X2, coordinate(2, [1])), span([2, -1]))[0]


def test_projector_examples():
    assert np.allclose(projector(coordinate(2, [0])), np.diag([1, 0]))
    assert np.allclose(projector(full(3)), np.eye(3))
    assert np.allclose(projector(span([1, 1])), 0.5 * np.ones((2, 2)))


def test_ambient_mismatch():
    with pytest.raises(InvalidInput, match="ambient"):
        includes(full(2), full(3))
    with pytest.raises(InvalidInput):
        preimage(np.eye(3), full(2))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 10), st.data())
def test_sum_intersection_lattice(ambient, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    k1 = data.draw(st.integers(0, ambient))
    k2 = data.draw(st.integers(0, ambient))
    s1, s2 = rand_subspace(rng, ambient, k1), rand_subspace(rng, ambient, k2)
    total, common = subspace_sum(s1, s2), intersect(s1, s2)
    ok, defect = includes(total, s1)
    assert ok and defect <= 1e-10
    ok, defect = includes(s1, common)
    assert ok and defect <= 1e-10
    assert common.dim + total.dim == k1 + k2


def test_dimension_formula_with_shared_directions(rng):
    # generic random pairs rarely intersect; build pairs that do
    for _ in range(500):
        n = int(rng.integers(2, 12))
        shared = int(rng.integers(0, n // 2 + 1))
        k1 = int(rng.integers(shared, n + 1))
        k2 = int(rng.integers(shared, n - (k1 - shared) + 1))
        q = rand_subspace(rng, n, n).basis
        s1 = Subspace(q[:, :k1])
        s2 = Subspace(np.hstack([q[:, :shared], q[:, k1 : k1 + k2 - shared]]))
        assert intersect(s1, s2).dim + subspace_sum(s1, s2).dim == k1 + k2
        assert intersect(s1, s2).dim == shared


def test_complement_projector_and_involution(rng):
    for k in range(6):
        s = rand_subspace(rng, 5, k)
        c = complement(s)
        assert c.dim == 5 - k
        assert np.linalg.norm(projector(c) - (np.eye(5) - projector(s))) <= 1e-11
        assert equals(complement(c), s)[0]
        p = projector(s)
        assert np.linalg.norm(p @ p - p) <= 1e-12 and np.linalg.norm(p - p.conj().T) <= 1e-12


def test_preimage_of_full_and_zero(rng):
    for _ in range(20):
        t = rand_low_rank(rng, 6, 5, int(rng.integers(0, 6)))
        assert preimage(t, full(6)).dim == 5
        ok, defect = equals(preimage(t, zero(6)), null_of(t))
        assert ok and defect <= 1e-10


def test_range_null_dimensions(rng):
    for _ in range(50):
        rows, cols = rng.integers(1, 10, size=2)
        t = rand_low_rank(rng, rows, cols, int(rng.integers(0, min(rows, cols) + 1)))
        assert range_of(t).dim + null_of(t).dim == cols
