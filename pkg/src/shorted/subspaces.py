"""Closed subspaces of a finite-dimensional Hilbert space.

A subspace is stored as an orthonormal basis (columns). Bases are not unique,
so two subspaces are compared by mutual inclusion (:func:`equals`), never
entrywise.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .numerics import DEFAULT_TOL, adjoint, as_mat, operator_norm, svd, threshold

__all__ = [
    "Subspace",
    "from_spanning",
    "zero",
    "full",
    "coordinate",
    "complement",
    "includes",
    "equals",
    "intersect",
    "subspace_sum",
    "range_of",
    "null_of",
    "preimage",
    "projector",
]

_ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal basis of a subspace of ``C^ambient``; ``basis`` is ``ambient x k``."""

    basis: np.ndarray

    def __post_init__(self):
        b = as_mat(self.basis, "subspace basis").copy()
        k = b.shape[1]
        if k > b.shape[0]:
            raise InvalidInput(f"subspace basis has {k} columns in ambient dimension {b.shape[0]}")
        if k and np.linalg.norm(adjoint(b) @ b - np.eye(k), 2) > _ORTHO_TOL:
            raise InvalidInput("subspace basis columns are not orthonormal")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def ambient(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


def _check_same_ambient(s1, s2):
    if s1.ambient != s2.ambient:
        raise InvalidInput(f"ambient dimension mismatch: {s1.ambient} vs {s2.ambient}")


def zero(ambient):
    return Subspace(np.zeros((ambient, 0), dtype=np.complex128))


def full(ambient):
    return Subspace(np.eye(ambient, dtype=np.complex128))


def coordinate(ambient, indices):
    """Span of the standard basis vectors ``e_i`` for ``i`` in ``indices`` (0-based), in order."""
    eye = np.eye(ambient, dtype=np.complex128)
    return Subspace(eye[:, list(indices)])


def from_spanning(vectors, tol=DEFAULT_TOL, scale=None):
    """Orthonormal basis of the column span of ``vectors``."""
    v = as_mat(vectors, "spanning vectors")
    U, S, _ = svd(v)
    r = int(np.count_nonzero(S > threshold(S, tol, scale)))
    return Subspace(U[:, :r].copy())


def null_of(m, tol=DEFAULT_TOL, scale=None):
    """Nullspace: right singular vectors at or below the rank threshold."""
    m = as_mat(m)
    _, S, Vh = svd(m, full_matrices=True)
    r = int(np.count_nonzero(S > threshold(S, tol, scale)))
    return Subspace(adjoint(Vh[r:]).copy())


def range_of(m, tol=DEFAULT_TOL, scale=None):
    """Range: left singular vectors above the rank threshold."""
    return from_spanning(m, tol, scale)


def complement(s):
    """Orthogonal complement, of dimension ``ambient - dim``."""
    if s.dim == 0:
        return full(s.ambient)
    U, _, _ = svd(s.basis, full_matrices=True)
    return Subspace(U[:, s.dim :].copy())


def projector(s):
    return s.basis @ adjoint(s.basis)


def includes(outer, inner, tol=DEFAULT_TOL):
    """Test ``inner ⊆ outer``; the defect is ``|(I - P_outer) basis_inner|_2``."""
    _check_same_ambient(outer, inner)
    if inner.dim == 0:
        return True, 0.0
    residual = inner.basis - outer.basis @ (adjoint(outer.basis) @ inner.basis)
    defect = operator_norm(residual)
    return defect <= tol.eq_rtol, defect


def equals(s1, s2, tol=DEFAULT_TOL):
    """Subspace equality as mutual inclusion; returns ``(bool, max defect)``."""
    ok1, d1 = includes(s1, s2, tol)
    ok2, d2 = includes(s2, s1, tol)
    return ok1 and ok2, max(d1, d2)


def subspace_sum(s1, s2, tol=DEFAULT_TOL):
    _check_same_ambient(s1, s2)
    return from_spanning(np.hstack([s1.basis, s2.basis]), tol)


def intersect(s1, s2, tol=DEFAULT_TOL):
    """``s1 ∩ s2 = (s1⊥ + s2⊥)⊥``: one rank decision on the stacked complements."""
    _check_same_ambient(s1, s2)
    return complement(subspace_sum(complement(s1), complement(s2), tol))


def preimage(t, s, tol=DEFAULT_TOL):
    """``T^{-1}(S) = {x : Tx ∈ S} = N(P_{S⊥} T)``."""
    t = as_mat(t)
    if t.shape[0] != s.ambient:
        raise InvalidInput(f"operator has {t.shape[0]} rows but subspace ambient is {s.ambient}")
    residual_map = t - s.basis @ (adjoint(s.basis) @ t)
    return null_of(residual_map, tol, scale=operator_norm(t))
