"""Dense matrix kernels: SVD, pseudoinverse, numerical rank, norms and the
reduced minimum modulus.

Every operator in the package is a complex128 ``numpy`` array. Adjoint means
conjugate transpose throughout.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidInput

__all__ = [
    "TolPolicy",
    "DEFAULT_TOL",
    "SvdFactors",
    "as_mat",
    "adjoint",
    "svd",
    "threshold",
    "numerical_rank",
    "pinv",
    "gamma",
    "operator_norm",
]


@dataclass(frozen=True)
class TolPolicy:
    """Tolerances shared by every rank and equality decision.

    The rank threshold of a matrix ``M`` is
    ``max(rank_rtol * sigma_max(M), abs_floor)``; scaling it with the largest
    singular value keeps rank decisions stable under global rescaling.
    """

    rank_rtol: float = 1e-10
    eq_rtol: float = 1e-9
    abs_floor: float = 1e-13

    def __post_init__(self):
        for name in ("rank_rtol", "eq_rtol", "abs_floor"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidInput(f"{name} must be a positive finite number, got {value!r}")


DEFAULT_TOL = TolPolicy()


class SvdFactors(NamedTuple):
    U: np.ndarray
    S: np.ndarray
    Vh: np.ndarray


def as_mat(m, name="matrix"):
    """Return ``m`` as a finite 2-D complex128 array, raising InvalidInput otherwise."""
    try:
        arr = np.asarray(m, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name}: cannot convert to a complex matrix ({exc})") from exc
    if arr.ndim != 2:
        raise InvalidInput(f"{name}: expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: entries must be finite")
    return arr


def adjoint(m):
    return np.conj(m).T


def svd(m, full_matrices=False):
    """Singular value decomposition ``m = U @ diag(S) @ Vh``.

    LAPACK's divide-and-conquer driver (Golub-Kahan bidiagonalization
    underneath); deterministic for identical input. Empty matrices are
    handled explicitly.
    """
    m = as_mat(m)
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        U = np.eye(rows, dtype=np.complex128)[:, : (rows if full_matrices else 0)]
        Vh = np.eye(cols, dtype=np.complex128)[: (cols if full_matrices else 0), :]
        return SvdFactors(U, np.zeros(0), Vh)
    U, S, Vh = np.linalg.svd(m, full_matrices=full_matrices)
    return SvdFactors(U, S, Vh)


def threshold(s, tol=DEFAULT_TOL, scale=None):
    """Rank cut-off for singular values ``s``.

    ``scale`` overrides ``sigma_max`` as the reference magnitude, which callers
    use when the matrix is a product whose natural scale is a factor's norm.
    """
    ref = scale if scale is not None else (float(s[0]) if len(s) else 0.0)
    return max(tol.rank_rtol * ref, tol.abs_floor)


def numerical_rank(m, tol=DEFAULT_TOL):
    s = svd(m).S
    return int(np.count_nonzero(s > threshold(s, tol)))


def pinv(m, tol=DEFAULT_TOL):
    """Moore-Penrose pseudoinverse by SVD truncation at the rank threshold."""
    U, S, Vh = svd(m)
    r = int(np.count_nonzero(S > threshold(S, tol)))
    return (adjoint(Vh[:r]) / S[:r]) @ adjoint(U[:, :r])


def gamma(m, tol=DEFAULT_TOL):
    """Reduced minimum modulus ``inf{|Tx| : x ⊥ N(T), |x| = 1}``.

    Realized as the smallest singular value above the rank threshold. The zero
    matrix has no admissible ``x`` and gets ``+inf`` (empty infimum); callers
    comparing bounds must guard that case.
    """
    S = svd(m).S
    kept = S[S > threshold(S, tol)]
    return float(kept[-1]) if kept.size else float("inf")


def operator_norm(m):
    S = svd(m).S
    return float(S[0]) if S.size else 0.0
