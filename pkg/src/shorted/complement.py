"""Complementability, Douglas reduced solutions and Schur complements.

For ``T = [[A, B], [C, D]]`` relative to ``(M, N)`` the operator is
complementable iff ``R(C) ⊆ R(D)`` and ``R(B*) ⊆ R(D*)``. Its Schur complement
(bilateral shorted operator) is ``diag(A - B D⁺ C, 0)``, and four independent
formulas for the compressed block are provided as routes:

* ``right``: ``A - B Z`` with ``Z`` the reduced solution of ``C = D Z``
* ``left``:  ``A - Y C`` with ``Y`` the reduced solution of ``B = Y D``
* ``pinv``:  ``A - B D⁺ C``
* ``polar``: ``A - E* F`` from the polar decomposition ``D = U |D|``, with
  ``F`` solving ``C = |D*|^{1/2} U X`` and ``E`` solving ``B* = |D|^{1/2} X``.

All rank decisions inside this module are scaled by ``|T|`` so that rounding
noise in a block is not mistaken for structure.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .blockdecomp import assemble, decompose, embed
from .errors import IllPosedSchur, InvalidInput, NotComplementable, RangeInclusionFailed
from .numerics import DEFAULT_TOL, adjoint, as_mat, gamma, operator_norm, pinv, svd, threshold
from .subspaces import (
    Subspace,
    complement,
    equals,
    includes,
    intersect,
    null_of,
    preimage,
    projector,
    range_of,
    subspace_sum,
)

__all__ = [
    "Verdict",
    "Route",
    "ComplementabilityReport",
    "SchurResult",
    "ProbeResult",
    "BallBoundReport",
    "StructureReport",
    "ComplementingResult",
    "block_scale",
    "check_complementable",
    "require_complementable",
    "douglas_solve",
    "schur",
    "schur_candidates",
    "singleton_probe",
    "ball_bound",
    "complementing_subspace",
    "complementable_pair",
    "verify_structure",
]


class Verdict(str, Enum):
    COMPLEMENTABLE = "Complementable"
    NOT_COMPLEMENTABLE = "NotComplementable"
    ILL_POSED = "IllPosedSchur"


class Route(str, Enum):
    RIGHT = "right"
    LEFT = "left"
    PINV = "pinv"
    POLAR = "polar"


@dataclass(frozen=True)
class ComplementabilityReport:
    rc_in_rd: bool
    rc_in_rd_defect: float
    rbstar_in_rdstar: bool
    rbstar_in_rdstar_defect: float
    nd_in_nb: bool
    nd_in_nb_defect: float
    weakly_coincides: bool
    verdict: Verdict


@dataclass(frozen=True, eq=False)
class SchurResult:
    route: Route
    compressed: np.ndarray
    ambient: np.ndarray
    z: np.ndarray = None
    y: np.ndarray = None
    e: np.ndarray = None
    f: np.ndarray = None
    u_polar: np.ndarray = None


@dataclass(frozen=True, eq=False)
class ProbeResult:
    """Outcome of a singleton probe: ``kind`` is ``Point``, ``NotSingleton`` or ``Empty``."""

    kind: str
    z: np.ndarray = None
    residual: float = 0.0
    spread: float = 0.0


@dataclass(frozen=True)
class BallBoundReport:
    lambda_star: float
    thm34_bound_right: float
    lambda_star_left: float
    thm34_bound_left: float
    holds: bool


@dataclass(frozen=True)
class StructureReport:
    range_identity: bool
    range_defect: float
    null_identity: bool
    null_defect: float
    factorization_residual: float
    idempotent: bool
    idempotent_defect: float
    adjoint_duality: bool
    adjoint_defect: float


@dataclass(frozen=True, eq=False)
class ComplementingResult:
    m: Subspace
    schur_check: float
    report: ComplementabilityReport


def block_scale(blk):
    """``|T|`` computed from the blocks (the bases are unitary)."""
    return operator_norm(assemble(blk.a, blk.b, blk.c, blk.d))


def _sqrt_modulus(u, s, r):
    """``U_r diag(sqrt(s_r)) U_r*``: ``|D*|^{1/2}`` from left factors, ``|D|^{1/2}`` from right."""
    return (u[:, :r] * np.sqrt(s[:r])) @ adjoint(u[:, :r])


def check_complementable(blk, tol=DEFAULT_TOL, interior=None):
    """Range-inclusion test for complementability.

    ``interior`` restricts the domains of ``C`` and ``B*`` to the leading
    ``interior`` coordinates of the stored M and N bases. Truncated shift
    operators use this to keep the truncation boundary out of the test.
    """
    scale = block_scale(blk)
    c, bstar = blk.c, adjoint(blk.b)
    if interior is not None:
        c, bstar = c[:, :interior], bstar[:, :interior]

    rd = range_of(blk.d, tol, scale)
    rdstar = range_of(adjoint(blk.d), tol, scale)
    rc_ok, rc_def = includes(rd, range_of(c, tol, scale), tol)
    rb_ok, rb_def = includes(rdstar, range_of(bstar, tol, scale), tol)
    nd_ok, nd_def = includes(null_of(blk.b, tol, scale), null_of(blk.d, tol, scale), tol)

    # weak complementability: |D*|^{1/2} and |D|^{1/2} in place of D and D*
    U, S, Vh = svd(blk.d)
    r = int(np.count_nonzero(S > threshold(S, tol, scale)))
    root_scale = np.sqrt(scale)
    weak_rc, _ = includes(range_of(_sqrt_modulus(U, S, r), tol, root_scale), range_of(c, tol, scale), tol)
    weak_rb, _ = includes(
        range_of(_sqrt_modulus(adjoint(Vh), S, r), tol, root_scale), range_of(bstar, tol, scale), tol
    )

    if rc_ok and rb_ok:
        verdict = Verdict.COMPLEMENTABLE
    elif rc_ok and not nd_ok:
        verdict = Verdict.ILL_POSED
    else:
        verdict = Verdict.NOT_COMPLEMENTABLE
    return ComplementabilityReport(
        rc_in_rd=rc_ok,
        rc_in_rd_defect=rc_def,
        rbstar_in_rdstar=rb_ok,
        rbstar_in_rdstar_defect=rb_def,
        nd_in_nb=nd_ok,
        nd_in_nb_defect=nd_def,
        weakly_coincides=(weak_rc == rc_ok and weak_rb == rb_ok),
        verdict=verdict,
    )


def douglas_solve(dmat, cmat, tol=DEFAULT_TOL, check=True):
    """Reduced solution ``Z = D⁺ C`` of ``C = D Z``.

    ``Z`` has range in ``N(D)⊥`` and the least operator norm among all
    solutions. Raises RangeInclusionFailed when ``R(C) ⊄ R(D)``.
    """
    dmat, cmat = as_mat(dmat, "D"), as_mat(cmat, "C")
    if dmat.shape[0] != cmat.shape[0]:
        raise InvalidInput(f"D has {dmat.shape[0]} rows but C has {cmat.shape[0]}")
    z = pinv(dmat, tol) @ cmat
    if check:
        residual = operator_norm(dmat @ z - cmat)
        if residual > tol.eq_rtol * (1.0 + operator_norm(cmat)):
            raise RangeInclusionFailed(residual)
    return z


def require_complementable(blk, tol=DEFAULT_TOL, interior=None):
    """Return the complementability report, raising when the verdict is negative."""
    report = check_complementable(blk, tol, interior)
    if report.verdict is Verdict.ILL_POSED:
        raise IllPosedSchur(report=report)
    if report.verdict is not Verdict.COMPLEMENTABLE:
        raise NotComplementable(report=report)
    return report


def _polar_factors(blk, tol, check):
    """``(A - E* F, E, F, U)`` from the polar decomposition ``D = U |D|``."""
    U, S, Vh = svd(blk.d)
    r = int(np.count_nonzero(S > threshold(S, tol)))
    # partial isometry: zero on N(D), maps R(|D|) onto R(D)
    u_polar = U[:, :r] @ Vh[:r]
    root_abs_dstar = _sqrt_modulus(U, S, r)
    root_abs_d = _sqrt_modulus(adjoint(Vh), S, r)
    f = douglas_solve(root_abs_dstar @ u_polar, blk.c, tol, check)
    e = douglas_solve(root_abs_d, adjoint(blk.b), tol, check)
    return blk.a - adjoint(e) @ f, e, f, u_polar


def schur(blk, route=Route.PINV, tol=DEFAULT_TOL, unsafe=False, interior=None):
    """Schur complement of ``T`` relative to ``(M, N)``.

    Full complementability is enforced unless ``unsafe`` is set, in which case
    the chosen formula is evaluated as is (used to exhibit pathologies).
    """
    route = Route(route)
    if not unsafe:
        require_complementable(blk, tol, interior)
    check = not unsafe
    z = y = e = f = u_polar = None
    if route is Route.RIGHT:
        z = douglas_solve(blk.d, blk.c, tol, check)
        compressed = blk.a - blk.b @ z
    elif route is Route.LEFT:
        y = adjoint(douglas_solve(adjoint(blk.d), adjoint(blk.b), tol, check))
        compressed = blk.a - y @ blk.c
    elif route is Route.PINV:
        dp = pinv(blk.d, tol)
        z, y = dp @ blk.c, blk.b @ dp
        compressed = blk.a - blk.b @ z
    else:
        compressed, e, f, u_polar = _polar_factors(blk, tol, check)
    return SchurResult(route, compressed, _embed_compressed(blk, compressed), z, y, e, f, u_polar)


def _embed_compressed(blk, compressed):
    dn, dm = compressed.shape
    padded = np.zeros((blk.n.ambient, blk.m.ambient), dtype=np.complex128)
    padded[:dn, :dm] = compressed
    return embed(blk, padded)


def schur_candidates(blk, tol=DEFAULT_TOL, w=None):
    """Two formally valid complements ``A - B Z`` and ``A - B (Z + W)``.

    ``W`` must satisfy ``D W = 0``; by default it is ``n ⊗ e_1`` where ``n`` is
    the unit kernel vector of ``D`` that ``B`` stretches most. When
    ``N(D) ⊄ N(B)`` the two candidates differ, which is exactly the
    non-uniqueness that makes the Schur complement ill-posed.
    """
    z = pinv(blk.d, tol) @ blk.c
    if w is None:
        kernel = null_of(blk.d, tol, block_scale(blk))
        w = np.zeros_like(z)
        if kernel.dim and z.shape[1]:
            _, _, vh = svd(blk.b @ kernel.basis)
            w[:, 0] = kernel.basis @ np.conj(vh[0])
    else:
        w = as_mat(w, "W")
        if operator_norm(blk.d @ w) > tol.eq_rtol * (1.0 + operator_norm(w)):
            raise InvalidInput("W must have its columns in N(D)")
    first = blk.a - blk.b @ z
    second = blk.a - blk.b @ (z + w)
    return _embed_compressed(blk, first), _embed_compressed(blk, second)


def singleton_probe(blk, x, k_trials=8, tol=DEFAULT_TOL, seed=0):
    """Probe ``{T(x, 0) + T(M⊥)} ∩ N`` for a vector ``x ∈ M`` (ambient coordinates).

    Solves ``C x + D y = 0`` in the least-squares sense; if that fails the
    intersection is Empty. Otherwise the solution set is perturbed along
    random kernel directions of ``D``: if ``A x + B y`` moves, the
    intersection is not a singleton. Deterministic for a fixed ``seed``.
    """
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.shape[0] != blk.m.ambient:
        raise InvalidInput(f"x has length {x.shape[0]}, expected {blk.m.ambient}")
    xm = adjoint(blk.m.basis) @ x
    if np.linalg.norm(x - blk.m.basis @ xm) > tol.eq_rtol * (1.0 + np.linalg.norm(x)):
        raise InvalidInput("x is not in M")
    cx = blk.c @ xm
    y = -(pinv(blk.d, tol) @ cx)
    residual = float(np.linalg.norm(cx + blk.d @ y))
    if residual > tol.eq_rtol * (1.0 + np.linalg.norm(cx)):
        return ProbeResult("Empty", residual=residual)

    kernel = null_of(blk.d, tol, block_scale(blk))
    spread = 0.0
    if kernel.dim:
        rng = np.random.default_rng(seed)
        for _ in range(k_trials):
            coef = rng.standard_normal(kernel.dim) + 1j * rng.standard_normal(kernel.dim)
            w = kernel.basis @ (coef / np.linalg.norm(coef))
            spread = max(spread, float(np.linalg.norm(blk.b @ w)))
    if spread > tol.eq_rtol * (1.0 + operator_norm(blk.b)):
        return ProbeResult("NotSingleton", residual=residual, spread=spread)
    z = blk.n.basis @ (blk.a @ xm + blk.b @ y)
    return ProbeResult("Point", z=z, residual=residual, spread=spread)


def _norm_over_gamma(norm, g):
    # γ = inf only for a zero D, where complementability forces the numerator to vanish
    if norm == 0.0:
        return 0.0
    return norm / g


def ball_bound(blk, tol=DEFAULT_TOL):
    """Compare the least ball-inclusion constant ``|Z|`` with ``|C| / γ(D)``, and
    its left counterpart ``|(B D⁺)*|`` with ``|B*| / γ(D*)``."""
    require_complementable(blk, tol)
    z = douglas_solve(blk.d, blk.c, tol)
    y = adjoint(douglas_solve(adjoint(blk.d), adjoint(blk.b), tol))
    lam = operator_norm(z)
    lam_left = operator_norm(adjoint(y))
    bound = _norm_over_gamma(operator_norm(blk.c), gamma(blk.d, tol))
    bound_left = _norm_over_gamma(operator_norm(adjoint(blk.b)), gamma(adjoint(blk.d), tol))
    slack = 1.0 + 1e-10
    return BallBoundReport(
        lambda_star=lam,
        thm34_bound_right=bound,
        lambda_star_left=lam_left,
        thm34_bound_left=bound_left,
        holds=bool(lam <= bound * slack and lam_left <= bound_left * slack),
    )


def complementing_subspace(t, n, tol=DEFAULT_TOL):
    """``M = (T^{-1}(N⊥))⊥`` together with a check that ``T/(M,N) = P_N T P_M``.

    By construction ``T(M⊥) ⊆ N⊥``, so the ``B`` block vanishes and every
    Schur formula reduces to ``A``; ``schur_check`` measures the distance to
    ``P_N T P_M`` relative to ``1 + |T|``. Full complementability additionally
    needs ``R(C) ⊆ R(D)``, which holds when ``N⊥ ⊆ R(T)`` (e.g. surjective
    ``T``) but can fail otherwise; ``report`` records the outcome.
    """
    t = as_mat(t, "T")
    m = complement(preimage(t, complement(n), tol))
    blk = decompose(t, m, n)
    report = check_complementable(blk, tol)
    result = schur(blk, Route.PINV, tol, unsafe=True)
    target = projector(n) @ t @ projector(m)
    schur_check = operator_norm(result.ambient - target) / (1.0 + operator_norm(t))
    return ComplementingResult(m, schur_check, report)


def complementable_pair(t, tol=DEFAULT_TOL):
    """Subspaces ``(M, N)`` of codimension one with ``T`` always ``(M, N)``-complementable.

    ``M⊥`` and ``N⊥`` are spanned by the top right and left singular vectors,
    so ``D`` is the nonzero scalar ``sigma_max`` (or ``T = 0``, where every
    block vanishes).
    """
    t = as_mat(t, "T")
    U, _, Vh = svd(t, full_matrices=True)
    m = Subspace(adjoint(Vh)[:, 1:].copy())
    n = Subspace(U[:, 1:].copy())
    return m, n


def verify_structure(t, m, n, tol=DEFAULT_TOL):
    """Range and nullspace identities, triangular factorization, idempotence
    and adjoint duality of the Schur complement."""
    t = as_mat(t, "T")
    blk = decompose(t, m, n)
    require_complementable(blk, tol)
    scale = operator_norm(t)
    rel = 1.0 + scale
    res = schur(blk, Route.PINV, tol)

    range_ok, range_def = equals(
        range_of(res.ambient, tol, scale), intersect(range_of(t, tol, scale), n, tol), tol
    )
    null_ok, null_def = equals(
        null_of(res.ambient, tol, scale), subspace_sum(blk.mperp, null_of(t, tol, scale), tol), tol
    )

    z = douglas_solve(blk.d, blk.c, tol)
    y = adjoint(douglas_solve(adjoint(blk.d), adjoint(blk.b), tol))
    dn, dnp, dm, dmp = blk.n.dim, blk.nperp.dim, blk.m.dim, blk.mperp.dim
    p = assemble(np.eye(dn), y, np.zeros((dnp, dn)), np.eye(dnp))
    u = assemble(res.compressed, np.zeros((dn, dmp)), np.zeros((dnp, dm)), blk.d)
    q = assemble(np.eye(dm), np.zeros((dm, dmp)), z, np.eye(dmp))
    fact = operator_norm(t - embed(blk, p @ u @ q))
    fact = fact / scale if scale > 0 else fact

    again = schur(decompose(res.ambient, m, n, blk.mperp, blk.nperp), Route.PINV, tol)
    idem_def = operator_norm(again.ambient - res.ambient) / rel

    dual = schur(decompose(adjoint(t), n, m), Route.PINV, tol)
    adj_def = operator_norm(dual.ambient - adjoint(res.ambient)) / rel

    return StructureReport(
        range_identity=range_ok,
        range_defect=range_def,
        null_identity=null_ok,
        null_defect=null_def,
        factorization_residual=fact,
        idempotent=idem_def <= tol.eq_rtol,
        idempotent_defect=idem_def,
        adjoint_duality=adj_def <= tol.eq_rtol,
        adjoint_defect=adj_def,
    )
