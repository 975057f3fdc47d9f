"""EP and hypo-EP classification, and the block Moore-Penrose inverse.

An operator is EP when ``R(T) = R(T*)`` and hypo-EP when ``R(T) ⊆ R(T*)``
(closed range is automatic in finite dimensions). For square matrices the two
coincide because ``rank T = rank T*``; they are still kept apart here since
their defects differ: the hypo-EP defect is one-sided, the EP defect is the
larger of the two inclusion defects. The strict gap between them only exists
for infinite-dimensional operators and cannot be exhibited on matrices.
"""

from dataclasses import dataclass

import numpy as np

from .blockdecomp import assemble, decompose, embed
from .complement import Route, require_complementable, block_scale, schur
from .errors import HypothesisFailed, InvalidInput
from .numerics import DEFAULT_TOL, adjoint, as_mat, operator_norm, pinv
from .subspaces import includes, range_of

__all__ = ["EPReport", "is_ep", "is_hypo_ep", "block_pinv", "ep_equivalence_report"]


@dataclass(frozen=True)
class EPReport:
    t_is_ep: bool
    t_ep_defect: float
    t_is_hypo_ep: bool
    t_hypo_ep_defect: float
    schur_is_hypo_ep: bool
    d_is_hypo_ep: bool
    rb_in_rschur: bool
    rcstar_in_rschurstar: bool
    aug_lower_is_hypo_ep: bool
    aug_upper_is_hypo_ep: bool
    unconditional_holds: bool
    equivalences_consistent: bool


def _square(t):
    t = as_mat(t, "T")
    if t.shape[0] != t.shape[1]:
        raise InvalidInput(f"EP classification needs a square operator, got shape {t.shape}")
    return t


def is_hypo_ep(t, tol=DEFAULT_TOL, scale=None):
    """``R(T) ⊆ R(T*)``, with defect ``|(I - P_{R(T*)}) P_{R(T)}|``."""
    t = _square(t)
    return includes(range_of(adjoint(t), tol, scale), range_of(t, tol, scale), tol)


def is_ep(t, tol=DEFAULT_TOL, scale=None):
    t = _square(t)
    r, rs = range_of(t, tol, scale), range_of(adjoint(t), tol, scale)
    _, d1 = includes(rs, r, tol)
    _, d2 = includes(r, rs, tol)
    defect = max(d1, d2)
    return defect <= tol.eq_rtol, defect


def _schur_hypotheses(blk, s, tol, scale):
    """``R(C*) ⊆ R(S*)`` and ``R(B) ⊆ R(S)`` for the compressed complement ``S``."""
    c_in = includes(range_of(adjoint(s), tol, scale), range_of(adjoint(blk.c), tol, scale), tol)
    b_in = includes(range_of(s, tol, scale), range_of(blk.b, tol, scale), tol)
    return c_in, b_in


def block_pinv(blk, tol=DEFAULT_TOL):
    """Moore-Penrose inverse of ``T`` assembled from ``S = A - B D⁺ C`` and ``D⁺``::

        T⁺ = [[ S⁺,          -S⁺ B D⁺             ],
              [ -D⁺ C S⁺,    D⁺ + D⁺ C S⁺ B D⁺    ]]

    valid for complementable ``T`` with ``R(C*) ⊆ R(S*)`` and ``R(B) ⊆ R(S)``.
    Returned in ambient coordinates (maps the codomain back to the domain).
    """
    require_complementable(blk, tol)
    scale = block_scale(blk)
    s = schur(blk, Route.PINV, tol).compressed
    (c_ok, c_def), (b_ok, b_def) = _schur_hypotheses(blk, s, tol, scale)
    if not c_ok:
        raise HypothesisFailed("R(C*) ⊆ R(S*)", c_def)
    if not b_ok:
        raise HypothesisFailed("R(B) ⊆ R(S)", b_def)
    sp, dp = pinv(s, tol), pinv(blk.d, tol)
    dcs = dp @ blk.c @ sp
    sbd = sp @ blk.b @ dp
    inv_blocks = assemble(sp, -sbd, -dcs, dp + dcs @ blk.b @ dp)
    return blk.dom_basis @ inv_blocks @ adjoint(blk.cod_basis)


def ep_equivalence_report(t, m, n, tol=DEFAULT_TOL):
    """Hypo-EP status of ``T``, its Schur complement, ``D`` and the two
    augmented operators ``[[S, 0], [C, D]]`` and ``[[S, B], [0, D]]``.

    Under ``R(C*) ⊆ R(S*)`` the three statements

    1. ``T`` is hypo-EP,
    2. ``S`` and ``D`` are hypo-EP and ``R(B) ⊆ R(S)``,
    3. both augmented operators are hypo-EP

    must agree; ``equivalences_consistent`` is vacuously true without the
    hypothesis. ``unconditional_holds`` checks that hypo-EP ``T`` always has a
    hypo-EP Schur complement.
    """
    t = _square(t)
    if m.ambient != n.ambient:
        raise InvalidInput("EP analysis needs M and N in the same space")
    blk = decompose(t, m, n)
    require_complementable(blk, tol)
    scale = operator_norm(t)
    s = schur(blk, Route.PINV, tol).compressed
    zeros = np.zeros_like

    def ambient(a, b, c, d):
        return embed(blk, assemble(a, b, c, d))

    t_ep, t_ep_def = is_ep(t, tol, scale)
    t_hypo, t_hypo_def = is_hypo_ep(t, tol, scale)
    s_hypo, _ = is_hypo_ep(ambient(s, zeros(blk.b), zeros(blk.c), zeros(blk.d)), tol, scale)
    d_hypo, _ = is_hypo_ep(ambient(zeros(blk.a), zeros(blk.b), zeros(blk.c), blk.d), tol, scale)
    lower, _ = is_hypo_ep(ambient(s, zeros(blk.b), blk.c, blk.d), tol, scale)
    upper, _ = is_hypo_ep(ambient(s, blk.b, zeros(blk.c), blk.d), tol, scale)
    (c_ok, _), (b_ok, _) = _schur_hypotheses(blk, s, tol, scale)

    second = s_hypo and d_hypo and b_ok
    third = lower and upper
    consistent = (not c_ok) or (t_hypo == second == third)
    return EPReport(
        t_is_ep=t_ep,
        t_ep_defect=t_ep_def,
        t_is_hypo_ep=t_hypo,
        t_hypo_ep_defect=t_hypo_def,
        schur_is_hypo_ep=s_hypo,
        d_is_hypo_ep=d_hypo,
        rb_in_rschur=b_ok,
        rcstar_in_rschurstar=c_ok,
        aug_lower_is_hypo_ep=lower,
        aug_upper_is_hypo_ep=upper,
        unconditional_holds=(not t_hypo) or s_hypo,
        equivalences_consistent=consistent,
    )
