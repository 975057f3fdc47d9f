"""Labeled test operators: finite truncations of the classical ℓ₂ examples and
a seeded generator of engineered complementable operators.

Coordinate formulas below are written with 1-based indices ``x_1, x_2, ...``
as is customary for sequences; arrays are 0-based. Terms that fall outside
the truncation are dropped, so shift-like operators are exact only away from
the last few coordinates. ``Expected.interior_rows`` lists the rows on which a
truncated Schur action is compared with its ℓ₂ closed form.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .blockdecomp import decompose
from .complement import Verdict, check_complementable, douglas_solve
from .errors import InvalidInput
from .numerics import DEFAULT_TOL, adjoint, operator_norm
from .subspaces import Subspace, coordinate

__all__ = [
    "Expected",
    "LabeledCase",
    "EXAMPLES",
    "make_example",
    "LimitDiagnostic",
    "limit_verdict",
    "RANDOM_KINDS",
    "random_complementable",
]

INTERIOR_MARGIN = 4


@dataclass(frozen=True, eq=False)
class Expected:
    verdict: Verdict
    schur_action: Optional[Callable] = None
    ep_facts: dict = field(default_factory=dict)
    interior_margin: int = INTERIOR_MARGIN
    interior_rows: Optional[np.ndarray] = None
    # leading M/N coordinates passed to check_complementable(interior=...)
    check_interior: Optional[int] = None
    # verdict describes the ℓ₂ operator and is decided by limit_verdict
    limit: bool = False
    schur_ambient: Optional[np.ndarray] = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class LabeledCase:
    name: str
    dim: int
    t: np.ndarray
    m: Subspace
    n: Subspace
    expected: Expected
    mperp: Optional[Subspace] = None
    nperp: Optional[Subspace] = None

    def block(self):
        return decompose(self.t, self.m, self.n, self.mperp, self.nperp)

    def check(self, tol=DEFAULT_TOL):
        return check_complementable(self.block(), tol, self.expected.check_interior)


def _rows(dim, margin, copies=1):
    k = dim // copies
    return np.concatenate([np.arange(c * k, c * k + k - margin) for c in range(copies)])


def _pad(x, extra=4):
    return np.concatenate([np.asarray(x, dtype=np.complex128), np.zeros(extra)])


def _eqgm_banded(dim):
    # odd p: row p = x_{p+2} + x_{p+1} - x_p ; row p+1 = x_p / p + x_{p+1}
    t = np.zeros((dim, dim))
    for p in range(1, dim + 1, 2):
        i = p - 1
        t[i, i] = -1.0
        if p < dim:
            t[i, p] = 1.0
            t[p, i] = 1.0 / p
            t[p, p] = 1.0
        if p + 1 < dim:
            t[i, p + 1] = 1.0

    def action(x):
        xp, out = _pad(x), np.zeros(dim, dtype=np.complex128)
        for p in range(1, dim + 1, 2):
            out[p - 1] = xp[p + 1] - (1.0 + 1.0 / p) * xp[p - 1]
        return out

    m = coordinate(dim, range(0, dim, 2))
    mperp = coordinate(dim, range(1, dim, 2))
    exp = Expected(Verdict.COMPLEMENTABLE, action, interior_rows=_rows(dim, INTERIOR_MARGIN))
    return LabeledCase("eqgm_banded", dim, t, m, m, exp, mperp, mperp)


def _nonclosed_pairs(dim):
    # rows 2k-1 and 2k both equal x_{2k-1} + x_{2k} / (2k)
    t = np.zeros((dim, dim))
    for k in range(1, dim // 2 + 1):
        for row in (2 * k - 2, 2 * k - 1):
            t[row, 2 * k - 2] = 1.0
            t[row, 2 * k - 1] = 1.0 / (2 * k)
    m = coordinate(dim, range(0, dim, 2))
    mperp = coordinate(dim, range(1, dim, 2))
    exp = Expected(
        Verdict.NOT_COMPLEMENTABLE,
        lambda x: np.zeros(dim, dtype=np.complex128),
        interior_margin=0,
        interior_rows=_rows(dim, 0),
        limit=True,
        extra={"finite_verdict": Verdict.COMPLEMENTABLE, "probe_point": np.zeros(dim)},
    )
    return LabeledCase("nonclosed_pairs", dim, t, m, m, exp, mperp, mperp)


def _ex5_shift(dim):
    # ℓ₂ ⊕ ℓ₂ with A = (0, x_1, x_2/2, ...), B = I, C = diag(1/j), D = backward shift
    k = dim // 2
    a = np.zeros((k, k))
    for c in range(k - 1):
        a[c + 1, c] = 1.0 / (c + 1)
    b = np.eye(k)
    c_ = np.diag(1.0 / np.arange(1, k + 1))
    d = np.eye(k, k, 1)
    t = np.block([[a, b], [c_, d]])
    z1 = a.copy()
    z2 = z1.copy()
    z2[0, 0] = 1.0
    first = np.zeros((k, k))
    second = np.zeros((k, k))
    second[0, 0] = -1.0
    m = coordinate(dim, range(k))
    mperp = coordinate(dim, range(k, dim))
    exp = Expected(
        Verdict.ILL_POSED,
        interior_rows=_rows(dim, INTERIOR_MARGIN, copies=2),
        check_interior=k - INTERIOR_MARGIN,
        extra={"z_candidates": (z1, z2), "schur_candidates": (first, second)},
    )
    return LabeledCase("ex5_shift", dim, t, m, m, exp, mperp, mperp)


def _ex6_band(dim):
    # T = tridiagonal ones: (x_1 + x_2, x_1 + x_2 + x_3, x_2 + x_3 + x_4, ...)
    t = np.eye(dim) + np.eye(dim, k=1) + np.eye(dim, k=-1)

    def action(x):
        xp, out = _pad(x), np.zeros(dim, dtype=np.complex128)
        out[1] = xp[2]
        for i in range(2, dim):
            out[i] = xp[i - 1] + xp[i] + xp[i + 1]
        return out

    m = coordinate(dim, range(1, dim))
    mperp = coordinate(dim, [0])
    exp = Expected(Verdict.COMPLEMENTABLE, action, interior_rows=_rows(dim, INTERIOR_MARGIN))
    return LabeledCase("ex6_band", dim, t, m, m, exp, mperp, mperp)


def _ex1_diag(dim):
    # T = (x_1, x_2, x_3/3, x_4, x_5/5, x_6, ...), M = {(x_1, x_1, x_3, x_3, ...)}
    diag = np.ones(dim)
    for p in range(3, dim + 1, 2):
        diag[p - 1] = 1.0 / p
    t = np.diag(diag)
    pairs = dim // 2
    plus = np.zeros((dim, pairs))
    minus = np.zeros((dim, pairs))
    for k in range(pairs):
        plus[2 * k, k] = plus[2 * k + 1, k] = 1.0 / np.sqrt(2.0)
        minus[2 * k, k], minus[2 * k + 1, k] = 1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0)

    def action(x):
        # pair k carries (x_{2k-1} + x_{2k}) / (2k) in both slots
        x = np.asarray(x, dtype=np.complex128)
        vals = (x[0::2] + x[1::2]) / (2.0 * np.arange(1, pairs + 1))
        return np.repeat(vals, 2)

    m, mperp = Subspace(plus), Subspace(minus)
    exp = Expected(
        Verdict.COMPLEMENTABLE, action, interior_margin=0, interior_rows=_rows(dim, 0),
        extra={"schur_gamma": 2.0 / dim},
    )
    return LabeledCase("ex1_diag", dim, t, m, m, exp, mperp, mperp)


def _tail_identity(dim, top):
    t = np.eye(dim)
    t[:4, :4] = top
    return t


def _ex3_rank(dim):
    # (x_1+x_2+x_3+x_4, 0, x_2+x_3+x_4, x_2+x_3+x_4, x_5, x_6, ...)
    top = np.array([[1, 1, 1, 1], [0, 0, 0, 0], [0, 1, 1, 1], [0, 1, 1, 1]], dtype=float)

    def action(x):
        out = np.zeros(dim, dtype=np.complex128)
        out[0] = x[0]
        return out

    m, mperp = coordinate(dim, [0, 1]), coordinate(dim, range(2, dim))
    facts = {
        "t_is_hypo_ep": False,
        "t_is_ep": False,
        "schur_is_hypo_ep": True,
        "d_is_hypo_ep": True,
        "rcstar_in_rschurstar": False,
    }
    exp = Expected(Verdict.COMPLEMENTABLE, action, facts, 0, _rows(dim, 0))
    return LabeledCase("ex3_rank", dim, _tail_identity(dim, top), m, m, exp, mperp, mperp)


def _ex4_action(dim):
    def action(x):
        out = np.zeros(dim, dtype=np.complex128)
        out[1] = -x[1]
        return out

    return action


_EX4_FACTS = {
    "t_is_hypo_ep": True,
    "t_is_ep": True,
    "schur_is_hypo_ep": True,
    "d_is_hypo_ep": True,
    "aug_lower_is_hypo_ep": False,
    "aug_upper_is_hypo_ep": False,
    "rb_in_rschur": False,
    "rcstar_in_rschurstar": False,
}


def _ex4_rank(dim):
    # (x_1+x_2+x_3+x_4, x_1+x_3+x_4, x_1+x_2+x_3+x_4, x_1+x_2+x_3+x_4, x_5, ...)
    top = np.array([[1, 1, 1, 1], [1, 0, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1]], dtype=float)
    m, mperp = coordinate(dim, [0, 1]), coordinate(dim, range(2, dim))
    exp = Expected(Verdict.COMPLEMENTABLE, _ex4_action(dim), dict(_EX4_FACTS), 0, _rows(dim, 0))
    return LabeledCase("ex4_rank", dim, _tail_identity(dim, top), m, m, exp, mperp, mperp)


def _ex4_rank_literal(dim):
    # same blocks, but D's first row read as (x_4 + x_4) instead of (x_3 + x_4)
    top = np.array([[1, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 2], [1, 1, 1, 1]], dtype=float)
    m, mperp = coordinate(dim, [0, 1]), coordinate(dim, range(2, dim))
    exp = Expected(Verdict.COMPLEMENTABLE, _ex4_action(dim), {}, 0, _rows(dim, 0))
    return LabeledCase("ex4_rank_literal", dim, _tail_identity(dim, top), m, m, exp, mperp, mperp)


def _hypoep_sum(dim):
    # ((x_1, x_1 + x_2/2 + y_1, x_2 + 2x_3/3 + y_2, ...) ⊕ (0, x_1 + y_1, x_2 + y_2, ...))
    # The forward shifts are closed periodically so that the truncation keeps the
    # injectivity (and hence the hypo-EP property) of the ℓ₂ operator.
    k = dim // 2
    shift = np.roll(np.eye(k), 1, axis=0)
    delta = np.array([1.0] + [(j - 1) / j for j in range(2, k + 1)])
    a = shift + np.diag(delta)
    t = np.block([[a, shift], [shift, shift]])

    def action(x):
        out = np.zeros(dim, dtype=np.complex128)
        out[:k] = delta * np.asarray(x)[:k]
        return out

    facts = {
        "t_is_hypo_ep": True,
        "t_is_ep": True,
        "schur_is_hypo_ep": True,
        "d_is_hypo_ep": True,
        "aug_lower_is_hypo_ep": True,
        "aug_upper_is_hypo_ep": True,
        "rb_in_rschur": True,
        "rcstar_in_rschurstar": True,
        "equivalences_consistent": True,
    }
    m, mperp = coordinate(dim, range(k)), coordinate(dim, range(k, dim))
    exp = Expected(Verdict.COMPLEMENTABLE, action, facts, 0, _rows(dim, 0, copies=2))
    return LabeledCase("hypoep_sum", dim, t, m, m, exp, mperp, mperp)


EXAMPLES = {
    "eqgm_banded": _eqgm_banded,
    "nonclosed_pairs": _nonclosed_pairs,
    "ex5_shift": _ex5_shift,
    "ex6_band": _ex6_band,
    "ex1_diag": _ex1_diag,
    "ex3_rank": _ex3_rank,
    "ex4_rank": _ex4_rank,
    "ex4_rank_literal": _ex4_rank_literal,
    "hypoep_sum": _hypoep_sum,
}

_PAIRED = {"eqgm_banded", "nonclosed_pairs", "ex5_shift", "ex1_diag", "hypoep_sum"}


def make_example(name, dim):
    """Truncate the named ℓ₂ example to ``dim`` coordinates (total, over both
    summands for the ℓ₂ ⊕ ℓ₂ examples)."""
    if name not in EXAMPLES:
        raise InvalidInput(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}")
    if dim < 8:
        raise InvalidInput(f"dim must be at least 8, got {dim}")
    if name in _PAIRED and dim % 2:
        raise InvalidInput(f"{name} needs an even dim, got {dim}")
    return EXAMPLES[name](int(dim))


@dataclass(frozen=True)
class LimitDiagnostic:
    verdict: Verdict
    dims: tuple
    finite_verdicts: tuple
    z_norms: tuple
    y_norms: tuple
    growth: float


def limit_verdict(name, dims=(16, 32, 64), tol=DEFAULT_TOL, min_growth=0.5):
    """Complementability of the ℓ₂ operator judged from a sequence of truncations.

    Every truncation of a bounded operator has closed ranges, so a finite test
    can only fail through a genuine range defect. When all truncations pass,
    the ℓ₂ inclusion ``R(C) ⊆ R(D)`` (or its adjoint form) can still fail: the
    reduced Douglas solutions then have no bounded limit. That shows up as
    ``|Z_n|`` or ``|Y_n|`` growing like ``n^p``; a growth exponent of at least
    ``min_growth`` between every pair of consecutive dims is read as unbounded.
    """
    dims = tuple(sorted(dims))
    verdicts, zs, ys = [], [], []
    for dim in dims:
        case = make_example(name, dim)
        blk = case.block()
        verdicts.append(check_complementable(blk, tol, case.expected.check_interior).verdict)
        zs.append(operator_norm(douglas_solve(blk.d, blk.c, tol, check=False)))
        ys.append(operator_norm(douglas_solve(adjoint(blk.d), adjoint(blk.b), tol, check=False)))
    growth = max(_growth(zs, dims), _growth(ys, dims))
    if verdicts[-1] is not Verdict.COMPLEMENTABLE:
        verdict = verdicts[-1]
    elif len(dims) > 1 and growth >= min_growth:
        verdict = Verdict.NOT_COMPLEMENTABLE
    else:
        verdict = Verdict.COMPLEMENTABLE
    return LimitDiagnostic(verdict, dims, tuple(verdicts), tuple(zs), tuple(ys), growth)


def _growth(norms, dims):
    """Smallest log-log slope of ``norms`` against ``dims`` over consecutive pairs."""
    if len(dims) < 2:
        return 0.0
    slopes = []
    for (d0, n0), (d1, n1) in zip(zip(dims, norms), zip(dims[1:], norms[1:])):
        if n0 <= 0 or n1 <= 0:
            slopes.append(0.0)
        else:
            slopes.append(np.log(n1 / n0) / np.log(d1 / d0))
    return float(min(slopes))


# ---------------------------------------------------------------------------
# random engineered cases

RANDOM_KINDS = ("generic", "hermitian", "pinv_hyp", "violate_c", "violate_b")


def _gaussian(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def _unitary(rng, n):
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    q, r = np.linalg.qr(_gaussian(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _low_rank(rng, rows, cols, rank, lo=0.5, hi=2.0):
    """``rows x cols`` matrix of exact rank ``rank`` with singular values in ``[lo, hi]``;
    also returns its pseudoinverse."""
    u = _unitary(rng, rows)[:, :rank]
    v = _unitary(rng, cols)[:, :rank]
    s = rng.uniform(lo, hi, rank)
    return (u * s) @ adjoint(v), (v / s) @ adjoint(u)


def random_complementable(dom_dim, cod_dim, dim_m, dim_n, rank_d, seed, kind="generic", schur_rank=None):
    """Seeded complementable operator with hidden block structure.

    ``D`` gets rank ``rank_d``; ``C = D Z0`` and ``B = Y0 D`` enforce both range
    inclusions; the blocks are then rotated by random unitaries. ``kind``
    selects extra structure:

    ``generic``      random ``A``
    ``hermitian``    ``T = T*`` (so ``T`` is EP); needs square ``T`` and ``dim_m = dim_n``
    ``pinv_hyp``     ``S`` of rank ``schur_rank`` with ``R(C*) ⊆ R(S*)`` and ``R(B) ⊆ R(S)``
    ``violate_c``    as ``pinv_hyp`` but with ``R(C*) ⊄ R(S*)``
    ``violate_b``    as ``pinv_hyp`` but with ``R(B) ⊄ R(S)``

    The exact Schur complement is known from the construction and stored in
    ``expected.schur_ambient``.
    """
    dmp, dnp = dom_dim - dim_m, cod_dim - dim_n
    if min(dom_dim, cod_dim) < 1 or dmp < 0 or dnp < 0 or min(dim_m, dim_n) < 0:
        raise InvalidInput("subspace dimensions must lie between 0 and the ambient dimension")
    if not 0 <= rank_d <= min(dmp, dnp):
        raise InvalidInput(f"rank_d={rank_d} exceeds min(dim M⊥, dim N⊥) = {min(dmp, dnp)}")
    if kind not in RANDOM_KINDS:
        raise InvalidInput(f"unknown kind {kind!r}; choose from {RANDOM_KINDS}")
    rng = np.random.default_rng(seed)
    d, d_pinv = _low_rank(rng, dnp, dmp, rank_d)

    if kind == "hermitian":
        if dom_dim != cod_dim or dim_m != dim_n:
            raise InvalidInput("hermitian cases need a square T with dim M = dim N")
        q = _unitary(rng, dmp)[:, :rank_d]
        d = (q * (rng.uniform(0.5, 2.0, rank_d) * rng.choice([-1.0, 1.0], rank_d))) @ adjoint(q)
        z0 = _gaussian(rng, dmp, dim_m)
        c = d @ z0
        b = adjoint(c)
        g = _gaussian(rng, dim_n, dim_m)
        a = (g + adjoint(g)) / 2.0
        s = a - adjoint(z0) @ d @ z0
    elif kind == "generic":
        z0, y0 = _gaussian(rng, dmp, dim_m), _gaussian(rng, dim_n, dnp)
        c, b = d @ z0, y0 @ d
        a = _gaussian(rng, dim_n, dim_m)
        s = a - y0 @ d @ z0
    else:
        full_rank = min(dim_m, dim_n)
        if schur_rank is None:
            schur_rank = min(max(full_rank - 1, 1), full_rank)
        if kind == "violate_c" and not (schur_rank < dim_m and rank_d > 0):
            raise InvalidInput("violate_c needs schur_rank < dim M and rank_d > 0")
        if kind == "violate_b" and not (schur_rank < dim_n and rank_d > 0):
            raise InvalidInput("violate_b needs schur_rank < dim N and rank_d > 0")
        s, _ = _low_rank(rng, dim_n, dim_m, schur_rank)
        # Z0 = K S and Y0 = S L put R(C*) in R(S*) and R(B) in R(S)
        z0 = _gaussian(rng, dmp, dim_n) @ s if kind != "violate_c" else _gaussian(rng, dmp, dim_m)
        y0 = s @ _gaussian(rng, dim_m, dnp) if kind != "violate_b" else _gaussian(rng, dim_n, dnp)
        c, b = d @ z0, y0 @ d
        a = s + y0 @ d @ d_pinv @ d @ z0

    qd = _unitary(rng, dom_dim)
    qc = qd if kind == "hermitian" else _unitary(rng, cod_dim)
    t = qc @ np.block([[a, b], [c, d]]) @ adjoint(qd)
    if kind == "hermitian":
        t = (t + adjoint(t)) / 2.0
    m, mperp = Subspace(qd[:, :dim_m]), Subspace(qd[:, dim_m:])
    n, nperp = Subspace(qc[:, :dim_n]), Subspace(qc[:, dim_n:])
    schur_ambient = qc[:, :dim_n] @ s @ adjoint(qd[:, :dim_m])
    exp = Expected(
        Verdict.COMPLEMENTABLE,
        schur_action=lambda x: schur_ambient @ x,
        interior_margin=0,
        interior_rows=np.arange(cod_dim),
        schur_ambient=schur_ambient,
        extra={"kind": kind, "rank_d": rank_d},
    )
    case = LabeledCase(
        f"random-{kind}-{seed}", max(dom_dim, cod_dim), t, m, n, exp, mperp, nperp
    )
    verdict = case.check().verdict
    if verdict is not Verdict.COMPLEMENTABLE:
        raise RuntimeError(f"generator produced a {verdict.value} case (seed {seed}, kind {kind})")
    return case
