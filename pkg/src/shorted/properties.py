"""Seeded property suite behind ``shorted verify``.

Each case draws a random engineered operator and runs every check against
it. A check records ``(passed, measured value)``; the suite summary counts
passes and failures per check. Cases are independent, so they can run in a
process pool; results are always reported in case-index order.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .blockdecomp import decompose
from .complement import (
    Route,
    Verdict,
    ball_bound,
    check_complementable,
    complementing_subspace,
    douglas_solve,
    schur,
    schur_candidates,
    singleton_probe,
    verify_structure,
)
from .corpus import RANDOM_KINDS, random_complementable
from .epclass import block_pinv, ep_equivalence_report
from .errors import HypothesisFailed
from .numerics import DEFAULT_TOL, adjoint, operator_norm, pinv, svd
from .subspaces import equals, null_of

__all__ = ["CaseParams", "CaseOutcome", "SuiteSummary", "case_params", "run_case", "run_suite", "penrose_residuals"]

ROUTE_TOL = 1e-9
Z_INDEP_TOL = 1e-11
DOUGLAS_TOL = 1e-10
ORACLE_TOL = 1e-9
SUBSPACE_TOL = 1e-8
FACTOR_TOL = 1e-11
IDEM_TOL = 1e-10
PROBE_TOL = 1e-9
PINV_REL_TOL = 1e-8
PENROSE_TOL = 1e-9
EXCOMP_TOL = 1e-10
PROBE_DRAWS = 20
MINIMALITY_DRAWS = 50

MIN_DIM = 4


@dataclass(frozen=True)
class CaseParams:
    index: int
    kind: str
    dom_dim: int
    cod_dim: int
    dim_m: int
    dim_n: int
    rank_d: int
    seed: int


@dataclass
class CaseOutcome:
    params: CaseParams
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(ok for ok, _ in self.checks.values())

    def failures(self):
        return {k: v for k, (ok, v) in self.checks.items() if not ok}


@dataclass
class SuiteSummary:
    cases: int
    passed_cases: int
    check_counts: dict
    failures: list

    @property
    def ok(self):
        return self.passed_cases == self.cases


def case_params(seed, index, max_dim):
    """Dimensions and kind of case ``index``; kinds rotate through RANDOM_KINDS."""
    if max_dim < MIN_DIM:
        raise ValueError(f"max_dim must be at least {MIN_DIM}")
    rng = np.random.default_rng([seed, index])
    kind = RANDOM_KINDS[index % len(RANDOM_KINDS)]
    dom = int(rng.integers(MIN_DIM, max_dim + 1))
    square = kind == "hermitian" or rng.random() < 0.5
    cod = dom if square else int(rng.integers(MIN_DIM, max_dim + 1))
    dim_m = int(rng.integers(2, dom - 1))
    dim_n = dim_m if kind == "hermitian" else int(rng.integers(2, cod - 1))
    cap = min(dom - dim_m, cod - dim_n)
    low = 0 if kind in ("generic", "hermitian") else 1
    rank_d = int(rng.integers(low, cap + 1))
    case_seed = int(rng.integers(0, 2**31 - 1))
    return CaseParams(index, kind, dom, cod, dim_m, dim_n, rank_d, case_seed)


def penrose_residuals(t, x):
    """The four Moore-Penrose equations, the first two relative to ``|T|`` and ``|X|``."""
    tn, xn = operator_norm(t), operator_norm(x)
    tx, xt = t @ x, x @ t
    return (
        operator_norm(tx @ t - t) / max(tn, 1e-300),
        operator_norm(xt @ x - x) / max(xn, 1e-300),
        operator_norm(adjoint(tx) - tx),
        operator_norm(adjoint(xt) - xt),
    )


def _routes(blk, tol):
    results = {r: schur(blk, r, tol) for r in Route}
    compressed = [res.compressed for res in results.values()]
    spread = max(operator_norm(p - q) for p in compressed for q in compressed)
    return results, spread / (1.0 + operator_norm(blk.a))


def _douglas_residual(blk, results):
    rel = lambda r, ref: operator_norm(r) / (1.0 + operator_norm(ref))  # noqa: E731
    right, left, polar = results[Route.RIGHT], results[Route.LEFT], results[Route.POLAR]
    return max(
        rel(blk.d @ right.z - blk.c, blk.c),
        rel(left.y @ blk.d - blk.b, blk.b),
        rel(_root_modulus(blk.d) @ polar.u_polar @ polar.f - blk.c, blk.c),
        rel(_root_modulus(adjoint(blk.d)) @ polar.e - adjoint(blk.b), blk.b),
    )


def _root_modulus(m):
    """``|M*|^{1/2} = (M M*)^{1/4}``."""
    u, s, _ = svd(m)
    return (u * np.sqrt(s)) @ adjoint(u)


def _probe(blk, schur_ambient, rng, tol, scale):
    worst = 0.0
    for _ in range(PROBE_DRAWS):
        coef = rng.standard_normal(blk.m.dim) + 1j * rng.standard_normal(blk.m.dim)
        x = blk.m.basis @ (coef / np.linalg.norm(coef))
        res = singleton_probe(blk, x, tol=tol, seed=int(rng.integers(2**31)))
        if res.kind != "Point":
            return False, float("inf")
        worst = max(worst, float(np.linalg.norm(res.z - schur_ambient @ x)) / (1.0 + scale))
    return worst <= PROBE_TOL, worst


def _minimality(blk, z, rng, tol, scale):
    """``Z = D⁺C`` has the least norm among all solutions ``Z + W`` with ``DW = 0``,
    both in operator norm and column by column."""
    kernel = null_of(blk.d, tol, scale)
    if kernel.dim == 0 or z.shape[1] == 0:
        return True, 0.0
    znorm = operator_norm(z)
    cols = np.linalg.norm(z, axis=0)
    worst = 0.0
    for _ in range(MINIMALITY_DRAWS):
        g = rng.standard_normal((kernel.dim, z.shape[1])) + 1j * rng.standard_normal((kernel.dim, z.shape[1]))
        w = kernel.basis @ g
        zw = z + w
        worst = max(worst, znorm - operator_norm(zw), float(np.max(cols - np.linalg.norm(zw, axis=0))))
    slack = 1e-12 * (1.0 + znorm)
    return worst <= slack, worst


def _excomp(cod_dim, n, rng, tol):
    """On an invertible ``T`` the complementing subspace kills ``B`` and makes ``T`` complementable."""
    g = rng.standard_normal((cod_dim, cod_dim)) + 1j * rng.standard_normal((cod_dim, cod_dim))
    t = g + 2.0 * np.sqrt(cod_dim) * np.eye(cod_dim)
    res = complementing_subspace(t, n, tol)
    b_norm = operator_norm(decompose(t, res.m, n).b) / operator_norm(t)
    ok = b_norm <= EXCOMP_TOL and res.schur_check <= EXCOMP_TOL and res.report.verdict is Verdict.COMPLEMENTABLE
    return ok, max(b_norm, res.schur_check)


def _block_pinv_check(case, blk, tol):
    kind = case.expected.extra.get("kind")
    try:
        x = block_pinv(blk, tol)
    except HypothesisFailed as exc:
        if kind == "violate_c":
            return exc.which == "R(C*) ⊆ R(S*)", exc.defect
        if kind == "violate_b":
            return exc.which == "R(B) ⊆ R(S)", exc.defect
        return kind != "pinv_hyp", exc.defect
    if kind in ("violate_c", "violate_b"):
        return False, 0.0
    ref = pinv(case.t, tol)
    rel = operator_norm(x - ref) / max(operator_norm(ref), 1e-300)
    return rel <= PINV_REL_TOL and max(penrose_residuals(case.t, x)) <= PENROSE_TOL, rel


def run_case(params, tol=DEFAULT_TOL):
    p = params
    case = random_complementable(p.dom_dim, p.cod_dim, p.dim_m, p.dim_n, p.rank_d, p.seed, p.kind)
    rng = np.random.default_rng([p.seed, 1])
    blk = case.block()
    scale = operator_norm(case.t)
    out = CaseOutcome(p)
    c = out.checks

    c["complementable"] = (check_complementable(blk, tol).verdict is Verdict.COMPLEMENTABLE, 0.0)
    results, spread = _routes(blk, tol)
    c["route_agreement"] = (spread <= ROUTE_TOL, spread)
    dres = _douglas_residual(blk, results)
    c["douglas_residual"] = (dres <= DOUGLAS_TOL, dres)
    ambient = results[Route.PINV].ambient
    oracle = operator_norm(ambient - case.expected.schur_ambient) / (1.0 + scale)
    c["schur_oracle"] = (oracle <= ORACLE_TOL, oracle)

    st = verify_structure(case.t, case.m, case.n, tol)
    c["range_identity"] = (st.range_defect <= SUBSPACE_TOL, st.range_defect)
    c["null_identity"] = (st.null_defect <= SUBSPACE_TOL, st.null_defect)
    c["factorization"] = (st.factorization_residual <= FACTOR_TOL, st.factorization_residual)
    c["idempotent"] = (st.idempotent_defect <= IDEM_TOL, st.idempotent_defect)
    c["adjoint_duality"] = (st.adjoint_defect <= IDEM_TOL, st.adjoint_defect)

    bb = ball_bound(blk, tol)
    c["ball_bound"] = (bb.holds, bb.lambda_star)
    c["probe"] = _probe(blk, ambient, rng, tol, scale)

    first, second = schur_candidates(blk, tol)
    z_dep = operator_norm(first - second) / (1.0 + scale)
    c["z_independence"] = (z_dep <= Z_INDEP_TOL, z_dep)
    z = douglas_solve(blk.d, blk.c, tol)
    c["douglas_minimality"] = _minimality(blk, z, rng, tol, scale)
    c["null_z_equals_null_c"] = equals(null_of(z, tol, scale), null_of(blk.c, tol, scale), tol)
    c["complementing_subspace"] = _excomp(p.cod_dim, case.n, rng, tol)

    if p.dom_dim == p.cod_dim:
        ep = ep_equivalence_report(case.t, case.m, case.n, tol)
        ok = ep.equivalences_consistent and ep.unconditional_holds
        if p.kind == "hermitian":
            ok = ok and ep.t_is_ep
        c["ep_consistency"] = (ok, ep.t_hypo_ep_defect)
    c["block_pinv"] = _block_pinv_check(case, blk, tol)
    # plain floats keep outcomes picklable and JSON friendly
    out.checks = {k: (bool(ok), float(v)) for k, (ok, v) in c.items()}
    return out


def _run_one(args):
    params, tol = args
    return run_case(params, tol)


def run_suite(n_seeds, max_dim, seed=0, tol=DEFAULT_TOL, jobs=1):
    """Run ``n_seeds`` cases; the outcome list is in case-index order."""
    params = [case_params(seed, i, max_dim) for i in range(n_seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_one, [(p, tol) for p in params], chunksize=4))
    else:
        outcomes = [run_case(p, tol) for p in params]
    return outcomes, summarize(outcomes)


def summarize(outcomes):
    counts = {}
    failures = []
    for o in outcomes:
        for name, (ok, _) in o.checks.items():
            passed, failed = counts.get(name, (0, 0))
            counts[name] = (passed + ok, failed + (not ok))
        if not o.passed:
            failures.append({"index": o.params.index, "kind": o.params.kind, "failed": o.failures()})
    summary_counts = {k: {"passed": v[0], "failed": v[1]} for k, v in counts.items()}
    passed_cases = sum(o.passed for o in outcomes)
    return SuiteSummary(len(outcomes), passed_cases, summary_counts, failures)
