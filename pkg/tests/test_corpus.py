import time

import numpy as np
import pytest

from shorted.complement import Route, Verdict, schur
from shorted.corpus import (
    EXAMPLES,
    RANDOM_KINDS,
    limit_verdict,
    make_example,
    random_complementable,
)
from shorted.errors import InvalidInput
from shorted.numerics import gamma, operator_norm

FINITE_VERDICT = {
    "nonclosed_pairs": Verdict.COMPLEMENTABLE,
}


def action_error(case, route=Route.PINV):
    res = schur(case.block(), route, interior=case.expected.check_interior)
    rows = case.expected.interior_rows
    worst = 0.0
    for j in range(case.dim):
        x = np.zeros(case.dim)
        x[j] = 1.0
        x = case.m.basis @ (case.m.basis.conj().T @ x)
        worst = max(worst, np.max(np.abs((res.ambient @ x - case.expected.schur_action(x))[rows])))
    return worst


@pytest.mark.parametrize("dim", [16, 64])
@pytest.mark.parametrize("name", sorted(set(EXAMPLES) - {"ex5_shift"}))
def test_examples_match_closed_forms(name, dim):
    case = make_example(name, dim)
    assert case.check().verdict is FINITE_VERDICT.get(name, case.expected.verdict)
    for route in Route:
        assert action_error(case, route) <= 1e-10


@pytest.mark.parametrize("dim", [16, 64])
def test_shift_example_verdict(dim):
    case = make_example("ex5_shift", dim)
    assert case.check().verdict is Verdict.ILL_POSED


def test_spot_values():
    e = np.eye(64)
    case = make_example("eqgm_banded", 64)
    out = schur(case.block()).ambient @ e[0]
    assert out[0] == pytest.approx(-2.0) and np.allclose(out[1:60], 0)

    e16 = np.eye(16)
    case = make_example("ex3_rank", 16)
    assert np.allclose(schur(case.block()).ambient @ e16[0], e16[0])
    case = make_example("ex4_rank", 16)
    assert np.allclose(schur(case.block()).ambient @ e16[1], -e16[1])


def test_ex1_literal_pairs():
    # pair k >= 2 of the displayed formula: ½·(4/(2k))·x_{2k-1} in both slots
    case = make_example("ex1_diag", 32)
    s = schur(case.block()).ambient
    for k in range(2, 17):
        x = np.zeros(32)
        x[2 * k - 2] = x[2 * k - 1] = 1.0
        out = s @ x
        literal = 0.5 * 4.0 / (2 * k)
        assert out[2 * k - 2] == pytest.approx(literal) and out[2 * k - 1] == pytest.approx(literal)
        assert np.linalg.norm(np.delete(out, [2 * k - 2, 2 * k - 1])) < 1e-12


def test_ex1_first_pair_follows_the_blocks():
    # on the first pair A is the identity and B = C = 0, so T/ keeps (x_1, x_1)
    case = make_example("ex1_diag", 16)
    blk = case.block()
    assert blk.a[0, 0] == pytest.approx(1.0)
    assert np.allclose(blk.b[0], 0) and np.allclose(blk.c[:, 0], 0)
    x = np.zeros(16)
    x[:2] = 1.0
    assert np.allclose(schur(blk).ambient @ x, x)


def test_ex1_gamma_halves():
    gammas = []
    for dim in (16, 32, 64):
        case = make_example("ex1_diag", dim)
        g = gamma(schur(case.block()).compressed)
        assert g == pytest.approx(case.expected.extra["schur_gamma"])
        gammas.append(g)
    for g0, g1 in zip(gammas, gammas[1:]):
        assert 0.4 <= g1 / g0 <= 0.6


def test_ex4_literal_variant_is_complementable_but_different():
    a, b = make_example("ex4_rank", 16), make_example("ex4_rank_literal", 16)
    assert a.check().verdict is b.check().verdict is Verdict.COMPLEMENTABLE
    assert not np.allclose(a.t, b.t)


def test_limit_verdicts():
    for name, fn in EXAMPLES.items():
        diag = limit_verdict(name)
        assert diag.verdict is make_example(name, 16).expected.verdict, name
    diag = limit_verdict("nonclosed_pairs")
    assert diag.finite_verdicts == (Verdict.COMPLEMENTABLE,) * 3
    assert diag.z_norms[2] / diag.z_norms[0] == pytest.approx(4.0, rel=0.1)


def test_make_example_errors():
    with pytest.raises(InvalidInput, match="unknown"):
        make_example("nope", 16)
    with pytest.raises(InvalidInput):
        make_example("eqgm_banded", 6)
    with pytest.raises(InvalidInput):
        make_example("ex1_diag", 17)


def test_corpus_is_fast():
    start = time.perf_counter()
    for name in EXAMPLES:
        for dim in (16, 64):
            action_error(make_example(name, dim)) if name != "ex5_shift" else make_example(name, dim).check()
    assert time.perf_counter() - start < 5.0


@pytest.mark.parametrize("kind", RANDOM_KINDS)
def test_random_generator_kinds(kind):
    for seed in range(20):
        case = random_complementable(12, 12, 5, 5, 3, seed, kind=kind)
        assert case.check().verdict is Verdict.COMPLEMENTABLE
        assert case.expected.extra["kind"] == kind


def test_random_generator_always_complementable():
    rng = np.random.default_rng(99)
    for seed in range(1000):
        dom, cod = (int(x) for x in rng.integers(2, 16, size=2))
        dm, dn = int(rng.integers(0, dom + 1)), int(rng.integers(0, cod + 1))
        rank = int(rng.integers(0, min(dom - dm, cod - dn) + 1))
        case = random_complementable(dom, cod, dm, dn, rank, seed)
        assert case.check().verdict is Verdict.COMPLEMENTABLE


def test_random_generator_deterministic():
    a = random_complementable(10, 8, 4, 3, 2, seed=42)
    b = random_complementable(10, 8, 4, 3, 2, seed=42)
    assert np.array_equal(a.t, b.t)


def test_random_generator_rank_extremes():
    case = random_complementable(8, 8, 3, 3, 0, seed=1)
    blk = case.block()
    assert operator_norm(blk.b) < 1e-12 and operator_norm(blk.c) < 1e-12
    assert np.allclose(schur(blk).compressed, blk.a)
    case = random_complementable(8, 8, 3, 3, 5, seed=1)
    blk = case.block()
    assert np.allclose(schur(blk).compressed, blk.a - blk.b @ np.linalg.inv(blk.d) @ blk.c)


@pytest.mark.parametrize(
    "args",
    [(5, 5, 6, 2, 0), (5, 5, 2, 2, 4), (5, 5, -1, 2, 0)],
)
def test_random_generator_rejects_inconsistent_dims(args):
    with pytest.raises(InvalidInput):
        random_complementable(*args, seed=0)


def test_random_generator_rejects_unknown_kind():
    with pytest.raises(InvalidInput, match="kind"):
        random_complementable(6, 6, 2, 2, 1, 0, kind="weird")
