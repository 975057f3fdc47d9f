import numpy as np
import pytest

from shorted.blockdecomp import decompose
from shorted.corpus import make_example, random_complementable
from shorted.epclass import block_pinv, ep_equivalence_report, is_ep, is_hypo_ep
from shorted.errors import HypothesisFailed, InvalidInput, NotComplementable
from shorted.numerics import operator_norm, pinv
from shorted.properties import penrose_residuals
from shorted.subspaces import coordinate

from conftest import rand_complex, rand_low_rank, rand_unitary

E1 = coordinate(2, [0])
NILPOTENT = np.array([[0.0, 1.0], [0.0, 0.0]])


def test_is_ep_examples(rng):
    assert is_ep(rand_unitary(rng, 5))[0]
    ok, defect = is_ep(NILPOTENT)
    assert not ok and defect == pytest.approx(1.0)
    case = make_example("ex3_rank", 32)
    assert not is_ep(case.t)[0]


def test_is_hypo_ep_examples(rng):
    h = rand_complex(rng, 4, 4)
    assert is_hypo_ep(h + h.conj().T)[0]
    assert not is_hypo_ep(NILPOTENT)[0]
    assert is_hypo_ep(make_example("hypoep_sum", 32).t)[0]


def test_non_square_rejected():
    with pytest.raises(InvalidInput, match="square"):
        is_ep(np.ones((2, 3)))
    with pytest.raises(InvalidInput, match="square"):
        is_hypo_ep(np.ones((3, 2)))


def test_ep_equals_hypo_ep_on_matrices(rng):
    # in finite dimensions rank T = rank T*, so the one-sided inclusion is an equality
    for _ in range(500):
        n = int(rng.integers(1, 9))
        r = int(rng.integers(0, n + 1))
        t = rand_low_rank(rng, n, n, r) if r else np.zeros((n, n))
        if rng.random() < 0.3:
            q = rand_unitary(rng, n)
            t = q @ np.diag(rng.standard_normal(n) * (rng.random(n) < 0.7)) @ q.conj().T
        assert is_ep(t)[0] == is_hypo_ep(t)[0]


def test_block_pinv_block_diagonal(rng):
    a, d = rand_low_rank(rng, 3, 3, 2), rand_low_rank(rng, 2, 2, 1)
    t = np.zeros((5, 5), dtype=complex)
    t[:3, :3], t[3:, 3:] = a, d
    m = coordinate(5, range(3))
    x = block_pinv(decompose(t, m, m))
    expected = np.zeros((5, 5), dtype=complex)
    expected[:3, :3], expected[3:, 3:] = pinv(a), pinv(d)
    assert np.allclose(x, expected)


def test_block_pinv_two_by_two_inverse():
    t = np.array([[1.0, 2.0], [3.0, 7.0]])
    x = block_pinv(decompose(t, E1, E1))
    assert np.allclose(x, [[7.0, -2.0], [-3.0, 1.0]])


def test_block_pinv_hypotheses_and_penrose():
    for seed in range(30):
        case = random_complementable(12, 11, 5, 4, 3, seed, kind="pinv_hyp")
        x = block_pinv(case.block())
        ref = pinv(case.t)
        assert operator_norm(x - ref) <= 1e-8 * operator_norm(ref)
        assert max(penrose_residuals(case.t, x)) <= 1e-9


@pytest.mark.parametrize("kind, which", [("violate_c", "R(C*) ⊆ R(S*)"), ("violate_b", "R(B) ⊆ R(S)")])
def test_block_pinv_violations(kind, which):
    for seed in range(20):
        case = random_complementable(12, 11, 5, 4, 3, seed, kind=kind)
        with pytest.raises(HypothesisFailed) as info:
            block_pinv(case.block())
        assert info.value.which == which and info.value.defect > 1e-6


def test_block_pinv_not_complementable():
    with pytest.raises(NotComplementable):
        block_pinv(decompose(np.array([[1.0, 0.0], [1.0, 0.0]]), E1, E1))


def test_ep_report_on_hypoep_example():
    case = make_example("hypoep_sum", 32)
    rep = ep_equivalence_report(case.t, case.m, case.n)
    for key, value in case.expected.ep_facts.items():
        assert getattr(rep, key) is value, key


@pytest.mark.parametrize("name", ["ex3_rank", "ex4_rank"])
def test_ep_report_negative_examples(name):
    case = make_example(name, 32)
    rep = ep_equivalence_report(case.t, case.m, case.n)
    for key, value in case.expected.ep_facts.items():
        assert getattr(rep, key) is value, key
    assert not rep.rcstar_in_rschurstar
    assert rep.unconditional_holds


def test_ex3_shows_hypothesis_is_needed():
    # S and D are hypo-EP, yet T is not: without R(C*) ⊆ R(S*) the
    # equivalence breaks down
    rep = ep_equivalence_report(*(lambda c: (c.t, c.m, c.n))(make_example("ex3_rank", 16)))
    assert rep.schur_is_hypo_ep and rep.d_is_hypo_ep and rep.rb_in_rschur
    assert not rep.t_is_hypo_ep


def test_ep_report_random_consistency():
    for seed in range(40):
        kind = ("generic", "hermitian", "pinv_hyp", "violate_c", "violate_b")[seed % 5]
        case = random_complementable(10, 10, 4, 4, 3, seed, kind=kind)
        rep = ep_equivalence_report(case.t, case.m, case.n)
        assert rep.equivalences_consistent and rep.unconditional_holds
        if kind == "hermitian":
            assert rep.t_is_ep and rep.schur_is_hypo_ep
        if kind == "pinv_hyp":
            # the equivalences are exercised, not vacuously true
            assert rep.rcstar_in_rschurstar and rep.rb_in_rschur


def test_ep_report_needs_same_space(rng):
    with pytest.raises(InvalidInput):
        ep_equivalence_report(np.eye(3), coordinate(3, [0]), coordinate(2, [0]))
