import pytest

from shorted.properties import case_params, run_case, run_suite
from shorted.corpus import RANDOM_KINDS


def test_case_params_deterministic_and_bounded():
    for i in range(100):
        p = case_params(0, i, 20)
        assert p == case_params(0, i, 20)
        assert 4 <= p.dom_dim <= 20 and 4 <= p.cod_dim <= 20
        assert p.kind == RANDOM_KINDS[i % len(RANDOM_KINDS)]
        assert 0 <= p.rank_d <= min(p.dom_dim - p.dim_m, p.cod_dim - p.dim_n)
    with pytest.raises(ValueError):
        case_params(0, 0, 3)


def test_every_kind_passes_every_check():
    for i in range(10):
        out = run_case(case_params(1, i, 16))
        assert out.passed, out.failures()
        assert {"route_agreement", "block_pinv", "probe"} <= out.checks.keys()


def test_suite_order_and_summary():
    outcomes, summary = run_suite(7, 12, seed=2)
    assert [o.params.index for o in outcomes] == list(range(7))
    assert summary.ok and summary.cases == 7
    assert all(v["failed"] == 0 for v in summary.check_counts.values())
