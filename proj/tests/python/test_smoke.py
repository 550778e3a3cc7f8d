import math

import pytest

rootldpc = pytest.importorskip("rootldpc")


def test_construct_and_diversity():
    code = rootldpc.build_root_regular(64, 1)
    assert code.n == 64
    assert len(code.info_columns()) == 32
    assert rootldpc.is_ml_full_diversity(code.h, 2)
    small = rootldpc.build_root_regular(32, 1)
    res = rootldpc.diversity_analysis(small.h, 2)
    assert res.d == 2


def test_alist_round_trip():
    h = rootldpc.random_regular_ldpc(48, 3, 6, 7)
    again = rootldpc.read_alist(h.alist())
    assert again == h
    assert rootldpc.rank(h) <= 24


def test_outage_consistency():
    quad = rootldpc.outage_probability_quadrature(10.0)
    p, lo, hi = rootldpc.outage_probability(10.0, samples=200000, seed=3)
    assert quad > 0
    assert abs(p - quad) / quad < 0.1
    assert lo <= p <= hi


def test_capacity_point():
    eb = rootldpc.bpsk_capacity_ebn0(0.5)
    assert math.isclose(10 * math.log10(eb), 0.1871, abs_tol=5e-3)


def test_simulate_wer_deterministic():
    code = rootldpc.build_root_regular(64, 2)
    info = code.info_columns()
    a = rootldpc.simulate_wer(code.h, info, [8.0], min_errors=20, max_trials=20000, seed=5)
    b = rootldpc.simulate_wer(code.h, info, [8.0], min_errors=20, max_trials=20000, seed=5)
    assert a[0].trials == b[0].trials
    assert a[0].word_errors == b[0].word_errors
    assert a[0].wer > 0


def test_degree_distribution_and_fractions():
    dd = rootldpc.DegreeDistribution.regular(3, 6)
    fe, ge = rootldpc.multiedge_fraction(dd)
    assert math.isclose(fe, 0.4, abs_tol=1e-12)
    irr = rootldpc.DegreeDistribution.irregular_half_rate()
    assert math.isclose(irr.design_rate(), 0.5, abs_tol=1e-3)


def test_analysis_functions():
    loss, order = rootldpc.chi2_coding_loss_db(0.75)
    assert math.isclose(loss, 0.625, abs_tol=0.01)
    assert order == 2
    assert math.isclose(rootldpc.g_function(1.0, 1.0, 0.3), 0.5, abs_tol=1e-6)
    assert math.isclose(rootldpc.chi2_cdf(50.0, 0.6), 1.0, abs_tol=1e-9)
