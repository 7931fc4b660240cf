# -*- coding: utf-8 -*-
import itertools
import math

import numpy as np
import pytest
from scipy import integrate, special
from scipy.stats import chi2

from sistema_geradores.equidist import resolution_table
from sistema_geradores.errors import EntradaInvalida
from sistema_geradores.genlin import CounterSpec, xorshift_spec
from sistema_geradores.lcg import RANDU
from sistema_geradores.specfile import load_spec
from sistema_geradores.stats import (
    chisq_test, gammainc_lower, gammainc_upper, log_equidist_probability, log_fact, log_gamma,
    random_source_equidist_rate, segment_chisq,
)


# ----- log-gamma e gama incompleta -----

@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.5, 2.0, 7.3, 50.0, 1e3, 1e6])
def test_log_gamma_matches_scipy(x):
    assert log_gamma(x) == pytest.approx(special.gammaln(x), abs=1e-10, rel=1e-13)


def test_log_fact_small_values_are_exact():
    assert log_fact(0) == 0.0
    assert log_fact(1) == 0.0
    assert log_fact(4) == pytest.approx(math.log(24), abs=1e-13)


def test_log_gamma_poles():
    with pytest.raises(EntradaInvalida):
        log_gamma(0)
    with pytest.raises(EntradaInvalida):
        log_gamma(-3)


def test_incomplete_gamma_identities_on_grid():
    for a in (0.5, 1, 2.5, 5, 10, 25, 50):
        for x in (0, 0.1, 1, 5, 10, 30, 60, 100, 200):
            p, q = gammainc_lower(a, x), gammainc_upper(a, x)
            assert abs(p + q - 1.0) <= 1e-12
            assert p == pytest.approx(special.gammainc(a, x), abs=1e-10)


def test_incomplete_gamma_rejects_bad_arguments():
    with pytest.raises(EntradaInvalida):
        gammainc_lower(0, 1)
    with pytest.raises(EntradaInvalida):
        gammainc_lower(1, -1)


# ----- χ² -----

def test_chisq_perfect_fit_is_too_good():
    r = chisq_test([10, 10, 10, 10], 10.0)
    assert r.statistic == 0.0 and r.p_lower == 0.0
    assert r.reject(0.01) and r.reject(1e-9)
    assert r.verdict(0.01) == "REJECT (too good)"


def test_chisq_dof1_critical_value():
    # duas células com desvios ±δ: estatística 2δ²/e
    e = 100.0
    desvio = math.sqrt(3.8415 * e / 2)
    r = chisq_test([e + desvio, e - desvio], e)
    assert r.dof == 1
    assert r.statistic == pytest.approx(3.8415)
    oraculo, _ = integrate.quad(lambda t: chi2.pdf(t, 1), r.statistic, np.inf)
    assert r.p_upper == pytest.approx(oraculo, abs=1e-6)
    assert r.p_upper == pytest.approx(0.05, abs=1e-3)


def test_chisq_dof2_closed_form():
    e = 50.0
    x = 2 * math.log(2)
    # três células, desvios (+δ, -δ, 0): estatística 2δ²/e
    delta = math.sqrt(x * e / 2)
    r = chisq_test([e + delta, e - delta, e], e)
    assert r.dof == 2
    assert r.p_upper == pytest.approx(math.exp(-r.statistic / 2), abs=1e-10)
    assert r.p_upper == pytest.approx(0.5, abs=1e-10)


def test_chisq_invariants():
    rng = np.random.default_rng(1)
    obs = rng.integers(5, 30, size=20)
    r = chisq_test(obs, obs.mean())
    assert r.p_lower + r.p_upper == pytest.approx(1.0, abs=1e-12)
    assert r.two_tailed_p == pytest.approx(min(1.0, 2 * min(r.p_lower, r.p_upper)))
    perm = chisq_test(rng.permutation(obs), obs.mean())
    assert perm.statistic == pytest.approx(r.statistic)
    stats = [chisq_test([50 + k, 50 - k], 50.0) for k in range(10)]
    assert all(a.p_lower <= b.p_lower for a, b in zip(stats, stats[1:]))


def test_chisq_degenerate_alpha_and_errors():
    r = chisq_test([12, 8], 10.0)
    assert r.reject(1.0)
    with pytest.raises(EntradaInvalida):
        chisq_test([], 1.0)
    with pytest.raises(EntradaInvalida):
        chisq_test([1, 2], [1.0, 0.0])


def test_chisq_per_cell_expected():
    r = chisq_test([30, 70], [30.0, 70.0])
    assert r.statistic == 0.0


# ----- probabilidade de equidistribuição -----

def _fracao_balanceada(N, K):
    """Fração das K^N atribuições de N pontos a K células com contagens iguais."""
    c = N // K
    boas = sum(1 for a in itertools.product(range(K), repeat=N) if all(a.count(k) == c for k in range(K)))
    return boas / K ** N


def test_probability_n1_is_one_half():
    p = log_equidist_probability(1, 1, 1)
    assert p.probability == pytest.approx(0.5, abs=1e-12)
    assert p.log_exact == pytest.approx(math.log(0.5), abs=1e-12)
    assert _fracao_balanceada(2, 2) == 0.5


def test_probability_n2_matches_enumeration():
    p = log_equidist_probability(2, 2, 1)
    assert p.probability == pytest.approx(0.09375, abs=1e-12)
    assert _fracao_balanceada(4, 4) == 0.09375
    geral = log_equidist_probability(2, 1, 1)
    assert geral.log_exact is None
    assert geral.probability == pytest.approx(_fracao_balanceada(4, 2), abs=1e-12)
    assert geral.probability == pytest.approx(0.375, abs=1e-12)


def test_probability_simplest_case_is_log_factorial_form():
    for n in (3, 5, 8, 12):
        N = 2 ** n
        p = log_equidist_probability(n, 1, n)
        assert p.log_exact == pytest.approx(log_fact(N) - N * math.log(N), rel=1e-12)
        assert p.log_exact <= 0.0


def test_stirling_agreement_at_2_20():
    p = log_equidist_probability(20, 4, 5)
    assert abs(p.log_exact - p.log_stirling) / abs(p.log_exact) < 1e-6


def test_probability_stays_finite_for_large_n():
    p = log_equidist_probability(512, 2, 8)
    assert math.isfinite(p.log10_probability) and p.log10_probability < 0
    p12 = log_equidist_probability(12, 3, 4)
    assert p12.log10_probability == pytest.approx(
        (special.gammaln(4097) - 4096 * math.log(4096)) / math.log(10), rel=1e-9)


def test_probability_rejects_bad_input():
    with pytest.raises(EntradaInvalida):
        log_equidist_probability(4, 3, 2)
    with pytest.raises(EntradaInvalida):
        log_equidist_probability(2000, 1, 1)


def test_random_source_rate_is_reproducible():
    a = random_source_equidist_rate(2, 2, 1, 2000, seed=7)
    b = random_source_equidist_rate(2, 2, 1, 2000, seed=7)
    assert a == b
    assert a.probability == pytest.approx(0.09375)
    assert 0.06 < a.rate < 0.13


# ----- segmentos -----

def test_segment_full_cycle_is_too_good(xorshift16):
    rep = resolution_table(xorshift16, d_max=2)
    d, w = (2, rep.rows[1].w_d) if rep.rows[1].w_d else (1, 8)
    r = segment_chisq(xorshift16, d, w, 65535, mode="overlap-full")
    K = 1 << (d * w)
    assert r.statistic == pytest.approx((K - 1) / 65535, rel=1e-9)
    assert r.p_lower < 1e-6
    assert r.reject(1e-6)
    assert r.tail == "too good"


def test_segment_counter_is_exactly_uniform():
    r = segment_chisq(CounterSpec(16), 1, 4, 1 << 16)
    assert r.statistic == 0.0


def test_segment_short_block_run_is_ordinary(xorshift16):
    r = segment_chisq(xorshift16, 2, 4, 256 * 8)
    assert 0.0 <= r.two_tailed_p <= 1.0
    assert segment_chisq(xorshift16, 2, 4, 256 * 8) == r


def test_segment_accepts_lcg_source():
    r = segment_chisq(RANDU, 1, 4, 10_000)
    assert r.dof == 15
    assert 0.0 <= r.two_tailed_p <= 1.0


def test_segment_rejects_unknown_mode(xorshift16):
    with pytest.raises(EntradaInvalida):
        segment_chisq(xorshift16, 1, 4, 100, mode="sideways")


def test_segment_wide_state_source():
    largo = xorshift_spec(128, 32, [("left", 23), ("right", 17), ("left", 26)])
    r = segment_chisq(largo, 2, 4, 512)
    assert r.dof == 255
    assert 0.0 <= r.two_tailed_p <= 1.0


@pytest.mark.parametrize("indice", [0, 1])
def test_segment_block_run_matches_frozen_values(golden, indice):
    ref = golden["chisq"][indice]
    fonte = load_spec(ref["preset"])
    r = segment_chisq(fonte, ref["d"], ref["w"], ref["M"], mode=ref["mode"])
    assert r.statistic == ref["statistic"]
    assert r.dof == ref["dof"]
    assert r.verdict(0.01) == ref["verdict"]
