# -*- coding: utf-8 -*-
import numpy as np
import pytest

from sistema_geradores.equidist import (
    CellIndex, CellTally, brute_tally, build_tuple_matrix, counter_full_period_tally, full_cycle_tally,
    is_equidistributed, lcg_full_period_tally, overlapping_windows, block_windows, reorder_tally_invariance,
    VerifyReport, resolution_table, verify_equidist, wstar_asymptotic,
)
from sistema_geradores.errors import EntradaInvalida, OrcamentoExcedido
from sistema_geradores.genlin import CounterSpec, F2GeneratorSpec, certify_period, xorshift_spec
from sistema_geradores.gf2 import BitMatrix, mat_mul, mat_pow, rank, vstack
from sistema_geradores.lcg import RANDU


def _pares(spec, d_max=8, w_max=8):
    return [(d, w) for d in range(1, d_max + 1) for w in range(1, min(spec.w, w_max) + 1) if d * w <= spec.n]


# ----- células -----

def test_cell_index_round_trip():
    c = CellIndex.from_coords(3, 4, (1, 15, 7))
    assert c.index == (1 << 8) | (15 << 4) | 7
    assert CellIndex(3, 4, c.index).coords() == (1, 15, 7)
    with pytest.raises(EntradaInvalida):
        CellIndex(2, 2, 16)


def test_brute_tally_counter_is_uniform():
    x = np.arange(16) / 16
    t = brute_tally(x, 4)
    assert np.all(t.counts == 1)
    t1 = brute_tally(np.array([0.0, 0.5]), 1)
    assert t1.as_dict() == {0: 1, 1: 1}


def test_brute_tally_coordinate_major_cells():
    t = brute_tally(np.array([[0.75, 0.25]]), 2)
    assert t.as_dict() == {CellIndex.from_coords(2, 2, (3, 1)).index: 1}


def test_brute_tally_total_and_range_checks():
    rng = np.random.default_rng(3)
    pts = rng.random((1000, 3))
    t = brute_tally(pts, 3)
    assert t.total == 1000 == int(t.counts.sum())
    with pytest.raises(EntradaInvalida):
        brute_tally(np.array([1.0]), 2)


def test_tally_budget_is_checked_before_allocation(config_env):
    with pytest.raises(OrcamentoExcedido):
        CellTally(4, 8)
    config_env(tally_max_points=10)
    with pytest.raises(OrcamentoExcedido):
        brute_tally(np.zeros(11), 1)


def test_cell_tally_merge_is_order_independent():
    rng = np.random.default_rng(9)
    pts = rng.random((600, 2))
    inteiro = brute_tally(pts, 3)
    a, b = CellTally(2, 3), CellTally(2, 3)
    a.add_points(pts[:250])
    b.add_points(pts[250:])
    assert np.array_equal(b.merge(a).result().counts, inteiro.counts)


def test_windows():
    x = np.array([1, 2, 3, 4, 5])
    assert overlapping_windows(x, 2).tolist() == [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1]]
    assert block_windows(x, 2).tolist() == [[1, 2], [3, 4]]


# ----- matriz de tuplas -----

def test_tuple_matrix_identity_repeats_blocks(identity16):
    M = build_tuple_matrix(identity16, 2, 3)
    assert (M.rows, M.cols) == (6, 16)
    assert M.take_rows(range(3)) == M.take_rows(range(3, 6))
    assert rank(M) == 3


def test_tuple_matrix_companion_by_hand(companion2):
    # B·A = primeira linha de A = (0,1); B·A^2 = primeira linha de A^2 = (1,1)
    M = build_tuple_matrix(companion2, 2, 1)
    assert M.to_dense().tolist() == [[0, 1], [1, 1]]
    assert rank(M) == 2


def test_tuple_matrix_rejects_wide_w(companion2):
    with pytest.raises(EntradaInvalida):
        build_tuple_matrix(companion2, 1, 3)


def test_is_equidistributed_basic(xorshift16, identity16):
    assert is_equidistributed(xorshift16, 1, 1).equidistributed
    v = is_equidistributed(identity16, 2, 1)
    assert not v.equidistributed and v.structural_only
    assert is_equidistributed(xorshift16, 3, 6).kind == "impossible"


# ----- equivalência posto x contagem -----

def test_oracle_equivalence_xorshift16(xorshift16, xorshift16_states):
    for d, w in _pares(xorshift16, w_max=16):
        acordo = verify_equidist(xorshift16, d, w, xorshift16_states)
        assert acordo.agree, (d, w)
        if acordo.rank_verdict:
            c = 1 << (16 - d * w)
            esperado = np.full(1 << (d * w), c)
            esperado[0] = c - 1
            assert np.array_equal(acordo.tally.counts, esperado)


def test_oracle_equivalence_companion(companion2):
    for d, w in _pares(companion2):
        assert verify_equidist(companion2, d, w).agree


def test_companion_tally_by_hand(companion2):
    # estados 2, 3, 1: bit 0 = 0, 1, 1
    acordo = verify_equidist(companion2, 1, 1)
    assert acordo.rank_verdict and acordo.tally_verdict
    assert acordo.tally.counts.tolist() == [1, 2]


def test_verify_report_single_pair_keeps_tally(companion2):
    rep = VerifyReport.of(2, [verify_equidist(companion2, 1, 1)])
    doc = rep.to_dict()
    assert doc["tally"]["counts"] == {"0": 1, "1": 2}
    lido = VerifyReport.from_dict(doc)
    assert lido.rows == rep.rows and lido.all_agree
    assert np.array_equal(lido.tally.counts, rep.tally.counts)
    assert lido.tally.matches_pattern() and lido.to_dict() == doc
    assert "(1,1): equidistributed" in rep.to_text().splitlines()


def test_verify_rejects_large_or_non_maximal(identity16):
    spec = F2GeneratorSpec(n=21, w=1, A=BitMatrix.identity(21))
    with pytest.raises(EntradaInvalida):
        verify_equidist(spec, 1, 1)
    with pytest.raises(EntradaInvalida):
        verify_equidist(identity16, 1, 1)


def test_monotonicity(xorshift16):
    cert = certify_period(xorshift16)
    for d, w in _pares(xorshift16, w_max=16):
        if is_equidistributed(xorshift16, d, w, cert).equidistributed:
            if w > 1:
                assert is_equidistributed(xorshift16, d, w - 1, cert).equidistributed
            if d > 1:
                assert is_equidistributed(xorshift16, d - 1, w, cert).equidistributed


def test_random_dense_generators_agree():
    """Geradores densos aleatórios com período máximo: posto = contagem."""
    from sistema_geradores.genlin import cycle_length

    rng = np.random.default_rng(2024)
    testados = 0
    while testados < 3:
        A = BitMatrix.from_dense(rng.integers(0, 2, size=(10, 10), dtype=np.uint8))
        B = BitMatrix.from_dense(rng.integers(0, 2, size=(4, 10), dtype=np.uint8))
        if B.is_zero():
            continue
        spec = F2GeneratorSpec(n=10, w=4, A=A, B=B)
        if cycle_length(spec, 1, cap=1023) != 1023:
            continue
        testados += 1
        for d, w in _pares(spec):
            assert verify_equidist(spec, d, w).agree


# ----- figuras de mérito -----

def test_resolution_table_consistency(xorshift16):
    cert = certify_period(xorshift16)
    rep = resolution_table(xorshift16, certificate=cert)
    assert [r.d for r in rep.rows] == list(range(1, 17))
    assert rep.W_bound == 50
    assert rep.rows[0].w_d == 16 and rep.rows[0].delta_d == 0
    assert rep.rows[4].w_star == 3
    for r in rep.rows:
        assert 0 <= r.w_d <= min(xorshift16.w, r.w_star)
        if r.w_d:
            assert is_equidistributed(xorshift16, r.d, r.w_d, cert).equidistributed
        if r.w_d + 1 <= r.w_cap:
            assert not is_equidistributed(xorshift16, r.d, r.w_d + 1, cert).equidistributed
    assert rep.Delta == max(r.delta_d for r in rep.rows)
    assert rep.W == sum(r.w_d for r in rep.rows) <= rep.W_bound
    doc = rep.to_dict()
    assert doc["W_bound"] == 50 and len(doc["rows"]) == 16
    assert "W_bound = 50" in rep.to_text()


def _w_d_por_posto(spec, d):
    """w_d por força bruta: potências densas de A e um posto por w."""
    w_cap = min(spec.w, spec.n // d)
    for w in range(w_cap, 0, -1):
        Bw = spec.dense_B.take_rows(range(w))
        M = vstack([mat_mul(Bw, mat_pow(spec.dense_A, i + 1)) for i in range(d)])
        if rank(M) == d * w:
            return w
    return 0


def _specs_variados():
    rng = np.random.default_rng(31)
    denso = F2GeneratorSpec(n=12, w=12, A=BitMatrix.from_dense(rng.integers(0, 2, (12, 12), dtype=np.uint8)))
    com_B = F2GeneratorSpec(n=12, w=7, A=denso.A, B=BitMatrix.from_dense(rng.integers(0, 2, (7, 12), dtype=np.uint8)))
    return [
        ("xorshift16-7-9-8", xorshift_spec(16, 16, [("left", 7), ("right", 9), ("left", 8)])),
        ("denso", denso),
        ("denso-com-B", com_B),
        ("largo", xorshift_spec(64, 32, [("left", 13), ("right", 7), ("left", 17)])),
    ]


@pytest.mark.parametrize("nome,spec", _specs_variados(), ids=lambda v: v if isinstance(v, str) else "")
def test_resolution_table_matches_rank_per_w(nome, spec):
    d_max = min(spec.n, 6)
    rep = resolution_table(spec, d_max=d_max)
    assert [r.w_d for r in rep.rows] == [_w_d_por_posto(spec, d) for d in range(1, d_max + 1)]


def test_resolution_table_full_sweep_matches_rank_per_w(xorshift16):
    rep = resolution_table(xorshift16)
    assert [r.w_d for r in rep.rows] == [_w_d_por_posto(xorshift16, d) for d in range(1, 17)]
    assert all(a.w_d >= b.w_d for a, b in zip(rep.rows, rep.rows[1:]))


def test_resolution_table_identity(identity16):
    rep = resolution_table(identity16)
    assert rep.rows[0].w_d == 16
    assert all(r.w_d == 0 for r in rep.rows[1:])
    assert rep.Delta == 8
    assert not rep.period_certified


def test_resolution_table_output_width_cap(xorshift16):
    estreito = F2GeneratorSpec(n=16, w=8, A=xorshift16.A)
    rep = resolution_table(estreito, d_max=2)
    assert rep.rows[0].w_cap == 8 and rep.rows[0].w_d <= 8
    assert rep.rows[0].delta_d >= 8


@pytest.mark.parametrize("n,esperado", [(2, 3), (16, 50)])
def test_wstar_asymptotic_exact(n, esperado):
    assert wstar_asymptotic(n)[0] == esperado


def test_wstar_asymptotic_ratio():
    _, razao = wstar_asymptotic(4096)
    assert 1.0 <= razao <= 1.05


# ----- contador e reordenação -----

@pytest.mark.parametrize("n", [1, 4, 8, 16])
def test_counter_full_period_uniform_at_every_w(n):
    spec = CounterSpec(n)
    for w in range(1, n + 1):
        t = counter_full_period_tally(spec, 1, w)
        assert np.all(t.counts == 1 << (n - w))
        assert t.matches_pattern()


def test_reorder_invariance_examples():
    x = np.arange(16) / 16
    assert reorder_tally_invariance(x, np.arange(16), 1, 4)
    assert reorder_tally_invariance(x, np.arange(16)[::-1], 1, 4)
    with pytest.raises(EntradaInvalida):
        reorder_tally_invariance(x, np.zeros(16, dtype=int), 1, 4)


def test_reorder_invariance_random_permutations():
    rng = np.random.default_rng(77)
    for _ in range(5):
        d = int(rng.integers(1, 4))
        w = int(rng.integers(1, 4))
        pts = rng.random((1000, d))
        for _ in range(100):
            assert reorder_tally_invariance(pts, rng.permutation(1000), d, w)


def test_full_cycle_tally_pattern_kind(xorshift16, xorshift16_states):
    t = full_cycle_tally(xorshift16, 1, 8, xorshift16_states)
    assert t.total == 65535
    assert t.period_kind == "2^n - 1"


@pytest.mark.slow
def test_randu_full_period_not_equidistributed_3_4():
    t = lcg_full_period_tally(RANDU, 3, 4, 1 << 29)
    assert t.total == 1 << 29
    assert int(t.counts.max()) > int(t.counts.min())
