# -*- coding: utf-8 -*-
import json

import pandas as pd
import pytest

from sistema_geradores.cli import RunReport, ler_resultado, main
from sistema_geradores.equidist import EquidistReport, VerifyReport
from sistema_geradores.errors import EntradaInvalida
from sistema_geradores.genlin import F2GeneratorSpec, PeriodCertificate
from sistema_geradores.lcg import RanduReport, SpectralResult
from sistema_geradores.stats import ChiSqResult, EquidistProbability, RandomSourceRate


def _rodar(capsys, *argv):
    codigo = main(list(argv))
    saida = capsys.readouterr()
    return codigo, saida.out, saida.err


def _json(capsys, *argv):
    codigo, out, _ = _rodar(capsys, *argv, "--format", "machine", "--no-timing")
    assert codigo == 0
    return json.loads(out)


def test_analyze_xorshift16(capsys):
    doc = _json(capsys, "analyze", "xorshift16")
    assert doc["command"] == "analyze"
    assert doc["payload"]["W_bound"] == 50
    assert len(doc["payload"]["rows"]) == 16
    assert doc["wall_time"] is None
    assert len(doc["spec_digest"]) == 64


def test_analyze_text_output(capsys):
    codigo, out, _ = _rodar(capsys, "analyze", "xorshift16", "--dmax", "4")
    assert codigo == 0
    assert "W_bound = 33" in out  # 16 + 8 + 5 + 4


def test_malformed_file_exits_2_with_empty_stdout(capsys, tmp_path):
    fp = tmp_path / "ruim.json"
    fp.write_text('{"type": "f2linear", "n": 2}', encoding="utf-8")
    codigo, out, err = _rodar(capsys, "analyze", str(fp))
    assert codigo == 2
    assert out == ""
    assert "campos ausentes" in err


def test_wrong_generator_kind_exits_2(capsys):
    codigo, out, _ = _rodar(capsys, "analyze", "randu")
    assert codigo == 2 and out == ""


def test_verify_single_pair(capsys):
    codigo, out, _ = _rodar(capsys, "verify", "companion-n2", "--d", "1", "--w", "1")
    assert codigo == 0
    linhas = out.splitlines()
    assert "AGREE" in linhas
    assert "(1,1): equidistributed" in linhas


def test_verify_sweep_machine(capsys):
    doc = _json(capsys, "verify", "companion-n2")
    assert doc["payload"]["all_agree"] is True
    assert {(r["d"], r["w"]) for r in doc["payload"]["results"]} == {(1, 1), (1, 2), (2, 1)}


def test_verify_rejects_large_n(capsys, tmp_path):
    fp = tmp_path / "grande.json"
    fp.write_text(json.dumps({
        "type": "f2linear", "n": 24, "w": 24,
        "A": {"kind": "xorshift", "shifts": [{"dir": "left", "amount": 1}, {"dir": "right", "amount": 3}]},
        "B": {"kind": "leading"},
    }), encoding="utf-8")
    codigo, out, _ = _rodar(capsys, "verify", str(fp), "--d", "1", "--w", "1")
    assert codigo == 2 and out == ""


def test_randu_three_samples_one_plane(capsys):
    doc = _json(capsys, "randu", "--samples", "3")
    assert doc["payload"]["plane_count"] == 1
    assert doc["payload"]["recurrence_violations"] == 0


def test_randu_default_sample(capsys):
    doc = _json(capsys, "randu")
    assert doc["payload"]["plane_count"] == 15
    assert doc["payload"]["planes"] == list(range(-5, 10))


def test_randu_even_seed_exits_2(capsys):
    codigo, out, _ = _rodar(capsys, "randu", "--seed", "2")
    assert codigo == 2 and out == ""


def test_chisq_full_cycle_is_too_good(capsys):
    codigo, out, _ = _rodar(capsys, "chisq", "xorshift16", "--d", "1", "--w", "8", "--M", "65535",
                            "--mode", "overlap-full")
    assert codigo == 0
    assert "REJECT (too good)" in out


def test_chisq_alpha_one_always_rejects(capsys):
    doc = _json(capsys, "chisq", "xorshift16", "--d", "2", "--w", "4", "--M", "2048", "--alpha", "1.0")
    assert doc["payload"]["verdict"].startswith("REJECT")


def test_chisq_on_lcg_and_counter(capsys):
    doc = _json(capsys, "chisq", "randu", "--d", "1", "--w", "4", "--M", "10000")
    assert doc["payload"]["dof"] == 15
    doc = _json(capsys, "chisq", "counter-n16", "--d", "1", "--w", "4", "--M", "65536")
    assert doc["payload"]["statistic"] == 0.0


def test_prob_smallest_case(capsys):
    doc = _json(capsys, "prob", "--n", "1", "--d", "1", "--w", "1")
    assert doc["payload"]["probability"] == pytest.approx(0.5)


def test_prob_with_random_source(capsys):
    doc = _json(capsys, "prob", "--n", "2", "--d", "2", "--w", "1", "--trials", "500", "--rng-seed", "3")
    assert doc["payload"]["random_source"]["trials"] == 500
    assert doc["payload"]["probability"] == pytest.approx(0.09375)


def test_prob_invalid_exits_2(capsys):
    codigo, _, _ = _rodar(capsys, "prob", "--n", "4", "--d", "3", "--w", "2")
    assert codigo == 2


def test_spectral_randu(capsys):
    doc = _json(capsys, "spectral", "randu")
    assert doc["payload"]["found"] is True
    assert doc["payload"]["q"] == [9, -6, 1]
    assert doc["payload"]["norm2"] == 118


def test_search_n2_lr(capsys):
    doc = _json(capsys, "search", "--n", "2", "--template", "lr")
    assert doc["payload"]["found"]
    assert all(r["period"] == 3 for r in doc["payload"]["found"])


def test_search_n2_default_template_finds_period_3(capsys):
    doc = _json(capsys, "search", "--n", "2")
    assert doc["payload"]["template"] == "lr"
    achados = doc["payload"]["found"]
    assert achados and all(r["period"] == 3 for r in achados)


def test_search_n2_lrl_finds_nothing(capsys):
    codigo, out, _ = _rodar(capsys, "search", "--n", "2", "--template", "lrl")
    assert codigo == 0
    assert "nenhum gerador" in out


def test_period(capsys):
    assert _json(capsys, "period", "companion-n2")["payload"]["period"] == 3
    assert _json(capsys, "period", "counter-n16")["payload"]["period"] == 1 << 16
    doc = _json(capsys, "period", "xorshift16", "--cap", "100")
    assert doc["payload"]["cycle_length"] is None
    assert doc["payload"]["maximal"] is True


def test_presets(capsys):
    codigo, out, _ = _rodar(capsys, "presets")
    assert codigo == 0
    assert out.split() == ["companion-n2", "counter-n16", "identity-n16", "minstd", "randu", "xorshift16",
                           "xorshift16-7-9-8"]


def test_seed_override_must_be_hex(capsys):
    codigo, _, _ = _rodar(capsys, "analyze", "xorshift16", "--seed", "xyz")
    assert codigo == 2


COMANDOS = {
    "analyze": (["analyze", "xorshift16", "--dmax", "6"], EquidistReport),
    "verify": (["verify", "companion-n2"], VerifyReport),
    "randu": (["randu", "--samples", "2000"], RanduReport),
    "chisq": (["chisq", "xorshift16", "--d", "2", "--w", "4", "--M", "256"], ChiSqResult),
    "prob": (["prob", "--n", "2", "--d", "2", "--w", "1", "--trials", "50"], EquidistProbability),
    "spectral": (["spectral", "randu", "--bound", "10"], SpectralResult),
    "search": (["search", "--n", "4", "--limit", "2"], list),
    "period": (["period", "companion-n2"], PeriodCertificate),
    "presets": (["presets"], list),
}


@pytest.mark.parametrize("comando", sorted(COMANDOS))
def test_machine_output_is_deterministic(capsys, comando):
    argv, _ = COMANDOS[comando]
    a = _rodar(capsys, *argv, "--format", "machine", "--no-timing")[1]
    b = _rodar(capsys, *argv, "--format", "machine", "--no-timing")[1]
    assert a == b


@pytest.mark.parametrize("comando", sorted(COMANDOS))
def test_machine_output_parses_back_into_result_type(capsys, comando):
    argv, tipo = COMANDOS[comando]
    codigo, out, _ = _rodar(capsys, *argv, "--format", "machine", "--no-timing")
    assert codigo == 0
    report = RunReport.from_json(out)
    assert report.command == comando
    resultado = ler_resultado(report)
    assert isinstance(resultado, tipo)
    if hasattr(resultado, "to_dict"):
        for chave, valor in resultado.to_dict().items():
            assert report.payload[chave] == valor, chave


def test_search_payload_parses_back_into_specs(capsys):
    report = RunReport.from_json(_rodar(capsys, "search", "--n", "4", "--limit", "2", "--format", "machine")[1])
    specs = ler_resultado(report)
    assert specs and all(isinstance(s, F2GeneratorSpec) and s.n == 4 for s in specs)
    assert [s.name for s in specs] == [r["name"] for r in report.payload["found"]]


def test_prob_random_source_parses_back(capsys):
    doc = _json(capsys, "prob", "--n", "2", "--d", "2", "--w", "1", "--trials", "50", "--rng-seed", "4")
    taxa = RandomSourceRate.from_dict(doc["payload"]["random_source"])
    assert taxa.trials == 50 and taxa.to_dict() == doc["payload"]["random_source"]


def test_read_result_rejects_unknown_command_and_bad_payload():
    with pytest.raises(EntradaInvalida):
        ler_resultado(RunReport("nada", {}, ""))
    with pytest.raises(EntradaInvalida):
        ler_resultado(RunReport("chisq", {"statistic": 1.0}, ""))
    with pytest.raises(EntradaInvalida):
        RunReport.from_json("{nao é json")


def test_report_echoes_argv_and_flags(capsys):
    doc = _json(capsys, "chisq", "xorshift16", "--d", "2", "--w", "4", "--M", "256")
    assert doc["argv"] == ["chisq", "xorshift16", "--d", "2", "--w", "4", "--M", "256",
                           "--format", "machine", "--no-timing"]
    opcoes = doc["options"]
    assert opcoes["command"] == "chisq" and opcoes["spec"] == "xorshift16"
    assert (opcoes["d"], opcoes["w"], opcoes["M"], opcoes["mode"], opcoes["alpha"]) == (2, 4, 256, "blocks", 0.01)
    assert opcoes["no_timing"] is True and opcoes["seed"] is None
    assert "func" not in opcoes and "argv" not in opcoes


@pytest.mark.parametrize("indice", [0, 1])
def test_chisq_block_run_matches_frozen_values(capsys, golden, indice):
    ref = golden["chisq"][indice]
    doc = _json(capsys, "chisq", ref["preset"], "--seed", ref["seed"], "--d", str(ref["d"]), "--w", str(ref["w"]),
                "--M", str(ref["M"]), "--mode", ref["mode"])
    assert doc["payload"]["statistic"] == ref["statistic"]
    assert doc["payload"]["dof"] == ref["dof"]
    assert doc["payload"]["verdict"] == ref["verdict"]


def test_randu_xlsx_output_with_list_cells(capsys, tmp_path):
    planilha = tmp_path / "randu.xlsx"
    _json(capsys, "randu", "--output", str(planilha))
    df = pd.read_excel(planilha, sheet_name="resultado", engine="openpyxl")
    assert json.loads(df.loc[0, "planes"]) == list(range(-5, 10))
    execucao = pd.read_excel(planilha, sheet_name="execucao", engine="openpyxl")
    assert json.loads(execucao.loc[0, "argv"])[0] == "randu"


def test_quiet_keeps_stderr_clean(capsys):
    codigo, _, err = _rodar(capsys, "presets", "--quiet")
    assert codigo == 0 and err == ""


def test_output_json_and_xlsx(capsys, tmp_path):
    destino = tmp_path / "r.json"
    _json(capsys, "analyze", "xorshift16", "--output", str(destino))
    assert json.loads(destino.read_text(encoding="utf-8"))["payload"]["W_bound"] == 50

    planilha = tmp_path / "sub" / "r.xlsx"
    _json(capsys, "analyze", "xorshift16", "--output", str(planilha))
    df = pd.read_excel(planilha, sheet_name="resultado", engine="openpyxl")
    assert list(df["d"]) == list(range(1, 17))
    execucao = pd.read_excel(planilha, sheet_name="execucao", engine="openpyxl")
    assert execucao.loc[0, "command"] == "analyze"


def test_unknown_command_is_argparse_error():
    with pytest.raises(SystemExit) as exc:
        main(["nada"])
    assert exc.value.code == 2
