# -*- coding: utf-8 -*-
"""
Linha de comando: python sistema.py <comando> ... ou python -m sistema_geradores.

Saída: texto alinhado (padrão) ou um único documento JSON (--format machine).
Logs vão para stderr. Códigos: 0 ok, 2 entrada inválida, 3 invariante violada.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from . import __version__
from .config import carregar_config
from .equidist import (
    EquidistReport, VerifyReport, lcg_full_period_tally, maximal_cycle_states, resolution_table, verify_equidist,
)
from .errors import EntradaInvalida, GeradorError, InvarianteViolada
from .genlin import (
    TEMPLATES, CounterSpec, F2GeneratorSpec, PeriodCertificate, certify_period, cycle_length, search_maximal,
    template_padrao,
)
from .lcg import (
    RANDU, RANDU_NORMAL, LcgSpec, RanduReport, SpectralResult, lcg_period, plane_count, plane_count_full_period,
    randu_recurrence_check, spectral_search,
)
from .log import abrir_log_arquivo, fechar_log_arquivo, log_err, log_info, log_ok, log_title, silenciar
from .specfile import list_presets, load_spec, parse_spec, serialize_spec, spec_digest
from .stats import (
    MODOS, ChiSqResult, EquidistProbability, RandomSourceRate, log_equidist_probability,
    random_source_equidist_rate, segment_chisq,
)


@dataclass
class RunReport:
    command: str
    payload: dict
    text: str
    spec_digest: str | None = None
    wall_time: float | None = None
    version: str = __version__
    argv: list[str] = field(default_factory=list)
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command, "argv": list(self.argv), "options": dict(self.options),
            "version": self.version, "spec_digest": self.spec_digest,
            "payload": self.payload, "wall_time": self.wall_time,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, doc: dict) -> "RunReport":
        """O texto não vai no documento JSON; volta vazio."""
        return cls(doc["command"], doc["payload"], "", doc.get("spec_digest"), doc.get("wall_time"),
                   doc.get("version", __version__), list(doc.get("argv", [])), dict(doc.get("options", {})))

    @classmethod
    def from_json(cls, texto: str) -> "RunReport":
        try:
            doc = json.loads(texto)
        except json.JSONDecodeError as e:
            raise EntradaInvalida(f"relatório JSON inválido ({e})") from e
        return cls.from_dict(doc)


# Tipo de resultado de cada comando, reconstruído a partir do payload.
LEITORES = {
    "analyze": EquidistReport.from_dict,
    "verify": VerifyReport.from_dict,
    "randu": RanduReport.from_dict,
    "chisq": ChiSqResult.from_dict,
    "prob": EquidistProbability.from_dict,
    "spectral": SpectralResult.from_dict,
    "search": lambda p: [parse_spec(s) for s in p["specs"]],
    "period": PeriodCertificate.from_dict,
    "presets": lambda p: list(p["presets"]),
}


def ler_resultado(report: RunReport):
    """Resultado tipado de um RunReport lido da saída machine."""
    try:
        leitor = LEITORES[report.command]
    except KeyError:
        raise EntradaInvalida(f"comando desconhecido no relatório: {report.command!r}") from None
    try:
        return leitor(report.payload)
    except (KeyError, TypeError, ValueError) as e:
        raise EntradaInvalida(f"payload de '{report.command}' malformado ({e})") from e


# ================== Auxiliares ==================

def _eco(args) -> dict:
    """Flags efetivas do comando (sem os campos internos do argparse)."""
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "argv")}


def _semente_hex(texto: str) -> int:
    try:
        return int(texto, 16)
    except ValueError:
        raise EntradaInvalida(f"--seed precisa ser hexadecimal: {texto!r}") from None


def _carregar(args, tipos: tuple[type, ...] | None = None):
    spec = load_spec(args.spec)
    if tipos is not None and not isinstance(spec, tipos):
        nomes = "/".join(t.__name__ for t in tipos)
        raise EntradaInvalida(f"comando '{args.command}' não aceita {type(spec).__name__} (esperado {nomes})")
    if args.seed is not None:
        semente = _semente_hex(args.seed)
        if isinstance(spec, F2GeneratorSpec):
            spec = dataclasses.replace(spec, seed=semente)
        elif isinstance(spec, LcgSpec):
            spec = spec.with_seed(semente)
    return spec


def _celula(v):
    """Listas e dicts viram JSON numa célula de planilha."""
    return json.dumps(v, ensure_ascii=False) if isinstance(v, (list, dict)) else v


def _frame_do_payload(payload: dict) -> pd.DataFrame:
    df = None
    for chave in ("rows", "results", "found"):
        if isinstance(payload.get(chave), list) and payload[chave]:
            df = pd.DataFrame(payload[chave])
            break
    if df is None:
        df = pd.json_normalize(payload)
    for col in df.columns:
        df[col] = df[col].apply(_celula)
    return df


def _gravar_saida(report: RunReport, destino: str, formato: str) -> Path:
    fp = Path(destino)
    fp.parent.mkdir(parents=True, exist_ok=True)
    suf = fp.suffix.lower()
    if suf == ".xlsx":
        with pd.ExcelWriter(fp, engine="openpyxl") as xw:
            _frame_do_payload(report.payload).to_excel(xw, sheet_name="resultado", index=False)
            resumo = {k: _celula(v) for k, v in report.to_dict().items() if k != "payload"}
            pd.DataFrame([resumo]).to_excel(xw, sheet_name="execucao", index=False)
    elif suf == ".json" or formato == "machine":
        fp.write_text(report.to_json() + "\n", encoding="utf-8")
    else:
        fp.write_text(report.text + "\n", encoding="utf-8")
    log_ok(f"relatório gravado em {fp}")
    return fp


# ================== Comandos ==================

def cmd_analyze(args) -> RunReport:
    spec = _carregar(args, (F2GeneratorSpec,))
    cert = certify_period(spec)
    log_info(f"certificação do período: {cert.kind} ({cert.detail})")
    rep = resolution_table(spec, args.dmax, cert)
    payload = rep.to_dict()
    payload["certificate_detail"] = cert.detail
    return RunReport("analyze", payload, rep.to_text(), spec_digest(spec))


def cmd_verify(args) -> RunReport:
    spec = _carregar(args, (F2GeneratorSpec,))
    states = maximal_cycle_states(spec)
    if args.d is not None and args.w is not None:
        pares = [(args.d, args.w)]
    else:
        pares = [(d, w) for d in range(1, min(args.dmax, spec.n) + 1)
                 for w in range(1, spec.w + 1) if d * w <= spec.n]
    rep = VerifyReport.of(spec.n, [verify_equidist(spec, d, w, states) for d, w in pares])
    report = RunReport("verify", rep.to_dict(), rep.to_text(), spec_digest(spec))
    if not rep.all_agree:
        # a saída vai antes do erro: a discordância é o próprio resultado
        _emitir(report, args)
        raise InvarianteViolada("posto e contagem exaustiva discordam")
    return report


def cmd_randu(args) -> RunReport:
    z0 = _semente_hex(args.seed) if args.seed is not None else RANDU.z0
    spec = RANDU.with_seed(z0 % RANDU.m)
    if args.samples < 3:
        raise EntradaInvalida("--samples precisa ser >= 3")
    violacoes = randu_recurrence_check(spec.z0, args.samples)
    if args.full_period:
        periodo = lcg_period(spec)
        planos = sorted(plane_count_full_period(spec, RANDU_NORMAL, periodo))
        tally = lcg_full_period_tally(spec, 3, 4, periodo)
        resumo = {"min_count": int(tally.counts.min()), "max_count": int(tally.counts.max()),
                  "equidistributed": tally.is_uniform()}
        rep = RanduReport(spec.z0, args.samples, violacoes, planos, RANDU_NORMAL, periodo, resumo)
    else:
        planos = sorted(plane_count(spec, RANDU_NORMAL, args.samples))
        rep = RanduReport(spec.z0, args.samples, violacoes, planos)
    return RunReport("randu", rep.to_dict(), rep.to_text(), spec_digest(spec))


def cmd_chisq(args) -> RunReport:
    spec = _carregar(args, (F2GeneratorSpec, CounterSpec, LcgSpec))
    res = segment_chisq(spec, args.d, args.w, args.M, args.mode)
    veredito = res.verdict(args.alpha)
    payload = res.to_dict() | {"d": args.d, "w": args.w, "M": args.M, "mode": args.mode,
                               "alpha": args.alpha, "verdict": veredito}
    texto = (f"χ² = {res.statistic:.6g} (dof {res.dof})  p_lower = {res.p_lower:.6g}  "
             f"p_upper = {res.p_upper:.6g}  p bicaudal = {res.two_tailed_p:.6g}\n{veredito}")
    return RunReport("chisq", payload, texto, spec_digest(spec))


def cmd_prob(args) -> RunReport:
    p = log_equidist_probability(args.n, args.d, args.w)
    payload = p.to_dict()
    linhas = [f"n = {args.n}, d = {args.d}, w = {args.w}",
              f"log10 p = {p.log10_probability:.10g}"]
    if p.log10_probability > -300:
        payload["probability"] = p.probability
        linhas.append(f"p = {p.probability:.10g}")
    linhas.append(f"ln p = {p.log_multinomial:.10g}   Stirling (dw = n): {p.log_stirling:.10g}")
    if args.trials:
        taxa = random_source_equidist_rate(args.n, args.d, args.w, args.trials, args.rng_seed)
        payload["random_source"] = taxa.to_dict()
        linhas.append(f"fonte aleatória: {taxa.balanced}/{taxa.trials} balanceados ({taxa.rate:.4g})")
    return RunReport("prob", payload, "\n".join(linhas))


def cmd_spectral(args) -> RunReport:
    spec = _carregar(args, (LcgSpec,))
    res = SpectralResult(args.d, args.bound, spectral_search(spec, args.d, args.bound))
    return RunReport("spectral", res.to_dict(), res.to_text(), spec_digest(spec))


def cmd_search(args) -> RunReport:
    template = template_padrao(args.n) if args.template is None else args.template
    achados = search_maximal(args.n, template, args.budget, args.limit)
    linhas = [{"name": s.name, "shifts": [f"{op.direction}:{op.amount}" for op in s.A],
               "period": (1 << s.n) - 1} for s in achados]
    payload = {"n": args.n, "template": template, "budget": args.budget,
               "found": linhas, "specs": [serialize_spec(s) for s in achados]}
    texto = pd.DataFrame(linhas).to_string(index=False) if linhas else "nenhum gerador de período máximo encontrado"
    return RunReport("search", payload, texto)


def cmd_period(args) -> RunReport:
    spec = _carregar(args)
    extra = {}
    if isinstance(spec, F2GeneratorSpec):
        cert = certify_period(spec)
        if args.cap is not None:
            extra["cycle_length"] = cycle_length(spec, cap=args.cap)
    elif isinstance(spec, LcgSpec):
        t = lcg_period(spec, args.cap)
        cert = (PeriodCertificate("cycle", t, "varredura a partir de z0") if t is not None
                else PeriodCertificate("exceeds-cap", None, "período passa do limite"))
    else:
        cert = PeriodCertificate("counter", spec.period, "contador: período 2^n")
    texto = f"{cert.kind}: período {cert.period if cert.period is not None else '?'} ({cert.detail})"
    return RunReport("period", cert.to_dict() | extra, texto, spec_digest(spec))


def cmd_presets(args) -> RunReport:
    nomes = list_presets()
    return RunReport("presets", {"presets": nomes}, "\n".join(nomes))


# ================== Parser ==================

def build_parser() -> argparse.ArgumentParser:
    comum = argparse.ArgumentParser(add_help=False)
    comum.add_argument("--format", choices=("text", "machine"), default="text")
    comum.add_argument("--seed", default=None, help="semente em hexadecimal (substitui a do arquivo)")
    comum.add_argument("--quiet", action="store_true", help="só erros no stderr")
    comum.add_argument("--log-file", action="store_true", help="espelha o log em logs/")
    comum.add_argument("--output", default=None, help="grava o relatório (.xlsx, .json ou texto)")
    comum.add_argument("--no-timing", action="store_true", help="wall_time nulo (saída reproduzível)")

    p = argparse.ArgumentParser(prog="sistema", description="Análise de geradores pseudoaleatórios.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[comum], help="tabela de resolução (δ_d, Δ, W)")
    s.add_argument("spec")
    s.add_argument("--dmax", type=int, default=None)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("verify", parents=[comum], help="posto x contagem exaustiva")
    s.add_argument("spec")
    s.add_argument("--d", type=int, default=None)
    s.add_argument("--w", type=int, default=None)
    s.add_argument("--dmax", type=int, default=8, help="sem --d/--w: varre d <= dmax")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("randu", parents=[comum], help="demonstração dos planos do RANDU")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--full-period", action="store_true")
    s.set_defaults(func=cmd_randu)

    s = sub.add_parser("chisq", parents=[comum], help="χ² bicaudal de um segmento")
    s.add_argument("spec")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--w", type=int, required=True)
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--alpha", type=float, default=0.01)
    s.add_argument("--mode", choices=MODOS, default="blocks")
    s.set_defaults(func=cmd_chisq)

    s = sub.add_parser("prob", parents=[comum], help="probabilidade de equidistribuição")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--w", type=int, required=True)
    s.add_argument("--trials", type=int, default=0, help="sorteios da fonte aleatória")
    s.add_argument("--rng-seed", type=int, default=0)
    s.set_defaults(func=cmd_prob)

    s = sub.add_parser("spectral", parents=[comum], help="busca espectral exaustiva")
    s.add_argument("spec")
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--bound", type=int, default=16)
    s.set_defaults(func=cmd_spectral)

    s = sub.add_parser("search", parents=[comum], help="busca de xor-shifts de período máximo")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--template", choices=sorted(TEMPLATES), default=None,
                   help="padrão: lr para n = 2, lrl nos demais")
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--limit", type=int, default=None)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("period", parents=[comum], help="período / certificado")
    s.add_argument("spec")
    s.add_argument("--cap", type=int, default=None)
    s.set_defaults(func=cmd_period)

    s = sub.add_parser("presets", parents=[comum], help="lista os presets embutidos")
    s.set_defaults(func=cmd_presets)
    return p


def _emitir(report: RunReport, args) -> None:
    report.argv = list(args.argv)
    report.options = _eco(args)
    if args.output:
        _gravar_saida(report, args.output, args.format)
    texto = report.to_json() if args.format == "machine" else report.text
    print(texto, flush=True)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    silenciar(args.quiet)
    if args.log_file or carregar_config().log_to_file:
        abrir_log_arquivo(args.command, carregar_config().log_dir)
    log_title(f"sistema {args.command}")
    t0 = time.perf_counter()
    try:
        report: RunReport = args.func(args)
        report.wall_time = None if args.no_timing else round(time.perf_counter() - t0, 6)
        _emitir(report, args)
        log_ok(f"{args.command} concluído em {time.perf_counter() - t0:.3f}s")
        return 0
    except InvarianteViolada as e:
        log_err(str(e))
        return 3
    except GeradorError as e:
        log_err(str(e))
        return 2
    finally:
        fechar_log_arquivo()
        silenciar(False)
