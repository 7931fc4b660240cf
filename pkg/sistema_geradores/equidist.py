# -*- coding: utf-8 -*-
"""
(d, w)-equidistribuição: veredito estrutural pelo posto da matriz de tuplas,
contagem exaustiva por células no ciclo completo, e as figuras de mérito
(lacuna de resolução δ_d, Δ, W).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import pandas as pd

from .config import carregar_config
from .errors import EntradaInvalida, InvarianteViolada, OrcamentoExcedido
from .genlin import (
    CounterSpec, F2GeneratorSpec, PeriodCertificate, certify_period, counter_values,
    output_prefix_values, state_sequence,
)
from .gf2 import BitMatrix, independent_prefix, rank
from .lcg import LcgSpec, iter_windows, lcg_values
from .log import log_info, log_ok, log_warn

PERIODO_CHEIO = "2^n"
PERIODO_MENOS_UM = "2^n - 1"


# ================== Células ==================

@dataclass(frozen=True)
class CellIndex:
    """Célula de lado 2^-w em [0,1)^d; coordenada 0 nos bits mais altos do índice."""
    d: int
    w: int
    index: int

    def __post_init__(self):
        if not 0 <= self.index < (1 << (self.d * self.w)):
            raise EntradaInvalida(f"índice de célula fora de [0, 2^{self.d * self.w})")

    @classmethod
    def from_coords(cls, d: int, w: int, coords: Sequence[int]) -> "CellIndex":
        if len(coords) != d:
            raise EntradaInvalida("número de coordenadas diferente de d")
        idx = 0
        for c in coords:
            if not 0 <= c < (1 << w):
                raise EntradaInvalida("coordenada fora de [0, 2^w)")
            idx = (idx << w) | int(c)
        return cls(d, w, idx)

    def coords(self) -> tuple[int, ...]:
        mask = (1 << self.w) - 1
        return tuple((self.index >> (self.w * (self.d - 1 - k))) & mask for k in range(self.d))


def _checar_orcamento(d: int, w: int, pontos: int | None = None) -> None:
    cfg = carregar_config()
    if d < 1 or w < 1:
        raise EntradaInvalida("precisa d >= 1 e w >= 1")
    if d * w > cfg.tally_max_bits:
        raise OrcamentoExcedido(f"dw = {d * w} passa de {cfg.tally_max_bits} bits de células")
    if pontos is not None and pontos > cfg.tally_max_points:
        raise OrcamentoExcedido(f"{pontos} pontos passa de {cfg.tally_max_points}")


def _indices_de_janelas(cols: Sequence[np.ndarray], w: int) -> np.ndarray:
    idx = np.zeros(len(cols[0]), dtype=np.int64)
    for c in cols:
        idx = (idx << np.int64(w)) | c.astype(np.int64)
    return idx


def overlapping_windows(x: np.ndarray, d: int) -> np.ndarray:
    """Pontos y_j = (x_j, ..., x_{j+d-1}), j = 0..N-1, índices mod N."""
    x = np.asarray(x)
    if d < 1 or len(x) < 1:
        raise EntradaInvalida("precisa d >= 1 e sequência não vazia")
    return np.stack([np.roll(x, -k) for k in range(d)], axis=1)


def block_windows(x: np.ndarray, d: int) -> np.ndarray:
    """Blocos disjuntos de d valores consecutivos (sobra final descartada)."""
    x = np.asarray(x)
    if d < 1:
        raise EntradaInvalida("precisa d >= 1")
    k = len(x) // d
    return x[:k * d].reshape(k, d)


# ================== Contagem ==================

@dataclass
class TallyResult:
    d: int
    w: int
    counts: np.ndarray
    total: int
    n: int | None = None
    period_kind: str | None = None

    def __post_init__(self):
        if len(self.counts) != 1 << (self.d * self.w):
            raise InvarianteViolada("vetor de contagens com tamanho errado")
        if int(self.counts.sum()) != self.total:
            raise InvarianteViolada("Σ contagens != total")

    def count(self, cell: CellIndex | int) -> int:
        return int(self.counts[cell.index if isinstance(cell, CellIndex) else cell])

    def as_dict(self) -> dict[int, int]:
        """Só as células ocupadas."""
        nz = np.flatnonzero(self.counts)
        return {int(i): int(self.counts[i]) for i in nz}

    def expected_pattern(self) -> np.ndarray | None:
        if self.n is None or self.period_kind is None or self.d * self.w > self.n:
            return None
        esperado = np.full(len(self.counts), 1 << (self.n - self.d * self.w), dtype=np.int64)
        if self.period_kind == PERIODO_MENOS_UM:
            esperado[0] -= 1
        return esperado

    def matches_pattern(self) -> bool:
        esperado = self.expected_pattern()
        return esperado is not None and bool(np.array_equal(self.counts, esperado))

    def is_uniform(self) -> bool:
        return int(self.counts.min()) == int(self.counts.max())

    def to_dict(self) -> dict:
        return {
            "d": self.d, "w": self.w, "n": self.n, "period_kind": self.period_kind,
            "total": self.total, "cells": len(self.counts),
            "min_count": int(self.counts.min()), "max_count": int(self.counts.max()),
            "matches_pattern": self.matches_pattern(),
            "counts": {str(k): v for k, v in self.as_dict().items()},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TallyResult":
        d, w = int(doc["d"]), int(doc["w"])
        counts = np.zeros(1 << (d * w), dtype=np.int64)
        for k, v in doc["counts"].items():
            counts[int(k)] = int(v)
        return cls(d, w, counts, int(doc["total"]), doc.get("n"), doc.get("period_kind"))


class CellTally:
    """Acumulador de contagens; a fusão é por soma, logo independe da ordem."""

    def __init__(self, d: int, w: int):
        _checar_orcamento(d, w)
        self.d, self.w = d, w
        self.counts = np.zeros(1 << (d * w), dtype=np.int64)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def add_indices(self, idx: np.ndarray) -> None:
        self.counts += np.bincount(np.asarray(idx, dtype=np.int64), minlength=len(self.counts))

    def add_windows(self, cols: Sequence[np.ndarray]) -> None:
        """Colunas de prefixos inteiros (w bits cada), uma por coordenada."""
        if len(cols) != self.d:
            raise EntradaInvalida("número de colunas diferente de d")
        self.add_indices(_indices_de_janelas(cols, self.w))

    def add_points(self, points: np.ndarray) -> None:
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[1] != self.d:
            raise EntradaInvalida(f"pontos com {pts.shape[1]} coordenadas para d = {self.d}")
        if len(pts) and (pts.min() < 0.0 or pts.max() >= 1.0):
            raise EntradaInvalida("pontos fora de [0, 1)")
        cel = np.floor(pts * float(1 << self.w)).astype(np.int64)
        self.add_windows([cel[:, k] for k in range(self.d)])

    def merge(self, other: "CellTally") -> "CellTally":
        if (other.d, other.w) != (self.d, self.w):
            raise EntradaInvalida("contagens com (d, w) diferentes")
        self.counts += other.counts
        return self

    def result(self, n: int | None = None, period_kind: str | None = None) -> TallyResult:
        return TallyResult(self.d, self.w, self.counts.copy(), self.total, n, period_kind)


def brute_tally(points: np.ndarray, w: int) -> TallyResult:
    """Conta pontos de [0,1)^d (N×d, ou vetor para d = 1) em células de lado 2^-w."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    d = pts.shape[1]
    _checar_orcamento(d, w, len(pts))
    t = CellTally(d, w)
    t.add_points(pts)
    return t.result()


def reorder_tally_invariance(points: np.ndarray, permutation: Sequence[int], d: int, w: int) -> bool:
    pts = np.asarray(points, dtype=np.float64).reshape(-1, d)
    perm = np.asarray(permutation, dtype=np.int64)
    if len(perm) != len(pts) or not np.array_equal(np.sort(perm), np.arange(len(pts))):
        raise EntradaInvalida("permutação não é bijetora")
    return bool(np.array_equal(brute_tally(pts, w).counts, brute_tally(pts[perm], w).counts))


# ================== Fluxos de prefixos inteiros ==================

def stream_prefix_values(source, count: int, w: int) -> np.ndarray:
    """Os w primeiros bits das `count` primeiras saídas da fonte, como inteiros."""
    if isinstance(source, F2GeneratorSpec):
        if w > source.w:
            raise EntradaInvalida(f"w = {w} maior que a saída ({source.w} bits)")
        return output_prefix_values(source, state_sequence(source, count), w).astype(np.int64)
    if isinstance(source, CounterSpec):
        if w > source.n:
            raise EntradaInvalida(f"w = {w} maior que n = {source.n}")
        return (counter_values(source.n, count) >> np.uint64(source.n - w)).astype(np.int64)
    if isinstance(source, LcgSpec):
        return _lcg_prefix(source, lcg_values(source, count), w)
    raise EntradaInvalida(f"fonte não suportada: {type(source).__name__}")


def _lcg_prefix(spec: LcgSpec, z: np.ndarray, w: int) -> np.ndarray:
    if spec.m & (spec.m - 1) == 0:
        bits = spec.m.bit_length() - 1
        if w > bits:
            raise EntradaInvalida(f"w = {w} maior que log2(m)")
        return (z >> np.uint64(bits - w)).astype(np.int64)
    if spec.m > (1 << 32):
        raise OrcamentoExcedido("prefixo de LCG com m não potência de 2 exige m <= 2^32")
    return ((z << np.uint64(w)) // np.uint64(spec.m)).astype(np.int64)


def full_cycle_tally(spec: F2GeneratorSpec, d: int, w: int, states: np.ndarray | None = None) -> TallyResult:
    """Ciclo completo a partir da semente, janelas sobrepostas circulares."""
    N = (1 << spec.n) - 1
    _checar_orcamento(d, w, N)
    if states is None:
        states = state_sequence(spec, N)
    vals = output_prefix_values(spec, states, w).astype(np.int64)
    t = CellTally(d, w)
    t.add_windows([np.roll(vals, -k) for k in range(d)])
    return t.result(spec.n, PERIODO_MENOS_UM)


def counter_full_period_tally(spec: CounterSpec, d: int, w: int) -> TallyResult:
    N = spec.period
    _checar_orcamento(d, w, N)
    vals = stream_prefix_values(spec, N, w)
    t = CellTally(d, w)
    t.add_windows([np.roll(vals, -k) for k in range(d)])
    return t.result(spec.n, PERIODO_CHEIO)


def lcg_full_period_tally(spec: LcgSpec, d: int, w: int, period: int) -> TallyResult:
    """Contagem de janelas sobrepostas ao longo de um período de LCG, em blocos."""
    _checar_orcamento(d, w)
    t = CellTally(d, w)
    for i, cols in enumerate(iter_windows(spec, period, d)):
        t.add_windows([_lcg_prefix(spec, c, w) for c in cols])
        if i % 32 == 31:
            log_info(f"contagem LCG: bloco {i + 1}")
    res = t.result()
    log_ok(f"contagem LCG ({d},{w}): min {int(res.counts.min())}, max {int(res.counts.max())}")
    return res


# ================== Veredito estrutural ==================

class _LinhasDeSaida:
    """Linhas e_j·B·A^(i+1) como ints, calculadas sob demanda e guardadas."""

    def __init__(self, spec: F2GeneratorSpec):
        self.spec = spec
        self._linhas_B = spec._linhas_B
        self._potencias: dict[int, list[int]] = {}

    def __call__(self, j: int, i: int) -> int:
        lst = self._potencias.setdefault(j, [])
        while len(lst) <= i:
            lst.append(self.spec.linha_vezes_A(lst[-1] if lst else self._linhas_B[j]))
        return lst[i]


def build_tuple_matrix(spec: F2GeneratorSpec, d: int, w: int) -> BitMatrix:
    """Blocos i = 0..d-1: as w primeiras linhas de B·A^(i+1)."""
    if d < 1:
        raise EntradaInvalida("precisa d >= 1")
    if not 1 <= w <= spec.w:
        raise EntradaInvalida(f"w precisa estar em 1..{spec.w}")
    linha = _LinhasDeSaida(spec)
    return BitMatrix.from_ints([linha(j, i) for i in range(d) for j in range(w)], spec.n)


class Verdict(NamedTuple):
    kind: str              # "equidistributed" | "not-equidistributed" | "impossible"
    rank: int | None
    dw: int
    structural_only: bool

    @property
    def equidistributed(self) -> bool:
        return self.kind == "equidistributed"


def is_equidistributed(spec: F2GeneratorSpec, d: int, w: int,
                       certificate: PeriodCertificate | None = None) -> Verdict:
    if certificate is None:
        certificate = certify_period(spec)
    so_estrutural = not certificate.maximal
    dw = d * w
    if dw > spec.n:
        return Verdict("impossible", None, dw, so_estrutural)
    r = rank(build_tuple_matrix(spec, d, w))
    return Verdict("equidistributed" if r == dw else "not-equidistributed", r, dw, so_estrutural)


class Agreement(NamedTuple):
    d: int
    w: int
    rank_verdict: bool
    tally_verdict: bool
    tally: TallyResult

    @property
    def agree(self) -> bool:
        return self.rank_verdict == self.tally_verdict


def maximal_cycle_states(spec: F2GeneratorSpec) -> np.ndarray:
    """Estados de um período completo; erro se o período não for 2^n - 1."""
    cfg = carregar_config()
    if spec.n > cfg.verify_max_n:
        raise EntradaInvalida(f"verificação exaustiva exige n <= {cfg.verify_max_n}")
    if spec.seed == 0:
        raise EntradaInvalida("semente nula: o estado zero é fixo")
    N = (1 << spec.n) - 1
    states = state_sequence(spec, N)
    if int(states[-1]) != spec.seed or len(np.unique(states)) != N:
        raise EntradaInvalida("verificação exige período máximo 2^n - 1")
    return states


def verify_equidist(spec: F2GeneratorSpec, d: int, w: int, states: np.ndarray | None = None) -> Agreement:
    """Compara o veredito do posto com a contagem exaustiva do ciclo completo."""
    if d * w > spec.n:
        raise EntradaInvalida(f"dw = {d * w} > n = {spec.n}")
    if states is None:
        states = maximal_cycle_states(spec)
    cert = PeriodCertificate("exhaustion", (1 << spec.n) - 1, "ciclo enumerado")
    verdict = is_equidistributed(spec, d, w, cert)
    tally = full_cycle_tally(spec, d, w, states)
    acordo = Agreement(d, w, verdict.equidistributed, tally.matches_pattern(), tally)
    if not acordo.agree:
        log_warn(f"DISCORDÂNCIA em (d,w) = ({d},{w}): posto {verdict.rank}, contagem {tally.matches_pattern()}")
    return acordo


class AgreementRow(NamedTuple):
    """Agreement sem o vetor de contagens."""
    d: int
    w: int
    rank_verdict: bool
    tally_verdict: bool
    min_count: int
    max_count: int

    @classmethod
    def of(cls, a: Agreement) -> "AgreementRow":
        return cls(a.d, a.w, a.rank_verdict, a.tally_verdict, int(a.tally.counts.min()), int(a.tally.counts.max()))

    @property
    def agree(self) -> bool:
        return self.rank_verdict == self.tally_verdict

    def to_dict(self) -> dict:
        return {"d": self.d, "w": self.w, "rank_verdict": self.rank_verdict, "tally_verdict": self.tally_verdict,
                "agree": self.agree, "min_count": self.min_count, "max_count": self.max_count}

    @classmethod
    def from_dict(cls, doc: dict) -> "AgreementRow":
        return cls(int(doc["d"]), int(doc["w"]), bool(doc["rank_verdict"]), bool(doc["tally_verdict"]),
                   int(doc["min_count"]), int(doc["max_count"]))


@dataclass
class VerifyReport:
    n: int
    rows: list[AgreementRow]
    tally: TallyResult | None = None

    @classmethod
    def of(cls, n: int, acordos: Sequence[Agreement]) -> "VerifyReport":
        tally = acordos[0].tally if len(acordos) == 1 else None
        return cls(n, [AgreementRow.of(a) for a in acordos], tally)

    @property
    def all_agree(self) -> bool:
        return all(r.agree for r in self.rows)

    def to_dict(self) -> dict:
        doc = {"n": self.n, "all_agree": self.all_agree, "results": [r.to_dict() for r in self.rows]}
        if self.tally is not None:
            doc["tally"] = self.tally.to_dict()
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "VerifyReport":
        tally = TallyResult.from_dict(doc["tally"]) if doc.get("tally") else None
        return cls(int(doc["n"]), [AgreementRow.from_dict(r) for r in doc["results"]], tally)

    def to_text(self) -> str:
        texto = [pd.DataFrame([r.to_dict() for r in self.rows]).to_string(index=False),
                 "AGREE" if self.all_agree else "DISAGREE"]
        if len(self.rows) == 1:
            r = self.rows[0]
            texto.append(f"({r.d},{r.w}): " + ("equidistributed" if r.rank_verdict else "not equidistributed"))
        return "\n".join(texto)


# ================== Figuras de mérito ==================

@dataclass(frozen=True)
class ResolutionRow:
    d: int
    w_star: int
    w_cap: int
    w_d: int

    @property
    def delta_d(self) -> int:
        return self.w_star - self.w_d


@dataclass
class EquidistReport:
    n: int
    rows: list[ResolutionRow]
    period_certified: bool
    certificate: str = ""
    name: str = ""

    @property
    def Delta(self) -> int:
        return max((r.delta_d for r in self.rows), default=0)

    @property
    def W(self) -> int:
        return sum(r.w_d for r in self.rows)

    @property
    def W_bound(self) -> int:
        return sum(r.w_star for r in self.rows)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"d": r.d, "w_star": r.w_star, "w_cap": r.w_cap, "w_d": r.w_d, "delta_d": r.delta_d} for r in self.rows],
            columns=["d", "w_star", "w_cap", "w_d", "delta_d"],
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n, "name": self.name,
            "period_certified": self.period_certified, "certificate": self.certificate,
            "rows": [{"d": r.d, "w_star": r.w_star, "w_cap": r.w_cap, "w_d": r.w_d, "delta_d": r.delta_d}
                     for r in self.rows],
            "Delta": self.Delta, "W": self.W, "W_bound": self.W_bound,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EquidistReport":
        """Inverso de to_dict; Delta, W e W_bound são recalculados das linhas."""
        rows = [ResolutionRow(int(r["d"]), int(r["w_star"]), int(r["w_cap"]), int(r["w_d"])) for r in doc["rows"]]
        return cls(int(doc["n"]), rows, bool(doc["period_certified"]), doc.get("certificate", ""), doc.get("name", ""))

    def to_text(self) -> str:
        cab = f"{self.name or 'gerador'}: n = {self.n}, período "
        cab += f"certificado ({self.certificate})" if self.period_certified else f"NÃO certificado ({self.certificate})"
        rodape = f"Δ = {self.Delta}   W = {self.W}   W_bound = {self.W_bound}"
        return "\n".join([cab, self.to_frame().to_string(index=False), rodape])


def resolution_table(spec: F2GeneratorSpec, d_max: int | None = None,
                     certificate: PeriodCertificate | None = None) -> EquidistReport:
    """w_d = maior w <= min(saída, ⌊n/d⌋) com matriz de tuplas de posto cheio.

    Para cada d as linhas vão intercaladas (linha j de cada um dos d blocos),
    então as d·w primeiras formam a matriz de (d, w) e w_d sai de um único
    prefixo independente. Como w_d <= w_(d-1), cada d só olha w <= w_(d-1).
    """
    n = spec.n
    d_max = n if d_max is None else d_max
    if not 1 <= d_max <= n:
        raise EntradaInvalida(f"d_max precisa estar em 1..{n}")
    if certificate is None:
        certificate = certify_period(spec)

    linha = _LinhasDeSaida(spec)
    w_anterior = min(spec.w, n)
    rows = []
    for d in range(1, d_max + 1):
        w_star = n // d
        w_cap = min(spec.w, w_star)
        w_lim = min(w_cap, w_anterior)
        w_d = 0
        if w_lim:
            intercaladas = [linha(j, i) for j in range(w_lim) for i in range(d)]
            w_d = min(w_lim, independent_prefix(BitMatrix.from_ints(intercaladas, n)) // d)
        rows.append(ResolutionRow(d, w_star, w_cap, w_d))
        w_anterior = w_d
    rep = EquidistReport(n, rows, certificate.maximal, certificate.kind, spec.name)
    log_info(f"resolução: Δ = {rep.Delta}, W = {rep.W} de {rep.W_bound}")
    return rep


def wstar_asymptotic(n: int) -> tuple[int, float]:
    """(Σ_{d<=n} ⌊n/d⌋, razão por n ln n)."""
    if n < 2:
        raise EntradaInvalida("precisa n >= 2")
    W_bound = sum(n // d for d in range(1, n + 1))
    return W_bound, W_bound / (n * math.log(n))
