# -*- coding: utf-8 -*-
"""
Geradores congruenciais lineares z' = (a·z + b) mod m, x = z'/m.

Inclui a patologia do RANDU (todas as triplas em 15 planos de normal
(9, -6, 1)), contagem/espaçamento de planos e uma busca espectral exaustiva
em escala de mesa (d = 2 ou 3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .config import carregar_config
from .errors import EntradaInvalida, OrcamentoExcedido
from .log import log_info, log_ok

RANDU_A = 65539
RANDU_M = 1 << 31
RANDU_NORMAL = (9, -6, 1)
# índices de plano de 9x - 6y + z com x, y, z em [0, 1)
RANDU_PLANOS = frozenset(range(-5, 10))


@dataclass(frozen=True)
class LcgSpec:
    a: int
    b: int
    m: int
    z0: int
    name: str = ""

    def __post_init__(self):
        if self.m < 2:
            raise EntradaInvalida("módulo precisa ser >= 2")
        if self.m > (1 << 64):
            raise EntradaInvalida("módulo acima de 2^64 não é suportado")
        if not (0 <= self.a < self.m and 0 <= self.b < self.m):
            raise EntradaInvalida("precisa 0 <= a, b < m")
        if not 0 <= self.z0 < self.m:
            raise EntradaInvalida("semente fora de [0, m)")

    @property
    def vetorizavel(self) -> bool:
        return self.b == 0 and self.m <= (1 << 32)

    def with_seed(self, z0: int) -> "LcgSpec":
        return LcgSpec(self.a, self.b, self.m, z0, self.name)


RANDU = LcgSpec(RANDU_A, 0, RANDU_M, 1, "randu")
MINSTD = LcgSpec(16807, 0, (1 << 31) - 1, 1, "minstd")


@dataclass(frozen=True)
class LatticeVector:
    q: tuple[int, ...]
    norm2: int

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(t) for t in self.q))
        if not any(self.q):
            raise EntradaInvalida("vetor nulo")
        if self.norm2 != sum(t * t for t in self.q):
            raise EntradaInvalida("norm2 inconsistente com q")

    @classmethod
    def of(cls, q: Sequence[int]) -> "LatticeVector":
        q = tuple(int(t) for t in q)
        return cls(q, sum(t * t for t in q))

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm2)

    @property
    def spacing(self) -> float:
        return 1.0 / self.norm

    def to_dict(self) -> dict:
        return {"q": list(self.q), "norm2": self.norm2, "norm": self.norm, "spacing": self.spacing}

    @classmethod
    def from_dict(cls, doc: dict) -> "LatticeVector":
        return cls(tuple(doc["q"]), int(doc["norm2"]))


# ================== Passo e geração em blocos ==================

def lcg_step(spec: LcgSpec, z: int) -> tuple[int, float]:
    if not 0 <= z < spec.m:
        raise EntradaInvalida(f"estado fora de [0, {spec.m})")
    z2 = (spec.a * z + spec.b) % spec.m  # int do Python: sem overflow
    return z2, z2 / spec.m


def _tabela_potencias(a: int, m: int, size: int) -> np.ndarray:
    """a^1..a^size mod m por duplicação (uint64; exige m <= 2^32)."""
    tbl = np.empty(size, dtype=np.uint64)
    tbl[0] = a % m
    mm = np.uint64(m)
    k = 1
    while k < size:
        t = min(k, size - k)
        tbl[k:k + t] = (tbl[:t] * tbl[k - 1]) % mm
        k += t
    return tbl


def iter_lcg_blocks(spec: LcgSpec, total: int, block: int | None = None,
                    z: int | None = None) -> Iterator[np.ndarray]:
    """z_1..z_total em blocos uint64; o último valor de um bloco semeia o próximo."""
    block = carregar_config().lcg_block_size if block is None else block
    z = spec.z0 if z is None else z
    if spec.vetorizavel:
        tbl = _tabela_potencias(spec.a, spec.m, min(block, max(total, 1)))
        mm = np.uint64(spec.m)
        feitos = 0
        while feitos < total:
            k = min(len(tbl), total - feitos)
            vals = (tbl[:k] * np.uint64(z)) % mm
            z = int(vals[-1])
            feitos += k
            yield vals
        return
    feitos = 0
    while feitos < total:
        k = min(block, total - feitos)
        vals = np.empty(k, dtype=np.uint64)
        for i in range(k):
            z = (spec.a * z + spec.b) % spec.m
            vals[i] = z
        feitos += k
        yield vals


def lcg_values(spec: LcgSpec, count: int, z: int | None = None) -> np.ndarray:
    if count <= 0:
        return np.empty(0, dtype=np.uint64)
    return np.concatenate(list(iter_lcg_blocks(spec, count, z=z)))


def iter_windows(spec: LcgSpec, total: int, d: int, block: int | None = None) -> Iterator[tuple[np.ndarray, ...]]:
    """Janelas sobrepostas (z_j, ..., z_{j+d-1}) de z_1..z_total, índices mod total.

    Cada item é uma tupla de d colunas (views) de mesmo tamanho; as janelas que
    dão a volta no fim do ciclo saem por último.
    """
    block = carregar_config().lcg_block_size if block is None else block
    if d < 1:
        raise EntradaInvalida("dimensão precisa ser >= 1")
    if total < d or block < d:
        raise EntradaInvalida("total e bloco precisam ser >= d")
    cabeca = None
    cauda = np.empty(0, dtype=np.uint64)
    for vals in iter_lcg_blocks(spec, total, block):
        if cabeca is None:
            cabeca = vals[:d - 1].copy()
        ext = np.concatenate([cauda, vals])
        L = len(ext) - (d - 1)
        if L > 0:
            yield tuple(ext[k:k + L] for k in range(d))
            cauda = ext[L:]
        else:
            cauda = ext
    if d > 1:
        ext = np.concatenate([cauda, cabeca])
        yield tuple(ext[k:k + d - 1] for k in range(d))


# ================== RANDU ==================

def randu_recurrence_check(z0: int, steps: int) -> int:
    """Janelas de z_0..z_{steps-1} com z_{k+2} - 6 z_{k+1} + 9 z_k != 0 mod 2^31."""
    if z0 % 2 == 0:
        raise EntradaInvalida("RANDU exige semente ímpar")
    if steps < 3:
        raise EntradaInvalida("são necessários ao menos 3 valores")
    spec = RANDU.with_seed(z0 % RANDU_M)
    z = np.concatenate([np.array([spec.z0], dtype=np.uint64), lcg_values(spec, steps - 1)]).astype(np.int64)
    resid = (z[2:] - 6 * z[1:-1] + 9 * z[:-2]) % RANDU_M
    violacoes = int(np.count_nonzero(resid))
    log_info(f"RANDU: {steps - 2} janelas, {violacoes} violação(ões)")
    return violacoes


def _indices_de_plano(cols: Sequence[np.ndarray], normal: Sequence[int], m: int, tol: float) -> np.ndarray:
    num = np.zeros(len(cols[0]), dtype=np.int64)
    for c, k in zip(cols, normal):
        num += np.int64(k) * c.astype(np.int64)
    c = num / m
    idx = np.rint(c)
    if len(c) and np.max(np.abs(c - idx)) > tol:
        raise EntradaInvalida("índice de plano não inteiro: normal ou gerador errado")
    return idx.astype(np.int64)


def _checar_normal(spec: LcgSpec, normal: Sequence[int]) -> tuple[int, ...]:
    normal = tuple(int(k) for k in normal)
    if not normal or not any(normal):
        raise EntradaInvalida("normal nula")
    if spec.m > (1 << 32) or sum(abs(k) for k in normal) * spec.m >= (1 << 63):
        raise OrcamentoExcedido("m grande demais para a contagem de planos em int64")
    return normal


def plane_count(spec: LcgSpec, normal: Sequence[int] = RANDU_NORMAL, samples: int = 100_000) -> set[int]:
    """Índices distintos c = Σ normal_k·x_{j+k} sobre janelas sobrepostas de `samples` saídas."""
    normal = _checar_normal(spec, normal)
    d = len(normal)
    if samples < d:
        raise EntradaInvalida(f"são necessárias ao menos {d} amostras")
    tol = carregar_config().plane_tolerance
    z = lcg_values(spec, samples)
    L = samples - d + 1
    idx = _indices_de_plano([z[k:k + L] for k in range(d)], normal, spec.m, tol)
    return set(int(t) for t in np.unique(idx))


def plane_count_full_period(spec: LcgSpec, normal: Sequence[int] = RANDU_NORMAL,
                            period: int | None = None) -> set[int]:
    """Como plane_count, mas sobre um período inteiro (janelas circulares)."""
    normal = _checar_normal(spec, normal)
    if period is None:
        period = lcg_period(spec)
        if period is None:
            raise EntradaInvalida("período não encontrado dentro do limite")
    tol = carregar_config().plane_tolerance
    indices: set[int] = set()
    for i, cols in enumerate(iter_windows(spec, period, len(normal))):
        indices.update(int(t) for t in np.unique(_indices_de_plano(cols, normal, spec.m, tol)))
        if i % 32 == 31:
            log_info(f"planos: bloco {i + 1}, {len(indices)} índice(s) até aqui")
    log_ok(f"planos no período completo ({period}): {len(indices)}")
    return indices


def plane_spacing(normal: Sequence[int]) -> float:
    s = sum(int(k) ** 2 for k in normal)
    if s == 0:
        raise EntradaInvalida("normal nula")
    return 1.0 / math.sqrt(s)


def mean_spacing(m: int, d: int) -> float:
    """Distância média entre pontos, m^(-1/d); o volume por ponto é 1/m."""
    if m < 2 or d < 1:
        raise EntradaInvalida("precisa m >= 2 e d >= 1")
    return math.exp(-math.log(m) / d)


def is_bijection(spec: LcgSpec) -> bool:
    return math.gcd(spec.a, spec.m) == 1


def lcg_period(spec: LcgSpec, cap: int | None = None) -> int | None:
    """Menor t >= 1 com z_t = z0, por varredura; None se passar de `cap` (padrão m)."""
    cap = spec.m if cap is None else cap
    feitos = 0
    for vals in iter_lcg_blocks(spec, cap):
        hit = np.flatnonzero(vals == np.uint64(spec.z0))
        if len(hit):
            t = feitos + int(hit[0]) + 1
            log_ok(f"período do LCG {spec.name or ''}: {t}")
            return t
        feitos += len(vals)
    return None


@dataclass
class RanduReport:
    """Resultado da demonstração dos planos do RANDU."""
    seed: int
    samples: int
    recurrence_violations: int
    planes: list[int]
    normal: tuple[int, ...] = RANDU_NORMAL
    period: int | None = None
    tally_3_4: dict | None = None   # min_count, max_count, equidistributed

    @property
    def spacing(self) -> float:
        return plane_spacing(self.normal)

    def to_dict(self) -> dict:
        doc = {
            "seed": self.seed, "samples": self.samples, "recurrence_violations": self.recurrence_violations,
            "normal": list(self.normal), "spacing": self.spacing,
            "planes": list(self.planes), "plane_count": len(self.planes),
        }
        if self.period is not None:
            doc["period"] = self.period
        if self.tally_3_4 is not None:
            doc["tally_3_4"] = dict(self.tally_3_4)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "RanduReport":
        return cls(int(doc["seed"]), int(doc["samples"]), int(doc["recurrence_violations"]),
                   [int(c) for c in doc["planes"]], tuple(doc.get("normal", RANDU_NORMAL)),
                   doc.get("period"), doc.get("tally_3_4"))

    def to_text(self) -> str:
        linhas = [
            f"RANDU z0 = {self.seed}",
            f"violações da recorrência z[k+2] - 6z[k+1] + 9z[k]: {self.recurrence_violations}",
            f"planos distintos: {len(self.planes)} {self.planes}",
            f"espaçamento 1/sqrt(118) = {self.spacing:.7f}",
        ]
        if self.period is not None:
            linhas.append(f"período: {self.period}")
        if self.tally_3_4 is not None:
            t = self.tally_3_4
            linhas.append(f"(3,4): min {t['min_count']} max {t['max_count']} -> "
                          + ("equidistributed" if t["equidistributed"] else "NOT equidistributed"))
        return "\n".join(linhas)


# ================== Busca espectral ==================

def spectral_search(spec: LcgSpec, d: int, coeff_bound: int) -> LatticeVector | None:
    """Menor q != 0 com |q_i| <= bound e q_1 + q_2 a + q_3 a^2 ≡ 0 (mod m).

    Desempate pela ordem lexicográfica de |q|; o sinal é normalizado para o
    primeiro componente não nulo positivo. None: nenhum vetor dentro do limite.
    """
    if d not in (2, 3):
        raise EntradaInvalida("busca espectral só para d = 2 ou 3")
    if spec.b != 0:
        raise EntradaInvalida("busca espectral exige LCG multiplicativo (b = 0)")
    if spec.m > (1 << 31):
        raise EntradaInvalida("busca espectral exige m <= 2^31")
    if coeff_bound < 1:
        raise EntradaInvalida("limite precisa ser >= 1")
    if d == 3 and coeff_bound > 64:
        raise OrcamentoExcedido("limite > 64 em d = 3")
    if d == 2 and coeff_bound > 4096:
        raise OrcamentoExcedido("limite > 4096 em d = 2")

    m = spec.m
    coefs = [1, spec.a % m, (spec.a * spec.a) % m][:d]
    r = np.arange(-coeff_bound, coeff_bound + 1, dtype=np.int64)
    grades = np.meshgrid(*([r] * d), indexing="ij")
    resid = np.zeros(grades[0].shape, dtype=np.int64)
    for g, c in zip(grades, coefs):
        resid = (resid + g * np.int64(c)) % m
    norm2 = sum(g * g for g in grades)
    ok = (resid == 0) & (norm2 > 0)
    if not ok.any():
        log_info(f"busca espectral: nada com |q_i| <= {coeff_bound}")
        return None
    menor = int(norm2[ok].min())
    cand = np.argwhere(ok & (norm2 == menor))
    vetores = set()
    for pos in cand:
        q = tuple(int(r[i]) for i in pos)
        primeiro = next(t for t in q if t)
        vetores.add(q if primeiro > 0 else tuple(-t for t in q))
    q = min(vetores, key=lambda v: (tuple(abs(t) for t in v), v))
    res = LatticeVector.of(q)
    log_ok(f"busca espectral: q = {q}, espaçamento {res.spacing:.7f}")
    return res


@dataclass
class SpectralResult:
    d: int
    bound: int
    vector: LatticeVector | None

    @property
    def found(self) -> bool:
        return self.vector is not None

    def to_dict(self) -> dict:
        doc = {"d": self.d, "bound": self.bound, "found": self.found}
        if self.vector is not None:
            doc |= self.vector.to_dict()
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "SpectralResult":
        vetor = LatticeVector.from_dict(doc) if doc.get("found") else None
        return cls(int(doc["d"]), int(doc["bound"]), vetor)

    def to_text(self) -> str:
        v = self.vector
        if v is None:
            return f"nenhum vetor com |q_i| <= {self.bound} (limite pequeno demais)"
        return f"q = {v.q}  |q| = {v.norm:.7f}  espaçamento = {v.spacing:.7f}"
