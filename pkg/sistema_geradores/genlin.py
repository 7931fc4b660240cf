# -*- coding: utf-8 -*-
"""
Geradores F2-lineares: u_i = A·u_{i-1}, v_i = B·u_i, x_i = Σ v_{i,j} 2^-j.

Convenção de bits: o bit 0 do estado é o "primeiro"; a projeção inicial B
pega os bits 0..w-1 e v_1 (= bit 0) é o bit mais significativo da saída.
Um xor-shift "left" por k leva o bit i ao bit i+k (o << de inteiros).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .config import carregar_config
from .errors import EntradaInvalida
from .gf2 import (
    BitMatrix, BitVector, F2Poly, berlekamp_massey, is_irreducible, mersenne_factorization,
    min_poly, poly_order, rank, _reciprocal,
)
from .log import log_info, log_ok, log_warn

DIRECOES = ("left", "right")
TEMPLATES = {
    "lrl": ("left", "right", "left"),
    "rlr": ("right", "left", "right"),
    "lr": ("left", "right"),
    "rl": ("right", "left"),
}


@dataclass(frozen=True)
class XorShift:
    direction: str
    amount: int

    def __post_init__(self):
        if self.direction not in DIRECOES:
            raise EntradaInvalida(f"direção inválida: {self.direction!r}")
        if self.amount < 1:
            raise EntradaInvalida(f"deslocamento precisa ser >= 1: {self.amount}")


def _aplicar_shifts(ops: Sequence[XorShift], u: int, mask: int) -> int:
    for op in ops:
        if op.direction == "left":
            u ^= (u << op.amount) & mask
        else:
            u ^= u >> op.amount
    return u


def _tabelas_de_bytes(colunas: Sequence[int]) -> list[list[int]]:
    """Para cada byte do estado, a imagem por A de todos os 256 valores."""
    tabelas = []
    for t in range(0, len(colunas), 8):
        bloco = colunas[t:t + 8]
        tbl = [0] * 256
        for v in range(1, 256):
            low = (v & -v).bit_length() - 1
            tbl[v] = tbl[v & (v - 1)] ^ (bloco[low] if low < len(bloco) else 0)
        tabelas.append(tbl)
    return tabelas


def _reverse_bits(x: int, w: int) -> int:
    return int(format(x, f"0{w}b")[::-1], 2) if w else 0


@dataclass(frozen=True, eq=False)
class F2GeneratorSpec:
    """
    Recorrência (A, B) com n bits de estado e w bits de saída.
      - A: BitMatrix n×n densa ou tupla de XorShift (composição aplicada em ordem)
      - B: BitMatrix w×n densa ou None (projeção dos w bits iniciais)
      - seed: estado inicial (int, bit i = coordenada i); padrão 1
    """
    n: int
    w: int
    A: BitMatrix | tuple[XorShift, ...]
    B: BitMatrix | None = None
    name: str = ""
    seed: int = 1

    def __post_init__(self):
        if not 1 <= self.w <= self.n:
            raise EntradaInvalida(f"precisa 1 <= w <= n (w={self.w}, n={self.n})")
        if isinstance(self.A, BitMatrix):
            if (self.A.rows, self.A.cols) != (self.n, self.n):
                raise EntradaInvalida(f"A precisa ser {self.n}x{self.n}")
        else:
            object.__setattr__(self, "A", tuple(self.A))
            if not all(isinstance(op, XorShift) for op in self.A):
                raise EntradaInvalida("A precisa ser BitMatrix ou sequência de XorShift")
        if self.B is not None:
            if (self.B.rows, self.B.cols) != (self.w, self.n):
                raise EntradaInvalida(f"B precisa ser {self.w}x{self.n}")
            if self.B.is_zero():
                raise EntradaInvalida("B = 0 não gera saída")
        if not 0 <= self.seed < (1 << self.n):
            raise EntradaInvalida("semente fora do intervalo do estado")

    # ----- formas densas (análise estrutural) -----
    @property
    def is_xorshift(self) -> bool:
        return not isinstance(self.A, BitMatrix)

    @property
    def mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def dense_A(self) -> BitMatrix:
        if not self.is_xorshift:
            return self.A
        colunas = [_aplicar_shifts(self.A, 1 << j, self.mask) for j in range(self.n)]
        return BitMatrix.from_ints(colunas, self.n).transpose()

    @cached_property
    def dense_B(self) -> BitMatrix:
        if self.B is not None:
            return self.B
        return BitMatrix.from_ints([1 << i for i in range(self.w)], self.n)

    @cached_property
    def _linhas_B(self) -> list[int]:
        return self.dense_B.to_ints()

    @cached_property
    def _tabelas(self) -> list[list[int]]:
        return _tabelas_de_bytes(self.dense_A.column_ints())

    def dense_transition(self) -> BitMatrix:
        return self.dense_A

    # ----- caminho rápido (palavras) -----
    def transition(self, u: int) -> int:
        if self.is_xorshift:
            return _aplicar_shifts(self.A, u, self.mask)
        r = 0
        for t, tbl in enumerate(self._tabelas):
            r ^= tbl[(u >> (8 * t)) & 0xFF]
        return r

    @cached_property
    def _tabelas_linhas(self) -> list[list[int]]:
        return _tabelas_de_bytes(self.dense_A.to_ints())

    def linha_vezes_A(self, r: int) -> int:
        """Produto do vetor linha r (bit i = coordenada i) por A."""
        if self.is_xorshift:
            # Aᵀ: operações em ordem inversa, com a direção trocada
            for op in reversed(self.A):
                if op.direction == "left":
                    r ^= r >> op.amount
                else:
                    r ^= (r << op.amount) & self.mask
            return r
        out = 0
        for t, tbl in enumerate(self._tabelas_linhas):
            out ^= tbl[(r >> (8 * t)) & 0xFF]
        return out

    def output_bits(self, u: int) -> int:
        """B·u como int (bit j-1 = v_j)."""
        if self.B is None:
            return u & ((1 << self.w) - 1)
        out = 0
        for j, linha in enumerate(self._linhas_B):
            if (linha & u).bit_count() & 1:
                out |= 1 << j
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, F2GeneratorSpec):
            return NotImplemented
        mesmo_A = (self.A == other.A) if self.is_xorshift == other.is_xorshift else False
        mesmo_B = (self.B is None and other.B is None) or (
            self.B is not None and other.B is not None and self.B == other.B)
        return (self.n, self.w, self.name, self.seed) == (other.n, other.w, other.name, other.seed) and mesmo_A and mesmo_B

    __hash__ = None


@dataclass(frozen=True)
class CounterSpec:
    """Contador y_j = j mod 2^n (não é F2-linear: o incremento propaga carry)."""
    n: int
    name: str = "counter"

    def __post_init__(self):
        if self.n < 1:
            raise EntradaInvalida("contador precisa de n >= 1")

    @property
    def w(self) -> int:
        return self.n

    @property
    def period(self) -> int:
        return 1 << self.n


@dataclass(frozen=True)
class GeneratorState:
    u: BitVector


def xorshift_spec(n: int, w: int, shifts: Sequence[tuple[str, int]], name: str = "",
                  B: BitMatrix | None = None, seed: int = 1) -> F2GeneratorSpec:
    return F2GeneratorSpec(n=n, w=w, A=tuple(XorShift(d, k) for d, k in shifts), B=B, name=name, seed=seed)


# ================== Operações ==================

def step(spec: F2GeneratorSpec, state: GeneratorState) -> tuple[GeneratorState, BitVector]:
    if state.u.length != spec.n:
        raise EntradaInvalida(f"estado com {state.u.length} bits para n = {spec.n}")
    novo = spec.transition(state.u.bits)
    return GeneratorState(BitVector(spec.n, novo)), BitVector(spec.w, spec.output_bits(novo))


def output_real(v: BitVector) -> float:
    """x = Σ v_j 2^-j com v_1 (bit 0) como bit mais significativo."""
    if v.length < 1:
        raise EntradaInvalida("saída precisa de w >= 1")
    return math.ldexp(_reverse_bits(v.bits, v.length), -v.length)


def cycle_length(spec: F2GeneratorSpec, seed: BitVector | int | None = None, cap: int | None = None) -> int | None:
    """Menor t >= 1 com estado de volta à semente; None se passar de `cap`."""
    cap = carregar_config().cycle_cap if cap is None else cap
    s = spec.seed if seed is None else (seed.bits if isinstance(seed, BitVector) else int(seed))
    if s == 0:
        raise EntradaInvalida("semente nula: o estado zero é fixo")
    u = s
    for t in range(1, cap + 1):
        u = spec.transition(u)
        if u == s:
            return t
    return None


def counter_sequence(n: int, j: int) -> BitVector:
    """Representação de j mod 2^n com o bit mais significativo primeiro."""
    return BitVector(n, _reverse_bits(j % (1 << n), n))


# ================== Certificação do período ==================

class PeriodCertificate(NamedTuple):
    kind: str            # "exhaustion" | "primitive" | "below-maximal" | "uncertified"
    #                      LCG e contador: "cycle" | "exceeds-cap" | "counter"
    period: int | None
    detail: str

    @property
    def maximal(self) -> bool:
        return self.kind in ("exhaustion", "primitive")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "period": self.period, "detail": self.detail, "maximal": self.maximal}

    @classmethod
    def from_dict(cls, doc: dict) -> "PeriodCertificate":
        return cls(doc["kind"], doc["period"], doc.get("detail", ""))


def certify_period(spec: F2GeneratorSpec, factorization=None) -> PeriodCertificate:
    """Exaustão para n pequeno; senão polinômio mínimo + primitividade."""
    cfg = carregar_config()
    n = spec.n
    full = (1 << n) - 1
    if rank(spec.dense_A) != n:
        return PeriodCertificate("below-maximal", None, "A não é invertível")
    if n <= cfg.exhaustive_period_max_n:
        t = cycle_length(spec, 1, cap=full)
        if t == full:
            return PeriodCertificate("exhaustion", full, f"ciclo de 2^{n}-1 a partir do estado 1")
        return PeriodCertificate("below-maximal", t, "ciclo curto a partir do estado 1")
    if factorization is None and mersenne_factorization(n) is None:
        return PeriodCertificate("uncertified", None, f"sem fatoração de 2^{n}-1")
    p = min_poly(spec.dense_A)
    if p.degree < n:
        return PeriodCertificate("below-maximal", None, f"polinômio mínimo de grau {p.degree} < n")
    if not is_irreducible(p):
        return PeriodCertificate("below-maximal", None, "polinômio mínimo redutível")
    ordem = poly_order(p, factorization)
    if ordem.primitive:
        return PeriodCertificate("primitive", full, f"polinômio mínimo primitivo {p.to_hex()}")
    return PeriodCertificate("below-maximal", ordem.order, "polinômio mínimo não primitivo")


def _sequencia_primitiva(spec: F2GeneratorSpec) -> bool:
    """Filtro barato: s_i = bit 0 de A^i·e_0 tem polinômio mínimo primitivo de grau n?

    Se A tem polinômio mínimo primitivo, toda sequência não nula herda esse
    polinômio; então o filtro não descarta candidatos bons.
    """
    n = spec.n
    seq = []
    u = 1
    for _ in range(2 * n):
        seq.append(u & 1)
        u = spec.transition(u)
    L, conn = berlekamp_massey(seq)
    if L != n:
        return False
    p = F2Poly(_reciprocal(conn, L))
    if p.degree != n or not is_irreducible(p):
        return False
    return poly_order(p).primitive


def template_padrao(n: int) -> str:
    """Template padrão: "lr" para n = 2, "lrl" nos demais."""
    return "lr" if n == 2 else "lrl"


def search_maximal(n: int, template: str | None = None, budget: int | None = None,
                   limit: int | None = None, w: int | None = None) -> list[F2GeneratorSpec]:
    """Procura composições xor-shift com período 2^n - 1 verificado por exaustão."""
    cfg = carregar_config()
    if n < 1 or n > cfg.search_max_n:
        raise EntradaInvalida(f"search_maximal exige 1 <= n <= {cfg.search_max_n}")
    template = template_padrao(n) if template is None else template
    if template not in TEMPLATES:
        raise EntradaInvalida(f"template desconhecido: {template!r} (use {', '.join(TEMPLATES)})")
    w = n if w is None else w
    full = (1 << n) - 1
    achados: list[F2GeneratorSpec] = []

    if n == 1:
        # sem deslocamentos possíveis: A = (1), período 1 = 2^1 - 1
        achados.append(F2GeneratorSpec(n=1, w=1, A=(), name="xorshift1 (period verified by exhaustion)"))
        return achados

    direcoes = TEMPLATES[template]
    testados = 0
    for amounts in itertools.product(range(1, n), repeat=len(direcoes)):
        if budget is not None and testados >= budget:
            break
        testados += 1
        spec = xorshift_spec(n, w, list(zip(direcoes, amounts)))
        if not _sequencia_primitiva(spec):
            continue
        if cycle_length(spec, 1, cap=full) != full:
            continue
        nome = f"xorshift{n}-{template}-" + "-".join(map(str, amounts)) + " (period verified by exhaustion)"
        achados.append(xorshift_spec(n, w, list(zip(direcoes, amounts)), name=nome))
        log_ok(f"search_maximal: {nome}")
        if limit is not None and len(achados) >= limit:
            break
    if not achados:
        log_warn(f"search_maximal: nenhum candidato máximo para n = {n} em {testados} tentativas")
    else:
        log_info(f"search_maximal: {len(achados)} achado(s) em {testados} tentativas")
    return achados


# ================== Sequências vetorizadas ==================

def state_sequence(spec: F2GeneratorSpec, count: int, seed: int | None = None) -> np.ndarray:
    """Estados u_1..u_count (depois de cada passo).

    uint64 quando n <= 64; acima disso um array de objetos com inteiros Python.
    """
    u = spec.seed if seed is None else seed
    largo = spec.n > 64
    out = np.empty(count, dtype=object if largo else np.uint64)
    trans = spec.transition
    for i in range(count):
        u = trans(u)
        out[i] = u
    return out


def _prefixo_int(spec: F2GeneratorSpec, u: int, bits: int) -> int:
    v = 0
    for linha in spec._linhas_B[:bits]:
        v = (v << 1) | ((linha & u).bit_count() & 1)
    return v


def output_prefix_values(spec: F2GeneratorSpec, states: np.ndarray, bits: int) -> np.ndarray:
    """Os `bits` primeiros bits de saída (v_1 mais significativo) de cada estado."""
    if not 1 <= bits <= min(spec.w, 64):
        raise EntradaInvalida(f"bits fora de 1..{min(spec.w, 64)}")
    if spec.n > 64:
        return np.fromiter((_prefixo_int(spec, int(u), bits) for u in states),
                           dtype=np.uint64, count=len(states))
    states = np.asarray(states, dtype=np.uint64)
    vals = np.zeros(states.shape, dtype=np.uint64)
    for j, linha in enumerate(spec._linhas_B[:bits]):
        bit = np.bitwise_count(states & np.uint64(linha)).astype(np.uint64) & np.uint64(1)
        vals |= bit << np.uint64(bits - 1 - j)
    return vals


def counter_values(n: int, count: int, start: int = 0) -> np.ndarray:
    j = np.arange(start, start + count, dtype=np.uint64)
    return j & np.uint64((1 << n) - 1) if n < 64 else j


def output_sequence(spec: F2GeneratorSpec, count: int, bits: int | None = None,
                    seed: int | None = None) -> np.ndarray:
    """Prefixos de saída (uint64) de count passos a partir da semente."""
    bits = min(spec.w, 64) if bits is None else bits
    return output_prefix_values(spec, state_sequence(spec, count, seed), bits)
