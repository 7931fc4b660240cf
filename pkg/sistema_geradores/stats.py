# -*- coding: utf-8 -*-
"""
χ² bicaudal e probabilidade de equidistribuição.

Tudo em escala logarítmica: N = 2^n só aparece como ln N = n ln 2 nos
termos grandes, e o fatorial vem de log-gamma (Lanczos).
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .config import carregar_config
from .equidist import CellTally, _checar_orcamento, stream_prefix_values
from .errors import EntradaInvalida, InvarianteViolada
from .log import log_info, log_warn

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_MEIO_LN_2PI = 0.5 * math.log(2.0 * math.pi)
_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 10_000
# acima disso 2^n deixa de caber num double
MAX_N_PROB = 1000


def log_gamma(x: float) -> float:
    if x <= 0 and float(x).is_integer():
        raise EntradaInvalida(f"log_gamma indefinido em {x}")
    if x < 0.5:
        # reflexão: Γ(x)Γ(1-x) = π / sin(πx)
        return math.log(math.pi / abs(math.sin(math.pi * x))) - log_gamma(1.0 - x)
    x -= 1.0
    soma = _LANCZOS[0]
    for i in range(1, _LANCZOS_G + 2):
        soma += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _MEIO_LN_2PI + (x + 0.5) * math.log(t) - t + math.log(soma)


def log_fact(k: float) -> float:
    return 0.0 if k <= 1 else log_gamma(k + 1.0)


def _gser(a: float, x: float) -> float:
    """P(a, x) pela série (x < a + 1)."""
    ap = a
    soma = dl = 1.0 / a
    for _ in range(_MAX_ITER):
        ap += 1.0
        dl *= x / ap
        soma += dl
        if abs(dl) < abs(soma) * _EPS:
            break
    return soma * math.exp(-x + a * math.log(x) - log_gamma(a))


def _gcf(a: float, x: float) -> float:
    """Q(a, x) por fração contínua (Lentz modificado, x >= a + 1)."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - log_gamma(a)) * h


def _gammainc(a: float, x: float) -> tuple[float, float]:
    if a <= 0:
        raise EntradaInvalida("gama incompleta exige a > 0")
    if x < 0:
        raise EntradaInvalida("gama incompleta exige x >= 0")
    if x == 0:
        return 0.0, 1.0
    if x < a + 1.0:
        p = min(1.0, _gser(a, x))
        return p, 1.0 - p
    q = min(1.0, _gcf(a, x))
    return 1.0 - q, q


def gammainc_lower(a: float, x: float) -> float:
    """P(a, x) regularizada."""
    return _gammainc(a, x)[0]


def gammainc_upper(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x)."""
    return _gammainc(a, x)[1]


# ================== χ² ==================

class ChiSqResult(NamedTuple):
    statistic: float
    dof: int
    p_lower: float
    p_upper: float
    two_tailed_p: float

    def reject(self, alpha: float) -> bool:
        """Rejeita nos dois extremos; α >= 1 rejeita sempre."""
        return alpha >= 1.0 or self.two_tailed_p < alpha

    @property
    def tail(self) -> str:
        return "too good" if self.p_lower < self.p_upper else "bad fit"

    def verdict(self, alpha: float) -> str:
        return f"REJECT ({self.tail})" if self.reject(alpha) else "ACCEPT"

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic, "dof": self.dof, "p_lower": self.p_lower,
            "p_upper": self.p_upper, "two_tailed_p": self.two_tailed_p,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ChiSqResult":
        """Aceita o payload do comando chisq (chaves extras são ignoradas)."""
        return cls(float(doc["statistic"]), int(doc["dof"]), float(doc["p_lower"]),
                   float(doc["p_upper"]), float(doc["two_tailed_p"]))


def chisq_test(counts: Sequence[int], expected: float | Sequence[float]) -> ChiSqResult:
    obs = np.asarray(counts, dtype=np.float64)
    if obs.size == 0:
        raise EntradaInvalida("contagens vazias")
    if obs.size < 2:
        raise EntradaInvalida("χ² precisa de ao menos 2 células")
    esp = np.broadcast_to(np.asarray(expected, dtype=np.float64), obs.shape)
    if np.any(esp <= 0):
        raise EntradaInvalida("esperado precisa ser > 0 em todas as células")
    minimo = carregar_config().chisq_min_expected
    if float(esp.min()) < minimo:
        log_warn(f"χ²: esperado mínimo {float(esp.min()):.3g} < {minimo:g}")
    stat = float(np.sum((obs - esp) ** 2 / esp))
    dof = obs.size - 1
    p_lower, p_upper = _gammainc(dof / 2.0, stat / 2.0)
    return ChiSqResult(stat, dof, p_lower, p_upper, min(1.0, max(0.0, 2.0 * min(p_lower, p_upper))))


# ================== Probabilidade de equidistribuição ==================

class EquidistProbability(NamedTuple):
    n: int
    d: int
    w: int
    log_multinomial: float
    log_stirling: float
    log_exact: float | None

    @property
    def N(self) -> float:
        return 2.0 ** self.n

    @property
    def log10_probability(self) -> float:
        return self.log_multinomial / math.log(10.0)

    @property
    def probability(self) -> float:
        return math.exp(self.log_multinomial)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "w": self.w, "log_exact": self.log_exact,
            "log_multinomial": self.log_multinomial, "log_stirling": self.log_stirling,
            "log10_probability": self.log10_probability,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EquidistProbability":
        return cls(int(doc["n"]), int(doc["d"]), int(doc["w"]), float(doc["log_multinomial"]),
                   float(doc["log_stirling"]), doc.get("log_exact"))


def _resto_stirling(x: float) -> float:
    """ln x! - [(x + ½) ln x - x + ½ ln 2π]."""
    if x < 1e4:
        return log_gamma(x + 1.0) - ((x + 0.5) * math.log(x) - x + _MEIO_LN_2PI)
    x2 = x * x
    return 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2)


def log_equidist_probability(n: int, d: int, w: int) -> EquidistProbability:
    """ln(N! / (c!^K K^N)) com N = 2^n, K = 2^(dw), c = 2^(n-dw).

    Expandido por Stirling os termos N ln N se cancelam; sobra
    ½ ln(2πN) - (K/2) ln(2πc) + r(N) - K r(c), estável mesmo com K pequeno.
    """
    if n < 1 or d < 1 or w < 1:
        raise EntradaInvalida("precisa n, d, w >= 1")
    if d * w > n:
        raise EntradaInvalida(f"dw = {d * w} > n = {n}")
    if n > MAX_N_PROB:
        raise EntradaInvalida(f"n > {MAX_N_PROB}: 2^n não cabe em ponto flutuante")
    dw = d * w
    ln2 = math.log(2.0)
    N = 2.0 ** n
    K = 2.0 ** dw
    c = 2.0 ** (n - dw)
    ln_2pi = 2.0 * _MEIO_LN_2PI
    log_mult = (0.5 * (ln_2pi + n * ln2) - 0.5 * K * (ln_2pi + (n - dw) * ln2)
                + _resto_stirling(N) - K * _resto_stirling(c))
    log_stir = 0.5 * (ln_2pi + n * ln2) - N
    if log_mult > 1e-9:
        raise InvarianteViolada(f"probabilidade > 1 (ln = {log_mult})")
    log_mult = min(log_mult, 0.0)
    return EquidistProbability(n, d, w, log_mult, log_stir, log_mult if dw == n else None)


class RandomSourceRate(NamedTuple):
    trials: int
    balanced: int
    probability: float

    @property
    def rate(self) -> float:
        return self.balanced / self.trials if self.trials else 0.0

    def to_dict(self) -> dict:
        return {"trials": self.trials, "balanced": self.balanced, "rate": self.rate,
                "probability": self.probability}

    @classmethod
    def from_dict(cls, doc: dict) -> "RandomSourceRate":
        return cls(int(doc["trials"]), int(doc["balanced"]), float(doc["probability"]))


def random_source_equidist_rate(n: int, d: int, w: int, trials: int, seed: int | None = None) -> RandomSourceRate:
    """Fração de sorteios de N = 2^n células uniformes que saem exatamente balanceados."""
    if trials < 1:
        raise EntradaInvalida("trials precisa ser >= 1")
    prob = log_equidist_probability(n, d, w)
    N = 1 << n
    _checar_orcamento(d, w, N)
    K = 1 << (d * w)
    c = N // K
    rng = np.random.default_rng(seed)
    ok = 0
    for _ in range(trials):
        cont = np.bincount(rng.integers(0, K, size=N), minlength=K)
        ok += int(np.all(cont == c))
    log_info(f"fonte aleatória: {ok}/{trials} balanceados (probabilidade {prob.probability:.3g})")
    return RandomSourceRate(trials, ok, prob.probability)


# ================== Segmento inicial ==================

MODOS = ("blocks", "overlap-full")


def segment_chisq(source, d: int, w: int, M: int, mode: str = "blocks") -> ChiSqResult:
    """χ² das M primeiras d-tuplas da fonte contra a uniforme em 2^(dw) células.

    blocks: tuplas disjuntas de M·d saídas consecutivas.
    overlap-full: M saídas em janelas sobrepostas circulares; com M igual ao
    período é a contagem do ciclo completo.
    """
    if mode not in MODOS:
        raise EntradaInvalida(f"modo desconhecido: {mode!r}")
    if M < 1:
        raise EntradaInvalida("M precisa ser >= 1")
    _checar_orcamento(d, w, M * d if mode == "blocks" else M)
    t = CellTally(d, w)
    if mode == "blocks":
        vals = stream_prefix_values(source, M * d, w).reshape(M, d)
        t.add_windows([vals[:, k] for k in range(d)])
    else:
        vals = stream_prefix_values(source, M, w)
        t.add_windows([np.roll(vals, -k) for k in range(d)])
    K = len(t.counts)
    res = chisq_test(t.counts, M / K)
    log_info(f"segmento ({mode}) d={d} w={w} M={M}: χ² = {res.statistic:.6g}, p bicaudal = {res.two_tailed_p:.3g}")
    return res
