# -*- coding: utf-8 -*-
"""
Configuração do sistema de geradores.

Ordem de precedência (a última vence):
  1) padrões embutidos (_PADROES)
  2) json/config.json ao lado do pacote
  3) variáveis de ambiente GERADORES_<CHAVE> (um .env ao lado do pacote é carregado)
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from pathlib import Path

# --- .env (opcional) ---
try:
    from dotenv import load_dotenv
    load_dotenv(Path(__file__).with_name(".env"))
except Exception:
    pass

ENV_PREFIX = "GERADORES_"


@dataclass(frozen=True)
class Config:
    """
    Parâmetros ajustáveis:
      - min_poly_trials: sondas aleatórias do Berlekamp–Massey
      - min_poly_refine: permite sondas dirigidas quando as aleatórias falham
      - probe_seed: semente do splitmix64 das sondas
      - cycle_cap: limite de passos para cycle_length
      - exhaustive_period_max_n / verify_max_n / search_max_n: limites de força bruta
      - tally_max_points / tally_max_bits: orçamento de memória da contagem por células
      - plane_tolerance: tolerância de integralidade do índice de plano
      - lcg_block_size: tamanho do bloco na varredura vetorizada de LCG
      - chisq_min_expected: abaixo disso o χ² só avisa
    """
    min_poly_trials: int = 4
    min_poly_refine: bool = True
    probe_seed: int = 24301
    cycle_cap: int = 1 << 24
    exhaustive_period_max_n: int = 24
    verify_max_n: int = 20
    search_max_n: int = 24
    tally_max_points: int = 1 << 26
    tally_max_bits: int = 30
    plane_tolerance: float = 2.0 ** -20
    lcg_block_size: int = 1 << 22
    chisq_min_expected: float = 5.0
    log_dir: str = "logs"
    log_to_file: bool = False


_PADROES = Config()


def _cfg_path() -> Path:
    return Path(__file__).resolve().parent / "json" / "config.json"


def _load_cfg(path: Path | None = None) -> dict:
    fp = path or _cfg_path()
    if fp.exists():
        try:
            return json.loads(fp.read_text(encoding="utf-8")) or {}
        except Exception:
            return {}
    return {}


def _coerce(raw, padrao):
    if isinstance(padrao, bool):
        if isinstance(raw, str):
            return raw.strip().lower() in ("1", "true", "sim", "yes", "on")
        return bool(raw)
    if isinstance(padrao, int):
        return int(str(raw), 0) if isinstance(raw, str) else int(raw)
    if isinstance(padrao, float):
        return float(raw)
    return str(raw)


def montar_config(path: Path | None = None, env: dict | None = None) -> Config:
    """Lê o json e as variáveis de ambiente; chaves desconhecidas são ignoradas."""
    env = os.environ if env is None else env
    valores = {}
    arquivo = _load_cfg(path)
    for f in fields(Config):
        padrao = getattr(_PADROES, f.name)
        if f.name in arquivo:
            try:
                valores[f.name] = _coerce(arquivo[f.name], padrao)
            except (TypeError, ValueError):
                pass
        bruto = env.get(ENV_PREFIX + f.name.upper())
        if bruto is not None and str(bruto).strip():
            try:
                valores[f.name] = _coerce(bruto, padrao)
            except (TypeError, ValueError):
                pass
    return replace(_PADROES, **valores)


@lru_cache(maxsize=1)
def carregar_config() -> Config:
    return montar_config()

