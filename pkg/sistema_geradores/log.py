# -*- coding: utf-8 -*-
"""
Log no mesmo esquema das automações: linhas com carimbo de hora e marcador.

Tudo vai para stderr (stdout fica reservado ao relatório). Opcionalmente
espelha em logs/<prefixo>_log_YYYYmmdd_HHMMSS.txt.
"""

from __future__ import annotations

import os
import sys
from datetime import datetime
from pathlib import Path

_MARCADORES = {
    "info": "ℹ️",
    "success": "✅",
    "warning": "⚠️",
    "error": "❌",
    "title": "📌",
}

_estado = {"silencioso": False, "arquivo": None}


def _unique_path(base_path: str) -> str:
    if not os.path.exists(base_path):
        return base_path
    root, ext = os.path.splitext(base_path)
    i = 2
    while True:
        cand = f"{root} ({i}){ext}"
        if not os.path.exists(cand):
            return cand
        i += 1


def log_msg(message: str, msg_type: str = "info") -> None:
    now = datetime.now().strftime("%d/%m/%Y %H:%M:%S")
    linha = f"[{now}] {_MARCADORES.get(msg_type, _MARCADORES['info'])} {message}"
    fp = _estado["arquivo"]
    if fp is not None:
        try:
            with open(fp, "a", encoding="utf-8") as f:
                f.write(linha + "\n")
        except Exception:
            pass
    # erros aparecem mesmo em modo silencioso
    if _estado["silencioso"] and msg_type != "error":
        return
    print(linha, file=sys.stderr, flush=True)


def log_info(msg): log_msg(msg, "info")
def log_ok(msg):   log_msg(msg, "success")
def log_warn(msg): log_msg(msg, "warning")
def log_err(msg):  log_msg(msg, "error")
def log_title(msg): log_msg(msg, "title")


def silenciar(ativo: bool = True) -> None:
    _estado["silencioso"] = bool(ativo)


def abrir_log_arquivo(prefixo: str, pasta: str | Path = "logs") -> Path:
    out_dir = Path(pasta)
    out_dir.mkdir(parents=True, exist_ok=True)
    fname = _unique_path(str(out_dir / f"{prefixo}_log_{datetime.now().strftime('%Y%m%d_%H%M%S')}.txt"))
    _estado["arquivo"] = fname
    return Path(fname)


def fechar_log_arquivo() -> None:
    _estado["arquivo"] = None
