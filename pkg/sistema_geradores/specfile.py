# -*- coding: utf-8 -*-
"""
Arquivos de especificação de gerador (JSON estrito).

  f2linear: {type, n, w, A: {kind: dense, rows: [hex]} | {kind: xorshift, shifts: [{dir, amount}]},
             B: {kind: leading} | {kind: dense, rows: [hex]}, name?, seed? (hex)}
  lcg:      {type, a, b, m, z0 (strings decimais), name?}
  counter:  {type, n, name?}
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import EntradaInvalida, SpecFileError
from .genlin import CounterSpec, F2GeneratorSpec, XorShift
from .gf2 import BitMatrix
from .lcg import LcgSpec

PRESET_DIR = Path(__file__).resolve().parent / "json" / "presets"

_CAMPOS = {
    "f2linear": ({"type", "n", "w", "A", "B"}, {"name", "seed"}),
    "lcg": ({"type", "a", "b", "m", "z0"}, {"name"}),
    "counter": ({"type", "n"}, {"name"}),
}


def _checar_campos(doc: dict, obrig: set, opc: set, onde: str) -> None:
    if not isinstance(doc, dict):
        raise SpecFileError(f"{onde}: esperado um objeto JSON")
    faltando = obrig - doc.keys()
    if faltando:
        raise SpecFileError(f"{onde}: campos ausentes: {', '.join(sorted(faltando))}")
    sobrando = doc.keys() - obrig - opc
    if sobrando:
        raise SpecFileError(f"{onde}: campos desconhecidos: {', '.join(sorted(sobrando))}")


def _inteiro(v, campo: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecFileError(f"{campo}: esperado inteiro")
    return v


def _decimal(v, campo: str) -> int:
    if not isinstance(v, str) or not v.strip().lstrip("-").isdigit():
        raise SpecFileError(f"{campo}: esperada string decimal")
    return int(v.strip())


def _hex(v, campo: str) -> int:
    if not isinstance(v, str):
        raise SpecFileError(f"{campo}: esperada string hexadecimal")
    try:
        return int(v, 16)
    except ValueError:
        raise SpecFileError(f"{campo}: hexadecimal inválido {v!r}") from None


def _matriz_densa(doc: dict, rows: int, cols: int, onde: str) -> BitMatrix:
    _checar_campos(doc, {"kind", "rows"}, set(), onde)
    linhas = doc["rows"]
    if not isinstance(linhas, list) or len(linhas) != rows:
        raise SpecFileError(f"{onde}: esperadas {rows} linhas")
    valores = [_hex(r, f"{onde}.rows[{i}]") for i, r in enumerate(linhas)]
    if any(v >> cols for v in valores):
        raise SpecFileError(f"{onde}: linha com bits além de {cols} colunas")
    return BitMatrix.from_ints(valores, cols)


def _parse_f2(doc: dict) -> F2GeneratorSpec:
    n = _inteiro(doc["n"], "n")
    w = _inteiro(doc["w"], "w")
    if n < 1:
        raise SpecFileError("n precisa ser >= 1")
    a = doc["A"]
    if not isinstance(a, dict) or a.get("kind") not in ("dense", "xorshift"):
        raise SpecFileError("A.kind precisa ser 'dense' ou 'xorshift'")
    if a["kind"] == "dense":
        A = _matriz_densa(a, n, n, "A")
    else:
        _checar_campos(a, {"kind", "shifts"}, set(), "A")
        if not isinstance(a["shifts"], list):
            raise SpecFileError("A.shifts precisa ser lista")
        ops = []
        for i, s in enumerate(a["shifts"]):
            _checar_campos(s, {"dir", "amount"}, set(), f"A.shifts[{i}]")
            ops.append(XorShift(s["dir"], _inteiro(s["amount"], f"A.shifts[{i}].amount")))
        A = tuple(ops)
    b = doc["B"]
    if not isinstance(b, dict) or b.get("kind") not in ("leading", "dense"):
        raise SpecFileError("B.kind precisa ser 'leading' ou 'dense'")
    if b["kind"] == "leading":
        _checar_campos(b, {"kind"}, set(), "B")
        B = None
    else:
        B = _matriz_densa(b, w, n, "B")
    seed = _hex(doc["seed"], "seed") if "seed" in doc else 1
    return F2GeneratorSpec(n=n, w=w, A=A, B=B, name=doc.get("name", ""), seed=seed)


def parse_spec(doc: dict):
    """Documento JSON -> F2GeneratorSpec | LcgSpec | CounterSpec."""
    if not isinstance(doc, dict) or doc.get("type") not in _CAMPOS:
        raise SpecFileError(f"type precisa ser um de: {', '.join(_CAMPOS)}")
    tipo = doc["type"]
    obrig, opc = _CAMPOS[tipo]
    _checar_campos(doc, obrig, opc, tipo)
    if "name" in doc and not isinstance(doc["name"], str):
        raise SpecFileError("name precisa ser string")
    try:
        if tipo == "f2linear":
            return _parse_f2(doc)
        if tipo == "lcg":
            return LcgSpec(_decimal(doc["a"], "a"), _decimal(doc["b"], "b"), _decimal(doc["m"], "m"),
                           _decimal(doc["z0"], "z0"), doc.get("name", ""))
        return CounterSpec(_inteiro(doc["n"], "n"), doc.get("name", "counter"))
    except SpecFileError:
        raise
    except EntradaInvalida as e:
        raise SpecFileError(f"{tipo}: {e}") from e


def serialize_spec(spec) -> dict:
    if isinstance(spec, F2GeneratorSpec):
        if spec.is_xorshift:
            A = {"kind": "xorshift", "shifts": [{"dir": op.direction, "amount": op.amount} for op in spec.A]}
        else:
            A = {"kind": "dense", "rows": spec.A.to_hex_rows()}
        B = {"kind": "leading"} if spec.B is None else {"kind": "dense", "rows": spec.B.to_hex_rows()}
        return {"type": "f2linear", "n": spec.n, "w": spec.w, "A": A, "B": B,
                "name": spec.name, "seed": format(spec.seed, "x")}
    if isinstance(spec, LcgSpec):
        return {"type": "lcg", "a": str(spec.a), "b": str(spec.b), "m": str(spec.m),
                "z0": str(spec.z0), "name": spec.name}
    if isinstance(spec, CounterSpec):
        return {"type": "counter", "n": spec.n, "name": spec.name}
    raise EntradaInvalida(f"tipo de especificação desconhecido: {type(spec).__name__}")


def canonical_json(spec) -> str:
    return json.dumps(serialize_spec(spec), sort_keys=True, separators=(",", ":"))


def spec_digest(spec) -> str:
    return hashlib.sha256(canonical_json(spec).encode("utf-8")).hexdigest()


def list_presets() -> list[str]:
    return sorted(p.stem for p in PRESET_DIR.glob("*.json"))


def load_spec(ref: str | Path):
    """Nome de preset embutido (ex.: 'randu') ou caminho de arquivo."""
    fp = Path(ref)
    if not fp.exists():
        cand = PRESET_DIR / f"{ref}.json"
        if not cand.exists():
            raise SpecFileError(f"arquivo ou preset não encontrado: {ref}")
        fp = cand
    try:
        doc = json.loads(fp.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SpecFileError(f"{fp.name}: JSON inválido ({e})") from e
    return parse_spec(doc)


def save_spec(spec, path: str | Path) -> Path:
    fp = Path(path)
    fp.write_text(json.dumps(serialize_spec(spec), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return fp
