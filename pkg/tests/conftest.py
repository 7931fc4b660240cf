# -*- coding: utf-8 -*-
import json
from pathlib import Path

import pytest

from sistema_geradores.config import ENV_PREFIX, carregar_config
from sistema_geradores.log import silenciar
from sistema_geradores.specfile import load_spec


@pytest.fixture(autouse=True)
def _sem_log():
    silenciar(True)
    yield
    silenciar(False)


@pytest.fixture
def config_env(monkeypatch):
    """config_env(chave=valor, ...) sobrepõe a configuração pelo ambiente."""
    def aplicar(**kw):
        for k, v in kw.items():
            monkeypatch.setenv(ENV_PREFIX + k.upper(), str(v))
        carregar_config.cache_clear()
    yield aplicar
    carregar_config.cache_clear()


@pytest.fixture(scope="session")
def xorshift16():
    return load_spec("xorshift16")


@pytest.fixture(scope="session")
def companion2():
    return load_spec("companion-n2")


@pytest.fixture(scope="session")
def identity16():
    return load_spec("identity-n16")


@pytest.fixture(scope="session")
def counter16():
    return load_spec("counter-n16")


@pytest.fixture(scope="session")
def randu():
    return load_spec("randu")


@pytest.fixture(scope="session")
def xorshift16_states(xorshift16):
    from sistema_geradores.equidist import maximal_cycle_states
    return maximal_cycle_states(xorshift16)


@pytest.fixture(scope="session")
def golden():
    """Valores congelados de execuções de referência (tests/golden)."""
    fp = Path(__file__).resolve().parent / "golden" / "xorshift16.json"
    return json.loads(fp.read_text(encoding="utf-8"))
