# -*- coding: utf-8 -*-
"""
Exceções do sistema de geradores.

A CLI traduz: EntradaInvalida -> código 2, InvarianteViolada -> código 3.
"""

from __future__ import annotations


class GeradorError(Exception):
    """Base de todos os erros do pacote."""


class EntradaInvalida(GeradorError, ValueError):
    """Pré-condição violada ou entrada mal formada."""


class SpecFileError(EntradaInvalida):
    """Arquivo de especificação de gerador inválido."""


class OrcamentoExcedido(EntradaInvalida):
    """Tamanho pedido passa do orçamento de memória/tempo configurado."""


class MinPolyError(GeradorError):
    """As sondas não recuperaram um polinômio que anula a matriz."""


class InvarianteViolada(GeradorError, RuntimeError):
    """Invariante interna quebrada (indica bug de implementação)."""
