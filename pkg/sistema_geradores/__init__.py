# -*- coding: utf-8 -*-
"""Análise de geradores pseudoaleatórios: GF(2), LCG, equidistribuição e χ²."""

__version__ = "0.1.0"
