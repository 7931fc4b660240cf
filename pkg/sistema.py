# -*- coding: utf-8 -*-
"""Ponto de entrada: python sistema.py <comando> [opções]."""

import sys

from sistema_geradores.cli import main

if __name__ == "__main__":
    sys.exit(main())
