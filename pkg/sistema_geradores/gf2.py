# -*- coding: utf-8 -*-
"""
Álgebra linear sobre GF(2) com linhas empacotadas em palavras de 64 bits.

Convenções:
  - BitVector guarda as coordenadas num int: coordenada i = bit i.
  - BitMatrix guarda cada linha em palavras uint64 little-endian: coluna j
    está na palavra j // 64, bit j % 64.
  - F2Poly guarda os coeficientes num int: bit j = coeficiente de x^j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .config import carregar_config
from .errors import EntradaInvalida, InvarianteViolada, MinPolyError
from .log import log_info, log_warn

WORD = 64
MASK64 = (1 << 64) - 1
_U64 = np.dtype("<u8")


def _nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


# ================== BitVector ==================

@dataclass(frozen=True)
class BitVector:
    """Vetor de `length` bits; `bits` nunca tem bits acima de length (forma canônica)."""
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise EntradaInvalida("comprimento negativo")
        if self.bits < 0 or self.bits >> self.length:
            raise EntradaInvalida(f"bits fora do comprimento {self.length}: {self.bits:#x}")

    @classmethod
    def masked(cls, length: int, bits: int) -> "BitVector":
        return cls(length, bits & ((1 << length) - 1))

    @classmethod
    def from_bits(cls, seq: Sequence[int]) -> "BitVector":
        v = 0
        for i, b in enumerate(seq):
            if b & 1:
                v |= 1 << i
        return cls(len(seq), v)

    @classmethod
    def unit(cls, length: int, i: int) -> "BitVector":
        return cls(length, 1 << i)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if other.length != self.length:
            raise EntradaInvalida("xor entre vetores de tamanhos diferentes")
        return BitVector(self.length, self.bits ^ other.bits)

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def is_zero(self) -> bool:
        return self.bits == 0

    def to_hex(self) -> str:
        return format(self.bits, "x")

    @classmethod
    def from_hex(cls, length: int, text: str) -> "BitVector":
        return cls(length, int(text, 16))


# ================== BitMatrix ==================

def _pack(dense: np.ndarray, cols: int) -> np.ndarray:
    dense = np.asarray(dense, dtype=np.uint8)
    rows = dense.shape[0]
    nw = _nwords(cols)
    if rows == 0 or nw == 0:
        return np.zeros((rows, nw), dtype=_U64)
    padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
    padded[:, :cols] = dense & 1
    packed = np.ascontiguousarray(np.packbits(padded, axis=1, bitorder="little"))
    return packed.view(_U64).reshape(rows, nw).copy()


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    raw = np.ascontiguousarray(words, dtype=_U64).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :cols]


def _int_to_words(value: int, nw: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(nw * 8, "little"), dtype=_U64).copy()


def _words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(words, dtype=_U64).tobytes(), "little")


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """Matriz rows × cols sobre GF(2); `words` tem forma (rows, ceil(cols/64))."""
    rows: int
    cols: int
    words: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(self.words, dtype=_U64)
        if w.shape != (self.rows, _nwords(self.cols)):
            raise EntradaInvalida(f"palavras com forma {w.shape}, esperado {(self.rows, _nwords(self.cols))}")
        tail = self.cols % WORD
        if tail and self.rows:
            mask = np.uint64((1 << tail) - 1)
            if np.any(w[:, -1] & ~mask):
                raise EntradaInvalida("bits além de cols não são zero")
        w.flags.writeable = False
        object.__setattr__(self, "words", w)

    # ----- construtores -----
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=_U64))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8)) if n else cls.zeros(0, 0)

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.ndim != 2:
            raise EntradaInvalida("matriz densa precisa ser 2D")
        rows, cols = arr.shape
        return cls(rows, cols, _pack(arr, cols))

    @classmethod
    def from_ints(cls, values: Sequence[int], cols: int) -> "BitMatrix":
        nw = _nwords(cols)
        words = np.zeros((len(values), nw), dtype=_U64)
        for i, v in enumerate(values):
            if v < 0 or v >> cols:
                raise EntradaInvalida(f"linha {i} tem bits além de {cols} colunas")
            if nw:
                words[i] = _int_to_words(v, nw)
        return cls(len(values), cols, words)

    @classmethod
    def from_hex_rows(cls, rows: Sequence[str], cols: int) -> "BitMatrix":
        try:
            return cls.from_ints([int(r, 16) for r in rows], cols)
        except ValueError as e:
            raise EntradaInvalida(f"hex inválido na matriz: {e}") from e

    # ----- acesso -----
    def to_dense(self) -> np.ndarray:
        return _unpack(self.words, self.cols)

    def row_int(self, i: int) -> int:
        return _words_to_int(self.words[i])

    def to_ints(self) -> list[int]:
        return [self.row_int(i) for i in range(self.rows)]

    def row_vector(self, i: int) -> BitVector:
        return BitVector(self.cols, self.row_int(i))

    def to_hex_rows(self) -> list[str]:
        return [format(v, "x") for v in self.to_ints()]

    def column_ints(self) -> list[int]:
        """Colunas como ints (bit i = linha i); é a imagem de cada vetor unitário."""
        return self.transpose().to_ints()

    def is_zero(self) -> bool:
        return not np.any(self.words)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T.copy()) if self.rows and self.cols else BitMatrix.zeros(self.cols, self.rows)

    def take_rows(self, idx: Iterable[int]) -> "BitMatrix":
        idx = list(idx)
        return BitMatrix(len(idx), self.cols, self.words[idx] if idx else np.zeros((0, _nwords(self.cols)), dtype=_U64))

    def __xor__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise EntradaInvalida("soma de matrizes de formas diferentes")
        return BitMatrix(self.rows, self.cols, self.words ^ other.words)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(self.words, other.words)

    __hash__ = None

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def vstack(mats: Sequence[BitMatrix]) -> BitMatrix:
    if not mats:
        raise EntradaInvalida("vstack de lista vazia")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise EntradaInvalida("vstack com número de colunas diferente")
    return BitMatrix(sum(m.rows for m in mats), cols, np.vstack([m.words for m in mats]))


# ================== Operações ==================

def rank(M: BitMatrix) -> int:
    """Posto sobre GF(2) por eliminação com XOR de linhas inteiras (vetorizado por coluna)."""
    a = np.array(M.words, dtype=_U64, copy=True)
    nrows = a.shape[0]
    r = 0
    for col in range(M.cols):
        if r == nrows:
            break
        w, b = divmod(col, WORD)
        bit = np.uint64(1) << np.uint64(b)
        hits = np.flatnonzero(a[r:, w] & bit)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        below = r + 1 + np.flatnonzero(a[r + 1:, w] & bit)
        if below.size:
            a[below] ^= a[r]
        r += 1
    return r


def mat_mul(M: BitMatrix, N: BitMatrix) -> BitMatrix:
    """Produto sobre GF(2).

    Usa o matmul de ponto flutuante (BLAS) e reduz mod 2: as somas são
    inteiras e exatas enquanto M.cols < 2^24 (float32) ou 2^53 (float64).
    """
    if M.cols != N.rows:
        raise EntradaInvalida(f"dimensões incompatíveis: {M.rows}x{M.cols} · {N.rows}x{N.cols}")
    if M.rows == 0 or N.cols == 0 or M.cols == 0:
        return BitMatrix.zeros(M.rows, N.cols)
    dtype = np.float32 if M.cols < (1 << 24) else np.float64
    prod = M.to_dense().astype(dtype) @ N.to_dense().astype(dtype)
    dense = (prod.astype(np.int64) & 1).astype(np.uint8)
    return BitMatrix.from_dense(dense)


def mat_pow(M: BitMatrix, e: int) -> BitMatrix:
    if not M.is_square():
        raise EntradaInvalida("mat_pow exige matriz quadrada")
    if e < 0:
        raise EntradaInvalida("expoente negativo")
    result = BitMatrix.identity(M.rows)
    base = M
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def mat_vec(M: BitMatrix, v: BitVector) -> BitVector:
    if v.length != M.cols:
        raise EntradaInvalida(f"vetor de {v.length} bits para matriz com {M.cols} colunas")
    if M.rows == 0:
        return BitVector(0, 0)
    if M.cols == 0:
        return BitVector(M.rows, 0)
    vw = _int_to_words(v.bits, _nwords(M.cols))
    par = np.bitwise_count(M.words & vw).sum(axis=1) & 1
    out = 0
    for i in np.flatnonzero(par):
        out |= 1 << int(i)
    return BitVector(M.rows, out)


class EchelonBasis:
    """Base em forma escalonada reduzida, inserindo uma linha por vez.

    Cada linha guardada tem um pivô e nenhuma outra linha tem bit nesse pivô,
    então reduzir uma linha nova é um único XOR das linhas cujos pivôs ela toca.
    O posto nunca passa de `cols`, então as linhas ficam num bloco pré-alocado.
    """

    def __init__(self, cols: int):
        self.cols = cols
        self._nw = _nwords(cols)
        self._buf = np.zeros((cols, self._nw), dtype=_U64)
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def _rows(self) -> np.ndarray:
        return self._buf[:len(self._pivots)]

    def reduce(self, row: np.ndarray) -> np.ndarray:
        row = np.array(row, dtype=_U64, copy=True)
        if not self._pivots:
            return row
        piv = np.asarray(self._pivots, dtype=np.int64)
        sel = (row[piv // WORD] >> (piv % WORD).astype(_U64)) & np.uint64(1)
        hit = sel.astype(bool)
        if hit.any():
            row ^= np.bitwise_xor.reduce(self._rows[hit], axis=0)
        return row

    def insert(self, row: np.ndarray) -> bool:
        """Insere a linha; devolve False se ela já estava no espaço gerado."""
        r = self.reduce(row)
        nz = np.flatnonzero(r)
        if nz.size == 0:
            return False
        w = int(nz[0])
        word = int(r[w])
        pivot = w * WORD + ((word & -word).bit_length() - 1)
        bit = np.uint64(1) << np.uint64(pivot % WORD)
        k = len(self._pivots)
        touch = np.flatnonzero(self._buf[:k, w] & bit)
        if touch.size:
            self._buf[touch] ^= r
        self._buf[k] = r
        self._pivots.append(pivot)
        return True


def independent_prefix(M: BitMatrix) -> int:
    """Maior k tal que as k primeiras linhas de M são linearmente independentes."""
    base = EchelonBasis(M.cols)
    for i in range(M.rows):
        if not base.insert(M.words[i]):
            return i
    return M.rows


# ================== Polinômios ==================

@dataclass(frozen=True)
class F2Poly:
    """Polinômio sobre GF(2); grau do polinômio nulo é -1."""
    coeffs: int

    def __post_init__(self):
        if self.coeffs < 0:
            raise EntradaInvalida("coeficientes negativos")

    @property
    def degree(self) -> int:
        return self.coeffs.bit_length() - 1

    def is_zero(self) -> bool:
        return self.coeffs == 0

    @classmethod
    def from_exponents(cls, *exps: int) -> "F2Poly":
        v = 0
        for e in exps:
            v ^= 1 << e
        return cls(v)

    @classmethod
    def from_hex(cls, text: str) -> "F2Poly":
        try:
            return cls(int(text, 16))
        except ValueError as e:
            raise EntradaInvalida(f"polinômio hex inválido: {text!r}") from e

    def to_hex(self) -> str:
        return format(self.coeffs, "x")

    def __str__(self) -> str:
        if self.coeffs == 0:
            return "0"
        termos = []
        for j in range(self.degree, -1, -1):
            if (self.coeffs >> j) & 1:
                termos.append("1" if j == 0 else "x" if j == 1 else f"x^{j}")
        return " + ".join(termos)


def _clmul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _pdivmod(a: int, m: int) -> tuple[int, int]:
    if m == 0:
        raise ZeroDivisionError("divisão por polinômio nulo")
    dm = m.bit_length()
    q = 0
    while a.bit_length() >= dm:
        s = a.bit_length() - dm
        q ^= 1 << s
        a ^= m << s
    return q, a


def _pmod(a: int, m: int) -> int:
    return _pdivmod(a, m)[1]


def poly_mulmod(a: int, b: int, m: int) -> int:
    return _pmod(_clmul(a, b), m)


def poly_powmod(base: int, e: int, m: int) -> int:
    result = _pmod(1, m)
    base = _pmod(base, m)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, m)
        e >>= 1
        if e:
            base = poly_mulmod(base, base, m)
    return result


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def poly_lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return _pdivmod(_clmul(a, b), poly_gcd(a, b))[0]


def _prime_divisors(k: int) -> list[int]:
    out, d = [], 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def is_irreducible(p: F2Poly) -> bool:
    """Teste de Rabin: x^(2^k) ≡ x mod p e mdc(x^(2^(k/r)) − x, p) = 1 para cada primo r | k."""
    k = p.degree
    if k < 1:
        return False
    m = p.coeffs
    x = _pmod(0b10, m)
    potencias = {0: x}
    cur = x
    for i in range(1, k + 1):
        cur = poly_mulmod(cur, cur, m)
        potencias[i] = cur
    if potencias[k] != x:
        return False
    for r in _prime_divisors(k):
        if poly_gcd(m, potencias[k // r] ^ x) != 1:
            return False
    return True


# Fatoração de 2^k - 1 para k <= 64: {k: ((primo, expoente), ...)}
_MERSENNE_FACTORS: dict[int, tuple[tuple[int, int], ...]] = {
    1: (),
    2: ((3, 1),),
    3: ((7, 1),),
    4: ((3, 1), (5, 1)),
    5: ((31, 1),),
    6: ((3, 2), (7, 1)),
    7: ((127, 1),),
    8: ((3, 1), (5, 1), (17, 1)),
    9: ((7, 1), (73, 1)),
    10: ((3, 1), (11, 1), (31, 1)),
    11: ((23, 1), (89, 1)),
    12: ((3, 2), (5, 1), (7, 1), (13, 1)),
    13: ((8191, 1),),
    14: ((3, 1), (43, 1), (127, 1)),
    15: ((7, 1), (31, 1), (151, 1)),
    16: ((3, 1), (5, 1), (17, 1), (257, 1)),
    17: ((131071, 1),),
    18: ((3, 3), (7, 1), (19, 1), (73, 1)),
    19: ((524287, 1),),
    20: ((3, 1), (5, 2), (11, 1), (31, 1), (41, 1)),
    21: ((7, 2), (127, 1), (337, 1)),
    22: ((3, 1), (23, 1), (89, 1), (683, 1)),
    23: ((47, 1), (178481, 1)),
    24: ((3, 2), (5, 1), (7, 1), (13, 1), (17, 1), (241, 1)),
    25: ((31, 1), (601, 1), (1801, 1)),
    26: ((3, 1), (2731, 1), (8191, 1)),
    27: ((7, 1), (73, 1), (262657, 1)),
    28: ((3, 1), (5, 1), (29, 1), (43, 1), (113, 1), (127, 1)),
    29: ((233, 1), (1103, 1), (2089, 1)),
    30: ((3, 2), (7, 1), (11, 1), (31, 1), (151, 1), (331, 1)),
    31: ((2147483647, 1),),
    32: ((3, 1), (5, 1), (17, 1), (257, 1), (65537, 1)),
    33: ((7, 1), (23, 1), (89, 1), (599479, 1)),
    34: ((3, 1), (43691, 1), (131071, 1)),
    35: ((31, 1), (71, 1), (127, 1), (122921, 1)),
    36: ((3, 3), (5, 1), (7, 1), (13, 1), (19, 1), (37, 1), (73, 1), (109, 1)),
    37: ((223, 1), (616318177, 1)),
    38: ((3, 1), (174763, 1), (524287, 1)),
    39: ((7, 1), (79, 1), (8191, 1), (121369, 1)),
    40: ((3, 1), (5, 2), (11, 1), (17, 1), (31, 1), (41, 1), (61681, 1)),
    41: ((13367, 1), (164511353, 1)),
    42: ((3, 2), (7, 2), (43, 1), (127, 1), (337, 1), (5419, 1)),
    43: ((431, 1), (9719, 1), (2099863, 1)),
    44: ((3, 1), (5, 1), (23, 1), (89, 1), (397, 1), (683, 1), (2113, 1)),
    45: ((7, 1), (31, 1), (73, 1), (151, 1), (631, 1), (23311, 1)),
    46: ((3, 1), (47, 1), (178481, 1), (2796203, 1)),
    47: ((2351, 1), (4513, 1), (13264529, 1)),
    48: ((3, 2), (5, 1), (7, 1), (13, 1), (17, 1), (97, 1), (241, 1), (257, 1), (673, 1)),
    49: ((127, 1), (4432676798593, 1)),
    50: ((3, 1), (11, 1), (31, 1), (251, 1), (601, 1), (1801, 1), (4051, 1)),
    51: ((7, 1), (103, 1), (2143, 1), (11119, 1), (131071, 1)),
    52: ((3, 1), (5, 1), (53, 1), (157, 1), (1613, 1), (2731, 1), (8191, 1)),
    53: ((6361, 1), (69431, 1), (20394401, 1)),
    54: ((3, 4), (7, 1), (19, 1), (73, 1), (87211, 1), (262657, 1)),
    55: ((23, 1), (31, 1), (89, 1), (881, 1), (3191, 1), (201961, 1)),
    56: ((3, 1), (5, 1), (17, 1), (29, 1), (43, 1), (113, 1), (127, 1), (15790321, 1)),
    57: ((7, 1), (32377, 1), (524287, 1), (1212847, 1)),
    58: ((3, 1), (59, 1), (233, 1), (1103, 1), (2089, 1), (3033169, 1)),
    59: ((179951, 1), (3203431780337, 1)),
    60: ((3, 2), (5, 2), (7, 1), (11, 1), (13, 1), (31, 1), (41, 1), (61, 1), (151, 1), (331, 1), (1321, 1)),
    61: ((2305843009213693951, 1),),
    62: ((3, 1), (715827883, 1), (2147483647, 1)),
    63: ((7, 2), (73, 1), (127, 1), (337, 1), (92737, 1), (649657, 1)),
    64: ((3, 1), (5, 1), (17, 1), (257, 1), (641, 1), (65537, 1), (6700417, 1)),
}


def mersenne_factorization(k: int) -> tuple[tuple[int, int], ...] | None:
    """Fatoração embutida de 2^k - 1 (k <= 64); None fora da tabela."""
    return _MERSENNE_FACTORS.get(k)


def _validate_factorization(k: int, factorization) -> list[tuple[int, int]]:
    from sympy import isprime

    fatores = [(int(q), int(e)) for q, e in factorization]
    prod = 1
    for q, e in fatores:
        if e < 1 or not isprime(q):
            raise EntradaInvalida(f"fator inválido {q}^{e}")
        prod *= q ** e
    if prod != (1 << k) - 1:
        raise EntradaInvalida(f"fatoração não multiplica para 2^{k} - 1")
    return fatores


class PolyOrder(NamedTuple):
    order: int
    primitive: bool


def poly_order(p: F2Poly, factorization: Sequence[tuple[int, int]] | None = None) -> PolyOrder:
    """Ordem multiplicativa de x módulo p (p irredutível) e se p é primitivo."""
    if p.is_zero():
        raise EntradaInvalida("polinômio nulo")
    k = p.degree
    if k < 1:
        raise EntradaInvalida("grau precisa ser >= 1")
    if p.coeffs & 1 == 0:
        # x divide p: x não é invertível módulo p
        raise EntradaInvalida(f"{p} é divisível por x")
    if not is_irreducible(p):
        raise EntradaInvalida(f"{p} é redutível")
    if factorization is None:
        factorization = mersenne_factorization(k)
        if factorization is None:
            raise EntradaInvalida(f"sem fatoração embutida para 2^{k} - 1; informe os fatores")
    fatores = _validate_factorization(k, factorization)

    full = (1 << k) - 1
    order = full
    m = p.coeffs
    for q, _e in fatores:
        while order % q == 0 and poly_powmod(0b10, order // q, m) == 1:
            order //= q
    if poly_powmod(0b10, order, m) != 1:
        raise InvarianteViolada(f"x^{order} != 1 mod {p}")
    return PolyOrder(order, order == full)


def poly_eval_matrix(p: F2Poly, A: BitMatrix) -> BitMatrix:
    """p(A) por Horner."""
    if not A.is_square():
        raise EntradaInvalida("p(A) exige matriz quadrada")
    n = A.rows
    ident = BitMatrix.identity(n)
    R = BitMatrix.zeros(n, n)
    for j in range(p.degree, -1, -1):
        R = mat_mul(R, A)
        if (p.coeffs >> j) & 1:
            R = R ^ ident
    return R


def companion(p: F2Poly) -> BitMatrix:
    """Matriz companheira: subdiagonal de uns e última coluna com p_0..p_{k-1}."""
    k = p.degree
    if k < 1:
        raise EntradaInvalida("companheira exige grau >= 1")
    dense = np.zeros((k, k), dtype=np.uint8)
    for i in range(1, k):
        dense[i, i - 1] = 1
    for i in range(k):
        dense[i, k - 1] = (p.coeffs >> i) & 1
    return BitMatrix.from_dense(dense)


# ================== Berlekamp–Massey / polinômio mínimo ==================

def berlekamp_massey(seq: Sequence[int]) -> tuple[int, int]:
    """Complexidade linear L e polinômio de conexão C (bit j = coef. de x^j)."""
    c, b = 1, 1
    L, m = 0, -1
    janela = 0  # bit j = seq[i - j]
    for i, s in enumerate(seq):
        janela = (janela << 1) | (s & 1)
        d = (c & janela).bit_count() & 1
        if d:
            t = c
            c ^= b << (i - m)
            if 2 * L <= i:
                L = i + 1 - L
                b = t
                m = i
    return L, c


def _reciprocal(c: int, L: int) -> int:
    out = 0
    for j in range(L + 1):
        if (c >> j) & 1:
            out |= 1 << (L - j)
    return out


def splitmix64(seed: int) -> Iterator[int]:
    estado = seed & MASK64
    while True:
        estado = (estado + 0x9E3779B97F4A7C15) & MASK64
        z = estado
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


def _random_vector(gen: Iterator[int], n: int) -> int:
    while True:
        v = 0
        for i in range(_nwords(n)):
            v |= next(gen) << (WORD * i)
        v &= (1 << n) - 1
        if v:
            return v


def _apply_columns(colunas: Sequence[int], x: int) -> int:
    r = 0
    while x:
        low = x & -x
        r ^= colunas[low.bit_length() - 1]
        x ^= low
    return r


def _sequence_poly(colunas: Sequence[int], b: int, c: int, n: int) -> int:
    """Polinômio mínimo da sequência escalar s_i = cᵀ A^i b (2n termos)."""
    seq = []
    x = b
    for _ in range(2 * n):
        seq.append((c & x).bit_count() & 1)
        x = _apply_columns(colunas, x)
    L, conn = berlekamp_massey(seq)
    return _reciprocal(conn, L)


def min_poly(A: BitMatrix, trials: int | None = None, seed: int | None = None,
             refine: bool | None = None) -> F2Poly:
    """Polinômio mínimo de A pelo mmc dos polinômios de sequências sondadas.

    Com `refine`, se as sondas aleatórias deixarem p(A) != 0, uma entrada não
    nula (j, k) de p(A) dá a sonda (e_j, e_k), cuja sequência p não anula, e o
    mmc cresce estritamente.
    """
    cfg = carregar_config()
    trials = cfg.min_poly_trials if trials is None else trials
    seed = cfg.probe_seed if seed is None else seed
    refine = cfg.min_poly_refine if refine is None else refine
    if not A.is_square() or A.rows < 1:
        raise EntradaInvalida("min_poly exige matriz quadrada com n >= 1")
    n = A.rows
    colunas = A.column_ints()
    gen = splitmix64(seed)

    p = 1
    for _ in range(trials):
        b = _random_vector(gen, n)
        c = _random_vector(gen, n)
        p = poly_lcm(p, _sequence_poly(colunas, b, c, n))

    resto = poly_eval_matrix(F2Poly(p), A)
    rodadas = 0
    while not resto.is_zero():
        if not refine:
            raise MinPolyError(f"sondas insuficientes ({trials}); p(A) != 0; aumente o número de sondas")
        rodadas += 1
        if rodadas > n:
            break
        dense = resto.to_dense()
        j, k = (int(t) for t in np.argwhere(dense)[0])
        p = poly_lcm(p, _sequence_poly(colunas, 1 << k, 1 << j, n))
        resto = poly_eval_matrix(F2Poly(p), A)
    if rodadas:
        log_warn(f"min_poly: {rodadas} sonda(s) dirigida(s) além das {trials} aleatórias")
    if not resto.is_zero():
        raise InvarianteViolada("p(A) != 0 após refinamento")
    log_info(f"min_poly: grau {F2Poly(p).degree} para n = {n}")
    return F2Poly(p)
