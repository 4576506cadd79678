"""Binary linear algebra and cyclic polynomial arithmetic.

Vectors and matrix rows are stored as Python ints used as bitsets: bit ``j``
is column ``j``.  XOR and ``int.bit_count`` then act word-at-a-time.
Plain (non-cyclic) binary polynomials are also ints, bit ``i`` being the
coefficient of ``x**i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


class DimensionError(ValueError):
    pass


class ModulusMismatch(ValueError):
    pass


def iter_bits(value: int) -> Iterator[int]:
    """Yield set bit positions of ``value`` in ascending order."""
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


def bits_from_support(support: Iterable[int]) -> int:
    v = 0
    for j in support:
        v ^= 1 << j
    return v


@dataclass(frozen=True)
class BitVec:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"bits exceed length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(length, 0)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> "BitVec":
        return cls(length, bits_from_support(support))

    @classmethod
    def from_array(cls, arr) -> "BitVec":
        arr = np.asarray(arr).ravel()
        return cls.from_support(len(arr), np.flatnonzero(arr & 1).tolist())

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return list(iter_bits(self.bits))

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        out[self.support()] = 1
        return out

    def __getitem__(self, j: int) -> int:
        return (self.bits >> j) & 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        if other.length != self.length:
            raise DimensionError("length mismatch")
        return BitVec(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def dot(self, other: "BitVec") -> int:
        if other.length != self.length:
            raise DimensionError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def __bool__(self) -> bool:
        return self.bits != 0


@dataclass(frozen=True)
class BinMatrix:
    """Immutable binary matrix with bit-packed rows."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise DimensionError("row count mismatch")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise DimensionError(f"row exceeds {self.ncols} columns")

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BinMatrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "BinMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[int], ncols: int) -> "BinMatrix":
        return cls(len(rows), ncols, tuple(int(r) for r in rows))

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], ncols: int) -> "BinMatrix":
        rows = tuple(bits_from_support(s) for s in supports)
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_dense(cls, arr) -> "BinMatrix":
        arr = np.asarray(arr, dtype=np.int64) & 1
        if arr.ndim != 2:
            raise DimensionError("expected a 2-d array")
        nrows, ncols = arr.shape
        rows = tuple(bits_from_support(np.flatnonzero(row).tolist()) for row in arr)
        return cls(nrows, ncols, rows)

    @classmethod
    def from_bitvecs(cls, vecs: Sequence[BitVec], ncols: int | None = None) -> "BinMatrix":
        if ncols is None:
            if not vecs:
                raise DimensionError("cannot infer column count of an empty list")
            ncols = vecs[0].length
        for v in vecs:
            if v.length != ncols:
                raise DimensionError("length mismatch")
        return cls(len(vecs), ncols, tuple(v.bits for v in vecs))

    # views --------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> BitVec:
        return BitVec(self.ncols, self.rows[i])

    def __iter__(self) -> Iterator[BitVec]:
        for r in self.rows:
            yield BitVec(self.ncols, r)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return (self.rows[i] >> j) & 1

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i, list(iter_bits(r))] = 1
        return out

    def supports(self) -> list[list[int]]:
        return [list(iter_bits(r)) for r in self.rows]

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def col_weights(self) -> list[int]:
        counts = [0] * self.ncols
        for r in self.rows:
            for j in iter_bits(r):
                counts[j] += 1
        return counts

    def max_row_weight(self) -> int:
        return max((r.bit_count() for r in self.rows), default=0)

    def is_zero(self) -> bool:
        return not any(self.rows)

    # algebra ------------------------------------------------------------
    @property
    def T(self) -> "BinMatrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            bit = 1 << i
            for j in iter_bits(r):
                cols[j] |= bit
        return BinMatrix(self.ncols, self.nrows, tuple(cols))

    def __matmul__(self, other: "BinMatrix") -> "BinMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        orows = other.rows
        for r in self.rows:
            acc = 0
            for j in iter_bits(r):
                acc ^= orows[j]
            out.append(acc)
        return BinMatrix(self.nrows, other.ncols, tuple(out))

    def __add__(self, other: "BinMatrix") -> "BinMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return BinMatrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def apply(self, v: BitVec) -> BitVec:
        """Return ``self @ v`` for a column vector ``v``."""
        if v.length != self.ncols:
            raise DimensionError("length mismatch")
        bits = 0
        for i, r in enumerate(self.rows):
            if (r & v.bits).bit_count() & 1:
                bits |= 1 << i
        return BitVec(self.nrows, bits)

    def combine(self, coeffs: BitVec) -> BitVec:
        """Return ``coeffs @ self`` (a combination of rows)."""
        if coeffs.length != self.nrows:
            raise DimensionError("length mismatch")
        acc = 0
        for i in iter_bits(coeffs.bits):
            acc ^= self.rows[i]
        return BitVec(self.ncols, acc)

    def hstack(self, other: "BinMatrix") -> "BinMatrix":
        if self.nrows != other.nrows:
            raise DimensionError("row count mismatch")
        shift = self.ncols
        return BinMatrix(self.nrows, self.ncols + other.ncols,
                         tuple(a | (b << shift) for a, b in zip(self.rows, other.rows)))

    def vstack(self, other: "BinMatrix") -> "BinMatrix":
        if self.ncols != other.ncols:
            raise DimensionError("column count mismatch")
        return BinMatrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def permute_columns(self, perm: Sequence[int]) -> "BinMatrix":
        """Move column ``j`` to position ``perm[j]``."""
        out = []
        for r in self.rows:
            acc = 0
            for j in iter_bits(r):
                acc |= 1 << perm[j]
            out.append(acc)
        return BinMatrix(self.nrows, self.ncols, tuple(out))

    def permute_rows(self, perm: Sequence[int]) -> "BinMatrix":
        """Move row ``i`` to position ``perm[i]``."""
        out = [0] * self.nrows
        for i, r in enumerate(self.rows):
            out[perm[i]] = r
        return BinMatrix(self.nrows, self.ncols, tuple(out))


# elimination ------------------------------------------------------------

def _echelon(rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form with leftmost pivots.

    Returns the nonzero reduced rows and their pivot columns, ordered by
    pivot column.
    """
    basis: dict[int, int] = {}
    for r in rows:
        for p, b in basis.items():
            if (r >> p) & 1:
                r ^= b
        if r:
            p = (r & -r).bit_length() - 1
            for q in list(basis):
                if (basis[q] >> p) & 1:
                    basis[q] ^= r
            basis[p] = r
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def rank(m: BinMatrix) -> int:
    return len(_echelon(m.rows)[0])


def rank_of_rows(rows: Sequence[int]) -> int:
    return len(_echelon(rows)[0])


def rref(m: BinMatrix) -> tuple[BinMatrix, list[int]]:
    rows, pivots = _echelon(m.rows)
    return BinMatrix(len(rows), m.ncols, tuple(rows)), pivots


def kernel_basis(m: BinMatrix) -> BinMatrix:
    """Basis of ``{v : m @ v = 0}``, one vector per free column."""
    rows, pivots = _echelon(m.rows)
    pivot_set = set(pivots)
    out = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        v = 1 << f
        for r, p in zip(rows, pivots):
            if (r >> f) & 1:
                v |= 1 << p
        out.append(v)
    return BinMatrix(len(out), m.ncols, tuple(out))


def solve_in_rowspace(m: BinMatrix, v: BitVec) -> BitVec | None:
    """Coefficients ``c`` with ``c @ m == v``, or ``None`` when ``v`` is not in the rowspace."""
    if v.length != m.ncols:
        raise DimensionError(f"vector length {v.length} != {m.ncols} columns")
    # track combinations alongside the elimination
    basis: dict[int, tuple[int, int]] = {}
    for i, r in enumerate(m.rows):
        c = 1 << i
        for p, (b, bc) in basis.items():
            if (r >> p) & 1:
                r ^= b
                c ^= bc
        if r:
            p = (r & -r).bit_length() - 1
            for q, (b, bc) in list(basis.items()):
                if (b >> p) & 1:
                    basis[q] = (b ^ r, bc ^ c)
            basis[p] = (r, c)
    target, coeff = v.bits, 0
    for p, (b, bc) in basis.items():
        if (target >> p) & 1:
            target ^= b
            coeff ^= bc
    if target:
        return None
    return BitVec(m.nrows, coeff)


def inverse(m: BinMatrix) -> BinMatrix:
    """Inverse of a square invertible matrix."""
    n = m.nrows
    if m.ncols != n:
        raise DimensionError("matrix is not square")
    aug = [r | (1 << (n + i)) for i, r in enumerate(m.rows)]
    rows, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    mask = (1 << n) - 1
    return BinMatrix(n, n, tuple((r >> n) & mask for r in rows[:n]))


def is_invertible(m: BinMatrix) -> bool:
    return m.nrows == m.ncols and rank(m) == m.nrows


# cyclic polynomials ---------------------------------------------------------

def _rotl(bits: int, shift: int, n: int, mask: int) -> int:
    shift %= n
    if not shift:
        return bits
    return ((bits << shift) | (bits >> (n - shift))) & mask


@dataclass(frozen=True, init=False)
class CyclicPoly:
    """Element of F2[x]/(x^n + 1), reduced at construction.

    Exponents are taken modulo ``n``; repeated exponents cancel because
    coefficients are binary.
    """

    n: int
    exponents: frozenset

    def __init__(self, n: int, exponents: Iterable[int] = ()):
        if n <= 0:
            raise ValueError("modulus must be positive")
        bits = 0
        for e in exponents:
            bits ^= 1 << (int(e) % n)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "exponents", frozenset(iter_bits(bits)))

    @classmethod
    def from_bits(cls, n: int, bits: int) -> "CyclicPoly":
        return cls(n, iter_bits(bits))

    @classmethod
    def one(cls, n: int) -> "CyclicPoly":
        return cls(n, (0,))

    @classmethod
    def monomial(cls, n: int, e: int) -> "CyclicPoly":
        return cls(n, (e,))

    @property
    def bits(self) -> int:
        return bits_from_support(self.exponents)

    @property
    def weight(self) -> int:
        return len(self.exponents)

    def terms(self) -> list[int]:
        """Exponents in ascending order."""
        return sorted(self.exponents)

    def is_zero(self) -> bool:
        return not self.exponents

    def __mul__(self, other: "CyclicPoly") -> "CyclicPoly":
        return poly_mul(self, other)

    def __add__(self, other: "CyclicPoly") -> "CyclicPoly":
        if other.n != self.n:
            raise ModulusMismatch(f"{self.n} != {other.n}")
        return CyclicPoly.from_bits(self.n, self.bits ^ other.bits)

    def shift(self, e: int) -> "CyclicPoly":
        return CyclicPoly(self.n, (x + e for x in self.exponents))

    @property
    def T(self) -> "CyclicPoly":
        return poly_transpose(self)

    def to_vector(self) -> BitVec:
        return BitVec(self.n, self.bits)

    def __repr__(self) -> str:
        if not self.exponents:
            return f"CyclicPoly({self.n}, 0)"
        terms = " + ".join("1" if e == 0 else f"x^{e}" for e in self.terms())
        return f"CyclicPoly({self.n}, {terms})"


def poly_mul(a: CyclicPoly, b: CyclicPoly) -> CyclicPoly:
    if a.n != b.n:
        raise ModulusMismatch(f"{a.n} != {b.n}")
    n = a.n
    mask = (1 << n) - 1
    bb = b.bits
    acc = 0
    for e in a.exponents:
        acc ^= _rotl(bb, e, n, mask)
    return CyclicPoly.from_bits(n, acc)


def poly_transpose(a: CyclicPoly) -> CyclicPoly:
    return CyclicPoly(a.n, (-e for e in a.exponents))


def regular_representation(a: CyclicPoly) -> BinMatrix:
    """n x n matrix of multiplication by ``a``; column j has ones at rows (e + j) mod n."""
    n = a.n
    mask = (1 << n) - 1
    col0 = a.bits
    cols = [_rotl(col0, j, n, mask) for j in range(n)]
    return BinMatrix(n, n, tuple(cols)).T


# plain polynomials as ints ---------------------------------------------------

def plain_poly(exponents: Iterable[int]) -> int:
    return bits_from_support(exponents)


def plain_degree(a: int) -> int:
    return a.bit_length() - 1


def plain_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length()
    quot = 0
    while a and a.bit_length() >= db:
        s = a.bit_length() - db
        quot ^= 1 << s
        a ^= b << s
    return quot, a


def plain_mul(a: int, b: int) -> int:
    acc = 0
    for e in iter_bits(a):
        acc ^= b << e
    return acc


def poly_gcd(a: int | CyclicPoly, b: int | CyclicPoly) -> int:
    """Monic gcd of two plain binary polynomials (every nonzero binary polynomial is monic)."""
    if isinstance(a, CyclicPoly):
        a = a.bits
    if isinstance(b, CyclicPoly):
        b = b.bits
    if a == 0 and b == 0:
        raise ValueError("gcd of two zero polynomials is undefined")
    while b:
        a, b = b, plain_divmod(a, b)[1]
    return a


def x_n_plus_1(n: int) -> int:
    return (1 << n) | 1
