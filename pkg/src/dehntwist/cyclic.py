"""Classical cyclic codes viewed as two-term chain complexes."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidPair
from .f2core import (
    BinMatrix,
    CyclicPoly,
    plain_degree,
    poly_gcd,
    poly_mul,
    poly_transpose,
    rank,
    rank_of_rows,
    regular_representation,
    x_n_plus_1,
)

MAX_ENUM_ALPHA = 24


@dataclass(frozen=True)
class CyclicCode:
    n: int
    p: CyclicPoly
    g: CyclicPoly
    alpha: int

    @property
    def degree_matches(self) -> bool:
        """False when ``p`` is a non-minimal representative (deg p != alpha)."""
        return plain_degree(self.p.bits) == self.alpha

    def is_family(self) -> bool:
        """True when ``g`` is the generator of the 1+x+x^2 family for this ``n``."""
        return self.n % 3 == 0 and self.g == family_polys(self.n // 3)[1]


def make_cyclic(n: int, p: CyclicPoly, g: CyclicPoly) -> CyclicCode:
    if p.n != n or g.n != n:
        raise InvalidPair(f"polynomials must have modulus {n}")
    if p.is_zero() or g.is_zero():
        raise InvalidPair("check and generator polynomials must be nonzero")
    if not poly_mul(p, g).is_zero():
        raise InvalidPair(f"p*g != 0 mod x^{n}+1 for p={p}, g={g}")
    alpha = plain_degree(poly_gcd(p.bits, x_n_plus_1(n)))
    # the rank route must agree with the gcd route
    if n - rank(regular_representation(p)) != alpha:
        raise InvalidPair("rank and gcd disagree")  # pragma: no cover
    if alpha < 1:
        raise InvalidPair("p is a unit: the code has no codewords")
    shifts = [g.shift(i).bits for i in range(alpha)]
    if rank_of_rows(shifts) != alpha:
        raise InvalidPair("shifts of g do not span the codeword space")
    return CyclicCode(n, p, g, alpha)


def family_polys(q: int) -> tuple[CyclicPoly, CyclicPoly]:
    """``p = 1+x+x^2`` and ``g = (1+x) * sum_{i=1..q} x^(3i)`` over ``n = 3q``."""
    if q < 1:
        raise ValueError("q must be positive")
    n = 3 * q
    p = CyclicPoly(n, (0, 1, 2))
    g = poly_mul(CyclicPoly(n, (0, 1)), CyclicPoly(n, [3 * i for i in range(1, q + 1)]))
    return p, g


def family_code(q: int, p: CyclicPoly | None = None) -> CyclicCode:
    fp, g = family_polys(q)
    return make_cyclic(3 * q, fp if p is None else p, g)


def repetition_code(n: int) -> CyclicCode:
    return make_cyclic(n, CyclicPoly(n, (0, 1)), CyclicPoly(n, range(n)))


def homology_dims(c: CyclicCode) -> tuple[int, int]:
    m = regular_representation(c.p)
    return c.n - rank(m), c.n - rank(m.T)


def homology_reps(c: CyclicCode) -> tuple[BinMatrix, BinMatrix]:
    h1 = BinMatrix.from_rows([c.g.shift(i).bits for i in range(c.alpha)], c.n)
    h0 = BinMatrix.from_rows([1 << i for i in range(c.alpha)], c.n)
    return h1, h0


def classical_distance(c: CyclicCode) -> int:
    if c.alpha > MAX_ENUM_ALPHA:
        raise BudgetExceeded(f"alpha={c.alpha} exceeds {MAX_ENUM_ALPHA}", MAX_ENUM_ALPHA)
    rows = homology_reps(c)[0].rows
    best = c.n + 1
    acc = 0
    # Gray code walk over all nonzero combinations
    for i in range(1, 1 << c.alpha):
        flip = (i & -i).bit_length() - 1
        acc ^= rows[flip]
        w = acc.bit_count()
        if w < best:
            best = w
    return best


def transposed_code(c: CyclicCode) -> CyclicCode:
    return make_cyclic(c.n, poly_transpose(c.p), poly_transpose(c.g))
