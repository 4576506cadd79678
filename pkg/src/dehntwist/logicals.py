"""Logical operator bases for product codes.

The analytic (Kunneth) basis combines classical representatives x^i g(x)
with monomials x^i.  Rows are ordered

    X: X^h_{i,j} (i, j lexicographic), then X^v_{i,j}
    Z: Z^v_{i,j}, then Z^h_{i,j}

so that on the toric code the pairing X Z^T is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .cyclic import CyclicCode
from .errors import BasisInvalid, NotALogical
from .f2core import (
    BinMatrix,
    BitVec,
    CyclicPoly,
    inverse,
    is_invertible,
    kernel_basis,
    poly_mul,
    poly_transpose,
    solve_in_rowspace,
)
from .products import (
    HORIZONTAL,
    VERTICAL,
    BlueprintKind,
    CodeBlueprint,
    CssCode,
    EdgeKind,
)


@dataclass(frozen=True, order=True)
class LogicalLabel:
    pauli: str  # "X" | "Z"
    orient: str  # "h" | "v"
    i: int
    j: int

    def __str__(self) -> str:
        return f"{self.pauli}{self.orient}_{self.i},{self.j}"


@dataclass(frozen=True, eq=False)
class LogicalBasis:
    x_rows: BinMatrix
    z_rows: BinMatrix
    x_labels: tuple = ()
    z_labels: tuple = ()
    x_poly: tuple = field(default=(), compare=False)

    @property
    def k(self) -> int:
        return self.x_rows.nrows

    @cached_property
    def gram(self) -> BinMatrix:
        return self.x_rows @ self.z_rows.T

    @cached_property
    def gram_inv(self) -> BinMatrix:
        return inverse(self.gram)

    @cached_property
    def gram_T_inv(self) -> BinMatrix:
        return inverse(self.gram.T)

    def rows(self, pauli: str) -> BinMatrix:
        return self.x_rows if pauli == "X" else self.z_rows

    def labels(self, pauli: str) -> tuple:
        return self.x_labels if pauli == "X" else self.z_labels

    def index(self, pauli: str, orient: str, i: int, j: int) -> int:
        return self.labels(pauli).index(LogicalLabel(pauli, orient, i, j))

    def to_json(self, code: CssCode | None = None) -> dict:
        return {
            "x": [{"label": str(l), "support": s} for l, s in zip(self.x_labels, self.x_rows.supports())],
            "z": [{"label": str(l), "support": s} for l, s in zip(self.z_labels, self.z_rows.supports())],
        }


def basis_polynomial(c: CyclicCode) -> CyclicPoly:
    """Generator shape used for the X-type basis: ``g`` for the 1+x+x^2 family, ``g^T`` otherwise."""
    return c.g if c.is_family() else poly_transpose(c.g)


def kunneth_basis(blueprint: CodeBlueprint, code: CssCode | None = None) -> LogicalBasis:
    if blueprint.kind is BlueprintKind.BIVARIATE:
        raise BasisInvalid("no analytic basis for bivariate blueprints; use generic_basis")
    if code is None:
        code = blueprint.build()
    grp = blueprint.group()
    N = grp.order
    c1, c2 = blueprint.code1, blueprint.code2
    t1, t2 = basis_polynomial(c1), basis_polynomial(c2)
    for c, t in ((c1, t1), (c2, t2)):
        if not poly_mul(poly_transpose(c.p), t).is_zero():
            raise BasisInvalid("basis polynomial is not annihilated by the transposed check")
    g1, g2 = c1.g.terms(), c2.g.terms()
    a1, a2 = c1.alpha, c2.alpha

    def v(a, b):
        return 1 << grp.idx((a, b))

    def h(a, b):
        return 1 << (N + grp.idx((a, b)))

    def support(cells):
        r = 0
        for x in cells:
            r ^= x
        return r

    pairs = [(i, j) for i in range(1, a1 + 1) for j in range(1, a2 + 1)]
    xr, xl, zr, zl = [], [], [], []
    for i, j in pairs:
        xr.append(support(v(i - 1, j - 1 + s) for s in t2.terms()))
        xl.append(LogicalLabel("X", "h", i, j))
    for i, j in pairs:
        xr.append(support(h(i - 1 + s, j - 1) for s in t1.terms()))
        xl.append(LogicalLabel("X", "v", i, j))
    for i, j in pairs:
        zr.append(support(v(i - 1 + s, j - 1) for s in g1))
        zl.append(LogicalLabel("Z", "v", i, j))
    for i, j in pairs:
        zr.append(support(h(i - 1, j - 1 + s) for s in g2))
        zl.append(LogicalLabel("Z", "h", i, j))
    basis = LogicalBasis(BinMatrix.from_rows(xr, 2 * N), BinMatrix.from_rows(zr, 2 * N),
                         tuple(xl), tuple(zl), (tuple(t1.terms()), tuple(t2.terms())))
    report = verify_logicals(code, basis, check_rank=code.n <= 5000)
    if not report.ok:
        raise BasisInvalid("; ".join(report.failures))
    return basis


def generic_basis(code: CssCode) -> LogicalBasis:
    """A logical basis by linear algebra alone (no labels beyond positions)."""
    lx = _complement(kernel_basis(code.hz), code.hx)
    lz = _complement(kernel_basis(code.hx), code.hz)
    xl = tuple(LogicalLabel("X", "g", i + 1, 1) for i in range(len(lx)))
    zl = tuple(LogicalLabel("Z", "g", i + 1, 1) for i in range(len(lz)))
    return LogicalBasis(BinMatrix.from_rows(lx, code.n), BinMatrix.from_rows(lz, code.n), xl, zl)


def _complement(kernel: BinMatrix, stab: BinMatrix) -> list[int]:
    # greedy: keep kernel vectors independent of the stabilisers and of those kept so far
    basis: dict[int, int] = {}

    def reduce(r):
        for p in sorted(basis):
            if (r >> p) & 1:
                r ^= basis[p]
        return r

    def insert(r):
        r = reduce(r)
        if r:
            p = (r & -r).bit_length() - 1
            for q in list(basis):
                if (basis[q] >> p) & 1:
                    basis[q] ^= r
            basis[p] = r
            return True
        return False

    for r in stab.rows:
        insert(r)
    out = []
    for r in kernel.rows:
        if insert(r):
            out.append(r)
    return out


@dataclass
class LogicalReport:
    failures: list = field(default_factory=list)
    k_expected: int | None = None
    k_basis: int = 0
    gram_invertible: bool = False
    rank_checked: bool = False

    @property
    def ok(self) -> bool:
        return not self.failures


def _syndrome_zero(m: BinMatrix, v: int) -> bool:
    return not any((r & v).bit_count() & 1 for r in m.rows)


def verify_logicals(code: CssCode, basis: LogicalBasis, check_rank: bool = True) -> LogicalReport:
    rep = LogicalReport(k_basis=basis.k)
    if basis.x_rows.nrows != basis.z_rows.nrows:
        rep.failures.append("X and Z bases have different sizes")
    for pauli, rows, against, stab in (("X", basis.x_rows, code.hz, code.hx),
                                        ("Z", basis.z_rows, code.hx, code.hz)):
        for lab, r in zip(basis.labels(pauli), rows.rows):
            if not _syndrome_zero(against, r):
                rep.failures.append(f"{lab} has nonzero syndrome")
            elif check_rank and solve_in_rowspace(stab, BitVec(code.n, r)) is not None:
                rep.failures.append(f"{lab} is a stabiliser")
    if basis.x_rows.nrows == basis.z_rows.nrows:
        rep.gram_invertible = is_invertible(basis.gram)
        if not rep.gram_invertible:
            rep.failures.append("pairing matrix is singular")
    if check_rank:
        rep.rank_checked = True
        rep.k_expected = code.k
        if code.k != basis.k:
            rep.failures.append(f"basis has {basis.k} rows but k = {code.k}")
    return rep


def reduce_to_basis(code: CssCode, basis: LogicalBasis, v: BitVec | int, pauli: str) -> BitVec:
    """Coordinates of a logical (or stabiliser) in ``basis`` modulo stabilisers."""
    bits = v.bits if isinstance(v, BitVec) else v
    against = code.hz if pauli == "X" else code.hx
    if not _syndrome_zero(against, bits):
        raise NotALogical(f"{pauli}-support does not commute with opposite checks")
    return pairing_coords(basis, bits, pauli)


def pairing_coords(basis: LogicalBasis, bits: int, pauli: str) -> BitVec:
    """Coordinates from pairings alone; assumes the kernel check was done."""
    other = basis.z_rows if pauli == "X" else basis.x_rows
    k = basis.k
    pair = 0
    for s, r in enumerate(other.rows):
        if (r & bits).bit_count() & 1:
            pair |= 1 << s
    inv = basis.gram_inv if pauli == "X" else basis.gram_T_inv
    return inv.T.apply(BitVec(k, pair)) if k else BitVec(0, 0)


def symplectify(basis: LogicalBasis) -> LogicalBasis:
    inv = basis.gram_inv
    x_rows = inv @ basis.x_rows
    return LogicalBasis(x_rows, basis.z_rows, basis.x_labels, basis.z_labels, basis.x_poly)
