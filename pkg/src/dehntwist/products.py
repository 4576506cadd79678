"""CSS code constructions: hypergraph, balanced and bivariate bicycle products.

Every construction here is a two-block code over a finite abelian group G
with two group-algebra elements A and B::

    hx = [A | B]        hz = [B^T | A^T]

Qubits in the first block are *vertical* edges, those in the second block
*horizontal* edges.  X-check ``c`` touches vertical qubit ``c - a`` for
``a`` in A and horizontal qubit ``c - b`` for ``b`` in B; Z-check ``z``
touches vertical ``z + b`` and horizontal ``z + a``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .cyclic import CyclicCode, family_polys, make_cyclic
from .errors import IsomorphismUnavailable
from .f2core import BinMatrix, CyclicPoly, rank

Elem = tuple[int, int]


class EdgeKind(str, enum.Enum):
    VERTICAL = "V"
    HORIZONTAL = "H"

    @property
    def other(self) -> "EdgeKind":
        return EdgeKind.HORIZONTAL if self is EdgeKind.VERTICAL else EdgeKind.VERTICAL


VERTICAL = EdgeKind.VERTICAL
HORIZONTAL = EdgeKind.HORIZONTAL


@dataclass(frozen=True, order=True)
class QubitLabel:
    kind: EdgeKind
    a: int
    b: int

    def __str__(self) -> str:
        return f"{self.kind.value}({self.a},{self.b})"


# groups -----------------------------------------------------------------------

class AbelianGroup:
    """Finite abelian group with elements stored as canonical integer pairs."""

    def __init__(self, elements: Sequence[Elem], canon: Callable[[int, int], Elem], name: str):
        self.elements = list(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self._canon = canon
        self.name = name

    @property
    def order(self) -> int:
        return len(self.elements)

    def canon(self, g: Elem) -> Elem:
        return self._canon(g[0], g[1])

    def add(self, g: Elem, h: Elem) -> Elem:
        return self._canon(g[0] + h[0], g[1] + h[1])

    def sub(self, g: Elem, h: Elem) -> Elem:
        return self._canon(g[0] - h[0], g[1] - h[1])

    def neg(self, g: Elem) -> Elem:
        return self._canon(-g[0], -g[1])

    def mul(self, s: int, g: Elem) -> Elem:
        return self._canon(s * g[0], s * g[1])

    def idx(self, g: Elem) -> int:
        return self.index[self._canon(g[0], g[1])]

    def __repr__(self) -> str:
        return f"AbelianGroup({self.name}, order={self.order})"


def torus_group(l: int, m: int) -> AbelianGroup:
    elems = [(a, b) for a in range(l) for b in range(m)]
    return AbelianGroup(elems, lambda a, b: (a % l, b % m), f"C{l}xC{m}")


def bp_canon(a: int, b: int, l: int) -> Elem:
    """Canonical class representative of ``x^a (x)_H x^b`` over the subgroup <x^3>."""
    if l % 3:
        raise ValueError(f"l={l} is not divisible by 3")
    return a % 3, (b + 3 * (a // 3)) % l


def bp_class_basis(l: int) -> list[Elem]:
    if l % 3:
        raise ValueError(f"l={l} is not divisible by 3")
    return [(a, b) for a in range(3) for b in range(l)]


def balanced_group(l: int) -> AbelianGroup:
    return AbelianGroup(bp_class_basis(l), lambda a, b: bp_canon(a, b, l), f"C{l}(x)_H C{l}")


def group_element_matrix(group: AbelianGroup, shift: Elem) -> BinMatrix:
    """Permutation matrix of translation by ``shift``: column g has its one at row g + shift."""
    n = group.order
    cols = [1 << group.idx(group.add(g, shift)) for g in group.elements]
    return BinMatrix(n, n, tuple(cols)).T


def bp_generator_matrices(l: int) -> tuple[BinMatrix, BinMatrix]:
    """Matrices of ``e (x)_H x`` and ``x (x)_H e`` on the class basis."""
    grp = balanced_group(l)
    return group_element_matrix(grp, (0, 1)), group_element_matrix(grp, (1, 0))


# codes -----------------------------------------------------------------------------

class BlueprintKind(str, enum.Enum):
    HGP = "hgp"
    BALANCED = "bp"
    BIVARIATE = "bb"


@dataclass(frozen=True)
class CodeBlueprint:
    kind: BlueprintKind
    l: int
    m: int
    code1: CyclicCode | None = None
    code2: CyclicCode | None = None
    A: frozenset = frozenset()
    B: frozenset = frozenset()
    step: int = 3

    def group(self) -> AbelianGroup:
        if self.kind is BlueprintKind.BALANCED:
            return balanced_group(self.l)
        return torus_group(self.l, self.m)

    def block_polys(self) -> tuple[list[Elem], list[Elem]]:
        if self.kind is BlueprintKind.BIVARIATE:
            return sorted(self.A), sorted(self.B)
        A = [(e, 0) for e in self.code1.p.terms()]
        B = [(0, e) for e in self.code2.p.terms()]
        return A, B

    def params(self) -> dict:
        if self.kind is BlueprintKind.BIVARIATE:
            return {"j": self.l, "k": self.m, "A": [list(t) for t in sorted(self.A)],
                    "B": [list(t) for t in sorted(self.B)]}
        out = {"l": self.l, "m": self.m, "p1": self.code1.p.terms(), "p2": self.code2.p.terms()}
        if self.kind is BlueprintKind.HGP:
            out["g1"] = self.code1.g.terms()
            out["g2"] = self.code2.g.terms()
        return out

    def build(self) -> "CssCode":
        grp = self.group()
        A, B = self.block_polys()
        return _two_block_code(grp, A, B, self)

    @classmethod
    def from_params(cls, kind: str, params: dict) -> "CodeBlueprint":
        kind = BlueprintKind(kind)
        if kind is BlueprintKind.BIVARIATE:
            return bb_blueprint(params["A"], params["B"], params["j"], params["k"])
        l, m = params["l"], params["m"]
        if kind is BlueprintKind.BALANCED:
            return bp_blueprint(CyclicPoly(l, params["p1"]), CyclicPoly(l, params["p2"]), l)
        c1 = make_cyclic(l, CyclicPoly(l, params["p1"]), CyclicPoly(l, params["g1"]))
        c2 = make_cyclic(m, CyclicPoly(m, params["p2"]), CyclicPoly(m, params["g2"]))
        return hgp_blueprint(c1, c2)


@dataclass(frozen=True, eq=False)
class CssCode:
    n: int
    hx: BinMatrix
    hz: BinMatrix
    qubit_labels: tuple
    x_check_labels: tuple
    z_check_labels: tuple
    blueprint: CodeBlueprint | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.hx.ncols != self.n or self.hz.ncols != self.n:
            raise ValueError("check matrices must have n columns")

    def commutes(self) -> bool:
        return (self.hx @ self.hz.T).is_zero()

    @cached_property
    def rank_hx(self) -> int:
        return rank(self.hx)

    @cached_property
    def rank_hz(self) -> int:
        return rank(self.hz)

    @property
    def k(self) -> int:
        return self.n - self.rank_hx - self.rank_hz

    @property
    def kind(self) -> str:
        return self.blueprint.kind.value if self.blueprint else "custom"

    def max_row_weight(self) -> int:
        return max(self.hx.max_row_weight(), self.hz.max_row_weight())

    def same_checks(self, other: "CssCode") -> bool:
        return self.hx == other.hx and self.hz == other.hz

    def qubit_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.qubit_labels)}


def _two_block_code(grp: AbelianGroup, A: Iterable[Elem], B: Iterable[Elem],
                    blueprint: CodeBlueprint | None) -> CssCode:
    A = [grp.canon(a) for a in A]
    B = [grp.canon(b) for b in B]
    N = grp.order
    hx_rows, hz_rows = [], []
    for c in grp.elements:
        r = 0
        for a in A:
            r ^= 1 << grp.idx(grp.sub(c, a))
        for b in B:
            r ^= 1 << (N + grp.idx(grp.sub(c, b)))
        hx_rows.append(r)
    for z in grp.elements:
        r = 0
        for b in B:
            r ^= 1 << grp.idx(grp.add(z, b))
        for a in A:
            r ^= 1 << (N + grp.idx(grp.add(z, a)))
        hz_rows.append(r)
    labels = tuple(QubitLabel(VERTICAL, *g) for g in grp.elements) + \
        tuple(QubitLabel(HORIZONTAL, *g) for g in grp.elements)
    checks = tuple(grp.elements)
    return CssCode(2 * N, BinMatrix(N, 2 * N, tuple(hx_rows)), BinMatrix(N, 2 * N, tuple(hz_rows)),
                   labels, checks, checks, blueprint)


def hgp_blueprint(c1: CyclicCode, c2: CyclicCode) -> CodeBlueprint:
    return CodeBlueprint(BlueprintKind.HGP, c1.n, c2.n, c1, c2)


def hgp_build(c1: CyclicCode, c2: CyclicCode) -> CssCode:
    """Hypergraph product; vertical qubit (a, b) sits at index a*m + b."""
    return hgp_blueprint(c1, c2).build()


def bp_blueprint(p1: CyclicPoly, p2: CyclicPoly, l: int) -> CodeBlueprint:
    if l % 3:
        raise ValueError(f"l={l} is not divisible by 3")
    g = family_polys(l // 3)[1]
    c1 = make_cyclic(l, p1, g)
    c2 = make_cyclic(l, p2, g)
    return CodeBlueprint(BlueprintKind.BALANCED, l, l, c1, c2)


def bp_build(p1: CyclicPoly, p2: CyclicPoly, l: int) -> CssCode:
    """Balanced product over ``<x^3>``; class (a, b) with a < 3 sits at index a*l + b."""
    return bp_blueprint(p1, p2, l).build()


def parse_bivariate(terms: Iterable, j: int, k: int) -> frozenset:
    """Exponent pairs reduced mod (j, k); repeated terms cancel."""
    out: set = set()
    for t in terms:
        e = (int(t[0]) % j, int(t[1]) % k)
        out ^= {e}
    return frozenset(out)


def bb_blueprint(A: Iterable, B: Iterable, j: int, k: int) -> CodeBlueprint:
    return CodeBlueprint(BlueprintKind.BIVARIATE, j, k, A=parse_bivariate(A, j, k),
                         B=parse_bivariate(B, j, k))


def bb_build(A: Iterable, B: Iterable, j: int, k: int) -> CssCode:
    """Bivariate bicycle code over C_j x C_k; ``A`` and ``B`` are (alpha, beta) exponent pairs."""
    return bb_blueprint(A, B, j, k).build()


def bp_quotient_of_hgp(hgp: CssCode, l: int) -> tuple[BinMatrix, BinMatrix]:
    """Project HGP checks onto balanced classes: one representative row per class,
    columns summed over each class."""
    grp = balanced_group(l)
    N = grp.order
    col_map = []
    for lab in hgp.qubit_labels:
        off = 0 if lab.kind is VERTICAL else N
        col_map.append(off + grp.idx((lab.a, lab.b)))

    def project(m: BinMatrix, labels) -> BinMatrix:
        rows = [0] * N
        for lab, r in zip(labels, m.rows):
            c = grp.canon(lab)
            if c != tuple(lab):
                continue
            acc = 0
            j = 0
            while r:
                if r & 1:
                    acc ^= 1 << col_map[j]
                r >>= 1
                j += 1
            rows[grp.idx(c)] = acc
        return BinMatrix(N, 2 * N, tuple(rows))

    return project(hgp.hx, hgp.x_check_labels), project(hgp.hz, hgp.z_check_labels)


# two-block equivalences ----------------------------------------------------------------

@dataclass(frozen=True)
class Relabeling:
    """Maps a source two-block code onto a target one.

    ``qubit_perm[i]`` is the target index of source qubit ``i``; likewise for
    the check permutations.  ``images`` are the images of the source group
    generators and ``swap`` records whether A and B trade places.
    """

    qubit_perm: tuple[int, ...]
    x_perm: tuple[int, ...]
    z_perm: tuple[int, ...]
    images: tuple[Elem, Elem]
    translations: tuple[Elem, Elem]
    swap: bool

    def apply(self, code: CssCode) -> tuple[BinMatrix, BinMatrix]:
        hx = code.hx.permute_columns(self.qubit_perm).permute_rows(self.x_perm)
        hz = code.hz.permute_columns(self.qubit_perm).permute_rows(self.z_perm)
        return hx, hz

    def inverse(self) -> "Relabeling":
        def inv(p):
            out = [0] * len(p)
            for i, j in enumerate(p):
                out[j] = i
            return tuple(out)
        return Relabeling(inv(self.qubit_perm), inv(self.x_perm), inv(self.z_perm),
                          self.images, self.translations, self.swap)


def _hom_image(src: AbelianGroup, gens: tuple[Elem, Elem], dst: AbelianGroup, g: Elem) -> Elem:
    u = dst.mul(g[0], gens[0])
    w = dst.mul(g[1], gens[1])
    return dst.add(u, w)


def _translate_onto(dst: AbelianGroup, image: list[Elem], target: list[Elem]) -> Elem | None:
    tset = set(target)
    if len(image) != len(tset):
        return None
    for t0 in target:
        t = dst.sub(t0, image[0])
        if {dst.add(x, t) for x in image} == tset:
            return t
    return None


def two_block_equivalence(src: AbelianGroup, src_moduli: tuple[int, int], A_s, B_s,
                          dst: AbelianGroup, A_t, B_t, prefer: tuple[Elem, Elem] | None = None,
                          allow_swap: bool = True) -> Relabeling | None:
    """Search group isomorphisms src -> dst (plus translations, optionally a block swap)
    carrying the code (A_s, B_s) onto (A_t, B_t).

    ``src`` must be a product of two cyclic groups with the given moduli, so a
    homomorphism is fixed by the images of (1,0) and (0,1).  ``prefer`` is
    tried first; the remaining candidates follow the element order of ``dst``.
    """
    j, k = src_moduli
    A_s = [src.canon(a) for a in A_s]
    B_s = [src.canon(b) for b in B_s]
    A_t = [dst.canon(a) for a in A_t]
    B_t = [dst.canon(b) for b in B_t]
    zero = dst.canon((0, 0))
    us = [u for u in dst.elements if dst.mul(j, u) == zero]
    ws = [w for w in dst.elements if dst.mul(k, w) == zero]
    cands = [(u, w) for u in us for w in ws]
    if prefer is not None:
        prefer = (dst.canon(prefer[0]), dst.canon(prefer[1]))
        if prefer in cands:
            cands.remove(prefer)
            cands.insert(0, prefer)
    for gens in cands:
        imgs = [_hom_image(src, gens, dst, g) for g in src.elements]
        if len(set(imgs)) != dst.order or src.order != dst.order:
            continue
        phiA = [_hom_image(src, gens, dst, a) for a in A_s]
        phiB = [_hom_image(src, gens, dst, b) for b in B_s]
        for swap in ((False, True) if allow_swap else (False,)):
            tA_poly, tB_poly = (B_t, A_t) if swap else (A_t, B_t)
            t1 = _translate_onto(dst, phiA, tA_poly)
            t2 = _translate_onto(dst, phiB, tB_poly)
            if t1 is None or t2 is None:
                continue
            return _relabeling(src, dst, gens, imgs, t1, t2, swap)
    return None


def _relabeling(src, dst, gens, imgs, t1, t2, swap) -> Relabeling:
    # a source qubit in the block of P goes to the target block holding phi(P) + t,
    # at index phi(g) - t; Z-checks shift by -(t1 + t2)
    N = dst.order
    qperm = [0] * (2 * N)
    xperm = [0] * N
    zperm = [0] * N
    shift = dst.neg(dst.add(t1, t2))
    blockA, blockB = (N, 0) if swap else (0, N)
    for i, _ in enumerate(src.elements):
        img = imgs[i]
        qperm[i] = blockA + dst.idx(dst.sub(img, t1))
        qperm[N + i] = blockB + dst.idx(dst.sub(img, t2))
        xperm[i] = dst.idx(img)
        zperm[i] = dst.idx(dst.add(img, shift))
    return Relabeling(tuple(qperm), tuple(xperm), tuple(zperm), tuple(gens), (t1, t2), swap)


def bb_to_bp_images(q: int) -> tuple[Elem, Elem]:
    """Generator images alpha -> x (x)_H e and beta -> e (x)_H x^q."""
    l = 3 * q
    return bp_canon(1, 0, l), bp_canon(0, q, l)


def bb_bp_isomorphism(q: int, A, B, p1: CyclicPoly, p2: CyclicPoly) -> Relabeling:
    """Relabeling carrying bb_build(A, B, 3q, 3) onto bp_build(p1, p2, 3q)."""
    if q % 3 == 0:
        raise IsomorphismUnavailable(f"no simple isomorphism for q={q} divisible by 3")
    l = 3 * q
    src = torus_group(l, 3)
    dst = balanced_group(l)
    A_t = [(e, 0) for e in p1.terms()]
    B_t = [(0, e) for e in p2.terms()]
    rel = two_block_equivalence(src, (l, 3), A, B, dst, A_t, B_t, prefer=bb_to_bp_images(q))
    if rel is None:
        raise IsomorphismUnavailable("no group isomorphism with translations matches the codes")
    return rel


def bp_to_bb_polys(q: int, p1: CyclicPoly, p2: CyclicPoly) -> tuple[frozenset, frozenset]:
    """Pull the BP block polynomials back along alpha -> x (x)_H e, beta -> e (x)_H x^q."""
    if q % 3 == 0:
        raise IsomorphismUnavailable(f"no simple isomorphism for q={q} divisible by 3")
    l = 3 * q
    src = torus_group(l, 3)
    dst = balanced_group(l)
    gens = bb_to_bp_images(q)
    inv = {_hom_image(src, gens, dst, g): g for g in src.elements}
    A = frozenset(inv[dst.canon((e, 0))] for e in p1.terms())
    B = frozenset(inv[dst.canon((0, e))] for e in p2.terms())
    return A, B


def bb_to_bp_polys(q: int, A, B) -> tuple[CyclicPoly, CyclicPoly, bool] | None:
    """Push BB polynomials forward along the same map.

    Returns ``(p1, p2, swapped)`` when one image lies in the first tensor
    factor and the other in the second factor, otherwise ``None``.
    """
    if q % 3 == 0:
        raise IsomorphismUnavailable(f"no simple isomorphism for q={q} divisible by 3")
    l = 3 * q
    src = torus_group(l, 3)
    dst = balanced_group(l)
    gens = bb_to_bp_images(q)

    def as_factor(poly):
        img = [_hom_image(src, gens, dst, src.canon(tuple(t))) for t in poly]
        first = [a + 3 * (b // 3) for a, b in img if b % 3 == 0]
        second = [b + 3 * (a // 3) for a, b in img if a == 0]
        return (first if len(first) == len(img) else None,
                second if len(second) == len(img) else None)

    fa1, fa2 = as_factor(A)
    fb1, fb2 = as_factor(B)
    if fa1 is not None and fb2 is not None:
        return CyclicPoly(l, fa1), CyclicPoly(l, fb2), False
    if fb1 is not None and fa2 is not None:
        return CyclicPoly(l, fb1), CyclicPoly(l, fa2), True
    return None
