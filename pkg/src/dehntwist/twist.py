"""Dehn-twist CNOT schedules: compilation, simulation and verification.

A vertical twist acts between two columns ``(*, from)`` and ``(*, to)``;
the control qubits are vertical edges and the targets horizontal edges.
A horizontal twist is the mirror image on rows with the kinds exchanged.

Offsets.  For a target logical whose generator shape has terms
``s_1, ..., s_w`` (fixed order, see ``term_order``), round ``r`` shifts
every control position ``h`` to ``h + d_r`` on the target line, where
``d_r = (t - 1) + s_r - a0``.  Here ``t`` is the 1-based translation of the
target logical and ``a0`` the anchor position on the source line.
"""

from __future__ import annotations

import itertools
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import CatalogUnavailable, ScheduleInvalid, TrivialTwist
from .f2core import BinMatrix, BitVec, CyclicPoly, is_invertible
from .logicals import LogicalBasis, basis_polynomial, reduce_to_basis
from .products import (
    HORIZONTAL,
    VERTICAL,
    AbelianGroup,
    BlueprintKind,
    CodeBlueprint,
    CssCode,
    EdgeKind,
    QubitLabel,
    two_block_equivalence,
)


@dataclass(frozen=True)
class TwistSpec:
    orientation: EdgeKind
    from_index: int
    to_index: int
    target_t: int = 1
    implements: str = "X"
    anchor_pos: int = 0

    @property
    def control_kind(self) -> EdgeKind:
        return self.orientation

    @property
    def target_kind(self) -> EdgeKind:
        return self.orientation.other

    @property
    def anchor(self) -> QubitLabel:
        """The source edge whose Pauli is propagated."""
        kind = self.control_kind if self.implements == "X" else self.target_kind
        return QubitLabel(kind, *line(self.orientation, self.from_index, self.anchor_pos))

    @property
    def target_label(self) -> tuple[str, int, int]:
        """(orient, i, j) of the logical that the anchor is copied onto."""
        if self.orientation is VERTICAL:
            return ("v", self.target_t, self.to_index + 1)
        return ("h", self.to_index + 1, self.target_t)

    def name(self) -> str:
        o = "v" if self.orientation is VERTICAL else "h"
        return f"{o}{self.from_index}{self.to_index}t{self.target_t}{self.implements}"

    def to_json(self) -> dict:
        return {"orientation": self.orientation.value, "from": self.from_index,
                "to": self.to_index, "t": self.target_t, "implements": self.implements,
                "anchor": self.anchor_pos}

    @classmethod
    def from_json(cls, d: dict) -> "TwistSpec":
        return cls(EdgeKind(d["orientation"]), int(d["from"]), int(d["to"]), int(d.get("t", 1)),
                   d.get("implements", "X"), int(d.get("anchor", 0)))


@dataclass(frozen=True)
class CnotRound:
    pairs: tuple[tuple[int, int], ...]

    def validate(self) -> None:
        controls = [c for c, _ in self.pairs]
        targets = [t for _, t in self.pairs]
        if len(set(controls)) != len(controls) or len(set(targets)) != len(targets):
            raise ScheduleInvalid("repeated control or target in a round")
        if set(controls) & set(targets):
            raise ScheduleInvalid("a qubit is both control and target in one round")


def line(orientation: EdgeKind, index: int, pos: int) -> tuple[int, int]:
    """Group element at position ``pos`` along the line with fixed coordinate ``index``."""
    return (pos, index) if orientation is VERTICAL else (index, pos)


def line_length(blueprint: CodeBlueprint, orientation: EdgeKind) -> int:
    return blueprint.l if orientation is VERTICAL else blueprint.m


def _factor_codes(blueprint: CodeBlueprint, orientation: EdgeKind):
    """(code along the line, code across it)."""
    if orientation is VERTICAL:
        return blueprint.code1, blueprint.code2
    return blueprint.code2, blueprint.code1


def target_shape(blueprint: CodeBlueprint, spec: TwistSpec) -> CyclicPoly:
    code = _factor_codes(blueprint, spec.orientation)[0]
    return basis_polynomial(code) if spec.implements == "X" else code.g


def term_order(blueprint: CodeBlueprint, spec: TwistSpec) -> list[int]:
    """Exponents of the target shape in schedule order.

    A shape ``g`` is walked in ascending exponent order; a shape ``g^T``
    is walked as ``-s`` for ``s`` ascending in ``g`` (toric: 0, -1, -2).
    """
    code = _factor_codes(blueprint, spec.orientation)[0]
    if spec.implements == "Z" or code.is_family():
        return code.g.terms()
    return [-s for s in code.g.terms()]


def offsets(blueprint: CodeBlueprint, spec: TwistSpec) -> list[int]:
    return [spec.target_t - 1 + s - spec.anchor_pos for s in term_order(blueprint, spec)]


def _qubit(grp: AbelianGroup, kind: EdgeKind, g: tuple[int, int]) -> int:
    off = 0 if kind is VERTICAL else grp.order
    return off + grp.idx(g)


def compile_schedule(blueprint: CodeBlueprint, basis: LogicalBasis | None, spec: TwistSpec) -> list[CnotRound]:
    if blueprint.kind is BlueprintKind.BIVARIATE:
        raise ScheduleInvalid("compile twists on the equivalent balanced blueprint")
    grp = blueprint.group()
    L = line_length(blueprint, spec.orientation)
    o = spec.orientation
    ck, tk = spec.control_kind, spec.target_kind
    rounds = []
    for d in offsets(blueprint, spec):
        pairs = []
        for h in range(L):
            if spec.implements == "X":
                c = _qubit(grp, ck, line(o, spec.from_index, h))
                t = _qubit(grp, tk, line(o, spec.to_index, h + d))
            else:
                c = _qubit(grp, ck, line(o, spec.to_index, h + d))
                t = _qubit(grp, tk, line(o, spec.from_index, h))
            pairs.append((c, t))
        rnd = CnotRound(tuple(pairs))
        rnd.validate()
        rounds.append(rnd)
    return rounds


def anchor_overlap(blueprint: CodeBlueprint, basis: LogicalBasis, spec: TwistSpec) -> tuple[int, str | None]:
    """Overlap of the source line with the first source logical containing the anchor."""
    grp = blueprint.group()
    L = line_length(blueprint, spec.orientation)
    anchor = spec.anchor
    a_idx = _qubit(grp, anchor.kind, (anchor.a, anchor.b))
    src_line = 0
    for h in range(L):
        src_line |= 1 << _qubit(grp, anchor.kind, line(spec.orientation, spec.from_index, h))
    pauli = spec.implements
    # the source logical lives across the line, e.g. X^h for a vertical X twist
    source_orient = "h" if spec.orientation is VERTICAL else "v"
    for lab, row in zip(basis.labels(pauli), basis.rows(pauli).rows):
        if lab.orient == source_orient and (row >> a_idx) & 1:
            return (row & src_line).bit_count(), str(lab)
    return 0, None


# simulation -------------------------------------------------------------------------

def apply_round(code: CssCode, rnd: CnotRound, x_frames: Sequence[int] = (),
                z_frames: Sequence[int] = ()) -> tuple[CssCode, list[int], list[int]]:
    """Conjugate checks and frames by one round of CNOTs (dense, for small codes)."""
    def push_x(r):
        for c, t in rnd.pairs:
            if (r >> c) & 1:
                r ^= 1 << t
        return r

    def push_z(r):
        for c, t in rnd.pairs:
            if (r >> t) & 1:
                r ^= 1 << c
        return r

    hx = BinMatrix(code.hx.nrows, code.n, tuple(push_x(r) for r in code.hx.rows))
    hz = BinMatrix(code.hz.nrows, code.n, tuple(push_z(r) for r in code.hz.rows))
    new = CssCode(code.n, hx, hz, code.qubit_labels, code.x_check_labels, code.z_check_labels,
                  code.blueprint)
    return new, [push_x(r) for r in x_frames], [push_z(r) for r in z_frames]


def _bits(s) -> int:
    v = 0
    for j in s:
        v |= 1 << j
    return v


class SparseState:
    """Check rows as sets with column -> row maps; cheap CNOT updates."""

    def __init__(self, hx: BinMatrix, hz: BinMatrix, x_frames=(), z_frames=()):
        self.n = hx.ncols
        self.x = [set(s) for s in hx.supports()]
        self.z = [set(s) for s in hz.supports()]
        self.xcol = [set() for _ in range(self.n)]
        self.zcol = [set() for _ in range(self.n)]
        for i, s in enumerate(self.x):
            for j in s:
                self.xcol[j].add(i)
        for i, s in enumerate(self.z):
            for j in s:
                self.zcol[j].add(i)
        self.xf = [set(BitVec(self.n, f).support()) for f in x_frames]
        self.zf = [set(BitVec(self.n, f).support()) for f in z_frames]
        self.xw = Counter(len(s) for s in self.x)
        self.zw = Counter(len(s) for s in self.z)

    @staticmethod
    def _toggle(rows, col, weights, i, j):
        s = rows[i]
        weights[len(s)] -= 1
        if j in s:
            s.discard(j)
            col[j].discard(i)
        else:
            s.add(j)
            col[j].add(i)
        weights[len(s)] += 1

    def cnot_round(self, rnd: CnotRound) -> tuple[set, set]:
        changed_x, changed_z = set(), set()
        # gates in a round act on disjoint qubits, so they commute
        xr = [(list(self.xcol[c]), t) for c, t in rnd.pairs]
        zr = [(list(self.zcol[t]), c) for c, t in rnd.pairs]
        for rows, t in xr:
            for i in rows:
                self._toggle(self.x, self.xcol, self.xw, i, t)
                changed_x.add(i)
        for rows, c in zr:
            for i in rows:
                self._toggle(self.z, self.zcol, self.zw, i, c)
                changed_z.add(i)
        for f in self.xf:
            for c, t in rnd.pairs:
                if c in f:
                    f.symmetric_difference_update((t,))
        for f in self.zf:
            for c, t in rnd.pairs:
                if t in f:
                    f.symmetric_difference_update((c,))
        return changed_x, changed_z

    def commutes_locally(self, changed_x, changed_z) -> bool:
        for i in changed_x:
            s = self.x[i]
            nbrs = set()
            for j in s:
                nbrs |= self.zcol[j]
            for k in nbrs:
                if len(s & self.z[k]) & 1:
                    return False
        for k in changed_z:
            s = self.z[k]
            nbrs = set()
            for j in s:
                nbrs |= self.xcol[j]
            for i in nbrs:
                if len(s & self.x[i]) & 1:
                    return False
        return True

    def max_weights(self) -> tuple[int, int]:
        return (max(w for w, c in self.xw.items() if c > 0),
                max(w for w, c in self.zw.items() if c > 0))

    def hx(self) -> BinMatrix:
        return BinMatrix(len(self.x), self.n, tuple(_bits(s) for s in self.x))

    def hz(self) -> BinMatrix:
        return BinMatrix(len(self.z), self.n, tuple(_bits(s) for s in self.z))

    def x_frames(self) -> list[int]:
        return [_bits(f) for f in self.xf]

    def z_frames(self) -> list[int]:
        return [_bits(f) for f in self.zf]


# predicted check evolution ----------------------------------------------------------------

@dataclass(frozen=True)
class PredictedTerms:
    """Extra terms after ``rounds`` rounds.

    X-check at ``line(orient, x_line, c)`` gains ``x_kind`` qubits at
    ``line(orient, x_gain_line, c + u)`` for ``u`` in ``x_poly``; likewise
    for Z-checks.
    """

    orientation: EdgeKind
    rounds: int
    x_line: int
    x_gain_line: int
    x_kind: EdgeKind
    x_poly: CyclicPoly
    z_line: int
    z_gain_line: int
    z_kind: EdgeKind
    z_poly: CyclicPoly


def predicted_coboundary(blueprint: CodeBlueprint, spec: TwistSpec, r: int) -> PredictedTerms:
    L = line_length(blueprint, spec.orientation)
    p = _factor_codes(blueprint, spec.orientation)[0].p
    d = CyclicPoly(L, offsets(blueprint, spec)[:r])
    ck, tk = spec.control_kind, spec.target_kind
    if spec.implements == "X":
        return PredictedTerms(spec.orientation, r, spec.from_index, spec.to_index, tk, p.T * d,
                              spec.to_index, spec.from_index, ck, p * d.T)
    pd = p * d
    return PredictedTerms(spec.orientation, r, spec.to_index, spec.from_index, tk, pd.T,
                          spec.from_index, spec.to_index, ck, pd)


def predicted_rows(blueprint: CodeBlueprint, code: CssCode, pred: PredictedTerms) -> tuple[dict, dict]:
    """Expected X and Z rows on the affected lines, keyed by row index."""
    grp = blueprint.group()
    o = pred.orientation
    L = line_length(blueprint, o)

    def rows(m: BinMatrix, at_line, gain_line, kind, poly):
        out = {}
        for c in range(L):
            i = grp.idx(line(o, at_line, c))
            r = m.rows[i]
            for u in poly.terms():
                r ^= 1 << _qubit(grp, kind, line(o, gain_line, c + u))
            out[i] = r
        return out

    return (rows(code.hx, pred.x_line, pred.x_gain_line, pred.x_kind, pred.x_poly),
            rows(code.hz, pred.z_line, pred.z_gain_line, pred.z_kind, pred.z_poly))


# running ----------------------------------------------------------------------------------

@dataclass
class TwistReport:
    spec: TwistSpec
    closed: bool
    rounds: int
    hx_weights: list[int]
    hz_weights: list[int]
    commutes: list[bool]
    predicted_ok: list[bool]
    glx: BinMatrix
    glz: BinMatrix
    anchor_overlap: int
    source_logical: str | None
    pairing_preserved: bool
    certificates: list = field(default_factory=list)

    @property
    def max_weight(self) -> int:
        return max(max(self.hx_weights, default=0), max(self.hz_weights, default=0))

    @property
    def trivial(self) -> bool:
        return self.anchor_overlap % 2 == 0

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "closed": self.closed,
            "rounds": self.rounds,
            "hx_max_weight": self.hx_weights,
            "hz_max_weight": self.hz_weights,
            "commutes": self.commutes,
            "predicted_ok": self.predicted_ok,
            "max_weight": self.max_weight,
            "anchor_overlap": self.anchor_overlap,
            "source_logical": self.source_logical,
            "pairing_preserved": self.pairing_preserved,
            "glx": [format_row(r, self.glx.ncols) for r in self.glx.rows],
            "glz": [format_row(r, self.glz.ncols) for r in self.glz.rows],
            "certificates": self.certificates,
        }


def format_row(r: int, k: int) -> str:
    return "".join(str((r >> j) & 1) for j in range(k))


RoundHook = Callable[[int, CssCode, list, list], object]


def run_twist(code: CssCode, basis: LogicalBasis, spec: TwistSpec,
              on_round: RoundHook | None = None, check_prediction: bool = True) -> TwistReport:
    """Simulate a twist; ``on_round(r, code_r, x_frames, z_frames)`` may return a certificate."""
    bp = code.blueprint
    if bp is None:
        raise ScheduleInvalid("code has no blueprint")
    overlap, source = anchor_overlap(bp, basis, spec)
    if overlap % 2 == 0:
        warnings.warn(f"twist {spec.name()} overlaps its source logical {overlap} times",
                      TrivialTwist, stacklevel=2)
    schedule = compile_schedule(bp, basis, spec)
    state = SparseState(code.hx, code.hz, basis.x_rows.rows, basis.z_rows.rows)
    hxw, hzw, comm, pred_ok, certs = [], [], [], [], []
    for r, rnd in enumerate(schedule, start=1):
        cx, cz = state.cnot_round(rnd)
        comm.append(state.commutes_locally(cx, cz))
        wx, wz = state.max_weights()
        hxw.append(wx)
        hzw.append(wz)
        if check_prediction:
            ex, ez = predicted_rows(bp, code, predicted_coboundary(bp, spec, r))
            ok = all(state.x[i] == set(BitVec(code.n, v).support()) for i, v in ex.items())
            ok = ok and all(state.z[i] == set(BitVec(code.n, v).support()) for i, v in ez.items())
            ok = ok and cx <= set(ex) and cz <= set(ez)
            pred_ok.append(ok)
        if on_round is not None:
            snap = CssCode(code.n, state.hx(), state.hz(), code.qubit_labels,
                           code.x_check_labels, code.z_check_labels, bp)
            cert = on_round(r, snap, state.x_frames(), state.z_frames())
            if cert is not None:
                certs.append(cert)
    hx, hz = state.hx(), state.hz()
    closed = hx == code.hx and hz == code.hz
    if not closed:
        raise ScheduleInvalid(f"twist {spec.name()} does not return to the original code")
    k = basis.k
    glx = BinMatrix(k, k, tuple(reduce_to_basis(code, basis, f, "X").bits for f in state.x_frames()))
    glz = BinMatrix(k, k, tuple(reduce_to_basis(code, basis, f, "Z").bits for f in state.z_frames()))
    P = basis.gram
    preserved = is_invertible(glx) and is_invertible(glz) and glx @ P @ glz.T == P
    return TwistReport(spec, closed, len(schedule), hxw, hzw, comm, pred_ok, glx, glz,
                       overlap, source, preserved, certs)


def twist_catalog_16(blueprint: CodeBlueprint, basis: LogicalBasis | None = None) -> list[TwistSpec]:
    """Twists between lines 0 and 1 in both orientations, two targets each."""
    if blueprint.kind is BlueprintKind.BIVARIATE:
        raise CatalogUnavailable("catalog is defined on the balanced blueprint")
    if blueprint.code1.alpha != 2 or blueprint.code2.alpha != 2:
        raise CatalogUnavailable("catalog requires alpha = 2 on both factors")
    if blueprint.kind is BlueprintKind.BALANCED and (blueprint.l // 3) % 2 == 0:
        raise CatalogUnavailable("balanced catalog requires odd q")
    out = []
    for o, f, t, tt in itertools.product((VERTICAL, HORIZONTAL), (0, 1), (0, 1), (1, 2)):
        out.append(TwistSpec(o, f, t, tt, "X", 0))
    return out


# instantaneous twist ---------------------------------------------------------------------

@dataclass
class InstantaneousReport:
    success: bool
    reason: str
    relabeling: object = None
    images: tuple | None = None


def instantaneous_twist(blueprint: CodeBlueprint) -> InstantaneousReport:
    """Apply CNOT V(g) -> H(g) on every g at once and look for a relabeling
    (group automorphism plus translations) back to the original code."""
    if blueprint.kind is BlueprintKind.BIVARIATE:
        raise ScheduleInvalid("instantaneous twist is defined on cyclic blueprints")
    code = blueprint.build()
    grp = blueprint.group()
    N = grp.order
    rnd = CnotRound(tuple((i, N + i) for i in range(N)))
    after, _, _ = apply_round(code, rnd)
    if not after.commutes():
        return InstantaneousReport(False, "commutation broken")  # pragma: no cover
    if sorted(after.hx.row_weights()) != sorted(code.hx.row_weights()) or \
            sorted(after.hz.row_weights()) != sorted(code.hz.row_weights()):
        return InstantaneousReport(False, "check weights changed; no qubit relabeling exists")
    A, B = blueprint.block_polys()
    A = {grp.canon(a) for a in A}
    B = {grp.canon(b) for b in B}
    Bp = A ^ B
    if blueprint.kind is BlueprintKind.BALANCED:
        return InstantaneousReport(False, "relabeling search only over torus groups")
    rel = two_block_equivalence(grp, (blueprint.l, blueprint.m), sorted(A), sorted(Bp),
                                grp, sorted(A), sorted(B), allow_swap=False)
    if rel is None:
        return InstantaneousReport(False, "no group relabeling maps the twisted code back")
    hx, hz = rel.apply(after)
    if hx != code.hx or hz != code.hz:
        return InstantaneousReport(False, "relabeling failed verification")  # pragma: no cover
    return InstantaneousReport(True, "recovered", rel, rel.images)


def toric_instantaneous(l: int, m: int) -> InstantaneousReport:
    from .cyclic import repetition_code
    from .products import hgp_blueprint
    return instantaneous_twist(hgp_blueprint(repetition_code(l), repetition_code(m)))
