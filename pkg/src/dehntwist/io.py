"""Code bundle (JSON) and MacKay alist serialisation."""

from __future__ import annotations

import json
from pathlib import Path

from .f2core import BinMatrix
from .products import CodeBlueprint, CssCode, EdgeKind, QubitLabel


def write_alist(m: BinMatrix, path) -> None:
    Path(path).write_text(alist_text(m))


def alist_text(m: BinMatrix) -> str:
    cols = [[] for _ in range(m.ncols)]
    row_sup = m.supports()
    for i, sup in enumerate(row_sup):
        for j in sup:
            cols[j].append(i)
    col_deg = [len(c) for c in cols]
    row_deg = [len(r) for r in row_sup]
    max_c = max(col_deg, default=0)
    max_r = max(row_deg, default=0)
    lines = [f"{m.ncols} {m.nrows}", f"{max_c} {max_r}",
             " ".join(map(str, col_deg)), " ".join(map(str, row_deg))]
    for c in cols:
        lines.append(" ".join(str(i + 1) for i in c + [-1] * (max_c - len(c))))
    for r in row_sup:
        lines.append(" ".join(str(j + 1) for j in r + [-1] * (max_r - len(r))))
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> BinMatrix:
    tokens = [int(t) for t in text.split()]
    it = iter(tokens)
    n, m = next(it), next(it)
    max_c, max_r = next(it), next(it)
    col_deg = [next(it) for _ in range(n)]
    row_deg = [next(it) for _ in range(m)]
    supports = [[] for _ in range(m)]
    for j in range(n):
        entries = [next(it) for _ in range(max_c)]
        for i in entries[: col_deg[j]]:
            supports[i - 1].append(j)
    # the row section is redundant; read it to cross-check
    for i in range(m):
        entries = [next(it) for _ in range(max_r)]
        nz = sorted(e - 1 for e in entries if e > 0)
        if nz != sorted(supports[i]) or len(nz) != row_deg[i]:
            raise ValueError(f"alist row {i + 1} disagrees with the column lists")
    return BinMatrix.from_supports(supports, n)


def read_alist(path) -> BinMatrix:
    return parse_alist(Path(path).read_text())


def code_to_bundle(code: CssCode, extra: dict | None = None) -> dict:
    bp = code.blueprint
    out = {
        "kind": code.kind,
        "params": bp.params() if bp else {},
        "n": code.n,
        "hx": code.hx.supports(),
        "hz": code.hz.supports(),
        "labels": {
            "qubits": [[lab.kind.value, lab.a, lab.b] for lab in code.qubit_labels],
            "x_checks": [list(c) for c in code.x_check_labels],
            "z_checks": [list(c) for c in code.z_check_labels],
        },
    }
    if extra:
        out.update(extra)
    return out


def bundle_to_code(data: dict) -> CssCode:
    """Rebuild a code from a bundle.  Matrices come from the file as written;
    the blueprint is reconstructed from ``params`` for twist and basis work."""
    n = data["n"]
    hx = BinMatrix.from_supports(data["hx"], n)
    hz = BinMatrix.from_supports(data["hz"], n)
    labels = data["labels"]
    qubits = tuple(QubitLabel(EdgeKind(k), a, b) for k, a, b in labels["qubits"])
    bp = None
    if data.get("kind") in ("hgp", "bp", "bb"):
        bp = CodeBlueprint.from_params(data["kind"], data["params"])
    return CssCode(n, hx, hz, qubits, tuple(tuple(c) for c in labels["x_checks"]),
                   tuple(tuple(c) for c in labels["z_checks"]), bp)


def write_bundle(code: CssCode, path, extra: dict | None = None) -> None:
    Path(path).write_text(json.dumps(code_to_bundle(code, extra), indent=1) + "\n")


def read_bundle(path) -> CssCode:
    return bundle_to_code(json.loads(Path(path).read_text()))
