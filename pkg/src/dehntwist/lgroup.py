"""Order of groups generated by invertible binary matrices.

The matrices act on the nonzero row vectors of F_2^k by ``v -> v M``;
a deterministic Schreier-Sims stabiliser chain over that action gives the
exact order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .f2core import BinMatrix, is_invertible

MAX_K = 12


@dataclass(frozen=True)
class GlElement:
    matrix: BinMatrix

    def __post_init__(self):
        if not is_invertible(self.matrix):
            raise ValueError("generator is not invertible")

    @property
    def k(self) -> int:
        return self.matrix.nrows


def gl_order(k: int) -> int:
    out = 1
    for i in range(k):
        out *= (1 << k) - (1 << i)
    return out


def _row_action(m: BinMatrix) -> np.ndarray:
    """Image of each point ``v - 1`` (v nonzero) under right multiplication."""
    k = m.nrows
    img = np.zeros(1 << k, dtype=np.int64)
    for v in range(1, 1 << k):
        low = (v & -v).bit_length() - 1
        img[v] = img[v ^ (1 << low)] ^ m.rows[low]
    return img[1:] - 1


def _pair_action(mx: BinMatrix, mz: BinMatrix) -> np.ndarray:
    a = _row_action(mx)
    b = _row_action(mz)
    return np.concatenate([a, b + len(a)])


class StabilizerChain:
    """Deterministic Schreier-Sims chain for a permutation group.

    Permutations are numpy image arrays (``g[x]`` is the image of ``x``).
    Level ``i`` holds base point ``base[i]``, the strong generators fixing
    ``base[:i]`` and a transversal ``{beta: u}`` with ``u[base[i]] = beta``.
    """

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = np.arange(degree)
        self.base: list[int] = []
        self.gens: list[list[np.ndarray]] = []
        self.trans: list[dict[int, np.ndarray]] = []
        self.tested: list[set] = []

    def _is_identity(self, g: np.ndarray) -> bool:
        return bool(np.array_equal(g, self.identity))

    def _inv(self, g: np.ndarray) -> np.ndarray:
        out = np.empty_like(g)
        out[g] = self.identity
        return out

    def _new_level(self, g: np.ndarray) -> None:
        b = int(np.flatnonzero(g != self.identity)[0])
        self.base.append(b)
        self.gens.append([])
        self.trans.append({b: self.identity})
        self.tested.append(set())

    def strip(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        for i in range(start, len(self.base)):
            u = self.trans[i].get(int(g[self.base[i]]))
            if u is None:
                return g, i
            g = self._inv(u)[g]
        return g, len(self.base)

    def _grow_orbit(self, i: int) -> None:
        trans = self.trans[i]
        frontier = list(trans)
        while frontier:
            nxt = []
            for beta in frontier:
                u = trans[beta]
                for s in self.gens[i]:
                    gamma = int(s[beta])
                    if gamma not in trans:
                        trans[gamma] = s[u]
                        nxt.append(gamma)
            frontier = nxt

    def _insert(self, g: np.ndarray, lo: int, hi: int) -> None:
        """Add ``g`` as a strong generator on levels lo..hi (creating hi if needed)."""
        if hi == len(self.base):
            self._new_level(g)
        for j in range(lo, hi + 1):
            self.gens[j].append(g)
            self._grow_orbit(j)

    def _first_failure(self, i: int):
        trans = self.trans[i]
        for beta in list(trans):
            u = trans[beta]
            for si, s in enumerate(self.gens[i]):
                if (beta, si) in self.tested[i]:
                    continue
                self.tested[i].add((beta, si))
                v = trans[int(s[beta])]
                # u, then s, then v^-1 fixes base[i]
                h, j = self.strip(self._inv(v)[s[u]], i + 1)
                if j < len(self.base) or not self._is_identity(h):
                    return h, j
        return None

    def add(self, g: np.ndarray) -> None:
        h, j = self.strip(g)
        if j == len(self.base) and self._is_identity(h):
            return
        self._insert(h, 0, j)
        i = j
        while i >= 0:
            fail = self._first_failure(i)
            if fail is None:
                i -= 1
                continue
            h, j = fail
            self._insert(h, i + 1, j)
            i = j

    def order(self) -> int:
        out = 1
        for t in self.trans:
            out *= len(t)
        return out

    def contains(self, g: np.ndarray) -> bool:
        h, j = self.strip(g)
        return j == len(self.base) and self._is_identity(h)


def _chain_order(perms: Sequence[np.ndarray], degree: int) -> int:
    chain = StabilizerChain(degree)
    for p in perms:
        chain.add(p)
    return chain.order()


def _as_matrices(gens) -> list[BinMatrix]:
    out = []
    for g in gens:
        m = g.matrix if isinstance(g, GlElement) else g
        if not is_invertible(m):
            raise ValueError("generator is not invertible")
        out.append(m)
    return out


def generated_group_order(gens: Sequence) -> int:
    mats = _as_matrices(gens)
    if not mats:
        return 1
    k = mats[0].nrows
    if k > MAX_K:
        raise ValueError(f"k={k} exceeds {MAX_K}")
    return _chain_order([_row_action(m) for m in mats], (1 << k) - 1)


def symplectic_group_order(pairs: Sequence[tuple[BinMatrix, BinMatrix]]) -> int:
    """Order of the group generated by ``(glx, glz)`` acting on both logical types."""
    if not pairs:
        return 1
    mats = [(_as_matrices([a])[0], _as_matrices([b])[0]) for a, b in pairs]
    k = mats[0][0].nrows
    if k > MAX_K:
        raise ValueError(f"k={k} exceeds {MAX_K}")
    return _chain_order([_pair_action(a, b) for a, b in mats], 2 * ((1 << k) - 1))


def is_full_gl(gens: Sequence) -> bool:
    mats = _as_matrices(gens)
    if not mats:
        return False
    return generated_group_order(mats) == gl_order(mats[0].nrows)


def transvection(k: int, i: int, j: int) -> BinMatrix:
    """Identity plus a single off-diagonal one at (i, j)."""
    rows = [1 << r for r in range(k)]
    rows[i] |= 1 << j
    return BinMatrix(k, k, tuple(rows))


