"""Search over representative polynomial pairs for balanced product codes.

Candidates have constant term 1 and ``gcd(p, x^n + 1) = 1 + x + x^2``, so
every candidate code has k = 8.  Pairs are deduplicated under monomial
shifts of each polynomial, simultaneous mirroring ``x -> x^-1`` and, for
equal weights, exchanging the two factors; all of these are code
equivalences of the two-block construction.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterator

from .f2core import CyclicPoly, plain_poly, poly_gcd, x_n_plus_1
from .distance import combined, side_distance
from .logicals import generic_basis
from .products import bp_build

TRIPLE = 0b111  # 1 + x + x^2


@dataclass(frozen=True)
class SearchTask:
    q: int
    profile: tuple[int, int] = (3, 3)
    budget: int = 200_000_000
    seed: int = 1
    isd_iters: int = 2000
    symmetry: bool = True


@dataclass
class SearchRecord:
    key: str
    q: int
    p1: list[int]
    p2: list[int]
    n: int
    k: int
    certified_lower: int
    best_upper: int | None
    exact: bool
    methods: list[str]
    started: float
    finished: float

    @property
    def distance(self) -> int | None:
        return self.best_upper if self.exact else None

    def rank_key(self):
        score = self.best_upper if self.best_upper is not None else self.certified_lower
        return (-score, not self.exact, self.p1, self.p2)


def admissible(n: int, exps: tuple[int, ...]) -> bool:
    return poly_gcd(plain_poly(exps), x_n_plus_1(n)) == TRIPLE


def canonical_shift(n: int, exps) -> tuple[int, ...]:
    """Lexicographically smallest exponent tuple among shifts placing a term at 0."""
    s = sorted(set(e % n for e in exps))
    return min(tuple(sorted((e - a) % n for e in s)) for a in s)


def mirror(n: int, exps) -> tuple[int, ...]:
    return canonical_shift(n, [-e for e in exps])


def polys_of_weight(q: int, w: int) -> list[tuple[int, ...]]:
    n = 3 * q
    out = set()
    for rest in itertools.combinations(range(1, n), w - 1):
        exps = (0,) + rest
        if admissible(n, exps):
            out.add(canonical_shift(n, exps))
    return sorted(out)


def pair_key(n: int, p1, p2, equal_weights: bool) -> tuple:
    forms = [(canonical_shift(n, p1), canonical_shift(n, p2)), (mirror(n, p1), mirror(n, p2))]
    if equal_weights:
        forms += [(b, a) for a, b in forms]
    return min(forms)


def enumerate_candidates(q: int, profile: tuple[int, int]) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    n = 3 * q
    w1, w2 = profile
    first = polys_of_weight(q, w1)
    second = first if w2 == w1 else polys_of_weight(q, w2)
    seen = set()
    for a in first:
        for b in second:
            key = pair_key(n, a, b, w1 == w2)
            if key in seen:
                continue
            seen.add(key)
            yield key


def candidate_key(q: int, p1, p2) -> str:
    return f"q{q}:" + ",".join(map(str, p1)) + "|" + ",".join(map(str, p2))


def evaluate(q: int, p1, p2, task: SearchTask) -> SearchRecord:
    t0 = time.time()
    l = 3 * q
    code = bp_build(CyclicPoly(l, p1), CyclicPoly(l, p2), l)
    basis = generic_basis(code)
    res = []
    for side in ("X", "Z"):
        res.append(side_distance(code, side, basis, wmax=2 * q, budget=task.budget,
                                 isd_iters=task.isd_iters, seed=task.seed, symmetry=task.symmetry))
    r = combined(res)
    return SearchRecord(candidate_key(q, p1, p2), q, list(p1), list(p2), code.n, code.k,
                        r.certified_lower, r.best_upper, r.exact, r.methods, t0, time.time())


def load_records(path) -> dict[str, SearchRecord]:
    out = {}
    p = Path(path)
    if not p.exists():
        return out
    for line in p.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            d = json.loads(line)
        except json.JSONDecodeError:
            continue  # a torn trailing line from an interrupted run
        out[d["key"]] = SearchRecord(**d)
    return out


def run_search(task: SearchTask, path=None, resume: bool = True, limit: int | None = None,
               workers: int = 1) -> list[SearchRecord]:
    """Evaluate every candidate, persisting one JSON line per record.

    With ``resume`` the existing file is read first and known candidates are
    skipped.  ``limit`` stops after that many new evaluations (used to
    exercise interruption).  Returns records ranked best first.
    """
    records = load_records(path) if (path and resume) else {}
    todo = [c for c in enumerate_candidates(task.q, task.profile)
            if candidate_key(task.q, *c) not in records]
    if limit is not None:
        todo = todo[:limit]
    fh = None
    if path:
        if resume:
            _drop_torn_tail(path)
        fh = open(path, "a" if resume else "w")
    try:
        if workers > 1 and len(todo) > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(workers) as ex:
                results = ex.map(_evaluate_args, [(task.q, a, b, task) for a, b in todo])
                for rec in results:
                    _store(records, rec, fh)
        else:
            for a, b in todo:
                _store(records, evaluate(task.q, a, b, task), fh)
    finally:
        if fh:
            fh.close()
    return rank_records(records.values())


def _drop_torn_tail(path) -> None:
    # an interrupted write leaves a partial last line; appending after it would fuse records
    p = Path(path)
    if not p.exists():
        return
    data = p.read_bytes()
    if data and not data.endswith(b"\n"):
        with open(p, "r+b") as fh:
            fh.truncate(data.rfind(b"\n") + 1)


def _evaluate_args(args):
    return evaluate(*args)


def _store(records: dict, rec: SearchRecord, fh) -> None:
    records[rec.key] = rec
    if fh:
        fh.write(json.dumps(asdict(rec)) + "\n")
        fh.flush()


def rank_records(records, q: int | None = None) -> list[SearchRecord]:
    recs = [r for r in records if q is None or r.q == q]
    return sorted(recs, key=SearchRecord.rank_key)
