import json

import pytest

from dehntwist.cyclic import family_polys
from dehntwist.f2core import CyclicPoly, poly_mul
from dehntwist.search import (SearchTask, admissible, canonical_shift, enumerate_candidates,
                              load_records, mirror, pair_key, polys_of_weight, rank_records,
                              run_search)


def test_candidates_q1():
    assert list(enumerate_candidates(1, (3, 3))) == [((0, 1, 2), (0, 1, 2))]


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5])
def test_weight_4_stream_empty(q):
    assert polys_of_weight(q, 4) == []
    assert list(enumerate_candidates(q, (4, 4))) == []


@pytest.mark.parametrize("q,w", [(3, 3), (3, 5), (5, 3), (5, 5)])
def test_emitted_polys_annihilate_g(q, w):
    _, g = family_polys(q)
    polys = polys_of_weight(q, w)
    assert polys
    for p in polys:
        assert poly_mul(CyclicPoly(3 * q, p), g).is_zero() and admissible(3 * q, p)


def test_canonical_forms():
    assert canonical_shift(15, [3, 4, 8]) == (0, 1, 5)
    assert mirror(15, [0, 1, 5]) == canonical_shift(15, [0, 14, 10])
    a, b = (0, 1, 5), (0, 2, 7)
    assert pair_key(15, a, b, True) == pair_key(15, b, a, True)
    assert pair_key(15, a, b, True) == pair_key(15, mirror(15, a), mirror(15, b), True)


def test_search_q1_q2():
    top1 = run_search(SearchTask(1))
    assert [r.distance for r in top1] == [2]
    top2 = run_search(SearchTask(2))
    assert top2[0].distance == 4 and (top2[0].p1, top2[0].p2) == ([0, 1, 2], [0, 1, 2])
    assert all(r.k == 8 for r in top1 + top2)


def test_search_q3_table_ii():
    top = run_search(SearchTask(3, (3, 5)))
    assert len(top) == 9
    best = top[0]
    assert best.exact and best.distance == 6 and best.n == 54


def test_resume_after_interruption(tmp_path):
    path = tmp_path / "rec.jsonl"
    full = run_search(SearchTask(3, (3, 5)), tmp_path / "full.jsonl")
    run_search(SearchTask(3, (3, 5)), path, limit=4)
    assert len(load_records(path)) == 4
    # simulate a torn trailing write
    with open(path, "a") as fh:
        fh.write('{"key": "q3:0,1')
    resumed = run_search(SearchTask(3, (3, 5)), path)

    def strip(rs):
        return [(r.key, r.certified_lower, r.best_upper, r.exact) for r in rs]

    assert strip(resumed) == strip(full)
    keys = [json.loads(l)["key"] for l in path.read_text().splitlines() if l.endswith("}")]
    assert len(keys) == len(set(keys)) == 9


def test_rank_records_filters_q(tmp_path):
    recs = run_search(SearchTask(1)) + run_search(SearchTask(2))
    assert [r.q for r in rank_records(recs, q=2)] == [2]
