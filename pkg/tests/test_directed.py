import numpy as np
import pytest

from kpath.directed import Digraph, PgEvaluator, directed_kpath, pg_eval
from kpath.evaluator import CountingBox, ShapeError
from kpath.field import get_field
from kpath.mmtest import TestParams, has_multilinear
from kpath.oracle import dfs_kpath_directed, expand_walks
from kpath.phi import phi_random_sample

PATH3 = Digraph.from_edges(3, [(0, 1), (1, 2)])
CYCLE2 = Digraph.from_edges(2, [(0, 1), (1, 0)])


def ones(n, k):
    return {"x": np.ones(n, dtype=np.uint64), "y": np.ones(k * n, dtype=np.uint64)}


def test_pg_eval_examples():
    assert pg_eval(PgEvaluator(Digraph.from_edges(3, []), 2), ones(3, 2)) == 0
    edge = Digraph.from_edges(2, [(0, 1)])
    assert pg_eval(PgEvaluator(edge, 2), ones(2, 2)) == 1
    a = ones(2, 2)
    a["x"][0] = 0
    assert pg_eval(PgEvaluator(edge, 2), a) == 0


def test_pg_eval_shape_and_k():
    with pytest.raises(ShapeError):
        pg_eval(PgEvaluator(PATH3, 2), ones(3, 3))
    with pytest.raises(ValueError):
        PgEvaluator(PATH3, 0)


def test_directed_examples():
    assert directed_kpath(PATH3, 3).yes
    complete = Digraph.from_edges(3, [(i, j) for i in range(3) for j in range(3) if i != j])
    v = directed_kpath(complete, 4)
    assert v.answer == "NO" and v.queries_used == 0
    for seed in range(50):
        assert directed_kpath(CYCLE2, 3, TestParams(3, seed)).answer == "NO"
    with pytest.raises(ValueError):
        directed_kpath(PATH3, 0)
    assert directed_kpath(Digraph.from_edges(1, []), 1).yes


def test_cycle_samples_vanish():
    pg = PgEvaluator(CYCLE2, 3)
    for seed in range(100):
        assert phi_random_sample(pg, [("x", 3)], np.random.default_rng(seed)) == 0


def random_digraph(rng, n, p):
    return Digraph.from_edges(
        n, [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p]
    )


def test_walk_sum_identity():
    f = get_field()
    rng = np.random.default_rng(11)
    for _ in range(60):
        n = int(rng.integers(1, 5))
        k = int(rng.integers(1, 5))
        g = random_digraph(rng, n, 0.5)
        pg = PgEvaluator(g, k)
        poly = expand_walks(g, k)
        for _ in range(10):
            a = {"x": f.random_vector(rng, n), "y": f.random_vector(rng, k * n)}
            assert pg_eval(pg, a) == poly.evaluate(a, 64)


def test_fused_and_generic_transform_agree():
    rng = np.random.default_rng(5)
    g = random_digraph(rng, 6, 0.4)
    pg = PgEvaluator(g, 4)
    for seed in range(10):
        fused = phi_random_sample(pg, [("x", 4)], np.random.default_rng(seed))
        plain = phi_random_sample(pg, [("x", 4)], np.random.default_rng(seed), fused=False)
        assert fused == plain


def test_query_budget():
    g = Digraph.from_edges(4, [(0, 1), (1, 0), (2, 3)])
    cb = CountingBox(PgEvaluator(g, 3))
    v = has_multilinear(cb, "x", 3, TestParams(4, 0))
    assert v.answer == "NO" and cb.calls == v.queries_used == 4 * 8


def test_decision_equivalence_small():
    rng = np.random.default_rng(8)
    for i in range(40):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, 6))
        g = random_digraph(rng, n, 0.3)
        truth = dfs_kpath_directed(g, k) is not None
        assert directed_kpath(g, k, TestParams(3, i)).yes == truth
