"""Timing harness for the directed test's growth in k."""

from __future__ import annotations

import time
from collections.abc import Iterable

import numpy as np

from .directed import Digraph, PgEvaluator
from .field import FieldConfig
from .mmtest import derive_seed, trial_rng
from .phi import phi_random_sample

__all__ = ["growth_ratios", "random_digraph", "time_directed"]


def random_digraph(n: int, p: float, seed: int) -> Digraph:
    """Erdos-Renyi digraph without self-loops, fixed by ``seed``."""
    rng = np.random.default_rng(derive_seed(seed, n))
    arcs = rng.random((n, n)) < p
    np.fill_diagonal(arcs, False)
    return Digraph.from_edges(n, zip(*(idx.tolist() for idx in np.nonzero(arcs))))


def time_directed(
    g: Digraph,
    ks: Iterable[int],
    field: FieldConfig,
    seed: int = 0,
    repeats: int = 1,
) -> list[dict]:
    """Seconds for one full subset-sum sample (2^k queries) at each k.

    The best of ``repeats`` runs is kept. A single sample is timed rather
    than a whole test so an early YES cannot cut the measurement short.
    """
    # compile the kernels outside the timed region
    phi_random_sample(PgEvaluator(g, 2, field), [("x", 2)], trial_rng(seed))
    rows = []
    for k in ks:
        pg = PgEvaluator(g, k, field)
        best = float("inf")
        for rep in range(repeats):
            rng = trial_rng(seed, k, rep)
            start = time.perf_counter()
            phi_random_sample(pg, [("x", k)], rng)
            best = min(best, time.perf_counter() - start)
        rows.append({"k": k, "seconds": best, "queries": 1 << k})
    return rows


def growth_ratios(rows: list[dict]) -> list[float]:
    """t(k+1) / t(k) for consecutive rows."""
    return [b["seconds"] / a["seconds"] for a, b in zip(rows, rows[1:])]
