"""Simple k-path detection in directed graphs (k counts vertices).

The walk polynomial P_G(x, y) = 1^T B^(k) ... B^(2) (x * y) with
B^(m)[i, j] = x_i y_{m,i} A[i, j] has one monomial per k-vertex walk, and a
multilinear x-part exactly when the walk is a simple path. The y variables
keep distinct walks from cancelling in characteristic 2 and are only ever
fixed at random points.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

import numba as nb
import numpy as np

from .evaluator import Assignment, BlackBox, VarGroup
from .field import FieldConfig, gf_mul
from .mmtest import TestParams, Verdict, has_multilinear

__all__ = ["Digraph", "PgEvaluator", "directed_kpath", "pg_eval"]


@dataclass(frozen=True)
class Digraph:
    """Directed graph on vertices 0..n-1 with sorted out-neighbour lists."""

    n: int
    out: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.out) != self.n:
            raise ValueError("need one out-neighbour list per vertex")
        for nbrs in self.out:
            for j in nbrs:
                if not 0 <= j < self.n:
                    raise ValueError(f"edge endpoint {j} out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
        out: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            out[u].add(v)
        return cls(n, tuple(tuple(sorted(s)) for s in out))

    @property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self.out)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.out) for v in nbrs]

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(nbrs) for nbrs in self.out])
        indices = np.array([v for nbrs in self.out for v in nbrs], dtype=np.int64)
        return indptr, indices


@nb.njit(cache=True)
def _pg_kernel(x, y, indptr, indices, k, width, red):
    n = x.size
    v = np.empty(n, dtype=np.uint64)
    nxt = np.empty(n, dtype=np.uint64)
    for i in range(n):
        v[i] = gf_mul(x[i], y[i], width, red)
    for m in range(1, k):
        for i in range(n):
            s = np.uint64(0)
            for p in range(indptr[i], indptr[i + 1]):
                s ^= v[indices[p]]
            nxt[i] = gf_mul(x[i], gf_mul(y[m * n + i], s, width, red), width, red)
        v, nxt = nxt, v
    total = np.uint64(0)
    for i in range(n):
        total ^= v[i]
    return total


@nb.njit(cache=True)
def _pg_phi_kernel(blocks, y, indptr, indices, k, width, red):
    # x_i * y_{m,i} is linear in x, so each Gray step XORs in the flipped
    # block's precomputed products instead of recomputing them.
    nblocks, n = blocks.shape
    zy = np.empty((nblocks, k, n), dtype=np.uint64)
    for j in range(nblocks):
        for m in range(k):
            for i in range(n):
                zy[j, m, i] = gf_mul(blocks[j, i], y[m * n + i], width, red)
    xy = np.zeros((k, n), dtype=np.uint64)
    v = np.empty(n, dtype=np.uint64)
    nxt = np.empty(n, dtype=np.uint64)
    total = np.uint64(0)  # the empty subset puts x = 0, where P_G vanishes
    for step in range(1, 1 << nblocks):
        j = 0
        t = step
        while t & 1 == 0:
            t >>= 1
            j += 1
        for m in range(k):
            for i in range(n):
                xy[m, i] ^= zy[j, m, i]
        for i in range(n):
            v[i] = xy[0, i]
        for m in range(1, k):
            for i in range(n):
                s = np.uint64(0)
                for p in range(indptr[i], indptr[i + 1]):
                    s ^= v[indices[p]]
                nxt[i] = gf_mul(xy[m, i], s, width, red)
            v, nxt = nxt, v
        for i in range(n):
            total ^= v[i]
    return total


class PgEvaluator(BlackBox):
    """Black box for P_G: group ``x`` (n vars, degree k), ``y`` (k*n vars, degree k).

    ``y`` is laid out layer-major: y[(m-1)*n + i] is y_{m,i}, the layer-m variable of vertex i.
    """

    def __init__(self, graph: Digraph, k: int, field: FieldConfig | None = None) -> None:
        if k < 1:
            raise ValueError("k must be at least 1")
        super().__init__(
            [VarGroup("x", graph.n), VarGroup("y", k * graph.n)],
            {"x": k, "y": k},
            field,
        )
        self.graph = graph
        self.k = k

    def _eval(self, a: Assignment) -> int:
        indptr, indices = self.graph.csr
        return int(_pg_kernel(a["x"], a["y"], indptr, indices, self.k, *self.field.kernel_args))

    def _phi_fused(self, tested, blocks, fixed):
        if tuple(name for name, _ in tested) != ("x",):
            return None
        indptr, indices = self.graph.csr
        return int(
            _pg_phi_kernel(
                blocks["x"], fixed["y"], indptr, indices, self.k, *self.field.kernel_args
            )
        )


def pg_eval(e: PgEvaluator, a: Assignment) -> int:
    return e.eval(a)


def directed_kpath(g: Digraph, k: int, params: TestParams | None = None) -> Verdict:
    """Randomized one-sided test for a simple directed path on ``k`` vertices."""
    params = params or TestParams()
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > g.n:
        return Verdict("NO", None, 0.0, 0)
    if k == 1:
        return Verdict("YES", 0, 0.0, 0)
    pg = PgEvaluator(g, k, params.resolved_field)
    return has_multilinear(pg, "x", k, params)
