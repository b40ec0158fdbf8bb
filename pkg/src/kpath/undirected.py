"""Simple k-path detection in undirected graphs (k counts edges).

For a start vertex v0 and a two-colouring V = V1 + V2 with v0 in V1, the
polynomial F_{k,r,s} sums x_p y_p z_p over the (r, s)-legitimate k-walks p
from v0: walks meeting V1 r times (with multiplicity), using s edges inside
V2, and never stepping u -> w -> u with u in V2 and w in V1. Non-simple
legitimate walks either carry a squared y or z variable or cancel in pairs,
so a y,z-multilinear monomial survives exactly when a legitimate simple
path exists. The two-group subset-sum transform detects it; random
colourings make some legitimate (r, s) likely for any fixed simple path.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numba as nb
import numpy as np

from .evaluator import Assignment, BlackBox, VarGroup
from .field import FieldConfig, gf_mul
from .mmtest import TestParams, Verdict, derive_seed, has_multilinear_groups, sz_failure_bound

__all__ = [
    "FEvaluator",
    "LegitParams",
    "Partition",
    "Ugraph",
    "binom",
    "choose_rs",
    "cost_exponent",
    "f_eval",
    "legit_prob",
    "sample_partition",
    "trial_count",
    "undirected_kpath",
]


@dataclass(frozen=True)
class Ugraph:
    """Undirected simple graph on vertices 0..n-1; edges stored as sorted pairs."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u}, {v}) for n={self.n}")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate edges")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Ugraph:
        pairs = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            pairs.add((min(u, v), max(u, v)))
        return cls(n, tuple(sorted(pairs)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def darts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Both orientations of every edge: dart 2e is u->v, 2e+1 is v->u.

        Returns (tail, head, in_ptr, in_darts) where in_darts[in_ptr[v]:in_ptr[v+1]]
        lists the darts ending at v.
        """
        d = 2 * self.m
        tail = np.empty(d, dtype=np.int64)
        head = np.empty(d, dtype=np.int64)
        for e, (u, v) in enumerate(self.edges):
            tail[2 * e], head[2 * e] = u, v
            tail[2 * e + 1], head[2 * e + 1] = v, u
        order = np.argsort(head, kind="stable")
        in_ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(in_ptr, head + 1, 1)
        return tail, head, np.cumsum(in_ptr), order.astype(np.int64)


@dataclass(frozen=True)
class Partition:
    """Two-colouring of the vertices: bit v of ``mask`` set means v is in V1."""

    v0: int
    mask: int

    def __post_init__(self) -> None:
        if not self.mask >> self.v0 & 1:
            raise ValueError("the start vertex must lie in V1")

    def in_v1(self, v: int) -> bool:
        return bool(self.mask >> v & 1)

    def v1(self, n: int) -> list[int]:
        return [v for v in range(n) if self.mask >> v & 1]

    def e2(self, g: Ugraph) -> list[int]:
        """Indices of the edges with both ends in V2."""
        return [i for i, (u, v) in enumerate(g.edges) if not self.in_v1(u) and not self.in_v1(v)]


@dataclass(frozen=True)
class LegitParams:
    k: int
    r: int
    s: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not (0 <= self.r <= self.k + 1 and 0 <= self.s <= self.k):
            raise ValueError(f"(r, s) = ({self.r}, {self.s}) out of range for k={self.k}")


@nb.njit(cache=True)
def _f_kernel(xe, yv, ze, in_v1, tail, head, in_ptr, in_darts, v0, k, r, s, width, red):
    # F[r', s', d] holds F^{v0,u1,u2}_{k', r', s'} for the dart d = u1 -> u2.
    n = yv.size
    nd = tail.size
    cur = np.zeros((r + 1, s + 1, nd), dtype=np.uint64)
    for d in range(nd):
        if tail[d] != v0:
            continue
        u2 = head[d]
        xy = gf_mul(xe[d >> 1], yv[v0], width, red)
        if in_v1[u2]:
            if r >= 2:
                cur[2, 0, d] = gf_mul(xy, yv[u2], width, red)
        elif r >= 1:
            cur[1, 0, d] = xy
    if k > 1:
        coef = np.empty(nd, dtype=np.uint64)
        for d in range(nd):
            u1 = tail[d]
            u2 = head[d]
            e = d >> 1
            if in_v1[u2]:
                coef[d] = gf_mul(xe[e], yv[u2], width, red)
            elif not in_v1[u1]:
                coef[d] = gf_mul(xe[e], ze[e], width, red)
            else:
                coef[d] = xe[e]
        nxt = np.empty((r + 1, s + 1, nd), dtype=np.uint64)
        agg = np.empty((r + 1, s + 1, n), dtype=np.uint64)
        for _ in range(2, k + 1):
            for a in range(r + 1):
                for b in range(s + 1):
                    for v in range(n):
                        acc = np.uint64(0)
                        for p in range(in_ptr[v], in_ptr[v + 1]):
                            acc ^= cur[a, b, in_darts[p]]
                        agg[a, b, v] = acc
            for d in range(nd):
                u1 = tail[d]
                u2 = head[d]
                c = coef[d]
                if in_v1[u2]:
                    for b in range(s + 1):
                        nxt[0, b, d] = 0
                    for a in range(1, r + 1):
                        for b in range(s + 1):
                            nxt[a, b, d] = gf_mul(c, agg[a - 1, b, u1], width, red)
                elif not in_v1[u1]:
                    for a in range(r + 1):
                        nxt[a, 0, d] = 0
                        for b in range(1, s + 1):
                            nxt[a, b, d] = gf_mul(c, agg[a, b - 1, u1], width, red)
                else:
                    # Sum over N(u1) minus the walk back to u2; minus is plus here.
                    rev = d ^ 1
                    for a in range(r + 1):
                        for b in range(s + 1):
                            nxt[a, b, d] = gf_mul(c, agg[a, b, u1] ^ cur[a, b, rev], width, red)
            cur, nxt = nxt, cur
    total = np.uint64(0)
    for d in range(nd):
        total ^= cur[r, s, d]
    return total


@nb.njit(cache=True)
def _f_phi_kernel(
    xe, y_base, yblocks, y_vertex, z_base, zblocks, z_edge,
    in_v1, tail, head, in_ptr, in_darts, v0, k, r, s, width, red,
):
    # Block rows scatter into the per-vertex y and per-edge z vectors through
    # y_vertex / z_edge; an untested group has no rows and stays at its base.
    # Gray order over the combined y-then-z bits.
    yv = y_base.copy()
    ze = z_base.copy()
    ry = yblocks.shape[0]
    nbits = ry + zblocks.shape[0]
    total = _f_kernel(xe, yv, ze, in_v1, tail, head, in_ptr, in_darts, v0, k, r, s, width, red)
    for step in range(1, 1 << nbits):
        j = 0
        t = step
        while t & 1 == 0:
            t >>= 1
            j += 1
        if j < ry:
            for i in range(y_vertex.size):
                yv[y_vertex[i]] ^= yblocks[j, i]
        else:
            for i in range(z_edge.size):
                ze[z_edge[i]] ^= zblocks[j - ry, i]
        total ^= _f_kernel(
            xe, yv, ze, in_v1, tail, head, in_ptr, in_darts, v0, k, r, s, width, red
        )
    return total


class FEvaluator(BlackBox):
    """Black box for F^{v0,V1,V2}_{k,r,s}.

    Groups: ``x`` over all edges (degree k), ``y`` over the V1 vertices in
    increasing order (degree r), ``z`` over the V2-internal edges in edge
    order (degree s).
    """

    def __init__(
        self,
        graph: Ugraph,
        partition: Partition,
        params: LegitParams,
        field: FieldConfig | None = None,
    ) -> None:
        if not 0 <= partition.v0 < graph.n:
            raise ValueError("start vertex out of range")
        self.graph = graph
        self.partition = partition
        self.params = params
        self.y_vertex = np.array(partition.v1(graph.n), dtype=np.int64)
        self.z_edge = np.array(partition.e2(graph), dtype=np.int64)
        self.in_v1 = np.array([partition.in_v1(v) for v in range(graph.n)], dtype=np.bool_)
        super().__init__(
            [
                VarGroup("x", graph.m),
                VarGroup("y", self.y_vertex.size),
                VarGroup("z", self.z_edge.size),
            ],
            {"x": params.k, "y": params.r, "z": params.s},
            field,
        )

    def _kernel_args(self):
        tail, head, in_ptr, in_darts = self.graph.darts
        return self.in_v1, tail, head, in_ptr, in_darts

    def _scatter(self, y: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        yv = np.zeros(self.graph.n, dtype=np.uint64)
        yv[self.y_vertex] = y
        ze = np.zeros(self.graph.m, dtype=np.uint64)
        ze[self.z_edge] = z
        return yv, ze

    def _eval(self, a: Assignment) -> int:
        yv, ze = self._scatter(a["y"], a["z"])
        p = self.params
        return int(
            _f_kernel(
                a["x"], yv, ze, *self._kernel_args(),
                self.partition.v0, p.k, p.r, p.s, *self.field.kernel_args,
            )
        )

    def _phi_fused(self, tested, blocks, fixed):
        if "x" in blocks:
            return None
        empty = np.zeros(0, dtype=np.uint64)
        y_base, z_base = self._scatter(
            fixed.get("y", np.zeros(self.y_vertex.size, dtype=np.uint64)),
            fixed.get("z", np.zeros(self.z_edge.size, dtype=np.uint64)),
        )
        yblocks = blocks.get("y", empty.reshape(0, self.y_vertex.size))
        zblocks = blocks.get("z", empty.reshape(0, self.z_edge.size))
        p = self.params
        return int(
            _f_phi_kernel(
                fixed["x"], y_base, yblocks, self.y_vertex, z_base, zblocks, self.z_edge,
                *self._kernel_args(), self.partition.v0, p.k, p.r, p.s,
                *self.field.kernel_args,
            )
        )


def f_eval(e: FEvaluator, a: Assignment) -> int:
    return e.eval(a)


def sample_partition(g: Ugraph, v0: int, rng: np.random.Generator) -> Partition:
    """Uniform two-colouring with v0 forced into V1: one fair bit per vertex."""
    if not 0 <= v0 < g.n:
        raise ValueError("start vertex out of range")
    bits = rng.integers(0, 2, size=g.n)
    mask = sum(1 << v for v in range(g.n) if bits[v]) | (1 << v0)
    return Partition(v0, mask)


def binom(n: int, j: int) -> int:
    """Binomial coefficient, zero for j < 0 or j > n >= 0 and for negative n
    with j > 0; C(n, 0) = 1 for every n."""
    if j == 0:
        return 1
    if j < 0 or n < 0:
        return 0
    return math.comb(n, j)


def _binom_positive(n: int, j: int) -> bool:
    return j == 0 or (n >= 0 and 0 <= j <= n)


def _legit_count(k: int, r: int, s: int) -> int:
    return binom(r, k - r - s + 1) * binom(k - r, s)


def legit_prob(k: int, r: int, s: int) -> Fraction:
    """Probability that a uniform colouring (v0 in V1) makes a fixed simple
    k-edge path meet V1 r times and V2-internal edges s times."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return Fraction(_legit_count(k, r, s), 1 << k)


def trial_count(k: int, r: int, s: int) -> int:
    """Colourings per start vertex: ceil(2^(k+1) / (C(r, k-r-s+1) C(k-r, s)))."""
    count = _legit_count(k, r, s)
    if count == 0:
        raise ValueError(f"(r, s) = ({r}, {s}) is never legitimate for k={k}")
    return -(-(1 << (k + 1)) // count)


def choose_rs(k: int) -> tuple[int, int]:
    """(floor(k/2), floor(0.208 k)), raising r until the probability is positive."""
    if k < 1:
        raise ValueError("k must be at least 1")
    r, s = k // 2, 208 * k // 1000
    while not (_binom_positive(r, k - r - s + 1) and _binom_positive(k - r, s)):
        r += 1
        if r > k + 1:
            raise ValueError(f"no positive-probability r for k={k}, s={s}")
    return r, s


def _log2_binom(n: int, j: int) -> float:
    return (math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)) / math.log(2)


def cost_exponent(k: int) -> float:
    """log2 of the per-k growth of the running time at the chosen (r, s).

    The time is 2^(r+s+k+1) / (C(r, k-r-s+1) C(k-r, s)) up to polynomial
    factors; this returns its base-2 logarithm divided by k.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    r, s = choose_rs(k)
    return (r + s + k + 1 - _log2_binom(r, k - r - s + 1) - _log2_binom(k - r, s)) / k


def _miss_bound(p: Fraction, T: int, detect_fail: float, amplification: int) -> float:
    per_round = 1.0 - (1.0 - float((1 - p) ** T)) * (1.0 - detect_fail)
    return min(1.0, per_round**amplification)


def undirected_kpath(
    g: Ugraph,
    k: int,
    params: TestParams | None = None,
    amplification: int = 10,
) -> Verdict:
    """Randomized one-sided test for a simple path with ``k`` edges.

    For each round, start vertex v0 and each of T colourings, the two-group
    transform of F_{k,r,s} is sampled ``params.trials`` times; any nonzero
    sample answers YES.
    """
    params = params or TestParams()
    if k < 1:
        raise ValueError("k must be at least 1")
    if amplification < 1:
        raise ValueError("amplification must be at least 1")
    if k + 1 > g.n:
        return Verdict("NO", None, 0.0, 0)
    field = params.resolved_field
    r, s = choose_rs(k)
    T = trial_count(k, r, s)
    legit = LegitParams(k, r, s)
    tested = [(name, m) for name, m in (("y", r), ("z", s)) if m > 0]
    queries = 0
    witness = 0
    for rep in range(amplification):
        for v0 in range(g.n):
            for i in range(T):
                rng = np.random.default_rng(derive_seed(params.seed, rep, v0, i))
                part = sample_partition(g, v0, rng)
                fe = FEvaluator(g, part, legit, field)
                sub = TestParams(params.trials, derive_seed(params.seed, rep, v0, i, 1), field)
                verdict = has_multilinear_groups(fe, tested, sub)
                queries += verdict.queries_used
                if verdict.yes:
                    return Verdict("YES", witness + verdict.witness_trial, 0.0, queries)
                witness += params.trials
    detect_fail = sz_failure_bound(k + r + s, field.width, params.trials)
    return Verdict("NO", None, _miss_bound(legit_prob(k, r, s), T, detect_fail, amplification), queries)
