"""Brute-force ground truth for small instances.

Nothing here reuses the search, recurrence or field code of the main
modules: adjacency is rebuilt from edge lists, polynomials are expanded
term by term, and field products use carryless multiplication followed by
reduction modulo the full polynomial. Agreement is therefore evidence.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from itertools import product

from .directed import Digraph
from .evaluator import VarGroup
from .field import SHIPPED_REDUCTIONS
from .undirected import LegitParams, Partition, Ugraph

__all__ = [
    "PathWitness",
    "SizeGuardError",
    "SparsePoly",
    "count_partitions",
    "dfs_kpath_directed",
    "dfs_kpath_undirected",
    "expand_legit_paths",
    "expand_walks",
    "gf_mul_longdiv",
    "poly_has_multilinear",
]

SIZE_GUARD = 10**6


class SizeGuardError(ValueError):
    pass


def _clmul(a: int, b: int) -> int:
    prod = 0
    while b:
        low = b & -b
        prod ^= a * low  # a shifted to the position of b's lowest set bit
        b ^= low
    return prod


def _nibble_table(v: int) -> list[int]:
    # carryless v * t for every 4-bit t
    table = [0] * 16
    for t in range(1, 16):
        table[t] = (table[t >> 1] << 1) ^ (v if t & 1 else 0)
    return table


def _reduce(prod: int, width: int, reduction: int) -> int:
    mask = (1 << width) - 1
    while prod >> width:
        prod = (prod & mask) ^ _clmul(prod >> width, reduction)
    return prod


def gf_mul_longdiv(a: int, b: int, width: int, reduction: int | None = None) -> int:
    """Carryless product, then the remainder modulo x^width + reduction.

    The remainder is taken by repeatedly replacing the quotient part q*x^width
    with q*reduction, which is long division done a whole word at a time.
    """
    if reduction is None:
        reduction = SHIPPED_REDUCTIONS[width]
    return _reduce(_clmul(a, b), width, reduction)


@dataclass
class SparsePoly:
    """Explicit polynomial: flattened exponent tuple -> coefficient.

    Exponent tuples run over the groups in order. Coefficients are field
    elements (ints); no zero coefficients are stored.
    """

    groups: tuple[VarGroup, ...]
    terms: dict[tuple[int, ...], int] = field(default_factory=dict)

    @property
    def nvars(self) -> int:
        return sum(g.arity for g in self.groups)

    def add_term(self, exps: Sequence[int], coeff: int = 1) -> None:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError(f"exponent vector of length {len(exps)}, expected {self.nvars}")
        c = self.terms.pop(exps, 0) ^ coeff
        if c:
            self.terms[exps] = c

    def group_slice(self, name: str) -> slice:
        start = 0
        for g in self.groups:
            if g.name == name:
                return slice(start, start + g.arity)
            start += g.arity
        raise KeyError(name)

    def evaluate(self, point: Mapping[str, Sequence[int]], width: int) -> int:
        reduction = SHIPPED_REDUCTIONS[width]
        tables = [_nibble_table(int(v)) for g in self.groups for v in point[g.name]]
        total = 0
        for exps, coeff in self.terms.items():
            term = coeff
            for table, e in zip(tables, exps):
                for _ in range(e):
                    prod, shift = 0, 0
                    while term:
                        prod ^= table[term & 15] << shift
                        term >>= 4
                        shift += 4
                    term = _reduce(prod, width, reduction)
            total ^= term
        return total

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class PathWitness:
    vertices: tuple[int, ...]

    @property
    def simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)


def _search(adj: dict[int, set[int]], n: int, count: int) -> PathWitness | None:
    # Simple path on `count` distinct vertices, plain backtracking.
    path: list[int] = []
    seen: set[int] = set()

    def extend(v: int) -> bool:
        path.append(v)
        seen.add(v)
        if len(path) == count:
            return True
        for w in sorted(adj.get(v, ())):
            if w not in seen and extend(w):
                return True
        path.pop()
        seen.discard(v)
        return False

    for start in range(n):
        if extend(start):
            return PathWitness(tuple(path))
    return None


def dfs_kpath_directed(g: Digraph, k_vertices: int) -> PathWitness | None:
    if k_vertices < 1:
        raise ValueError("k must be at least 1")
    adj: dict[int, set[int]] = {}
    for u, v in g.edges:
        adj.setdefault(u, set()).add(v)
    return _search(adj, g.n, k_vertices)


def dfs_kpath_undirected(g: Ugraph, k_edges: int) -> PathWitness | None:
    if k_edges < 1:
        raise ValueError("k must be at least 1")
    adj: dict[int, set[int]] = {}
    for u, v in g.edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return _search(adj, g.n, k_edges + 1)


def expand_walks(g: Digraph, k: int, *, parity: bool = False) -> SparsePoly:
    """Expand P_G term by term over all k-vertex walks.

    A walk w_1 -> ... -> w_k contributes x_{w_1}..x_{w_k} times
    y_{k,w_1} y_{k-1,w_2} .. y_{1,w_k}: layer 1 is the walk's last vertex,
    the orientation produced by applying B^(2), ..., B^(k) to x * y.
    """
    n = g.n
    if k < 1:
        raise ValueError("k must be at least 1")
    if n**k > SIZE_GUARD:
        raise SizeGuardError(f"n^k = {n**k} exceeds {SIZE_GUARD}")
    arcs = set(g.edges)
    poly = SparsePoly((VarGroup("x", n), VarGroup("y", k * n)))
    counts: Counter[tuple[int, ...]] = Counter()
    for walk in product(range(n), repeat=k):
        if any((walk[t], walk[t + 1]) not in arcs for t in range(k - 1)):
            continue
        exps = [0] * (n + k * n)
        for t, v in enumerate(walk):
            exps[v] += 1
            layer = k - 1 - t
            exps[n + layer * n + v] += 1
        counts[tuple(exps)] += 1
    for exps, c in counts.items():
        if parity:
            if c % 2:
                poly.add_term(exps, 1)
        else:
            for _ in range(c):
                poly.add_term(exps, 1)
    return poly


def _legit_walks(g: Ugraph, partition: Partition, params: LegitParams):
    adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    maxdeg = max((len(a) for a in adj.values()), default=0)
    if (params.k + 1) * maxdeg**params.k > SIZE_GUARD:
        raise SizeGuardError("walk enumeration too large")
    v1 = {v for v in range(g.n) if partition.mask >> v & 1}

    def grow(walk: list[int]):
        if len(walk) == params.k + 1:
            yield tuple(walk)
            return
        for w in adj[walk[-1]]:
            walk.append(w)
            yield from grow(walk)
            walk.pop()

    for walk in grow([partition.v0]):
        r = sum(1 for v in walk if v in v1)
        s = sum(1 for a, b in zip(walk, walk[1:]) if a not in v1 and b not in v1)
        if r != params.r or s != params.s:
            continue
        if any(
            walk[i + 2] == walk[i] and walk[i] not in v1 and walk[i + 1] in v1
            for i in range(len(walk) - 2)
        ):
            continue
        yield walk


def expand_legit_paths(
    g: Ugraph, partition: Partition, params: LegitParams, *, parity: bool = False
) -> SparsePoly:
    """Sum of x_p y_p z_p over the (r, s)-legitimate k-walks from v0.

    Variable order matches the F evaluator: x over edges, y over V1 vertices
    ascending, z over V2-internal edges in edge order.
    """
    v1 = [v for v in range(g.n) if partition.mask >> v & 1]
    e_pos = {frozenset(e): i for i, e in enumerate(g.edges)}
    e2 = [i for i, (u, v) in enumerate(g.edges) if u not in v1 and v not in v1]
    y_pos = {v: i for i, v in enumerate(v1)}
    z_pos = {e: i for i, e in enumerate(e2)}
    m = len(g.edges)
    poly = SparsePoly((VarGroup("x", m), VarGroup("y", len(v1)), VarGroup("z", len(e2))))
    counts: Counter[tuple[int, ...]] = Counter()
    for walk in _legit_walks(g, partition, params):
        exps = [0] * (m + len(v1) + len(e2))
        for v in walk:
            if v in y_pos:
                exps[m + y_pos[v]] += 1
        for a, b in zip(walk, walk[1:]):
            e = e_pos[frozenset((a, b))]
            exps[e] += 1
            if e in z_pos:
                exps[m + len(v1) + z_pos[e]] += 1
        counts[tuple(exps)] += 1
    for exps, c in counts.items():
        if parity:
            if c % 2:
                poly.add_term(exps, 1)
        else:
            for _ in range(c):
                poly.add_term(exps, 1)
    return poly


def poly_has_multilinear(p: SparsePoly, group: str, k: int) -> bool:
    """Some stored term is multilinear of degree exactly k in ``group``."""
    sl = p.group_slice(group)
    return any(
        all(e <= 1 for e in exps[sl]) and sum(exps[sl]) == k for exps in p.terms
    )


def count_partitions(path_k: int, r: int, s: int) -> int:
    """Colourings of the path 0-1-..-k (vertex 0 in V1) hitting (r, s)."""
    if path_k > 20:
        raise SizeGuardError("path_k must be at most 20")
    total = 0
    for bits in range(1 << path_k):
        in_v1 = [True] + [bool(bits >> i & 1) for i in range(path_k)]
        rr = sum(in_v1)
        ss = sum(1 for i in range(path_k) if not in_v1[i] and not in_v1[i + 1])
        if rr == r and ss == s:
            total += 1
    return total
