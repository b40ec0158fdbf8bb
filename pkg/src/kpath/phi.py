"""The subset-sum operator over one or more tested variable groups.

For tested groups g with block vectors b_g[0..m_g-1], the operator sums the
black box over every choice of one subset per group, substituting for each
tested group the XOR of its selected blocks (the empty sum is the zero
vector). Untested groups stay at a fixed point. In characteristic 2 this
kills every monomial that is not multilinear of full degree in the tested
groups and maps the multilinear ones to determinants of the blocks.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .evaluator import Assignment, BlackBox, ShapeError

__all__ = [
    "MAX_MULTIPLICITY",
    "MultiplicityOverflow",
    "PhiBlocks",
    "PhiSpec",
    "gray_flips",
    "phi_eval",
    "phi_eval_naive",
    "phi_random_sample",
]

# Combined subset masks must fit one machine word.
MAX_MULTIPLICITY = 62

# tested group name -> (m, arity) array of block vectors
PhiBlocks = dict[str, np.ndarray]


class MultiplicityOverflow(ValueError):
    pass


@dataclass(frozen=True)
class PhiSpec:
    tested: tuple[tuple[str, int], ...]
    fixed: Mapping[str, np.ndarray] = field(default_factory=dict)

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.tested)

    def bit_map(self) -> list[tuple[str, int]]:
        """Bit position of the combined mask -> (group, block index)."""
        return [(name, j) for name, m in self.tested for j in range(m)]


def gray_flips(nbits: int):
    """Yield the bit flipped at each step of the reflected Gray code.

    Starting from the empty mask, the 2^nbits - 1 flips visit every mask once.
    """
    for i in range(1, 1 << nbits):
        yield (i & -i).bit_length() - 1


def _validate(bb: BlackBox, spec: PhiSpec, blocks: Mapping[str, np.ndarray]):
    names = [name for name, _ in spec.tested]
    if len(set(names)) != len(names):
        raise ShapeError(f"tested groups repeat: {names}")
    if set(names) & set(spec.fixed):
        raise ShapeError("a group cannot be both tested and fixed")
    if set(names) | set(spec.fixed) != {g.name for g in bb.groups}:
        raise ShapeError("tested and fixed groups must cover the black box exactly")
    if any(m < 1 for _, m in spec.tested):
        raise ValueError("multiplicities must be at least 1")
    if spec.total_multiplicity > MAX_MULTIPLICITY:
        raise MultiplicityOverflow(
            f"total multiplicity {spec.total_multiplicity} exceeds {MAX_MULTIPLICITY}"
        )
    if set(blocks) != set(names):
        raise ShapeError(f"blocks given for {sorted(blocks)}, expected {sorted(names)}")
    out_blocks = {}
    for name, m in spec.tested:
        arity = bb.group(name).arity
        arr = np.ascontiguousarray(blocks[name], dtype=np.uint64)
        if arr.shape != (m, arity):
            raise ShapeError(f"blocks for {name!r} have shape {arr.shape}, need {(m, arity)}")
        out_blocks[name] = arr
    fixed = bb.check({**spec.fixed, **{n: np.zeros(bb.group(n).arity) for n in names}})
    for name in names:
        del fixed[name]
    return out_blocks, fixed


def phi_eval(
    bb: BlackBox,
    spec: PhiSpec,
    blocks: Mapping[str, np.ndarray],
    *,
    fused: bool = True,
) -> int:
    """Evaluate the subset-sum transform of ``bb`` at one block choice.

    Issues exactly 2^M queries, M being the total multiplicity. When the
    black box provides a compiled loop (and ``fused`` is set) the same
    queries run inside it.
    """
    blocks, fixed = _validate(bb, spec, blocks)
    if fused:
        value = bb._phi_fused(spec.tested, blocks, fixed)
        if value is not None:
            return value
    current: Assignment = dict(fixed)
    for name, _ in spec.tested:
        current[name] = np.zeros(bb.group(name).arity, dtype=np.uint64)
    bits = spec.bit_map()
    total = bb._eval(current)
    for bit in gray_flips(len(bits)):
        name, j = bits[bit]
        current[name] ^= blocks[name][j]
        total ^= bb._eval(current)
    return total


def phi_eval_naive(bb: BlackBox, spec: PhiSpec, blocks: Mapping[str, np.ndarray]) -> int:
    """Same sum as :func:`phi_eval`, recomputing every subset from scratch."""
    blocks, fixed = _validate(bb, spec, blocks)
    bits = spec.bit_map()
    total = 0
    for mask in range(1 << len(bits)):
        point = dict(fixed)
        for name, _ in spec.tested:
            point[name] = np.zeros(bb.group(name).arity, dtype=np.uint64)
        for bit, (name, j) in enumerate(bits):
            if mask >> bit & 1:
                point[name] = point[name] ^ blocks[name][j]
        total ^= bb._eval(point)
    return total


def phi_random_sample(
    bb: BlackBox,
    tested: Sequence[tuple[str, int]],
    rng: np.random.Generator,
    *,
    fused: bool = True,
) -> int:
    """One Schwartz-Zippel sample: random blocks and fixed point, then evaluate."""
    f = bb.field
    multiplicity = dict(tested)
    blocks = {}
    fixed = {}
    for g in bb.groups:
        if g.name in multiplicity:
            m = multiplicity[g.name]
            blocks[g.name] = f.random_vector(rng, m * g.arity).reshape(m, g.arity)
        else:
            fixed[g.name] = f.random_vector(rng, g.arity)
    spec = PhiSpec(tuple(tested), fixed)
    return phi_eval(bb, spec, blocks, fused=fused)
