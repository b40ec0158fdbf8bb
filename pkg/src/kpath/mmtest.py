"""Randomized multilinear-monomial detection for black-box polynomials.

A nonzero sample of the subset-sum transform proves the transform is not
identically zero, hence that a full-degree multilinear monomial exists; so
YES answers are always right. NO answers are wrong with probability at most
``(D / 2^w) ** trials`` by the Schwartz-Zippel bound.
"""

from __future__ import annotations

import warnings
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .evaluator import BlackBox, total_degree_bound
from .field import FieldConfig, get_field
from .phi import phi_random_sample

__all__ = [
    "TestParams",
    "Verdict",
    "derive_seed",
    "has_multilinear",
    "has_multilinear_groups",
    "splitmix64",
    "sz_failure_bound",
    "trial_rng",
]

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(master: int, *path: int) -> int:
    """Seed for the sub-stream at ``path`` below ``master``; fixed forever."""
    h = splitmix64(master & _MASK64)
    for index in path:
        h = splitmix64(h ^ splitmix64(index & _MASK64))
    return h


def trial_rng(master: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master, *path))


@dataclass(frozen=True)
class TestParams:
    __test__ = False  # not a pytest class

    trials: int = 3
    seed: int = 0
    field: FieldConfig | None = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def resolved_field(self) -> FieldConfig:
        return self.field or get_field()


@dataclass(frozen=True)
class Verdict:
    answer: str
    witness_trial: int | None
    failure_bound: float
    queries_used: int

    def __post_init__(self) -> None:
        if self.answer not in ("YES", "NO"):
            raise ValueError(f"bad answer {self.answer!r}")
        if (self.answer == "YES") != (self.witness_trial is not None):
            raise ValueError("a YES verdict carries a witness trial and a NO verdict does not")
        if not 0.0 <= self.failure_bound <= 1.0:
            raise ValueError("failure bound must lie in [0, 1]")

    @property
    def yes(self) -> bool:
        return self.answer == "YES"


def sz_failure_bound(total_degree: int, width: int, trials: int) -> float:
    """min(1, (total_degree / 2^width) ** trials)."""
    if total_degree < 0 or trials < 1:
        raise ValueError("need total_degree >= 0 and trials >= 1")
    if total_degree >= 1 << width:
        return 1.0
    return (total_degree / 2.0**width) ** trials


def has_multilinear_groups(
    bb: BlackBox,
    tested: Sequence[tuple[str, int]],
    params: TestParams,
    *,
    stream: Sequence[int] = (),
) -> Verdict:
    """Test whether ``bb`` has a monomial multilinear of the given degrees.

    ``tested`` pairs each tested group with its target degree. Trial ``t``
    draws from the sub-stream ``(*stream, t)`` of the master seed.
    """
    for name, m in tested:
        if bb.degree_bound[name] > m:
            raise ValueError(
                f"group {name!r} has declared degree {bb.degree_bound[name]} > {m}"
            )
    width = bb.field.width
    degree = total_degree_bound(bb, [name for name, _ in tested])
    if degree >= 1 << width:
        warnings.warn(
            f"degree bound {degree} is not below the field size 2^{width}; "
            "the failure bound is vacuous",
            RuntimeWarning,
            stacklevel=2,
        )
    per_trial = 1 << sum(m for _, m in tested)
    for t in range(params.trials):
        value = phi_random_sample(bb, tested, trial_rng(params.seed, *stream, t))
        if value:
            return Verdict("YES", t, 0.0, (t + 1) * per_trial)
    return Verdict(
        "NO",
        None,
        sz_failure_bound(degree, width, params.trials),
        params.trials * per_trial,
    )


def has_multilinear(bb: BlackBox, group: str, k: int, params: TestParams) -> Verdict:
    """Does ``bb`` contain a monomial multilinear of degree ``k`` in ``group``?"""
    if k < 1:
        raise ValueError("k must be at least 1")
    return has_multilinear_groups(bb, [(group, k)], params)
