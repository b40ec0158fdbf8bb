"""Black-box polynomial evaluators over named variable groups."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .field import FieldConfig, get_field

__all__ = [
    "Assignment",
    "BlackBox",
    "CountingBox",
    "PolyBox",
    "ShapeError",
    "VarGroup",
    "ZeroBox",
    "evaluate",
    "total_degree_bound",
]

# group name -> dense uint64 vector of field elements
Assignment = dict[str, np.ndarray]


class ShapeError(ValueError):
    """An assignment or block set does not match the declared groups."""


@dataclass(frozen=True)
class VarGroup:
    name: str
    arity: int

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ValueError(f"group {self.name!r} has negative arity")


class BlackBox:
    """A polynomial that can only be queried at points.

    Subclasses implement ``_eval`` on an already validated assignment and
    declare a per-group degree bound: the degree of the hidden polynomial in
    that group with every other group treated as coefficients. Instances are
    immutable after construction.
    """

    def __init__(
        self,
        groups: Sequence[VarGroup],
        degree_bound: Mapping[str, int],
        field: FieldConfig | None = None,
    ) -> None:
        names = [g.name for g in groups]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate group names in {names}")
        if set(degree_bound) != set(names):
            raise ValueError("degree bounds must cover exactly the declared groups")
        self.groups: tuple[VarGroup, ...] = tuple(groups)
        self.degree_bound: dict[str, int] = dict(degree_bound)
        self.field = field or get_field()

    def group(self, name: str) -> VarGroup:
        for g in self.groups:
            if g.name == name:
                return g
        raise KeyError(f"unknown group {name!r}")

    def check(self, a: Mapping[str, Iterable[int]]) -> Assignment:
        """Validate the shape of ``a`` and return it as uint64 vectors."""
        if set(a) != {g.name for g in self.groups}:
            raise ShapeError(
                f"assignment groups {sorted(a)} do not match "
                f"{sorted(g.name for g in self.groups)}"
            )
        out = {}
        for g in self.groups:
            vec = np.asarray(a[g.name], dtype=np.uint64).reshape(-1)
            if vec.size != g.arity:
                raise ShapeError(f"group {g.name!r} needs {g.arity} values, got {vec.size}")
            out[g.name] = vec
        return out

    def eval(self, a: Mapping[str, Iterable[int]]) -> int:
        return self._eval(self.check(a))

    def _eval(self, a: Assignment) -> int:
        raise NotImplementedError

    # Evaluators with a compiled subset-sum loop override this and return
    # the summed value; None means "use the generic enumeration".
    def _phi_fused(self, tested, blocks, fixed) -> int | None:
        return None


def evaluate(bb: BlackBox, a: Mapping[str, Iterable[int]]) -> int:
    """One query: the hidden polynomial's value at ``a``."""
    return bb.eval(a)


def total_degree_bound(bb: BlackBox, tested_groups: Iterable[str]) -> int:
    """Degree bound of the subset-sum transform of ``bb``.

    Substituting block sums into the tested groups keeps their degree, and
    untested groups keep theirs, so the bound is the sum over all groups.
    """
    for name in tested_groups:
        if name not in bb.degree_bound:
            raise KeyError(f"unknown group {name!r}")
    return sum(bb.degree_bound.values())


class ZeroBox(BlackBox):
    def _eval(self, a: Assignment) -> int:
        return 0


class PolyBox(BlackBox):
    """Black box backed by an explicit term map.

    ``terms`` maps an exponent tuple, flattened across the groups in
    declaration order, to a nonzero coefficient.
    """

    def __init__(
        self,
        groups: Sequence[VarGroup],
        terms: Mapping[tuple[int, ...], int],
        field: FieldConfig | None = None,
        degree_bound: Mapping[str, int] | None = None,
    ) -> None:
        nvars = sum(g.arity for g in groups)
        for exps in terms:
            if len(exps) != nvars:
                raise ShapeError(f"exponent vector {exps} does not have {nvars} entries")
        if degree_bound is None:
            degree_bound = {}
            start = 0
            for g in groups:
                stop = start + g.arity
                degree_bound[g.name] = max(
                    (sum(e[start:stop]) for e in terms), default=0
                )
                start = stop
        super().__init__(groups, degree_bound, field)
        self.terms = {tuple(e): c for e, c in terms.items() if c}

    def _eval(self, a: Assignment) -> int:
        f = self.field
        point = [int(v) for g in self.groups for v in a[g.name]]
        total = 0
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(point, exps):
                if e:
                    term = f.mul(term, f.power(v, e))
            total ^= term
        return total


class CountingBox(BlackBox):
    """Pass-through wrapper that counts queries."""

    def __init__(self, inner: BlackBox) -> None:
        super().__init__(inner.groups, inner.degree_bound, inner.field)
        self.inner = inner
        self.calls = 0

    def _eval(self, a: Assignment) -> int:
        self.calls += 1
        return self.inner._eval(a)
