"""Arithmetic in the binary extension fields GF(2^w).

Elements are plain Python ints (w-bit words); the field itself is a
:class:`FieldConfig`. Hot loops elsewhere in the package call the compiled
``gf_mul`` kernel directly with ``(width, reduction)`` arguments.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numba as nb
import numpy as np

__all__ = [
    "SHIPPED_REDUCTIONS",
    "FieldConfig",
    "add",
    "determinant",
    "get_field",
    "gf_mul",
    "gf_mul_array",
    "mul",
    "random_elem",
    "set_field",
]

# Low-order terms of the reduction polynomial; the x^w term is implicit.
SHIPPED_REDUCTIONS: dict[int, int] = {
    3: 0b011,  # x^3 + x + 1
    8: 0x1B,  # x^8 + x^4 + x^3 + x + 1
    16: 0x2B,  # x^16 + x^5 + x^3 + x + 1
    32: 0x8D,  # x^32 + x^7 + x^3 + x^2 + 1
    64: 0x1B,  # x^64 + x^4 + x^3 + x + 1
}

_U0 = np.uint64(0)
_U1 = np.uint64(1)
_M1 = np.uint64(0x1111111111111111)
_M2 = np.uint64(0x2222222222222222)
_M4 = np.uint64(0x4444444444444444)
_M8 = np.uint64(0x8888888888888888)
_R1 = np.uint64(0x5555555555555555)
_R2 = np.uint64(0x3333333333333333)
_R4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_R8 = np.uint64(0x00FF00FF00FF00FF)
_R16 = np.uint64(0x0000FFFF0000FFFF)
_S1 = np.uint64(1)
_S2 = np.uint64(2)
_S4 = np.uint64(4)
_S8 = np.uint64(8)
_S16 = np.uint64(16)
_S32 = np.uint64(32)


@nb.njit(inline="always", cache=True)
def _clmul_lo(x, y):
    # Low 64 bits of the carryless product. Integer multiplies on operands
    # with every fourth bit kept leave carries in the holes, which the final
    # masks discard.
    x0 = x & _M1
    x1 = x & _M2
    x2 = x & _M4
    x3 = x & _M8
    y0 = y & _M1
    y1 = y & _M2
    y2 = y & _M4
    y3 = y & _M8
    z0 = (x0 * y0) ^ (x1 * y3) ^ (x2 * y2) ^ (x3 * y1)
    z1 = (x0 * y1) ^ (x1 * y0) ^ (x2 * y3) ^ (x3 * y2)
    z2 = (x0 * y2) ^ (x1 * y1) ^ (x2 * y0) ^ (x3 * y3)
    z3 = (x0 * y3) ^ (x1 * y2) ^ (x2 * y1) ^ (x3 * y0)
    return (z0 & _M1) | (z1 & _M2) | (z2 & _M4) | (z3 & _M8)


@nb.njit(inline="always", cache=True)
def _rev64(x):
    x = ((x >> _S1) & _R1) | ((x & _R1) << _S1)
    x = ((x >> _S2) & _R2) | ((x & _R2) << _S2)
    x = ((x >> _S4) & _R4) | ((x & _R4) << _S4)
    x = ((x >> _S8) & _R8) | ((x & _R8) << _S8)
    x = ((x >> _S16) & _R16) | ((x & _R16) << _S16)
    return (x >> _S32) | (x << _S32)


@nb.njit(inline="always", cache=True)
def _clmul_hi(x, y):
    return _rev64(_clmul_lo(_rev64(x), _rev64(y))) >> _S1


@nb.njit(inline="always", cache=True)
def gf_mul(a, b, width, red):
    """Product of two field words; ``red`` must be a uint64."""
    if width == 64:
        lo = _clmul_lo(a, b)
        hi = _clmul_hi(a, b)
        lo ^= _clmul_lo(hi, red)
        # x^64 * hi folds to hi * red, whose overflow is below 2^deg(red).
        hi = _clmul_hi(hi, red)
        return lo ^ _clmul_lo(hi, red)
    w = np.uint64(width)
    mask = (_U1 << w) - _U1
    p = _clmul_lo(a, b)
    hi = p >> w
    while hi != _U0:
        p = (p & mask) ^ _clmul_lo(hi, red)
        hi = p >> w
    return p


@nb.njit(cache=True)
def _gf_mul_scalar(a, b, width, red):
    return gf_mul(a, b, width, red)


@nb.njit(cache=True)
def gf_mul_array(a, b, width, red):
    """Elementwise product of two equal-length uint64 arrays."""
    out = np.empty(a.size, dtype=np.uint64)
    for i in range(a.size):
        out[i] = gf_mul(a[i], b[i], width, red)
    return out


@nb.njit(cache=True)
def _gf_pow(a, e, width, red):
    result = _U1
    base = a
    while e != _U0:
        if e & _U1:
            result = gf_mul(result, base, width, red)
        base = gf_mul(base, base, width, red)
        e >>= _U1
    return result


def _mul_shift_xor(a: int, b: int, width: int, red: int) -> int:
    # Portable path: schoolbook shift-and-XOR with interleaved reduction.
    top = 1 << (width - 1)
    mask = (1 << width) - 1
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        carry = a & top
        a = (a << 1) & mask
        if carry:
            a ^= red
    return r


@dataclass(frozen=True)
class FieldConfig:
    """A binary field GF(2^width) fixed by its reduction polynomial.

    Only the shipped reduction polynomials are accepted, since those are
    the ones known to be irreducible.
    """

    width: int = 64
    reduction: int = -1

    def __post_init__(self) -> None:
        if self.width not in SHIPPED_REDUCTIONS:
            raise ValueError(
                f"unsupported field width {self.width}; "
                f"choose one of {sorted(SHIPPED_REDUCTIONS)}"
            )
        shipped = SHIPPED_REDUCTIONS[self.width]
        if self.reduction == -1:
            object.__setattr__(self, "reduction", shipped)
        elif self.reduction != shipped:
            raise ValueError(
                f"reduction polynomial {self.reduction:#x} is not on the shipped "
                f"list for width {self.width}"
            )

    @property
    def order(self) -> int:
        return 1 << self.width

    @property
    def mask(self) -> int:
        return (1 << self.width) - 1

    @property
    def kernel_args(self) -> tuple[int, np.uint64]:
        """``(width, reduction)`` in the form the compiled kernels expect."""
        return self.width, np.uint64(self.reduction)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        return int(
            _gf_mul_scalar(np.uint64(a), np.uint64(b), self.width, np.uint64(self.reduction))
        )

    def mul_portable(self, a: int, b: int) -> int:
        return _mul_shift_xor(a, b, self.width, self.reduction)

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.ascontiguousarray(a, dtype=np.uint64)
        b = np.ascontiguousarray(b, dtype=np.uint64)
        if a.shape != b.shape:
            raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
        return gf_mul_array(a.ravel(), b.ravel(), *self.kernel_args).reshape(a.shape)

    def mul_array_portable(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorized shift-and-XOR multiply, independent of the compiled kernel."""
        a = np.array(a, dtype=np.uint64)
        b = np.array(b, dtype=np.uint64)
        one = np.uint64(1)
        top_shift = np.uint64(self.width - 1)
        mask = np.uint64(self.mask)
        red = np.uint64(self.reduction)
        r = np.zeros_like(a)
        for _ in range(self.width):
            r ^= np.where(b & one, a, np.uint64(0))
            b = b >> one
            carry = (a >> top_shift) & one
            a = (a << one) & mask
            a ^= np.where(carry, red, np.uint64(0))
        return r

    def power(self, a: int, e: int) -> int:
        if not 0 <= e < 1 << 64:
            raise ValueError("exponent must fit in 64 bits")
        return int(_gf_pow(np.uint64(a), np.uint64(e), *self.kernel_args))

    def _inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.power(a, self.order - 2)

    def random_elem(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.order, dtype=np.uint64))

    def random_vector(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.integers(0, self.order, size=n, dtype=np.uint64)


_ambient = FieldConfig()


def get_field() -> FieldConfig:
    """The field configured for this run."""
    return _ambient


def set_field(config: FieldConfig | int) -> FieldConfig:
    """Set the run's field (a config or a shipped width); returns the previous one."""
    global _ambient
    previous = _ambient
    _ambient = config if isinstance(config, FieldConfig) else FieldConfig(config)
    return previous


def add(a: int, b: int) -> int:
    return a ^ b


def mul(a: int, b: int, field: FieldConfig | None = None) -> int:
    return (field or _ambient).mul(a, b)


def random_elem(rng: np.random.Generator, field: FieldConfig | None = None) -> int:
    return (field or _ambient).random_elem(rng)


def determinant(matrix: Sequence[Sequence[int]], field: FieldConfig | None = None) -> int:
    """Determinant of a square matrix over the field, by Gaussian elimination.

    Row swaps do not change the sign in characteristic 2.
    """
    f = field or _ambient
    rows = [[int(v) for v in row] for row in matrix]
    k = len(rows)
    if any(len(row) != k for row in rows):
        raise ValueError("determinant needs a square matrix")
    det = 1
    for col in range(k):
        pivot = next((r for r in range(col, k) if rows[r][col]), None)
        if pivot is None:
            return 0
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        det = f.mul(det, p)
        p_inv = f._inverse(p)
        for r in range(col + 1, k):
            if rows[r][col]:
                factor = f.mul(rows[r][col], p_inv)
                rows[r] = [
                    v ^ f.mul(factor, pv) if c >= col else v
                    for c, (v, pv) in enumerate(zip(rows[r], rows[col]))
                ]
    return det
