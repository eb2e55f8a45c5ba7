"""Exact arithmetic in Z[zeta_p] for a prime p.

Elements are kept in the power basis ``1, zeta, ..., zeta^(p-2)``; the
redundant coordinate ``zeta^(p-1)`` is eliminated with
``1 + zeta + ... + zeta^(p-1) = 0``.  With that choice two elements are
equal exactly when their coefficient tuples are equal.  For p = 2 the
ring is Z itself (zeta = -1) and tuples have length 1.

Most producers build values as *redundant* count vectors of length p
(coefficient of zeta^r for r = 0..p-1, e.g. a histogram of character
exponents); :func:`reduce_redundant` maps such arrays to canonical form
in bulk.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NonRationalNormSq, OrderMismatch


def reduce_redundant(counts: np.ndarray) -> np.ndarray:
    """Canonical power-basis coefficients from redundant counts, last axis p -> p-1."""
    counts = np.asarray(counts)
    return counts[..., :-1] - counts[..., -1:]


@dataclass(frozen=True)
class CycInt:
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != max(self.p - 1, 1):
            raise ValueError(f"Z[zeta_{self.p}] needs {max(self.p - 1, 1)} coordinates")

    # --- constructors -----------------------------------------------
    @classmethod
    def from_redundant(cls, p: int, counts: Sequence[int]) -> "CycInt":
        if len(counts) != p:
            raise ValueError(f"expected {p} redundant coordinates")
        top = int(counts[-1])
        if p == 2:
            # zeta = -1
            return cls(2, (int(counts[0]) - top,))
        return cls(p, tuple(int(c) - top for c in counts[:-1]))

    @classmethod
    def from_int(cls, p: int, n: int) -> "CycInt":
        return cls(p, (int(n),) + (0,) * (max(p - 1, 1) - 1))

    @classmethod
    def zero(cls, p: int) -> "CycInt":
        return cls.from_int(p, 0)

    @classmethod
    def one(cls, p: int) -> "CycInt":
        return cls.from_int(p, 1)

    def redundant(self) -> list[int]:
        """Length-p coordinate vector with a zero coefficient on zeta^(p-1)."""
        if self.p == 2:
            return [self.coeffs[0], 0]
        return list(self.coeffs) + [0]

    # --- ring operations --------------------------------------------
    def _check(self, other: "CycInt") -> None:
        if other.p != self.p:
            raise OrderMismatch(f"Z[zeta_{self.p}] vs Z[zeta_{other.p}]")

    def __add__(self, other: "CycInt | int") -> "CycInt":
        if isinstance(other, int):
            other = CycInt.from_int(self.p, other)
        self._check(other)
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycInt":
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CycInt | int") -> "CycInt":
        if isinstance(other, int):
            other = CycInt.from_int(self.p, other)
        return self + (-other)

    def __mul__(self, other: "CycInt | int") -> "CycInt":
        if isinstance(other, int):
            return CycInt(self.p, tuple(other * a for a in self.coeffs))
        self._check(other)
        p = self.p
        a, b = self.redundant(), other.redundant()
        out = [0] * p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[(i + j) % p] += x * y
        return CycInt.from_redundant(p, out)

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        p = self.p
        red = self.redundant()
        out = [0] * p
        for i, x in enumerate(red):
            out[(-i) % p] += x
        return CycInt.from_redundant(p, out)

    # --- queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_integer(self) -> int:
        if not self.is_rational():
            raise NonRationalNormSq(f"{self} is not a rational integer")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        zeta = cmath.exp(2j * cmath.pi / self.p)
        return sum(c * zeta**i for i, c in enumerate(self.coeffs))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"CycInt<{self.p}>({' + '.join(terms) or '0'})"


def root_power(p: int, e: int) -> CycInt:
    """zeta_p^e in canonical form."""
    counts = [0] * p
    counts[e % p] = 1
    return CycInt.from_redundant(p, counts)


def cyc_arith(a: CycInt, b: CycInt | None, op: str) -> CycInt:
    """Dispatch ``op`` in {add, sub, mul, conj}; ``conj`` ignores ``b``."""
    if op == "conj":
        return a.conj()
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def cyc_norm_sq(a: CycInt) -> Fraction:
    """|a|^2 as an exact rational; ``a * conj(a)`` must be a rational integer."""
    prod = a * a.conj()
    if not prod.is_rational():
        raise NonRationalNormSq(f"|{a}|^2 = {prod} is not rational")
    return Fraction(prod.coeffs[0])


def hermitian_sum(values: Sequence[CycInt] | np.ndarray, p: int) -> CycInt:
    """``sum_i a_i * conj(a_i)`` for canonical rows (list of CycInt or an (N, p-1) array).

    Works on the redundant autocorrelation so large batches stay in numpy.
    """
    if isinstance(values, np.ndarray):
        arr = values if values.dtype == object else values.astype(np.int64)
        arr = arr.reshape(-1, max(p - 1, 1))
    else:
        arr = np.array([v.coeffs for v in values], dtype=object).reshape(-1, max(p - 1, 1))
    if p == 2:
        return CycInt(2, (int((arr[:, 0] * arr[:, 0]).sum()),))
    red = np.concatenate([arr, np.zeros((arr.shape[0], 1), dtype=arr.dtype)], axis=1)
    # coefficient of zeta^d in a * conj(a) is the cyclic autocorrelation at lag d
    out = [int((red * np.roll(red, -d, axis=1)).sum()) for d in range(p)]
    return CycInt.from_redundant(p, out)
