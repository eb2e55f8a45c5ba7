"""Arithmetic in GF(p^m), the absolute trace, and polynomial spaces F^k[x].

Field elements are stored as integer *codes*: the coordinate vector
``(c_0, ..., c_{m-1})`` over the prime field (polynomial basis
``1, t, ..., t^{m-1}`` modulo the defining polynomial) is packed as
``c_0 + c_1 p + ... + c_{m-1} p^{m-1}``.  The canonical order of
elements is therefore the base-p odometer order, starting at zero.

A polynomial ``f = f_0 + f_1 x + ... + f_{k-1} x^{k-1}`` is indexed by
``f_0 + f_1 Q + ... + f_{k-1} Q^{k-1}`` and a plane point ``(x, y)`` by
``x + Q y``; both are again odometer orders with the first coordinate
running fastest.

Lookup tables (add, mul, trace, ...) are built once per field and shared
by all vectorised routines; everything here is immutable after
construction.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DegreeZero,
    InverseOfZero,
    NotPrime,
    SizeCapExceeded,
    SpecMismatch,
)

DEFAULT_SIZE_CAP = 1 << 24
SIZE_CAP_ENV = "INCIDENCE_LAB_SIZE_CAP"


def size_cap() -> int:
    """Enumeration cap, overridable through ``INCIDENCE_LAB_SIZE_CAP``."""
    raw = os.environ.get(SIZE_CAP_ENV)
    if raw is None:
        return DEFAULT_SIZE_CAP
    return int(raw)


def check_size(n: int, what: str, cap: int | None = None) -> None:
    """Raise SizeCapExceeded when ``n`` exceeds ``cap``; the global cap always applies too."""
    limit = size_cap() if cap is None else min(cap, size_cap())
    if n > limit:
        raise SizeCapExceeded(f"{what} has size {n}, above the cap {limit}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ----------------------------------------------------------------------
# polynomials over GF(p) as coefficient lists, constant term first
# ----------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead % p
        for i, c in enumerate(b):
            a[i + shift] = (a[i + shift] - factor * c) % p
        _trim(a)
    return a


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    coeffs = _trim(list(coeffs))
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _polymod(coeffs, list(low) + [1], p):
                return False
    return True


def find_modulus(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m.

    Candidates are compared by their coefficient vectors read from the
    constant term up; the returned tuple includes the leading 1.
    """
    for low in itertools.product(range(p), repeat=m):
        # product() varies the last position fastest, so low[0] (the
        # constant term) is the most significant key
        cand = low + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {m} over GF({p})")


# ----------------------------------------------------------------------
# fields
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(p^m) with an explicit monic irreducible ``modulus`` (constant term first)."""

    p: int
    m: int
    modulus: tuple[int, ...]
    Q: int = field(init=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.m < 1:
            raise DegreeZero("extension degree must be at least 1")
        if len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        object.__setattr__(self, "Q", self.p**self.m)

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, m={self.m}, modulus={self.modulus})"

    # --- code <-> coordinates ---------------------------------------
    def digits(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, digits: Sequence[int]) -> int:
        if len(digits) != self.m:
            raise ValueError(f"expected {self.m} coordinates, got {len(digits)}")
        code = 0
        for c in reversed(digits):
            code = code * self.p + (c % self.p)
        return code

    def _mul_slow(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = _polymod(prod, self.modulus, self.p)
        return self.from_digits(rem + [0] * (self.m - len(rem)))

    # --- lookup tables ----------------------------------------------
    @cached_property
    def _log_exp(self) -> tuple[np.ndarray, np.ndarray]:
        Q = self.Q
        order = Q - 1
        for g in range(1, Q):
            powers = [1]
            x = g
            while x != 1:
                powers.append(x)
                x = self._mul_slow(x, g)
            if len(powers) == order:
                break
        else:  # pragma: no cover - a finite field always has a generator
            raise AssertionError("no primitive element found")
        exp = np.array(powers + powers, dtype=np.int64)
        log = np.full(Q, -1, dtype=np.int64)
        log[exp[:order]] = np.arange(order)
        return log, exp

    @cached_property
    def add_table(self) -> np.ndarray:
        codes = np.arange(self.Q, dtype=np.int64)
        digs = np.stack([(codes // self.p**j) % self.p for j in range(self.m)], axis=-1)
        summed = (digs[:, None, :] + digs[None, :, :]) % self.p
        weights = self.p ** np.arange(self.m, dtype=np.int64)
        return summed @ weights

    @cached_property
    def mul_table(self) -> np.ndarray:
        log, exp = self._log_exp
        la = log[:, None]
        lb = log[None, :]
        out = exp[np.where((la >= 0) & (lb >= 0), la + lb, 0)]
        out[0, :] = 0
        out[:, 0] = 0
        return out

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.argmin(self.add_table, axis=1).astype(np.int64)

    @cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @cached_property
    def inv_table(self) -> np.ndarray:
        log, exp = self._log_exp
        inv = np.zeros(self.Q, dtype=np.int64)
        nz = np.arange(1, self.Q)
        inv[nz] = exp[(self.Q - 1 - log[nz]) % (self.Q - 1)]
        return inv

    @cached_property
    def trace_table(self) -> np.ndarray:
        """``tr(x) = x + x^p + ... + x^(p^(m-1))`` as a prime-field residue."""
        log, exp = self._log_exp
        codes = np.arange(self.Q)
        acc = np.zeros(self.Q, dtype=np.int64)
        for j in range(self.m):
            frob = np.zeros(self.Q, dtype=np.int64)
            nz = codes[1:]
            frob[nz] = exp[(log[nz] * self.p**j) % (self.Q - 1)]
            acc = self.add_table[acc, frob]
        if acc.max() >= self.p:
            raise AssertionError("trace left the prime subfield")
        return acc

    # --- scalar helpers ---------------------------------------------
    def element(self, value: int | Sequence[int]) -> "FieldElement":
        """Build an element from its code or its coordinate vector."""
        if isinstance(value, (int, np.integer)):
            code = int(value)
            if not 0 <= code < self.Q:
                raise ValueError(f"code {code} outside [0, {self.Q})")
            return FieldElement(self, code)
        return FieldElement(self, self.from_digits(value))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise InverseOfZero("zero has no multiplicative inverse")
        return int(self.inv_table[a])

    def power(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def tr(self, a: int) -> int:
        return int(self.trace_table[a])


def field_create(p: int, m: int) -> FieldSpec:
    """GF(p^m) with the lexicographically smallest monic irreducible modulus.

    The field builds Q x Q lookup tables, so Q^2 must fit the size cap.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise DegreeZero("extension degree must be at least 1")
    check_size(p ** (2 * m), f"GF({p}^{m}) lookup table")
    return FieldSpec(p, m, find_modulus(p, m))


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.digits(self.code)

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise SpecMismatch(f"{self.spec} vs {other.spec}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.add(self.code, other.code))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.sub(self.code, other.code))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.mul(self.code, other.code))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.neg(self.code))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.code))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(self.spec, self.spec.power(self.code, e))

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.coeffs})"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch ``op`` in {add, sub, mul, inv, neg}; unary ops ignore ``b``."""
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def trace(x: FieldElement) -> int:
    return x.spec.tr(x.code)


# ----------------------------------------------------------------------
# polynomials over F
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FPoly:
    """Element of F^k[x]: exactly k coefficient codes, index i holding x^i."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    @classmethod
    def from_index(cls, spec: FieldSpec, k: int, index: int) -> "FPoly":
        out = []
        for _ in range(k):
            index, r = divmod(index, spec.Q)
            out.append(r)
        return cls(spec, tuple(out))

    @classmethod
    def from_elements(cls, elems: Sequence[FieldElement], k: int | None = None) -> "FPoly":
        spec = elems[0].spec
        codes = [e.code for e in elems]
        if any(e.spec != spec for e in elems):
            raise SpecMismatch("coefficients from different fields")
        if k is not None:
            if len(codes) > k:
                raise ValueError(f"{len(codes)} coefficients do not fit in F^{k}[x]")
            codes += [0] * (k - len(codes))
        return cls(spec, tuple(codes))

    @property
    def k(self) -> int:
        return len(self.coeffs)

    @property
    def index(self) -> int:
        idx = 0
        for c in reversed(self.coeffs):
            idx = idx * self.spec.Q + c
        return idx

    def _check(self, other: "FPoly") -> None:
        if other.spec != self.spec:
            raise SpecMismatch(f"{self.spec} vs {other.spec}")
        if other.k != self.k:
            raise ValueError("polynomials from different spaces F^k[x]")

    def __add__(self, other: "FPoly") -> "FPoly":
        self._check(other)
        return FPoly(self.spec, tuple(self.spec.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FPoly") -> "FPoly":
        self._check(other)
        return FPoly(self.spec, tuple(self.spec.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c: int) -> "FPoly":
        return FPoly(self.spec, tuple(self.spec.mul(c, a) for a in self.coeffs))

    def __call__(self, a: FieldElement) -> FieldElement:
        return poly_eval(self, a)


def poly_eval(f: FPoly, a: FieldElement) -> FieldElement:
    """Horner evaluation of ``f`` at ``a``."""
    if a.spec != f.spec:
        raise SpecMismatch(f"{f.spec} vs {a.spec}")
    spec = f.spec
    acc = 0
    for c in reversed(f.coeffs):
        acc = spec.add(spec.mul(acc, a.code), c)
    return FieldElement(spec, acc)


# ----------------------------------------------------------------------
# enumeration
# ----------------------------------------------------------------------

def field_elements(spec: FieldSpec) -> Iterator[FieldElement]:
    for code in range(spec.Q):
        yield FieldElement(spec, code)


def polynomials(spec: FieldSpec, k: int) -> Iterator[FPoly]:
    if k < 1:
        raise ValueError("k must be at least 1")
    check_size(spec.Q**k, f"F^{k}[x]")
    for idx in range(spec.Q**k):
        yield FPoly.from_index(spec, k, idx)


def points(spec: FieldSpec) -> Iterator[tuple[FieldElement, FieldElement]]:
    check_size(spec.Q**2, "F^2")
    for idx in range(spec.Q**2):
        y, x = divmod(idx, spec.Q)
        yield FieldElement(spec, x), FieldElement(spec, y)


def enumerate_space(spec: FieldSpec, space: str, k: int | None = None) -> Iterator:
    """Canonical stream over ``field_elements``, ``polynomials`` (needs k) or ``points``."""
    if space == "field_elements":
        return field_elements(spec)
    if space == "polynomials":
        if k is None:
            raise ValueError("polynomials need k")
        return polynomials(spec, k)
    if space == "points":
        return points(spec)
    raise ValueError(f"unknown space {space!r}")


# ----------------------------------------------------------------------
# vectorised helpers used by the heavier modules
# ----------------------------------------------------------------------

def vector_digits(index: np.ndarray | int, base: int, length: int) -> np.ndarray:
    """Odometer digits of ``index`` (first digit fastest), shape ``(..., length)``."""
    index = np.asarray(index, dtype=np.int64)
    out = np.empty(index.shape + (length,), dtype=np.int64)
    rest = index.copy()
    for i in range(length):
        out[..., i] = rest % base
        rest //= base
    return out


def vector_index(digits: np.ndarray, base: int) -> np.ndarray:
    digits = np.asarray(digits, dtype=np.int64)
    weights = base ** np.arange(digits.shape[-1], dtype=np.int64)
    return digits @ weights


def poly_coeff_array(spec: FieldSpec, k: int, indices: np.ndarray | None = None) -> np.ndarray:
    """Coefficient codes, shape ``(N, k)``, for the given (or all) polynomial indices."""
    if indices is None:
        check_size(spec.Q**k, f"F^{k}[x]")
        indices = np.arange(spec.Q**k, dtype=np.int64)
    return vector_digits(indices, spec.Q, k)


def eval_polys(spec: FieldSpec, coeffs: np.ndarray, xs: np.ndarray | None = None) -> np.ndarray:
    """Values ``f(x)`` for every row of ``coeffs`` and every x, shape ``(N, len(xs))``."""
    if xs is None:
        xs = np.arange(spec.Q, dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64)
    add, mul = spec.add_table, spec.mul_table
    acc = np.zeros((coeffs.shape[0], xs.shape[0]), dtype=np.int64)
    for i in range(coeffs.shape[1] - 1, -1, -1):
        acc = add[mul[acc, xs[None, :]], coeffs[:, i : i + 1]]
    return acc


def dot_codes(spec: FieldSpec, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Field inner product along the last axis (broadcasting)."""
    prod = spec.mul_table[u, v]
    acc = prod[..., 0]
    for i in range(1, prod.shape[-1]):
        acc = spec.add_table[acc, prod[..., i]]
    return acc


def point_index(spec: FieldSpec, x: int, y: int) -> int:
    return x + spec.Q * y


def point_coords(spec: FieldSpec, index: int) -> tuple[int, int]:
    y, x = divmod(index, spec.Q)
    return x, y
