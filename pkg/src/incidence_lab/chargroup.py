"""Additive characters of F^k, the integer group algebra Z[F^k], and projection masses.

A vector ``v`` in F^k defines the character ``chi_v(x) = zeta_p^tr(<v, x>)``.
Group elements of F^k are written as tuples of field codes; dense tables
are indexed by the odometer index of the tuple (first coordinate fastest),
the same convention :mod:`incidence_lab.gf` uses for polynomials.

The projection masses of indicator vectors onto the middle eigenspaces are
computed from collision counts (``O(size * Q)`` work).  The ``*_naive``
variants sum ``|<1_S, chi>|^2`` character by character in Z[zeta_p] and
serve as the reference path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .cyclotomic import CycInt, hermitian_sum, reduce_redundant
from .errors import BadLength, DimensionMismatch, SpecMismatch
from .gf import FieldSpec, check_size, dot_codes, vector_digits, vector_index
from .sets import PointSet, PolySet


@dataclass(frozen=True)
class Character:
    spec: FieldSpec
    v: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.v)

    def is_trivial(self) -> bool:
        return not any(self.v)

    def exponent(self, x: Sequence[int]) -> int:
        """tr(<v, x>) as a residue mod p."""
        if len(x) != self.k:
            raise DimensionMismatch(f"character on F^{self.k} applied to a vector of length {len(x)}")
        spec = self.spec
        acc = 0
        for a, b in zip(self.v, x):
            acc = spec.add(acc, spec.mul(a, int(b)))
        return spec.tr(acc)

    def __call__(self, x: Sequence[int]) -> CycInt:
        return char_eval(self, x)


def char_eval(chi: Character, x: Sequence[int]) -> CycInt:
    counts = [0] * chi.spec.p
    counts[chi.exponent(x)] = 1
    return CycInt.from_redundant(chi.spec.p, counts)


def moment_curve_vector(spec: FieldSpec, k: int, alpha: int, beta: int) -> tuple[int, ...]:
    """``beta * (1, alpha, ..., alpha^(k-1))``."""
    out = []
    power = 1
    for _ in range(k):
        out.append(spec.mul(beta, power))
        power = spec.mul(power, alpha)
    return tuple(out)


def group_elements(spec: FieldSpec, k: int) -> list[tuple[int, ...]]:
    check_size(spec.Q**k, f"F^{k}")
    return [tuple(int(c) for c in row) for row in vector_digits(np.arange(spec.Q**k), spec.Q, k)]


def exponent_table(spec: FieldSpec, vs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """``tr(<v, x>)`` for every v (rows of ``vs``) and x (rows of ``xs``): shape (len(vs), len(xs))."""
    vs = np.asarray(vs, dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64)
    if vs.shape[-1] != xs.shape[-1]:
        raise DimensionMismatch("character and group element dimensions differ")
    return spec.trace_table[dot_codes(spec, vs[:, None, :], xs[None, :, :])]


# ----------------------------------------------------------------------
# group algebra with integer coefficients
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GAElem:
    """Sparse element of Z[F^k]; absent keys have coefficient 0."""

    spec: FieldSpec
    k: int
    coeffs: Mapping[tuple[int, ...], int]

    def __post_init__(self) -> None:
        clean = {tuple(int(c) for c in g): int(a) for g, a in self.coeffs.items() if a}
        for g in clean:
            if len(g) != self.k:
                raise DimensionMismatch(f"group element {g} is not in F^{self.k}")
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_indicator(cls, spec: FieldSpec, k: int, elements: Iterable[Sequence[int]]) -> "GAElem":
        return cls(spec, k, {tuple(g): 1 for g in elements})

    @classmethod
    def from_function(cls, spec: FieldSpec, k: int, fn: Callable[[tuple[int, ...]], int]) -> "GAElem":
        return cls(spec, k, {g: fn(g) for g in group_elements(spec, k)})

    @classmethod
    def unit(cls, spec: FieldSpec, k: int, g: Sequence[int] | None = None) -> "GAElem":
        g = tuple(g) if g is not None else (0,) * k
        return cls(spec, k, {g: 1})

    def __getitem__(self, g: Sequence[int]) -> int:
        return self.coeffs.get(tuple(g), 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GAElem):
            return NotImplemented
        return (self.spec, self.k, self.coeffs) == (other.spec, other.k, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.spec, self.k, frozenset(self.coeffs.items())))

    def _check(self, other: "GAElem") -> None:
        if other.spec != self.spec:
            raise SpecMismatch(f"{self.spec} vs {other.spec}")
        if other.k != self.k:
            raise DimensionMismatch(f"Z[F^{self.k}] vs Z[F^{other.k}]")

    def __add__(self, other: "GAElem") -> "GAElem":
        self._check(other)
        out = dict(self.coeffs)
        for g, a in other.coeffs.items():
            out[g] = out.get(g, 0) + a
        return GAElem(self.spec, self.k, out)

    def __mul__(self, other: "GAElem") -> "GAElem":
        return mult_operator_apply(self, other)

    def dense(self) -> np.ndarray:
        """Coefficient vector indexed by the odometer index of F^k."""
        out = np.zeros(self.spec.Q**self.k, dtype=np.int64)
        for g, a in self.coeffs.items():
            out[int(vector_index(np.array(g), self.spec.Q))] = a
        return out


def _vec_add(spec: FieldSpec, g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(spec.add(a, b) for a, b in zip(g, h))


def mult_operator_apply(z: GAElem, a: GAElem) -> GAElem:
    """Group-algebra product ``z * a``: ``result(g) = sum_h z(g - h) a(h)``."""
    z._check(a)
    out: dict[tuple[int, ...], int] = {}
    for g, zg in z.coeffs.items():
        for h, ah in a.coeffs.items():
            s = _vec_add(z.spec, g, h)
            out[s] = out.get(s, 0) + zg * ah
    return GAElem(z.spec, z.k, out)


def ga_inner(a: GAElem, chi: Character) -> CycInt:
    """``<a, chi> = sum_x a(x) * conj(chi(x))``."""
    if a.spec != chi.spec:
        raise SpecMismatch(f"{a.spec} vs {chi.spec}")
    if a.k != chi.k:
        raise DimensionMismatch(f"Z[F^{a.k}] paired with a character of F^{chi.k}")
    p = a.spec.p
    counts = [0] * p
    for x, ax in a.coeffs.items():
        counts[(-chi.exponent(x)) % p] += ax
    return CycInt.from_redundant(p, counts)


def character_inner(chi1: Character, chi2: Character) -> CycInt:
    """``<chi1, chi2>`` summed over all of F^k."""
    if chi1.spec != chi2.spec:
        raise SpecMismatch(f"{chi1.spec} vs {chi2.spec}")
    if chi1.k != chi2.k:
        raise DimensionMismatch("characters of different groups")
    spec, p = chi1.spec, chi1.spec.p
    xs = vector_digits(np.arange(spec.Q**chi1.k), spec.Q, chi1.k)
    e = exponent_table(spec, np.array([chi1.v, chi2.v]), xs)
    counts = np.bincount((e[0] - e[1]) % p, minlength=p)
    return CycInt.from_redundant(p, counts.tolist())


# ----------------------------------------------------------------------
# projection masses
# ----------------------------------------------------------------------

def _as_points(spec: FieldSpec, P: PointSet | Iterable[int]) -> PointSet:
    if isinstance(P, PointSet):
        if P.spec != spec:
            raise SpecMismatch(f"{spec} vs {P.spec}")
        return P
    return PointSet.from_indices(spec, P)


def _as_polys(spec: FieldSpec, k: int, L: PolySet | Iterable[int]) -> PolySet:
    if isinstance(L, PolySet):
        if L.spec != spec or L.k != k:
            raise SpecMismatch("polynomial set lives in a different space")
        return L
    return PolySet.from_indices(spec, k, L)


def projection_mass_points(spec: FieldSpec, P: PointSet | Iterable[int]) -> tuple[Fraction, Fraction]:
    """Squared projection norms of 1_P onto the trivial and the Q^(k-1) eigenspaces.

    mass_mid = |P| - (1/Q) sum_x c_x^2, where c_x counts points of P in column x.
    """
    P = _as_points(spec, P)
    Q = spec.Q
    size = len(P)
    cols = np.bincount(P.coords()[:, 0], minlength=Q) if size else np.zeros(Q, dtype=np.int64)
    collisions = int((cols.astype(object) ** 2).sum())
    return Fraction(size * size, Q * Q), size - Fraction(collisions, Q)


def poly_value_counts(spec: FieldSpec, L: PolySet) -> np.ndarray:
    """``c[alpha, y] = #{f in L : f(alpha) = y}``, shape (Q, Q)."""
    from .gf import eval_polys

    Q = spec.Q
    if not len(L):
        return np.zeros((Q, Q), dtype=np.int64)
    vals = eval_polys(spec, L.coeffs())
    flat = np.arange(Q, dtype=np.int64)[None, :] * Q + vals
    return np.bincount(flat.ravel(), minlength=Q * Q).reshape(Q, Q)


def projection_mass_polys(spec: FieldSpec, k: int, L: PolySet | Iterable[int]) -> tuple[Fraction, Fraction]:
    """Squared projection norms of 1_L onto the trivial and the Q^(k-1) eigenspaces.

    mass_mid = Q^(1-k) (sum_{alpha, y} c_{alpha,y}^2 - |L|^2).
    """
    L = _as_polys(spec, k, L)
    Q = spec.Q
    size = len(L)
    collisions = int((poly_value_counts(spec, L).astype(object) ** 2).sum())
    return Fraction(size * size, Q**k), Fraction(collisions - size * size, Q ** (k - 1))


def _mass_from_exponents(p: int, exps: np.ndarray) -> int:
    """``sum_chi |sum_x zeta^e(chi, x)|^2`` for an exponent table (rows = characters)."""
    if exps.size == 0:
        return 0
    rows = exps.shape[0]
    flat = (np.arange(rows, dtype=np.int64)[:, None] * p + exps).ravel()
    counts = np.bincount(flat, minlength=rows * p).reshape(rows, p)
    return hermitian_sum(reduce_redundant(counts), p).as_integer()


def projection_mass_points_naive(spec: FieldSpec, P: PointSet | Iterable[int]) -> tuple[Fraction, Fraction]:
    """Reference path: direct character sums over all chi_(u1,u2) with u2 != 0."""
    P = _as_points(spec, P)
    Q, p = spec.Q, spec.p
    pts = P.coords()
    u = vector_digits(np.arange(Q * Q), Q, 2)
    u = u[u[:, 1] != 0]
    mid = _mass_from_exponents(p, exponent_table(spec, u, pts)) if len(P) else 0
    triv = _mass_from_exponents(p, exponent_table(spec, np.zeros((1, 2), dtype=np.int64), pts)) if len(P) else 0
    return Fraction(triv, Q * Q), Fraction(mid, Q * Q)


def moment_curve_vectors(spec: FieldSpec, k: int) -> np.ndarray:
    """All ``beta (1, alpha, ..., alpha^(k-1))`` with beta != 0, shape (Q(Q-1), k)."""
    Q = spec.Q
    alpha = np.repeat(np.arange(Q, dtype=np.int64), Q - 1)
    beta = np.tile(np.arange(1, Q, dtype=np.int64), Q)
    out = np.empty((alpha.size, k), dtype=np.int64)
    power = np.ones_like(alpha)
    for i in range(k):
        out[:, i] = spec.mul_table[beta, power]
        power = spec.mul_table[power, alpha]
    return out


def projection_mass_polys_naive(spec: FieldSpec, k: int, L: PolySet | Iterable[int]) -> tuple[Fraction, Fraction]:
    """Reference path: direct character sums over all moment-curve characters."""
    L = _as_polys(spec, k, L)
    Q, p = spec.Q, spec.p
    if not len(L):
        return Fraction(0), Fraction(0)
    fs = L.coeffs()
    mid = _mass_from_exponents(p, exponent_table(spec, moment_curve_vectors(spec, k), fs))
    triv = _mass_from_exponents(p, exponent_table(spec, np.zeros((1, k), dtype=np.int64), fs))
    return Fraction(triv, Q**k), Fraction(mid, Q**k)


# ----------------------------------------------------------------------
# additive Fourier transform over F^d
# ----------------------------------------------------------------------

def trace_form(spec: FieldSpec) -> np.ndarray:
    """Gram matrix ``G[a, b] = tr(t^a t^b)`` of the trace form on the polynomial basis."""
    m = spec.m
    basis = [spec.p**a for a in range(m)]
    return np.array([[spec.tr(spec.mul(x, y)) for y in basis] for x in basis], dtype=np.int64)


def _prime_wht(hist: np.ndarray, p: int, ndigits: int) -> np.ndarray:
    """``W[w] = sum_x hist[x] zeta^(w . x)`` over (Z/p)^ndigits as redundant counts.

    Decimation one prime coordinate at a time: a length-p DFT along each axis,
    where multiplying by zeta^s is a cyclic roll of the trailing power axis.
    """
    shape = (p,) * ndigits
    cur = np.zeros(shape + (p,), dtype=hist.dtype)
    cur[..., 0] = hist.reshape(shape)
    for axis in range(ndigits):
        slices = [np.take(cur, x, axis=axis) for x in range(p)]
        outs = []
        for w in range(p):
            acc = slices[0].copy()
            for x in range(1, p):
                acc += np.roll(slices[x], (w * x) % p, axis=-1)
            outs.append(acc)
        cur = np.stack(outs, axis=axis)
    return cur.reshape(p**ndigits, p)


def additive_dft_array(spec: FieldSpec, hist: Sequence[int] | np.ndarray, d: int) -> np.ndarray:
    """Canonical Z[zeta_p] coefficients of ``sum_x hist[x] zeta^tr(<u, x>)``, shape (Q^d, p-1)."""
    if d not in (1, 2):
        raise BadLength(f"dimension d must be 1 or 2, got {d}")
    hist = np.asarray(hist)
    hist = hist.astype(object) if hist.dtype == object else hist.astype(np.int64)
    Q, p, m = spec.Q, spec.p, spec.m
    if hist.shape != (Q**d,):
        raise BadLength(f"histogram over F^{d} needs {Q**d} entries, got {hist.shape}")
    nd = m * d
    # C-order reshape makes axis 0 the most significant digit; reverse the
    # digit order so axis j <-> prime digit j
    prime_hist = hist.reshape((p,) * nd).transpose(tuple(range(nd - 1, -1, -1))).reshape(-1)
    W = _prime_wht(prime_hist, p, nd)  # index w = sum_j w_j p^(nd-1-j) after the transpose
    u_digits = vector_digits(np.arange(Q**d), p, nd).reshape(Q**d, d, m)
    G = trace_form(spec)
    w_digits = (u_digits @ G.T % p).reshape(Q**d, nd)
    w_index = w_digits @ (p ** np.arange(nd - 1, -1, -1, dtype=np.int64))
    return reduce_redundant(W[w_index])


def additive_dft(spec: FieldSpec, hist: Sequence[int] | np.ndarray, d: int) -> list[CycInt]:
    p = spec.p
    return [CycInt(p, tuple(int(c) for c in row)) for row in additive_dft_array(spec, hist, d)]


def additive_dft_naive(spec: FieldSpec, hist: Sequence[int] | np.ndarray, d: int) -> np.ndarray:
    """Reference path for :func:`additive_dft_array`: the full Q^d x Q^d character table."""
    Q, p = spec.Q, spec.p
    hist = np.asarray(hist, dtype=np.int64)
    if hist.shape != (Q**d,):
        raise BadLength(f"histogram over F^{d} needs {Q**d} entries, got {hist.shape}")
    elems = vector_digits(np.arange(Q**d), Q, d)
    exps = exponent_table(spec, elems, elems)
    counts = np.zeros((Q**d, p), dtype=np.int64)
    for r in range(p):
        counts[:, r] = ((exps == r) * hist[None, :]).sum(axis=1)
    return reduce_redundant(counts)
