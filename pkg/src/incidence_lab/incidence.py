"""The points-polynomials incidence matrix, its spectrum, and incidence bounds.

T has one row per polynomial of degree < k and one column per plane point;
``T[f, (x, y)] = 1`` iff ``f(x) = y``.  Neither ``T* T`` nor ``T T*`` is ever
materialised as a Gram product: both are convolution operators on the
group algebras of F^2 and F^k, applied to exact character tables.

Bound comparisons are carried out on squares of exact rationals, so no
square root is evaluated in any verdict.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .chargroup import (
    GAElem,
    exponent_table,
    moment_curve_vectors,
    projection_mass_points,
    projection_mass_polys,
)
from .cyclotomic import hermitian_sum, reduce_redundant
from .errors import BadGrid, SizeCapExceeded, SpecMismatch, TheoremViolation
from .gf import (
    FieldSpec,
    FPoly,
    check_size,
    eval_polys,
    poly_coeff_array,
    vector_digits,
    vector_index,
)
from .sets import PointSet, PolySet

SPECTRUM_CAP = 1 << 12
SVD_CAP = 1 << 12
SVD_WORK_CAP = 1 << 27
_FLOAT_EXACT = 1 << 53


# ----------------------------------------------------------------------
# the matrix T
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    """Row-sparse T: ``rows[f]`` lists the Q point indices ``x + Q f(x)``."""

    spec: FieldSpec
    k: int
    rows: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.spec.Q**self.k, self.spec.Q**2

    def row_degrees(self) -> np.ndarray:
        return np.full(self.rows.shape[0], self.rows.shape[1], dtype=np.int64)

    def column_degrees(self) -> np.ndarray:
        return np.bincount(self.rows.ravel(), minlength=self.spec.Q**2)

    def dense(self) -> np.ndarray:
        n_rows, n_cols = self.shape
        check_size(n_rows * n_cols, "dense T")
        out = np.zeros((n_rows, n_cols), dtype=np.int64)
        out[np.arange(n_rows)[:, None], self.rows] = 1
        return out

    def apply_redundant(self, vec: np.ndarray) -> np.ndarray:
        """``T @ vec`` for a point-indexed vector of redundant Z[zeta] counts (Q^2, p)."""
        return vec[self.rows].sum(axis=1)

    def adjoint_redundant(self, vec: np.ndarray) -> np.ndarray:
        """``T* @ vec`` for a polynomial-indexed vector of redundant counts (Q^k, p)."""
        out = np.zeros((self.spec.Q**2,) + vec.shape[1:], dtype=vec.dtype)
        for col in range(self.rows.shape[1]):
            np.add.at(out, self.rows[:, col], vec)
        return out


def build_T(spec: FieldSpec, k: int) -> IncidenceMatrix:
    check_size(spec.Q**k, f"F^{k}[x]")
    values = eval_polys(spec, poly_coeff_array(spec, k))
    rows = np.arange(spec.Q, dtype=np.int64)[None, :] + spec.Q * values
    return IncidenceMatrix(spec, k, rows)


def count_incidences(spec: FieldSpec, k: int, L: PolySet, P: PointSet) -> int:
    """Exact I(L, P): evaluate each f at the distinct x-coordinates of P and look the point up."""
    if L.spec != spec or P.spec != spec or L.k != k:
        raise SpecMismatch("sets live in a different space")
    if not len(L) or not len(P):
        return 0
    Q = spec.Q
    pts = P.coords()
    xs = np.unique(pts[:, 0])
    present = np.zeros((Q, Q), dtype=bool)
    present[pts[:, 0], pts[:, 1]] = True
    vals = eval_polys(spec, L.coeffs(), xs)
    return int(present[xs[None, :], vals].sum())


# ----------------------------------------------------------------------
# Gram entries
# ----------------------------------------------------------------------

def gram_points_entry(pt1: Sequence[int], pt2: Sequence[int], spec: FieldSpec, k: int) -> int:
    """``(T* T)[pt1, pt2]``: Q^(k-1) on the diagonal, Q^(k-2) across columns, else 0."""
    if k < 2:
        raise ValueError("closed form needs k >= 2")
    (x, y), (w, z) = pt1, pt2
    Q = spec.Q
    if x == w and y == z:
        return Q ** (k - 1)
    if x != w:
        return Q ** (k - 2)
    return 0


def gram_polys_entry(f: FPoly, g: FPoly) -> int:
    """``(T T*)[f, g]`` = number of alpha in F with f(alpha) = g(alpha)."""
    if f.spec != g.spec:
        raise SpecMismatch(f"{f.spec} vs {g.spec}")
    if f.k != g.k:
        raise ValueError("polynomials from different spaces F^k[x]")
    vals = eval_polys(f.spec, np.array([f.coeffs, g.coeffs], dtype=np.int64))
    return int((vals[0] == vals[1]).sum())


# ----------------------------------------------------------------------
# the two convolution kernels
# ----------------------------------------------------------------------

def points_kernel(spec: FieldSpec, k: int) -> GAElem:
    """Element of Z[F^2] whose multiplication operator is ``T* T``."""
    Q = spec.Q

    def coeff(v: tuple[int, ...]) -> int:
        if v == (0, 0):
            return Q ** (k - 1)
        if v[0] != 0:
            return Q ** (k - 2)
        return 0

    return GAElem.from_function(spec, 2, coeff)


def zero_counts(spec: FieldSpec, k: int) -> np.ndarray:
    """``z[g]`` = number of roots in F of the polynomial with index g."""
    return (eval_polys(spec, poly_coeff_array(spec, k)) == 0).sum(axis=1)


def polys_kernel(spec: FieldSpec, k: int) -> GAElem:
    """Element of Z[F^k] recording root counts; its multiplication operator is ``T T*``."""
    z = zero_counts(spec, k)
    elems = vector_digits(np.arange(spec.Q**k), spec.Q, k)
    return GAElem(spec, k, {tuple(int(c) for c in g): int(a) for g, a in zip(elems, z)})


def convolution_matrix(spec: FieldSpec, d: int, kernel: np.ndarray) -> np.ndarray:
    """Dense ``M[g, h] = kernel[g - h]`` over F^d, with group elements in odometer order."""
    n = spec.Q**d
    elems = vector_digits(np.arange(n), spec.Q, d)
    diff = spec.sub_table[elems[:, None, :], elems[None, :, :]]
    return np.asarray(kernel)[vector_index(diff, spec.Q)]


# ----------------------------------------------------------------------
# spectrum verification
# ----------------------------------------------------------------------

@dataclass
class SpectrumRow:
    eigenvalue: int
    expected_multiplicity: int
    verified_multiplicity: int
    all_exact: bool


@dataclass
class SpectrumReport:
    side: str
    Q: int
    k: int
    rows: list[SpectrumRow]
    failures: list[dict] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and all(r.all_exact for r in self.rows) and all(self.checks.values())

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(r.verified_multiplicity for r in self.rows)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out


def _onehot(exps: np.ndarray, p: int) -> np.ndarray:
    """(C, N) exponents -> (N, C * p) float matrix of redundant unit vectors."""
    C, N = exps.shape
    out = np.zeros((N, C, p), dtype=np.float64)
    out[np.arange(N)[:, None], np.arange(C)[None, :], exps.T] = 1.0
    return out.reshape(N, C * p)


def _exact_matmul(M: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Integer product through BLAS; exact because every partial sum stays below 2^53."""
    bound = int(np.abs(M).max(initial=0)) * int(np.abs(X).sum(axis=0).max(initial=0))
    if bound >= _FLOAT_EXACT:
        raise SizeCapExceeded("operator entries too large for exact float64 accumulation")
    out = M.astype(np.float64) @ X.astype(np.float64)
    return np.rint(out).astype(np.int64)


def _check_eigenvectors(
    spec: FieldSpec,
    kernel: np.ndarray,
    d: int,
    vs: np.ndarray,
    expected: np.ndarray,
    chunk: int = 256,
) -> tuple[np.ndarray, np.ndarray]:
    """For each character chi_v (rows of ``vs``), test ``kernel * chi = lambda chi`` and
    ``<kernel, chi> = lambda`` exactly.  Returns two boolean arrays.
    """
    p, n = spec.p, spec.Q**d
    M = convolution_matrix(spec, d, kernel).astype(np.int64)
    elems = vector_digits(np.arange(n), spec.Q, d)
    eig_ok = np.zeros(len(vs), dtype=bool)
    inner_ok = np.zeros(len(vs), dtype=bool)
    for start in range(0, len(vs), chunk):
        block = vs[start : start + chunk]
        lam = expected[start : start + chunk]
        exps = exponent_table(spec, block, elems)  # (C, n)
        C = exps.shape[0]
        image = _exact_matmul(M, _onehot(exps, p)).reshape(n, C, p)
        got = reduce_redundant(image)
        want_red = np.zeros((n, C, p), dtype=np.int64)
        want_red[np.arange(n)[:, None], np.arange(C)[None, :], exps.T] = lam[None, :]
        want = reduce_redundant(want_red)
        eig_ok[start : start + C] = (got == want).all(axis=(0, 2))
        # <kernel, chi> = sum_x kernel[x] zeta^(-e(x))
        neg = (-exps) % p
        inner = np.zeros((C, p), dtype=np.int64)
        np.add.at(inner, (np.repeat(np.arange(C), n), neg.ravel()), np.tile(kernel, C))
        inner = reduce_redundant(inner)
        lam_canon = np.zeros((C, max(p - 1, 1)), dtype=np.int64)
        lam_canon[:, 0] = lam
        inner_ok[start : start + C] = (inner == lam_canon).all(axis=1)
    return eig_ok, inner_ok


def _tally(
    classes: np.ndarray,
    eigenvalues: Sequence[int],
    expected_counts: Sequence[int],
    eig_ok: np.ndarray,
    inner_ok: np.ndarray,
    vs: np.ndarray,
) -> tuple[list[SpectrumRow], list[dict]]:
    rows, failures = [], []
    for cls, (lam, count) in enumerate(zip(eigenvalues, expected_counts)):
        mask = classes == cls
        good = mask & eig_ok & inner_ok
        rows.append(
            SpectrumRow(
                eigenvalue=int(lam),
                expected_multiplicity=int(count),
                verified_multiplicity=int(good.sum()),
                all_exact=bool(good.sum() == mask.sum() == count),
            )
        )
    for i in np.flatnonzero(~(eig_ok & inner_ok)):
        failures.append(
            {
                "v": [int(c) for c in vs[i]],
                "expected_eigenvalue": int(eigenvalues[classes[i]]),
                "eigenvector": bool(eig_ok[i]),
                "inner_product": bool(inner_ok[i]),
            }
        )
    return rows, failures


def verify_right_spectrum(spec: FieldSpec, k: int) -> SpectrumReport:
    """Check every character of F^2 against the eigenvalue table of ``T* T``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    Q = spec.Q
    check_size(Q**2, "F^2", SPECTRUM_CAP)
    kernel = points_kernel(spec, k).dense()
    vs = vector_digits(np.arange(Q * Q), Q, 2)
    classes = np.where((vs == 0).all(axis=1), 0, np.where(vs[:, 1] != 0, 1, 2))
    eigenvalues = (Q**k, Q ** (k - 1), 0)
    expected = np.array(eigenvalues, dtype=np.int64)[classes]
    eig_ok, inner_ok = _check_eigenvectors(spec, kernel, 2, vs, expected)
    rows, failures = _tally(classes, eigenvalues, (1, Q * (Q - 1), Q - 1), eig_ok, inner_ok, vs)

    T = build_T(spec, k)
    col_deg = T.column_degrees()
    checks = {
        "kernel_matches_gram_entries": _kernel_matches_points_gram(spec, k, kernel),
        "trace_identity": sum(r.eigenvalue * r.expected_multiplicity for r in rows) == Q**2 * Q ** (k - 1),
        "column_degree_is_Q^(k-1)": bool((col_deg == Q ** (k - 1)).all()),
    }
    notes = [f"every point lies on Q^(k-1) = {Q ** (k - 1)} polynomials (not Q^(k-2) = {Fraction(Q) ** (k - 2)})"]
    return SpectrumReport("right", Q, k, rows, failures, checks, notes)


def _kernel_matches_points_gram(spec: FieldSpec, k: int, kernel: np.ndarray) -> bool:
    Q = spec.Q
    M = convolution_matrix(spec, 2, kernel)
    pts = vector_digits(np.arange(Q * Q), Q, 2)
    return all(
        M[i, j] == gram_points_entry(pts[i], pts[j], spec, k) for i in range(Q * Q) for j in range(Q * Q)
    )


def root_shift_condition_table(spec: FieldSpec, k: int, vs: np.ndarray, sample: int | None = None) -> np.ndarray:
    """``holds[c, alpha]``: chi_v(x f) == chi_v(alpha f) for all f of degree < k-1.

    ``sample`` limits the f's checked to the first ``sample`` in canonical order.
    """
    Q = spec.Q
    fs = poly_coeff_array(spec, k - 1)
    if sample is not None:
        fs = fs[:sample]
    shifted = np.concatenate([np.zeros((len(fs), 1), dtype=np.int64), fs], axis=1)  # x * f
    holds = np.zeros((len(vs), Q), dtype=bool)
    e_shift = exponent_table(spec, vs, shifted)
    for alpha in range(Q):
        scaled = np.concatenate([spec.mul_table[alpha, fs], np.zeros((len(fs), 1), dtype=np.int64)], axis=1)
        holds[:, alpha] = (exponent_table(spec, vs, scaled) == e_shift).all(axis=1)
    return holds


def verify_left_spectrum(spec: FieldSpec, k: int, condition_sample: int | None = None) -> SpectrumReport:
    """Check every character of F^k[x] against the eigenvalue table of ``T T*``.

    Membership of the Q^(k-1) eigenspace is decided by the moment-curve test
    ``v = beta (1, alpha, ..., alpha^(k-1))``; the root-shift condition
    ``chi(x f) = chi(alpha f)`` is checked independently for every character.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    Q = spec.Q
    n = Q**k
    check_size(n, f"F^{k}[x]", SPECTRUM_CAP)
    z = zero_counts(spec, k)
    vs = vector_digits(np.arange(n), Q, k)
    curve = {tuple(int(c) for c in v) for v in moment_curve_vectors(spec, k)}
    on_curve = np.array([tuple(int(c) for c in v) in curve for v in vs])
    trivial = (vs == 0).all(axis=1)
    classes = np.where(trivial, 0, np.where(on_curve, 1, 2))
    eigenvalues = (Q**k, Q ** (k - 1), 0)
    expected = np.array(eigenvalues, dtype=np.int64)[classes]
    eig_ok, inner_ok = _check_eigenvectors(spec, z, k, vs, expected)
    rows, failures = _tally(classes, eigenvalues, (1, Q * (Q - 1), n - Q * (Q - 1) - 1), eig_ok, inner_ok, vs)

    holds = root_shift_condition_table(spec, k, vs, condition_sample).any(axis=1)
    checks = {
        "trace_identity": sum(r.eigenvalue * r.expected_multiplicity for r in rows) == n * Q,
        "root_shift_condition_iff_moment_curve": bool((holds == (on_curve | trivial)).all()),
        "kernel_trivial_eigenvalue": int(z.sum()) == Q**k,
    }
    notes = ["trivial-eigenspace mass of 1_L is |L|^2/Q^k (not |L|/Q^(k/2))"]
    return SpectrumReport("left", Q, k, rows, failures, checks, notes)


# ----------------------------------------------------------------------
# SVD reconstruction
# ----------------------------------------------------------------------

@dataclass
class SVDReport:
    Q: int
    k: int
    checks: dict[str, bool]
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values()) and not self.failures

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out


def _redundant_from_exponents(exps: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((exps.shape[0], p), dtype=np.int64)
    out[np.arange(exps.shape[0]), exps] = 1
    return out


def verify_svd_reconstruction(spec: FieldSpec, k: int) -> SVDReport:
    """Pair right and left singular vectors through T, exactly in Z[zeta_p].

    * ``T 1 = Q 1`` (trivial pair, singular value Q^(k/2) after normalisation);
    * for u2 != 0: ``|T chi_u|^2 = Q^(k-1) |chi_u|^2`` and ``T chi_u`` lies in
      the Q^(k-1) eigenspace of ``T T*``;
    * T kills the right 0-eigenvectors and ``T*`` kills the left ones.
    """
    Q, p = spec.Q, spec.p
    n = Q**k
    check_size(n, f"F^{k}[x]", SVD_CAP)
    check_size(n * Q * max(n, Q * Q), "SVD reconstruction work", SVD_WORK_CAP)
    T = build_T(spec, k)
    pts = vector_digits(np.arange(Q * Q), Q, 2)
    right = exponent_table(spec, pts, pts)
    failures: list[dict] = []
    checks = {"trivial_pair": True, "mid_norm": True, "mid_in_left_eigenspace": True, "right_kernel": True}
    for ui, u in enumerate(pts):
        w = reduce_redundant(T.apply_redundant(_redundant_from_exponents(right[ui], p)))
        tag = [int(u[0]), int(u[1])]
        if u[0] == 0 and u[1] == 0:
            want = np.zeros_like(w)
            want[:, 0] = Q
            if not (w == want).all():
                checks["trivial_pair"] = False
                failures.append({"right": tag, "check": "trivial_pair"})
        elif u[1] == 0:
            if w.any():
                checks["right_kernel"] = False
                failures.append({"right": tag, "check": "right_kernel"})
        else:
            norm = hermitian_sum(w, p)
            if not (norm.is_rational() and norm.coeffs[0] == Q ** (k - 1) * Q * Q):
                checks["mid_norm"] = False
                failures.append({"right": tag, "check": "mid_norm"})
            red = np.concatenate([w, np.zeros((n, 1), dtype=np.int64)], axis=1)
            back = reduce_redundant(T.apply_redundant(T.adjoint_redundant(red)))
            if not (back == Q ** (k - 1) * w).all():
                checks["mid_in_left_eigenspace"] = False
                failures.append({"right": tag, "check": "mid_in_left_eigenspace"})

    vs = vector_digits(np.arange(n), Q, k)
    curve = {tuple(int(c) for c in v) for v in moment_curve_vectors(spec, k)}
    left = exponent_table(spec, vs, poly_coeff_array(spec, k))
    checks["left_kernel"] = True
    for vi, v in enumerate(vs):
        key = tuple(int(c) for c in v)
        if key in curve or not any(key):
            continue
        image = reduce_redundant(T.adjoint_redundant(_redundant_from_exponents(left[vi], p)))
        if image.any():
            checks["left_kernel"] = False
            failures.append({"left": list(key), "check": "left_kernel"})
    return SVDReport(Q, k, checks, failures)


# ----------------------------------------------------------------------
# adjacency matrix of the incidence graph
# ----------------------------------------------------------------------

def charpoly(matrix: np.ndarray) -> list[int]:
    """Characteristic polynomial det(lambda I - A) of an integer matrix, constant term first.

    Faddeev-LeVerrier in exact integer arithmetic.
    """
    A = np.asarray(matrix).astype(object)
    n = A.shape[0]
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = np.zeros((n, n), dtype=object)
    ident = np.identity(n, dtype=object)
    for j in range(1, n + 1):
        Mk = A.dot(Mk) + coeffs[n - j + 1] * ident
        tr = int(np.trace(A.dot(Mk)))
        if tr % j:
            raise AssertionError("non-integral Faddeev-LeVerrier step")
        coeffs[n - j] = -tr // j
    return coeffs


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    for shift in range(len(num) - len(den), -1, -1):
        q, r = divmod(num[shift + len(den) - 1], den[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[shift] = q
        for i, c in enumerate(den):
            num[shift + i] -= q * c
    return out, num[: len(den) - 1]


@dataclass
class AdjacencyReport:
    Q: int
    k: int
    charpoly: list[int]
    symmetric_spectrum: bool
    squared_eigenvalues: dict[int, int]
    expected_squared: dict[int, int]

    @property
    def ok(self) -> bool:
        return self.symmetric_spectrum and self.squared_eigenvalues == self.expected_squared


def adjacency_spectrum_check(spec: FieldSpec, k: int, cap: int = 64) -> AdjacencyReport:
    """Exact spectrum of ``A = [[0, T], [T*, 0]]`` versus the singular values of T.

    The characteristic polynomial of A must be a polynomial in lambda^2 (up to a
    power of lambda) whose roots in lambda^2 are Q^k once, Q^(k-1) with
    multiplicity Q(Q-1), and 0 for the rest.
    """
    Q = spec.Q
    n_rows, n_cols = Q**k, Q**2
    size = n_rows + n_cols
    check_size(size, "adjacency matrix", cap)
    T = build_T(spec, k).dense()
    A = np.zeros((size, size), dtype=np.int64)
    A[:n_rows, n_rows:] = T
    A[n_rows:, :n_rows] = T.T
    cp = charpoly(A)
    # det(lambda I - A) only has powers of lambda with the parity of `size`
    symmetric = all(c == 0 for i, c in enumerate(cp) if (i - size) % 2)
    q = [c for i, c in enumerate(cp) if (i - size) % 2 == 0]  # polynomial in mu = lambda^2
    roots: dict[int, int] = {}
    rest = q
    for mu in (Q**k, Q ** (k - 1), 0):
        mult = 0
        while len(rest) > 1 and sum(c * mu**i for i, c in enumerate(rest)) == 0:
            rest, _ = _poly_divmod(rest, [-mu, 1])
            mult += 1
        if mult:
            roots[mu] = mult
    if len(rest) != 1:
        roots[-1] = len(rest) - 1  # leftover roots outside the candidate set
    rank = 1 + Q * (Q - 1)
    expected = {Q**k: 1, Q ** (k - 1): Q * (Q - 1)}
    if size // 2 > rank:
        expected[0] = size // 2 - rank
    return AdjacencyReport(Q, k, cp, symmetric, roots, expected)


# ----------------------------------------------------------------------
# incidence bounds and reports
# ----------------------------------------------------------------------

def _pair(x: Fraction | None) -> tuple[int | None, int | None]:
    if x is None:
        return None, None
    return x.numerator, x.denominator


@dataclass
class IncidenceReport:
    Q: int
    k: int
    ell: int
    pp: int
    main_term: Fraction
    tight_sq: Fraction
    loose_sq: Fraction
    vinh_sq: Fraction | None = None
    vinh_improved_sq: Fraction | None = None
    I: int | None = None
    deviation: Fraction | None = None
    deviation_sq: Fraction | None = None
    mass_mid_L: Fraction | None = None
    mass_mid_P: Fraction | None = None
    cs_sq: Fraction | None = None
    ok_thm12: bool | None = None
    ok_loose: bool | None = None
    ok_cs: bool | None = None
    ok_vinh: bool | None = None
    ok_vinh_improved: bool | None = None
    ok_points_mass: bool | None = None
    ok_polys_mass: bool | None = None

    @property
    def ok(self) -> bool:
        flags = (self.ok_thm12, self.ok_loose, self.ok_cs, self.ok_vinh, self.ok_vinh_improved,
                 self.ok_points_mass, self.ok_polys_mass)
        return all(f is not False for f in flags)

    def to_record(self) -> dict:
        rec: dict = {"Q": self.Q, "k": self.k, "ell": self.ell, "p": self.pp, "I": self.I}
        for name, value in (
            ("main", self.main_term),
            ("dev", self.deviation),
            ("dev_sq", self.deviation_sq),
            ("tight_sq", self.tight_sq),
            ("loose_sq", self.loose_sq),
            ("vinh_sq", self.vinh_sq),
            ("vinh_improved_sq", self.vinh_improved_sq),
            ("mass_mid_L", self.mass_mid_L),
            ("mass_mid_P", self.mass_mid_P),
            ("cs_sq", self.cs_sq),
        ):
            rec[f"{name}_num"], rec[f"{name}_den"] = _pair(value)
        for name in ("ok_thm12", "ok_loose", "ok_cs", "ok_vinh", "ok_vinh_improved", "ok_points_mass", "ok_polys_mass"):
            rec[name] = getattr(self, name)
        return rec


def incidence_bounds(ell: int, pp: int, spec: FieldSpec, k: int) -> IncidenceReport:
    """Exact squared bounds for |L| = ell polynomials and |P| = pp points."""
    if ell < 0 or pp < 0:
        raise ValueError("set sizes must be nonnegative")
    Q = spec.Q
    shrink = 1 - Fraction(1, Q)
    tight_sq = ell * pp * (Q + ell * (k - 1)) * shrink
    loose_sq = Fraction(ell * pp * (Q + ell * k))
    if tight_sq > loose_sq:
        raise TheoremViolation("tight bound exceeds loose bound")
    rep = IncidenceReport(Q, k, ell, pp, Fraction(ell * pp, Q), tight_sq, loose_sq)
    if k == 2:
        rep.vinh_sq = Fraction(ell * pp * Q)
        rep.vinh_improved_sq = ell * pp * Q * shrink * shrink
    return rep


def evaluate_incidences(spec: FieldSpec, k: int, L: PolySet, P: PointSet) -> IncidenceReport:
    """Exact incidence count, projection masses, and every bound for one (L, P)."""
    Q = spec.Q
    ell, pp = len(L), len(P)
    rep = incidence_bounds(ell, pp, spec, k)
    I = count_incidences(spec, k, L, P)
    dev = abs(I - rep.main_term)
    dev_sq = dev * dev
    _, m_P = projection_mass_points(spec, P)
    _, m_L = projection_mass_polys(spec, k, L)
    rep.I = I
    rep.deviation = dev
    rep.deviation_sq = dev_sq
    rep.mass_mid_L = m_L
    rep.mass_mid_P = m_P
    rep.cs_sq = Q ** (k - 1) * m_L * m_P
    rep.ok_thm12 = dev_sq <= rep.tight_sq
    rep.ok_loose = dev_sq <= rep.loose_sq
    rep.ok_cs = dev_sq <= rep.cs_sq
    rep.ok_points_mass = m_P <= Fraction((Q - 1) * pp, Q)
    rep.ok_polys_mass = m_L <= Fraction(ell * (Q + ell * (k - 1)), Q ** (k - 1))
    if k == 2:
        excess = I - rep.main_term
        rep.ok_vinh = excess <= 0 or excess * excess <= rep.vinh_sq
        rep.ok_vinh_improved = dev_sq <= rep.vinh_improved_sq
    return rep


# ----------------------------------------------------------------------
# seeded sweeps
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    spec: FieldSpec
    k: int
    ell_grid: tuple[int, ...]
    pp_grid: tuple[int, ...]
    trials: int
    seed: int


def cell_rng(seed: int, cell: int) -> np.random.Generator:
    """PCG64 stream for one grid cell, derived from ``SeedSequence([seed, cell])``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, cell])))


def sample_sets(spec: FieldSpec, k: int, ell: int, pp: int, rng: np.random.Generator) -> tuple[PolySet, PointSet]:
    L = rng.choice(spec.Q**k, size=ell, replace=False)
    P = rng.choice(spec.Q**2, size=pp, replace=False)
    return PolySet.from_indices(spec, k, L.tolist()), PointSet.from_indices(spec, P.tolist())


def sweep(config: SweepConfig, strict: bool = True) -> Iterator[tuple[int, int, IncidenceReport]]:
    """Yield ``(cell, trial, report)`` for every grid cell and trial, in order.

    With ``strict`` a record violating the main incidence bound raises
    :class:`TheoremViolation`; otherwise the flag is left on the record.
    """
    spec, k = config.spec, config.k
    if config.trials < 1 or not config.ell_grid or not config.pp_grid:
        raise BadGrid("grid and trial count must be nonempty")
    for ell in config.ell_grid:
        if not 0 <= ell <= spec.Q**k:
            raise BadGrid(f"|L| = {ell} outside [0, {spec.Q**k}]")
    for pp in config.pp_grid:
        if not 0 <= pp <= spec.Q**2:
            raise BadGrid(f"|P| = {pp} outside [0, {spec.Q**2}]")
    check_size(spec.Q**k, f"F^{k}[x]")
    for cell, (ell, pp) in enumerate(itertools.product(config.ell_grid, config.pp_grid)):
        rng = cell_rng(config.seed, cell)
        for trial in range(config.trials):
            L, P = sample_sets(spec, k, ell, pp, rng)
            rep = evaluate_incidences(spec, k, L, P)
            if strict and not rep.ok_thm12:
                raise TheoremViolation(f"cell {cell} trial {trial}: {rep.to_record()}")
            yield cell, trial, rep
