"""Reed-Solomon codes and a search harness for average-radius list decoding.

A list of s codewords and a center z have average radius
``(1/s) sum_c delta(c, z)``.  For a fixed list the optimal center is the
coordinatewise plurality vector, so the search only has to range over
lists.  Verdicts against the threshold ``1 - sqrt(R) - eps`` are decided
without floating point: with ``a = 1 - eps - avg`` the radius is at most the
threshold iff ``a >= 0`` and ``a^2 >= R``.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DuplicateCodewords,
    EmptyList,
    LengthMismatch,
    NonpositiveEpsilon,
    SizeCapExceeded,
    SpecMismatch,
)
from .gf import FieldSpec, FPoly, check_size, eval_polys, poly_coeff_array, size_cap

Codeword = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class RSInstance:
    spec: FieldSpec
    k: int
    eval_points: tuple[int, ...]

    def __post_init__(self) -> None:
        pts = tuple(int(a) for a in self.eval_points)
        if len(set(pts)) != len(pts):
            raise ValueError("evaluation points must be distinct")
        if any(not 0 <= a < self.spec.Q for a in pts):
            raise ValueError("evaluation point outside the field")
        if not 0 < self.k < len(pts) <= self.spec.Q:
            raise ValueError(f"need 0 < k < n <= Q, got k={self.k}, n={len(pts)}, Q={self.spec.Q}")
        object.__setattr__(self, "eval_points", pts)

    @classmethod
    def full_length(cls, spec: FieldSpec, k: int) -> "RSInstance":
        return cls(spec, k, tuple(range(spec.Q)))

    @property
    def n(self) -> int:
        return len(self.eval_points)

    @property
    def R(self) -> Fraction:
        return Fraction(self.k, self.n)

    @cached_property
    def codebook(self) -> np.ndarray:
        """All Q^k codewords, row i encoding the polynomial with index i."""
        check_size(self.spec.Q**self.k, f"F^{self.k}[x]")
        return eval_polys(self.spec, poly_coeff_array(self.spec, self.k), np.array(self.eval_points))


def rs_encode(f: FPoly, inst: RSInstance) -> Codeword:
    """``(f(alpha_1), ..., f(alpha_n))`` as field codes."""
    if f.spec != inst.spec:
        raise SpecMismatch(f"{f.spec} vs {inst.spec}")
    if f.k != inst.k:
        raise ValueError(f"polynomial has {f.k} coefficients, code dimension is {inst.k}")
    vals = eval_polys(inst.spec, np.array([f.coeffs], dtype=np.int64), np.array(inst.eval_points))
    return tuple(int(v) for v in vals[0])


def relative_distance(x: Sequence[int], y: Sequence[int]) -> Fraction:
    if len(x) != len(y):
        raise LengthMismatch(f"lengths {len(x)} and {len(y)}")
    if not x:
        raise LengthMismatch("empty words")
    return Fraction(sum(a != b for a, b in zip(x, y)), len(x))


def _as_list(words: Iterable[Sequence[int]]) -> list[Codeword]:
    words = [tuple(int(c) for c in w) for w in words]
    if not words:
        raise EmptyList("the list must be nonempty")
    if len(set(words)) != len(words):
        raise DuplicateCodewords("a list is a set of distinct codewords")
    if len({len(w) for w in words}) != 1:
        raise LengthMismatch("codewords of different lengths")
    return words


def average_radius(words: Iterable[Sequence[int]], z: Sequence[int]) -> Fraction:
    words = _as_list(words)
    return sum((relative_distance(c, z) for c in words), Fraction(0)) / len(words)


def plurality_center(words: Iterable[Sequence[int]]) -> Codeword:
    """Coordinatewise most frequent symbol; ties go to the smallest field code."""
    words = _as_list(words)
    center = []
    for column in zip(*words):
        counts: dict[int, int] = {}
        for sym in column:
            counts[sym] = counts.get(sym, 0) + 1
        best = max(counts.values())
        center.append(min(s for s, c in counts.items() if c == best))
    return tuple(center)


# ----------------------------------------------------------------------
# list-size bound and the threshold predicate
# ----------------------------------------------------------------------

def _ceil_sqrt(x: Fraction) -> int:
    """Smallest integer t >= 0 with t^2 >= x."""
    if x <= 0:
        return 0
    t = math.isqrt(x.numerator // x.denominator)
    while t * t < x:
        t += 1
    return t


def _check_eps(eps: Fraction) -> Fraction:
    eps = Fraction(eps)
    if eps <= 0:
        raise NonpositiveEpsilon(f"eps must be positive, got {eps}")
    return eps


def list_size_bound(inst: RSInstance, eps: Fraction | str | int) -> int:
    """``ceil(Q / (2 eps n sqrt(R)))``, evaluated as the least t with t^2 (2 eps n)^2 R >= Q^2."""
    eps = _check_eps(Fraction(eps))
    Q, n, R = inst.spec.Q, inst.n, inst.R
    return _ceil_sqrt(Fraction(Q * Q) / ((2 * eps * n) ** 2 * R))


def full_length_list_size(R: Fraction | str, eps: Fraction | str | int) -> int:
    """``ceil(1 / (2 eps sqrt(R)))``, the full-length (n = Q) specialisation."""
    eps = _check_eps(Fraction(eps))
    R = Fraction(R)
    if R <= 0:
        raise ValueError("rate must be positive")
    return _ceil_sqrt(1 / (4 * eps * eps * R))


def within_threshold(avg: Fraction, R: Fraction, eps: Fraction) -> bool:
    """Exact test of ``avg <= 1 - sqrt(R) - eps``."""
    a = 1 - Fraction(eps) - Fraction(avg)
    return a >= 0 and a * a >= Fraction(R)


# ----------------------------------------------------------------------
# certification search
# ----------------------------------------------------------------------

@dataclass
class CertReport:
    Q: int
    n: int
    k: int
    R: Fraction
    eps: Fraction
    ell_bound: int
    mode: str
    seed: int | None
    lists_examined: int
    exhaustive: bool
    min_average_radius: Fraction | None = None
    witness: tuple[int, ...] = ()
    witness_polys: list[list[int]] = field(default_factory=list)
    center: Codeword = ()
    violated: bool = False

    @property
    def margin_rational(self) -> Fraction | None:
        """Rational part of ``avg - (1 - sqrt(R) - eps)``; the full margin adds sqrt(R)."""
        if self.min_average_radius is None:
            return None
        return self.min_average_radius - 1 + self.eps

    @property
    def margin(self) -> float | None:
        if self.margin_rational is None:
            return None
        return float(self.margin_rational) + math.sqrt(self.R)

    def to_json(self) -> dict:
        def pair(x: Fraction | None) -> list[int] | None:
            return None if x is None else [x.numerator, x.denominator]

        return {
            "Q": self.Q,
            "n": self.n,
            "k": self.k,
            "R": pair(self.R),
            "eps": pair(self.eps),
            "ell_bound": self.ell_bound,
            "list_size": self.ell_bound + 1,
            "mode": self.mode,
            "seed": self.seed,
            "exhaustive": self.exhaustive,
            "lists_examined": self.lists_examined,
            "min_average_radius": pair(self.min_average_radius),
            "witness_indices": list(self.witness),
            "witness_polys": self.witness_polys,
            "center": list(self.center),
            "violated": self.violated,
            "margin_rational": pair(self.margin_rational),
            "margin_float": self.margin,
            "threshold_float": 1 - math.sqrt(self.R) - float(self.eps),
        }


def _score_batch(codebook: np.ndarray, lists: np.ndarray) -> np.ndarray:
    """Minimal total Hamming distance to any center, for each row of ``lists``."""
    vals = codebook[lists]  # (B, s, n)
    s = vals.shape[1]
    agree = (vals[:, :, None, :] == vals[:, None, :, :]).sum(axis=2)
    return (s - agree.max(axis=1)).sum(axis=1)


def _best_in_batch(codebook: np.ndarray, lists: np.ndarray) -> tuple[int, tuple[int, ...]] | None:
    if not len(lists):
        return None
    scores = _score_batch(codebook, lists)
    best = scores.min()
    tied = lists[scores == best]
    winner = min(tuple(int(i) for i in row) for row in tied)
    return int(best), winner


def _batches_exhaustive(N: int, s: int, chunk: int) -> Iterator[np.ndarray]:
    combos = itertools.combinations(range(N), s)
    while True:
        flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, chunk)), dtype=np.int64)
        if not flat.size:
            return
        yield flat.reshape(-1, s)


def _lists_random(N: int, s: int, trials: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return np.sort(np.stack([rng.choice(N, size=s, replace=False) for _ in range(trials)]), axis=1)


def certify(
    inst: RSInstance,
    eps: Fraction | str | int,
    mode: str = "random",
    trials: int = 10_000,
    seed: int = 0,
    workers: int = 1,
    chunk: int = 1 << 15,
) -> CertReport:
    """Search lists of ``ell + 1`` codewords for the smallest average radius.

    ``mode`` is ``"random"`` (``trials`` seeded uniform lists) or
    ``"exhaustive"`` (every list).  Lists are scored in shards of ``chunk``;
    with ``workers > 1`` shards run on a thread pool.  The minimum is taken by
    total distance, ties broken by the lexicographically smallest sorted index
    vector, so the result does not depend on ``workers``.
    """
    eps = _check_eps(Fraction(eps))
    ell = list_size_bound(inst, eps)
    s = ell + 1
    N = inst.spec.Q**inst.k
    codebook = inst.codebook
    report = CertReport(
        Q=inst.spec.Q, n=inst.n, k=inst.k, R=inst.R, eps=eps, ell_bound=ell, mode=mode,
        seed=seed if mode == "random" else None, lists_examined=0, exhaustive=mode == "exhaustive",
    )
    if s > N:
        # fewer codewords than the list size: the property holds vacuously
        return report
    if mode == "exhaustive":
        total = math.comb(N, s)
        if total > size_cap():
            raise SizeCapExceeded(f"C({N}, {s}) = {total} lists exceed the cap {size_cap()}")
        batches: Iterable[np.ndarray] = _batches_exhaustive(N, s, chunk)
    elif mode == "random":
        if trials < 1:
            raise ValueError("trials must be positive")
        lists = _lists_random(N, s, trials, seed)
        batches = (lists[i : i + chunk] for i in range(0, trials, chunk))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    best: tuple[int, tuple[int, ...]] | None = None
    examined = 0

    def consume(result: tuple[int, tuple[int, ...]] | None) -> None:
        nonlocal best
        if result is not None and (best is None or result < best):
            best = result

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pending = []
            for batch in batches:
                examined += len(batch)
                pending.append(pool.submit(_best_in_batch, codebook, batch))
            for fut in pending:
                consume(fut.result())
    else:
        for batch in batches:
            examined += len(batch)
            consume(_best_in_batch(codebook, batch))

    assert best is not None
    total_dist, witness = best
    words = [tuple(int(c) for c in codebook[i]) for i in witness]
    center = plurality_center(words)
    avg = Fraction(total_dist, inst.n * s)
    report.lists_examined = examined
    report.min_average_radius = avg
    report.witness = witness
    report.witness_polys = [list(FPoly.from_index(inst.spec, inst.k, i).coeffs) for i in witness]
    report.center = center
    report.violated = within_threshold(avg, inst.R, eps)
    return report
