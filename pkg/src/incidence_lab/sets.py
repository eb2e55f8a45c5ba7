"""Point sets in F^2 and polynomial sets in F^k[x], stored as canonical indices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DuplicatePoints, DuplicatePolynomials
from .gf import FieldSpec, FPoly, poly_coeff_array


def _canonical(indices: Iterable[int], upper: int, exc: type[Exception], what: str) -> tuple[int, ...]:
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise exc(f"{what} contain duplicates")
    for i in idx:
        if not 0 <= i < upper:
            raise ValueError(f"{what} index {i} outside [0, {upper})")
    return tuple(sorted(idx))


@dataclass(frozen=True)
class PointSet:
    spec: FieldSpec
    indices: tuple[int, ...]

    @classmethod
    def from_indices(cls, spec: FieldSpec, indices: Iterable[int]) -> "PointSet":
        return cls(spec, _canonical(indices, spec.Q**2, DuplicatePoints, "points"))

    @classmethod
    def from_points(cls, spec: FieldSpec, pts: Iterable[tuple[int, int]]) -> "PointSet":
        return cls.from_indices(spec, (x + spec.Q * y for x, y in pts))

    @classmethod
    def full(cls, spec: FieldSpec) -> "PointSet":
        return cls(spec, tuple(range(spec.Q**2)))

    def __len__(self) -> int:
        return len(self.indices)

    def coords(self) -> np.ndarray:
        """Array of shape (|P|, 2) holding (x, y) codes."""
        idx = np.asarray(self.indices, dtype=np.int64)
        return np.stack([idx % self.spec.Q, idx // self.spec.Q], axis=-1).reshape(-1, 2)


@dataclass(frozen=True)
class PolySet:
    spec: FieldSpec
    k: int
    indices: tuple[int, ...]

    @classmethod
    def from_indices(cls, spec: FieldSpec, k: int, indices: Iterable[int]) -> "PolySet":
        return cls(spec, k, _canonical(indices, spec.Q**k, DuplicatePolynomials, "polynomials"))

    @classmethod
    def from_polys(cls, polys: Iterable[FPoly]) -> "PolySet":
        polys = list(polys)
        if not polys:
            raise ValueError("cannot infer the field from an empty list; use from_indices")
        return cls.from_indices(polys[0].spec, polys[0].k, (f.index for f in polys))

    @classmethod
    def full(cls, spec: FieldSpec, k: int) -> "PolySet":
        return cls(spec, k, tuple(range(spec.Q**k)))

    def __len__(self) -> int:
        return len(self.indices)

    def coeffs(self) -> np.ndarray:
        return poly_coeff_array(self.spec, self.k, np.asarray(self.indices, dtype=np.int64))

    def polys(self) -> list[FPoly]:
        return [FPoly.from_index(self.spec, self.k, i) for i in self.indices]
