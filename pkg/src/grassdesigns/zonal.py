"""Zonal polynomials at identity matrices and the potential lower bound.

All quantities here are exact rationals. ``t_matrix(d, K, t)[k, l]`` is the
double Haar average of <P, Q>^t over G_{k,d} x G_{l,d}; the lower bound of
the fusion frame potential for a signed measure with rank masses m is
``m^T T m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from numbers import Rational
from typing import Iterable, Mapping

import numpy as np

from .partitions import Partition, as_partition, hypergeom_coeff, partitions_of


@dataclass
class SignedMeasure:
    """Orthogonally invariant signed measure ``sum_k masses[k] * sigma_{k,d}``."""

    d: int
    masses: dict[int, object] = field(default_factory=dict)

    def __post_init__(self):
        self.masses = {int(k): m for k, m in self.masses.items()}
        for k in self.masses:
            if not 1 <= k <= self.d - 1:
                raise ValueError(f"rank {k} outside 1..{self.d - 1}")

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(sorted(self.masses))

    def total_mass(self):
        return sum(self.masses.values())

    def vector(self, ranks: Iterable[int]) -> list:
        return [self.masses.get(k, 0) for k in ranks]

    def is_exact(self) -> bool:
        return all(isinstance(m, Rational) for m in self.masses.values())


@lru_cache(maxsize=None)
def _zonal_at_identity(parts: tuple[int, ...], k: int) -> Fraction:
    l = len(parts)
    if l > k:
        return Fraction(0)
    n = sum(parts)
    num = Fraction(4**n * factorial(n)) * hypergeom_coeff(Fraction(k, 2), Partition(parts))
    for i in range(1, l + 1):
        for j in range(i + 1, l + 1):
            num *= 2 * parts[i - 1] - 2 * parts[j - 1] - i + j
    den = 1
    for i in range(1, l + 1):
        den *= factorial(2 * parts[i - 1] + l - i)
    return num / den


def zonal_at_identity(pi, k: int) -> Fraction:
    """C_pi(I_k), normalized so that the C_pi with |pi| = t sum to Tr(X)^t."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return _zonal_at_identity(as_partition(pi).parts, int(k))


@dataclass(frozen=True)
class TMatrix:
    d: int
    t: int
    ranks: tuple[int, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, kl: tuple[int, int]) -> Fraction:
        k, l = kl
        return self.entries[self.ranks.index(k)][self.ranks.index(l)]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])

    def quadratic_form(self, m: list):
        n = len(self.ranks)
        return sum(m[i] * self.entries[i][j] * m[j] for i in range(n) for j in range(n))


def _rank_list(d: int, K: Iterable[int]) -> tuple[int, ...]:
    ranks = tuple(sorted(set(int(k) for k in K)))
    for k in ranks:
        if not 1 <= k <= d - 1:
            raise ValueError(f"rank {k} outside 1..{d - 1}")
    return ranks


@lru_cache(maxsize=None)
def _t_entries(d: int, ranks: tuple[int, ...], t: int) -> tuple[tuple[Fraction, ...], ...]:
    n = len(ranks)
    acc = [[Fraction(0)] * n for _ in range(n)]
    # l(pi) <= d; terms with l(pi) > min(k, l) vanish automatically
    for pi in partitions_of(t, d):
        c = [zonal_at_identity(pi, k) for k in ranks]
        cd = zonal_at_identity(pi, d)
        for i in range(n):
            for j in range(n):
                acc[i][j] += c[i] * c[j] / cd
    return tuple(tuple(row) for row in acc)


def t_matrix(d: int, K: Iterable[int], t: int) -> TMatrix:
    if t < 0:
        raise ValueError("t must be >= 0")
    ranks = _rank_list(d, K)
    return TMatrix(d, t, ranks, _t_entries(d, ranks, t))


def mean_inner_power(d: int, k: int, l: int, t: int) -> Fraction:
    """Average of <P, Q>^t for P, Q Haar-distributed on G_{k,d}, G_{l,d}."""
    for r in (k, l):
        if not 1 <= r <= d - 1:
            raise ValueError(f"rank {r} outside 1..{d - 1}")
    return t_matrix(d, {k, l}, t)[k, l]


def lower_bound(measure: SignedMeasure | Mapping[int, object], K: Iterable[int] | None = None,
                t: int = 1, d: int | None = None):
    """Potential lower bound m^T T_{K,d}(t) m.

    Exact ``Fraction`` when every mass is rational, float otherwise.
    """
    if not isinstance(measure, SignedMeasure):
        if d is None:
            raise ValueError("d is required when passing a plain mass mapping")
        measure = SignedMeasure(d, dict(measure))
    ranks = set(measure.ranks) if K is None else set(K)
    if not set(measure.ranks) <= ranks:
        raise ValueError(f"measure support {measure.ranks} not contained in K={sorted(ranks)}")
    if not ranks:
        return Fraction(0)
    T = t_matrix(measure.d, ranks, t)
    m = measure.vector(T.ranks)
    if measure.is_exact():
        return T.quadratic_form([Fraction(x) for x in m])
    mv = np.array([float(x) for x in m])
    return float(mv @ T.to_numpy() @ mv)


def numeric_rank(d: int, K: Iterable[int], t: int, rtol: float = 1e-10) -> int:
    s = np.linalg.svd(t_matrix(d, K, t).to_numpy(), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def check_trace_normalization(max_k: int = 4, max_t: int = 4) -> None:
    """Assert sum_{|pi| = t} C_pi(I_k) == k^t; raises AssertionError otherwise."""
    for k in range(1, max_k + 1):
        for t in range(max_t + 1):
            s = sum(zonal_at_identity(pi, k) for pi in partitions_of(t))
            if s != k**t:
                raise AssertionError(f"zonal trace identity fails at k={k}, t={t}: {s} != {k**t}")


check_trace_normalization()
