"""Dimensions of O(d) irreducibles and of polynomial spaces on Grassmannians."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .partitions import Partition, as_partition, conjugate, enumerate_partitions


def _check_ranks(d: int, K: Iterable[int]) -> tuple[int, ...]:
    ranks = tuple(sorted(set(int(k) for k in K)))
    if not ranks:
        raise ValueError("rank set K must be nonempty")
    bad = [k for k in ranks if not 1 <= k <= d - 1]
    if bad:
        raise ValueError(f"ranks {bad} outside 1..{d - 1}")
    return ranks


def is_valid_label(d: int, pi) -> bool:
    c = conjugate(pi)
    return c[0] + c[1] <= d


def associate(d: int, pi) -> Partition:
    """Associate label: first column of length l replaced by d - l."""
    pi = as_partition(pi)
    c = list(conjugate(pi).parts) or [0]
    c[0] = d - c[0]
    c = sorted(c, reverse=True)
    return conjugate(Partition(c))


@lru_cache(maxsize=None)
def _dim_irrep(d: int, parts: tuple[int, ...]) -> int:
    h = d // 2
    lam = [Fraction(d, 2) + (parts[i] if i < len(parts) else 0) - (i + 1) for i in range(h)]
    val = Fraction(1)
    for i in range(1, h + 1):
        for j in range(i + 1, h + 1):
            li, lj = lam[i - 1], lam[j - 1]
            val *= (li + lj) * (li - lj) / ((j - i) * (d - i - j))
    if d % 2:
        for i in range(1, h + 1):
            val *= 2 * lam[i - 1] / (d - 2 * i)
    elif h > 0 and len(parts) >= h:
        val *= 2
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral dimension {val} for d={d}, pi={parts}")
    return int(val)


def dim_irrep(d: int, pi) -> int:
    """Dimension of the O(d)-irreducible labelled by ``pi``.

    Labels with more than d/2 rows are mapped to their associate, which has
    the same dimension.
    """
    pi = as_partition(pi)
    if d < 1:
        raise ValueError("d must be >= 1")
    if not is_valid_label(d, pi):
        raise ValueError(f"{pi} is not an O({d}) label")
    if pi.length() > d // 2:
        pi = associate(d, pi)
    if d == 1:
        return 1
    return _dim_irrep(d, pi.parts)


def dim_pol_single(d: int, k: int, t: int) -> int:
    if not 1 <= k <= d - 1:
        raise ValueError(f"rank {k} outside 1..{d - 1}")
    if t < 0:
        raise ValueError("t must be >= 0")
    return sum(dim_irrep(d, pi.scaled(2)) for pi in enumerate_partitions(t, min(k, d - k)))


def order_ranks(d: int, K: Iterable[int]) -> list[int]:
    """Sort K by min(k, d-k) decreasing, ties by ascending k."""
    return sorted(_check_ranks(d, K), key=lambda k: (-min(k, d - k), k))


def dim_pol_union_ordered(d: int, ordered: list[int], t: int) -> int:
    """Sum of dim Pol_{t-i+1}(G_{k_i,d}) for a given ordering of the ranks."""
    s = min(t + 1, len(ordered))
    return sum(dim_pol_single(d, ordered[i], t - i) for i in range(s))


def dim_pol_union(d: int, K: Iterable[int], t: int) -> int:
    if t < 0:
        raise ValueError("t must be >= 0")
    return dim_pol_union_ordered(d, order_ranks(d, K), t)


def r_K(d: int, K: Iterable[int]) -> int:
    return max(min(k, d - k) for k in K)


def mu_K(d: int, K: Iterable[int], pi) -> int:
    l = as_partition(pi).length()
    return sum(1 for k in set(K) if l <= k <= d - l)


def multiplicity(d: int, K: Iterable[int], pi, t: int) -> int:
    """Multiplicity of H_{2 pi} in Pol_t on the union of Grassmannians."""
    K = set(K)
    pi = as_partition(pi)
    if pi.size() > t or pi.length() > r_K(d, K):
        return 0
    return min(t - pi.size() + 1, mu_K(d, K, pi))


def dim_pol_union_from_multiplicities(d: int, K: Iterable[int], t: int) -> int:
    """Same quantity as :func:`dim_pol_union`, summed over irreducibles."""
    K = _check_ranks(d, K)
    return sum(
        multiplicity(d, K, pi, t) * dim_irrep(d, pi.scaled(2))
        for pi in enumerate_partitions(t, r_K(d, K))
    )


def min_points_lower_bound(d: int, K: Iterable[int], strength: int) -> int:
    """Minimal cardinality of a nonnegative-weight cubature of given strength.

    A cubature of strength 2t (or 2t+1) needs at least dim Pol_t points.
    """
    if strength < 0:
        raise ValueError("strength must be >= 0")
    return dim_pol_union(d, K, strength // 2)
