"""Integer partitions and the generalized hypergeometric coefficient."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


@dataclass(frozen=True, init=False)
class Partition:
    """Weakly decreasing tuple of positive integers; ``()`` is the zero partition.

    Zero parts are stripped on construction, so ``Partition((2, 1, 0))`` and
    ``Partition((2, 1))`` compare equal. Indexing past the stored parts
    returns 0.
    """

    parts: tuple[int, ...] = ()

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        parts = tuple(p for p in parts if p > 0)
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing, got {parts}")
        object.__setattr__(self, "parts", parts)

    def size(self) -> int:
        return sum(self.parts)

    def length(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        # 0-based, implicit zero padding
        if i < 0:
            raise IndexError(i)
        return self.parts[i] if i < len(self.parts) else 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def scaled(self, c: int) -> "Partition":
        return Partition(c * p for p in self.parts)

    def __repr__(self) -> str:
        return f"Partition({self})"

    def __str__(self) -> str:
        if not self.parts:
            return "(0)"
        return "(" + ",".join(map(str, self.parts)) + ")"

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"(2,1)"``, ``"2,1"`` or ``"0"``."""
        body = text.strip().strip("()[] ")
        if not body:
            return cls()
        return cls(int(x) for x in body.split(","))


def as_partition(pi) -> Partition:
    return pi if isinstance(pi, Partition) else Partition(pi)


def partitions_of(n: int, max_length: int | None = None) -> list[Partition]:
    """Partitions of ``n`` with at most ``max_length`` parts, lexicographically decreasing."""
    if n < 0:
        return []
    if max_length is None:
        max_length = n
    out: list[Partition] = []

    def rec(remaining: int, largest: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if len(prefix) == max_length:
            return
        for p in range(min(remaining, largest), 0, -1):
            prefix.append(p)
            rec(remaining - p, p, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def enumerate_partitions(max_size: int, max_length: int) -> list[Partition]:
    """All partitions with size <= max_size and length <= max_length.

    Graded order: by size ascending, then lexicographically decreasing within
    a size, e.g. ``enumerate_partitions(2, 2) == [(0), (1), (2), (1,1)]``.
    """
    if max_size < 0 or max_length < 0:
        raise ValueError("max_size and max_length must be nonnegative")
    out: list[Partition] = []
    for n in range(max_size + 1):
        out.extend(partitions_of(n, max_length))
    return out


def conjugate(pi) -> Partition:
    pi = as_partition(pi)
    if not pi.parts:
        return Partition()
    return Partition(sum(1 for p in pi.parts if p >= k) for k in range(1, pi.parts[0] + 1))


def leq(pi, pi_prime) -> bool:
    """Componentwise order ``pi <= pi_prime`` with zero padding."""
    pi, pi_prime = as_partition(pi), as_partition(pi_prime)
    n = max(pi.length(), pi_prime.length()) + 1
    return all(pi[i] <= pi_prime[i] for i in range(n))


def rising_factorial(a: Fraction, s: int) -> Fraction:
    out = Fraction(1)
    for j in range(s):
        out *= a + j
    return out


def hypergeom_coeff(a, pi) -> Fraction:
    """Generalized Pochhammer symbol ``prod_i (a - (i-1)/2)_{pi_i}``, exact."""
    pi = as_partition(pi)
    a = Fraction(a)
    out = Fraction(1)
    for i, p in enumerate(pi.parts):
        out *= rising_factorial(a - Fraction(i, 2), p)
    return out
