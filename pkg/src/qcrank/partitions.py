"""Brute-force partition oracles.

Nothing here touches generating functions: partitions are enumerated
directly, cranks come from the two-case definition, and t-cores are counted
through hook lengths.  These values are the ground truth the series code is
checked against.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

Partition = tuple[int, ...]

DEFAULT_LIMIT = 60
LIMIT_ENV = "QCRANK_ORACLE_LIMIT"


class OracleLimitError(ValueError):
    pass


def oracle_limit() -> int:
    raw = os.environ.get(LIMIT_ENV)
    return int(raw) if raw else DEFAULT_LIMIT


def check_partition(parts: Partition) -> Partition:
    parts = tuple(parts)
    if any(p < 1 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"not a partition: {parts}")
    return parts


def _partitions(n: int, largest: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of ``n``, largest first part first."""
    if n < 0:
        raise ValueError("n must be non-negative")
    limit = oracle_limit()
    if n > limit:
        raise OracleLimitError(f"enumeration of n={n} exceeds the oracle limit {limit} (set {LIMIT_ENV})")
    return list(_partitions(n, n))


def conjugate(parts: Partition) -> Partition:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > i) for i in range(parts[0]))


@dataclass(frozen=True)
class CrankStats:
    largest: int
    ones: int
    bigcount: int


def crank_stats(parts: Partition) -> CrankStats:
    parts = check_partition(parts)
    ones = parts.count(1)
    return CrankStats(
        largest=parts[0] if parts else 0,
        ones=ones,
        bigcount=sum(1 for p in parts if p > ones),
    )


def crank(parts: Partition) -> int:
    """Andrews-Garvan crank; the empty partition gets 0."""
    st = crank_stats(parts)
    if st.ones == 0:
        return st.largest
    return st.bigcount - st.ones


@dataclass
class CrankTable:
    n_max: int
    counts: dict[tuple[int, int], int] = field(default_factory=dict)

    def get(self, m: int, n: int) -> int:
        return self.counts.get((m, n), 0)

    def row(self, n: int) -> dict[int, int]:
        return {m: c for (m, k), c in sorted(self.counts.items()) if k == n}

    def total(self, n: int) -> int:
        return sum(self.row(n).values())


def crank_table(n_max: int) -> CrankTable:
    table = CrankTable(n_max)
    for n in range(n_max + 1):
        for m, c in Counter(crank(lam) for lam in enumerate_partitions(n)).items():
            table.counts[(m, n)] = c
    return table


def hook_lengths(parts: Partition) -> list[int]:
    """Hook length of every cell, row by row."""
    parts = check_partition(parts)
    conj = conjugate(parts)
    return [
        (row_len - j - 1) + (conj[j] - i - 1) + 1
        for i, row_len in enumerate(parts)
        for j in range(row_len)
    ]


def hook_multiset(parts: Partition) -> Counter:
    return Counter(hook_lengths(parts))


def is_t_core(parts: Partition, t: int) -> bool:
    return all(h % t for h in hook_lengths(parts))


def count_t_core(n: int, t: int) -> int:
    if t < 2:
        raise ValueError("t must be at least 2")
    return sum(1 for lam in enumerate_partitions(n) if is_t_core(lam, t))


def partition_count(n: int) -> int:
    return len(enumerate_partitions(n))
