from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from qcrank.crank_gf import build_tcore_gf
from qcrank.partitions import (
    OracleLimitError,
    conjugate,
    count_t_core,
    crank,
    crank_stats,
    crank_table,
    enumerate_partitions,
    hook_multiset,
    partition_count,
)
from qcrank.qseries import EtaQuotientSpec, eta_product


def test_enumeration_small_cases():
    assert enumerate_partitions(0) == [()]
    assert sorted(enumerate_partitions(4)) == sorted([(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)])
    assert len(enumerate_partitions(10)) == 42


def test_enumeration_matches_series():
    p = eta_product(EtaQuotientSpec.from_vector(1, [-1]), 26).coefficients()
    for n in range(26):
        parts = enumerate_partitions(n)
        assert len(parts) == len(set(parts)) == p[n]
        assert all(sum(lam) == n for lam in parts)


def test_enumeration_limit(monkeypatch):
    with pytest.raises(OracleLimitError):
        enumerate_partitions(61)
    monkeypatch.setenv("QCRANK_ORACLE_LIMIT", "5")
    with pytest.raises(OracleLimitError):
        enumerate_partitions(6)
    assert len(enumerate_partitions(5)) == 7


@pytest.mark.parametrize(
    "lam, expected",
    [((4,), 4), ((1,), -1), ((3, 1), 0), ((), 0), ((2, 1, 1), -2), ((5, 3, 1), 1)],
)
def test_crank_examples(lam, expected):
    assert crank(lam) == expected


def test_crank_stats():
    st_ = crank_stats((4, 2, 2, 1, 1))
    assert (st_.largest, st_.ones, st_.bigcount) == (4, 2, 1)


def test_crank_rejects_non_partition():
    with pytest.raises(ValueError):
        crank((1, 2))


def test_crank_table_rows():
    table = crank_table(20)
    assert table.row(4) == {-4: 1, -2: 1, 0: 1, 2: 1, 4: 1}
    assert table.total(5) == 7
    for n in range(21):
        assert table.total(n) == partition_count(n)


def test_crank_symmetry_except_n_equals_one():
    table = crank_table(20)
    for n in [0] + list(range(2, 21)):
        assert table.row(n) == {-m: c for m, c in table.row(n).items()}
    # the single partition of 1 has crank -1 and nothing balances it
    assert table.row(1) == {-1: 1}


def test_hook_examples():
    assert hook_multiset((1,)) == Counter({1: 1})
    assert hook_multiset((3, 2)) == Counter([4, 3, 1, 2, 1])
    assert hook_multiset(()) == Counter()


def brute_hooks(lam):
    cells = {(i, j) for i, row in enumerate(lam) for j in range(row)}
    out = []
    for i, j in cells:
        arm = sum(1 for jj in range(j + 1, lam[i]))
        leg = sum(1 for ii in range(i + 1, len(lam)) if (ii, j) in cells)
        out.append(arm + leg + 1)
    return Counter(out)


partitions_st = st.integers(0, 15).flatmap(lambda n: st.sampled_from(enumerate_partitions(n)))


@settings(max_examples=100)
@given(partitions_st)
def test_hooks_conjugation_invariant(lam):
    assert hook_multiset(lam) == hook_multiset(conjugate(lam))
    assert hook_multiset(lam) == brute_hooks(lam)
    assert conjugate(conjugate(lam)) == lam


def test_t_core_examples():
    assert count_t_core(4, 5) == 5
    assert count_t_core(5, 5) == 2
    survivors = [lam for lam in enumerate_partitions(5) if all(h % 5 for h in hook_multiset(lam))]
    assert sorted(survivors) == [(2, 2, 1), (3, 2)]
    triangular = {k * (k + 1) // 2 for k in range(10)}
    for n in range(31):
        assert count_t_core(n, 2) == (1 if n in triangular else 0)


@pytest.mark.parametrize("t", [2, 3, 5, 7, 11])
def test_t_core_oracle_matches_generating_function(t):
    f = build_tcore_gf(t, 31)
    assert [count_t_core(n, t) for n in range(31)] == f.coefficients()
