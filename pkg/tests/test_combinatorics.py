import pytest
from hypothesis import given, strategies as st

from blockising.combinatorics import (
    FrobeniusPartition,
    conjugate,
    decorated_partitions,
    distinct_sizes,
    fp_counts,
    fp_counts_via_wright,
    fp_gen_function,
    frobenius_partitions,
    frobenius_y_stat,
    from_frobenius,
    overpartition_counts,
    partial_sum_stats,
    partition_count,
    partitions_of,
    profile_partition,
    runs_of_consecutive,
    to_frobenius,
    wright,
)


def test_partition_counts():
    assert partitions_of(0) == [()]
    assert len(partitions_of(4)) == 5
    assert partition_count(7) == 15


def test_distinct_sizes():
    assert distinct_sizes((8, 6, 6, 2, 1, 1)) == 4
    assert distinct_sizes((8, 6, 6, 3, 1, 1)) == 4
    assert distinct_sizes((7,)) == 1
    assert distinct_sizes(()) == 0


def test_frobenius_symbols():
    a = FrobeniusPartition((7, 5, 4), (5, 2, 0))
    b = FrobeniusPartition((7, 5, 4), (5, 2, 1))
    assert frobenius_y_stat(a) == 4 and frobenius_y_stat(b) == 4
    assert to_frobenius((8, 7, 7, 3, 1, 1)) == b and b.total == 27
    # the symbols belong to (8,7,7,...) partitions; every reading gives k = 4
    assert distinct_sizes(from_frobenius(a)) == 4 and distinct_sizes(from_frobenius(b)) == 4


@pytest.mark.parametrize("n", range(0, 13))
def test_frobenius_round_trip(n):
    for p in partitions_of(n):
        fp = to_frobenius(p)
        assert from_frobenius(fp) == p
        assert fp.total == n
        assert frobenius_y_stat(fp) == distinct_sizes(p)
        assert conjugate(conjugate(p)) == p and sum(conjugate(p)) == n


def test_wright_worked_instances():
    fp = FrobeniusPartition((7, 5, 4), (5, 2, 1))
    up = wright(fp, 3)
    assert tuple(map(tuple, up.rows())) == ((10, 8, 7, 2), (None, None, None, 2))
    assert up.total == 33 and frobenius_y_stat(up) == 4
    down = wright(fp, -3)
    assert tuple(map(tuple, down.rows())) == ((None, None, None, 4, 2, 1), (8, 5, 4, 2, 1, 0))
    assert down.total == 30 and frobenius_y_stat(down) == 4
    assert wright(fp, 0) == fp


@pytest.mark.parametrize("m", [-4, -3, -2, -1, 1, 2, 3, 4])
def test_wright_bijection(m):
    shift = m * (m + 1) // 2
    for n in range(11):
        images = [wright(to_frobenius(p), m) for p in partitions_of(n)]
        for p, img in zip(partitions_of(n), images):
            assert img.total == n + shift and img.offset == m
            assert frobenius_y_stat(img) == distinct_sizes(p)
        assert sorted(map(repr, images)) == sorted(map(repr, frobenius_partitions(n + shift, m)))


def test_fp_counts_agree():
    assert fp_counts(10) == fp_counts_via_wright(10)
    gf = fp_gen_function(8)
    assert gf.coefficient(7, 0, 1) == 2 and gf.coefficient(7, 0, 2) == 11 and gf.coefficient(7, 0, 3) == 2


def test_overpartitions():
    assert overpartition_counts(4, 2) == 14
    assert overpartition_counts(4, 3) == 27
    assert overpartition_counts(7, 1) == 15
    for n in range(7):
        for m in (1, 2, 3):
            assert sum(1 for _ in decorated_partitions(n, m)) == overpartition_counts(n, m)


def test_partial_sum_stats():
    s = partial_sum_stats((3, 3, 1))
    assert (s.distinct, s.minimal, s.partial_sums) == (2, 4, 5)
    assert s.exponent(3) == 2 * 3 - 1
    assert partial_sum_stats(()).exponent(5) == 0


def test_runs_of_consecutive():
    assert runs_of_consecutive([5, 4, 2, 1, 1]) == [[5, 4], [2, 1]]
    assert runs_of_consecutive([]) == []


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.data())
def test_profile_partition_size_matches_run_exponent(ells, data):
    alphas = data.draw(st.lists(st.integers(0, 3), min_size=len(ells), max_size=len(ells)))
    for side, sentinel in (("left", -1), ("right", 0)):
        T = [sum(ells[j:]) for j in range(len(ells))]
        prev, expected = sentinel, 0
        for ell, alpha, t in zip(ells, alphas, T):
            expected += ell * (ell - 1) // 2 + (alpha + 1 + prev) * t
            prev = ell
        p = profile_partition(ells, alphas, side)
        assert sum(p) == expected
        # the parts form len(ells) runs of consecutive sizes ending at 1
        if alphas[0] or side == "right" or len(ells) > 1 or ells[0] > 1:
            assert len(runs_of_consecutive(p)) <= len(ells)


def test_listed_statistic_miscounts_staircase_rows():
    from blockising.combinatorics import listed_y_stat

    img = wright(to_frobenius((1,)), 2)
    assert (img.top, img.bottom) == ((2, 0), ())
    assert listed_y_stat(img) == 2 and frobenius_y_stat(img) == 1


def test_fp_gen_function_equals_Z():
    from blockising.identities import Z_J1

    assert fp_gen_function(12) == Z_J1(12)
