import pytest
from hypothesis import given
from hypothesis import strategies as st

from expeq.catalan import (
    CatalanPermutation,
    NonCrossingPartition,
    PartitionError,
    catalan_count,
    enumerate_noncrossing,
    is_noncrossing,
    permutation_from_partition,
)


def test_crossing_examples():
    assert not is_noncrossing([[1, 3], [2, 4]])
    assert is_noncrossing([[1, 3], [2], [4]])
    assert is_noncrossing([[1, 4], [2, 3]])


def test_crossing_partition_rejected():
    with pytest.raises(PartitionError):
        NonCrossingPartition(4, ((1, 3), (2, 4)))


@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (3, 5), (4, 14), (5, 42), (10, 16796)])
def test_counts(n, count):
    assert catalan_count(n) == count


@pytest.mark.parametrize("n", range(8))
def test_enumeration_is_exhaustive_and_distinct(n):
    parts = list(enumerate_noncrossing(n))
    assert len(parts) == catalan_count(n)
    assert len({p.blocks for p in parts}) == len(parts)


def test_enumeration_small_order():
    assert [p.render() for p in enumerate_noncrossing(3)] == [
        "{{1},{2},{3}}", "{{1},{2,3}}", "{{1,2},{3}}", "{{1,3},{2}}", "{{1,2,3}}",
    ]
    assert [p.blocks for p in enumerate_noncrossing(0)] == [()]


def test_permutation_examples():
    assert permutation_from_partition(NonCrossingPartition(3, ((1, 3), (2,)))).mapping == (3, 2, 1)
    assert permutation_from_partition(NonCrossingPartition(3, ((1, 2, 3),))).mapping == (2, 3, 1)
    ident = permutation_from_partition(NonCrossingPartition(4, ((1,), (2,), (3,), (4,))))
    assert ident.mapping == (1, 2, 3, 4) and ident.fixpoints() == [1, 2, 3, 4]


def test_non_increasing_cycle_rejected():
    with pytest.raises(PartitionError):
        CatalanPermutation(3, (3, 1, 2))


@given(st.integers(0, 6).flatmap(lambda n: st.sampled_from(list(enumerate_noncrossing(n)))))
def test_round_trips(p):
    sigma = permutation_from_partition(p)
    assert sigma.partition() == p
    assert NonCrossingPartition.parse(p.render()) == p
