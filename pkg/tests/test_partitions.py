import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egstruct import Partition, PartitionError, finest_outcome_partition, join, refines


def test_construction_and_canonical_form():
    p = Partition.of([{"b"}, {"a", "c"}])
    assert p.ground == frozenset("abc")
    assert len(p) == 2
    assert p.block_of("c") == frozenset({"a", "c"})
    assert p == Partition.of([{"c", "a"}, {"b"}])


def test_trivial_and_discrete():
    assert len(Partition.trivial("abc")) == 1
    assert len(Partition.discrete("abc")) == 3
    with pytest.raises(PartitionError):
        Partition.trivial([])


def test_rejects_overlap_and_empty_block():
    with pytest.raises(PartitionError):
        Partition.of([{"a", "b"}, {"b"}])
    with pytest.raises(PartitionError):
        Partition.of([{"a"}, set()])


def test_refines():
    coarse = Partition.of([{"a", "b"}, {"c"}])
    fine = Partition.discrete("abc")
    assert refines(coarse, fine)
    assert not refines(fine, coarse) or len(fine) == len(coarse)
    assert refines(coarse, coarse)
    with pytest.raises(PartitionError):
        refines(coarse, Partition.trivial("ab"))


def test_join_is_blockwise_intersection():
    p = Partition.of([{"a", "b"}, {"c", "d"}])
    q = Partition.of([{"a", "c"}, {"b", "d"}])
    j = join([p, q])
    assert j == Partition.discrete("abcd")
    assert refines(p, j) and refines(q, j)
    with pytest.raises(PartitionError):
        join([])


def _set_partitions(items):
    """All partitions of a list (for brute-force oracles on tiny grounds)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [part[k] | {first}] + part[k + 1:]
        yield part + [{first}]


def _valid(labels, outcome_sets, blocks):
    """Blockwise outcome unions must be pairwise disjoint."""
    unions = [frozenset().union(*(outcome_sets[l] for l in b)) for b in blocks]
    return all(u & v == frozenset()
               for u, v in itertools.combinations(unions, 2))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6), st.data())
def test_finest_outcome_partition_against_brute_force(n, data):
    labels = [f"s{k}" for k in range(n)]
    universe = [f"z{k}" for k in range(5)]
    outcome_sets = {
        l: frozenset(data.draw(
            st.sets(st.sampled_from(universe), min_size=1, max_size=3),
            label=l))
        for l in labels}
    got = finest_outcome_partition(labels, outcome_sets)
    assert got.ground == frozenset(labels)
    assert _valid(labels, outcome_sets, list(got))
    # it must be refined by no other valid partition: every valid partition
    # is coarser than (refined by) the computed one
    for blocks in _set_partitions(labels):
        cand = Partition.of(blocks)
        if _valid(labels, outcome_sets, list(cand)):
            assert refines(cand, got)


def test_finest_outcome_partition_rejects_empty():
    with pytest.raises(PartitionError):
        finest_outcome_partition([], {})
