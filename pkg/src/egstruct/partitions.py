"""Partitions of finite label sets, ordered by refinement.

Only the operations the normal-form reconstruction needs: the refinement
test, lattice joins (coarsest common refinement), and the finest partition
whose blockwise outcome unions are pairwise disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass


class PartitionError(ValueError):
    pass


def _canon(blocks):
    return tuple(sorted((tuple(sorted(b)) for b in blocks),
                        key=lambda b: b[0]))


@dataclass(frozen=True)
class Partition:
    ground: frozenset
    blocks: tuple  # sorted tuples, ordered by smallest member

    @classmethod
    def of(cls, blocks):
        blocks = [frozenset(b) for b in blocks]
        ground = set()
        for b in blocks:
            if not b:
                raise PartitionError("empty block")
            if ground & b:
                raise PartitionError("blocks are not disjoint")
            ground |= b
        return cls(frozenset(ground), _canon(blocks))

    @classmethod
    def trivial(cls, ground):
        ground = frozenset(ground)
        if not ground:
            raise PartitionError("empty ground set")
        return cls(ground, _canon([ground]))

    @classmethod
    def discrete(cls, ground):
        return cls(frozenset(ground), _canon([{x} for x in ground]))

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(frozenset(b) for b in self.blocks)

    def block_of(self, x):
        for b in self.blocks:
            if x in b:
                return frozenset(b)
        raise KeyError(x)


def refines(p: Partition, q: Partition) -> bool:
    """True iff every block of p is a union of blocks of q (p coarser-or-equal)."""
    if p.ground != q.ground:
        raise PartitionError("partitions have different ground sets")
    for qb in q.blocks:
        pb = p.block_of(qb[0])
        if not frozenset(qb) <= pb:
            return False
    return True


def join(partitions) -> Partition:
    """Coarsest common refinement: blockwise nonempty intersections."""
    partitions = list(partitions)
    if not partitions:
        raise PartitionError("join of an empty collection")
    ground = partitions[0].ground
    blocks = [frozenset(b) for b in partitions[0].blocks]
    for p in partitions[1:]:
        if p.ground != ground:
            raise PartitionError("partitions have different ground sets")
        blocks = [b & frozenset(c) for b in blocks for c in p.blocks
                  if b & frozenset(c)]
    return Partition.of(blocks)


def finest_outcome_partition(labels, outcome_sets) -> Partition:
    """Finest partition of `labels` whose blockwise outcome unions are disjoint.

    Two labels must share a block whenever their outcome sets overlap, so the
    finest solution is the connected components of the overlap graph, found
    with a union-find keyed by outcomes.
    """
    labels = sorted(labels)
    if not labels:
        raise PartitionError("empty label set")
    parent = {x: x for x in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    seen = {}
    for lab in labels:
        outs = outcome_sets[lab]
        if not outs:
            raise PartitionError(f"empty outcome set for label {lab!r}")
        for z in outs:
            if z in seen:
                union(lab, seen[z])
            else:
                seen[z] = lab
    groups = {}
    for lab in labels:
        groups.setdefault(find(lab), set()).add(lab)
    return Partition.of(groups.values())
