"""Non-crossing partitions and Catalan permutations."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence


class PartitionError(ValueError):
    pass


def _check_partition(blocks: Sequence[Sequence[int]], n: int) -> None:
    seen = sorted(x for b in blocks for x in b)
    if seen != list(range(1, n + 1)):
        raise PartitionError(f"blocks {blocks} do not partition 1..{n}")
    if any(len(b) == 0 for b in blocks):
        raise PartitionError("empty block")


def blocks_cross(b1: Sequence[int], b2: Sequence[int]) -> bool:
    for k, l in itertools.combinations(sorted(b1), 2):
        for s, t in itertools.combinations(sorted(b2), 2):
            if k < s < l < t or s < k < t < l:
                return True
    return False


def is_noncrossing(blocks: Sequence[Sequence[int]], n: int | None = None) -> bool:
    if n is None:
        n = sum(len(b) for b in blocks)
    _check_partition(blocks, n)
    return not any(blocks_cross(a, b) for a, b in itertools.combinations(blocks, 2))


@dataclass(frozen=True)
class NonCrossingPartition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        if not is_noncrossing(blocks, self.n):
            raise PartitionError(f"{self.render()} is crossing")

    def render(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def parse(cls, text: str) -> "NonCrossingPartition":
        text = text.strip()
        if text in ("{}", ""):
            return cls(0, ())
        if not (text.startswith("{") and text.endswith("}")):
            raise PartitionError(f"cannot parse partition {text!r}")
        blocks = [
            tuple(int(x) for x in inner.split(",") if x.strip())
            for inner in re.findall(r"\{([^{}]*)\}", text[1:-1])
        ]
        return cls(sum(map(len, blocks)), tuple(blocks))


@dataclass(frozen=True)
class CatalanPermutation:
    """sigma as a 1-based tuple: mapping[i - 1] == sigma(i)."""

    n: int
    mapping: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.mapping) != list(range(1, self.n + 1)):
            raise PartitionError(f"{self.mapping} is not a permutation of 1..{self.n}")
        if not is_noncrossing(self.orbits(), self.n):
            raise PartitionError(f"orbits of {self.mapping} cross")
        for orbit in self.orbits():
            if len(orbit) > 1 and any(self(a) != b for a, b in zip(orbit, orbit[1:] + orbit[:1])):
                raise PartitionError(f"orbit {orbit} is not cycled in increasing order")

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def orbits(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for i in range(1, self.n + 1):
            if i in seen:
                continue
            orbit = [i]
            seen.add(i)
            j = self.mapping[i - 1]
            while j != i:
                orbit.append(j)
                seen.add(j)
                j = self.mapping[j - 1]
            out.append(tuple(sorted(orbit)))
        return out

    def partition(self) -> NonCrossingPartition:
        return NonCrossingPartition(self.n, tuple(self.orbits()))

    def fixpoints(self) -> list[int]:
        return [i for i in range(1, self.n + 1) if self(i) == i]


def catalan_count(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return comb(2 * n, n) // (n + 1)


def _blocks_in(elements: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    # The block of the first element splits the rest into independent regions.
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for r in range(len(rest) + 1):
        for chosen in itertools.combinations(range(len(rest)), r):
            block = (first,) + tuple(rest[i] for i in chosen)
            cuts = list(chosen) + [len(rest)]
            regions = []
            prev = 0
            for c in cuts:
                regions.append(rest[prev:c])
                prev = c + 1
            for parts in itertools.product(*(list(_blocks_in(reg)) for reg in regions)):
                yield [block] + [b for part in parts for b in part]


def enumerate_noncrossing(n: int) -> Iterator[NonCrossingPartition]:
    """Every non-crossing partition of {1..n} exactly once, in a fixed order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    for blocks in _blocks_in(tuple(range(1, n + 1))):
        yield NonCrossingPartition(n, tuple(blocks))


def permutation_from_partition(p: NonCrossingPartition) -> CatalanPermutation:
    mapping = [0] * p.n
    for block in p.blocks:
        for a, b in zip(block, block[1:] + block[:1]):
            mapping[a - 1] = b
    return CatalanPermutation(p.n, tuple(mapping))
