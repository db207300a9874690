"""Brute-force solving over a finite box, and progression fitting for empirical answers."""

from __future__ import annotations

import math
import random
from collections import deque
from typing import Sequence

from expeq.lattice import lattice_basis
from expeq.semilinear import ZLinearSet, ZSemilinearSet
from expeq.solvers.equation import ExponentialEquation

Box = Sequence[tuple[int, int]]

DEFAULT_VOLUME_LIMIT = 10**7


class BoxTooLarge(ValueError):
    def __init__(self, volume: int, limit: int):
        super().__init__(f"box holds {volume} points, above the limit of {limit}")
        self.volume = volume
        self.limit = limit


def box_volume(box: Box) -> int:
    return math.prod(max(0, hi - lo + 1) for lo, hi in box)


def default_box(n: int, radius: int = 5) -> list[tuple[int, int]]:
    return [(-radius, radius)] * n


def solve_bounded(eq: ExponentialEquation, box: Box, limit: int = DEFAULT_VOLUME_LIMIT) -> list[tuple[int, ...]]:
    """Every exponent tuple in ``box`` that solves ``eq``, in lexicographic order."""
    if len(box) != eq.n:
        raise ValueError(f"box has {len(box)} intervals for {eq.n} variables")
    volume = box_volume(box)
    if volume > limit:
        raise BoxTooLarge(volume, limit)
    G = eq.group
    powers = []
    for g, (lo, hi) in zip(eq.bases, box):
        row = []
        x = G.pow(g, lo)
        for _ in range(lo, hi + 1):
            row.append(x)
            x = G.mul(x, g)
        powers.append(row)
    n = eq.n
    out: list[tuple[int, ...]] = []
    xs = [0] * n

    def walk(i: int, acc):
        if i == n:
            if G.is_identity(acc):
                out.append(tuple(xs))
            return
        acc = G.mul(acc, eq.coefficients[i])
        lo = box[i][0]
        for k, p in enumerate(powers[i]):
            xs[i] = lo + k
            walk(i + 1, G.mul(acc, p))

    walk(0, G.identity)
    return out


def _in_box(p, box: Box) -> bool:
    return all(lo <= x <= hi for x, (lo, hi) in zip(p, box))


def _span_in_box(base, periods, box: Box) -> set[tuple[int, ...]]:
    """Lattice points of base + span(periods) reachable inside the box by unit steps."""
    seen = {tuple(base)}
    todo = deque(seen)
    steps = [tuple(v) for v in periods] + [tuple(-x for x in v) for v in periods]
    while todo:
        p = todo.popleft()
        for v in steps:
            q = tuple(a + b for a, b in zip(p, v))
            if q not in seen and _in_box(q, box):
                seen.add(q)
                todo.append(q)
    return seen


def _line_count(base, v, box: Box) -> int:
    count = 0
    for t in range(-2 * _width(box) - 1, 2 * _width(box) + 2):
        if _in_box([b + t * x for b, x in zip(base, v)], box):
            count += 1
    return count


def _width(box: Box) -> int:
    return max((hi - lo for lo, hi in box), default=0)


def _rank(vectors, n: int) -> int:
    return len(lattice_basis(vectors, n)) if vectors else 0


def _normalize_direction(v):
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def _fit(points: list[tuple[int, ...]], box: Box) -> list[tuple[ZLinearSet, set]]:
    n = len(box)
    pts = sorted(set(points))
    members = set(pts)
    covered: set = set()
    fitted = []
    for p in pts:
        if p in covered:
            continue
        dirs = sorted(
            {_normalize_direction(tuple(a - b for a, b in zip(q, p))) for q in pts if q != p},
            key=lambda v: (max(map(abs, v)), v),
        )
        periods: list[tuple[int, ...]] = []
        span = {p}
        for v in dirs:
            if len(periods) == n:
                break
            if _rank(periods + [v], n) == len(periods):
                continue
            if _line_count(p, v, box) < 3:
                continue
            trial = _span_in_box(p, periods + [v], box)
            if trial <= members:
                periods.append(v)
                span = trial
        fitted.append((ZLinearSet(n, p, tuple(periods)), span))
        covered |= span
    return fitted


def _extrapolated_ok(eq: ExponentialEquation, piece: ZLinearSet, box: Box, rng: random.Random,
                     samples: int) -> bool:
    d = len(piece.periods)
    if d == 0:
        return eq.is_solution(piece.base)
    reach = 3 * max(1, max(max(abs(lo), abs(hi)) for lo, hi in box))
    params = []
    for i in range(d):
        for t in (-reach, reach):
            params.append(tuple(t if j == i else 0 for j in range(d)))
    for _ in range(samples):
        params.append(tuple(rng.randint(-reach, reach) for _ in range(d)))
    return all(eq.is_solution(piece.point(t)) for t in params)


def detect_progressions(eq: ExponentialEquation, points: Sequence[Sequence[int]], box: Box,
                        seed: int = 0, samples: int = 20) -> tuple[ZSemilinearSet, bool]:
    """Fit a semilinear candidate through the box solutions and test it beyond the box.

    Points are clustered greedily in lexicographic order; a direction joins a
    piece only if it keeps at least three box points on its line and every
    box point of the enlarged span is a solution.
    """
    n = eq.n
    points = [tuple(int(x) for x in p) for p in points]
    if not points:
        return ZSemilinearSet.empty(n), True
    rng = random.Random(seed)
    fitted = _fit(points, box)
    pieces = tuple(piece for piece, _ in fitted)
    verified = all(_extrapolated_ok(eq, piece, box, rng, samples) for piece in pieces)
    return ZSemilinearSet(n, pieces), verified
