from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from expeq.groups import FiniteGroup, FreeProduct, IntegerGroup, VirtuallyCyclicGroup
from expeq.semilinear import ZSemilinearSet, concat, contains, reorder, union_all
from expeq.solvers.equation import ExponentialEquation
from expeq.solvers.freeprod import common_root, is_elliptic_equation, solve_common_root, solve_elliptic
from expeq.solvers.leaf import solve_leaf
from expeq.solvers.oracle import Box, default_box, detect_progressions, solve_bounded


@dataclass(frozen=True)
class Exact:
    """set == union of reorder(N_i (+) M_i, permutation) over the decomposition.

    N_i lives on the loxodromic coordinates and M_i on the elliptic ones;
    ``permutation[j]`` is the original index of concatenated coordinate j.
    """

    set: ZSemilinearSet
    decomposition: tuple[tuple[ZSemilinearSet, ZSemilinearSet], ...]
    permutation: tuple[int, ...]
    loxodromic: tuple[int, ...] = ()
    elliptic: tuple[int, ...] = ()

    def recompose(self) -> ZSemilinearSet:
        n = self.set.dimension
        parts = [reorder(concat(N, M), self.permutation) for N, M in self.decomposition]
        return union_all(n, parts)

    def render(self) -> str:
        lines = ["EXACT", self.set.render(), "DECOMPOSITION"]
        lox = ",".join(str(i + 1) for i in self.loxodromic)
        ell = ",".join(str(i + 1) for i in self.elliptic)
        lines.append(f"loxodromic=[{lox}] elliptic=[{ell}]")
        for i, (N, M) in enumerate(self.decomposition, 1):
            lines.append(f"N{i}: " + N.render().replace("\n", " | "))
            lines.append(f"M{i}: " + M.render().replace("\n", " | "))
        return "\n".join(lines)


@dataclass(frozen=True)
class Empirical:
    box: tuple[tuple[int, int], ...]
    box_solutions: tuple[tuple[int, ...], ...]
    candidate: ZSemilinearSet
    sampled_verified: bool
    reason: str = field(default="")

    def render(self) -> str:
        box = ",".join(f"{lo}:{hi}" for lo, hi in self.box)
        head = f"EMPIRICAL box={box} verified={'true' if self.sampled_verified else 'false'}"
        return head + "\n" + self.candidate.render()


SolveResult = Exact | Empirical


def _elliptic_result(s: ZSemilinearSet) -> Exact:
    n = s.dimension
    point0 = ZSemilinearSet.full(0)
    decomposition = tuple((point0, ZSemilinearSet(n, (p,))) for p in s.pieces)
    return Exact(s, decomposition, tuple(range(n)), (), tuple(range(n)))


def solve(eq: ExponentialEquation, box: Box | None = None, seed: int = 0,
          allow_empirical: bool = True) -> SolveResult:
    G = eq.group
    if isinstance(G, (FiniteGroup, IntegerGroup, VirtuallyCyclicGroup)):
        return _elliptic_result(solve_leaf(eq))
    if not isinstance(G, FreeProduct):
        raise TypeError(f"unsupported group backend {type(G).__name__}")
    if is_elliptic_equation(eq):
        return _elliptic_result(solve_elliptic(eq))
    cr = common_root(eq)
    if cr is not None:
        N = solve_common_root(eq, cr)
        M = ZSemilinearSet.full(len(cr.elliptic))
        perm = cr.loxodromic + cr.elliptic
        s = reorder(concat(N, M), perm)
        return Exact(s, ((N, M),), perm, cr.loxodromic, cr.elliptic)
    reason = "loxodromic bases outside the common-root case"
    box = tuple(box) if box is not None else tuple(default_box(eq.n))
    if not allow_empirical:
        return Empirical(box, (), ZSemilinearSet.empty(eq.n), False, reason)
    points = solve_bounded(eq, box)
    candidate, verified = detect_progressions(eq, points, box, seed=seed)
    return Empirical(box, tuple(points), candidate, verified, reason)


def check_decomposition(result: Exact, points: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Points where the decomposition and the set disagree."""
    recomposed = result.recompose()
    return [tuple(p) for p in points if contains(result.set, p) != contains(recomposed, p)]


def sample_piece_soundness(eq: ExponentialEquation, s: ZSemilinearSet, samples: int = 100,
                           radius: int = 15, seed: int = 0) -> list[tuple[int, ...]]:
    """Random members of each piece that fail to solve ``eq`` (expected: none)."""
    rng = random.Random(seed)
    bad = []
    for piece in s.pieces:
        for _ in range(samples):
            z = [rng.randint(-radius, radius) for _ in piece.periods]
            p = piece.point(z)
            if not eq.is_solution(p):
                bad.append(p)
    return bad
