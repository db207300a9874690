"""Exact solvers over Z, finite groups and virtually cyclic groups."""

from __future__ import annotations

import itertools

from expeq.groups import (
    INFINITE,
    EllipticInFactor,
    FiniteGroup,
    FreeProduct,
    Group,
    IntegerGroup,
    Loxodromic,
    VirtuallyCyclicGroup,
)
from expeq.lattice import solve_system
from expeq.semilinear import ZLinearSet, ZSemilinearSet
from expeq.solvers.equation import ExponentialEquation


def _linear_row(weights, rhs: int) -> ZLinearSet | None:
    """Solutions of sum(w_i y_i) == rhs as one Z-linear set."""
    n = len(weights)
    sol = solve_system([(w,) for w in weights], (rhs,))
    if sol is None:
        return None
    particular, kernel = sol
    return ZLinearSet(n, particular, tuple(kernel)).reduced()


def solve_integer(eq: ExponentialEquation) -> ZSemilinearSet:
    if not isinstance(eq.group, IntegerGroup):
        raise TypeError("solve_integer needs an IntegerGroup equation")
    piece = _linear_row(eq.bases, -sum(eq.coefficients))
    if piece is None:
        return ZSemilinearSet.empty(eq.n)
    return ZSemilinearSet(eq.n, (piece,))


def solve_finite(eq: ExponentialEquation) -> ZSemilinearSet:
    G = eq.group
    if not isinstance(G, FiniteGroup):
        raise TypeError("solve_finite needs a FiniteGroup equation")
    n = eq.n
    orders = [G.order(g) for g in eq.bases]
    powers = [[G.pow(g, k) for k in range(d)] for g, d in zip(eq.bases, orders)]
    diag = tuple(tuple(d if i == j else 0 for j in range(n)) for i, d in enumerate(orders))
    pieces = []

    def walk(i: int, acc, ks: list[int]):
        if i == n:
            if acc == G.identity:
                pieces.append(ZLinearSet(n, tuple(ks), diag))
            return
        acc = G.mul(acc, eq.coefficients[i])
        for k, p in enumerate(powers[i]):
            ks.append(k)
            walk(i + 1, G.mul(acc, p), ks)
            ks.pop()

    walk(0, G.identity, [])
    return ZSemilinearSet(n, tuple(pieces))


def solve_virtually_cyclic(eq: ExponentialEquation) -> ZSemilinearSet:
    """Residue split x_i = N y_i + k_i, then one linear equation per residue tuple."""
    G = eq.group
    if not isinstance(G, VirtuallyCyclicGroup):
        raise TypeError("solve_virtually_cyclic needs a VirtuallyCyclicGroup equation")
    n, N = eq.n, G.index
    # g_i^N = h^{s_i}
    shifts = [G.pow(g, N)[1] for g in eq.bases]
    small_powers = [[G.pow(g, k) for k in range(N)] for g in eq.bases]
    pieces = []
    for ks in itertools.product(range(N), repeat=n):
        prefix = G.identity
        signs = []
        for i in range(n):
            f = G.mul(prefix, eq.coefficients[i])
            signs.append(G.conj_sign(f))
            prefix = G.mul(f, small_powers[i][ks[i]])
        if not G.in_kernel(prefix):
            continue
        s = -prefix[1]
        solved = _linear_row([sg * sh for sg, sh in zip(signs, shifts)], s)
        if solved is None:
            continue
        base = tuple(N * y + k for y, k in zip(solved.base, ks))
        periods = tuple(tuple(N * v for v in p) for p in solved.periods)
        pieces.append(ZLinearSet(n, base, periods))
    return ZSemilinearSet(n, tuple(pieces)).merged_cosets()


def solve_leaf(eq: ExponentialEquation) -> ZSemilinearSet:
    G = eq.group
    if isinstance(G, IntegerGroup):
        return solve_integer(eq)
    if isinstance(G, FiniteGroup):
        return solve_finite(eq)
    if isinstance(G, VirtuallyCyclicGroup):
        return solve_virtually_cyclic(eq)
    raise TypeError(f"no leaf solver for {type(G).__name__}")


def _lox_log(G: FreeProduct, target, core) -> int | None:
    """m with core^m == target for a cyclically reduced core of length >= 2."""
    if not target:
        return 0
    m, r = divmod(len(target), len(core))
    if r:
        return None
    if core * m == target:
        return m
    if G.inv(core) * m == target:
        return -m
    return None


def solve_finitary(group: Group, a, g) -> ZSemilinearSet:
    """Solutions of a g^x = 1 in Z^1: a progression, a point, all of Z, or nothing."""
    d = group.order(g)
    target = group.inv(a)
    if d != INFINITE:
        x = group.identity
        for k in range(int(d)):
            if group.eq(x, target):
                return ZSemilinearSet.linear((k,), [(int(d),)])
            x = group.mul(x, g)
        return ZSemilinearSet.empty(1)
    if isinstance(group, (IntegerGroup, VirtuallyCyclicGroup)):
        return solve_leaf(ExponentialEquation(group, (a,), (g,)))
    if isinstance(group, FreeProduct):
        kind = group.classify(g)
        if isinstance(kind, EllipticInFactor):
            u = kind.conjugator
            inside = group.conj(target, u)
            if not inside:
                return ZSemilinearSet.point((0,))
            if len(inside) != 1 or inside[0][0] != kind.factor:
                return ZSemilinearSet.empty(1)
            factor = group.factors[kind.factor]
            return solve_finitary(factor, factor.inv(inside[0][1]), kind.image)
        assert isinstance(kind, Loxodromic)
        u, core = group.cyclic_normal_form(g)
        m = _lox_log(group, group.conj(target, u), core)
        return ZSemilinearSet.empty(1) if m is None else ZSemilinearSet.point((m,))
    raise TypeError(f"no finitary solver for {type(group).__name__}")


__all__ = [
    "solve_integer",
    "solve_finite",
    "solve_virtually_cyclic",
    "solve_leaf",
    "solve_finitary",
]
