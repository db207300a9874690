"""Exponential equations over free products of finite, Z and virtually cyclic factors.

Elliptic case
-------------
Every base g_i is conjugated into its factor, g_i = u_i w_i u_i^-1, and the
conjugators are folded into the neighbouring coefficients.  The coefficients
are then cut into syllables, each a constant position with exponent fixed to
one.  What remains is a cyclic word of factor elements

    p_1 p_2 ... p_M = 1

which holds exactly when the positions admit a non-crossing partition into
blocks, each inside one factor, whose products (in cyclic order) are trivial.
Connecting elements are all trivial here: no nontrivial factor element is a
product through the other factors.

Loxodromic case
---------------
Handled exactly only when all loxodromic bases are conjugate to powers of one
primitive cyclic word and the folded coefficients are powers of it as well;
the equation is then linear over Z.  Everything else goes to the bounded
solver (see ``oracle``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from expeq.catalan import CatalanPermutation, NonCrossingPartition, permutation_from_partition
from expeq.groups import ElementError, EllipticInFactor, FreeProduct, Loxodromic, Torsion
from expeq.semilinear import ZSemilinearSet, concat, reorder, union_all
from expeq.solvers.equation import ExponentialEquation
from expeq.solvers.leaf import _linear_row, solve_leaf


@dataclass(frozen=True)
class Position:
    """One letter of the folded word.

    ``factor`` is None only for a variable whose base is trivial.
    """

    factor: int | None
    element: Any
    variable: int | None = None

    @property
    def is_variable(self) -> bool:
        return self.variable is not None


@dataclass(frozen=True)
class FoldedEquation:
    equation: ExponentialEquation
    positions: tuple[Position, ...]
    conjugators: tuple  # u_i with g_i = u_i w_i u_i^-1


def fold(eq: ExponentialEquation) -> FoldedEquation:
    """Move every base into its factor and split coefficients into syllables."""
    G = eq.group
    if not isinstance(G, FreeProduct):
        raise TypeError("fold needs a FreeProduct equation")
    conj, cores = [], []
    for i, g in enumerate(eq.bases):
        kind = G.classify(g)
        if isinstance(kind, Loxodromic):
            raise ElementError(f"base {i + 1} ({G.format(g)}) is loxodromic")
        u, w = G.cyclic_normal_form(g)
        conj.append(u)
        cores.append(w)
    n = eq.n
    positions: list[Position] = []
    for i in range(n):
        prev = conj[i - 1]  # i == 0 wraps to the last conjugator
        coeff = G.mul(G.mul(G.inv(prev), eq.coefficients[i]), conj[i])
        positions.extend(Position(lam, x) for lam, x in coeff)
        w = cores[i]
        if w:
            positions.append(Position(w[0][0], w[0][1], i))
        else:
            positions.append(Position(None, None, i))
    return FoldedEquation(eq, tuple(positions), tuple(conj))


# --- block equations -------------------------------------------------------


@dataclass(frozen=True)
class BlockEquation:
    """Product of the block's letters, in order, equals 1 inside one factor."""

    factor: int | None
    positions: tuple[int, ...]
    variables: tuple[int, ...]
    equation: ExponentialEquation | None  # None when the block has no variable or a trivial base

    def render(self, G: FreeProduct, folded: FoldedEquation) -> str:
        eqn = folded.equation
        parts = []
        for p in self.positions:
            pos = folded.positions[p]
            if pos.factor is None:
                parts.append(f"1^{eqn.variables[pos.variable]}")
                continue
            text = G.factors[pos.factor].format(pos.element)
            if pos.is_variable:
                text = f"({text})^{eqn.variables[pos.variable]}"
            parts.append(text)
        where = "trivial" if self.factor is None else f"factor {self.factor + 1}"
        return f"[{where}] " + " * ".join(parts) + " = 1"


def _block_equation(G: FreeProduct, folded: FoldedEquation, block: Sequence[int]) -> BlockEquation:
    positions = folded.positions
    first = positions[block[0]]
    variables = tuple(positions[p].variable for p in block if positions[p].is_variable)
    if first.factor is None:
        return BlockEquation(None, tuple(block), variables, None)
    F = G.factors[first.factor]
    coeffs, bases = [], []
    pending = F.identity
    for p in block:
        pos = positions[p]
        if pos.is_variable:
            coeffs.append(pending)
            bases.append(pos.element)
            pending = F.identity
        else:
            pending = F.mul(pending, pos.element)
    if not bases:
        return BlockEquation(first.factor, tuple(block), (), None)
    # W c = 1  <=>  c W = 1
    coeffs[0] = F.mul(pending, coeffs[0])
    eq = ExponentialEquation(F, tuple(coeffs), tuple(bases))
    return BlockEquation(first.factor, tuple(block), variables, eq)


def _constant_product(G: FreeProduct, folded: FoldedEquation, block: Sequence[int]):
    F = G.factors[folded.positions[block[0]].factor]
    return F.prod(folded.positions[p].element for p in block)


class _BlockSolver:
    def __init__(self, folded: FoldedEquation):
        self.folded = folded
        self.G: FreeProduct = folded.equation.group
        self._cache: dict[tuple[int, ...], ZSemilinearSet] = {}

    def solve(self, block: tuple[int, ...]) -> ZSemilinearSet:
        """Solutions of one block over its own variables (in position order)."""
        hit = self._cache.get(block)
        if hit is not None:
            return hit
        be = _block_equation(self.G, self.folded, block)
        k = len(be.variables)
        if be.factor is None:
            out = ZSemilinearSet.full(k)
        elif be.equation is None:
            F = self.G.factors[be.factor]
            ok = F.is_identity(_constant_product(self.G, self.folded, block))
            out = ZSemilinearSet.full(0) if ok else ZSemilinearSet.empty(0)
        else:
            out = solve_leaf(be.equation)
        self._cache[block] = out
        return out


# --- associated systems ----------------------------------------------------


@dataclass(frozen=True)
class AssociatedSystem:
    """One (sigma, b) system: sigma is a Catalan permutation of the folded positions."""

    sigma: CatalanPermutation
    connecting: tuple  # all identity for free products
    blocks: tuple[BlockEquation, ...]
    gaps: tuple[BlockEquation, ...]
    folded: FoldedEquation = field(repr=False)

    def partition(self) -> NonCrossingPartition:
        return self.sigma.partition()

    def solution_set(self) -> ZSemilinearSet:
        solver = _BlockSolver(self.folded)
        n = self.folded.equation.n
        sets, order = [], []
        for b in self.blocks:
            sets.append(solver.solve(b.positions))
            order.extend(b.variables)
        for g in self.gaps:
            if solver.solve(g.positions).is_empty():
                return ZSemilinearSet.empty(n)
        out = ZSemilinearSet.full(0)
        for s in sets:
            out = concat(out, s)
        return reorder(out, order) if n else out

    def render(self) -> str:
        G = self.folded.equation.group
        lines = [f"sigma {self.partition().render()}"]
        lines += ["  (*)  " + b.render(G, self.folded) for b in self.blocks]
        lines += ["  (**) " + g.render(G, self.folded) for g in self.gaps]
        return "\n".join(lines)


def _consistent_partitions(folded: FoldedEquation, check_constants: bool) -> Iterator[list[tuple[int, ...]]]:
    """Non-crossing partitions of the positions whose blocks sit in one factor.

    Positions with a trivial base only appear as singletons; with
    ``check_constants`` blocks made of constants alone must multiply to 1.
    """
    G = folded.equation.group
    pos = folded.positions

    def blocks_in(idx: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if not idx:
            yield []
            return
        first, rest = idx[0], idx[1:]
        lam = pos[first].factor
        same = [j for j, p in enumerate(rest) if lam is not None and pos[p].factor == lam]
        for r in range(len(same) + 1):
            for chosen in itertools.combinations(same, r):
                block = (first,) + tuple(rest[j] for j in chosen)
                if check_constants and not any(pos[p].is_variable for p in block):
                    if not G.factors[lam].is_identity(_constant_product(G, folded, block)):
                        continue
                regions, prev = [], 0
                for c in list(chosen) + [len(rest)]:
                    regions.append(rest[prev:c])
                    prev = c + 1
                for parts in itertools.product(*(list(blocks_in(reg)) for reg in regions)):
                    yield [block] + [b for part in parts for b in part]

    yield from blocks_in(tuple(range(len(pos))))


def iter_associated_systems(eq: ExponentialEquation) -> Iterator[AssociatedSystem]:
    folded = fold(eq)
    G: FreeProduct = eq.group
    M = len(folded.positions)
    for blocks in _consistent_partitions(folded, check_constants=True):
        ncp = NonCrossingPartition(M, tuple(tuple(p + 1 for p in b) for b in blocks))
        sigma = permutation_from_partition(ncp)
        eqs, gaps = [], []
        for b in sorted(blocks):
            be = _block_equation(G, folded, b)
            (eqs if be.variables else gaps).append(be)
        yield AssociatedSystem(sigma, (G.identity,) * M, tuple(eqs), tuple(gaps), folded)


def reduce_elliptic(eq: ExponentialEquation) -> list[AssociatedSystem]:
    """All surviving associated systems; systems with a failing (**) identity are dropped."""
    return list(iter_associated_systems(eq))


# --- exact solution set for the elliptic case ------------------------------


class _IntervalSolver:
    """Solution sets of contiguous stretches of the folded word that multiply to 1."""

    def __init__(self, folded: FoldedEquation):
        self.folded = folded
        self.pos = folded.positions
        self.blocks = _BlockSolver(folded)
        self.memo: dict[tuple[int, int], ZSemilinearSet] = {}
        self.var_count = [0]
        for p in self.pos:
            self.var_count.append(self.var_count[-1] + int(p.is_variable))

    def nvars(self, lo: int, hi: int) -> int:
        return self.var_count[hi] - self.var_count[lo]

    def solve(self, lo: int, hi: int) -> ZSemilinearSet:
        key = (lo, hi)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = self._solve(lo, hi)
        self.memo[key] = out
        return out

    def _solve(self, lo: int, hi: int) -> ZSemilinearSet:
        if lo == hi:
            return ZSemilinearSet.full(0)
        first = self.pos[lo]
        k = self.nvars(lo, hi)
        if first.factor is None:
            return concat(ZSemilinearSet.full(1), self.solve(lo + 1, hi))
        results = []

        def extend(block: list[int], stretches: list[tuple[int, int]]):
            last = block[-1]
            tail = self.solve(last + 1, hi)
            if not tail.is_empty():
                results.append(self._combine(tuple(block), stretches + [(last + 1, hi)], lo, hi))
            for j in range(last + 1, hi):
                if self.pos[j].factor != first.factor:
                    continue
                if self.solve(last + 1, j).is_empty():
                    continue
                extend(block + [j], stretches + [(last + 1, j)])

        extend([lo], [])
        return union_all(k, [r for r in results if not r.is_empty()]).simplified()

    def _combine(self, block: tuple[int, ...], stretches, lo: int, hi: int) -> ZSemilinearSet:
        block_set = self.blocks.solve(block)
        if block_set.is_empty():
            return ZSemilinearSet.empty(self.nvars(lo, hi))
        out = block_set
        order = [p for p in block if self.pos[p].is_variable]
        for a, b in stretches:
            out = concat(out, self.solve(a, b))
            order.extend(p for p in range(a, b) if self.pos[p].is_variable)
        rank = {p: i for i, p in enumerate(sorted(order))}
        return reorder(out, [rank[p] for p in order])


def solve_elliptic(eq: ExponentialEquation) -> ZSemilinearSet:
    folded = fold(eq)
    return _IntervalSolver(folded).solve(0, len(folded.positions))


# --- exact loxodromic sub-case ---------------------------------------------


def _rotation_conjugator(G: FreeProduct, rho, target):
    """v with target == v^-1 rho v, when target is a syllable rotation of rho."""
    n = len(rho)
    if len(target) != n:
        return None
    for j in range(n):
        if rho[j:] + rho[:j] == target:
            return rho[:j]
    return None


@dataclass(frozen=True)
class CommonRoot:
    root: tuple  # cyclically reduced primitive word
    exponents: tuple[int, ...]  # g_i = v_i root^e_i v_i^-1 on the loxodromic slots
    offsets: tuple[int, ...]  # folded coefficients are root^offset
    loxodromic: tuple[int, ...]
    elliptic: tuple[int, ...]


def common_root(eq: ExponentialEquation) -> CommonRoot | None:
    """Detect the exact loxodromic sub-case; None when it does not apply.

    Requires every base to be trivial or loxodromic, all loxodromic bases to be
    conjugate to powers of one primitive cyclic word, and every folded
    coefficient to be a power of that word.
    """
    G = eq.group
    if not isinstance(G, FreeProduct):
        return None
    lox, triv = [], []
    for i, g in enumerate(eq.bases):
        if not g:
            triv.append(i)
        elif isinstance(G.classify(g), Loxodromic):
            lox.append(i)
        else:
            return None
    if not lox:
        return None
    # drop trivial-base slots by pushing their coefficients into the next slot
    coeffs, bases = [], []
    carry = G.identity
    for i in range(eq.n):
        a = G.mul(carry, eq.coefficients[i])
        if i in triv:
            carry = a
            continue
        coeffs.append(a)
        bases.append(eq.bases[i])
        carry = G.identity
    coeffs[0] = G.mul(carry, coeffs[0])

    u0, w0 = G.cyclic_normal_form(bases[0])
    p = next(p for p in range(1, len(w0) + 1) if len(w0) % p == 0 and w0[:p] * (len(w0) // p) == w0)
    rho = w0[:p]
    rho_inv = G.inv(rho)
    conj, exps = [], []
    for g in bases:
        u, w = G.cyclic_normal_form(g)
        if len(w) % len(rho):
            return None
        k = len(w) // len(rho)
        core = w[: len(rho)]
        if core * k != w:
            return None
        v = _rotation_conjugator(G, rho, core)
        sign = 1
        if v is None:
            v = _rotation_conjugator(G, rho_inv, core)
            sign = -1
        if v is None:
            return None
        # core = v^-1 rho^sign v, so g = (u v^-1) rho^(sign k) (u v^-1)^-1
        conj.append(G.mul(u, G.inv(v)))
        exps.append(sign * k)
    offsets = []
    m = len(bases)
    for i in range(m):
        c = G.mul(G.mul(G.inv(conj[i - 1]), coeffs[i]), conj[i])
        if not c:
            offsets.append(0)
            continue
        q, r = divmod(len(c), len(rho))
        if r:
            return None
        if rho * q == c:
            offsets.append(q)
        elif rho_inv * q == c:
            offsets.append(-q)
        else:
            return None
    return CommonRoot(rho, tuple(exps), tuple(offsets), tuple(lox), tuple(triv))


def solve_common_root(eq: ExponentialEquation, cr: CommonRoot) -> ZSemilinearSet:
    """Solutions over the loxodromic slots only: sum(e_i x_i) = -sum(offsets)."""
    piece = _linear_row(cr.exponents, -sum(cr.offsets))
    k = len(cr.loxodromic)
    if piece is None:
        return ZSemilinearSet.empty(k)
    return ZSemilinearSet(k, (piece,))


# --- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    solution: tuple[int, ...]
    pairing: NonCrossingPartition
    position_partition: NonCrossingPartition
    block_checks: tuple[str, ...]
    gap_checks: tuple[str, ...]
    isolated: tuple[int, ...]

    def permutation(self) -> CatalanPermutation:
        return permutation_from_partition(self.pairing)

    def passes(self) -> bool:
        sigma = self.permutation()
        return all(sigma(i) == i for i in self.isolated)

    def render(self) -> str:
        lines = [
            "solution (" + ",".join(map(str, self.solution)) + ")",
            "pairing " + self.pairing.render(),
        ]
        lines += ["block " + c for c in self.block_checks]
        lines += ["gap " + c for c in self.gap_checks]
        return "\n".join(lines)


class NotASolution(ValueError):
    def __init__(self, normal_form: str):
        super().__init__(f"not a solution; substituted word reduces to {normal_form}")
        self.normal_form = normal_form


def extract_certificate(eq: ExponentialEquation, solution: Sequence[int]) -> Certificate:
    """Replay the cancellation of the substituted word as a non-crossing pairing."""
    G: FreeProduct = eq.group
    solution = tuple(int(x) for x in solution)
    value = eq.evaluate(solution)
    if not G.is_identity(value):
        raise NotASolution(G.format(value))
    folded = fold(eq)
    pos = folded.positions
    letters = []
    for p in pos:
        if p.factor is None:
            letters.append(None)
        elif p.is_variable:
            letters.append(G.factors[p.factor].pow(p.element, solution[p.variable]))
        else:
            letters.append(p.element)

    memo: dict[tuple[int, int], list[tuple[int, ...]] | None] = {}

    def trivial(lo: int, hi: int) -> list[tuple[int, ...]] | None:
        key = (lo, hi)
        if key not in memo:
            memo[key] = _find(lo, hi)
        return memo[key]

    def _find(lo: int, hi: int):
        if lo == hi:
            return []
        lam = pos[lo].factor
        if lam is None or G.factors[lam].is_identity(letters[lo]):
            rest = trivial(lo + 1, hi)
            if rest is not None:
                return [(lo,)] + rest
            if lam is None:
                return None
        F = G.factors[lam]

        def grow(block: list[int], acc, parts: list):
            last = block[-1]
            if len(block) > 1 and F.is_identity(acc):
                rest = trivial(last + 1, hi)
                if rest is not None:
                    return [tuple(block)] + parts + rest
            for j in range(last + 1, hi):
                if pos[j].factor != lam:
                    continue
                inner = trivial(last + 1, j)
                if inner is None:
                    continue
                found = grow(block + [j], F.mul(acc, letters[j]), parts + inner)
                if found is not None:
                    return found
            return None

        return grow([lo], letters[lo], [])

    blocks = trivial(0, len(pos))
    if blocks is None:
        raise AssertionError("solution verified but no non-crossing cancellation found")
    n = eq.n
    pairing, block_checks, gap_checks, isolated = [], [], [], []
    for b in sorted(blocks):
        vars_ = tuple(pos[p].variable for p in b if pos[p].is_variable)
        be = _block_equation(G, folded, b)
        text = be.render(G, folded)
        if vars_:
            pairing.append(tuple(v + 1 for v in vars_))
            block_checks.append(text)
            if len(vars_) == 1:
                isolated.append(vars_[0] + 1)
        else:
            gap_checks.append(text)
    M = len(pos)
    return Certificate(
        solution=solution,
        pairing=NonCrossingPartition(n, tuple(pairing)),
        position_partition=NonCrossingPartition(M, tuple(tuple(p + 1 for p in b) for b in blocks)),
        block_checks=tuple(block_checks),
        gap_checks=tuple(gap_checks),
        isolated=tuple(isolated),
    )


def is_elliptic_equation(eq: ExponentialEquation) -> bool:
    G = eq.group
    return isinstance(G, FreeProduct) and all(
        isinstance(G.classify(g), (EllipticInFactor, Torsion)) for g in eq.bases
    )
