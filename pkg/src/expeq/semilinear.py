"""Z-linear and Z-semilinear subsets of Z^n.

A Z-linear set is ``{base + A z : z in Z^d}``; a Z-semilinear set is a finite
union of those.  Membership and intersection are decided exactly through the
column echelon form of the period matrix, never by search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from expeq.lattice import ColumnEchelon, Vector, column_echelon, lattice_basis, solve_system


class DimensionError(ValueError):
    pass


def _vec(v: Iterable[int]) -> Vector:
    return tuple(int(x) for x in v)


@dataclass(frozen=True)
class ZLinearSet:
    dimension: int
    base: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base", _vec(self.base))
        object.__setattr__(self, "periods", tuple(_vec(p) for p in self.periods))
        if len(self.base) != self.dimension:
            raise DimensionError(f"base has length {len(self.base)}, expected {self.dimension}")
        for p in self.periods:
            if len(p) != self.dimension:
                raise DimensionError(f"period {p} has length {len(p)}, expected {self.dimension}")

    @cached_property
    def _echelon(self) -> ColumnEchelon:
        return column_echelon(self.periods, self.dimension)

    def contains(self, point: Sequence[int]) -> bool:
        if len(point) != self.dimension:
            raise DimensionError(f"point of length {len(point)} in dimension {self.dimension}")
        return self._echelon.contains([p - b for p, b in zip(point, self.base)])

    def parameters_for(self, point: Sequence[int]) -> Vector | None:
        """Integer parameters z with base + A z == point, if any."""
        return self._echelon.solve([p - b for p, b in zip(point, self.base)])

    def point(self, params: Sequence[int]) -> Vector:
        out = list(self.base)
        for t, per in zip(params, self.periods):
            if t:
                for i, v in enumerate(per):
                    out[i] += t * v
        return tuple(out)

    def reduced(self) -> "ZLinearSet":
        """Same set with the periods replaced by a lattice basis."""
        basis = lattice_basis(self.periods, self.dimension)
        return ZLinearSet(self.dimension, self.base, tuple(basis))

    def issubset(self, other: "ZLinearSet") -> bool:
        return other.contains(self.base) and all(
            other._echelon.contains(p) for p in self.periods
        )

    def render(self) -> str:
        out = "base (" + ",".join(map(str, self.base)) + ")"
        for p in self.periods:
            out += " + Z*(" + ",".join(map(str, p)) + ")"
        return out

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class ZSemilinearSet:
    dimension: int
    pieces: tuple[ZLinearSet, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        for piece in self.pieces:
            if piece.dimension != self.dimension:
                raise DimensionError(
                    f"piece of dimension {piece.dimension} in a set of dimension {self.dimension}"
                )

    @classmethod
    def empty(cls, dimension: int) -> "ZSemilinearSet":
        return cls(dimension, ())

    @classmethod
    def full(cls, dimension: int) -> "ZSemilinearSet":
        unit = [tuple(int(i == j) for j in range(dimension)) for i in range(dimension)]
        return cls(dimension, (ZLinearSet(dimension, (0,) * dimension, tuple(unit)),))

    @classmethod
    def linear(cls, base: Sequence[int], periods: Sequence[Sequence[int]] = ()) -> "ZSemilinearSet":
        return cls(len(base), (ZLinearSet(len(base), tuple(base), tuple(map(tuple, periods))),))

    @classmethod
    def point(cls, p: Sequence[int]) -> "ZSemilinearSet":
        return cls.linear(p)

    def is_empty(self) -> bool:
        return not self.pieces

    def __iter__(self) -> Iterator[ZLinearSet]:
        return iter(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def __contains__(self, point) -> bool:
        return contains(self, point)

    def render(self) -> str:
        if not self.pieces:
            return "EMPTY"
        return "\n".join(p.render() for p in self.pieces)

    def __str__(self) -> str:
        return self.render()

    def simplified(self) -> "ZSemilinearSet":
        """Drop duplicate pieces and pieces contained in a single other piece."""
        reduced = []
        seen = set()
        for p in self.pieces:
            r = p.reduced()
            key = (r.base, r.periods)
            if key not in seen:
                seen.add(key)
                reduced.append(r)
        kept: list[ZLinearSet] = []
        for i, p in enumerate(reduced):
            dominated = False
            for j, q in enumerate(reduced):
                if i == j or not p.issubset(q):
                    continue
                # among mutually contained pieces keep the earliest one
                if not q.issubset(p) or j < i:
                    dominated = True
                    break
            if not dominated:
                kept.append(p)
        return ZSemilinearSet(self.dimension, tuple(kept))

    def merged_cosets(self) -> "ZSemilinearSet":
        """Fuse translates of one lattice L whose bases form a subgroup modulo L.

        Such a family is exactly one coset of the coarser lattice spanned by L
        and the base differences, so membership is unchanged.
        """
        families: list[list[ZLinearSet]] = []
        for p in self.pieces:
            for fam in families:
                q = fam[0]
                if p.issubset(ZLinearSet(q.dimension, p.base, q.periods)) and \
                        q.issubset(ZLinearSet(p.dimension, q.base, p.periods)):
                    if not any(r.contains(p.base) for r in fam):
                        fam.append(p)
                    break
            else:
                families.append([p])
        out = []
        for fam in families:
            b0 = fam[0].base
            diffs = [tuple(x - y for x, y in zip(r.base, b0)) for r in fam]
            closed = all(
                any(r.contains(tuple(b + u + v for b, u, v in zip(b0, d, e))) for r in fam)
                for d in diffs for e in diffs
            )
            if len(fam) > 1 and closed:
                merged = ZLinearSet(self.dimension, b0, fam[0].periods + tuple(diffs[1:]))
                out.append(merged.reduced())
            else:
                out.extend(fam)
        return ZSemilinearSet(self.dimension, tuple(out))


@dataclass(frozen=True)
class DifferenceNormalForm:
    """Union over terms of (positive minus subtracted)."""

    dimension: int
    terms: tuple[tuple[ZSemilinearSet, ZSemilinearSet], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(tuple(t) for t in self.terms))
        for pos, sub in self.terms:
            if pos.dimension != self.dimension or sub.dimension != self.dimension:
                raise DimensionError("all terms must share the dimension of the form")

    def __contains__(self, point) -> bool:
        return contains_dnf(self, point)

    def render(self) -> str:
        if not self.terms:
            return "EMPTY"
        blocks = []
        for pos, sub in self.terms:
            blocks.append("TERM\n" + pos.render() + "\nMINUS\n" + sub.render())
        return "\n".join(blocks)


def _check_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} vs {b}")


def contains(s: ZSemilinearSet, point: Sequence[int]) -> bool:
    _check_dim(len(point), s.dimension)
    return any(piece.contains(point) for piece in s.pieces)


def union(s: ZSemilinearSet, t: ZSemilinearSet) -> ZSemilinearSet:
    _check_dim(s.dimension, t.dimension)
    return ZSemilinearSet(s.dimension, s.pieces + t.pieces)


def union_all(dimension: int, sets: Iterable[ZSemilinearSet]) -> ZSemilinearSet:
    pieces: list[ZLinearSet] = []
    for s in sets:
        _check_dim(s.dimension, dimension)
        pieces.extend(s.pieces)
    return ZSemilinearSet(dimension, tuple(pieces))


def _concat_pieces(p: ZLinearSet, q: ZLinearSet) -> ZLinearSet:
    zs, zt = (0,) * p.dimension, (0,) * q.dimension
    periods = tuple(v + zt for v in p.periods) + tuple(zs + v for v in q.periods)
    return ZLinearSet(p.dimension + q.dimension, p.base + q.base, periods)


def concat(s: ZSemilinearSet, t: ZSemilinearSet) -> ZSemilinearSet:
    pieces = tuple(_concat_pieces(p, q) for p in s.pieces for q in t.pieces)
    return ZSemilinearSet(s.dimension + t.dimension, pieces)


def _check_perm(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


def permute_vector(v: Sequence[int], perm: Sequence[int]) -> Vector:
    """Move coordinate i of ``v`` to position perm[i]."""
    out = [0] * len(v)
    for i, x in enumerate(v):
        out[perm[i]] = x
    return tuple(out)


def reorder(s: ZSemilinearSet, perm: Sequence[int]) -> ZSemilinearSet:
    """Relabel coordinates: coordinate i of every point moves to perm[i].

    Composition is a left action: reorder(s, p o q) == reorder(reorder(s, q), p)
    where (p o q)[i] == p[q[i]].
    """
    perm = _check_perm(perm, s.dimension)
    pieces = tuple(
        ZLinearSet(
            s.dimension,
            permute_vector(p.base, perm),
            tuple(permute_vector(v, perm) for v in p.periods),
        )
        for p in s.pieces
    )
    return ZSemilinearSet(s.dimension, pieces)


def _intersect_pieces(p: ZLinearSet, q: ZLinearSet) -> ZLinearSet | None:
    # base_p + A z = base_q + B w   <=>   [A | -B] (z, w) = base_q - base_p
    cols = list(p.periods) + [tuple(-x for x in v) for v in q.periods]
    rhs = [b - a for a, b in zip(p.base, q.base)]
    sol = solve_system(cols, rhs)
    if sol is None:
        return None
    particular, kernel = sol
    d = len(p.periods)
    base = p.point(particular[:d])
    periods = []
    for k in kernel:
        v = [0] * p.dimension
        for t, per in zip(k[:d], p.periods):
            for i, x in enumerate(per):
                v[i] += t * x
        if any(v):
            periods.append(tuple(v))
    return ZLinearSet(p.dimension, base, tuple(lattice_basis(periods, p.dimension)))


def intersect(s: ZSemilinearSet, t: ZSemilinearSet) -> ZSemilinearSet:
    _check_dim(s.dimension, t.dimension)
    pieces = []
    for p in s.pieces:
        for q in t.pieces:
            r = _intersect_pieces(p, q)
            if r is not None:
                pieces.append(r)
    return ZSemilinearSet(s.dimension, tuple(pieces))


def contains_dnf(form: DifferenceNormalForm, point: Sequence[int]) -> bool:
    _check_dim(len(point), form.dimension)
    return any(contains(pos, point) and not contains(sub, point) for pos, sub in form.terms)


def box_points(box: Sequence[tuple[int, int]]) -> Iterator[Vector]:
    return itertools.product(*(range(lo, hi + 1) for lo, hi in box))


def equal_on_box(s: ZSemilinearSet, t: ZSemilinearSet, box: Sequence[tuple[int, int]]) -> bool:
    _check_dim(s.dimension, t.dimension)
    _check_dim(len(box), s.dimension)
    return all(contains(s, p) == contains(t, p) for p in box_points(box))


def members_in_box(s: ZSemilinearSet, box: Sequence[tuple[int, int]]) -> set[Vector]:
    return {p for p in box_points(box) if contains(s, p)}


# --- nonnegative members -------------------------------------------------


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Witness:
    point: Vector


@dataclass(frozen=True)
class Unknown:
    bound: int


def _real_feasible(rows: list[list[Fraction]], rhs: list[Fraction]) -> bool:
    """Fourier-Motzkin test for {z real : rows . z >= rhs} being nonempty."""
    cons = [(list(r), b) for r, b in zip(rows, rhs)]
    nvars = len(rows[0]) if rows else 0
    for var in range(nvars):
        pos, neg, rest = [], [], []
        for r, b in cons:
            if r[var] > 0:
                pos.append((r, b))
            elif r[var] < 0:
                neg.append((r, b))
            else:
                rest.append((r, b))
        new = rest
        for rp, bp in pos:
            for rn, bn in neg:
                cp, cn = rp[var], -rn[var]
                new.append(([cn * x + cp * y for x, y in zip(rp, rn)], cn * bp + cp * bn))
        cons = new
    return all(b <= 0 for _, b in cons)


def natural_witness(s: ZSemilinearSet, bound: int = 10) -> Empty | Witness | Unknown:
    """Look for a member of ``s`` with every coordinate >= 0.

    Parameters are searched in the box |z_i| <= bound (smallest max-norm
    first).  A piece is ruled out only when even its real relaxation has no
    nonnegative point, so ``Empty`` is a proof and ``Unknown`` is honest.
    """
    undecided = False
    for piece in s.pieces:
        piece = piece.reduced()
        d = len(piece.periods)
        found = None
        for radius in range(bound + 1):
            for z in itertools.product(range(-radius, radius + 1), repeat=d):
                if d and max(map(abs, z)) != radius:
                    continue
                p = piece.point(z)
                if all(x >= 0 for x in p):
                    found = p
                    break
            if found is not None or d == 0:
                break
        if found is not None:
            return Witness(found)
        rows = [[Fraction(v[i]) for v in piece.periods] for i in range(piece.dimension)]
        rhs = [Fraction(-b) for b in piece.base]
        if d == 0:
            continue
        if _real_feasible(rows, rhs):
            undecided = True
    return Unknown(bound) if undecided else Empty()
