"""Group backends with exact arithmetic.

Elements are plain hashable Python values and every operation goes through
the owning group object:

* ``FiniteGroup``: an index into the multiplication table;
* ``IntegerGroup``: the exponent m of h^m;
* ``VirtuallyCyclicGroup``: a pair (q, m) standing for t_q h^m, multiplied by
  (q1, m1)(q2, m2) = (q1 q2, c(q1, q2) + eps(q2) m1 + m2);
* ``FreeProduct``: a tuple of syllables (factor index, factor element) in
  normal form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

INFINITE = math.inf


class InvalidGroupSpec(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class ElementError(ValueError):
    pass


class Group:
    name: str = "G"
    validated: bool = False

    identity: Any

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def violations(self) -> list[str]:
        return []

    def _finish_init(self, validate: bool) -> None:
        if validate:
            bad = self.violations()
            if bad:
                raise InvalidGroupSpec(bad)
            self.validated = True

    def is_identity(self, x) -> bool:
        return x == self.identity

    def eq(self, x, y) -> bool:
        return x == y

    def pow(self, x, k: int):
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, x)
            k >>= 1
            if k:
                x = self.mul(x, x)
        return result

    def prod(self, xs) -> Any:
        out = self.identity
        for x in xs:
            out = self.mul(out, x)
        return out

    def conj(self, x, u):
        """u^-1 x u."""
        return self.mul(self.mul(self.inv(u), x), u)

    def order(self, x) -> int | float:
        raise NotImplementedError

    def check(self, x) -> None:
        if not self.contains(x):
            raise ElementError(f"{x!r} is not an element of {self.name}")

    def format(self, x) -> str:
        return repr(x)


def validate_spec(group: Group) -> list[str]:
    """Violated invariants of ``group`` (an empty list means the data is valid)."""
    return group.violations()


# --- finite ----------------------------------------------------------------


class FiniteGroup(Group):
    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0,
                 names: Sequence[str] | None = None, name: str = "G", validate: bool = True):
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        self.size = len(self.table)
        self.identity = identity
        self.name = name
        self.names = tuple(names) if names is not None else tuple(f"{name}_{i}" for i in range(self.size))
        self._finish_init(validate)
        if self.validated:
            self._inverse = tuple(row.index(identity) for row in self.table)
            self._order = tuple(self._compute_order(x) for x in range(self.size))

    def violations(self) -> list[str]:
        q, t, e = self.size, self.table, self.identity
        out = []
        if q == 0:
            return ["finite group must have at least one element"]
        if any(len(row) != q for row in t):
            return ["multiplication table is not square"]
        if any(not 0 <= v < q for row in t for v in row):
            return ["table entry out of range"]
        if not 0 <= e < q:
            return [f"identity index {e} out of range"]
        if len(self.names) != q:
            out.append(f"{len(self.names)} names for {q} elements")
        for x in range(q):
            if t[e][x] != x or t[x][e] != x:
                out.append(f"{e} is not a two-sided identity for {x}")
        full = list(range(q))
        for x in range(q):
            if sorted(t[x]) != full:
                out.append(f"row {x} is not a permutation")
            if sorted(t[y][x] for y in range(q)) != full:
                out.append(f"column {x} is not a permutation")
        for x, y, z in itertools.product(range(q), repeat=3):
            if t[t[x][y]][z] != t[x][t[y][z]]:
                out.append(f"not associative at ({x}, {y}, {z})")
        return out

    def _compute_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k

    def mul(self, x, y):
        return self.table[x][y]

    def inv(self, x):
        return self._inverse[x]

    def pow(self, x, k):
        return super().pow(x, k % self._order[x])

    def order(self, x):
        return self._order[x]

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.size

    def format(self, x) -> str:
        return self.names[x]

    def elements(self) -> range:
        return range(self.size)


def cyclic_group(n: int, name: str = "C", names: Sequence[str] | None = None) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], 0, names, name)


def symmetric_group(n: int, name: str = "S") -> FiniteGroup:
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p * q)(i) = p(q(i)): apply q first
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteGroup(table, index[tuple(range(n))], None, name)


# --- integers --------------------------------------------------------------


class IntegerGroup(Group):
    identity = 0

    def __init__(self, name: str = "Z", generator: str | None = None):
        self.name = name
        self.generator = generator or name
        self._finish_init(True)

    def mul(self, x, y):
        return x + y

    def inv(self, x):
        return -x

    def pow(self, x, k):
        return x * k

    def order(self, x):
        return 1 if x == 0 else INFINITE

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool)

    def format(self, x) -> str:
        if x == 0:
            return "1"
        return self.generator if x == 1 else f"{self.generator}^{x}"


# --- virtually cyclic ------------------------------------------------------


class VirtuallyCyclicGroup(Group):
    """Extension of Z = <h> by the finite quotient Q with sign action eps and cocycle c."""

    def __init__(self, quotient: FiniteGroup, eps: Sequence[int] | Mapping[int, int] | None = None,
                 cocycle: Mapping[tuple[int, int], int] | None = None, name: str = "V",
                 generators: Mapping[str, tuple[int, int]] | None = None, validate: bool = True):
        self.quotient = quotient
        q = quotient.size
        if eps is None:
            eps = [1] * q
        if isinstance(eps, Mapping):
            eps = [eps.get(i, 1) for i in range(q)]
        self.eps = tuple(int(e) for e in eps)
        cocycle = dict(cocycle or {})
        self.cocycle = tuple(tuple(int(cocycle.get((a, b), 0)) for b in range(q)) for a in range(q))
        self.name = name
        self.generators = dict(generators or {})
        e = quotient.identity
        self.identity = (e, 0)
        self.h = (e, 1)
        self._finish_init(validate)

    @property
    def index(self) -> int:
        return self.quotient.size

    def violations(self) -> list[str]:
        out = [f"quotient: {v}" for v in self.quotient.violations()]
        if out:
            return out
        Q, eps, c, e = self.quotient, self.eps, self.cocycle, self.quotient.identity
        q = Q.size
        if len(eps) != q:
            return [f"eps has {len(eps)} entries for a quotient of order {q}"]
        if any(v not in (1, -1) for v in eps):
            out.append("eps values must be +1 or -1")
        if eps[e] != 1:
            out.append("eps(1) must be 1")
        for a, b in itertools.product(range(q), repeat=2):
            if eps[Q.mul(a, b)] != eps[a] * eps[b]:
                out.append(f"eps is not a homomorphism at ({a}, {b})")
        for a in range(q):
            if c[e][a] or c[a][e]:
                out.append(f"cocycle not normalized at {a}")
        for a, b, d in itertools.product(range(q), repeat=3):
            lhs = c[Q.mul(a, b)][d] + eps[d] * c[a][b]
            rhs = c[a][Q.mul(b, d)] + c[b][d]
            if lhs != rhs:
                out.append(f"cocycle identity fails at ({a}, {b}, {d})")
        return out

    def mul(self, x, y):
        q1, m1 = x
        q2, m2 = y
        return (self.quotient.table[q1][q2], self.cocycle[q1][q2] + self.eps[q2] * m1 + m2)

    def inv(self, x):
        q, m = x
        qi = self.quotient.inv(q)
        return (qi, -self.cocycle[q][qi] - self.eps[qi] * m)

    def pow(self, x, k):
        if k < 0:
            x, k = self.inv(x), -k
        r = self.quotient.order(x[0])
        # x^r = (1, M) and powers of (1, M) just add
        big, small = divmod(k, r)
        out = (self.identity[0], big * self.kernel_power(x))
        for _ in range(small):
            out = self.mul(out, x)
        return out

    def kernel_power(self, x) -> int:
        """M with x^|q| = h^M where |q| is the order of x's image in Q."""
        q, m = x
        r = self.quotient.order(q)
        y = self.identity
        for _ in range(r):
            y = self.mul(y, x)
        return y[1]

    def order(self, x):
        if self.kernel_power(x) == 0:
            return self.quotient.order(x[0])
        return INFINITE

    def in_kernel(self, x) -> bool:
        return x[0] == self.quotient.identity

    def conj_sign(self, f) -> int:
        """sign with f h f^-1 = h^sign."""
        return self.eps[f[0]]

    def contains(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == 2 and self.quotient.contains(x[0])
                and isinstance(x[1], int))

    def format(self, x) -> str:
        names = {val: name for name, val in self.generators.items()}
        if x in names:
            return names[x]
        q, m = x
        e = self.quotient.identity
        if (e, 1) in names and (q == e or (q, 0) in names):
            parts = [] if q == e else [names[(q, 0)]]
            if m:
                h = names[(e, 1)]
                parts.append(h if m == 1 else f"{h}^{m}")
            return " ".join(parts) or "1"
        return f"{self.name}({q},{m})"


def infinite_dihedral(name: str = "Dinf") -> VirtuallyCyclicGroup:
    """D_inf = <t, h | t^2, t h t = h^-1> as (Z/2, eps(t) = -1, c = 0)."""
    q = cyclic_group(2, name=f"{name}_Q", names=["1", "t"])
    return VirtuallyCyclicGroup(q, [1, -1], {}, name, {"t": (1, 0), "h": (0, 1)})


def trivial_quotient_vc(name: str = "Zvc", generator: str = "h") -> VirtuallyCyclicGroup:
    q = cyclic_group(1, name=f"{name}_Q", names=["1"])
    return VirtuallyCyclicGroup(q, [1], {}, name, {generator: (0, 1)})


# --- free products ---------------------------------------------------------

Syllable = tuple[int, Any]
Word = tuple[Syllable, ...]


@dataclass(frozen=True)
class EllipticInFactor:
    factor: int | None
    conjugator: Any
    image: Any


@dataclass(frozen=True)
class Torsion:
    order: int
    conjugator: Any
    factor: int | None


@dataclass(frozen=True)
class Loxodromic:
    pass


Classification = EllipticInFactor | Torsion | Loxodromic


class FreeProduct(Group):
    identity: Word = ()

    def __init__(self, factors: Sequence[Group], name: str = "F"):
        self.factors = tuple(factors)
        self.name = name
        self._finish_init(True)

    def violations(self) -> list[str]:
        if not self.factors:
            return ["free product needs at least one factor"]
        out = []
        for i, f in enumerate(self.factors):
            if isinstance(f, FreeProduct):
                out.append(f"factor {i} is itself a free product; flatten it first")
            elif not isinstance(f, (FiniteGroup, IntegerGroup, VirtuallyCyclicGroup)):
                out.append(f"factor {i} has unsupported type {type(f).__name__}")
            else:
                out.extend(f"factor {i}: {v}" for v in f.violations())
        return out

    def syllable(self, factor: int, x) -> Word:
        """Embed a factor element."""
        if self.factors[factor].is_identity(x):
            return ()
        return ((factor, x),)

    def mul(self, x: Word, y: Word) -> Word:
        if not x:
            return y
        if not y:
            return x
        left = list(x)
        i = 0
        while left and i < len(y) and left[-1][0] == y[i][0]:
            lam = y[i][0]
            f = self.factors[lam]
            merged = f.mul(left[-1][1], y[i][1])
            left.pop()
            i += 1
            if not f.is_identity(merged):
                left.append((lam, merged))
                break
        left.extend(y[i:])
        return tuple(left)

    def inv(self, x: Word) -> Word:
        return tuple((lam, self.factors[lam].inv(g)) for lam, g in reversed(x))

    def contains(self, x) -> bool:
        if not isinstance(x, tuple):
            return False
        prev = None
        for syl in x:
            if not (isinstance(syl, tuple) and len(syl) == 2):
                return False
            lam, g = syl
            if not (isinstance(lam, int) and 0 <= lam < len(self.factors)):
                return False
            f = self.factors[lam]
            if not f.contains(g) or f.is_identity(g) or lam == prev:
                return False
            prev = lam
        return True

    def cyclic_normal_form(self, g: Word) -> tuple[Word, Word]:
        """(u, w) with g = u w u^-1 and w cyclically reduced."""
        u: Word = ()
        w = g
        while len(w) >= 2 and w[0][0] == w[-1][0]:
            first = (w[0],)
            u = self.mul(u, first)
            w = self.mul(self.mul(self.inv(first), w), first)
        return u, w

    def classify(self, g: Word) -> Classification:
        u, w = self.cyclic_normal_form(g)
        if not w:
            return Torsion(1, u, None)
        if len(w) == 1:
            lam, x = w[0]
            k = self.factors[lam].order(x)
            if k != INFINITE:
                return Torsion(int(k), u, lam)
            return EllipticInFactor(lam, u, x)
        return Loxodromic()

    def order(self, g):
        c = self.classify(g)
        return c.order if isinstance(c, Torsion) else INFINITE

    def pow(self, g, k):
        if not g or k == 0:
            return ()
        u, w = self.cyclic_normal_form(g)
        if len(w) == 1:
            lam, x = w[0]
            core = self.syllable(lam, self.factors[lam].pow(x, k))
        else:
            core = (w if k > 0 else self.inv(w)) * abs(k)
        return self.mul(self.mul(u, core), self.inv(u))

    def primitive_root(self, g: Word) -> tuple[Word, int]:
        if not isinstance(self.classify(g), Loxodromic):
            raise ElementError("primitive_root needs a loxodromic element")
        u, w = self.cyclic_normal_form(g)
        n = len(w)
        for p in range(1, n + 1):
            if n % p == 0 and w[:p] * (n // p) == w:
                r = self.mul(self.mul(u, w[:p]), self.inv(u))
                return r, n // p
        raise AssertionError("unreachable")

    def hat_distance(self, factor: int, h) -> int | float:
        """Relative distance from 1 to a factor element, avoiding that factor's edges.

        Zero for the identity and infinite otherwise: a path through the other
        factors evaluating to a single nontrivial syllable would contradict
        uniqueness of normal forms.
        """
        if not self.factors[factor].contains(h):
            raise ElementError(f"{h!r} is not in factor {factor}")
        return 0 if self.factors[factor].is_identity(h) else INFINITE

    def format(self, g: Word) -> str:
        if not g:
            return "1"
        return " ".join(self.factors[lam].format(x) for lam, x in g)


def classify(group: Group, g) -> Classification:
    if isinstance(group, FreeProduct):
        return group.classify(g)
    k = group.order(g)
    if k != INFINITE:
        return Torsion(int(k), group.identity, None)
    return EllipticInFactor(0, group.identity, g)
