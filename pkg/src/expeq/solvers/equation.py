from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from expeq.groups import ElementError, Group


@dataclass(frozen=True, eq=False)
class ExponentialEquation:
    """a_1 g_1^x_1 a_2 g_2^x_2 ... a_n g_n^x_n = 1 over ``group``."""

    group: Group
    coefficients: tuple
    bases: tuple
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        object.__setattr__(self, "bases", tuple(self.bases))
        n = len(self.bases)
        if n == 0:
            raise ValueError("an exponential equation needs at least one variable")
        if len(self.coefficients) != n:
            raise ValueError(f"{len(self.coefficients)} coefficients for {n} bases")
        if not self.variables:
            object.__setattr__(self, "variables", tuple(f"x{i + 1}" for i in range(n)))
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.variables) != n:
            raise ValueError(f"{len(self.variables)} variable names for {n} bases")
        if len(set(self.variables)) != n:
            raise ValueError(f"repeated variable in {self.variables}")
        for x in self.coefficients + self.bases:
            if not self.group.contains(x):
                raise ElementError(f"{x!r} is not an element of {self.group.name}")

    def _key(self):
        return (id(self.group), self.coefficients, self.bases, self.variables)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExponentialEquation):
            return NotImplemented
        return self.group is other.group and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    @classmethod
    def from_terms(cls, group: Group, terms: Sequence[tuple[Any, Any]], variables: Sequence[str] = ()):
        return cls(group, tuple(a for a, _ in terms), tuple(g for _, g in terms), tuple(variables))

    @property
    def n(self) -> int:
        return len(self.bases)

    @property
    def terms(self) -> list[tuple[Any, Any]]:
        return list(zip(self.coefficients, self.bases))

    def evaluate(self, xs: Sequence[int]):
        if len(xs) != self.n:
            raise ValueError(f"expected {self.n} exponents, got {len(xs)}")
        G = self.group
        out = G.identity
        for a, g, x in zip(self.coefficients, self.bases, xs):
            out = G.mul(G.mul(out, a), G.pow(g, x))
        return out

    def is_solution(self, xs: Sequence[int]) -> bool:
        return self.group.is_identity(self.evaluate(xs))

    def render(self) -> str:
        G = self.group
        parts = []
        for a, g, v in zip(self.coefficients, self.bases, self.variables):
            if not G.is_identity(a):
                parts.append(_wrap(G.format(a)))
            parts.append(f"{_wrap(G.format(g))}^{v}")
        return " * ".join(parts) + " = 1"

    def __str__(self) -> str:
        return self.render()


def _wrap(text: str) -> str:
    return f"({text})" if " " in text or "^" in text else text
