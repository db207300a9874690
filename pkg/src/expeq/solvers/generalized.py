"""Finite disjunctions of finite systems of equations and inequations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from expeq.semilinear import (
    DifferenceNormalForm,
    ZSemilinearSet,
    box_points,
    concat,
    intersect,
    reorder,
    union_all,
)
from expeq.solvers.dispatch import Empirical, solve
from expeq.solvers.equation import ExponentialEquation
from expeq.solvers.oracle import Box, default_box


@dataclass(frozen=True)
class Atom:
    equation: ExponentialEquation
    negated: bool = False  # True for an inequation

    def holds(self, values: dict[str, int]) -> bool:
        xs = [values[v] for v in self.equation.variables]
        return self.equation.is_solution(xs) != self.negated


System = Sequence[Atom]


@dataclass(frozen=True)
class EmpiricalSummary:
    box: tuple[tuple[int, int], ...]
    points: tuple[tuple[int, ...], ...]

    def render(self) -> str:
        box = ",".join(f"{lo}:{hi}" for lo, hi in self.box)
        return f"EMPIRICAL box={box}\n" + "\n".join("(" + ",".join(map(str, p)) + ")" for p in self.points)


def lift(s: ZSemilinearSet, names: Sequence[str], variables: Sequence[str]) -> ZSemilinearSet:
    """Extend a set over ``names`` to all of ``variables`` (missing ones free)."""
    index = {v: i for i, v in enumerate(variables)}
    missing = [v for v in variables if v not in set(names)]
    for v in names:
        if v not in index:
            raise ValueError(f"variable {v} is not among {tuple(variables)}")
    full = concat(s, ZSemilinearSet.full(len(missing)))
    return reorder(full, [index[v] for v in list(names) + missing])


def solve_generalized(systems: Sequence[System], variables: Sequence[str], box: Box | None = None
                      ) -> DifferenceNormalForm | EmpiricalSummary:
    variables = tuple(variables)
    n = len(variables)
    groups = {id(a.equation.group) for sys in systems for a in sys}
    if len(groups) > 1:
        raise ValueError("all atoms must be over the same group")
    terms = []
    for sys in systems:
        positive = ZSemilinearSet.full(n)
        negatives = []
        for atom in sys:
            result = solve(atom.equation)
            if isinstance(result, Empirical):
                return _empirical(systems, variables, box)
            lifted = lift(result.set, atom.equation.variables, variables)
            if atom.negated:
                negatives.append(lifted)
            else:
                positive = intersect(positive, lifted)
        terms.append((positive, union_all(n, negatives)))
    return DifferenceNormalForm(n, tuple(terms))


def evaluate_directly(systems: Sequence[System], variables: Sequence[str], point: Sequence[int]) -> bool:
    values = dict(zip(variables, point))
    return any(all(atom.holds(values) for atom in sys) for sys in systems)


def _empirical(systems, variables, box) -> EmpiricalSummary:
    box = tuple(box) if box is not None else tuple(default_box(len(variables)))
    pts = tuple(p for p in box_points(box) if evaluate_directly(systems, variables, p))
    return EmpiricalSummary(box, pts)
