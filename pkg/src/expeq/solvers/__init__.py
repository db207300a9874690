from expeq.solvers.dispatch import (
    Empirical,
    Exact,
    SolveResult,
    check_decomposition,
    sample_piece_soundness,
    solve,
)
from expeq.solvers.equation import ExponentialEquation
from expeq.solvers.freeprod import (
    AssociatedSystem,
    Certificate,
    NotASolution,
    common_root,
    extract_certificate,
    fold,
    reduce_elliptic,
    solve_elliptic,
)
from expeq.solvers.generalized import Atom, EmpiricalSummary, evaluate_directly, solve_generalized
from expeq.solvers.leaf import solve_finitary, solve_finite, solve_integer, solve_leaf, solve_virtually_cyclic
from expeq.solvers.oracle import BoxTooLarge, default_box, detect_progressions, solve_bounded

__all__ = [
    "AssociatedSystem",
    "Atom",
    "BoxTooLarge",
    "Certificate",
    "Empirical",
    "EmpiricalSummary",
    "Exact",
    "ExponentialEquation",
    "NotASolution",
    "SolveResult",
    "check_decomposition",
    "common_root",
    "default_box",
    "detect_progressions",
    "evaluate_directly",
    "extract_certificate",
    "fold",
    "reduce_elliptic",
    "sample_piece_soundness",
    "solve",
    "solve_bounded",
    "solve_elliptic",
    "solve_finitary",
    "solve_finite",
    "solve_generalized",
    "solve_integer",
    "solve_leaf",
    "solve_virtually_cyclic",
]
