"""Exact facility location with matroid constraints.

Finite fields, linear matroids, representative families, set packing with
matroid constraints and the facility location solvers built on them, plus
brute-force oracles and problem reductions.
"""

from __future__ import annotations

from .field import FieldCtx, FieldElem, field_new, next_prime
from .gfmatrix import GFMatrix, block_diag
from .intersection import max_weight_common_independent
from .matroid import (
    Bond,
    DirectSum,
    Dual,
    Free,
    Graphic,
    Linear,
    Matroid,
    Multicolored,
    Oracle,
    Partition,
    Restriction,
    Truncation,
    Uniform,
    UnionFree,
    axioms_check,
    compile_linear,
    truncate_randomized,
    truncate_same_field,
    union_with_free,
)
from .repfam import IUMF, RepEntry, blowup, rep_intersection, rep_single, rep_unions
from .spmc import SpmcInstance, SpmcSolution, solve_spmc
from .uflp import (
    CcInstance,
    UflpInstance,
    UflpSolution,
    check_solution,
    profit,
    solve_mcc_linear,
    solve_mcc_uniform,
    solve_uflp_mc,
)

__all__ = [
    "FieldCtx",
    "FieldElem",
    "field_new",
    "next_prime",
    "GFMatrix",
    "block_diag",
    "max_weight_common_independent",
    "Matroid",
    "Uniform",
    "Partition",
    "Multicolored",
    "Free",
    "Graphic",
    "Bond",
    "Linear",
    "Oracle",
    "Dual",
    "DirectSum",
    "UnionFree",
    "Restriction",
    "Truncation",
    "axioms_check",
    "compile_linear",
    "truncate_randomized",
    "truncate_same_field",
    "union_with_free",
    "IUMF",
    "RepEntry",
    "blowup",
    "rep_single",
    "rep_unions",
    "rep_intersection",
    "SpmcInstance",
    "SpmcSolution",
    "solve_spmc",
    "CcInstance",
    "UflpInstance",
    "UflpSolution",
    "check_solution",
    "profit",
    "solve_mcc_uniform",
    "solve_mcc_linear",
    "solve_uflp_mc",
]
