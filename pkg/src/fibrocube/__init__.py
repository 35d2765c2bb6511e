"""Fibonacci/Lucas cubes: construction, good linear permutations, routing."""

from .cube import CubeGraph, CubeKind, build_cube, distance, export_graph, is_vertex
from .gf2 import (
    BinMatrix,
    add,
    cyclic_row_shift,
    identity,
    is_invertible,
    matvec,
    mul,
    reversal,
    unit,
)
from .classify import (
    GoodMatrixGroup,
    GoodnessVerdict,
    analyze_group,
    check_cyclic_shift_closure,
    enumerate_brute,
    generate_analytic,
    is_good,
)
from .route import (
    RoutingPlan,
    Step,
    ValidationReport,
    VertexPermutation,
    measure_t,
    perm_from_matrix,
    plan_from_json_obj,
    plan_to_json,
    plan_to_json_obj,
    route_coord_transposition,
    route_coordinate_cycle,
    route_linear_fibonacci,
    route_lucas,
    route_reversal,
    route_transposition_triple,
    validate_plan,
)

__version__ = "0.1.0"

__all__ = [
    "BinMatrix",
    "CubeGraph",
    "CubeKind",
    "GoodMatrixGroup",
    "GoodnessVerdict",
    "RoutingPlan",
    "Step",
    "ValidationReport",
    "VertexPermutation",
    "add",
    "analyze_group",
    "build_cube",
    "check_cyclic_shift_closure",
    "cyclic_row_shift",
    "distance",
    "enumerate_brute",
    "export_graph",
    "generate_analytic",
    "identity",
    "is_good",
    "is_invertible",
    "is_vertex",
    "matvec",
    "measure_t",
    "mul",
    "perm_from_matrix",
    "plan_from_json_obj",
    "plan_to_json",
    "plan_to_json_obj",
    "reversal",
    "route_coord_transposition",
    "route_coordinate_cycle",
    "route_linear_fibonacci",
    "route_lucas",
    "route_reversal",
    "route_transposition_triple",
    "unit",
    "validate_plan",
]
