from lieh1tools.linalg.exact import (
    INFEASIBLE,
    Echelon,
    Infeasible,
    Scalar,
    SolveResult,
    SparseMatrix,
    SparseVector,
    as_scalar,
    format_scalar,
    kernel,
    kernel_rows,
    parse_scalar,
    solve_affine,
    solve_affine_rows,
)
