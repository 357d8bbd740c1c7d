"""Permanents and determinants from a spin-1/2 branching operator."""

from .errors import (
    BlockStructureError,
    ConsistencyError,
    DimensionError,
    LevelMismatchError,
    OccupiedSiteError,
    ParseError,
    RangeError,
    SizeGuardError,
    SpectralMismatchError,
    SpinpermError,
    ZeroPermanentError,
    ZeroPivotError,
)
from .exact import ExactComplex
from .matrix import (
    SquareMatrix,
    format_complex,
    matrix_to_csv,
    matrix_to_json,
    parse_complex_literal,
    parse_matrix,
    random_matrix,
)
from .operator import (
    BasisState,
    LevelVector,
    OpCount,
    SpinOperator,
    apply_closing,
    apply_level,
    dense_operator,
    evaluate,
    jw_sign,
    operator_power_on_zero,
    spin_op_count,
)
from .oracles import (
    determinant_gauss,
    lower_triangular_reduce,
    permanent_naive,
    permanent_ryser,
)
from .spectral import (
    SpectrumReport,
    block_decompose,
    build_eigenvector,
    generalized_kernel_ranks,
    hermitian_parts,
    verify_spectrum,
)
from .reduction import (
    GaussianComparison,
    ReductionState,
    ReductionTrace,
    eigenvector_pushforward,
    factor_round,
    fermionic_matches_gaussian,
    kernel_basis,
    reduce_fully,
)
from .graph import (
    AbpEdge,
    AbpGraph,
    AbpNode,
    count_paths,
    export_dot,
    graph_from_operator,
    graph_from_reduction,
    parse_dot,
    path_sum,
)
from .bench import BenchRow, bench_suite, rows_to_csv, ryser_op_count

__all__ = [
    "AbpEdge",
    "AbpGraph",
    "AbpNode",
    "BasisState",
    "BenchRow",
    "BlockStructureError",
    "ConsistencyError",
    "DimensionError",
    "ExactComplex",
    "GaussianComparison",
    "LevelMismatchError",
    "LevelVector",
    "OccupiedSiteError",
    "OpCount",
    "ParseError",
    "RangeError",
    "ReductionState",
    "ReductionTrace",
    "SizeGuardError",
    "SpectralMismatchError",
    "SpectrumReport",
    "SpinOperator",
    "SpinpermError",
    "SquareMatrix",
    "ZeroPermanentError",
    "ZeroPivotError",
    "apply_closing",
    "apply_level",
    "bench_suite",
    "block_decompose",
    "build_eigenvector",
    "count_paths",
    "dense_operator",
    "determinant_gauss",
    "eigenvector_pushforward",
    "evaluate",
    "export_dot",
    "factor_round",
    "fermionic_matches_gaussian",
    "format_complex",
    "generalized_kernel_ranks",
    "graph_from_operator",
    "graph_from_reduction",
    "hermitian_parts",
    "jw_sign",
    "kernel_basis",
    "lower_triangular_reduce",
    "matrix_to_csv",
    "matrix_to_json",
    "operator_power_on_zero",
    "parse_complex_literal",
    "parse_dot",
    "parse_matrix",
    "path_sum",
    "permanent_naive",
    "permanent_ryser",
    "random_matrix",
    "reduce_fully",
    "rows_to_csv",
    "ryser_op_count",
    "spin_op_count",
    "verify_spectrum",
]
