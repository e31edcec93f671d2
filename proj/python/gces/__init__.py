"""Accelerated composite gradient solvers with certificate checks."""

from ._core import (
    DimensionError,
    Error,
    InvalidArgument,
    ParseError,
    Problem,
    from_libsvm,
    parse_libsvm,
    prox_elastic_net,
    prox_l1,
    reference_solve,
    run_amgs,
    run_benchmark,
    run_fista,
    run_gces,
    synthetic,
    synthetic_logistic,
)

__all__ = [
    "DimensionError",
    "Error",
    "InvalidArgument",
    "ParseError",
    "Problem",
    "from_libsvm",
    "parse_libsvm",
    "prox_elastic_net",
    "prox_l1",
    "reference_solve",
    "run_amgs",
    "run_benchmark",
    "run_fista",
    "run_gces",
    "synthetic",
    "synthetic_logistic",
]
