"""Factorization of matrix polynomials and de Branges space checks."""

from ._core import (
    BrangesError,
    __version__,
    associated,
    factor,
    fixture,
    gram,
    inner_product,
    kernel,
    run_cli,
    validate_h1,
    zeros,
)

__all__ = [
    "BrangesError",
    "__version__",
    "associated",
    "factor",
    "fixture",
    "gram",
    "inner_product",
    "kernel",
    "run_cli",
    "validate_h1",
    "zeros",
]
