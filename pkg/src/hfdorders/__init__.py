"""Exact experiments on half-factorial orders in imaginary quadratic fields."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    KElement,
    OrderElement,
    QuadraticOrder,
    ValidationError,
    divide_exact,
    elements_of_norm,
    make_order,
    norm,
    units,
)
from .factor import (  # noqa: E402
    boundary,
    elasticity_up_to,
    factorizations,
    hfd_certify,
    irreducibles_up_to,
    is_irreducible,
)
from .ideals import factor_ideal, ideal_from_generators, ideal_mul, is_principal  # noqa: E402
from .classgroup import class_group  # noqa: E402
