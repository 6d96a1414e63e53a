"""Exact Dijkgraaf-Witten extended field theory for finite gauge groups via
2-linearization of spans of groupoids."""

__version__ = "0.1.0"

from .errors import DomainError  # noqa: E402
from .groups import FiniteGroup, build_group, cyclic, dihedral, direct_product, symmetric  # noqa: E402
from .groupoids import adjoint_groupoid, compose_spans, equivalent_skeletons, product_groupoid  # noqa: E402
from .characters import character_table  # noqa: E402
from .cocycles import builtin_omega_cyclic, transgress_to_loop_groupoid  # noqa: E402
from .linearization import (  # noqa: E402
    closed_2morphism,
    compose_closed,
    lambda_block,
    lambda_morphism,
    lambda_object,
    lambda_twisted_morphism,
    monoidal_product,
)
from .field_theory import (  # noqa: E402
    builtin_presentation,
    builtin_three_cobordism,
    decorate,
    dw_closed_invariant,
    dw_vector_space,
    fc,
)

__all__ = [
    "__version__", "DomainError",
    "FiniteGroup", "build_group", "cyclic", "dihedral", "direct_product", "symmetric",
    "adjoint_groupoid", "compose_spans", "equivalent_skeletons", "product_groupoid",
    "character_table", "builtin_omega_cyclic", "transgress_to_loop_groupoid",
    "closed_2morphism", "compose_closed", "lambda_block", "lambda_morphism", "lambda_object",
    "lambda_twisted_morphism", "monoidal_product",
    "builtin_presentation", "builtin_three_cobordism", "decorate", "dw_closed_invariant", "dw_vector_space", "fc",
]
