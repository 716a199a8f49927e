"""Cubature rules from Hall-Littlewood polynomials."""
from .cubature import CubatureRule, RationalIntegrand, apply_rule, build_rule
from .degenerations import (
    bernstein_szego_quadrature,
    monomial_rule_a,
    schur_rule_a,
    schur_rule_b,
    symmetrized_quadrature_b,
)
from .errors import (
    AccuracyError,
    ConvergenceError,
    HLCubatureError,
    ParameterError,
    ResourceError,
    SingularConfigurationError,
)
from .hallpoly import RuleParams, SymmetricPolynomial, eval_hl
from .lattice import Weight, enumerate_alcove
from .nodes import solve_all_nodes, solve_node
from .oracle import integrate_alcove, integrate_torus

__all__ = [
    "AccuracyError",
    "ConvergenceError",
    "CubatureRule",
    "HLCubatureError",
    "ParameterError",
    "RationalIntegrand",
    "ResourceError",
    "RuleParams",
    "SingularConfigurationError",
    "SymmetricPolynomial",
    "Weight",
    "apply_rule",
    "bernstein_szego_quadrature",
    "build_rule",
    "enumerate_alcove",
    "eval_hl",
    "integrate_alcove",
    "integrate_torus",
    "monomial_rule_a",
    "schur_rule_a",
    "schur_rule_b",
    "solve_all_nodes",
    "solve_node",
    "symmetrized_quadrature_b",
]
__version__ = "0.1.0"
