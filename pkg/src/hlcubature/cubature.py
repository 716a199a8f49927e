"""Christoffel weights, rule assembly and rule application."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import ParameterError
from .hallpoly import (
    RuleParams,
    SymmetricPolynomial,
    c_factor_values,
    delta_norm,
    eval_hl_table,
    eval_monomial,
    eval_quasi_orthogonal,
)
from .lattice import Weight, check_ensemble, enumerate_alcove, enumerate_shell
from .nodes import Node, morse_hessian, solve_all_nodes

__all__ = [
    "CubatureRule",
    "RationalIntegrand",
    "density_rho",
    "denominator_O",
    "rational_denominator",
    "inverse_c_squared",
    "christoffel_sum",
    "christoffel_det",
    "determinantal_status",
    "build_rule",
    "apply_rule",
    "constant_term_value",
    "constant_term_residual",
    "quasi_orthogonal_residuals",
    "planar_coords",
    "planar_region_test",
    "planar_density",
]

CONSTANT_TERM_WARN = 1e-8


def density_rho(ensemble: str, xi) -> np.ndarray | float:
    """Eigenvalue-angle density of the CUE (``"a"``) or CQE (``"b"``); batch over leading axes."""
    check_ensemble(ensemble)
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    j, k = np.triu_indices(n, 1)
    if ensemble == "a":
        out = np.prod(np.abs(np.exp(1j * xi[..., j]) - np.exp(1j * xi[..., k])) ** 2, axis=-1)
    else:
        c = np.cos(xi)
        out = (
            2.0 ** (n * (n + 1))
            * np.prod(1.0 - c**2, axis=-1)
            * np.prod((c[..., j] - c[..., k]) ** 2, axis=-1)
        )
    return float(out) if np.ndim(out) == 0 else out


def _pair_poly(theta, q):
    return 1.0 - 2.0 * q * np.cos(theta) + q * q


def denominator_O(ensemble: str, xi, params: RuleParams) -> np.ndarray | float:
    """Pole denominator ``O_c(xi)`` so that ``|C_c(xi)|^{-2} = rho_c(xi) / O_c(xi)``."""
    check_ensemble(ensemble)
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    j, k = np.triu_indices(n, 1)
    q = params.q
    out = np.prod(_pair_poly(xi[..., j] - xi[..., k], q), axis=-1)
    if ensemble == "b":
        out = out * np.prod(_pair_poly(xi[..., j] + xi[..., k], q), axis=-1)
        out = out * np.prod(_pair_poly(xi, params.q0), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def inverse_c_squared(ensemble: str, xi, params: RuleParams):
    """``|C_c(xi)|^{-2}`` computed as ``rho_c / O_c`` (finite on the alcove closure)."""
    return density_rho(ensemble, xi) / denominator_O(ensemble, xi, params)


def _node_xi(node) -> np.ndarray:
    return np.asarray(node.xi if isinstance(node, Node) else node, dtype=float)


def _hl_norm_sum(weights, deltas, xi, params) -> float:
    vals = eval_hl_table(weights, xi, params)
    return float(np.sum(np.abs(vals) ** 2 * deltas))


def christoffel_sum(ensemble: str, node, params: RuleParams) -> float:
    """``hat-Delta = 1 / sum_mu |P_mu(node)|^2 delta_mu`` over the level-``m`` alcove."""
    if ensemble != params.ensemble:
        raise ParameterError(f"ensemble {ensemble!r} does not match params")
    weights = enumerate_alcove(ensemble, params.n, params.m)
    deltas = np.array([delta_norm(mu, params) for mu in weights])
    return 1.0 / _hl_norm_sum(weights, deltas, _node_xi(node), params)


def christoffel_det(ensemble: str, node, params: RuleParams) -> float:
    """``Delta`` from the Hessian determinant: ``(m/n)/det H`` (type a) or ``1/det H`` (type b).

    Proven for rank ``n_c <= 2``; for larger rank see :func:`determinantal_status`.
    """
    if ensemble != params.ensemble:
        raise ParameterError(f"ensemble {ensemble!r} does not match params")
    det = float(np.linalg.det(morse_hessian(ensemble, _node_xi(node), params)))
    if ensemble == "a":
        return (params.m / params.n) / det
    return 1.0 / det


def determinantal_status(params: RuleParams) -> str:
    return "proven" if params.n_c <= 2 else "conjectural"


def constant_term_value(params: RuleParams) -> float:
    """``prod_{j=1}^n (1 - q)/(1 - q^j)``: total mass of ``|C|^{-2}`` on the alcove."""
    q = params.q
    out = 1.0
    for j in range(1, params.n + 1):
        out /= sum(q**i for i in range(j))
    return out


@dataclass(frozen=True)
class CubatureRule:
    """Nodes with their Christoffel weights.

    ``weights_hat`` integrate ``f |C|^{-2}``; ``weights = |C|^2 weights_hat``
    integrate ``R rho`` with ``R = f / O``.  ``density_values`` holds the
    density used in that second form: ``rho`` at the nodes, except for the
    ``q = 1`` rules where the pair factors of ``rho`` and ``O`` cancel.
    """

    params: RuleParams
    nodes: tuple
    weights_hat: np.ndarray
    weights: np.ndarray
    method: str = "sum"
    kind: str = "hall-littlewood"
    metadata: dict = field(default_factory=dict)
    density_values: np.ndarray | None = None

    def __post_init__(self):
        if self.density_values is None:
            pts = np.array([nd.xi for nd in self.nodes])
            object.__setattr__(self, "density_values", np.atleast_1d(density_rho(self.params.ensemble, pts)))
        for name in ("weights_hat", "weights", "density_values"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "nodes", tuple(self.nodes))

    @property
    def points(self) -> np.ndarray:
        return np.array([nd.xi for nd in self.nodes])

    @property
    def labels(self) -> list:
        return [nd.label for nd in self.nodes]

    @property
    def inverse_c_squared(self) -> np.ndarray:
        """``|C(node)|^{-2} = weights_hat / weights``."""
        return self.weights_hat / self.weights

    def __len__(self):
        return len(self.nodes)


def _rule_weights(params: RuleParams, nodes, weight_method: str):
    pts = np.array([nd.xi for nd in nodes])
    c2 = np.abs(c_factor_values(params.ensemble, pts, params.q, params.q0)) ** 2
    if weight_method == "sum":
        hat = np.array([christoffel_sum(params.ensemble, nd, params) for nd in nodes])
        full = c2 * hat
    elif weight_method in ("determinantal", "det"):
        full = np.array([christoffel_det(params.ensemble, nd, params) for nd in nodes])
        hat = full / c2
    else:
        raise ParameterError(f"weight_method must be 'sum' or 'determinantal', got {weight_method!r}")
    return hat, full


def build_rule(params: RuleParams, weight_method: str = "sum", tol: float = 1e-12, max_iter: int = 50) -> CubatureRule:
    """Solve all nodes of the level-``m`` alcove and attach Christoffel weights.

    A :class:`RuntimeWarning` is issued if the constant-term identity
    ``sum hat-Delta = prod (1 - q)/(1 - q^j)`` is violated by more than 1e-8.
    """
    if params.q == 1.0:
        raise ParameterError("q = 1 has no Morse-function nodes; use the degenerations module")
    nodes = solve_all_nodes(params, tol, max_iter)
    hat, full = _rule_weights(params, nodes, weight_method)
    method = "sum" if weight_method == "sum" else "determinantal"
    meta = {"max_grad_norm": max(nd.grad_norm for nd in nodes)}
    if method == "determinantal":
        meta["determinantal"] = determinantal_status(params)
    rule = CubatureRule(params, nodes, hat, full, method, "hall-littlewood", meta)
    res = constant_term_residual(rule)
    meta["constant_term_residual"] = res
    if res > CONSTANT_TERM_WARN:
        warnings.warn(f"constant-term identity violated: relative residual {res:.3e}", RuntimeWarning)
    return rule


def constant_term_residual(rule: CubatureRule) -> float:
    """Relative residual of ``sum_lambda hat-Delta_lambda`` against the closed form."""
    target = constant_term_value(rule.params)
    return abs(float(np.sum(rule.weights_hat)) - target) / abs(target)


def quasi_orthogonal_residuals(rule: CubatureRule) -> dict:
    """``max_nodes |Q_mu(node)|`` for every weight in the level-``(m+1)`` shell."""
    p = rule.params
    out = {}
    for mu in enumerate_shell(p.ensemble, p.n, p.m):
        out[mu] = max(abs(eval_quasi_orthogonal(mu, nd.xi, p)) for nd in rule.nodes)
    return out


@dataclass(frozen=True)
class RationalIntegrand:
    """``R = f / O`` with ``f`` symmetric (or ``R = f`` without the pole denominator).

    Applied in the density form ``sum R(xi) rho(xi) Delta``.
    """

    numerator: SymmetricPolynomial
    has_pole_denominator: bool = True

    def __call__(self, xi, params: RuleParams):
        val = self.numerator(xi)
        if self.has_pole_denominator:
            val = val / rational_denominator(self.numerator.ensemble, xi, params)
        return val


def rational_denominator(ensemble: str, xi, params: RuleParams):
    """``O_c`` as used in the density form of a rule.

    At ``q = 1`` the ``q``-pair factors of ``O_c`` coincide with the pair
    factors of ``rho_c`` and are cancelled analytically, leaving the ``q0``
    factor (type b) or 1 (type a).
    """
    if params.q != 1.0:
        return denominator_O(ensemble, xi, params)
    xi = np.asarray(xi, dtype=float)
    if ensemble == "a":
        return np.ones(xi.shape[:-1]) if xi.ndim > 1 else 1.0
    out = np.prod(_pair_poly(xi, params.q0), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


Integrand = Union[SymmetricPolynomial, RationalIntegrand, Callable]


def apply_rule(rule: CubatureRule, integrand: Integrand, density: bool | None = None):
    """Weighted node sum.

    With ``density=False`` (default for plain callables and symmetric
    polynomials) this is ``sum f(node) hat-Delta``, the integral of
    ``f |C|^{-2}``.  With ``density=True`` (default for
    :class:`RationalIntegrand`) it is ``sum R(node) rho(node) Delta``, the
    integral of ``R rho``.  Complex results are returned only when the
    imaginary part is not negligible.
    """
    p = rule.params
    pts = rule.points
    if density is None:
        density = isinstance(integrand, RationalIntegrand)
    if isinstance(integrand, RationalIntegrand):
        vals = np.asarray(integrand(pts, p))
    elif isinstance(integrand, SymmetricPolynomial):
        vals = np.asarray(integrand(pts))
    else:
        vals = np.array([integrand(x) for x in pts])
    if density:
        total = np.sum(vals * rule.density_values * rule.weights)
    else:
        total = np.sum(vals * rule.weights_hat)
    total = complex(total)
    if abs(total.imag) <= 1e-12 * max(1.0, abs(total.real)):
        return total.real
    return total


# --------------------------------------------------------------------------
# planar (algebraic) coordinates


def planar_coords(ensemble: str, xi) -> np.ndarray:
    """Algebraic coordinates of an angle vector.

    Type a: real combinations of the fundamental monomials ``M_{w_j}``
    (real parts for ``j < n/2``, ``M_{w_{n/2}}/sqrt 2`` in the middle,
    imaginary parts after).  Type b: ``X_j = M_{e_1 + ... + e_j}``.
    """
    check_ensemble(ensemble)
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    if ensemble == "b":
        return np.stack(
            [np.real(eval_monomial(Weight.fundamental("b", n, j), xi)) for j in range(1, n + 1)], axis=-1
        )
    M = [None] + [eval_monomial(Weight.fundamental("a", n, j), xi) for j in range(1, n)]
    out = []
    for j in range(1, n):
        if 2 * j < n:
            out.append(np.real(0.5 * (M[j] + M[n - j])))
        elif 2 * j == n:
            out.append(np.real(M[j]) / math.sqrt(2.0))
        else:
            out.append(np.real((M[j] - M[n - j]) / 2j))
    return np.stack(out, axis=-1)


def planar_density(ensemble: str, X) -> float:
    """Density polynomial in planar coordinates (``n = 3`` type a, ``n = 2`` type b)."""
    X1, X2 = (float(v) for v in X)
    if ensemble == "a":
        return 8.0 * (X1**3 - 3.0 * X1 * X2**2) - (X1**2 + X2**2 + 9.0) ** 2 + 108.0
    check_ensemble(ensemble)
    return (X1**2 - 4.0 * X2) * (2.0 * X1 + X2 + 4.0) * (-2.0 * X1 + X2 + 4.0)


def planar_region_test(ensemble: str, X) -> bool:
    """Membership in the deltoid (type a) or parabola-bounded region (type b)."""
    X = np.asarray(X, dtype=float)
    if X.shape != (2,):
        raise ParameterError(f"planar region tests need a 2-vector, got shape {X.shape}")
    if ensemble == "a":
        return bool(planar_density("a", X) > 0)
    check_ensemble(ensemble)
    X1, X2 = X
    return bool(X1**2 - 4.0 * X2 > 0 and -2.0 * abs(X1) + X2 + 4.0 > 0)
