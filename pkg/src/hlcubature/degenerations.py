"""Closed-form special cases of the Hall-Littlewood cubature rules.

* ``q = 0``, type a: Schur cubature on an equispaced lattice.
* ``q = 0``, type b: products of one-variable Bernstein-Szego quadratures
  (all parameters 0: the symplectic Schur rule).
* ``q = 1``, type a: monomial cubature for the flat measure.
* ``q = 1``, type b: symmetrized products of one-variable quadratures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cubature import CubatureRule
from .errors import ConvergenceError, ParameterError
from .hallpoly import RuleParams, c_factor_values, delta_norm_at_one
from .lattice import enumerate_alcove, fundamental_data
from .nodes import Node, morse_gradient, u_q, v_q

__all__ = [
    "OneDimQuadrature",
    "bernstein_szego_quadrature",
    "schur_rule_a",
    "schur_rule_b",
    "monomial_rule_a",
    "symmetrized_quadrature_b",
]


@dataclass(frozen=True)
class OneDimQuadrature:
    """Bernstein-Szego quadrature with ``level`` nodes on (0, pi).

    Node ``l`` solves ``2 L x + v_{q0}(x) + v_{q1}(x) = 2 pi (l + 1)``; its
    weight is ``1/(2 L + u_{q0}(x) + u_{q1}(x))``.
    """

    level: int
    q0: float
    q1: float
    nodes: np.ndarray
    weights: np.ndarray

    def density(self, x=None):
        """One-variable density ``4 sin^2 x`` (at the nodes by default)."""
        x = self.nodes if x is None else np.asarray(x, dtype=float)
        return 4.0 * np.sin(x) ** 2

    def pole_factor(self, x=None):
        x = self.nodes if x is None else np.asarray(x, dtype=float)
        return 1.0 - 2.0 * self.q0 * np.cos(x) + self.q0**2


def _check_q(name, q):
    if not -1.0 < q < 1.0:
        raise ParameterError(f"{name} must lie in (-1, 1), got {q}")


def _bs_root(L, l, q0, q1, tol=1e-15, max_iter=100):
    # bracket from the a priori node bounds specialized to n = 1
    def ratio(x):
        return (1.0 - abs(x)) / (1.0 + abs(x))

    r0, r1 = ratio(q0), ratio(q1)
    rhs = 2.0 * math.pi * (l + 1)
    lo = math.pi * (l + 1) / (L + 0.5 / r0 + 0.5 / r1)
    hi = math.pi * (l + 1) / (L + 0.5 * r0 + 0.5 * r1)

    def f(x):
        return 2 * L * x + v_q(x, q0) + v_q(x, q1) - rhs

    x = math.pi * (l + 1) / (L + 1)
    x = min(max(x, lo), hi)
    for _ in range(max_iter):
        fx = f(x)
        if fx > 0:
            hi = min(hi, x)
        else:
            lo = max(lo, x)
        step = fx / (2 * L + u_q(x, q0) + u_q(x, q1))
        x_new = x - step
        if not lo <= x_new <= hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= tol * max(1.0, abs(x)):
            return x_new
        x = x_new
    raise ConvergenceError(f"one-variable node l={l} (level {L}) did not converge")


def bernstein_szego_quadrature(level: int, q0: float, q1: float) -> OneDimQuadrature:
    """Nodes and weights of the ``level``-point Bernstein-Szego quadrature."""
    if not isinstance(level, (int, np.integer)) or level < 1:
        raise ParameterError(f"level must be a positive integer, got {level!r}")
    _check_q("q0", q0)
    _check_q("q1", q1)
    L = int(level)
    nodes = np.array([_bs_root(L, l, q0, q1) for l in range(L)])
    weights = 1.0 / (2 * L + u_q(nodes, q0) + u_q(nodes, q1))
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return OneDimQuadrature(L, float(q0), float(q1), nodes, weights)


def _check_nm(ensemble, n, m):
    if not isinstance(n, (int, np.integer)) or not isinstance(m, (int, np.integer)):
        raise ParameterError("n and m must be integers")
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if ensemble == "a" and n < 2:
        raise ParameterError(f"type a requires n >= 2, got {n}")
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")


def _closed_form_node(lam, xi, params=None):
    gnorm = 0.0
    if params is not None:
        gnorm = float(np.max(np.abs(morse_gradient(params.ensemble, lam, xi, params))))
    return Node(lam, xi, gnorm, 0)


def schur_rule_a(n: int, m: int) -> CubatureRule:
    """``q = 0`` type-a rule: nodes ``2 pi (rho + lam)/(m + n)`` with uniform ``Delta = 1/(n (n+m)^{n-1})``.

    Exact for ``f`` of level ``2m + 1``.
    """
    _check_nm("a", n, m)
    params = RuleParams("a", n, m, 0.0)
    rho = np.array([float(r) for r in fundamental_data("a", n).rho])
    nodes = []
    for lam in enumerate_alcove("a", n, m):
        xi = 2.0 * math.pi * (rho + np.array(lam.float_coords())) / (m + n)
        nodes.append(_closed_form_node(lam, xi, params))
    pts = np.array([nd.xi for nd in nodes])
    delta = np.full(len(nodes), 1.0 / (n * (n + m) ** (n - 1)))
    hat = delta / np.abs(c_factor_values("a", pts, 0.0)) ** 2
    return CubatureRule(params, nodes, hat, delta, "closed-form", "schur", {"exact_level": 2 * m + 1})


def schur_rule_b(n: int, m: int, q0: float = 0.0, q1: float = 0.0) -> CubatureRule:
    """``q = 0`` type-b rule built from the ``(m + n)``-point Bernstein-Szego quadrature.

    The node for ``lam`` has coordinates ``x_{lam_j + n - j}`` and weight
    ``prod_j w_{lam_j + n - j}``.
    """
    _check_nm("b", n, m)
    params = RuleParams("b", n, m, 0.0, q0, q1)
    quad = bernstein_szego_quadrature(m + n, q0, q1)
    nodes, delta = [], []
    for lam in enumerate_alcove("b", n, m):
        idx = [p + n - 1 - j for j, p in enumerate(lam.partition)]
        nodes.append(_closed_form_node(lam, quad.nodes[idx], params))
        delta.append(float(np.prod(quad.weights[idx])))
    pts = np.array([nd.xi for nd in nodes])
    delta = np.array(delta)
    hat = delta / np.abs(c_factor_values("b", pts, 0.0, q0)) ** 2
    kind = "symplectic-schur" if q0 == 0 and q1 == 0 else "schur"
    exact = 2 * m + 1 if q1 == 0 else 2 * m
    return CubatureRule(params, nodes, hat, delta, "closed-form", kind, {"exact_level": exact})


def monomial_rule_a(n: int, m: int) -> CubatureRule:
    """``q = 1`` type-a rule for the flat measure on the alcove.

    Nodes ``2 pi lam / m`` (on the alcove closure) with weights
    ``delta_lam(1)/(n m^{n-1})``; exact for ``f`` of level ``2m - 1``.  Both
    ``weights_hat`` and ``weights`` equal these values since ``|C|^{-2} = 1``
    at ``q = 1``.
    """
    _check_nm("a", n, m)
    params = RuleParams("a", n, m, 1.0)
    nodes, w = [], []
    scale = Fraction(1, n * m ** (n - 1))
    for lam in enumerate_alcove("a", n, m):
        xi = 2.0 * math.pi * np.array(lam.float_coords()) / m
        nodes.append(Node(lam, xi, 0.0, 0))
        w.append(float(delta_norm_at_one(lam, m) * scale))
    w = np.array(w)
    return CubatureRule(
        params, nodes, w, w, "closed-form", "monomial", {"exact_level": 2 * m - 1},
        density_values=np.ones(len(w)),
    )


def symmetrized_quadrature_b(n: int, m: int, q0: float = 0.0, q1: float = 0.0) -> CubatureRule:
    """``q = 1`` type-b rule: symmetric restriction of an ``n``-fold product quadrature.

    Coordinates are the ``(m+1)``-point Bernstein-Szego nodes ``x_{lam_j}``
    (coinciding when ``lam`` has repeated parts).  ``weights`` are
    ``delta_lam(1) prod_j w_{lam_j}``; ``weights_hat`` multiply in the
    one-variable weight ``4 sin^2 x / (1 - 2 q0 cos x + q0^2)`` per
    coordinate, so that ``sum f hat-Delta`` integrates ``f |C(.; 1, q0)|^{-2}``.
    Exact for ``f`` of level ``2m`` (``2m + 1`` when ``q1 = 0``).
    """
    _check_nm("b", n, m)
    params = RuleParams("b", n, m, 1.0, q0, q1)
    quad = bernstein_szego_quadrature(m + 1, q0, q1)
    one_dim_density = quad.density() / quad.pole_factor()
    nodes, w, hat, dens = [], [], [], []
    for lam in enumerate_alcove("b", n, m):
        idx = list(lam.partition)
        d1 = float(delta_norm_at_one(lam, m))
        nodes.append(Node(lam, quad.nodes[idx], 0.0, 0))
        w.append(d1 * float(np.prod(quad.weights[idx])))
        hat.append(w[-1] * float(np.prod(one_dim_density[idx])))
        dens.append(float(np.prod(quad.density()[idx])))
    exact = 2 * m + 1 if q1 == 0 else 2 * m
    return CubatureRule(
        params, nodes, np.array(hat), np.array(w), "closed-form", "symmetrized",
        {"exact_level": exact}, density_values=np.array(dens),
    )
