"""Smooth non-polynomial integrands used for the accuracy comparisons.

Each factory returns ``R(xi)``, meant to be integrated against the ensemble
density ``rho`` (``apply_rule(rule, R, density=True)``); ``R`` accepts a single
angle vector or a batch ``(P, n)``.
"""
from __future__ import annotations

import numpy as np

from .cubature import denominator_O, density_rho
from .hallpoly import RuleParams

__all__ = ["exp_cos_a", "exp_cos_b", "weighted"]


def exp_cos_a(n: int, q: float):
    """``exp(sum_j cos(xi_j) / 2) / O_a(xi; q)``."""
    p = RuleParams("a", n, 1, q)

    def R(xi):
        xi = np.asarray(xi, dtype=float)
        return np.exp(0.5 * np.cos(xi).sum(axis=-1)) / denominator_O("a", xi, p)

    return R


def exp_cos_b(n: int, q: float, q0: float):
    """``exp(sum_j cos(xi_j)) / O_b(xi; q, q0)``."""
    p = RuleParams("b", n, 1, q, q0)

    def R(xi):
        xi = np.asarray(xi, dtype=float)
        return np.exp(np.cos(xi).sum(axis=-1)) / denominator_O("b", xi, p)

    return R


def weighted(ensemble: str, R):
    """``R * rho``, the integrand handed to the alcove oracle."""

    def f(xi):
        return R(xi) * density_rho(ensemble, xi)

    return f
