"""Reference computations that share no code with the main evaluation path.

``brute_force_hl`` sums the defining group expansion term by term in plain
Python complex arithmetic.  ``integrate_alcove`` integrates over the alcove
written as a simplex of angle gaps (collapsed coordinates, tensor Gauss-Jacobi
rules, order refinement); ``integrate_torus`` is a second, unrelated route
through the periodic trapezoidal rule on the full torus.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .errors import AccuracyError, ParameterError

__all__ = [
    "QuadratureResult",
    "brute_force_hl",
    "hl_weight",
    "integrate_alcove",
    "integrate_torus",
    "alcove_volume_factor",
    "monomial_table",
]


def _coords(mu):
    # exponent vector from a Weight (labels) without touching the hallpoly code
    labels = list(mu.labels)
    if mu.ensemble == "b":
        return [float(sum(labels[j:])) for j in range(len(labels))]
    n = len(labels) + 1
    parts = [sum(labels[j:]) for j in range(n - 1)] + [0]
    shift = sum(parts) / n
    return [p - shift for p in parts]


def _c_term(ensemble, y, q, q0):
    n = len(y)
    c = 1 + 0j
    for j in range(n):
        for k in range(j + 1, n):
            z = cmath.exp(-1j * (y[j] - y[k]))
            c *= (1 - q * z) / (1 - z)
            if ensemble == "b":
                z = cmath.exp(-1j * (y[j] + y[k]))
                c *= (1 - q * z) / (1 - z)
        if ensemble == "b":
            c *= (1 - q0 * cmath.exp(-1j * y[j])) / (1 - cmath.exp(-2j * y[j]))
    return c


def brute_force_hl(mu, xi, params) -> complex:
    """Hall-Littlewood polynomial by a literal loop over the Weyl group (``n <= 4``)."""
    n = len(xi)
    if n > 4:
        raise ParameterError("brute_force_hl is limited to n <= 4")
    ens = params.ensemble
    exps = _coords(mu)
    sign_choices = list(itertools.product((1, -1), repeat=n)) if ens == "b" else [(1,) * n]
    total = 0j
    for perm in itertools.permutations(range(n)):
        for eps in sign_choices:
            y = [eps[j] * float(xi[perm[j]]) for j in range(n)]
            phase = sum(y[j] * exps[j] for j in range(n))
            total += _c_term(ens, y, params.q, params.q0) * cmath.exp(1j * phase)
    return total


def hl_weight(ensemble: str, xi, q: float, q0: float = 0.0):
    """``|C(xi)|^{-2}`` from the product of C-factors; ``xi`` may be a batch ``(P, n)``."""
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    w = np.ones(xi.shape[:-1])
    for j in range(n):
        for k in range(j + 1, n):
            z = np.exp(-1j * (xi[..., j] - xi[..., k]))
            w = w * np.abs((1 - z) / (1 - q * z)) ** 2
            if ensemble == "b":
                z = np.exp(-1j * (xi[..., j] + xi[..., k]))
                w = w * np.abs((1 - z) / (1 - q * z)) ** 2
        if ensemble == "b":
            w = w * np.abs((1 - np.exp(-2j * xi[..., j])) / (1 - q0 * np.exp(-1j * xi[..., j]))) ** 2
    return w


def _distinct_permutations(mu):
    # integer representative of the weight; type a gets a trailing zero
    labels = list(mu.labels)
    parts = tuple(sum(labels[j:]) for j in range(len(labels)))
    if mu.ensemble == "a":
        parts = parts + (0,)
    return np.array(sorted(set(itertools.permutations(parts))), dtype=int)


def monomial_table(weights, xi, chunk: int = 20_000) -> np.ndarray:
    """Symmetric monomials for many weights at many points: shape ``(P, K)``.

    Type a sums ``exp(i <pi, xi>)`` over the distinct permutations ``pi`` of
    the integer representative (valid because the points lie on the
    zero-sum hyperplane).  Type b sums ``prod_j c_{pi_j}(xi_j)`` with
    ``c_0 = 1`` and ``c_k = 2 cos(k x)``, which enumerates each signed
    permutation exactly once; the result is real.
    """
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    P, n = xi.shape
    if not weights:
        return np.zeros((P, 0))
    ensemble = weights[0].ensemble
    perms = [_distinct_permutations(mu) for mu in weights]
    top = max(int(p.max()) for p in perms)
    k = np.arange(top + 1)
    out = np.zeros((P, len(weights)), dtype=complex if ensemble == "a" else float)
    for start in range(0, P, chunk):
        x = xi[start : start + chunk]
        if ensemble == "a":
            E = np.exp(1j * x[:, :, None] * k[None, None, :])
        else:
            E = 2.0 * np.cos(x[:, :, None] * k[None, None, :])
            E[:, :, 0] = 1.0
        for col, perm in enumerate(perms):
            term = E[:, 0, perm[:, 0]]
            for j in range(1, n):
                term = term * E[:, j, perm[:, j]]
            out[start : start + chunk, col] = term.sum(axis=1)
    return out


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    error_estimate: float
    evaluations: int


def alcove_volume_factor(ensemble: str, n: int) -> float:
    """Normalized alcove volume: ``1/n!`` (type a) or ``1/(2^n n!)`` (type b)."""
    if ensemble == "a":
        return 1.0 / math.factorial(n)
    return 1.0 / (2**n * math.factorial(n))


def _simplex_rule(dim: int, order: int):
    """Points and weights averaging over the standard simplex ``{t >= 0, sum t <= 1}``."""
    grids, wts = [], []
    for i in range(dim):
        # (1 - u_i)^{dim - 1 - i} is absorbed into a Gauss-Jacobi weight
        a = dim - 1 - i
        x, w = roots_jacobi(order, a, 0)
        grids.append(0.5 * (x + 1.0))
        wts.append(w / 2.0 ** (a + 1))
    U = np.stack(np.meshgrid(*grids, indexing="ij"), axis=-1).reshape(-1, dim)
    W = np.ones(1)
    for w in wts:
        W = np.multiply.outer(W, w).ravel()
    T = np.empty_like(U)
    rest = np.ones(len(U))
    for i in range(dim):
        T[:, i] = rest * U[:, i]
        rest = rest * (1.0 - U[:, i])
    return T, W * math.factorial(dim)


def _gaps_to_angles(ensemble: str, n: int, T: np.ndarray) -> np.ndarray:
    if ensemble == "a":
        gaps = 2.0 * math.pi * T  # g_1..g_{n-1}; the closing gap is implicit
        xi = np.zeros((len(T), n))
        xi[:, 1:] = -np.cumsum(gaps, axis=1)
        return xi - xi.mean(axis=1, keepdims=True)
    gaps = math.pi * T
    return np.cumsum(gaps[:, ::-1], axis=1)[:, ::-1]


def _weighted_sum(integrand, X, W, chunk=50_000):
    # sum_i W_i f(X_i) without holding all integrand values at once
    total = 0.0
    for i in range(0, len(X), chunk):
        total = total + np.tensordot(W[i : i + chunk], np.asarray(integrand(X[i : i + chunk])), axes=(0, 0))
    return total


def _converged(err, val, rel_tol, abs_tol):
    return np.all(np.abs(err) <= np.maximum(abs_tol, rel_tol * np.abs(val)))


def integrate_alcove(
    ensemble: str,
    integrand,
    n: int,
    rel_tol: float = 1e-8,
    abs_tol: float = 0.0,
    budget: int = 100_000_000,
    orders=(8, 12, 16, 24, 32, 48, 64, 96, 128, 192),
) -> QuadratureResult:
    """Normalized integral of ``integrand`` over the alcove.

    The integrand receives an array of angle vectors of shape ``(P, n)`` and
    returns shape ``(P,)`` or ``(P, K)`` (several integrands at once).  The
    normalization makes the integral of 1 equal to :func:`alcove_volume_factor`.
    Orders are refined until two successive results agree to
    ``max(abs_tol, rel_tol |value|)``; the difference is the error estimate.

    Raises
    ------
    AccuracyError
        If the tolerance is not met within ``budget`` evaluations; the best
        estimate is attached as ``exc.result``.
    """
    if ensemble not in ("a", "b"):
        raise ParameterError(f"unknown ensemble {ensemble!r}")
    if n > 4 or n < (2 if ensemble == "a" else 1):
        raise ParameterError(f"integrate_alcove supports n <= 4 (got n={n}, type {ensemble})")
    dim = n - 1 if ensemble == "a" else n
    scale = alcove_volume_factor(ensemble, n)
    prev = None
    used = 0
    for order in orders:
        if used + order**dim > budget:
            break
        T, W = _simplex_rule(dim, order)
        used += len(W)
        cur = scale * _weighted_sum(integrand, _gaps_to_angles(ensemble, n, T), W)
        if prev is not None:
            err = np.abs(cur - prev)
            if _converged(err, cur, rel_tol, abs_tol):
                return QuadratureResult(_squeeze(cur), float(np.max(err)), used)
        prev = cur
    best = QuadratureResult(_squeeze(prev), float("inf") if prev is None else float(np.max(err)), used)
    raise AccuracyError(f"alcove quadrature did not reach rel_tol={rel_tol:g} within budget", best)


def _squeeze(v):
    v = np.asarray(v)
    if v.ndim == 0:
        v = v.item()
        return v.real if isinstance(v, complex) and v.imag == 0 else v
    return v


def integrate_torus(ensemble: str, integrand, n: int, points: int = 64) -> QuadratureResult:
    """Alcove integral of a symmetric integrand via the full torus.

    Uses the periodic trapezoidal rule with ``points`` nodes per angle and
    divides by the order of the Weyl group.  Type a samples
    ``(t_1, ..., t_{n-1}, -sum t)``.
    """
    dim = n - 1 if ensemble == "a" else n
    t = 2.0 * math.pi * np.arange(points) / points
    grid = np.stack(np.meshgrid(*([t] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    if ensemble == "a":
        X = np.concatenate([grid, -grid.sum(axis=1, keepdims=True)], axis=1)
    else:
        X = grid
    value = alcove_volume_factor(ensemble, n) * _weighted_sum(integrand, X, np.full(len(X), 1.0 / len(X)))
    return QuadratureResult(_squeeze(value), float("nan"), len(X))
