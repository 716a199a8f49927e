"""Cubature nodes as minimizers of strictly convex Morse functions.

The node attached to a dominant weight ``lam`` is the unique critical point of
a potential ``V`` whose gradient is available in closed form through the
functions :func:`v_q` and whose Hessian is built from :func:`u_q`.  Nodes are
computed by Newton's method started from the ``q = 0`` solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .errors import ConvergenceError, ParameterError
from .hallpoly import RuleParams
from .lattice import Weight, enumerate_alcove, fundamental_data

__all__ = [
    "Node",
    "NewtonReport",
    "NodeBounds",
    "v_q",
    "u_q",
    "morse_gradient",
    "morse_hessian",
    "initial_estimate",
    "node_bounds",
    "solve_node",
    "solve_all_nodes",
    "bae_residual",
    "newton_convergence_table",
]

TWO_PI = 2.0 * math.pi

# 8-point Gauss-Legendre rule on [0, 1] for line integrals of the gradient
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W

ARMIJO = 1e-4
# below this gradient norm the potential difference drowns in rounding, so a
# decrease of the gradient norm is accepted instead
_ROUNDOFF_GRAD = 1e-8


def _check_open_q(q, name="q"):
    if not -1.0 < q < 1.0:
        raise ParameterError(f"{name} must lie in (-1, 1) for node computations, got {q}")


def v_q(theta, q):
    """Odd, increasing primitive of :func:`u_q` with ``v_q(t + 2 pi) = v_q(t) + 2 pi``.

    Parameters
    ----------
    theta : float or ndarray
        Angle(s) in radians.
    q : float
        Deformation parameter in (-1, 1).
    """
    _check_open_q(q)
    theta = np.asarray(theta, dtype=float)
    k = np.round(theta / TWO_PI)
    r = theta - TWO_PI * k
    c = (1.0 + q) / (1.0 - q)
    with np.errstate(over="ignore", invalid="ignore"):
        core = 2.0 * np.arctan(c * np.tan(0.5 * r))
    # tan blows up at r = +-pi; the limit there is +-pi
    core = np.where(np.abs(r) >= math.pi, np.sign(r) * math.pi, core)
    out = core + TWO_PI * k
    return float(out) if out.ndim == 0 else out


def u_q(theta, q):
    """Poisson-kernel type weight ``(1 - q^2)/(1 - 2 q cos(theta) + q^2)``."""
    _check_open_q(q)
    theta = np.asarray(theta, dtype=float)
    out = (1.0 - q * q) / (1.0 - 2.0 * q * np.cos(theta) + q * q)
    return float(out) if out.ndim == 0 else out


def _rho(ensemble: str, n: int) -> np.ndarray:
    return np.array([float(r) for r in fundamental_data(ensemble, n).rho])


def _lam_vec(lam: Weight, params: RuleParams) -> np.ndarray:
    if lam.ensemble != params.ensemble or lam.n != params.n:
        raise ParameterError(f"weight {lam} does not match params (type {params.ensemble}, n={params.n})")
    return np.array(lam.float_coords())


def _check_params(ensemble: str, params: RuleParams) -> None:
    if ensemble != params.ensemble:
        raise ParameterError(f"ensemble {ensemble!r} does not match params.ensemble {params.ensemble!r}")
    _check_open_q(params.q)


def morse_gradient(ensemble: str, lam: Weight, xi, params: RuleParams) -> np.ndarray:
    """Gradient of the Morse function ``V_lam`` at ``xi``; it vanishes exactly at the node."""
    _check_params(ensemble, params)
    xi = np.asarray(xi, dtype=float)
    target = TWO_PI * (_lam_vec(lam, params) + _rho(ensemble, params.n))
    diff = xi[:, None] - xi[None, :]
    pair = v_q(diff, params.q)
    np.fill_diagonal(pair, 0.0)
    if ensemble == "a":
        return params.m * xi + pair.sum(axis=1) - target
    plus = v_q(xi[:, None] + xi[None, :], params.q)
    np.fill_diagonal(plus, 0.0)
    return (
        2 * (params.m + 1) * xi
        + v_q(xi, params.q0)
        + v_q(xi, params.q1)
        + pair.sum(axis=1)
        + plus.sum(axis=1)
        - target
    )


def morse_hessian(ensemble: str, xi, params: RuleParams) -> np.ndarray:
    """Hessian of the Morse function (independent of ``lam``)."""
    _check_params(ensemble, params)
    xi = np.asarray(xi, dtype=float)
    U = u_q(xi[:, None] - xi[None, :], params.q)
    np.fill_diagonal(U, 0.0)
    if ensemble == "a":
        H = -U
        H[np.diag_indices_from(H)] = params.m + U.sum(axis=1)
        return H
    Up = u_q(xi[:, None] + xi[None, :], params.q)
    np.fill_diagonal(Up, 0.0)
    H = Up - U
    H[np.diag_indices_from(H)] = (
        2 * (params.m + 1) + u_q(xi, params.q0) + u_q(xi, params.q1) + U.sum(axis=1) + Up.sum(axis=1)
    )
    return H


def initial_estimate(ensemble: str, lam: Weight, params: RuleParams) -> np.ndarray:
    """The ``q = 0`` (``q0 = q1 = 0`` for type b) node, used to start Newton."""
    base = _lam_vec(lam, params) + _rho(ensemble, params.n)
    if ensemble == "a":
        return TWO_PI * base / (params.n + params.m)
    return math.pi * base / (params.n + params.m + 1)


@dataclass(frozen=True)
class NodeBounds:
    """Two-sided a priori bounds on node gaps (and, for type b, coordinates).

    ``gap_lower[j, k] <= xi_j - xi_k <= gap_upper[j, k]`` for ``j < k``;
    type b also carries ``lower <= xi <= upper``.
    """

    gap_lower: np.ndarray
    gap_upper: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def satisfied(self, xi, slack: float = 1e-10) -> bool:
        xi = np.asarray(xi, dtype=float)
        j, k = np.triu_indices(len(xi), 1)
        gaps = xi[j] - xi[k]
        ok = np.all(gaps >= self.gap_lower[j, k] - slack) and np.all(gaps <= self.gap_upper[j, k] + slack)
        if self.lower is not None:
            ok = ok and np.all(xi >= self.lower - slack) and np.all(xi <= self.upper + slack)
        return bool(ok)


def node_bounds(ensemble: str, lam: Weight, params: RuleParams) -> NodeBounds:
    _check_params(ensemble, params)
    n, m = params.n, params.m
    lv = _lam_vec(lam, params)
    idx = np.arange(n)
    num_gap = (idx[None, :] - idx[:, None]) + (lv[:, None] - lv[None, :])

    def ratio(x):
        return (1.0 - abs(x)) / (1.0 + abs(x))

    r = ratio(params.q)
    if ensemble == "a":
        k_minus, k_plus = n / r, n * r
        return NodeBounds(TWO_PI * num_gap / (m + k_minus), TWO_PI * num_gap / (m + k_plus))
    r0, r1 = ratio(params.q0), ratio(params.q1)
    k_minus = 0.5 / r0 + 0.5 / r1 + (n - 1) / r
    k_plus = 0.5 * r0 + 0.5 * r1 + (n - 1) * r
    num = (n - idx) + lv  # n + 1 - j with j 1-based
    return NodeBounds(
        math.pi * num_gap / (m + 1 + k_minus),
        math.pi * num_gap / (m + 1 + k_plus),
        math.pi * num / (m + 1 + k_minus),
        math.pi * num / (m + 1 + k_plus),
    )


@dataclass(frozen=True)
class Node:
    label: Weight
    xi: np.ndarray
    grad_norm: float
    iterations: int

    def __post_init__(self):
        xi = np.array(self.xi, dtype=float)
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)


@dataclass(frozen=True)
class NewtonReport:
    distances: list
    final_grad_norm: float
    iterates: list = field(default_factory=list, repr=False)


def _line_integral(ensemble, lam, x, d, params) -> float:
    # V(x + d) - V(x) = int_0^1 grad V(x + t d) . d dt
    return float(sum(w * morse_gradient(ensemble, lam, x + t * d, params) @ d for t, w in zip(_GL_X, _GL_W)))


def _newton(ensemble, lam, params, tol, max_iter, extra_steps=0):
    x = initial_estimate(ensemble, lam, params)
    g = morse_gradient(ensemble, lam, x, params)
    iterates = [x.copy()]
    it = 0
    polish = extra_steps
    while True:
        gnorm = float(np.max(np.abs(g)))
        if gnorm <= tol:
            if polish <= 0:
                break
            polish -= 1
        if it >= max_iter:
            raise ConvergenceError(
                f"Newton did not reach |grad| <= {tol:g} in {max_iter} iterations "
                f"(|grad| = {gnorm:.3e}, lambda={lam})"
            )
        H = morse_hessian(ensemble, x, params)
        try:
            d = -cho_solve(cho_factor(H), g)
        except LinAlgError as exc:  # cannot happen for |q| < 1, but keep the message clear
            raise ConvergenceError(f"Hessian not positive definite at {x}") from exc
        step = 1.0
        slope = float(g @ d)  # negative: H is positive definite
        for _ in range(40):
            trial = x + step * d
            g_trial = morse_gradient(ensemble, lam, trial, params)
            if gnorm < _ROUNDOFF_GRAD and np.linalg.norm(g_trial) < np.linalg.norm(g):
                break
            if _line_integral(ensemble, lam, x, step * d, params) <= ARMIJO * step * slope:
                break
            step *= 0.5
        if not np.all(np.isfinite(trial)):
            raise ConvergenceError(f"Newton produced non-finite iterate for lambda={lam}")
        if np.array_equal(trial, x) and gnorm > tol:
            raise ConvergenceError(f"Newton stalled at |grad| = {gnorm:.3e} for lambda={lam}")
        x, g = trial, g_trial
        iterates.append(x.copy())
        it += 1
    return x, g, iterates, it


def solve_node(
    ensemble: str,
    lam: Weight,
    params: RuleParams,
    tol: float = 1e-12,
    max_iter: int = 50,
) -> tuple[Node, NewtonReport]:
    """Minimize the Morse function for ``lam`` by Newton's method.

    Full steps are taken unless they fail the Armijo sufficient-decrease test
    on the (strictly convex) potential, whose change along the step is a
    Gauss-Legendre line integral of the gradient; failing steps are halved.

    Returns
    -------
    (Node, NewtonReport)
    """
    _check_params(ensemble, params)
    _lam_vec(lam, params)
    if lam.level > params.m:
        raise ParameterError(f"weight {lam} lies outside the level-{params.m} alcove")
    x, g, iterates, it = _newton(ensemble, lam, params, tol, max_iter)
    gnorm = float(np.max(np.abs(g)))
    report = NewtonReport([float(np.linalg.norm(y - x)) for y in iterates], gnorm, iterates)
    return Node(lam, x, gnorm, it), report


def solve_all_nodes(params: RuleParams, tol: float = 1e-12, max_iter: int = 50) -> list[Node]:
    """Nodes for every weight of the level-``m`` alcove, in enumeration order."""
    return [
        solve_node(params.ensemble, lam, params, tol, max_iter)[0]
        for lam in enumerate_alcove(params.ensemble, params.n, params.m)
    ]


def newton_convergence_table(ensemble: str, lam: Weight, params: RuleParams, steps: int = 4) -> NewtonReport:
    """Distances from the first ``steps`` Newton iterates to the converged node.

    The reference point is polished with two extra Newton steps past the
    default tolerance, so the tail reflects double-precision saturation.
    """
    _check_params(ensemble, params)
    x, g, iterates, _ = _newton(ensemble, lam, params, 1e-12, 50, extra_steps=2)
    dist = [float(np.linalg.norm(y - x)) for y in iterates]
    dist = (dist + [0.0] * steps)[:steps] if steps else dist
    return NewtonReport(dist, float(np.max(np.abs(g))), iterates)


def bae_residual(ensemble: str, node: Node, params: RuleParams) -> float:
    """Maximum residual of the algebraic (Bethe-type) node relations.

    Type a: ``e^{i m xi_j} = e^{2 pi i (lam_j + rho_j)} prod_{k != j} (1 - q z_jk)/(z_jk - q)``
    with ``z_jk = e^{i(xi_j - xi_k)}``.  The phase reduces to ``(-1)^{n-1}``
    only when ``lam`` has integral coordinates.
    """
    _check_params(ensemble, params)
    xi = np.asarray(node.xi, dtype=float)
    n = len(xi)
    q = params.q

    def factor(theta, qq):
        z = np.exp(1j * theta)
        return (1.0 - qq * z) / (z - qq)

    F = factor(xi[:, None] - xi[None, :], q)
    np.fill_diagonal(F, 1.0)
    if ensemble == "a":
        phase = np.exp(TWO_PI * 1j * (_lam_vec(node.label, params) + _rho("a", n)))
        lhs = np.exp(1j * params.m * xi)
        rhs = phase * F.prod(axis=1)
    else:
        Fp = factor(xi[:, None] + xi[None, :], q)
        np.fill_diagonal(Fp, 1.0)
        lhs = np.exp(2j * (params.m + 1) * xi)
        rhs = factor(xi, params.q0) * factor(xi, params.q1) * F.prod(axis=1) * Fp.prod(axis=1)
    return float(np.max(np.abs(lhs - rhs)))
