"""Hall-Littlewood polynomials of type A_{n-1} and Macdonald's hyperoctahedral
(BC_n) variant, evaluated by direct symmetrization over the Weyl group.

All evaluations work with angle vectors ``xi`` (the eigenvalue angles).  The
group is ``S_n`` for ensemble ``"a"`` and the signed permutations
``S_n x {+1,-1}^n`` for ensemble ``"b"``; group images of ``xi`` are formed
as ``(eps_1 xi_{s_1}, ..., eps_n xi_{s_n})``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ParameterError, ResourceError, SingularConfigurationError
from .lattice import Weight, check_ensemble, multiplicity

__all__ = [
    "RuleParams",
    "SymmetricPolynomial",
    "SINGULAR_TOL",
    "group_order",
    "group_images",
    "c_factor",
    "c_factor_values",
    "eval_hl",
    "eval_hl_table",
    "eval_hl_vector",
    "eval_monomial",
    "monomial_orbit",
    "norm_N",
    "delta_norm",
    "delta_norm_at_one",
    "constant_term",
    "reduced_shell_weight",
    "eval_quasi_orthogonal",
    "straightening_check",
    "affine_straightening_check",
]

SINGULAR_TOL = 1e-13
MAX_GROUP_ORDER = 4_000_000
_CHUNK = 50_000


def _check_q(name: str, value: float, allow_one: bool = False) -> float:
    value = float(value)
    if allow_one and value == 1.0:
        return value
    if not -1.0 < value < 1.0:
        raise ParameterError(f"{name} must lie in the open interval (-1, 1), got {value}")
    return value


@dataclass(frozen=True)
class RuleParams:
    """Ensemble, dimension ``n``, level ``m`` and deformation parameters.

    ``q`` may be exactly 1 only for the closed-form ``q = 1`` evaluation
    paths; node solvers reject it.  ``q0`` and ``q1`` are ignored for type a.
    """

    ensemble: str
    n: int
    m: int
    q: float
    q0: float = 0.0
    q1: float = 0.0

    def __post_init__(self):
        check_ensemble(self.ensemble)
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise ParameterError(f"n must be an integer, got {self.n!r}")
        if not isinstance(self.m, (int, np.integer)) or isinstance(self.m, bool):
            raise ParameterError(f"m must be an integer, got {self.m!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "m", int(self.m))
        if self.ensemble == "a" and self.n < 2:
            raise ParameterError(f"type a requires n >= 2, got n={self.n}")
        if self.n < 1:
            raise ParameterError(f"n must be positive, got n={self.n}")
        if self.m < 1:
            raise ParameterError(f"level m must be >= 1, got m={self.m}")
        object.__setattr__(self, "q", _check_q("q", self.q, allow_one=True))
        object.__setattr__(self, "q0", _check_q("q0", self.q0))
        object.__setattr__(self, "q1", _check_q("q1", self.q1))

    @property
    def n_c(self) -> int:
        """Rank of the root system: ``n - 1`` for type a, ``n`` for type b."""
        return self.n - 1 if self.ensemble == "a" else self.n

    def with_(self, **changes) -> "RuleParams":
        values = dict(ensemble=self.ensemble, n=self.n, m=self.m, q=self.q, q0=self.q0, q1=self.q1)
        values.update(changes)
        return RuleParams(**values)

    def as_dict(self) -> dict:
        return dict(ensemble=self.ensemble, n=self.n, m=self.m, q=self.q, q0=self.q0, q1=self.q1)


# --------------------------------------------------------------------------
# group machinery


def group_order(ensemble: str, n: int) -> int:
    return math.factorial(n) * (2**n if ensemble == "b" else 1)


@lru_cache(maxsize=32)
def _group_arrays(ensemble: str, n: int):
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    if ensemble == "a":
        signs = np.ones((len(perms), n))
        return perms, signs
    eps = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    perms = np.repeat(perms, len(eps), axis=0)
    signs = np.tile(eps, (math.factorial(n), 1))
    return perms, signs


def _iter_group_chunks(ensemble: str, n: int):
    """Yield ``(perms, signs)`` blocks covering the whole group."""
    order = group_order(ensemble, n)
    if order > MAX_GROUP_ORDER:
        raise ResourceError(
            f"group of order {order} too large for direct symmetrization (n={n}, type {ensemble})"
        )
    if order <= _CHUNK:
        yield _group_arrays(ensemble, n)
        return
    eps_list = (
        np.array(list(itertools.product((1.0, -1.0), repeat=n)))
        if ensemble == "b"
        else np.ones((1, n))
    )
    per_block = max(1, _CHUNK // len(eps_list))
    perm_iter = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(perm_iter, per_block))
        if not block:
            return
        perms = np.repeat(np.array(block, dtype=np.intp), len(eps_list), axis=0)
        signs = np.tile(eps_list, (len(block), 1))
        yield perms, signs


def group_images(ensemble: str, xi) -> np.ndarray:
    """All images ``g . xi`` as an array of shape ``(|G|, n)``."""
    xi = np.asarray(xi, dtype=float)
    blocks = [signs * xi[perms] for perms, signs in _iter_group_chunks(ensemble, len(xi))]
    return np.concatenate(blocks, axis=0)


# --------------------------------------------------------------------------
# C-factors


def _guard(den: np.ndarray) -> None:
    if den.size and np.min(np.abs(den)) < SINGULAR_TOL:
        raise SingularConfigurationError("C-factor denominator vanishes (coinciding or boundary angles)")


def c_factor_values(ensemble: str, X: np.ndarray, q: float, q0: float = 0.0) -> np.ndarray:
    """C-factor evaluated along the last axis of ``X`` (shape ``(..., n)``)."""
    X = np.asarray(X, dtype=float)
    n = X.shape[-1]
    j, k = np.triu_indices(n, 1)
    diff = X[..., j] - X[..., k]
    e = np.exp(-1j * diff)
    den = 1.0 - e
    _guard(den)
    out = np.prod((1.0 - q * e) / den, axis=-1)
    if ensemble == "b":
        e = np.exp(-1j * (X[..., j] + X[..., k]))
        den = 1.0 - e
        _guard(den)
        out = out * np.prod((1.0 - q * e) / den, axis=-1)
        den = 1.0 - np.exp(-2j * X)
        _guard(den)
        out = out * np.prod((1.0 - q0 * np.exp(-1j * X)) / den, axis=-1)
    return out


def c_factor(ensemble: str, xi, params: RuleParams) -> complex:
    """``C_a(xi; q)`` or ``C_b(xi; q, q0)`` at a single angle vector."""
    check_ensemble(ensemble)
    xi = np.asarray(xi, dtype=float)
    return complex(c_factor_values(ensemble, xi, params.q, params.q0))


# --------------------------------------------------------------------------
# Hall-Littlewood polynomials


def _exponent(mu) -> np.ndarray:
    if isinstance(mu, Weight):
        return np.array(mu.float_coords())
    return np.asarray(mu, dtype=float)


def _check_weight(mu: Weight, ensemble: str, n: int) -> None:
    if mu.ensemble != ensemble or mu.n != n:
        raise ParameterError(f"weight {mu} does not belong to type {ensemble}, n={n}")


def _hl_sum(ensemble: str, exps: np.ndarray, xi: np.ndarray, q: float, q0: float) -> np.ndarray:
    """Symmetrized sum for a stack of exponent vectors ``exps`` (shape ``(K, n)``)."""
    total = np.zeros(len(exps), dtype=complex)
    for perms, signs in _iter_group_chunks(ensemble, len(xi)):
        X = signs * xi[perms]
        C = c_factor_values(ensemble, X, q, q0)
        total += C @ np.exp(1j * (X @ exps.T))
    return total


def _p_one_dim(l: int, theta: np.ndarray, q0: float) -> np.ndarray:
    c_plus = (1.0 - q0 * np.exp(-1j * theta)) / (1.0 - np.exp(-2j * theta))
    c_minus = (1.0 - q0 * np.exp(1j * theta)) / (1.0 - np.exp(2j * theta))
    return c_plus * np.exp(1j * l * theta) + c_minus * np.exp(-1j * l * theta)


def _hl_at_q_one(mu: Weight, xi: np.ndarray, params: RuleParams) -> complex:
    if params.ensemble == "a":
        return complex(float(norm_N(mu)) * eval_monomial(mu, xi))
    # product of one-variable Bernstein-Szego polynomials, symmetrized over S_n
    _guard(1.0 - np.exp(-2j * xi))
    parts = mu.partition
    total = 0j
    for perm in itertools.permutations(range(len(xi))):
        term = 1 + 0j
        for j, s in enumerate(perm):
            term *= _p_one_dim(parts[j], xi[s], params.q0)
        total += term
    return complex(total)


def eval_hl(mu: Weight, xi, params: RuleParams) -> complex:
    """Evaluate ``P_mu(xi; q)`` (type a) or ``P_mu(xi; q, q0)`` (type b).

    At ``q = 1`` the closed forms ``N_mu M_mu`` (type a) and the symmetrized
    product of one-variable polynomials (type b) are used instead of the
    divergent C-factors.
    """
    xi = np.asarray(xi, dtype=float)
    _check_weight(mu, params.ensemble, params.n)
    if len(xi) != params.n:
        raise ParameterError(f"expected {params.n} angles, got {len(xi)}")
    if params.q == 1.0:
        return _hl_at_q_one(mu, xi, params)
    return complex(_hl_sum(params.ensemble, _exponent(mu)[None, :], xi, params.q, params.q0)[0])


def eval_hl_table(weights: Sequence[Weight], xi, params: RuleParams) -> np.ndarray:
    """``P_mu(xi)`` for every weight in ``weights`` at one angle vector."""
    xi = np.asarray(xi, dtype=float)
    if params.q == 1.0:
        return np.array([_hl_at_q_one(mu, xi, params) for mu in weights])
    for mu in weights:
        _check_weight(mu, params.ensemble, params.n)
    exps = np.array([mu.float_coords() for mu in weights])
    return _hl_sum(params.ensemble, exps, xi, params.q, params.q0)


def eval_hl_vector(ensemble: str, exponent: Sequence, xi, params: RuleParams) -> complex:
    """Hall-Littlewood sum for an arbitrary (possibly non-dominant) exponent.

    For type a an integer vector ``p`` stands for the weight ``p - mean(p)``.
    """
    check_ensemble(ensemble)
    exps = np.asarray(exponent, dtype=float)
    if ensemble == "a":
        exps = exps - exps.mean()
    xi = np.asarray(xi, dtype=float)
    return complex(_hl_sum(ensemble, exps[None, :], xi, params.q, params.q0)[0])


# --------------------------------------------------------------------------
# symmetric monomials and norms


@lru_cache(maxsize=4096)
def _orbit_cached(mu: Weight) -> np.ndarray:
    parts = mu.partition
    n = len(parts)
    seen = set()
    signs = itertools.product((1, -1), repeat=n) if mu.ensemble == "b" else [(1,) * n]
    signs = list(signs)
    for perm in itertools.permutations(parts):
        for eps in signs:
            seen.add(tuple(e * p for e, p in zip(eps, perm)))
    orbit = np.array(sorted(seen), dtype=float)
    if mu.ensemble == "a":
        orbit -= orbit.mean(axis=1, keepdims=True)
    orbit.setflags(write=False)
    return orbit


def monomial_orbit(mu: Weight) -> np.ndarray:
    """Distinct group images of ``mu`` (the exponents appearing in ``M_mu``)."""
    return _orbit_cached(mu)


def eval_monomial(mu: Weight, xi) -> complex | np.ndarray:
    """Symmetric monomial ``M_mu``; ``xi`` may carry leading batch axes."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != mu.n:
        raise ParameterError(f"expected {mu.n} angles, got {xi.shape[-1]}")
    vals = np.exp(1j * (xi @ monomial_orbit(mu).T)).sum(axis=-1)
    return complex(vals) if vals.ndim == 0 else vals


def norm_N(mu: Weight) -> Fraction:
    """Stabilizer normalization ``N_mu`` (exact)."""
    parts = mu.partition
    n = len(parts)
    out = Fraction(1)
    for j in range(n):
        for k in range(j + 1, n):
            if parts[j] == parts[k]:
                out *= Fraction(1 + k - j, k - j)
    if mu.ensemble == "b":
        out *= 2 ** multiplicity(0, parts)
    return out


def delta_norm(mu: Weight, params: RuleParams) -> float:
    """Weight ``delta_mu(q)`` of the discrete orthogonality relations."""
    _check_weight(mu, params.ensemble, params.n)
    if mu.level > params.m:
        raise ParameterError(f"weight {mu} lies outside the level-{params.m} alcove")
    if params.q == 1.0:
        return float(delta_norm_at_one(mu, params.m))
    q = params.q
    parts = mu.partition
    n = len(parts)
    out = 1.0
    for j in range(n):
        for k in range(j + 1, n):
            gap = parts[j] - parts[k]
            if gap == 0:
                out *= (1.0 - q ** (k - j)) / (1.0 - q ** (1 + k - j))
            elif params.ensemble == "a" and gap == params.m:
                out *= (1.0 - q ** (n - k + j)) / (1.0 - q ** (n + 1 - k + j))
    return out


def delta_norm_at_one(mu: Weight, m: int) -> Fraction:
    """The ``q -> 1`` limit of :func:`delta_norm`, in exact arithmetic."""
    parts = mu.partition
    n = len(parts)
    out = Fraction(1)
    for j in range(n):
        for k in range(j + 1, n):
            gap = parts[j] - parts[k]
            if gap == 0:
                out *= Fraction(k - j, 1 + k - j)
            elif mu.ensemble == "a" and gap == m:
                out *= Fraction(n - k + j, n + 1 - k + j)
    return out


def constant_term(params: RuleParams) -> float:
    """``prod_{j=1}^n (1 - q^j)/(1 - q)``, the value of ``P_0``."""
    q = params.q
    if q == 1.0:
        return float(math.factorial(params.n))
    out = 1.0
    for j in range(1, params.n + 1):
        out *= sum(q**i for i in range(j))
    return out


# --------------------------------------------------------------------------
# quasi-orthogonal polynomials and straightening identities


def reduced_shell_weight(mu: Weight, params: RuleParams) -> tuple[float, Weight]:
    """Coefficient and weight of the correction term of ``Q_mu``.

    Returns ``(c, nu)`` with ``Q_mu = P_mu - c P_nu`` and ``nu`` of level ``m``.
    """
    _check_weight(mu, params.ensemble, params.n)
    if mu.level != params.m + 1:
        raise ParameterError(f"weight {mu} is not in the level-{params.m + 1} shell")
    parts = list(mu.partition)
    n = len(parts)
    top = multiplicity(parts[0], parts)
    if params.ensemble == "a":
        bottom = multiplicity(parts[-1], parts)
        for j in range(1, min(top, bottom) + 1):
            parts[top - j] -= 1
            parts[n - bottom + j - 1] += 1
        coef = params.q ** (top * bottom)
    else:
        for j in range(top):
            parts[j] -= 1
        coef = params.q ** (top * (top - 1) // 2) * params.q1**top
    return coef, Weight.from_partition(params.ensemble, parts)


def eval_quasi_orthogonal(mu: Weight, xi, params: RuleParams) -> complex:
    """``Q_mu(xi)`` for ``mu`` in the level-``(m+1)`` shell."""
    coef, nu = reduced_shell_weight(mu, params)
    vals = eval_hl_table([mu, nu], xi, params)
    return complex(vals[0] - coef * vals[1])


def straightening_check(ensemble: str, mu: Sequence[int], xi, params: RuleParams) -> float:
    """Residual ``|P_mu - q P_{mu + e_j - e_{j+1}}|`` at the first ``j`` with ``mu_j - mu_{j+1} = -1``."""
    mu = [int(x) for x in mu]
    j = next((i for i in range(len(mu) - 1) if mu[i] - mu[i + 1] == -1), None)
    if j is None:
        raise ParameterError(f"{mu} has no adjacent pair with mu_j - mu_(j+1) = -1")
    swapped = list(mu)
    swapped[j] += 1
    swapped[j + 1] -= 1
    lhs = eval_hl_vector(ensemble, mu, xi, params)
    rhs = params.q * eval_hl_vector(ensemble, swapped, xi, params)
    return abs(lhs - rhs)


def affine_straightening_check(ensemble: str, mu: Sequence[int], xi, params: RuleParams) -> float:
    """Residual of the affine straightening rule (valid only at cubature nodes).

    Type a requires ``mu_1 - mu_n = m + 1`` and compares with
    ``q P_{mu - e_1 + e_n}``; type b requires ``mu_1 = m + 1`` and compares with
    ``q1 P_{mu - e_1}``.
    """
    mu = [int(x) for x in mu]
    shifted = list(mu)
    if ensemble == "a":
        if mu[0] - mu[-1] != params.m + 1:
            raise ParameterError(f"need mu_1 - mu_n = m + 1, got {mu}")
        shifted[0] -= 1
        shifted[-1] += 1
        factor = params.q
    else:
        if mu[0] != params.m + 1:
            raise ParameterError(f"need mu_1 = m + 1, got {mu}")
        shifted[0] -= 1
        factor = params.q1
    lhs = eval_hl_vector(ensemble, mu, xi, params)
    rhs = factor * eval_hl_vector(ensemble, shifted, xi, params)
    return abs(lhs - rhs)


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetricPolynomial:
    """Finite linear combination ``sum_mu c_mu M_mu`` of symmetric monomials."""

    ensemble: str
    n: int
    terms: Mapping[Weight, complex] = field(default_factory=dict)

    def __post_init__(self):
        check_ensemble(self.ensemble)
        clean = {}
        for mu, c in self.terms.items():
            _check_weight(mu, self.ensemble, self.n)
            if c != 0:
                clean[mu] = complex(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, mu: Weight, coeff: complex = 1.0) -> "SymmetricPolynomial":
        return cls(mu.ensemble, mu.n, {mu: coeff})

    @classmethod
    def constant(cls, ensemble: str, n: int, value: complex = 1.0) -> "SymmetricPolynomial":
        return cls(ensemble, n, {Weight.zero(ensemble, n): value})

    @property
    def level(self) -> int:
        return max((mu.level for mu in self.terms), default=0)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape[:-1], dtype=complex)
        for mu, c in self.terms.items():
            out = out + c * eval_monomial(mu, xi)
        return complex(out) if out.ndim == 0 else out

    def to_json(self) -> dict:
        return {
            "ensemble": self.ensemble,
            "n": self.n,
            "terms": [
                {"labels": list(mu.labels), "re": c.real, "im": c.imag} for mu, c in self.terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SymmetricPolynomial":
        ensemble = data["ensemble"]
        n = int(data["n"])
        terms: dict[Weight, complex] = {}
        for t in data["terms"]:
            if "partition" in t:
                mu = Weight.from_partition(ensemble, t["partition"])
            else:
                mu = Weight(ensemble, tuple(t["labels"]))
            coeff = complex(t.get("re", t.get("coeff", 0.0)), t.get("im", 0.0))
            terms[mu] = terms.get(mu, 0) + coeff
        return cls(ensemble, n, terms)


def _iterable_weights(weights: Iterable[Weight]) -> list[Weight]:
    return list(weights)
