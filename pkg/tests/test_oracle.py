import math

import numpy as np
import pytest

from hlcubature.cubature import constant_term_value, density_rho
from hlcubature.errors import AccuracyError, ParameterError
from hlcubature.hallpoly import RuleParams, eval_monomial
from hlcubature.lattice import enumerate_alcove
from hlcubature.oracle import (
    alcove_volume_factor,
    hl_weight,
    integrate_alcove,
    integrate_torus,
    monomial_table,
)
from hlcubature.suites import random_alcove_points

CASES = [("a", 2), ("a", 3), ("a", 4), ("b", 1), ("b", 2), ("b", 3)]


@pytest.mark.parametrize("ens, n", CASES)
def test_volume(ens, n):
    res = integrate_alcove(ens, lambda X: np.ones(len(X)), n)
    assert res.value == pytest.approx(alcove_volume_factor(ens, n), rel=1e-14)


@pytest.mark.parametrize("ens, n", CASES)
def test_density_is_a_probability(ens, n):
    # the eigenvalue densities are normalized on the alcove
    res = integrate_alcove(ens, lambda X: density_rho(ens, X), n, rel_tol=1e-12)
    assert res.value == pytest.approx(1.0, rel=1e-11)


@pytest.mark.parametrize("ens, n", [("a", 2), ("a", 3), ("b", 1), ("b", 2)])
@pytest.mark.parametrize("q", [-0.5, 0.3])
def test_constant_term_two_routes(ens, n, q):
    q0 = 0.4 if ens == "b" else 0.0
    f = lambda X: hl_weight(ens, X, q, q0)  # noqa: E731
    alc = integrate_alcove(ens, f, n, rel_tol=1e-11).value
    tor = integrate_torus(ens, f, n, points=96 if n < 3 else 64).value
    expected = constant_term_value(RuleParams(ens, n, 1, q, q0))
    assert alc == pytest.approx(expected, rel=1e-10)
    assert tor == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("ens, n", [("a", 3), ("b", 2), ("b", 3)])
def test_monomial_table_matches_orbit_sums(ens, n, rng):
    X = random_alcove_points(ens, n, 25, rng)
    ws = enumerate_alcove(ens, n, 3)
    T = monomial_table(ws, X)
    direct = np.stack([eval_monomial(mu, X) for mu in ws], axis=1)
    assert np.allclose(T, direct, rtol=1e-12, atol=1e-12)


def test_monomial_orthogonality_on_torus():
    # distinct symmetric monomials are orthogonal for the flat torus measure
    ws = enumerate_alcove("b", 2, 2)
    f = lambda X: np.real(monomial_table(ws, X)[:, 1] * monomial_table(ws, X)[:, 3])  # noqa: E731
    assert integrate_torus("b", f, 2, points=16).value == pytest.approx(0.0, abs=1e-14)


def test_vector_valued_integrand():
    f = lambda X: np.stack([np.ones(len(X)), np.cos(X[:, 0])], axis=1)  # noqa: E731
    res = integrate_alcove("b", f, 1, rel_tol=1e-12, abs_tol=1e-14)
    assert np.allclose(res.value, [0.5, 0.0], atol=1e-14)
    assert res.evaluations > 0 and res.error_estimate >= 0


def test_accuracy_error_carries_best_estimate():
    f = lambda X: np.abs(np.sin(7.3 * X[:, 0] - X[:, 1]))  # noqa: E731
    with pytest.raises(AccuracyError) as info:
        integrate_alcove("b", f, 2, rel_tol=1e-14, budget=3000)
    best = info.value.result
    assert best is not None and math.isfinite(best.value)


@pytest.mark.parametrize("ens, n", [("a", 5), ("b", 5), ("a", 1), ("c", 2)])
def test_dimension_limits(ens, n):
    with pytest.raises(ParameterError):
        integrate_alcove(ens, lambda X: np.ones(len(X)), n)
