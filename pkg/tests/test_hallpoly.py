import cmath
import math

import numpy as np
import pytest

from hlcubature.cubature import build_rule
from hlcubature.errors import ParameterError, ResourceError, SingularConfigurationError
from hlcubature.hallpoly import (
    RuleParams,
    SymmetricPolynomial,
    c_factor,
    constant_term,
    delta_norm,
    eval_hl,
    eval_hl_table,
    eval_monomial,
    eval_quasi_orthogonal,
    group_images,
    group_order,
    monomial_orbit,
    norm_N,
    reduced_shell_weight,
)
from hlcubature.lattice import Weight, enumerate_alcove, enumerate_shell
from hlcubature.oracle import brute_force_hl


def test_c_factor_hand_values():
    assert c_factor("a", [math.pi / 2, -math.pi / 2], RuleParams("a", 2, 1, 0.2)) == pytest.approx(0.6)
    val = c_factor("b", [math.pi / 2], RuleParams("b", 1, 1, 0.0, 1 / 3))
    assert val == pytest.approx((1 + 1j / 3) / 2)


def test_c_factor_at_q0_is_vandermonde_like():
    xi = np.array([1.1, 0.2, -1.3])
    expected = 1.0
    for j in range(3):
        for k in range(j + 1, 3):
            expected /= 1 - cmath.exp(-1j * (xi[j] - xi[k]))
    assert c_factor("a", xi, RuleParams("a", 3, 1, 0.0)) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("xi", [[0.5, 0.5, -1.0], [0.0, 0.0, 0.0]])
def test_singular_configuration_a(xi):
    with pytest.raises(SingularConfigurationError):
        c_factor("a", xi, RuleParams("a", 3, 1, 0.3))


@pytest.mark.parametrize("xi", [[1.0, 0.0], [math.pi, 1.0], [0.7, 0.7]])
def test_singular_configuration_b(xi):
    with pytest.raises(SingularConfigurationError):
        eval_hl(Weight.zero("b", 2), xi, RuleParams("b", 2, 1, 0.3, 0.1))


@pytest.mark.parametrize("ens, n", [("a", 2), ("a", 3), ("a", 4), ("b", 1), ("b", 2), ("b", 3)])
@pytest.mark.parametrize("q", [-0.5, 0.0, 0.2, 0.9])
def test_zero_weight_is_constant(ens, n, q, rng):
    params = RuleParams(ens, n, 1, q, 0.3)
    # generic (non-singular) point
    xi = np.sort(rng.uniform(0.1, 3.0, n))[::-1]
    if ens == "a":
        xi = xi - xi.mean()
    expected = math.prod((1 - q**j) / (1 - q) for j in range(1, n + 1)) if q else 1.0
    assert eval_hl(Weight.zero(ens, n), xi, params) == pytest.approx(expected, rel=1e-12)
    assert constant_term(params) == pytest.approx(expected, rel=1e-14)


def test_zero_weight_n2():
    assert eval_hl(Weight.zero("a", 2), [0.4, -0.4], RuleParams("a", 2, 1, 0.2)) == pytest.approx(1.2)


def test_monomial_examples():
    assert eval_monomial(Weight.zero("a", 3), [0.3, 0.1, -0.4]) == pytest.approx(1.0)
    assert eval_monomial(Weight("b", (1,)), [0.7]) == pytest.approx(2 * math.cos(0.7))
    assert eval_monomial(Weight("a", (1,)), [0.7, -0.7]) == pytest.approx(2 * math.cos(0.7))


def test_monomial_batched(rng):
    mu = Weight("b", (1, 2))
    X = rng.uniform(0, 3, size=(7, 2))
    batch = eval_monomial(mu, X)
    assert batch.shape == (7,)
    assert np.allclose(batch, [eval_monomial(mu, x) for x in X])


def test_monomial_orbit_sizes():
    assert len(monomial_orbit(Weight.from_partition("b", (2, 1)))) == 8
    assert len(monomial_orbit(Weight.from_partition("b", (1, 0)))) == 4
    assert len(monomial_orbit(Weight.from_partition("a", (1, 0, 0)))) == 3


@pytest.mark.parametrize(
    "mu, expected",
    [
        (Weight.zero("a", 3), 6),
        (Weight.from_partition("b", (1, 0)), 2),
        (Weight.from_partition("b", (2, 2)), 2),
        (Weight.zero("b", 2), 8),
    ],
)
def test_norm_N(mu, expected):
    assert norm_N(mu) == expected


def test_norm_N_times_orbit_is_group_order():
    for ens, n in (("a", 3), ("a", 4), ("b", 2), ("b", 3)):
        for mu in enumerate_alcove(ens, n, 3):
            assert norm_N(mu) * len(monomial_orbit(mu)) == group_order(ens, n)


def test_delta_norm_examples():
    assert delta_norm(Weight.zero("b", 2), RuleParams("b", 2, 1, 0.2)) == pytest.approx(5 / 6)
    # all parts distinct and no wrap-around gap
    assert delta_norm(Weight.from_partition("a", (2, 1, 0)), RuleParams("a", 3, 3, 0.4)) == 1.0


def test_delta_norm_limit_at_one():
    for mu in enumerate_alcove("a", 4, 2):
        near = delta_norm(mu, RuleParams("a", 4, 2, 1 - 1e-7))
        exact = delta_norm(mu, RuleParams("a", 4, 2, 1.0))
        assert near == pytest.approx(exact, rel=1e-5)


@pytest.mark.parametrize("ens, n", [("a", 2), ("a", 3), ("b", 2), ("b", 3)])
def test_q_one_closed_form_is_the_limit(ens, n, rng):
    xi = np.sort(rng.uniform(0.2, 2.9, n))[::-1]
    if ens == "a":
        xi = xi - xi.mean()
    for mu in enumerate_alcove(ens, n, 2):
        exact = eval_hl(mu, xi, RuleParams(ens, n, 2, 1.0, 0.3))
        near = eval_hl(mu, xi, RuleParams(ens, n, 2, 1 - 1e-6, 0.3))
        assert abs(exact - near) <= 1e-4 * max(1.0, abs(exact))


def test_q_one_type_b_one_variable():
    # n = 1: P_l(x; 1, q0) is the one-variable polynomial p_l
    th, q0 = 0.9, 0.25
    p = RuleParams("b", 1, 3, 1.0, q0)
    for l in range(4):
        cp = (1 - q0 * cmath.exp(-1j * th)) / (1 - cmath.exp(-2j * th))
        expected = cp * cmath.exp(1j * l * th) + cp.conjugate() * cmath.exp(-1j * l * th)
        assert eval_hl(Weight("b", (l,)), [th], p) == pytest.approx(expected)


@pytest.mark.parametrize("ens, n", [("a", 3), ("b", 2)])
def test_table_matches_pointwise(ens, n):
    params = RuleParams(ens, n, 2, 0.3, -0.2)
    xi = np.array([1.3, 0.2, -1.5]) if ens == "a" else np.array([2.1, 0.8])
    ws = enumerate_alcove(ens, n, 2)
    assert np.allclose(eval_hl_table(ws, xi, params), [eval_hl(mu, xi, params) for mu in ws], rtol=1e-13)
    for mu in ws:
        assert eval_hl(mu, xi, params) == pytest.approx(brute_force_hl(mu, xi, params), rel=1e-11)


def test_group_images():
    imgs = group_images("b", [0.3, 0.1])
    assert imgs.shape == (8, 2)
    assert len({tuple(r) for r in imgs}) == 8
    assert group_order("a", 4) == 24 and group_order("b", 3) == 48


def test_resource_limit():
    with pytest.raises(ResourceError):
        eval_hl(Weight.zero("b", 10), np.linspace(3.0, 0.2, 10), RuleParams("b", 10, 1, 0.1))


def test_wrong_dimension():
    with pytest.raises(ParameterError):
        eval_hl(Weight.zero("a", 3), [0.1, -0.1], RuleParams("a", 3, 1, 0.1))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(ensemble="a", n=3, m=0, q=0.1),
        dict(ensemble="a", n=3, m=1, q=-1.0),
        dict(ensemble="a", n=3, m=1, q=1.2),
        dict(ensemble="b", n=2, m=1, q=0.1, q0=1.0),
        dict(ensemble="b", n=2, m=1, q=0.1, q1=float("nan")),
        dict(ensemble="a", n=1, m=1, q=0.1),
        dict(ensemble="d", n=3, m=1, q=0.1),
    ],
)
def test_rule_params_validation(kwargs):
    with pytest.raises(ParameterError):
        RuleParams(**kwargs)


def test_quasi_orthogonal_q1_zero_is_plain_polynomial():
    params = RuleParams("b", 2, 1, 0.3, 0.4, 0.0)
    xi = [2.0, 0.7]
    for mu in enumerate_shell("b", 2, 1):
        coef, nu = reduced_shell_weight(mu, params)
        assert coef == 0 and nu.level == params.m
        assert eval_quasi_orthogonal(mu, xi, params) == pytest.approx(eval_hl(mu, xi, params), rel=1e-14)


def test_schur_shell_vanishes_at_nodes():
    params = RuleParams("a", 3, 2, 0.0)
    rule = build_rule(params)
    for mu in enumerate_shell("a", 3, 2):
        scale = abs(eval_hl(mu, [1.0, 0.3, -1.3], params))
        for node in rule.nodes:
            assert abs(eval_hl(mu, node.xi, params)) <= 1e-12 * scale


def test_shell_vanishes_at_reference_node():
    params = RuleParams("a", 4, 1, 0.2)
    rule = build_rule(params)
    mu = Weight("a", (2, 0, 0))
    assert abs(eval_quasi_orthogonal(mu, rule.nodes[0].xi, params)) < 1e-8


def test_shell_weight_outside_shell():
    with pytest.raises(ParameterError):
        reduced_shell_weight(Weight("a", (1, 0)), RuleParams("a", 3, 1, 0.2))


def test_symmetric_polynomial_json_roundtrip():
    poly = SymmetricPolynomial("b", 2, {Weight("b", (1, 0)): 2.5, Weight("b", (0, 1)): -1j, Weight.zero("b", 2): 0})
    again = SymmetricPolynomial.from_json(poly.to_json())
    assert again == poly
    assert len(again.terms) == 2 and again.level == 1
    xi = np.array([[1.0, 0.4], [2.2, 1.1]])
    assert np.allclose(again(xi), 2.5 * eval_monomial(Weight("b", (1, 0)), xi) - 1j * eval_monomial(Weight("b", (0, 1)), xi))


def test_symmetric_polynomial_partition_terms():
    data = {"ensemble": "a", "n": 3, "terms": [{"partition": [2, 1, 0], "coeff": 1.5}]}
    poly = SymmetricPolynomial.from_json(data)
    assert poly.terms == {Weight("a", (1, 1)): 1.5}
    assert SymmetricPolynomial.constant("a", 3, 2.0)([0.1, 0.2, -0.3]) == pytest.approx(2.0)
