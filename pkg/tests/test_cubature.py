import math
import warnings

import numpy as np
import pytest

from hlcubature import tables
from hlcubature.cubature import (
    RationalIntegrand,
    apply_rule,
    build_rule,
    christoffel_det,
    christoffel_sum,
    constant_term_residual,
    constant_term_value,
    denominator_O,
    density_rho,
    determinantal_status,
    inverse_c_squared,
    planar_coords,
    planar_density,
    planar_region_test,
    quasi_orthogonal_residuals,
)
from hlcubature.errors import ParameterError
from hlcubature.hallpoly import RuleParams, SymmetricPolynomial, c_factor
from hlcubature.lattice import Weight, alcove_size
from hlcubature.suites import random_alcove_points
from hlcubature.testfunctions import exp_cos_a, exp_cos_b


def test_density_examples():
    assert density_rho("a", [0.4, 0.4, -0.8]) == pytest.approx(0.0, abs=1e-15)
    assert density_rho("a", [math.pi / 2, -math.pi / 2]) == pytest.approx(4.0)
    assert density_rho("b", [math.pi / 2]) == pytest.approx(4.0)


def test_denominator_examples():
    assert denominator_O("a", [1.0, 0.2, -1.2], RuleParams("a", 3, 1, 0.0)) == 1.0
    th, q0 = 0.8, 0.3
    assert denominator_O("b", [th], RuleParams("b", 1, 1, 0.5, q0)) == pytest.approx(1 - 2 * q0 * math.cos(th) + q0**2)


@pytest.mark.parametrize("params", [RuleParams("a", 3, 1, 0.45), RuleParams("b", 3, 1, -0.3, 0.6)], ids=str)
def test_inverse_c_squared_is_density_ratio(params, rng):
    X = random_alcove_points(params.ensemble, params.n, 20, rng)
    for x in X:
        direct = abs(c_factor(params.ensemble, x, params)) ** -2
        assert inverse_c_squared(params.ensemble, x, params) == pytest.approx(direct, rel=1e-10)


def test_schur_weight_at_q0():
    n, m = 3, 2
    params = RuleParams("a", n, m, 0.0)
    rule = build_rule(params)
    assert np.allclose(rule.weights, 1 / (n * (n + m) ** (n - 1)), rtol=1e-12)


def test_reference_rows_via_christoffel():
    rule = build_rule(RuleParams("a", 4, 1, float(tables.Q)))
    for nd in rule.nodes:
        hat = christoffel_sum("a", nd, rule.params)
        assert tables.matches(hat / inverse_c_squared("a", nd.xi, rule.params), tables.WEIGHT_A, 1)
        assert tables.matches(christoffel_det("a", nd, rule.params), tables.WEIGHT_A, 1)
    pb = RuleParams("b", 3, 1, float(tables.Q), float(tables.Q0), float(tables.Q1))
    rb = build_rule(pb)
    assert tables.matches(rb.weights[0], tables.WEIGHTS_B[0])
    assert tables.matches(rb.inverse_c_squared[0], tables.INV_C2_B[0])


@pytest.mark.parametrize(
    "params",
    [RuleParams("a", 3, 2, 0.3), RuleParams("a", 2, 3, -0.7), RuleParams("b", 2, 2, 0.5, -0.4, 0.3), RuleParams("b", 1, 3, 0.0, 0.8, -0.8)],
    ids=str,
)
def test_sum_and_determinantal_agree(params):
    s = build_rule(params)
    d = build_rule(params, "determinantal")
    assert np.allclose(s.weights, d.weights, rtol=1e-10, atol=0)
    assert d.metadata["determinantal"] == "proven"


def test_determinantal_q_zero_type_b():
    n, m = 2, 2
    rule = build_rule(RuleParams("b", n, m, 0.0), "det")
    assert np.allclose(rule.weights, (2 * (m + n) + 2) ** -n)


def test_determinantal_status():
    assert determinantal_status(RuleParams("a", 3, 1, 0.2)) == "proven"
    assert determinantal_status(RuleParams("a", 4, 1, 0.2)) == "conjectural"
    assert determinantal_status(RuleParams("b", 3, 1, 0.2)) == "conjectural"


@pytest.mark.parametrize(
    "params, expected",
    [
        (RuleParams("a", 4, 1, 0.2), 15625 / 29016),
        (RuleParams("a", 3, 1, 0.2), 125 / 186),
        (RuleParams("b", 3, 1, 0.2, 1 / 3, 1 / 7), 125 / 186),
    ],
)
def test_constant_term(params, expected):
    rule = build_rule(params)
    assert constant_term_value(params) == pytest.approx(expected, rel=1e-15)
    assert float(np.sum(rule.weights_hat)) == pytest.approx(expected, rel=1e-12)
    assert rule.metadata["constant_term_residual"] < 1e-12
    assert constant_term_residual(rule) < 1e-12
    assert apply_rule(rule, SymmetricPolynomial.constant(params.ensemble, params.n)) == pytest.approx(expected)


def test_rule_structure():
    params = RuleParams("b", 2, 3, 0.1, 0.2, 0.3)
    rule = build_rule(params)
    assert len(rule) == alcove_size("b", 2, 3)
    assert rule.labels[0] == Weight.zero("b", 2)
    assert np.all(rule.weights > 0) and np.all(rule.weights_hat > 0)
    assert rule.method == "sum" and rule.kind == "hall-littlewood"
    with pytest.raises(ValueError):
        rule.weights[0] = 1.0


def test_build_rule_errors():
    with pytest.raises(ParameterError):
        build_rule(RuleParams("a", 3, 1, 1.0))
    with pytest.raises(ParameterError):
        build_rule(RuleParams("a", 3, 1, 0.2), "newton")


def test_no_constant_term_warning():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        build_rule(RuleParams("b", 3, 2, 0.8, -0.5, 0.6))


def test_quasi_orthogonal_residuals_small():
    rule = build_rule(RuleParams("b", 2, 2, 0.4, 0.3, -0.6))
    res = quasi_orthogonal_residuals(rule)
    assert len(res) == 4 and max(res.values()) < 1e-11


def test_exp_cos_values():
    ra = build_rule(RuleParams("a", 3, 1, 0.2))
    assert tables.matches(apply_rule(ra, exp_cos_a(3, 0.2), density=True), "0.7450")
    rb = build_rule(RuleParams("b", 2, 1, 0.2, 1 / 3, 1 / 7))
    assert tables.matches(apply_rule(rb, exp_cos_b(2, 0.2, 1 / 3), density=True), "1.18029")


def test_density_and_hat_forms_agree():
    # a rational integrand f/O in density form equals f in the hat form
    params = RuleParams("b", 2, 2, 0.3, 0.2, 0.1)
    rule = build_rule(params)
    poly = SymmetricPolynomial("b", 2, {Weight("b", (1, 1)): 1.0, Weight("b", (0, 2)): 0.5})
    assert apply_rule(rule, RationalIntegrand(poly)) == pytest.approx(apply_rule(rule, poly), rel=1e-12)
    plain = RationalIntegrand(poly, has_pole_denominator=False)
    assert apply_rule(rule, plain, density=False) == pytest.approx(apply_rule(rule, poly), rel=1e-12)


def test_apply_rule_callable():
    rule = build_rule(RuleParams("a", 2, 2, 0.1))
    assert apply_rule(rule, lambda x: 2.0) == pytest.approx(2 * np.sum(rule.weights_hat))


def test_planar_examples():
    assert np.allclose(planar_coords("a", [0.0, 0.0, 0.0]), [3.0, 0.0])
    assert planar_density("a", [3.0, 0.0]) == pytest.approx(0.0)
    assert np.allclose(planar_coords("b", [math.pi / 2, math.pi / 4]), [math.sqrt(2), 0.0], atol=1e-15)
    assert planar_region_test("a", [0.0, 0.0])
    assert not planar_region_test("b", [0.0, 0.0])
    assert planar_region_test("b", [0.0, -1.0])
    with pytest.raises(ParameterError):
        planar_region_test("a", [0.0, 0.0, 0.0])


@pytest.mark.parametrize("ens, n", [("a", 3), ("b", 2)])
def test_planar_images_of_alcove_points(ens, n, rng):
    X = planar_coords(ens, random_alcove_points(ens, n, 100, rng))
    assert all(planar_region_test(ens, x) for x in X)
    # the planar density is the trigonometric density expressed algebraically
    pts = random_alcove_points(ens, n, 10, rng)
    for x, X_ in zip(pts, planar_coords(ens, pts)):
        assert planar_density(ens, X_) == pytest.approx(density_rho(ens, x), rel=1e-9)
