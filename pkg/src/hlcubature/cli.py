"""Command-line interface: ``hlcubature {nodes,rule,integrate,verify}``.

Exit codes: 0 success, 1 verification failures, 2 invalid parameters,
3 Newton convergence failure, 4 exactness assertion failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import suites
from .cubature import (
    CubatureRule,
    apply_rule,
    build_rule,
    constant_term_residual,
    quasi_orthogonal_residuals,
)
from .degenerations import schur_rule_a, schur_rule_b
from .errors import ConvergenceError, HLCubatureError, ParameterError
from .hallpoly import RuleParams, SymmetricPolynomial
from .nodes import bae_residual
from .oracle import hl_weight, integrate_alcove, monomial_table
from .testfunctions import exp_cos_a, exp_cos_b, weighted

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAILED, EXIT_PARAMS, EXIT_CONVERGENCE, EXIT_EXACTNESS = 0, 1, 2, 3, 4


def parse_number(text: str) -> float:
    """Accept decimals or exact fractions such as ``1/5``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number or fraction: {text!r}") from exc


# --------------------------------------------------------------------------
# rule documents


@dataclass
class RuleDocument:
    params: dict
    nodes: list
    weights: dict
    checks: dict
    method: str = "sum"
    schema_version: str = SCHEMA_VERSION
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_rule(cls, rule: CubatureRule) -> "RuleDocument":
        p = rule.params
        nodes = [
            {"label": list(nd.label.labels), "xi": [float(x) for x in nd.xi], "grad_norm": float(nd.grad_norm)}
            for nd in rule.nodes
        ]
        qres = quasi_orthogonal_residuals(rule)
        checks = {
            "constant_term_residual": constant_term_residual(rule),
            "max_quasi_orthogonal_residual": float(max(qres.values())) if qres else 0.0,
            "max_bae_residual": max(bae_residual(p.ensemble, nd, p) for nd in rule.nodes),
        }
        meta = {k: v for k, v in rule.metadata.items() if isinstance(v, (str, int, float))}
        return cls(
            params=p.as_dict(),
            nodes=nodes,
            weights={"hat": [float(w) for w in rule.weights_hat], "full": [float(w) for w in rule.weights]},
            checks=checks,
            method=rule.method,
            metadata=meta,
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "params": self.params,
            "method": self.method,
            "nodes": self.nodes,
            "weights": self.weights,
            "checks": self.checks,
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        # Python's float repr is the shortest string that round-trips binary64
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "RuleDocument":
        if str(data.get("schema_version")) != SCHEMA_VERSION:
            raise ParameterError(f"unsupported schema_version {data.get('schema_version')!r}")
        return cls(
            params=data["params"],
            nodes=data["nodes"],
            weights=data["weights"],
            checks=data["checks"],
            method=data.get("method", "sum"),
            metadata=data.get("metadata", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "RuleDocument":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        n = self.params["n"]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label"] + [f"xi_{j}" for j in range(1, n + 1)] + ["weight_hat", "weight"])
        for nd, wh, w in zip(self.nodes, self.weights["hat"], self.weights["full"]):
            label = " ".join(str(l) for l in nd["label"])
            writer.writerow([label] + [format(x, ".17g") for x in nd["xi"]] + [format(wh, ".17g"), format(w, ".17g")])
        return buf.getvalue()


def read_csv_rows(text: str):
    """Parse the CSV layout back into ``(labels, xi, weight_hat, weight)`` arrays."""
    rows = list(csv.reader(io.StringIO(text)))
    body = rows[1:]
    labels = [tuple(int(t) for t in r[0].split()) for r in body]
    data = np.array([[float(x) for x in r[1:]] for r in body])
    return labels, data[:, :-2], data[:, -2], data[:, -1]


# --------------------------------------------------------------------------
# commands


def _params_from_args(args) -> RuleParams:
    return RuleParams(args.ensemble, args.n, args.m, args.q, args.q0, args.q1)


def _sig(x: float, digits: int) -> str:
    return format(x, f"#.{digits}g").rstrip(".") if digits < 17 else format(x, ".17g")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_nodes(args) -> int:
    params = _params_from_args(args)
    rule = build_rule(params)
    doc = RuleDocument.from_rule(rule)
    if args.format == "json":
        _emit(doc.to_json() + "\n", args.out)
        return EXIT_OK
    if args.format == "csv":
        _emit(doc.to_csv(), args.out)
        return EXIT_OK
    d = args.digits
    lines = []
    for j, (nd, w, c) in enumerate(zip(rule.nodes, rule.weights, rule.inverse_c_squared)):
        xi = ", ".join(_sig(x, d) for x in nd.xi)
        lines.append(f"j={j}  lambda={list(nd.label.labels)}  xi=({xi})  Delta={_sig(w, d)}  |C|^-2={_sig(c, d)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_rule(args) -> int:
    params = _params_from_args(args)
    rule = build_rule(params, "determinantal" if args.weights == "det" else "sum")
    doc = RuleDocument.from_rule(rule)
    text = doc.to_csv() if args.format == "csv" else doc.to_json() + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _poly_oracle(poly: SymmetricPolynomial, params: RuleParams) -> float:
    weights = list(poly.terms)
    coeffs = np.array([poly.terms[w] for w in weights])

    def f(X):
        return (monomial_table(weights, X) @ coeffs) * hl_weight(params.ensemble, X, params.q, params.q0)

    return integrate_alcove(params.ensemble, f, params.n, rel_tol=1e-10, abs_tol=1e-12).value


# legacy names kept for scripts that predate the descriptive ones
TESTFUNCTION_ALIASES = {"table5": "exp-cos-a", "table6": "exp-cos-b"}


def cmd_integrate(args) -> int:
    params = _params_from_args(args)
    rule = build_rule(params, "determinantal" if args.weights == "det" else "sum")
    out = {}
    if args.testfunction:
        if TESTFUNCTION_ALIASES.get(args.testfunction, args.testfunction) == "exp-cos-a":
            if params.ensemble != "a":
                raise ParameterError("the exp-cos-a test function is defined for ensemble a")
            R = exp_cos_a(params.n, params.q)
            schur = schur_rule_a(params.n, params.m)
        else:
            if params.ensemble != "b":
                raise ParameterError("the exp-cos-b test function is defined for ensemble b")
            R = exp_cos_b(params.n, params.q, params.q0)
            schur = schur_rule_b(params.n, params.m, 0.0, 0.0)
        out["rule"] = apply_rule(rule, R, density=True)
        if "oracle" in args.compare:
            ref = integrate_alcove(params.ensemble, weighted(params.ensemble, R), params.n, rel_tol=1e-11).value
            out["oracle"] = ref
            out["rule_relative_error"] = abs(out["rule"] / ref - 1)
        if "schur" in args.compare:
            out["schur"] = apply_rule(schur, R, density=True)
            if "oracle" in out:
                out["schur_relative_error"] = abs(out["schur"] / out["oracle"] - 1)
    else:
        poly = SymmetricPolynomial.from_json(json.loads(Path(args.poly).read_text()))
        if poly.ensemble != params.ensemble or poly.n != params.n:
            raise ParameterError("polynomial ensemble/dimension does not match the rule")
        val = apply_rule(rule, poly)
        out["rule"] = val
        level = suites.exact_level(rule)
        if "oracle" in args.compare:
            ref = _poly_oracle(poly, params)
            out["oracle"] = ref
            out["rule_absolute_error"] = abs(val - ref)
        if args.assert_exact and poly.level > level:
            print(f"polynomial level {poly.level} exceeds the exactness level {level}", file=sys.stderr)
            _print_values(out)
            return EXIT_EXACTNESS
    _print_values(out)
    return EXIT_OK


def _print_values(out: dict):
    for k, v in out.items():
        if isinstance(v, complex):
            print(f"{k}: {v.real:.12g}{v.imag:+.3g}j")
        else:
            print(f"{k}: {v:.12g}")


def cmd_verify(args) -> int:
    chosen = ["tables", "roots", "exactness"] if args.suite == "all" else [args.suite]
    checks = []
    for name in chosen:
        if name == "tables":
            checks += suites.tables_suite()
        elif name == "roots":
            checks += suites.roots_suite(max_n=args.max_n or 4, max_m=args.max_m or 2)
        else:
            checks += suites.exactness_suite(max_n=args.max_n or 3, max_m=args.max_m or 2)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    report = suites.summarize(checks)
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2, default=str))
    print(f"{report['total'] - report['failed']}/{report['total']} checks passed")
    return EXIT_OK if report["failed"] == 0 else EXIT_FAILED


# --------------------------------------------------------------------------


def _add_rule_flags(p, need_params=True):
    p.add_argument("--ensemble", choices=("a", "b"), required=need_params)
    p.add_argument("--n", type=int, required=need_params)
    p.add_argument("--m", type=int, required=need_params)
    p.add_argument("--q", type=parse_number, default=0.0)
    p.add_argument("--q0", type=parse_number, default=0.0)
    p.add_argument("--q1", type=parse_number, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hlcubature", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nodes", help="print the node table of a rule")
    _add_rule_flags(p)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--digits", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_nodes)

    p = sub.add_parser("rule", help="build a rule and write its RuleDocument")
    _add_rule_flags(p)
    p.add_argument("--weights", choices=("sum", "det"), default="sum")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rule)

    p = sub.add_parser("integrate", help="apply a rule to a test function or polynomial")
    _add_rule_flags(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--testfunction", choices=("exp-cos-a", "exp-cos-b", *TESTFUNCTION_ALIASES))
    src.add_argument("--poly", help="JSON file with a symmetric polynomial")
    p.add_argument("--compare", action="append", choices=("oracle", "schur"), default=[])
    p.add_argument("--weights", choices=("sum", "det"), default="det")
    p.add_argument("--assert-exact", action="store_true")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=("exactness", "roots", "tables", "all"), default="tables")
    p.add_argument("--max-n", type=int)
    p.add_argument("--max-m", type=int)
    p.add_argument("--report", help="write a JSON report here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except HLCubatureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
