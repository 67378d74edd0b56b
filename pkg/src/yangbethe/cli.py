"""Batch interface: read a problem JSON, run a suite, write a JSON report.

Exit status is 0 when every check passes, 1 when a check fails and 2 for bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import jsonschema
import numpy as np

from . import bethe_xxx as bx
from . import forms as fm
from . import gaudin as gd
from . import limits as lm
from . import suites
from . import yangian as yg
from .reps import module_from_descriptor
from .scalars import (all_exact, format_scalar, is_exact, max_abs, mpq, parse_scalar, sample_points,
                      to_rational)
from .solver import solve_bae

COMMANDS = ("check-identities", "transfer-eval", "bethe-solve", "bethe-verify", "gaudin-solve", "gaudin-verify",
            "limit-check", "forms-check")


class SchemaError(ValueError):
    pass


_SCALAR = {"anyOf": [
    {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
    {"type": "integer"},
    {"type": "object", "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
     "required": ["re"], "additionalProperties": False},
]}

SCHEMA = {
    "type": "object",
    "required": ["N", "modules", "z"],
    "properties": {
        "N": {"type": "integer", "minimum": 1, "maximum": 6},
        "modules": {"type": "array", "minItems": 1, "items": {
            "type": "object", "required": ["type"],
            "properties": {"type": {"enum": ["vector", "wedge", "partition"]},
                           "k": {"type": "integer", "minimum": 1},
                           "lambda": {"type": "array", "items": {"type": "integer", "minimum": 0}}}}},
        "z": {"type": "array", "items": _SCALAR},
        "twist": {"type": "object", "required": ["model"],
                  "properties": {"model": {"enum": ["xxx", "gaudin"]},
                                 "diag": {"type": "array", "items": _SCALAR},
                                 "matrix": {"type": "array", "items": {"type": "array", "items": _SCALAR}}},
                  "additionalProperties": False},
        "xi": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "roots": {"type": "array", "items": {"type": "array", "items": _SCALAR}},
        "u": {"type": "array", "items": _SCALAR},
        "seed": {"type": "integer"},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "samples": {"type": "integer", "minimum": 1},
        "starts": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}


# ---------------------------------------------------------------- problem parsing


class Problem:
    """Parsed and dimension-checked problem description."""

    def __init__(self, raw: dict, seed=None, tol=None, samples=None):
        try:
            jsonschema.validate(raw, SCHEMA)
        except jsonschema.ValidationError as exc:
            raise SchemaError(f"{'/'.join(map(str, exc.absolute_path)) or 'spec'}: {exc.message}") from None
        self.raw = raw
        self.N = raw["N"]
        try:
            self.modules = [module_from_descriptor(self.N, d) for d in raw["modules"]]
        except Exception as exc:
            raise SchemaError(f"modules: {exc}") from None
        if len(raw["z"]) != len(self.modules):
            raise SchemaError("z: need one evaluation point per module")
        self.z = [parse_scalar(x) for x in raw["z"]]
        self.seed = raw.get("seed", 0) if seed is None else seed
        self.tol = raw.get("tol", 1e-10) if tol is None else tol
        self.samples = raw.get("samples", 5) if samples is None else samples
        self.starts = raw.get("starts", 20)
        tw = raw.get("twist", {"model": "xxx"})
        self.model = tw["model"]
        if "diag" in tw and "matrix" in tw:
            raise SchemaError("twist: give diag or matrix, not both")
        default = mpq(1) if self.model == "xxx" else mpq(0)
        if "matrix" in tw:
            rows = tw["matrix"]
            if len(rows) != self.N or any(len(r) != self.N for r in rows):
                raise SchemaError(f"twist.matrix: must be {self.N}x{self.N}")
            M = np.array([[parse_scalar(x) for x in r] for r in rows], dtype=object)
        else:
            d = tw.get("diag", [default] * self.N)
            if len(d) != self.N:
                raise SchemaError(f"twist.diag: need {self.N} entries")
            M = np.full((self.N, self.N), mpq(0), dtype=object)
            for a, x in enumerate(d):
                M[a, a] = parse_scalar(x)
        self.twist = M
        xi = raw.get("xi", [0] * (self.N - 1))
        if len(xi) != self.N - 1:
            raise SchemaError(f"xi: need {self.N - 1} entries")
        self.xi = tuple(xi)
        self.roots = None
        if "roots" in raw:
            r = raw["roots"]
            if [len(lv) for lv in r] != list(self.xi):
                raise SchemaError("roots: level sizes must match xi")
            self.roots = [[parse_scalar(x) for x in lv] for lv in r]
        self.u = [parse_scalar(x) for x in raw.get("u", [])]
        if self.N < 2 and any(self.xi):
            raise SchemaError("xi: needs N >= 2")

    def chain(self) -> yg.TensorChain:
        return yg.TensorChain(self.modules, self.z)

    @property
    def exact(self) -> bool:
        return all_exact(*self.z) and all(is_exact(v) for v in self.twist.flat)

    def require_exact(self, what):
        if not self.exact:
            raise SchemaError(f"{what} needs rational z and twist entries")

    def diagonal(self) -> list:
        M = self.twist
        if any(M[a, b] != 0 for a in range(self.N) for b in range(self.N) if a != b):
            raise SchemaError("twist: this command needs a diagonal twist")
        return [M[a, a] for a in range(self.N)]

    def need_roots(self):
        if self.roots is None:
            raise SchemaError("roots: required for this command")
        return self.roots

    def sample_u(self, count=None, shift=0):
        if self.u:
            return list(self.u)
        excluded = [to_rational(z) + s for z in self.z if is_exact(z) for s in range(-shift - 1, shift + 2)]
        if self.roots:
            excluded += [to_rational(x) + s for lv in self.roots for x in lv if is_exact(x)
                         for s in range(-self.N - 1, self.N + 2)]
        return sample_points(self.seed, count or self.samples, excluded)


# ---------------------------------------------------------------- helpers


def _encode(x):
    if isinstance(x, np.ndarray):
        return [_encode(v) for v in x.tolist()] if x.dtype == object else _encode(x.astype(object))
    if isinstance(x, (list, tuple)):
        return [_encode(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _encode(v) for k, v in x.items()}
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return format_scalar(x)


def _numeric(name, anchor, err, tol, ms=0.0):
    err = float(err)
    return {"name": name, "anchor": anchor, "exact": False, "max_abs_error": err,
            "status": "pass" if err <= tol else "fail", "runtime_ms": round(ms, 3)}


def _from_limit(res, anchor, tol):
    exact = res["name"] != "Slim"
    err = res["max_abs_error"]
    ok = err == 0 if exact else err <= tol
    out = {"name": res["name"], "anchor": anchor, "exact": exact, "max_abs_error": err,
           "status": "pass" if ok else "fail", "runtime_ms": 0.0}
    if "raw_error_at_eps" in res:
        out["raw_error_at_eps"] = res["raw_error_at_eps"]
    return out


def _timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, (time.perf_counter() - start) * 1000


def _rational_snap(t, residual_fn):
    """A small-denominator rational root that solves the equations exactly, if there is one."""
    snapped = []
    for lv in t:
        level = []
        for x in lv:
            if abs(x.imag) > 1e-8:
                return None
            f = Fraction(x.real).limit_denominator(1000)
            level.append(mpq(f.numerator, f.denominator))
        snapped.append(level)
    try:
        if all(v == 0 for v in residual_fn(snapped)):
            return snapped
    except (ZeroDivisionError, ValueError):
        return None
    return None


# ---------------------------------------------------------------- commands


def cmd_check_identities(p: Problem):
    p.require_exact("check-identities")
    chain = p.chain()
    M = p.twist
    out = suites.rmatrix_checks(p.N, draws=10, seed=p.seed, max_rank=3 if p.N > 3 else None)
    out += suites.yangian_checks(chain, M, seed=p.seed)
    out += suites.gaudin_checks(chain, M, seed=p.seed)
    out += suites.bethe_checks(seed=p.seed)
    d = [M[a, a] for a in range(p.N)]
    diag = all(M[a, b] == 0 for a in range(p.N) for b in range(p.N) if a != b)
    if diag and len(set(d)) == p.N and chain.n <= 2:
        out += suites.appendix_b_checks(chain, M, seed=p.seed)
    return out, {}


def cmd_transfer_eval(p: Problem):
    chain = p.chain()
    us = p.sample_u(shift=p.N)
    data, checks = [], []
    for u in us:
        if p.model == "xxx":
            mats, ms = _timed(lambda uu: [yg.transfer_matrix(chain, p.twist, k, uu) for k in range(p.N + 1)], u)
        else:
            mats, ms = _timed(gd.gaudin_transfers, chain, p.twist, u)
        data.append({"u": u, "operators": mats})
        errs = [max_abs(mats[k] @ mats[l] - mats[l] @ mats[k]) for k in range(p.N + 1) for l in range(k + 1, p.N + 1)]
        err = max(errs, default=0.0)
        if p.exact and is_exact(u):
            checks.append({"name": f"commutativity_at_{format_scalar(u)}", "anchor": "[T_k(u), T_l(u)] = 0",
                           "exact": True, "max_abs_error": float(err),
                           "status": "pass" if err == 0 else "fail", "runtime_ms": round(ms, 3)})
        else:
            checks.append(_numeric(f"commutativity_{len(checks)}", "[T_k(u), T_l(u)] = 0", err, p.tol, ms))
    return checks, {"transfers": data}


def _solve(p: Problem, problem, residual_fn):
    report, ms = _timed(lambda: solve_bae(problem, starts=p.starts, seed=p.seed, tol=p.tol))
    roots = []
    for r in report.roots:
        entry = {"t": r["t"], "residual": r["residual"], "offdiagonal": r["offdiagonal"], "hits": r["hits"]}
        snap = _rational_snap(r["t"], residual_fn)
        if snap is not None:
            entry["rational"] = snap
        roots.append(entry)
    rate = report.converged_starts / report.starts
    checks = [_numeric("solver_converged", "at least one start reaches the residual tolerance",
                       0.0 if report.success else 1.0, 0.0, ms)]
    extra = {"roots": roots, "starts": report.starts, "converged_starts": report.converged_starts,
             "convergence_rate": rate, "iterations": report.iterations, "start_outcomes": report.start_outcomes,
             "duplicates_merged": report.duplicates_merged}
    return checks, extra


def cmd_bethe_solve(p: Problem):
    if p.model != "xxx":
        raise SchemaError("twist.model: bethe-solve needs model xxx")
    problem = bx.BetheProblem.from_chain(p.chain(), p.diagonal(), p.xi)
    return _solve(p, problem, lambda t: bx.bae_residual(problem, t))


def cmd_gaudin_solve(p: Problem):
    if p.model != "gaudin":
        raise SchemaError("twist.model: gaudin-solve needs model gaudin")
    problem = gd.GaudinProblem.from_chain(p.chain(), p.diagonal(), p.xi)
    return _solve(p, problem, lambda t: gd.gaudin_bae_residual(problem, t))


def _verify_checks(res, p: Problem, ms):
    checks = [
        _numeric("eigenvector_residual", "relative residual of the eigenvalue equation for k = 1..N",
                 res["max_relative_residual"], p.tol, ms),
        _numeric("dense_eigenvalue_gap", "predicted eigenvalues appear in the dense spectrum",
                 res["max_dense_gap"], p.tol),
    ]
    if "weight_residual" in res:
        checks.append(_numeric("weight", "Bethe vector has the predicted gl_N weight", res["weight_residual"], p.tol))
    if "singular_residual" in res:
        checks.append(_numeric("singular", "Bethe vector is annihilated by raising operators",
                               res["singular_residual"], p.tol))
    real = all(complex(z).imag == 0 for z in p.z) and all(complex(v).imag == 0 for v in p.twist.flat) \
        and all(complex(x).imag == 0 for lv in p.roots for x in lv)
    if real:
        checks.append(_numeric("real_eigenvalues", "imaginary parts of eigenvalue samples at real data",
                               fm.imaginary_parts(res["eigenvalues"]), 1e-8))
    return checks


def cmd_bethe_verify(p: Problem):
    if p.model != "xxx":
        raise SchemaError("twist.model: bethe-verify needs model xxx")
    problem = bx.BetheProblem.from_chain(p.chain(), p.diagonal(), p.xi)
    roots = p.need_roots()
    bae = max((abs(complex(v)) for v in bx.bae_residual(problem, roots)), default=0.0)
    res, ms = _timed(bx.verify_eigenpair, problem, roots, p.sample_u(shift=p.N), p.tol)
    checks = [_numeric("bethe_equations", "roots satisfy the Bethe equations", bae, p.tol)]
    checks += _verify_checks(res, p, ms)
    return checks, {"eigenpair": {k: res[k] for k in ("checks",)}}


def cmd_gaudin_verify(p: Problem):
    if p.model != "gaudin":
        raise SchemaError("twist.model: gaudin-verify needs model gaudin")
    problem = gd.GaudinProblem.from_chain(p.chain(), p.diagonal(), p.xi)
    roots = p.need_roots()
    bae = max((abs(complex(v)) for v in gd.gaudin_bae_residual(problem, roots)), default=0.0)
    res, ms = _timed(gd.verify_gaudin_eigenpair, problem, roots, p.sample_u(), p.tol)
    checks = [_numeric("bethe_equations", "roots satisfy the Bethe equations", bae, p.tol)]
    checks += _verify_checks(res, p, ms)
    return checks, {"eigenpair": {k: res[k] for k in ("checks",)}}


_LIMIT_ANCHORS = {
    "TLlim": "T(u/eps) = 1 + eps L(u) + O(eps^2)",
    "SGlim": "modified transfer matrices scale to Gaudin transfer matrices",
    "Dlim": "difference operator scales to the Gaudin differential operator",
    "BFlim": "Bethe vector scales to the Gaudin weight function",
    "QKlim": "XXX Bethe equations scale to Gaudin Bethe equations",
    "Mlim": "factorized eigenvalue operator scales to its Gaudin counterpart",
    "Slim": "deformed form at z/eps tends to the tensor Shapovalov form",
}


def cmd_limit_check(p: Problem):
    p.require_exact("limit-check")
    roots = p.need_roots()
    if not all_exact(*[x for lv in roots for x in lv]):
        raise SchemaError("roots: limit-check needs rational roots")
    chain = p.chain()
    u = p.sample_u(1, shift=p.N)[0]
    out = []
    for res in lm.limit_suite(chain, p.twist, p.xi, roots, u):
        out.append(_from_limit(res, _LIMIT_ANCHORS[res["name"]], 1e-8))
    return out, {"u": u}


def cmd_forms_check(p: Problem):
    p.require_exact("forms-check")
    chain = p.chain()
    M = p.twist
    sym = (M + M.T) * mpq(1, 2)
    out = suites.forms_checks(chain, sym, sym, seed=p.seed)
    u = p.sample_u(1, shift=p.N)[0]
    out.append(suites.check("wedge_closed_form", "R for wedge powers matches the closed form at rank-shifted points",
                            lambda: suites.wedge_closed_form_checks(p.N, u)))
    mods = list(chain.modules) if chain.n >= 3 else list(chain.modules) + [chain.modules[0]] * (3 - chain.n)
    us = sample_points(p.seed + 1, 2, [u])
    out.append(suites.check("intertwiner_yang_baxter", "Yang-Baxter equation for the module intertwiners",
                            lambda: suites.yang_baxter_chain(mods[:3], us)))
    extra = {"positivity_hypothesis": fm.positivity_hypothesis(chain)}
    if extra["positivity_hypothesis"]:
        G = fm.deformed_form(chain)
        pd = fm.is_positive_definite(G)
        out.append({"name": "positive_definite", "anchor": "deformed form has positive leading minors",
                    "exact": True, "max_abs_error": 0.0 if pd else 1.0, "status": "pass" if pd else "fail",
                    "runtime_ms": 0.0})
        extra["leading_minors"] = fm.leading_minors(G)
    return out, extra


HANDLERS = {
    "check-identities": cmd_check_identities,
    "transfer-eval": cmd_transfer_eval,
    "bethe-solve": cmd_bethe_solve,
    "bethe-verify": cmd_bethe_verify,
    "gaudin-solve": cmd_gaudin_solve,
    "gaudin-verify": cmd_gaudin_verify,
    "limit-check": cmd_limit_check,
    "forms-check": cmd_forms_check,
}


def run(command: str, spec: dict, seed=None, tol=None, samples=None) -> dict:
    """Run one command on a problem dict and return the report dict."""
    if command not in HANDLERS:
        raise SchemaError(f"unknown command {command!r}")
    problem = Problem(spec, seed, tol, samples)
    try:
        checks, extra = HANDLERS[command](problem)
    except SchemaError:
        raise
    except (ValueError, ArithmeticError, TypeError) as exc:
        raise SchemaError(f"{command}: {type(exc).__name__}: {exc}") from exc
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    report = {"command": command,
              "inputs": {"spec": spec, "seed": problem.seed, "tol": problem.tol, "samples": problem.samples},
              "checks": checks, "status": status}
    report.update(extra)
    return _encode(report)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="yangbethe", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--spec", required=True, help="problem JSON file, or - for stdin")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--json-out", help="write the report here instead of stdout")
    args = parser.parse_args(argv)
    try:
        if args.spec == "-":
            spec = json.load(sys.stdin)
        else:
            with open(args.spec, encoding="utf-8") as fh:
                spec = json.load(fh)
        report = run(args.command, spec, args.seed, args.tol, args.samples)
    except (OSError, json.JSONDecodeError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = dumps(report)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
