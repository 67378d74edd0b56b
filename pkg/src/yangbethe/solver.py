"""Multi-start damped Newton for the XXX and Gaudin Bethe ansatz equations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bethe_xxx import BetheProblem, bae_residual, is_off_diagonal
from .gaudin import GaudinProblem, gaudin_bae_residual


class NoConvergence(RuntimeError):
    def __init__(self, report):
        self.report = report
        super().__init__("no start converged")


@dataclass
class SolveReport:
    roots: list = field(default_factory=list)  # dicts: t, residual, offdiagonal, hits
    starts: int = 0
    iterations: list = field(default_factory=list)
    converged_starts: int = 0
    duplicates_merged: int = 0
    start_outcomes: list = field(default_factory=list)  # root index per start, or None

    @property
    def success(self) -> bool:
        return bool(self.roots)

    def to_dict(self) -> dict:
        def enc(x):
            return {"re": float(x.real), "im": float(x.imag)}

        return {
            "roots": [{"t": [[enc(x) for x in level] for level in r["t"]], "residual": r["residual"],
                       "offdiagonal": r["offdiagonal"], "hits": r["hits"]} for r in self.roots],
            "starts": self.starts,
            "iterations": self.iterations,
            "converged_starts": self.converged_starts,
            "duplicates_merged": self.duplicates_merged,
            "start_outcomes": self.start_outcomes,
        }


def _layout(xi):
    """Flat index of every (level, i)."""
    return [(a, i) for a, n in enumerate(xi) for i in range(n)]


def _unflatten(xi, x):
    out, k = [], 0
    for n in xi:
        out.append([complex(v) for v in x[k:k + n]])
        k += n
    return out


# ---------------------------------------------------------------- residual systems


def _xxx_factors(problem: BetheProblem, layout):
    """Each equation as (Q_a, lhs factors, Q_{a+1}, rhs factors); a factor is (const, {var: coeff})."""
    flat = {p: k for k, p in enumerate(layout)}
    L = len(problem.xi)
    eqs = []
    for (a, i), k in flat.items():
        lhs, rhs = [], []
        for lam, zz in zip(problem.weights, problem.z):
            lhs.append((complex(-zz + lam[a]), {k: 1.0}))
            rhs.append((complex(-zz + lam[a + 1]), {k: 1.0}))
        if a > 0:
            for j in range(problem.xi[a - 1]):
                y = flat[(a - 1, j)]
                lhs.append((1.0, {k: 1.0, y: -1.0}))
                rhs.append((0.0, {k: 1.0, y: -1.0}))
        for j in range(problem.xi[a]):
            if j == i:
                continue
            y = flat[(a, j)]
            lhs.append((-1.0, {k: 1.0, y: -1.0}))
            rhs.append((1.0, {k: 1.0, y: -1.0}))
        if a + 1 < L:
            for j in range(problem.xi[a + 1]):
                y = flat[(a + 1, j)]
                lhs.append((0.0, {k: 1.0, y: -1.0}))
                rhs.append((-1.0, {k: 1.0, y: -1.0}))
        eqs.append((complex(problem.Q[a]), lhs, complex(problem.Q[a + 1]), rhs))
    return eqs


def _product_and_gradient(factors, x, n):
    vals = [c + sum(w * x[v] for v, w in coeffs.items()) for c, coeffs in factors]
    total = complex(np.prod(vals)) if vals else 1.0 + 0j
    grad = np.zeros(n, dtype=complex)
    for k, (_, coeffs) in enumerate(factors):
        rest = complex(np.prod(vals[:k] + vals[k + 1:])) if len(vals) > 1 else 1.0 + 0j
        for v, w in coeffs.items():
            grad[v] += w * rest
    return total, grad


def _xxx_system(problem: BetheProblem):
    layout = _layout(problem.xi)
    eqs = _xxx_factors(problem, layout)
    n = len(layout)

    def F(x):
        r = np.zeros(n, dtype=complex)
        J = np.zeros((n, n), dtype=complex)
        for e, (ql, lf, qr, rf) in enumerate(eqs):
            pl, gl = _product_and_gradient(lf, x, n)
            pr, gr = _product_and_gradient(rf, x, n)
            r[e] = ql * pl - qr * pr
            J[e] = ql * gl - qr * gr
        return r, J

    return F


def _gaudin_system(problem: GaudinProblem):
    """Numerators of the rational equations: sum_m c_m prod_{p != m}(x - p) - const prod_p (x - p).

    Clearing denominators keeps Newton from drifting to infinity, where the rational form tends to
    a constant; acceptance is still judged on the rational residual.
    """
    layout = _layout(problem.xi)
    flat = {p: k for k, p in enumerate(layout)}
    n = len(layout)
    L = len(problem.xi)
    eqs = []
    for (a, i), k in flat.items():
        terms = [(complex(lam[a] - lam[a + 1]), (complex(-zz), {k: 1.0}))
                 for lam, zz in zip(problem.weights, problem.z) if lam[a] != lam[a + 1]]
        others = []
        if a > 0:
            others += [(1.0, flat[(a - 1, j)]) for j in range(problem.xi[a - 1])]
        others += [(-2.0, flat[(a, j)]) for j in range(problem.xi[a]) if j != i]
        if a + 1 < L:
            others += [(1.0, flat[(a + 1, j)]) for j in range(problem.xi[a + 1])]
        terms += [(c, (0.0, {k: 1.0, v: -1.0})) for c, v in others]
        const = complex(problem.K[a + 1] - problem.K[a])
        factors = [f for _, f in terms]
        products = [(c, factors[:m] + factors[m + 1:]) for m, (c, _) in enumerate(terms)]
        if const != 0:
            products.append((-const, factors))
        eqs.append(products)

    def F(x):
        r = np.zeros(n, dtype=complex)
        J = np.zeros((n, n), dtype=complex)
        for e, products in enumerate(eqs):
            for c, fs in products:
                val, grad = _product_and_gradient(fs, x, n)
                r[e] += c * val
                J[e] += c * grad
        return r, J

    return F


# ---------------------------------------------------------------- Newton


def _newton(F, x0, tol, max_iter):
    x = np.array(x0, dtype=complex)
    with np.errstate(all="ignore"):
        r, J = F(x)
        norm = np.max(np.abs(r)) if len(r) else 0.0
        for it in range(max_iter + 1):
            if not np.isfinite(norm):
                return x, norm, it, False
            if norm <= tol:
                return x, norm, it, True
            if it == max_iter:
                break
            try:
                step = np.linalg.solve(J, -r)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(J, -r, rcond=None)[0]
            lam = 1.0
            accepted = False
            for _ in range(31):
                trial = x + lam * step
                rt, Jt = F(trial)
                nt = np.max(np.abs(rt))
                if np.isfinite(nt) and nt < norm:
                    accepted = True
                    break
                lam *= 0.5
            if not accepted:
                return x, norm, it, False
            x, r, J, norm = trial, rt, Jt, nt
    return x, norm, max_iter, norm <= tol


def _seeds(problem, starts, rng):
    z = np.array([complex(v) for v in problem.z]) if len(problem.z) else np.zeros(1, dtype=complex)
    zs = np.sort(z.real)
    mids = [(zs[i] + zs[i + 1]) / 2 for i in range(len(zs) - 1)] or [float(zs[0])]
    weight_scale = 1 + max((abs(w[0] - w[-1]) for w in problem.weights), default=0)
    spread = float(zs[-1] - zs[0]) if len(zs) > 1 else 1.0
    scale = 0.25 * (spread + weight_scale)
    n = sum(problem.xi)
    out = []
    for _ in range(starts):
        base = np.array([mids[j % len(mids)] for j in range(n)], dtype=complex)
        pert = rng.normal(size=n) + 1j * rng.normal(size=n)
        out.append(base + scale * pert)
    return out


def _canonical(t):
    return [sorted(level, key=lambda c: (round(c.real, 9), round(c.imag, 9))) for level in t]


def _same(t1, t2, radius):
    return all(abs(x - y) <= radius for l1, l2 in zip(t1, t2) for x, y in zip(l1, l2))


def solve_bae(problem, starts: int = 20, seed: int = 0, tol: float = 1e-10, max_iter: int = 50,
              radius: float = 1e-6, raise_on_failure: bool = False) -> SolveReport:
    """Multi-start damped Newton for a BetheProblem (polynomial form) or GaudinProblem (rational form)."""
    if starts < 1 or tol <= 0:
        raise ValueError("need starts >= 1 and tol > 0")
    report = SolveReport(starts=starts)
    if sum(problem.xi) == 0:
        report.roots.append({"t": [[] for _ in problem.xi], "residual": 0.0, "offdiagonal": True,
                             "hits": starts})
        report.converged_starts = starts
        report.iterations = [0] * starts
        report.start_outcomes = [0] * starts
        return report
    if isinstance(problem, GaudinProblem):
        F = _gaudin_system(problem)
        residual = gaudin_bae_residual
    else:
        F = _xxx_system(problem)
        residual = bae_residual
    rng = np.random.default_rng(seed)
    for x0 in _seeds(problem, starts, rng):
        x, norm, its, ok = _newton(F, x0, tol, max_iter)
        report.iterations.append(its)
        if not ok:
            report.start_outcomes.append(None)
            continue
        t = _canonical(_unflatten(problem.xi, x))
        try:
            check = max(abs(complex(v)) for v in residual(problem, t))
        except (ZeroDivisionError, ValueError):
            report.start_outcomes.append(None)
            continue
        if not check <= tol:
            report.start_outcomes.append(None)
            continue
        report.converged_starts += 1
        for idx, root in enumerate(report.roots):
            if _same(root["t"], t, radius):
                root["hits"] += 1
                report.duplicates_merged += 1
                report.start_outcomes.append(idx)
                break
        else:
            report.roots.append({"t": t, "residual": float(check), "offdiagonal": is_off_diagonal(t, radius),
                                 "hits": 1})
            report.start_outcomes.append(len(report.roots) - 1)
    if not report.roots and raise_on_failure:
        raise NoConvergence(report)
    return report


def classify_offdiagonal(t, tol: float = 1e-8) -> bool:
    return is_off_diagonal(t, tol)
