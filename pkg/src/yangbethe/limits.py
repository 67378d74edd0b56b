"""Scaling limit from the XXX model to the Gaudin model, checked by exact expansion in eps.

Every scaled XXX object is a rational function of eps with a denominator known in
advance.  It is sampled at distinct rational eps, multiplied by that denominator,
interpolated under a declared degree bound (surplus points are held out as checks)
and divided back as a power series.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .bethe_xxx import BetheProblem, bae_sides, bethe_vector_trace, eigenvalue_X, normalize_roots
from .forms import deformed_form, tensor_shapovalov
from .gaudin import (GaudinProblem, L_entry, gaudin_bae_residual, gaudin_transfers, gaudin_weight_F,
                     master_operator_coeffs)
from .scalars import (DegreeBoundExceeded, RationalFunctionSample, eye, interpolate,
                      interpolate_with_known_denominator, max_abs, mpq, poly_eval, series_divide, zeros)
from .yangian import TensorChain, chain_T_entry, modified_transfer, transfer_matrix


@dataclass
class EpsExpansion:
    selector: str
    orders: list = field(default_factory=list)


def _poly_mul(p, q):
    out = [mpq(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _linear_product(factors):
    """Coefficients in eps of prod (c0 + c1 eps)."""
    out = [mpq(1)]
    for c0, c1 in factors:
        out = _poly_mul(out, [mpq(c0), mpq(c1)])
    return out


def _eps_points(count, den):
    pts, j = [], 0
    while len(pts) < count:
        e = mpq(1, 17 + 4 * j)
        j += 1
        if poly_eval(den, e) != 0:
            pts.append(e)
    return pts


def eps_expand(f, denominator, numerator_bound: int, orders: int, held_out: int = 2, selector: str = "") \
        -> EpsExpansion:
    """Taylor coefficients eps^0 .. eps^(orders-1) of f, with f * denominator a polynomial of bounded degree."""
    den = list(denominator)
    pts = _eps_points(numerator_bound + 1 + held_out, den)
    vals = [f(e) for e in pts]
    num = interpolate_with_known_denominator(RationalFunctionSample(pts, vals, den, numerator_bound))
    return EpsExpansion(selector, series_divide(num, den, orders))


def _scaled_chain(chain: TensorChain, eps):
    return chain.with_z([z / eps for z in chain.z])


def _twist(K, eps):
    K = np.asarray(K, dtype=object)
    return eye(K.shape[0]) + eps * K


def _chain_denominator(chain: TensorChain, u, shifts: int):
    """prod_i prod_{s < shifts} (u - z_i - s eps)."""
    return _linear_product([(u - z, -s) for z in chain.z for s in range(shifts)])


def _zero_error(x):
    if isinstance(x, np.ndarray):
        return max_abs(x) if x.size else 0.0
    return abs(float(x))


def _result(name, errors):
    err = max(errors) if errors else 0.0
    return {"name": name, "passed": err == 0, "max_abs_error": float(err)}


# ---------------------------------------------------------------- individual identities


def check_TL(chain: TensorChain, u) -> dict:
    """T_ab(u/eps; z/eps) = delta_ab + eps L_ab(u; z) + O(eps^2)."""
    N = chain.N
    errors = []
    for a in range(N):
        for b in range(N):
            exp = eps_expand(lambda e: chain_T_entry(_scaled_chain(chain, e), a, b, u / e), [mpq(1)],
                             chain.n, 2, selector="T_ab")
            target0 = eye(chain.dim) if a == b else zeros((chain.dim, chain.dim))
            errors.append(_zero_error(exp.orders[0] - target0))
            errors.append(_zero_error(exp.orders[1] - L_entry(chain, a, b, u)))
    return _result("TLlim", errors)


def check_SG(chain: TensorChain, K, u) -> dict:
    """S_{k,1+eps K}(u/eps; z/eps) = eps^k G_{k,K}(u; z) + O(eps^(k+1))."""
    N = chain.N
    den = _chain_denominator(chain, u, N)
    bound = chain.n * N + N
    G = gaudin_transfers(chain, K, u)
    errors = []
    for k in range(N + 1):
        exp = eps_expand(lambda e: modified_transfer(_scaled_chain(chain, e), _twist(K, e), k, u / e), den,
                         bound, k + 1, selector="S_k")
        for m in range(k):
            errors.append(_zero_error(exp.orders[m]))
        errors.append(_zero_error(exp.orders[k] - G[k]))
    return _result("SGlim", errors)


def _shift_coefficient(terms, m, eps):
    """Coefficient of d^m in sum_k (-1)^k C_k exp(-k eps d)."""
    out = None
    for k, C in enumerate(terms):
        c = (-1) ** k * (mpq(-k) * eps) ** m / factorial(m)
        out = c * C if out is None else out + c * C
    return out


def check_D(chain: TensorChain, K, u, extra: int = 1) -> dict:
    """Coefficients of d^m in the scaled difference operator match eps^N times the differential operator."""
    N = chain.N
    den = _chain_denominator(chain, u, N)
    G = gaudin_transfers(chain, K, u)
    errors = []
    for m in range(N + 1 + extra):
        def f(e, m=m):
            sc = _scaled_chain(chain, e)
            Q = _twist(K, e)
            return _shift_coefficient([transfer_matrix(sc, Q, k, u / e) for k in range(N + 1)], m, e)

        exp = eps_expand(f, den, chain.n * N + N + m, N + 1, selector="D_N")
        target = (-1) ** (N - m) * G[N - m] if m <= N else zeros((chain.dim, chain.dim))
        for r in range(N):
            errors.append(_zero_error(exp.orders[r]))
        errors.append(_zero_error(exp.orders[N] - target))
    return _result("Dlim", errors)


def check_BF(chain: TensorChain, xi, t) -> dict:
    """B(t/eps; z/eps) prod eps/(t - z) prod eps/(t^{a+1} - t^a) = eps^|xi| F(t; z) + O(eps^(|xi|+1))."""
    t = normalize_roots(xi, t)
    size = sum(xi)
    scale = mpq(1)
    count = 0
    for level in t:
        for x in level:
            for z in chain.z:
                scale /= x - z
                count += 1
    for a in range(len(xi) - 1):
        for x in t[a]:
            for y in t[a + 1]:
                scale /= y - x
                count += 1

    def f(e):
        sc = _scaled_chain(chain, e)
        return bethe_vector_trace(sc, xi, [[x / e for x in level] for level in t]) * (scale * e ** count)

    exp = eps_expand(f, [mpq(1)], count + size, size + 1, selector="B_xi")
    F = gaudin_weight_F(chain, xi, t)
    errors = [_zero_error(exp.orders[m]) for m in range(size)]
    errors.append(_zero_error(exp.orders[size] - F))
    return _result("BFlim", errors)


def _scaled_xxx_problem(chain, K, xi, e):
    Kd = [np.asarray(K, dtype=object)[a, a] for a in range(chain.N)]
    return BetheProblem(chain.N, chain.highest_weights(), [z / e for z in chain.z], [1 + e * k for k in Kd],
                        tuple(xi))


def check_QK(chain: TensorChain, K, xi, t) -> dict:
    """Ratio of the two sides of each XXX Bethe equation is 1 + eps (Gaudin Bethe expression) + O(eps^2)."""
    t = normalize_roots(xi, t)
    Kd = [np.asarray(K, dtype=object)[a, a] for a in range(chain.N)]
    gp = GaudinProblem(chain.N, chain.highest_weights(), list(chain.z), Kd, tuple(xi))
    gaudin = gaudin_bae_residual(gp, t)
    errors = []
    for idx in range(len(gaudin)):
        a = [lv for lv, n in enumerate(xi) for _ in range(n)][idx]
        deg = chain.n + (xi[a - 1] if a > 0 else 0) + xi[a] - 1 + (xi[a + 1] if a + 1 < len(xi) else 0)

        def side(e, which):
            p = _scaled_xxx_problem(chain, K, xi, e)
            return bae_sides(p, [[x / e for x in lv] for lv in t])[idx][which] * e ** deg

        pts = _eps_points(deg + 4, [mpq(1)])
        lhs = interpolate(pts[: deg + 2], [side(e, 0) for e in pts[: deg + 2]])
        rhs = interpolate(pts[: deg + 2], [side(e, 1) for e in pts[: deg + 2]])
        for e in pts[deg + 2:]:
            if poly_eval(lhs, e) != side(e, 0) or poly_eval(rhs, e) != side(e, 1):
                raise DegreeBoundExceeded("Bethe equation sides exceed their degree bound")
        series = series_divide(lhs, rhs, 2)
        errors.append(_zero_error(series[0] - 1))
        # the Gaudin residual LHS - (K_{a+1} - K_a) is exactly K_a - K_{a+1} + LHS
        errors.append(_zero_error(series[1] - gaudin[idx]))
    return _result("QKlim", errors)


def check_M(chain: TensorChain, K, xi, t, u, extra: int = 1) -> dict:
    """Coefficients of d^m in the scaled XXX factorized operator: orders below eps^N vanish and the
    eps^N coefficient equals that of the Gaudin factorized operator."""
    t = normalize_roots(xi, t)
    N = chain.N
    Kd = [np.asarray(K, dtype=object)[a, a] for a in range(N)]
    w = chain.highest_weights()
    Z = master_operator_coeffs(xi, Kd, t, chain.z, w, u).coefficients
    roots = [x for lv in t for x in lv]
    den = _linear_product([(u - p, -r) for r in range(N) for p in list(chain.z) + roots])
    errors = []
    for m in range(N + 1 + extra):
        def f(e, m=m):
            ts = [[x / e for x in lv] for lv in t]
            zs = [z / e for z in chain.z]
            Q = [1 + e * k for k in Kd]
            C = []
            for k in range(N + 1):
                total = mpq(0)
                for combo in itertools.combinations(range(N), k):
                    prod = mpq(1)
                    for r, a in enumerate(combo):
                        prod *= eigenvalue_X(a, u / e - r, ts, zs, w, Q)
                    total += prod
                C.append(total)
            return _shift_coefficient(C, m, e)

        exp = eps_expand(f, den, len(den) - 1 + N + m, N + 1, selector="M_pencil")
        target = (-1) ** (N - m) * Z[N - m] if m <= N else mpq(0)
        for r in range(N):
            errors.append(_zero_error(exp.orders[r]))
        errors.append(_zero_error(exp.orders[N] - target))
    return _result("Mlim", errors)


def check_S(chain: TensorChain, eps=mpq(1, 10000), levels: int = 3, tol: float = 1e-8) -> dict:
    """Deformed form at z/eps against the tensor Shapovalov form.

    The form is 1 + O(eps); its value at eps itself is off by O(eps), so the limit is
    estimated by polynomial extrapolation from eps, eps/2, ..., eps/2^(levels-1).
    """
    target = tensor_shapovalov(chain)
    pts = [eps / 2 ** j for j in range(levels)]
    vals = [deformed_form(_scaled_chain(chain, e)) for e in pts]
    coeffs = interpolate(pts, vals)
    limit = coeffs[0]
    err = float(max_abs(limit - target))
    raw = float(max_abs(vals[0] - target))
    return {"name": "Slim", "passed": err <= tol, "max_abs_error": err, "raw_error_at_eps": raw}


def limit_suite(chain: TensorChain, K, xi, t, u) -> list:
    K = np.asarray(K, dtype=object)
    return [
        check_TL(chain, u),
        check_SG(chain, K, u),
        check_D(chain, K, u),
        check_BF(chain, xi, t),
        check_QK(chain, K, xi, t),
        check_M(chain, K, xi, t, u),
        check_S(chain),
    ]
