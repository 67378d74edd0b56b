"""Identity suites shared by the command line and the test-suite.

Each check returns a dict with name, anchor (a short description of the identity),
exact flag, max_abs_error and status.  Exact checks pass only at error 0.
"""

from __future__ import annotations

import itertools
import random
import time
from math import comb

import numpy as np

from . import bethe_xxx as bx
from . import forms as fm
from . import gaudin as gd
from . import rmatrix as rm
from . import yangian as yg
from .reps import vector_rep, wedge_rep
from .scalars import (DegreeBoundExceeded, as_exact, det, eye, max_abs, mpq, random_rational,
                      recover_polynomial, sample_points, zeros)


def _err(x) -> float:
    if isinstance(x, (list, tuple)):
        return max([_err(v) for v in x], default=0.0)
    if isinstance(x, np.ndarray):
        return float(max_abs(x)) if x.size else 0.0
    return float(abs(x))


def check(name, anchor, fn, exact=True, tol=0.0) -> dict:
    start = time.perf_counter()
    err = float(fn())
    ms = (time.perf_counter() - start) * 1000
    ok = err == 0 if exact else err <= tol
    return {"name": name, "anchor": anchor, "exact": exact, "max_abs_error": err,
            "status": "pass" if ok else "fail", "runtime_ms": round(ms, 3)}


def _rng(seed):
    return random.Random(seed)


def _rand(rng, bound=50):
    return random_rational(rng, bound)


def _rand_matrix(rng, N, symmetric=False):
    Q = zeros((N, N))
    for a in range(N):
        for b in range(N):
            Q[a, b] = _rand(rng, 9)
    if symmetric:
        Q = (Q + Q.T) / 2
    return Q


# ---------------------------------------------------------------- R-matrix


def _perm_product(N, k, order):
    out = eye(N ** k)
    for i, j in order:
        out = out @ rm.R_factor(N, k, i, j, mpq(i - j))
    return out


def rmatrix_checks(N: int, draws: int = 10, seed: int = 0, max_rank: int | None = None) -> list:
    rng = _rng(seed)
    top = min(N, max_rank or N)
    ranks = range(1, top + 1)
    us = [_rand(rng) for _ in range(draws)]
    vs = [_rand(rng) for _ in range(draws)]
    out = []

    def inv():
        return max(_err(rm.rational_R(N, u) @ rm.swap21(rm.rational_R(N, -u), N, N) - (1 - u * u) * eye(N * N))
                   for u in us)

    def yb():
        errs = []
        for u, v in zip(us, vs):
            lhs = rm.R_factor(N, 3, 0, 1, u - v) @ rm.R_factor(N, 3, 0, 2, u) @ rm.R_factor(N, 3, 1, 2, v)
            rhs = rm.R_factor(N, 3, 1, 2, v) @ rm.R_factor(N, 3, 0, 2, u) @ rm.R_factor(N, 3, 0, 1, u - v)
            errs.append(_err(lhs - rhs))
        return max(errs)

    def fused_inv():
        errs = []
        for u in us:
            for k in ranks:
                for l in ranks:
                    A = rm.fused_R(N, k, l, u)
                    B = rm.swap21(rm.fused_R(N, l, k, -u), comb(N, l), comb(N, k))
                    errs.append(_err(A @ B - rm.fused_inversion_scalar(k, l, u) * eye(A.shape[0])))
        return max(errs)

    def fused_yb():
        errs = []
        small = [r for r in ranks if comb(N, r) <= 3] or [1]
        for u, v in list(zip(us, vs))[: max(2, draws // 3)]:
            for k, l, m in itertools.product(small, repeat=3):
                dims = [comb(N, k), comb(N, l), comb(N, m)]
                R12 = rm.embed_operator(dims, (0, 1), rm.fused_R(N, k, l, u - v))
                R13 = rm.embed_operator(dims, (0, 2), rm.fused_R(N, k, m, u))
                R23 = rm.embed_operator(dims, (1, 2), rm.fused_R(N, l, m, v))
                errs.append(_err(R12 @ R13 @ R23 - R23 @ R13 @ R12))
        return max(errs)

    def rq():
        errs = []
        for u in us[: max(2, draws // 2)]:
            Q = _rand_matrix(rng, N)
            for k in ranks:
                for l in ranks:
                    R = rm.fused_R(N, k, l, u)
                    QQ = np.kron(rm.wedge_power(Q, k), rm.wedge_power(Q, l))
                    errs.append(_err(R @ QQ - QQ @ R))
        return max(errs)

    def rra():
        errs = []
        for k in range(1, min(N, 3) + 1):
            pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
            target = rm.antisymmetrizer(N, k) * rm.rra_scalar(k)
            errs.append(_err(_perm_product(N, k, pairs) - target))
            errs.append(_err(_perm_product(N, k, list(reversed(pairs))) - target))
        return max(errs)

    def rwk():
        errs = []
        for u in us:
            for k in ranks:
                f1 = mpq(1)
                for i in range(1, k):
                    f1 *= u - i
                f2 = mpq(1)
                for i in range(0, k - 1):
                    f2 *= u + i
                errs.append(_err(rm.fused_R(N, k, 1, u) - f1 * rm.reduced_fused_R(N, k, "k1", u)))
                errs.append(_err(rm.fused_R(N, 1, k, u) - f2 * rm.reduced_fused_R(N, k, "1k", u)))
        return max(errs)

    def inw():
        errs = []
        for u in us:
            for k in ranks:
                A = rm.reduced_fused_R(N, k, "k1", u)
                B = rm.swap21(rm.reduced_fused_R(N, k, "1k", -u), N, comb(N, k))
                errs.append(_err(A @ B - (u + 1) * (k - u) * eye(A.shape[0])))
        return max(errs)

    out.append(check("inversion", "R(u) R21(-u) = 1 - u^2", inv))
    out.append(check("yang_baxter", "Yang-Baxter equation for R(u)", yb))
    out.append(check("fused_inversion", "fused inversion relation on wedge powers", fused_inv))
    out.append(check("fused_yang_baxter", "Yang-Baxter equation for fused R-matrices", fused_yb))
    out.append(check("twist_invariance", "[R^{k,l}(u), Q^k (x) Q^l] = 0", rq))
    out.append(check("antisymmetrizer_product", "ordered R(i - j) products equal the scaled antisymmetrizer", rra))
    out.append(check("reduced_fusion", "fused R with a vector factor equals the reduced form", rwk))
    out.append(check("reduced_inversion", "inversion of the reduced wedge R-matrices", inw))
    return out


# ---------------------------------------------------------------- Yangian


def _embed_aux(X, A, B, D, slot):
    """X on (aux) (x) H placed in slot 13 (aux = first of A (x) B) or 23 (aux = B)."""
    out = zeros((A, B, D, A, B, D))
    if slot == 13:
        X4 = X.reshape(A, D, A, D)
        for t in range(B):
            out[:, t, :, :, t, :] = X4
    else:
        X4 = X.reshape(B, D, B, D)
        for t in range(A):
            out[t, :, :, t, :, :] = X4
    return out.reshape(A * B * D, A * B * D)


def _rtt_defect(chain, k, l, u, v):
    N, D = chain.N, chain.dim
    A, B = comb(N, k), comb(N, l)
    Tu = yg.chain_T_wedge(chain, k, u)
    Tv = yg.chain_T_wedge(chain, l, v)
    R = np.kron(rm.fused_R(N, k, l, u - v), eye(D))
    T13 = _embed_aux(Tu, A, B, D, 13)
    T23 = _embed_aux(Tv, A, B, D, 23)
    return _err(R @ T13 @ T23 - T23 @ T13 @ R)


def _den_points(chain, count, seed, shifts):
    excluded = [z + s for z in chain.z for s in range(-shifts - 1, shifts + 2)]
    return sample_points(seed, count, excluded)


def yangian_checks(chain: yg.TensorChain, Q, seed: int = 0, grid: bool = True) -> list:
    N, n = chain.N, chain.n
    Q = as_exact(np.asarray(Q, dtype=object))
    pts = _den_points(chain, 2 * (n * N + 1) + 4, seed, N)
    u, v, w = pts[0], pts[1], pts[2]
    out = []

    out.append(check("rtt", "R(u - v) T13(u) T23(v) = T23(v) T13(u) R(u - v)",
                     lambda: max(_rtt_defect(chain, 1, 1, a, b) for a, b in [(u, v), (w, pts[3])])))

    def fused_rtt():
        errs = []
        for k in range(1, min(N, 2) + 1):
            for l in range(1, min(N, 2) + 1):
                errs.append(_rtt_defect(chain, k, l, u, v))
        return max(errs)

    out.append(check("fused_rtt", "fused RTT relation on wedge auxiliary spaces", fused_rtt))

    def commuting():
        # numerator of [T_k(u), T_l(v)] has degree <= n k in u and n l in v
        us = pts[: n * N + 1]
        vs = pts[n * N + 1: 2 * (n * N + 1)]
        Tu = {x: [yg.transfer_matrix(chain, Q, k, x) for k in range(N + 1)] for x in us}
        Tv = {x: [yg.transfer_matrix(chain, Q, k, x) for k in range(N + 1)] for x in vs}
        errs = [0.0]
        for k in range(1, N + 1):
            for l in range(k, N + 1):
                for a in us[: n * k + 1] if grid else us[:2]:
                    for b in vs[: n * l + 1] if grid else vs[:2]:
                        A, B = Tu[a][k], Tv[b][l]
                        errs.append(_err(A @ B - B @ A))
        return max(errs)

    out.append(check("transfer_commutativity", "[T_k(u), T_l(v)] = 0 on a full degree grid", commuting))

    def centrality():
        qd = yg.qdet(chain, u)
        T = chain.T(v)
        return max(_err(qd @ T[a][b] - T[a][b] @ qd) for a in range(N) for b in range(N))

    out.append(check("qdet_central", "[qdet T(u), T_ab(v)] = 0", centrality))

    def qdet_forms():
        qd = yg.qdet(chain, u)
        errs = [_err(yg.qdet(chain, u, form=2) - qd),
                _err(yg.transfer_matrix(chain, eye(N), N, u) - qd),
                _err(yg.transfer_matrix(chain, Q, N, u) - det(Q) * qd),
                _err(qd - yg.qdet_highest_weight_scalar(chain, u) * eye(chain.dim))]
        return max(errs)

    out.append(check("qdet_forms", "qdet orderings, T_N = det Q qdet and the highest-weight scalar", qdet_forms))

    def invariance():
        errs = []
        for k in range(N + 1):
            T = yg.transfer_matrix(chain, eye(N), k, u)
            for a in range(N):
                for b in range(N):
                    g = chain.generator(a, b)
                    errs.append(_err(T @ g - g @ T))
        return max(errs)

    out.append(check("identity_twist_invariance", "T_k(u) with Q = 1 commutes with gl_N", invariance))

    def trace_forms():
        errs = []
        for m in range(1, min(N, 3) + 1):
            for k in range(m + 1):
                ref = yg.transfer_matrix(chain, Q, k, u)
                for idx in itertools.permutations(range(m), k):
                    errs.append(_err(yg.transfer_trace_formula(chain, Q, m, idx, u) - ref))
        return max(errs)

    out.append(check("trace_forms", "transfer matrices from every multi-copy trace formula", trace_forms))

    def generating():
        errs = []
        for m in range(1, min(N, 3) + 1):
            a = yg.difference_operator_trace_form(chain, Q, m, u)
            b = yg.difference_operator_from_transfer(chain, Q, m, u)
            errs.extend(_err(x - y) for x, y in zip(a, b))
        return max(errs)

    out.append(check("difference_operator", "trace form of the difference operator equals the transfer form",
                     generating))
    out.append(check("antisymmetrizer_factorization", "ordered product on the antisymmetric vector",
                     lambda: yg.antisymmetric_state_identity(chain, Q, u)))
    out.append(check("modified_generating", "generating identity of the modified transfer matrices",
                     lambda: _err(yg.modified_generating_defect(chain, Q, u, pts[4]))))
    return out


# ---------------------------------------------------------------- Bethe vectors


def _T(chain, a, b, u):
    return chain.T(u)[a - 1][b - 1]


def bethe_example_n2(chain, t):
    """T_12(t) prod_i (t - z_i) v for N = 2, xi = (1)."""
    scale = mpq(1)
    for z in chain.z:
        scale *= t - z
    return scale * (_T(chain, 1, 2, t) @ chain.hwv())


def bethe_example_n3(chain, t1, t2):
    v = chain.hwv()
    return (_T(chain, 1, 2, t1) @ _T(chain, 2, 3, t2) @ v
            + _T(chain, 1, 3, t1) @ _T(chain, 2, 2, t2) @ v / (t2 - t1))


def bethe_example_n4(chain, a, b, c, literal: bool = False):
    """Five-term N = 4 creation operator applied to v.

    With literal=True the fourth and fifth coefficients use (t^3 - t^1) where the
    expansion of the trace formula gives (t^3 - t^2)."""
    v = chain.hwv()
    T = lambda i, j, x: _T(chain, i, j, x)  # noqa: E731
    d4 = (b - a) * (c - a) if literal else (b - a) * (c - b)
    num5 = (b - a) * (c - a) + 1 if literal else (b - a) * (c - b) + 1
    out = (T(1, 2, a) @ T(2, 3, b) @ T(3, 4, c)
           + T(1, 3, a) @ T(2, 2, b) @ T(3, 4, c) / (b - a)
           + T(1, 2, a) @ T(2, 4, b) @ T(3, 3, c) / (c - b)
           + (T(1, 4, a) @ T(2, 2, b) @ T(3, 3, c) + T(1, 3, a) @ T(2, 4, b) @ T(3, 2, c)) / d4
           + num5 / ((b - a) * (c - a) * (c - b)) * T(1, 4, a) @ T(2, 3, b) @ T(3, 2, c))
    return out @ v


def _clearing(chain, xi, t):
    return bx._clearing_factor(xi, t, chain.z)


def bethe_checks(seed: int = 0) -> list:
    rng = _rng(seed)
    out = []
    r = lambda: _rand(rng, 30)  # noqa: E731

    def examples():
        errs = []
        ch2 = yg.TensorChain([vector_rep(2)] * 2, [r(), r()])
        t = r()
        errs.append(_err(bx.bethe_vector_trace(ch2, (1,), [[t]]) - bethe_example_n2(ch2, t)))
        ch3 = yg.TensorChain([vector_rep(3), wedge_rep(3, 2)], [r(), r()])
        t1, t2 = r(), r()
        got = bx.bethe_vector_trace(ch3, (1, 1), [[t1], [t2]])
        errs.append(_err(got - _clearing(ch3, (1, 1), [[t1], [t2]]) * bethe_example_n3(ch3, t1, t2)))
        ch4 = yg.TensorChain([vector_rep(4), wedge_rep(4, 2)], [r(), r()])
        a, b, c = r(), r(), r()
        got = bx.bethe_vector_trace(ch4, (1, 1, 1), [[a], [b], [c]])
        errs.append(_err(got - _clearing(ch4, (1, 1, 1), [[a], [b], [c]]) * bethe_example_n4(ch4, a, b, c)))
        return max(errs)

    out.append(check("bethe_examples", "trace formula against the explicit N = 2, 3, 4 creation operators",
                     examples))

    configs = [
        (yg.TensorChain([vector_rep(3)] * 2, [r(), r()]), (1, 1)),
        (yg.TensorChain([vector_rep(3), wedge_rep(3, 2)], [r(), r()]), (2, 1)),
        (yg.TensorChain([vector_rep(3)] * 3, [r(), r(), r()]), (1, 2)),
        (yg.TensorChain([vector_rep(4), vector_rep(4)], [r(), r()]), (1, 1, 1)),
        (yg.TensorChain([vector_rep(2)] * 3, [r(), r(), r()]), (3,)),
    ]

    def roots_for(xi, ch=None):
        z = set(ch.z) if ch is not None else set()
        out = []
        for k in xi:
            level = []
            while len(level) < k:
                x = r()
                if x not in z:
                    level.append(x)
            out.append(level)
        return out

    def recursion():
        errs = []
        for ch, xi in configs:
            t = roots_for(xi, ch)
            errs.append(_err(bx.bethe_vector_trace(ch, xi, t) - bx.bethe_vector_recursive(ch, xi, t)))
        return max(errs)

    out.append(check("trace_equals_recursion", "trace formula equals the rank recursion", recursion))

    def symmetry():
        errs = []
        for ch, xi in configs:
            t = roots_for(xi, ch)
            ref = bx.bethe_vector_trace(ch, xi, t)
            for perms in itertools.product(*[list(itertools.permutations(range(k))) for k in xi]):
                tp = [[lv[p] for p in perm] for lv, perm in zip(t, perms)]
                errs.append(_err(bx.bethe_vector_trace(ch, xi, tp) - ref))
        return max(errs)

    out.append(check("level_symmetry", "invariance under permuting roots within a level", symmetry))

    def polynomiality():
        errs = []
        for ch, xi in configs[:3]:
            t = roots_for(xi, ch)
            for a, k in enumerate(xi):
                for i in range(k):
                    adj = (xi[a - 1] if a > 0 else 0) + (xi[a + 1] if a + 1 < len(xi) else 0)
                    bound = ch.n + adj + k

                    def f(x, a=a, i=i):
                        tt = [list(lv) for lv in t]
                        tt[a][i] = x
                        return bx.bethe_vector_trace(ch, xi, tt)

                    avoid = list(ch.z) + [y for lv in t for y in lv]
                    pts = sample_points(seed + 7 * a + i, bound + 4,
                                        avoid + [y + s for y in avoid for s in (-1, 1)])
                    try:
                        recover_polynomial(f, bound, pts, held_out=3)
                        errs.append(0.0)
                    except DegreeBoundExceeded:
                        errs.append(1.0)
        return max(errs)

    out.append(check("polynomiality", "universal weight function is polynomial in each root", polynomiality))
    return out


# ---------------------------------------------------------------- Gaudin


def gaudin_checks(chain: yg.TensorChain, K, seed: int = 0, grid: bool = True) -> list:
    N, n = chain.N, chain.n
    K = as_exact(np.asarray(K, dtype=object))
    pts = _den_points(chain, 2 * (n * N + 1) + 4, seed, 0)
    u = pts[0]
    out = []

    def commuting():
        # G_k(u) prod (u - z_i)^k is a polynomial of degree <= n k
        us = pts[: n * N + 1]
        vs = pts[n * N + 1: 2 * (n * N + 1)]
        Gu = {x: gd.gaudin_transfers(chain, K, x) for x in us}
        Gv = {x: gd.gaudin_transfers(chain, K, x) for x in vs}
        errs = [0.0]
        for k in range(1, N + 1):
            for l in range(k, N + 1):
                for a in us[: n * k + 1] if grid else us[:2]:
                    for b in vs[: n * l + 1] if grid else vs[:2]:
                        A, B = Gu[a][k], Gv[b][l]
                        errs.append(_err(A @ B - B @ A))
        return max(errs)

    out.append(check("gaudin_commutativity", "[G_k(u), G_l(v)] = 0 on a full degree grid", commuting))
    out.append(check("gaudin_antisymmetrizer", "left and right antisymmetrizer forms of the differential operator",
                     lambda: gd.antisymmetrizer_defect(chain, K, u)))

    def invariance():
        G = gd.gaudin_transfers(chain, zeros((N, N)), u)
        errs = []
        for k in range(N + 1):
            for a in range(N):
                for b in range(N):
                    g = chain.generator(a, b)
                    errs.append(_err(G[k] @ g - g @ G[k]))
        return max(errs)

    out.append(check("gaudin_zero_twist_invariance", "G_k(u) with K = 0 commutes with gl_N", invariance))

    def low_order():
        G = gd.gaudin_transfers(chain, K, u)
        L = gd.CurrentModule.from_chain(chain).L(u)
        G1 = sum((L[a][a] for a in range(N)), zeros((chain.dim, chain.dim))) + sum(K[a, a] for a in range(N)) * \
            eye(chain.dim)
        errs = [_err(G[0] - eye(chain.dim)), _err(G[1] - G1)]
        return max(errs)

    out.append(check("gaudin_low_order", "G_0 = 1 and G_1 = tr(K + L(u))", low_order))

    def weight_function():
        rng = _rng(seed)
        errs = []
        for xi in [(1,) * (N - 1), tuple([2] + [1] * (N - 2))]:
            t = [[_rand(rng, 30) for _ in range(k)] for k in xi]
            errs.append(_err(gd.gaudin_weight_F(chain, xi, t) - gd.gaudin_weight_F_recursive(chain, xi, t)))
        return max(errs)

    out.append(check("weight_function_recursion", "array sum equals the rank recursion", weight_function))
    return out


def appendix_b_checks(chain: yg.TensorChain, K, seed: int = 0) -> list:
    K = as_exact(np.asarray(K, dtype=object))
    rng = _rng(seed)
    x = _rand(rng, 20)
    while any(x == K[a, a] for a in range(chain.N)):
        x = _rand(rng, 20)
    u = _den_points(chain, 1, seed, 0)[0]

    def xxx():
        e = yg.xxx_dynamical_expansion(chain, K, x, seed)
        p = yg.xxx_dynamical_prediction(chain, K, x)
        return max(_err(e[k] - p[k]) for k in ("order0", "order1", "order2"))

    def gaudin_exp():
        e = gd.gaudin_dynamical_expansion(chain, K, x, seed)
        p = gd.gaudin_dynamical_prediction(chain, K, x)
        return max(_err(e[k] - p[k]) for k in ("order0", "order1", "order2"))

    def residue():
        return _err(gd.gaudin_transfer(chain, K, 2, u) - gd.g2_residue_form(chain, K, u))

    return [check("xxx_dynamical", "u^-1 and u^-2 coefficients of the trigonometric generating function", xxx),
            check("gaudin_dynamical", "u^-1 and u^-2 coefficients of the rational generating function",
                  gaudin_exp),
            check("g2_residues", "G_2 from its residues and the Gaudin Hamiltonians", residue)]


# ---------------------------------------------------------------- forms


def forms_checks(chain: yg.TensorChain, Q, K, seed: int = 0) -> list:
    N = chain.N
    Q = as_exact(np.asarray(Q, dtype=object))
    K = as_exact(np.asarray(K, dtype=object))
    u = _den_points(chain, 1, seed, N)[0]
    out = []
    out.append(check("shapovalov_vector", "Shapovalov form of the vector representation is the identity",
                     lambda: _err(fm.shapovalov_gram(vector_rep(N)) - eye(N))))

    def deformed_symmetric():
        G = fm.deformed_form(chain)
        return _err(G - G.T)

    out.append(check("deformed_symmetric", "deformed form is symmetric", deformed_symmetric))

    def shapz():
        G = fm.deformed_form(chain)
        return max(_err(fm.symmetry_defect(yg.transfer_matrix(chain, Q, k, u), G)) for k in range(N + 1))

    def shap():
        S = fm.tensor_shapovalov(chain)
        return max(_err(fm.symmetry_defect(gd.gaudin_transfer(chain, K, k, u), S)) for k in range(N + 1))

    def transpose():
        Qn = Q + np.triu(np.ones((N, N), dtype=int)).astype(object)
        return max(_err(fm.transpose_reversal_defect(chain, Qn, k, u)) for k in range(N + 1))

    out.append(check("transfer_symmetric_deformed", "T_k(u) symmetric for the deformed form (symmetric Q)", shapz))
    out.append(check("gaudin_symmetric_shapovalov", "G_k(u) symmetric for the Shapovalov form (symmetric K)",
                     shap))
    out.append(check("transpose_reversal", "adjoint of T_k for Q equals reversed-chain T_k for Q^T", transpose))
    if chain.n >= 2:
        out.append(check("chain_R_inverse", "R(z) times the reversed product of swapped factors is 1",
                         lambda: _err(fm.chain_R(chain) @ fm.chain_R_inverse(chain) - eye(chain.dim))))
    return out


def wedge_closed_form_checks(N: int, u, literal: bool = False) -> float:
    errs = []
    for l in range(1, N + 1):
        for m in range(1, N + 1):
            arg = u if literal else u + l - m
            errs.append(_err(fm.wedge_intertwiner(N, l, m, u) - fm.wedge_R_closed_form(N, l, m, arg)))
    return max(errs)


def yang_baxter_chain(modules, us) -> float:
    """R12(u1 - u2) R13(u1) R23(u2) = R23(u2) R13(u1) R12(u1 - u2) for intertwiners."""
    dims = [m.dim for m in modules]
    u1, u2 = us
    R12 = rm.embed_operator(dims, (0, 1), fm.intertwiner_R(modules[0], modules[1], u1 - u2))
    R13 = rm.embed_operator(dims, (0, 2), fm.intertwiner_R(modules[0], modules[2], u1))
    R23 = rm.embed_operator(dims, (1, 2), fm.intertwiner_R(modules[1], modules[2], u2))
    return _err(R12 @ R13 @ R23 - R23 @ R13 @ R12)
