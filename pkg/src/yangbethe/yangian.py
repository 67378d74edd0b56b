"""Yangian chain operators, fused monodromies, transfer matrices and related objects.

Auxiliary indices are 0-based. A Yangian module exposes ``T(u)`` as an N x N
nested list of operators on its quantum space. Tensor products multiply the
single-site auxiliary matrices with the last factor on the left, so the chain
monodromy is T(u) = T^[n](u) ... T^[1](u) while the quantum space is ordered
M_1 (x) ... (x) M_n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .reps import GlModule, perm_sign, site_generator, tensor_generator, wedge_basis
from .rmatrix import wedge_power
from .scalars import all_exact, as_exact, coerce, eye, is_zero, lift, mpq, to_rational, zeros
from .scalars import is_exact as is_exact_scalar


class PoleAtEvaluationPoint(ValueError):
    pass


class DegenerateTwist(ValueError):
    pass


# ---------------------------------------------------------------- modules over the Yangian


class YangianModule:
    """Common caching for T(u)."""

    N: int
    dim: int

    def _params_exact(self) -> bool:
        return True

    def T(self, u) -> list:
        exact = all_exact(u) and self._params_exact()
        key = (coerce(u, exact), exact)
        cache = self.__dict__.setdefault("_tcache", {})
        if key not in cache:
            if len(cache) > 256:
                cache.clear()
            cache[key] = self._T(key[0], exact)
        return cache[key]

    def _T(self, u, exact):
        raise NotImplementedError

    def identity(self, exact=True):
        return eye(self.dim, exact)


class EvaluationModule(YangianModule):
    """M(z): T_ab(u) = delta_ab + e_ba / (u - z)."""

    def __init__(self, module: GlModule, z):
        self.module = module
        self.z = z
        self.N = module.N
        self.dim = module.dim

    def _params_exact(self):
        return all_exact(self.z)

    def _T(self, u, exact):
        z = coerce(self.z, exact)
        if u == z:
            raise PoleAtEvaluationPoint(f"u = {u} hits the evaluation point")
        g = self.module.gens_in(exact)
        inv = 1 / (u - z)
        one = eye(self.dim, exact)
        return [[(one if a == b else 0 * one) + g[b][a] * inv for b in range(self.N)] for a in range(self.N)]


class VectorEvaluationModule(EvaluationModule):
    def __init__(self, N: int, z):
        from .reps import vector_rep
        super().__init__(vector_rep(N), z)


class ShiftedModule(YangianModule):
    """Restriction along T'_ab = T_{a+1,b+1}: a module over the Yangian of gl_{N-1}."""

    def __init__(self, inner: YangianModule):
        self.inner = inner
        self.N = inner.N - 1
        self.dim = inner.dim

    def _params_exact(self):
        return self.inner._params_exact()

    def T(self, u):
        full = self.inner.T(u)
        return [[full[a + 1][b + 1] for b in range(self.N)] for a in range(self.N)]


class ProductModule(YangianModule):
    """Tensor product of Yangian modules via the coproduct: T = T^[n] ... T^[1]."""

    def __init__(self, factors):
        factors = list(factors)
        if not factors:
            raise ValueError("empty product; use TensorChain for the trivial chain")
        Ns = {f.N for f in factors}
        if len(Ns) != 1:
            raise ValueError("factors have different N")
        self.factors = factors
        self.N = Ns.pop()
        self.dims = [f.dim for f in factors]
        self.dim = int(np.prod(self.dims))

    def _params_exact(self):
        return all(f._params_exact() for f in self.factors)

    def T(self, u):
        exact = all_exact(u) and self._params_exact()
        key = (coerce(u, exact), exact)
        cache = self.__dict__.setdefault("_tcache", {})
        if key in cache:
            return cache[key]
        N = self.N
        acc = self.factors[0].T(u)
        for f in self.factors[1:]:
            site = f.T(u)
            acc = [[_sum_kron([(acc[c][b], site[a][c]) for c in range(N)]) for b in range(N)]
                   for a in range(N)]
        if len(cache) > 256:
            cache.clear()
        cache[key] = acc
        return acc


def _sum_kron(pairs):
    out = None
    for x, y in pairs:
        term = np.kron(x, y)
        out = term if out is None else out + term
    return out


class TensorChain(ProductModule):
    """M_1(z_1) (x) ... (x) M_n(z_n) with the gl_N modules kept for generator access."""

    def __init__(self, modules, z):
        modules = list(modules)
        z = [to_rational(x) if not isinstance(x, complex) else x for x in z]
        if len(modules) != len(z):
            raise ValueError("need one evaluation point per module")
        self.modules = modules
        self.z = z
        if modules:
            super().__init__([EvaluationModule(m, x) for m, x in zip(modules, z)])
        else:
            raise ValueError("chains need at least one site")

    @property
    def n(self) -> int:
        return len(self.modules)

    @property
    def total_dim(self) -> int:
        return self.dim

    def with_z(self, z) -> "TensorChain":
        return TensorChain(self.modules, z)

    def generator(self, a, b, exact=True):
        return tensor_generator(self.modules, a, b, exact)

    def site_generator(self, i, a, b, exact=True):
        return site_generator(self.modules, i, a, b, exact)

    def hwv(self) -> np.ndarray:
        from .reps import tensor_hwv
        return tensor_hwv(self.modules)

    def highest_weights(self) -> list:
        return [m.highest_weight for m in self.modules]


def as_twist(Q):
    """Twist matrix as (array, exact flag): mpq object array or complex array."""
    arr = np.asarray(Q, dtype=object)
    if all(is_exact_scalar(v) for v in arr.flat):
        return as_exact(arr), True
    return np.array(arr.tolist(), dtype=complex), False


def chain_T_entry(chain: YangianModule, a: int, b: int, u):
    return chain.T(u)[a][b]


def _exact_for(chain, *xs):
    return all_exact(*xs) and chain._params_exact()


# ---------------------------------------------------------------- fused monodromy


def _apply_aux_T(state: dict, j: int, Tx: list, N: int) -> dict:
    """Act with T^{(j)}(x) on an auxiliary state {aux tuple: operator}."""
    out: dict = {}
    for alpha, op in state.items():
        beta = alpha[j]
        for a in range(N):
            new = alpha[:j] + (a,) + alpha[j + 1:]
            term = Tx[a][beta] @ op
            out[new] = out[new] + term if new in out else term
    return out


def _apply_aux_Q(state: dict, j: int, Q: np.ndarray, N: int) -> dict:
    out: dict = {}
    for alpha, op in state.items():
        g = alpha[j]
        for a in range(N):
            q = Q[a, g]
            if q == 0:
                continue
            new = alpha[:j] + (a,) + alpha[j + 1:]
            out[new] = out[new] + q * op if new in out else q * op
    return out


def _wedge_column_state(S, exact, D):
    one = eye(D, exact)
    return {tuple(S[s] for s in sigma): perm_sign(sigma) * one for sigma in itertools.permutations(range(len(S)))}


def wedge_blocks(chain: YangianModule, k: int, u, columns=None, check: bool = True) -> dict:
    """Blocks (S, S') of T^{wedge k}(u) for sorted subsets; columns restricts S'."""
    N = chain.N
    if not 1 <= k <= N:
        raise ValueError("need 1 <= k <= N")
    exact = _exact_for(chain, u)
    u = coerce(u, exact)
    Ts = [chain.T(u - k + 1 + j) for j in range(k)]  # copy j (0-based) has argument u - k + 1 + j
    basis = wedge_basis(N, k)
    out = {}
    for Sp in (basis if columns is None else columns):
        state = _wedge_column_state(Sp, exact, chain.dim)
        for j in range(k):
            state = _apply_aux_T(state, j, Ts[j], N)
        for S in basis:
            out[(S, Sp)] = state.get(S, zeros((chain.dim, chain.dim), exact))
        if check:
            _check_antisymmetric(state, exact)
    return out


def _check_antisymmetric(state: dict, exact: bool):
    from .rmatrix import NotInvariant
    for alpha, op in state.items():
        if len(set(alpha)) < len(alpha):
            bad = not is_zero(op) if exact else np.max(np.abs(op), initial=0) > 1e-8
        else:
            order = sorted(range(len(alpha)), key=lambda i: alpha[i])
            base = tuple(sorted(alpha))
            ref = state.get(base)
            diff = op - perm_sign(order) * ref if ref is not None else op
            bad = not is_zero(diff) if exact else np.max(np.abs(diff), initial=0) > 1e-8 * (1 + np.max(np.abs(op)))
        if bad:
            raise NotInvariant("fused monodromy does not preserve the wedge subspace")


def chain_T_wedge(chain: YangianModule, k: int, u, check: bool = True) -> np.ndarray:
    """T^{wedge k}(u) on (wedge k) (x) quantum space, auxiliary factor first."""
    blocks = wedge_blocks(chain, k, u, check=check)
    basis = wedge_basis(chain.N, k)
    return np.block([[blocks[(S, Sp)] for Sp in basis] for S in basis])


def transfer_matrix(chain: YangianModule, Q, k: int, u, check: bool = True) -> np.ndarray:
    """T_{k,Q}(u) = tr over wedge k of Q^{wedge k} T^{wedge k}(u)."""
    N = chain.N
    if not 0 <= k <= N:
        raise ValueError("need 0 <= k <= N")
    Q, qexact = as_twist(Q)
    blocks_exact = _exact_for(chain, u)
    exact = blocks_exact and qexact
    if k == 0:
        return eye(chain.dim, exact)
    Qw = wedge_power(Q, k)
    basis = wedge_basis(N, k)
    cols = [Sp for j, Sp in enumerate(basis) if any(Qw[j, i] != 0 for i in range(len(basis)))]
    blocks = wedge_blocks(chain, k, u, columns=cols, check=check)
    out = zeros((chain.dim, chain.dim), exact)
    pos = {S: i for i, S in enumerate(basis)}
    for Sp in cols:
        for S in basis:
            q = Qw[pos[Sp], pos[S]]
            if q != 0:
                blk = blocks[(S, Sp)]
                out = out + q * (blk if exact else lift(blk, False))
    return out


def qdet(chain: YangianModule, u, form: int = 1) -> np.ndarray:
    """Quantum determinant as a signed permutation sum.

    form 1: sum_tau sgn(tau) T_{1,tau1}(u) T_{2,tau2}(u-1) ... T_{N,tauN}(u-N+1)
    form 2: sum_tau sgn(tau) T_{tauN,N}(u-N+1) ... T_{tau1,1}(u)
    """
    N = chain.N
    exact = _exact_for(chain, u)
    u = coerce(u, exact)
    Ts = [chain.T(u - a) for a in range(N)]
    out = zeros((chain.dim, chain.dim), exact)
    for tau in itertools.permutations(range(N)):
        s = perm_sign(tau)
        if form == 1:
            prod = Ts[0][0][tau[0]]
            for a in range(1, N):
                prod = prod @ Ts[a][a][tau[a]]
        elif form == 2:
            prod = Ts[N - 1][tau[N - 1]][N - 1]
            for a in range(N - 2, -1, -1):
                prod = prod @ Ts[a][tau[a]][a]
        else:
            raise ValueError("form must be 1 or 2")
        out = out + s * prod
    return out


def qdet_highest_weight_scalar(chain: TensorChain, u):
    """prod_i prod_a (u - a + 1 - z_i + Lambda^a_i) / (u - a + 1 - z_i), a 1-based."""
    out = 1
    for m, z in zip(chain.modules, chain.z):
        lam = m.highest_weight
        for a in range(chain.N):
            out *= (u - a - z + lam[a]) / (u - a - z)
    return out


def modified_transfer(chain, Q, k: int, u) -> np.ndarray:
    """S_{k,Q}(u) = (1/(N-k)!) sum_l (-1)^(k-l) (N-l)!/(k-l)! T_{l,Q}(u)."""
    N = chain.N
    out = None
    for l in range(k + 1):
        c = mpq((-1) ** (k - l) * factorial(N - l), factorial(k - l) * factorial(N - k))
        term = transfer_matrix(chain, Q, l, u)
        term = c * term if term.dtype == object else complex(c) * term
        out = term if out is None else out + term
    return out


@dataclass
class OperatorPencil:
    """Coefficients c_k of sum_k c_k X^k with X = e^{-d/du} or X^{N-k} = (d/du)^{N-k}."""

    coefficients: list
    kind: str = "difference"
    meta: dict = field(default_factory=dict)


def difference_operator(chain, Q, u) -> OperatorPencil:
    """Coefficients (-1)^k T_{k,Q}(u) of e^{-k d/du}."""
    return OperatorPencil([(-1) ** k * transfer_matrix(chain, Q, k, u) for k in range(chain.N + 1)],
                          "difference")


# ---------------------------------------------------------------- trace-form cross-checks


def _raw_trace_product(chain, Q, m: int, idx, u):
    """tr over V^{(x)m} of Q^{i1}..Q^{ik} T^{(i1)}(u) .. T^{(ik)}(u-k+1) A^(m)."""
    N = chain.N
    Q, _ = as_twist(Q)
    exact = _exact_for(chain, u)
    k = len(idx)
    D = chain.dim
    Ts = [chain.T(u - r) for r in range(k)]
    # Tprod[(gamma, beta)] over tuples indexed along idx
    tprod = {}
    for gamma in itertools.product(range(N), repeat=k):
        for beta in itertools.product(range(N), repeat=k):
            prod = Ts[0][gamma[0]][beta[0]] if k else eye(D, exact)
            for r in range(1, k):
                prod = prod @ Ts[r][gamma[r]][beta[r]]
            tprod[(gamma, beta)] = prod
    qt = {}

    def qt_elem(alpha_I, beta_I):
        key = (alpha_I, beta_I)
        if key not in qt:
            acc = zeros((D, D), exact)
            for gamma in itertools.product(range(N), repeat=k):
                c = 1
                for r in range(k):
                    c *= Q[alpha_I[r], gamma[r]]
                if c != 0:
                    acc = acc + c * tprod[(gamma, beta_I)]
            qt[key] = acc
        return qt[key]

    rest = [c for c in range(m) if c not in idx]
    acc = zeros((D, D), exact)
    perms = [(p, perm_sign(p)) for p in itertools.permutations(range(m))]
    for beta in itertools.product(range(N), repeat=m):
        for p, s in perms:
            col = tuple(beta[p[c]] for c in range(m))
            if any(beta[c] != col[c] for c in rest):
                continue
            acc = acc + s * qt_elem(tuple(beta[i] for i in idx), tuple(col[i] for i in idx))
    return acc / factorial(m)


def transfer_trace_formula(chain, Q, m: int, idx, u) -> np.ndarray:
    """T_{k,Q}(u) from the trace over V^{(x)m} with the copies idx (0-based, distinct)."""
    N = chain.N
    k = len(idx)
    pref = mpq(factorial(m) * factorial(N - m), factorial(k) * factorial(N - k))
    return pref * _raw_trace_product(chain, Q, m, idx, u)


def difference_operator_trace_form(chain, Q, m: int, u) -> list:
    """Coefficients of e^{-k d/du} in tr((1 - Q^1 T^1 e^{-d}) ... (1 - Q^m T^m e^{-d}) A^(m))."""
    out = []
    for k in range(m + 1):
        acc = None
        for idx in itertools.combinations(range(m), k):
            if k == 0:
                term = _raw_trace_product(chain, Q, m, (), u)
            else:
                term = _raw_trace_product(chain, Q, m, idx, u)
            acc = term if acc is None else acc + term
        out.append((-1) ** k * acc)
    return out


def difference_operator_from_transfer(chain, Q, m: int, u) -> list:
    """(1/(N-m)!) sum_k (-1)^k (N-k)!/(m-k)! T_{k,Q}(u) e^{-k d/du}."""
    N = chain.N
    return [mpq((-1) ** k * factorial(N - k), factorial(m - k) * factorial(N - m)) * transfer_matrix(chain, Q, k, u)
            for k in range(m + 1)]


def antisymmetric_state_identity(chain, Q, u) -> float:
    """Largest deviation in the rank-one antisymmetrizer identity for the full difference operator.

    For every k, the sum over i1 < ... < ik of Q^{i1} T^{(i1)}(u) ... Q^{ik} T^{(ik)}(u-k+1)
    applied to the antisymmetric vector a must equal a (x) T_{k,Q}(u).
    """
    N = chain.N
    Q, _ = as_twist(Q)
    exact = _exact_for(chain, u)
    D = chain.dim
    one = eye(D, exact)
    start = {tuple(s): perm_sign(s) * one for s in itertools.permutations(range(N))}
    worst = 0.0
    Ts = [chain.T(u - r) for r in range(N)]
    for k in range(N + 1):
        total: dict = {}
        for idx in itertools.combinations(range(N), k):
            state = dict(start)
            for r in range(k - 1, -1, -1):
                state = _apply_aux_T(state, idx[r], Ts[r], N)
                state = _apply_aux_Q(state, idx[r], Q, N)
            for key, op in state.items():
                total[key] = total[key] + op if key in total else op
        Tk = transfer_matrix(chain, Q, k, u)
        for alpha in itertools.product(range(N), repeat=N):
            if len(set(alpha)) < N:
                expect = zeros((D, D), exact)
            else:
                order = sorted(range(N), key=lambda i: alpha[i])
                expect = perm_sign(order) * Tk
            got = total.get(alpha, zeros((D, D), exact))
            diff = got - expect
            if not is_zero(diff):
                from .scalars import max_abs
                worst = max(worst, max_abs(diff))
    return worst


# ---------------------------------------------------------------- generating-function identity


def modified_generating_defect(chain, Q, u, y):
    """sum_k (-1)^k S_k y^(N-k) - sum_l (-1)^l T_l (y+1)^(N-l)."""
    N = chain.N
    lhs = sum(((-1) ** k * y ** (N - k)) * modified_transfer(chain, Q, k, u) for k in range(N + 1))
    rhs = sum(((-1) ** l * (y + 1) ** (N - l)) * transfer_matrix(chain, Q, l, u) for l in range(N + 1))
    return lhs - rhs


# ---------------------------------------------------------------- Laurent expansion at infinity


def laurent_at_infinity(op_at, numerator_bound: int, denominator_w, orders: int, seed: int = 0):
    """Coefficients of w^0..w^{orders-1} of F(1/w) where F(1/w) = num(w) / den(w).

    ``op_at(u)`` evaluates F; ``denominator_w`` lists the monomial coefficients of den
    in w, with den(0) = 1.
    """
    from .scalars import (RationalFunctionSample, interpolate_with_known_denominator, poly_eval,
                          sample_points, series_divide)
    pts = []
    for w in sample_points(seed, numerator_bound + 6, excluded=[0]):
        if poly_eval(denominator_w, w) != 0:
            pts.append(w)
        if len(pts) == numerator_bound + 2:
            break
    values = [op_at(1 / w) for w in pts]
    num = interpolate_with_known_denominator(
        RationalFunctionSample(pts, values, list(denominator_w), numerator_bound))
    return series_divide(num, list(denominator_w), orders)


def _transfer_den_w(chain, k):
    """den(w) with T_k(1/w) = num(w)/den(w): prod_i prod_{j<k} (1 - w (j + z_i))."""
    coeffs = [mpq(1)]
    for z in chain.z:
        for j in range(k):
            c = j + z
            nxt = [mpq(0)] * (len(coeffs) + 1)
            for i, x in enumerate(coeffs):
                nxt[i] += x
                nxt[i + 1] -= c * x
            coeffs = nxt
    return coeffs


def transfer_laurent(chain: TensorChain, Q, k: int, orders: int = 3, seed: int = 0) -> list:
    """u^0, u^-1, ... coefficients of T_{k,Q}(u) at infinity, exact."""
    den = _transfer_den_w(chain, k)
    return laurent_at_infinity(lambda u: transfer_matrix(chain, Q, k, u), chain.n * k, den, orders, seed)


def _diag_distinct(K):
    K = np.asarray(K, dtype=object)
    N = K.shape[0]
    if any(K[a, b] != 0 for a in range(N) for b in range(N) if a != b):
        raise DegenerateTwist("twist must be diagonal")
    d = [K[a, a] for a in range(N)]
    if len(set(d)) != N:
        raise DegenerateTwist("twist entries must be distinct")
    return d


def trig_dynamical_hamiltonians(chain: TensorChain, K) -> list:
    """X_{a,K}(z) = -e_aa^2/2 + sum_i z_i e_aa^(i) + sum_b sum_{i<j} e_ab^(i) e_ba^(j)
    + sum_{b != a} K_b/(K_a - K_b) (e_ab e_ba - e_aa)."""
    Kd = _diag_distinct(K)
    N = chain.N
    n = chain.n
    e = [[chain.generator(a, b) for b in range(N)] for a in range(N)]
    site = [[[chain.site_generator(i, a, b) for b in range(N)] for a in range(N)] for i in range(n)]
    out = []
    for a in range(N):
        X = -(e[a][a] @ e[a][a]) / 2
        for i in range(n):
            X = X + chain.z[i] * site[i][a][a]
        for b in range(N):
            for i in range(n):
                for j in range(i + 1, n):
                    X = X + site[i][a][b] @ site[j][b][a]
        for b in range(N):
            if b != a:
                X = X + (Kd[b] / (Kd[a] - Kd[b])) * (e[a][b] @ e[b][a] - e[a][a])
        out.append(X)
    return out


def xxx_dynamical_expansion(chain: TensorChain, K, x, seed: int = 0) -> dict:
    """u^0, u^-1, u^-2 coefficients of sum_k (-1)^k T_{k,K}(u) x^(N-k) / prod_a (x - K_a)."""
    Kd = _diag_distinct(K)
    if any(x == k for k in Kd):
        raise ValueError("x must avoid the twist entries")
    N = chain.N
    K = np.asarray(K, dtype=object)
    denom = 1
    for k in Kd:
        denom *= x - k
    total = None
    for k in range(N + 1):
        if k == 0:
            coeffs = [eye(chain.dim), zeros((chain.dim, chain.dim)), zeros((chain.dim, chain.dim))]
        else:
            coeffs = transfer_laurent(chain, K, k, 3, seed + k)
        scaled = [((-1) ** k * x ** (N - k) / denom) * c for c in coeffs]
        total = scaled if total is None else [p + q for p, q in zip(total, scaled)]
    return {"order0": total[0], "order1": total[1], "order2": total[2]}


def xxx_dynamical_prediction(chain: TensorChain, K, x) -> dict:
    """The closed-form u^-1 and u^-2 coefficients built from X_{a,K}(z)."""
    Kd = _diag_distinct(K)
    N = chain.N
    e = [[chain.generator(a, b) for b in range(N)] for a in range(N)]
    X = trig_dynamical_hamiltonians(chain, K)
    o1 = zeros((chain.dim, chain.dim))
    o2 = zeros((chain.dim, chain.dim))
    for a in range(N):
        w = Kd[a] / (x - Kd[a])
        o1 = o1 - w * e[a][a]
        inner = X[a] + (e[a][a] @ e[a][a]) / 2
        for b in range(N):
            if b != a:
                inner = inner - (Kd[b] / (Kd[a] - Kd[b])) * (e[a][a] @ e[b][b])
        o2 = o2 - w * inner
    return {"order0": eye(chain.dim), "order1": o1, "order2": o2}
