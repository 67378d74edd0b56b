"""XXX Bethe vectors, Bethe equations, eigenvalue functions and eigenpair checks.

Roots are passed as a list of levels, ``t[a]`` holding the roots of level a + 1.
Twists are diagonal and given by their diagonal entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .rmatrix import swap_permutation
from .scalars import all_exact, is_zero, lift, max_abs, to_rational, zeros
from .yangian import (ProductModule, ShiftedModule, TensorChain, VectorEvaluationModule, YangianModule,
                      transfer_matrix)


class CoincidentRoots(ValueError):
    pass


class NotOffDiagonal(ValueError):
    pass


class ZeroBetheVector(ValueError):
    pass


class PoleAtSample(ValueError):
    pass


def _scalar(x):
    if isinstance(x, complex):
        return x
    if isinstance(x, float):
        return complex(x)
    return to_rational(x)


def normalize_roots(xi, t) -> list:
    """Roots as a list of per-level lists, shape-checked against xi."""
    t = [[_scalar(x) for x in level] for level in t] if t else [[] for _ in xi]
    while len(t) < len(xi):
        t.append([])
    if [len(level) for level in t] != list(xi):
        raise ValueError(f"roots of shape {[len(level) for level in t]} do not match xi={list(xi)}")
    return t


@dataclass
class BetheProblem:
    """Weights, evaluation points, diagonal twist and root counts for the XXX equations."""

    N: int
    weights: list
    z: list
    Q: list
    xi: tuple
    modules: list | None = None

    @classmethod
    def from_chain(cls, chain: TensorChain, Q, xi):
        return cls(chain.N, chain.highest_weights(), list(chain.z), [_scalar(q) for q in Q], tuple(xi),
                   list(chain.modules))

    def chain(self) -> TensorChain:
        if self.modules is None:
            raise ValueError("problem has no module data")
        return TensorChain(self.modules, self.z)


# ---------------------------------------------------------------- positions and normalisation


def positions(xi) -> list:
    """(level, index) pairs in lexicographic order."""
    return [(a, i) for a, n in enumerate(xi) for i in range(n)]


def _root_exact(t) -> bool:
    return all_exact(*[x for level in t for x in level])


def rprod_vector(N: int, xi, t, exact: bool):
    """R-product of the trace formula applied to the basis vector of raised indices.

    Returns a dict {index tuple: coefficient}.
    """
    pos = positions(xi)
    m = len(pos)
    flat = [t[a][i] for a, i in pos]
    beta = tuple(a + 1 for a, _ in pos)
    vec = zeros(N ** m, exact)
    idx = 0
    for b in beta:
        idx = idx * N + b
    vec[idx] = 1
    pairs = [(p, q) for p in range(m) for q in range(p + 1, m)]
    for p, q in reversed(pairs):
        vec = (flat[q] - flat[p]) * vec + vec[swap_permutation(N, m, q, p)]
    out = {}
    for r in range(N ** m):
        if vec[r] != 0:
            digits = []
            x = r
            for _ in range(m):
                digits.append(x % N)
                x //= N
            out[tuple(reversed(digits))] = vec[r]
    return out


def _bb_normalisation(xi, t):
    """prod_a prod_{i<j} 1/(t^a_j - t^a_i + 1) * prod_{a<b} prod 1/(t^b_j - t^a_i)."""
    den = 1
    L = len(xi)
    for a in range(L):
        for i in range(xi[a]):
            for j in range(i + 1, xi[a]):
                den *= t[a][j] - t[a][i] + 1
    for a in range(L):
        for b in range(a + 1, L):
            for i in range(xi[a]):
                for j in range(xi[b]):
                    den *= t[b][j] - t[a][i]
    return den


def _clearing_factor(xi, t, z):
    """prod (t^a_i - z_j) * prod (t^{a+1}_j - t^a_i)."""
    if not (_root_exact(t) and all_exact(*z)):
        t = [[complex(x) for x in level] for level in t]
        z = [complex(zz) for zz in z]
    f = 1
    for a in range(len(xi)):
        for x in t[a]:
            for zz in z:
                f *= x - zz
    for a in range(len(xi) - 1):
        for x in t[a]:
            for y in t[a + 1]:
                f *= y - x
    return f


def creation_trace(module: YangianModule, xi, t, vec):
    """B_xi(t) vec via the trace formula, normalised by the root denominators."""
    N = module.N
    t = normalize_roots(xi, t)
    exact = _root_exact(t) and module._params_exact() and vec.dtype == object
    pos = positions(xi)
    if not pos:
        return vec.copy()
    den = _bb_normalisation(xi, t)
    if den == 0:
        raise CoincidentRoots("roots coincide on a denominator of the creation operator")
    coeffs = rprod_vector(N, xi, t, exact)
    flat = [t[a][i] for a, i in pos]
    alpha = [a for a, _ in pos]
    Ts = [module.T(x) for x in flat]
    v = vec if exact else lift(vec, False)
    out = zeros(module.dim, exact)
    for beta, c in coeffs.items():
        w = v
        for p in range(len(pos) - 1, -1, -1):
            w = Ts[p][alpha[p]][beta[p]] @ w
        out = out + c * w
    return out / den


def creation_recursive(module: YangianModule, xi, t, vec):
    """B_xi(t) vec through the reduction to gl_{N-1} on W(t^1_1) ... W(t^1_r) (x) M."""
    N = module.N
    t = normalize_roots(xi, t)
    if sum(xi) == 0:
        return vec.copy()
    exact = _root_exact(t) and module._params_exact() and vec.dtype == object
    r = xi[0]
    first = t[0]
    if N == 1:
        raise ValueError("gl_1 has no raising roots")
    factors = [VectorEvaluationModule(N - 1, x) for x in first] + [ShiftedModule(module)]
    composite = ProductModule(factors)
    w1 = zeros(N - 1, exact)
    w1[0] = 1
    start = vec if exact else lift(vec, False)
    lead = np.array([1], dtype=object if exact else complex)
    for _ in range(r):
        lead = np.kron(lead, w1)
    start = np.kron(lead, start)
    inner = creation_recursive(composite, tuple(xi[1:]), t[1:], start)
    comps = inner.reshape((N - 1) ** r, module.dim)
    Ts = [module.T(x) for x in first]
    out = zeros(module.dim, exact)
    for flat_idx, word in enumerate(itertools.product(range(N - 1), repeat=r)):
        w = comps[flat_idx]
        if is_zero(w):
            continue
        for p in range(r - 1, -1, -1):
            w = Ts[p][0][word[p] + 1] @ w
        out = out + w
    return out


def _weight_function(chain: TensorChain, xi, t, creator):
    t = normalize_roots(xi, t)
    exact = _root_exact(t) and chain._params_exact()
    v = chain.hwv()
    if not exact:
        v = lift(v, False)
    for level in t:
        for x in level:
            if any(x == zz for zz in chain.z):
                raise CoincidentRoots("a root coincides with an evaluation point")
    return creator(chain, xi, t, v) * _clearing_factor(xi, t, chain.z)


def bethe_vector_trace(chain: TensorChain, xi, t):
    """Universal weight function from the trace formula, with polynomial normalisation."""
    return _weight_function(chain, xi, t, creation_trace)


def bethe_vector_recursive(chain: TensorChain, xi, t):
    """Universal weight function from the gl_N to gl_{N-1} recursion."""
    return _weight_function(chain, xi, t, creation_recursive)


def bethe_weight(chain: TensorChain, xi) -> tuple:
    """Weight of the Bethe vector: sum of highest weights minus the lowered roots."""
    w = [sum(lam[a] for lam in chain.highest_weights()) for a in range(chain.N)]
    for a, n in enumerate(xi):
        w[a] -= n
        w[a + 1] += n
    return tuple(w)


# ---------------------------------------------------------------- Bethe equations


def _level(t, a):
    return t[a] if 0 <= a < len(t) else []


def bae_sides(problem: BetheProblem, t):
    """(LHS, RHS) of the polynomial Bethe equations for every (level, index)."""
    N = problem.N
    t = normalize_roots(problem.xi, t)
    out = []
    for a in range(N - 1):
        for i, x in enumerate(t[a]):
            lhs = problem.Q[a]
            rhs = problem.Q[a + 1]
            for lam, zz in zip(problem.weights, problem.z):
                lhs = lhs * (x - zz + lam[a])
                rhs = rhs * (x - zz + lam[a + 1])
            for y in _level(t, a - 1):
                lhs = lhs * (x - y + 1)
                rhs = rhs * (x - y)
            for j, y in enumerate(t[a]):
                if j != i:
                    lhs = lhs * (x - y - 1)
                    rhs = rhs * (x - y + 1)
            for y in _level(t, a + 1):
                lhs = lhs * (x - y)
                rhs = rhs * (x - y - 1)
            out.append((lhs, rhs))
    return out


def bae_residual(problem: BetheProblem, t) -> list:
    return [l - r for l, r in bae_sides(problem, t)]


def eigenvalue_X(a: int, u, t, z, weights, Q):
    """X^a(u) for the 0-based diagonal index a."""
    out = Q[a]
    for lam, zz in zip(weights, z):
        if u == zz:
            raise PoleAtSample(f"u = {u} is an evaluation point")
        out = out * (u - zz + lam[a]) / (u - zz)
    for y in _level(t, a - 1):
        if u == y:
            raise PoleAtSample(f"u = {u} is a root")
        out = out * (u - y + 1) / (u - y)
    for y in _level(t, a):
        if u == y:
            raise PoleAtSample(f"u = {u} is a root")
        out = out * (u - y - 1) / (u - y)
    return out


def fundamental_difference_operator(xi, Q, t, z, weights, u) -> list:
    """Coefficients of e^{-k d/du} in prod_a (1 - X^a(u) e^{-d/du}), a increasing left to right."""
    N = len(Q)
    t = normalize_roots(xi, t)
    cache = {}

    def X(a, r):
        if (a, r) not in cache:
            cache[(a, r)] = eigenvalue_X(a, u - r, t, z, weights, Q)
        return cache[(a, r)]

    out = []
    for k in range(N + 1):
        acc = 0
        for combo in itertools.combinations(range(N), k):
            prod = 1
            for r, a in enumerate(combo):
                prod = prod * X(a, r)
            acc = acc + prod
        out.append((-1) ** k * acc)
    return out


def transfer_eigenvalue(problem: BetheProblem, t, k: int, u):
    """lambda_k(u) = sum_{a_1 < ... < a_k} prod_r X^{a_r}(u - r + 1)."""
    coeffs = fundamental_difference_operator(problem.xi, problem.Q, t, problem.z, problem.weights, u)
    return (-1) ** k * coeffs[k]


def is_off_diagonal(t, tol: float = 1e-8) -> bool:
    t = [list(level) for level in t]

    def apart(x, y):
        if all_exact(x, y):
            return x != y
        return abs(complex(x) - complex(y)) > tol

    for a, level in enumerate(t):
        for i in range(len(level)):
            for j in range(i + 1, len(level)):
                if not apart(level[i], level[j]):
                    return False
        if a + 1 < len(t):
            for x in level:
                for y in t[a + 1]:
                    if not apart(x, y):
                        return False
    return True


def _norm(v):
    if v.dtype == object:
        return float(max(abs(float(x)) for x in v)) if len(v) else 0.0
    return float(np.linalg.norm(v))


def verify_eigenpair(problem: BetheProblem, t, u_samples, tol: float = 1e-10) -> dict:
    """Check T_{k,Q}(u) B = lambda_k(u) B for all k and samples, plus singularity and weight."""
    t = normalize_roots(problem.xi, t)
    if not is_off_diagonal(t):
        raise NotOffDiagonal("roots are not off-diagonal")
    chain = problem.chain()
    exact = _root_exact(t) and all_exact(*problem.Q) and all_exact(*u_samples) and chain._params_exact()
    if not exact:
        t = [[complex(x) for x in level] for level in t]
    B = bethe_vector_trace(chain, problem.xi, t)
    nB = _norm(B) if exact else float(np.linalg.norm(B))
    if nB <= tol:
        raise ZeroBetheVector("Bethe vector vanishes")
    Qd = [q if exact else complex(q) for q in problem.Q]
    Qmat = np.diag(Qd).astype(object) if exact else np.diag(Qd).astype(complex)
    eig_problem = problem if exact else BetheProblem(problem.N, problem.weights, [complex(z) for z in problem.z],
                                                     Qd, problem.xi)
    checks = []
    eig_samples = []
    for k in range(1, problem.N + 1):
        for u in u_samples:
            uu = u if exact else complex(u)
            Tk = transfer_matrix(chain, Qmat, k, uu)
            lam = transfer_eigenvalue(eig_problem, t, k, uu)
            res = Tk @ B - lam * B
            rel = (max_abs(res) / nB) if exact else float(np.linalg.norm(res)) / nB
            dense = np.linalg.eigvals(lift(Tk, False) if Tk.dtype == object else Tk)
            gap = float(np.min(np.abs(dense - complex(lam))))
            eig_samples.append(complex(lam))
            checks.append({"k": k, "u": u, "eigenvalue": lam, "relative_residual": rel,
                           "dense_eigenvalue_gap": gap})
    out = {"checks": checks, "eigenvalues": eig_samples,
           "max_relative_residual": max((c["relative_residual"] for c in checks), default=0.0),
           "max_dense_gap": max((c["dense_eigenvalue_gap"] for c in checks), default=0.0)}
    wt = bethe_weight(chain, problem.xi)
    werr = 0.0
    for a in range(problem.N):
        g = chain.generator(a, a, exact)
        werr = max(werr, (max_abs(g @ B - wt[a] * B)) / nB)
    out["weight_residual"] = werr
    if all(q == problem.Q[0] for q in problem.Q):
        serr = 0.0
        for a in range(problem.N):
            for b in range(a + 1, problem.N):
                serr = max(serr, max_abs(chain.generator(a, b, exact) @ B) / nB)
        out["singular_residual"] = serr
    out["passed"] = (out["max_relative_residual"] <= tol and out["max_dense_gap"] <= tol
                     and werr <= tol and out.get("singular_residual", 0.0) <= tol)
    return out
