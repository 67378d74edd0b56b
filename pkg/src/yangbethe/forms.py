"""Shapovalov forms, intertwining R-operators and the deformed form on tensor chains."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .reps import GlModule, wedge_rep
from .rmatrix import embed_operator, fused_R
from .scalars import all_exact, coerce, eye, mpq, nullspace, rref, zeros
from .yangian import TensorChain, transfer_matrix


class NonUnique(RuntimeError):
    """The defining linear system has no unique solution (reducible module)."""


class DegenerateAt(RuntimeError):
    """The R-operator is not defined or not invertible at the requested point."""

    def __init__(self, u, data: dict | None = None):
        self.u = u
        self.data = data or {}
        super().__init__(f"R-operator degenerate at u = {u}; {self.data}")


def _solve_linear(rows: list, rhs: list, n: int):
    """Unique exact solution of rows @ x = rhs, or None when not unique or inconsistent."""
    if n == 0:
        return []
    aug = np.array([list(r) + [b] for r, b in zip(rows, rhs)], dtype=object)
    red, piv = rref(aug)
    if n in piv:
        return None
    if len(piv) < n:
        return None
    x = [mpq(0)] * n
    for i, p in enumerate(piv):
        x[p] = red[i, n]
    return x


# ---------------------------------------------------------------- Shapovalov form


@lru_cache(maxsize=64)
def _shapovalov_cached(key):
    M = _registry[key]
    N, d = M.N, M.dim
    wts = [tuple(w) for w in M.weights]
    unknowns = {}
    for i in range(d):
        for j in range(i, d):
            if wts[i] == wts[j]:
                unknowns[(i, j)] = len(unknowns)
    n = len(unknowns)

    def var(i, j):
        return unknowns.get((min(i, j), max(i, j)))

    rows, rhs = [], []
    row = [mpq(0)] * n
    row[var(M.hwv_index, M.hwv_index)] = mpq(1)
    rows.append(row)
    rhs.append(mpq(1))
    for a in range(N):
        for b in range(N):
            if a == b:
                continue
            g = M.gens[a][b]
            gt = M.gens[b][a]
            for i in range(d):
                for j in range(d):
                    # S(e_ab w_i, w_j) - S(w_i, e_ba w_j) = 0
                    row = {}
                    for k in range(d):
                        if g[k, i] != 0:
                            v = var(k, j)
                            if v is not None:
                                row[v] = row.get(v, 0) + g[k, i]
                        if gt[k, j] != 0:
                            v = var(i, k)
                            if v is not None:
                                row[v] = row.get(v, 0) - gt[k, j]
                    row = {k: c for k, c in row.items() if c != 0}
                    if row:
                        dense = [mpq(0)] * n
                        for k, c in row.items():
                            dense[k] = mpq(c)
                        rows.append(dense)
                        rhs.append(mpq(0))
    x = _solve_linear(rows, rhs, n)
    if x is None:
        raise NonUnique("Shapovalov system has no unique solution")
    S = zeros((d, d))
    for (i, j), k in unknowns.items():
        S[i, j] = x[k]
        S[j, i] = x[k]
    return S


_registry: dict = {}


def shapovalov_gram(M: GlModule) -> np.ndarray:
    """Gram matrix of the Shapovalov form in the module basis."""
    key = id(M)
    _registry[key] = M
    return _shapovalov_cached(key).copy()


def tensor_shapovalov(chain: TensorChain) -> np.ndarray:
    out = eye(1)
    for m in chain.modules:
        out = np.kron(out, shapovalov_gram(m))
    return out


# ---------------------------------------------------------------- R-operators


def lambda_prime(weight) -> int:
    """Lambda^N + 1 - max{a : Lambda^a > Lambda^N}, with max of the empty set taken to be N."""
    N = len(weight)
    above = [a + 1 for a in range(N) if weight[a] > weight[-1]]
    top = max(above) if above else N
    return weight[-1] + 1 - top


def singular_points(L: GlModule, M: GlModule) -> dict:
    """Predicted simple pole and degenerate value of R_LM for finite-dimensional irreducibles."""
    lL, lM = L.highest_weight, M.highest_weight
    return {"pole": lambda_prime(lL) - lM[0], "degenerate": lL[0] - lambda_prime(lM)}


def _pair_generators(L: GlModule, M: GlModule):
    N = L.N
    IL, IM = eye(L.dim), eye(M.dim)
    left = [[np.kron(L.gens[a][b], IM) for b in range(N)] for a in range(N)]
    cross = [[sum((np.kron(L.gens[a][c], M.gens[c][b]) for c in range(N)), zeros((L.dim * M.dim,) * 2))
              for b in range(N)] for a in range(N)]
    cross_rev = [[sum((np.kron(L.gens[c][b], M.gens[a][c]) for c in range(N)), zeros((L.dim * M.dim,) * 2))
                  for b in range(N)] for a in range(N)]
    delta = [[left[a][b] + np.kron(IL, M.gens[a][b]) for b in range(N)] for a in range(N)]
    return left, cross, cross_rev, delta


def intertwiner_R(L: GlModule, M: GlModule, u) -> np.ndarray:
    """The unique gl_N-equivariant R on L (x) M with
    R (u e_ab (x) 1 + sum_c e_ac (x) e_cb) = (u e_ab (x) 1 + sum_c e_cb (x) e_ac) R
    and R v (x) w = v (x) w."""
    if L.N != M.N:
        raise ValueError("modules have different N")
    if not all_exact(u):
        raise TypeError("intertwiner_R needs an exact rational argument")
    u = coerce(u, True)
    N = L.N
    D = L.dim * M.dim
    wts = [tuple(x + y for x, y in zip(wl, wm)) for wl in L.weights for wm in M.weights]
    unknowns = {}
    for r in range(D):
        for k in range(D):
            if wts[r] == wts[k]:
                unknowns[(r, k)] = len(unknowns)
    n = len(unknowns)
    left, cross, cross_rev, delta = _pair_generators(L, M)
    pairs = []
    for a in range(N - 1):
        pairs.append((delta[a][a + 1], delta[a][a + 1]))
        pairs.append((delta[a + 1][a], delta[a + 1][a]))
    for a in range(N):
        for b in range(N):
            pairs.append((u * left[a][b] + cross[a][b], u * left[a][b] + cross_rev[a][b]))
    rows = []
    for X, Y in pairs:
        # (R X - Y R)[r, c] = sum_k R[r,k] X[k,c] - sum_k Y[r,k] R[k,c]
        Xnz = [np.nonzero([x != 0 for x in X[:, c]])[0] for c in range(D)]
        Ynz = [np.nonzero([y != 0 for y in Y[r, :]])[0] for r in range(D)]
        for r in range(D):
            for c in range(D):
                row = {}
                for k in Xnz[c]:
                    v = unknowns.get((r, int(k)))
                    if v is not None:
                        row[v] = row.get(v, 0) + X[k, c]
                for k in Ynz[r]:
                    v = unknowns.get((int(k), c))
                    if v is not None:
                        row[v] = row.get(v, 0) - Y[r, k]
                row = {k: x for k, x in row.items() if x != 0}
                if row:
                    dense = [mpq(0)] * n
                    for k, x in row.items():
                        dense[k] = mpq(x)
                    rows.append(dense)
    mat = np.array(rows, dtype=object) if rows else zeros((0, n))
    null = nullspace(mat)
    diag = singular_points(L, M)
    if len(null) != 1:
        raise DegenerateAt(u, {"solution_dimension": len(null), **diag})
    vec = null[0]
    h = L.hwv_index * M.dim + M.hwv_index
    scale = vec[unknowns[(h, h)]]
    if scale == 0:
        raise DegenerateAt(u, {"reason": "normalization vanishes", **diag})
    R = zeros((D, D))
    for (r, k), i in unknowns.items():
        R[r, k] = vec[i] / scale
    return R


def wedge_R_closed_form(N: int, l: int, m: int, u) -> np.ndarray:
    """R^{wedge l, wedge m}(u) (u + max(m - l, 0))/(u + m) prod_{i<l, j<m} 1/(u + j - i)."""
    u = coerce(u, True)
    scale = (u + max(m - l, 0)) / (u + m)
    for i in range(l):
        for j in range(m):
            scale = scale / (u + j - i)
    return scale * fused_R(N, l, m, u)


def wedge_intertwiner(N: int, l: int, m: int, u) -> np.ndarray:
    return intertwiner_R(wedge_rep(N, l), wedge_rep(N, m), u)


def chain_R(chain: TensorChain, cache: dict | None = None) -> np.ndarray:
    """Ordered product over i < j (lexicographic, leftmost first) of R^{(ij)}_{M_i M_j}(z_i - z_j)."""
    dims = [m.dim for m in chain.modules]
    out = eye(chain.dim)
    for i in range(chain.n):
        for j in range(i + 1, chain.n):
            R = intertwiner_R(chain.modules[i], chain.modules[j], chain.z[i] - chain.z[j])
            out = out @ embed_operator(dims, (i, j), R)
    return out


def chain_R_inverse(chain: TensorChain) -> np.ndarray:
    """Reversed product of R^{(ji)}_{M_j M_i}(z_j - z_i)."""
    dims = [m.dim for m in chain.modules]
    out = eye(chain.dim)
    for i in range(chain.n):
        for j in range(i + 1, chain.n):
            R = intertwiner_R(chain.modules[j], chain.modules[i], chain.z[j] - chain.z[i])
            out = embed_operator(dims, (j, i), R) @ out
    return out


def deformed_form(chain: TensorChain) -> np.ndarray:
    """Gram matrix of S^z(w1, w2) = (tensor Shapovalov)(w1, R(z) w2)."""
    return tensor_shapovalov(chain) @ chain_R(chain)


def leading_minors(G: np.ndarray) -> list:
    """Leading principal minors as running products of Gaussian elimination pivots."""
    A = G.copy()
    n = A.shape[0]
    out = []
    acc = mpq(1)
    for k in range(n):
        p = A[k, k]
        acc = acc * p
        out.append(acc)
        if p == 0:
            out.extend([mpq(0)] * (n - k - 1))
            break
        for r in range(k + 1, n):
            f = A[r, k] / p
            if f != 0:
                A[r, k:] = A[r, k:] - f * A[k, k:]
    return out


def is_positive_definite(G: np.ndarray) -> bool:
    return all(m > 0 for m in leading_minors(G))


def positivity_hypothesis(chain: TensorChain) -> bool:
    """z_i - z_j > Lambda_i^1 - Lambda_j' for every ordered pair i < j."""
    hw = chain.highest_weights()
    for i in range(chain.n):
        for j in range(i + 1, chain.n):
            if not chain.z[i] - chain.z[j] > hw[i][0] - lambda_prime(hw[j]):
                return False
    return True


# ---------------------------------------------------------------- symmetry checks


def symmetry_defect(op: np.ndarray, gram: np.ndarray):
    """Max entry of op^T G - G op; zero when op is symmetric for the form G."""
    diff = op.T @ gram - gram @ op
    vals = [abs(x) for x in diff.flat]
    return max(vals) if vals else 0


def reversal_permutation(dims) -> np.ndarray:
    """Matrix P with P (w_1 (x) ... (x) w_n) = w_n (x) ... (x) w_1."""
    dims = list(dims)
    total = int(np.prod(dims))
    P = zeros((total, total))
    rdims = dims[::-1]
    for idx in itertools.product(*[range(d) for d in dims]):
        src = int(np.ravel_multi_index(idx, dims)) if dims else 0
        dst = int(np.ravel_multi_index(idx[::-1], rdims)) if dims else 0
        P[dst, src] = mpq(1)
    return P


def transpose_reversal_defect(chain: TensorChain, Q, k: int, u):
    """T_{k,Q}(u; z)^T S - S P^{-1} T^{reversed chain}_{k,Q^T}(u) P, with S the tensor Shapovalov form."""
    Q = np.asarray(Q, dtype=object)
    S = tensor_shapovalov(chain)
    T = transfer_matrix(chain, Q, k, u)
    rev = TensorChain(list(reversed(chain.modules)), list(reversed(chain.z)))
    Trev = transfer_matrix(rev, Q.T.copy(), k, u)
    P = reversal_permutation([m.dim for m in chain.modules])
    Pinv = P.T
    rhs = S @ (Pinv @ Trev @ P)
    diff = T.T @ S - rhs
    return max([abs(x) for x in diff.flat], default=0)


def imaginary_parts(values) -> float:
    return max([abs(complex(v).imag) for v in values], default=0.0)
