"""Flip map, rational R-matrix, antisymmetrizers and fused R-matrices on wedge powers.

Tensor factors of V^{(x)m} are ordered with factor 0 most significant, the same
convention as ``numpy.kron``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import factorial

import numpy as np

from .reps import perm_sign, wedge_basis
from .scalars import all_exact, coerce, det, eye, is_zero, mpq, zeros


class NotInvariant(RuntimeError):
    """An operator failed to preserve the subspace it was to be restricted to."""


def _digits(idx: int, N: int, m: int) -> tuple:
    out = []
    for _ in range(m):
        out.append(idx % N)
        idx //= N
    return tuple(reversed(out))


def _index(digits, N: int) -> int:
    out = 0
    for d in digits:
        out = out * N + d
    return out


@lru_cache(maxsize=None)
def swap_permutation(N: int, m: int, i: int, j: int) -> np.ndarray:
    """Index map of the flip of factors i and j in V^{(x)m}."""
    out = np.empty(N ** m, dtype=np.int64)
    for r in range(N ** m):
        d = list(_digits(r, N, m))
        d[i], d[j] = d[j], d[i]
        out[r] = _index(d, N)
    return out


def flip(N: int) -> np.ndarray:
    P = zeros((N * N, N * N))
    for a in range(N):
        for b in range(N):
            P[a * N + b, b * N + a] = mpq(1)
    return P


def rational_R(N: int, u) -> np.ndarray:
    exact = all_exact(u)
    u = coerce(u, exact)
    P = flip(N)
    if not exact:
        P = P.astype(float).astype(complex)
    return u * eye(N * N, exact) + P


def R_factor(N: int, m: int, i: int, j: int, u) -> np.ndarray:
    """R^{(ij)}(u) = u + P^{(ij)} on V^{(x)m}."""
    exact = all_exact(u)
    u = coerce(u, exact)
    perm = swap_permutation(N, m, i, j)
    out = u * eye(N ** m, exact)
    for r in range(N ** m):
        out[r, perm[r]] += 1
    return out


def apply_R(M: np.ndarray, N: int, m: int, i: int, j: int, u) -> np.ndarray:
    """R^{(ij)}(u) @ M, using that the flip only permutes rows."""
    return u * M + M[swap_permutation(N, m, i, j)]


def antisymmetrizer(N: int, k: int) -> np.ndarray:
    """A^(k) = (1/k!) sum_sigma sgn(sigma) P_sigma on V^{(x)k}."""
    dim = N ** k
    A = zeros((dim, dim))
    if k == 0:
        return eye(1)
    w = mpq(1, factorial(k))
    for r in range(dim):
        d = _digits(r, N, k)
        for sigma in itertools.permutations(range(k)):
            img = tuple(d[s] for s in sigma)
            A[_index(img, N), r] += perm_sign(sigma) * w
    return A


@lru_cache(maxsize=None)
def _wedge_inclusion_cached(N: int, k: int) -> np.ndarray:
    basis = wedge_basis(N, k)
    out = zeros((N ** k, len(basis)))
    for col, s in enumerate(basis):
        for sigma in itertools.permutations(range(k)):
            out[_index(tuple(s[x] for x in sigma), N), col] += perm_sign(sigma)
    return out


def wedge_inclusion(N: int, k: int) -> np.ndarray:
    """Columns sum_sigma sgn(sigma) e_{s_sigma(1)} (x) ... for sorted k-subsets s."""
    return _wedge_inclusion_cached(N, k).copy()


def wedge_rows(N: int, k: int) -> list:
    """Rows of V^{(x)k} holding the sorted tuples; reading them projects onto the wedge basis."""
    return [_index(s, N) for s in wedge_basis(N, k)]


def restrict_to_image(X_incl: np.ndarray, incl: np.ndarray, rows: list) -> np.ndarray:
    """Given X @ incl, return C with X @ incl == incl @ C, or raise NotInvariant."""
    C = X_incl[rows, :]
    if not is_zero(X_incl - incl @ C):
        raise NotInvariant("operator does not preserve the wedge subspace")
    return C


def pair_wedge_data(N: int, k: int, l: int):
    """Inclusion of (wedge k) (x) (wedge l) into V^{(x)(k+l)} and its projection rows."""
    incl = np.kron(_wedge_inclusion_cached(N, k), _wedge_inclusion_cached(N, l))
    rows = [a * N ** l + b for a in wedge_rows(N, k) for b in wedge_rows(N, l)]
    return incl, rows


def fused_R(N: int, k: int, l: int, u) -> np.ndarray:
    """R^{wedge k, wedge l}(u), the fused product restricted to wedge k (x) wedge l.

    The product runs over i = k, ..., 1 (outer, leftmost first) and j = 1, ..., l
    (inner) of R^{(i, j+k)}(u + i - j - k + l).
    """
    if not (1 <= k <= N and 1 <= l <= N):
        raise ValueError("need 1 <= k, l <= N")
    exact = all_exact(u)
    u = coerce(u, exact)
    incl, rows = pair_wedge_data(N, k, l)
    m = k + l
    state = incl if exact else incl.astype(float).astype(complex)
    factors = [(i, j) for i in range(k, 0, -1) for j in range(1, l + 1)]
    for i, j in reversed(factors):
        state = apply_R(state, N, m, i - 1, j + k - 1, u + i - j - k + l)
    incl_d = incl if exact else incl.astype(float).astype(complex)
    if exact:
        return restrict_to_image(state, incl_d, rows)
    C = state[rows, :]
    if np.max(np.abs(state - incl_d @ C), initial=0.0) > 1e-9 * (1 + np.max(np.abs(state), initial=0.0)):
        raise NotInvariant("operator does not preserve the wedge subspace")
    return C


def wedge_generators(N: int, k: int):
    from .reps import wedge_rep
    return wedge_rep(N, k).gens


def reduced_fused_R(N: int, k: int, side: str, u) -> np.ndarray:
    """R_{wedge k, wedge 1}(u) (side "k1") or R_{wedge 1, wedge k}(u) (side "1k")."""
    exact = all_exact(u)
    u = coerce(u, exact)
    W = wedge_generators(N, k)
    E = [[zeros((N, N)) for _ in range(N)] for _ in range(N)]
    for a in range(N):
        for b in range(N):
            E[a][b][a, b] = mpq(1)
    d = W[0][0].shape[0]
    if side == "k1":
        out = sum((np.kron(W[a][b], E[b][a]) for a in range(N) for b in range(N)), zeros((d * N, d * N)))
        shift = 0
    elif side == "1k":
        out = sum((np.kron(E[a][b], W[b][a]) for a in range(N) for b in range(N)), zeros((d * N, d * N)))
        shift = k - 1
    else:
        raise ValueError("side must be 'k1' or '1k'")
    if not exact:
        out = out.astype(float).astype(complex)
    return out + (u + shift) * eye(d * N, exact)


def swap21(X: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """X^{(21)}: the operator on B (x) A obtained from X on A (x) B by flipping factors."""
    T = X.reshape(d1, d2, d1, d2)
    return T.transpose(1, 0, 3, 2).reshape(d1 * d2, d1 * d2)


def embed_operator(dims, sites, X: np.ndarray, exact: bool = True) -> np.ndarray:
    """Operator X on the ordered factors ``sites`` of the tensor product with given dims."""
    dims = list(dims)
    total = int(np.prod(dims))
    sub_dims = [dims[s] for s in sites]
    out = zeros((total, total), exact)
    for col in range(total):
        idx = list(np.unravel_index(col, dims)) if dims else []
        sub = int(np.ravel_multi_index([idx[s] for s in sites], sub_dims))
        column = X[:, sub]
        for r in range(X.shape[0]):
            c = column[r]
            if c == 0:
                continue
            ridx = np.unravel_index(r, sub_dims)
            new = list(idx)
            for s, v in zip(sites, ridx):
                new[s] = int(v)
            out[int(np.ravel_multi_index(new, dims)), col] += c
    return out


def ordered_product(factors, direction: str = "->"):
    """Product of noncommuting factors; "->" multiplies in list order, "<-" reversed."""
    seq = list(factors) if direction == "->" else list(reversed(factors))
    out = seq[0]
    for f in seq[1:]:
        out = out @ f
    return out


def wedge_power(Q: np.ndarray, k: int) -> np.ndarray:
    """Q^{wedge k} in the sorted-subset basis: matrix of k x k minors."""
    N = Q.shape[0]
    basis = wedge_basis(N, k)
    exact = Q.dtype == object
    out = zeros((len(basis), len(basis)), exact)
    for i, s in enumerate(basis):
        for j, t in enumerate(basis):
            sub = Q[np.ix_(list(s), list(t))]
            out[i, j] = det(sub) if exact else np.linalg.det(sub) if k else 1.0
    if k == 0:
        out[0, 0] = mpq(1) if exact else 1.0
    return out


def rra_scalar(k: int):
    """(-1)^k prod_{j=1}^k (-j)^{k-j+1}."""
    out = mpq((-1) ** k)
    for j in range(1, k + 1):
        out *= mpq(-j) ** (k - j + 1)
    return out


def rra_product(N: int, k: int) -> np.ndarray:
    """Ordered product over i < j (lexicographic) of R^{ij}(i - j) on V^{(x)k}."""
    out = eye(N ** k)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            out = out @ R_factor(N, k, i - 1, j - 1, mpq(i - j))
    return out


def fused_inversion_scalar(k: int, l: int, u):
    out = 1
    for i in range(1, k + 1):
        for j in range(1, l + 1):
            out *= 1 - (u - i + j) ** 2
    return out
