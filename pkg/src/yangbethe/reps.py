"""Finite-dimensional gl_N modules as explicit generator matrices.

Indices are 0-based throughout: ``gens[a][b]`` is the action of e_{a+1,b+1}.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .scalars import is_zero, mpq, nullspace, rref, solve_unique, zeros


class InvalidRank(ValueError):
    pass


class MismatchedN(ValueError):
    pass


class NoHighestWeightVector(RuntimeError):
    pass


@dataclass(eq=False)
class GlModule:
    N: int
    dim: int
    gens: list  # N x N nested list of dim x dim exact matrices
    weights: list  # tuple of ints per basis vector
    hwv_index: int = 0
    label: dict = field(default_factory=dict)
    _float: list | None = field(default=None, repr=False)

    def e(self, a: int, b: int) -> np.ndarray:
        return self.gens[a][b]

    def gens_in(self, exact: bool) -> list:
        if exact:
            return self.gens
        if self._float is None:
            self._float = [[np.array(g, dtype=float).astype(complex) for g in row] for row in self.gens]
        return self._float

    @property
    def highest_weight(self) -> tuple:
        return tuple(self.weights[self.hwv_index])

    def hwv(self) -> np.ndarray:
        v = zeros(self.dim)
        v[self.hwv_index] = mpq(1)
        return v


def _unit(N: int, a: int) -> tuple:
    return tuple(1 if i == a else 0 for i in range(N))


def vector_rep(N: int) -> GlModule:
    if N < 1:
        raise ValueError("N must be positive")
    gens = [[zeros((N, N)) for _ in range(N)] for _ in range(N)]
    for a in range(N):
        for b in range(N):
            gens[a][b][a, b] = mpq(1)
    return GlModule(N, N, gens, [_unit(N, a) for a in range(N)], 0, {"type": "vector"})


def wedge_basis(N: int, k: int) -> list:
    return list(itertools.combinations(range(N), k))


def wedge_rep(N: int, k: int) -> GlModule:
    """The k-th exterior power, basis v_S for sorted k-subsets S (lexicographic)."""
    if k < 0 or k > N:
        raise InvalidRank(f"wedge rank {k} outside 0..{N}")
    basis = wedge_basis(N, k)
    pos = {s: i for i, s in enumerate(basis)}
    d = len(basis)
    gens = [[zeros((d, d)) for _ in range(N)] for _ in range(N)]
    for col, s in enumerate(basis):
        for a in range(N):
            for b in range(N):
                if b not in s:
                    continue
                if a == b:
                    gens[a][b][col, col] += 1
                    continue
                if a in s:
                    continue
                new = [a if x == b else x for x in s]
                order = sorted(range(k), key=lambda i: new[i])
                sign = _perm_sign(order)
                gens[a][b][pos[tuple(sorted(new))], col] += sign
    weights = [tuple(1 if i in s else 0 for i in range(N)) for s in basis]
    return GlModule(N, d, gens, weights, 0, {"type": "wedge", "k": k})


def _perm_sign(p) -> int:
    p = list(p)
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


perm_sign = _perm_sign


def weyl_dimension(N: int, lam) -> int:
    lam = list(lam) + [0] * (N - len(lam))
    num = 1
    den = 1
    for i in range(N):
        for j in range(i + 1, N):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    return num // den


# -- sparse vectors in V^{(x)m}, as dicts tuple -> coefficient


def _apply_e_sparse(vec: dict, a: int, b: int) -> dict:
    out: dict = {}
    for idx, c in vec.items():
        for p, x in enumerate(idx):
            if x == b:
                new = idx[:p] + (a,) + idx[p + 1:]
                out[new] = out.get(new, 0) + c
    return {k: v for k, v in out.items() if v != 0}


def _weight_of_index(idx, N) -> tuple:
    w = [0] * N
    for x in idx:
        w[x] += 1
    return tuple(w)


def irrep_from_partition(N: int, lam) -> GlModule:
    """Cyclic submodule of V^{(x)|lam|} generated by a highest-weight vector of weight lam."""
    lam = tuple(int(x) for x in lam) + (0,) * (N - len(lam))
    if len(lam) != N or any(lam[i] < lam[i + 1] for i in range(N - 1)) or lam[-1] < 0:
        raise ValueError(f"{lam} is not a polynomial dominant weight")
    m = sum(lam)
    label = {"type": "partition", "lambda": list(lam)}
    if m == 0:
        gens = [[zeros((1, 1)) for _ in range(N)] for _ in range(N)]
        return GlModule(N, 1, gens, [lam], 0, label)

    def weight_space(w):
        return sorted({p for p in itertools.permutations(sum(([a] * w[a] for a in range(N)), []))})

    top = weight_space(lam)
    # raising constraints e_{a,a+1} w = 0 on the lam weight space
    rows = []
    for a in range(N - 1):
        tgt: dict = {}
        for j, idx in enumerate(top):
            for key, c in _apply_e_sparse({idx: mpq(1)}, a, a + 1).items():
                tgt.setdefault(key, {})[j] = c
        for key in sorted(tgt):
            row = zeros(len(top))
            for j, c in tgt[key].items():
                row[j] = c
            rows.append(row)
    mat = np.array(rows, dtype=object) if rows else zeros((0, len(top)))
    null = nullspace(mat)
    if not null:
        raise NoHighestWeightVector(str(lam))
    hw = {top[j]: c for j, c in enumerate(null[0]) if c != 0}

    basis: list = []
    weights: list = []
    per_weight: dict = {}  # weight -> (index list, echelon rows, pivot cols, coordinate keys)

    def try_add(vec: dict, w) -> bool:
        entry = per_weight.setdefault(w, {"ids": [], "vecs": []})
        keys = sorted(set().union(*[set(v) for v in entry["vecs"]], set(vec)))
        mat = np.array([[v.get(k, mpq(0)) for k in keys] for v in entry["vecs"] + [vec]], dtype=object)
        if len(rref(mat)[1]) <= len(entry["vecs"]):
            return False
        entry["ids"].append(len(basis))
        entry["vecs"].append(vec)
        basis.append(vec)
        weights.append(w)
        return True

    try_add(hw, lam)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for a in range(N):
            for b in range(a + 1, N):
                new = _apply_e_sparse(basis[i], b, a)
                if not new:
                    continue
                w = list(weights[i])
                w[b] += 1
                w[a] -= 1
                if try_add(new, tuple(w)):
                    queue.append(len(basis) - 1)

    d = len(basis)
    if d != weyl_dimension(N, lam):
        raise RuntimeError("span closure dimension disagrees with the Weyl formula")
    solvers = {}
    for w, entry in per_weight.items():
        keys = sorted(set().union(*[set(v) for v in entry["vecs"]]))
        mat = np.array([[v.get(k, mpq(0)) for v in entry["vecs"]] for k in keys], dtype=object)
        solvers[w] = (keys, mat, entry["ids"])
    gens = [[zeros((d, d)) for _ in range(N)] for _ in range(N)]
    for j in range(d):
        for a in range(N):
            for b in range(N):
                img = _apply_e_sparse(basis[j], a, b)
                if not img:
                    continue
                w = list(weights[j])
                w[a] += 1
                w[b] -= 1
                w = tuple(w)
                if w not in solvers:
                    raise RuntimeError("module not closed under the generators")
                keys, mat, ids = solvers[w]
                if set(img) - set(keys):
                    raise RuntimeError("module not closed under the generators")
                rhs = np.array([img.get(k, mpq(0)) for k in keys], dtype=object)
                coords = solve_unique(mat, rhs)
                for c, i in zip(coords, ids):
                    gens[a][b][i, j] = c
    return GlModule(N, d, gens, weights, 0, label)


def module_from_descriptor(N: int, desc: dict) -> GlModule:
    kind = desc.get("type")
    if kind == "vector":
        return vector_rep(N)
    if kind == "wedge":
        return wedge_rep(N, int(desc["k"]))
    if kind == "partition":
        return irrep_from_partition(N, desc["lambda"])
    raise ValueError(f"unknown module descriptor {desc!r}")


# -- tensor products


def _check_same_N(modules) -> int:
    Ns = {m.N for m in modules}
    if len(Ns) != 1:
        raise MismatchedN(f"modules have different N: {sorted(Ns)}")
    return Ns.pop()


def tensor_generator(modules, a: int, b: int, exact: bool = True) -> np.ndarray:
    """Sum over sites of id (x) ... (x) e_ab (x) ... (x) id."""
    _check_same_N(modules)
    dims = [m.dim for m in modules]
    total = int(np.prod(dims))
    out = None
    for i, m in enumerate(modules):
        left = int(np.prod(dims[:i]))
        right = int(np.prod(dims[i + 1:]))
        g = m.gens_in(exact)[a][b]
        term = np.kron(np.kron(_eye(left, exact), g), _eye(right, exact))
        out = term if out is None else out + term
    if out is None:
        return _eye(total, exact) * 0
    return out


def _eye(n, exact):
    from .scalars import eye
    return eye(n, exact)


def site_generator(modules, site: int, a: int, b: int, exact: bool = True) -> np.ndarray:
    dims = [m.dim for m in modules]
    left = int(np.prod(dims[:site]))
    right = int(np.prod(dims[site + 1:]))
    return np.kron(np.kron(_eye(left, exact), modules[site].gens_in(exact)[a][b]), _eye(right, exact))


def tensor_weights(modules) -> list:
    out = [()]
    N = _check_same_N(modules)
    out = [tuple([0] * N)]
    for m in modules:
        out = [tuple(x + y for x, y in zip(w, mw)) for w in out for mw in m.weights]
    return out


def tensor_hwv(modules) -> np.ndarray:
    v = np.array([mpq(1)], dtype=object)
    for m in modules:
        v = np.kron(v, m.hwv())
    return v


def singular_space(modules, weight) -> list:
    """Basis of vectors of the given weight killed by every e_ab with a < b."""
    N = _check_same_N(modules)
    weight = tuple(weight)
    wts = tensor_weights(modules)
    cols = [i for i, w in enumerate(wts) if w == weight]
    if not cols:
        return []
    total = len(wts)
    blocks = []
    for a in range(N):
        for b in range(a + 1, N):
            g = tensor_generator(modules, a, b)
            blocks.append(g[:, cols])
    mat = np.concatenate(blocks, axis=0)
    mat = mat[[i for i in range(mat.shape[0]) if not is_zero(mat[i])]]
    null = nullspace(mat) if mat.shape[0] else nullspace(zeros((0, len(cols))))
    out = []
    for v in null:
        full = zeros(total)
        full[cols] = v
        out.append(full)
    return out


def commutation_defect(M: GlModule) -> int:
    """Number of violated relations [e_ab, e_cd] = d_bc e_ad - d_ad e_cb (0 when valid)."""
    N = M.N
    bad = 0
    for a, b, c, d in itertools.product(range(N), repeat=4):
        lhs = M.gens[a][b] @ M.gens[c][d] - M.gens[c][d] @ M.gens[a][b]
        rhs = zeros((M.dim, M.dim))
        if b == c:
            rhs = rhs + M.gens[a][d]
        if a == d:
            rhs = rhs - M.gens[c][b]
        if not is_zero(lhs - rhs):
            bad += 1
    return bad


def wedge_dimension(N: int, k: int) -> int:
    return comb(N, k)
