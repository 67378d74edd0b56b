"""Scalar domains and exact rational-function recovery.

Exact work uses ``gmpy2.mpq`` stored in numpy object arrays. Floating work uses
complex128 arrays. Every operator builder in the package picks its domain from
the scalars it is handed: all-rational inputs give exact results, anything
else falls back to complex floating point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import gmpy2
import numpy as np

mpq = gmpy2.mpq
MPQ = type(mpq(0))
MPZ = type(gmpy2.mpz(0))

RATIONAL_BOUND = 1000


class DegreeBoundExceeded(ValueError):
    """A held-out sample disagrees with the interpolant."""


class SingularSystem(ValueError):
    """A linear system has no unique solution."""


# ---------------------------------------------------------------- coercion


def is_exact(x) -> bool:
    if isinstance(x, bool):
        return False
    return isinstance(x, (int, MPQ, MPZ, Fraction))


def all_exact(*xs) -> bool:
    for x in xs:
        if isinstance(x, (list, tuple)):
            if not all_exact(*x):
                return False
        elif isinstance(x, np.ndarray):
            if x.dtype != object or not all(is_exact(v) for v in x.flat):
                return False
        elif not is_exact(x):
            return False
    return True


def to_rational(x) -> MPQ:
    """Coerce ints, Fractions, mpq and "p/q" strings to mpq."""
    if isinstance(x, MPQ):
        return x
    if isinstance(x, (int, MPZ)) and not isinstance(x, bool):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/")
            if int(q) == 0:
                raise ValueError(f"zero denominator in {x!r}")
            return mpq(int(p), int(q))
        return mpq(int(s))
    raise TypeError(f"cannot read {x!r} as an exact rational")


def coerce(x, exact: bool):
    if exact:
        return to_rational(x)
    if isinstance(x, MPQ):
        return complex(float(x))
    return complex(x)


def format_rational(q) -> str:
    q = to_rational(q)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x):
    """JSON form: "p/q" for rationals, {re, im} for everything else."""
    if is_exact(x):
        return format_rational(x)
    x = complex(x)
    return {"re": x.real, "im": x.imag}


def parse_scalar(obj):
    if isinstance(obj, dict):
        return complex(float(obj["re"]), float(obj.get("im", 0.0)))
    if isinstance(obj, float):
        return complex(obj)
    return to_rational(obj)


# ---------------------------------------------------------------- arrays


def zeros(shape, exact: bool = True) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(mpq(0))
        return out
    return np.zeros(shape, dtype=complex)


def eye(n: int, exact: bool = True) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = mpq(1) if exact else 1.0
    return out


def as_exact(a) -> np.ndarray:
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_rational(v)
    return out


def lift(a: np.ndarray, exact: bool) -> np.ndarray:
    """Bring an exact array into the requested domain."""
    if exact:
        return a
    if a.dtype == object:
        return np.array([[complex(float(v)) for v in row] for row in a.reshape(a.shape[0], -1)],
                        dtype=complex).reshape(a.shape)
    return a.astype(complex)


def is_zero(a) -> bool:
    if isinstance(a, np.ndarray):
        if a.dtype == object:
            return all(v == 0 for v in a.flat)
        return not np.any(a)
    return a == 0


def max_abs(a) -> float:
    """Largest absolute entry, as a float (0.0 exactly when a is exactly zero)."""
    if isinstance(a, np.ndarray):
        if a.size == 0:
            return 0.0
        if a.dtype == object:
            return float(max(abs(complex(v)) if not is_exact(v) else abs(float(v)) for v in a.flat))
        return float(np.max(np.abs(a)))
    return abs(complex(a)) if not is_exact(a) else abs(float(a))


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


# ---------------------------------------------------------------- sampling


def random_rational(rng: random.Random, bound: int = RATIONAL_BOUND) -> MPQ:
    return mpq(rng.randint(-bound, bound), rng.randint(1, bound))


def sample_points(seed: int, count: int, excluded: Iterable = (), bound: int = RATIONAL_BOUND) -> list:
    """Pairwise-distinct random rationals avoiding ``excluded``; deterministic in ``seed``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = random.Random(seed)
    banned = {to_rational(x) for x in excluded}
    out: list = []
    while len(out) < count:
        q = random_rational(rng, bound)
        if q in banned:
            continue
        banned.add(q)
        out.append(q)
    return out


# ---------------------------------------------------------------- polynomials
# Coefficient lists run from low to high degree. Entries may be scalars or
# arrays (matrix-valued polynomials); all arithmetic is elementwise.


def poly_eval(coeffs: Sequence, x):
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * x + c
    return acc if acc is not None else 0


def poly_from_roots(roots: Sequence) -> list:
    out = [mpq(1)]
    for r in roots:
        nxt = [mpq(0)] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] += c
            nxt[i] -= r * c
        out = nxt
    return out


def interpolate(points: Sequence, values: Sequence) -> list:
    """Monomial coefficients of the unique interpolant of degree < len(points).

    Newton divided differences, valid for scalar or array values.
    """
    n = len(points)
    if len(set(points)) != n:
        raise ValueError("interpolation points must be distinct")
    dd = [v for v in values]
    coef = [dd[0]]
    for j in range(1, n):
        dd = [(dd[i + 1] - dd[i]) / (points[i + j] - points[i]) for i in range(n - j)]
        coef.append(dd[0])
    # expand Newton form into monomials
    out = [coef[-1]]
    for j in range(n - 2, -1, -1):
        # out <- out * (x - points[j]) + coef[j]
        nxt = [None] * (len(out) + 1)
        nxt[len(out)] = out[-1]
        for i in range(len(out) - 1, 0, -1):
            nxt[i] = out[i - 1] - points[j] * out[i]
        nxt[0] = coef[j] - points[j] * out[0]
        out = nxt
    return out


@dataclass
class RationalFunctionSample:
    """Samples of f = p / q with q known; q is given by monomial coefficients."""

    points: list
    values: list
    denominator: list
    numerator_degree_bound: int

    @property
    def denominator_degree(self) -> int:
        return len(self.denominator) - 1


def interpolate_with_known_denominator(samples: RationalFunctionSample) -> list:
    """Recover the numerator p exactly; surplus points are used as held-out checks."""
    d = samples.numerator_degree_bound
    pts = list(samples.points)
    if len(pts) < d + 1:
        raise ValueError("need at least numerator_degree_bound + 1 points")
    if len(set(pts)) != len(pts):
        raise ValueError("sample points must be distinct")
    numer = []
    for x, v in zip(pts, samples.values):
        qx = poly_eval(samples.denominator, x)
        if qx == 0:
            raise ValueError(f"sample point {x} is a pole")
        numer.append(v * qx)
    coeffs = interpolate(pts[: d + 1], numer[: d + 1])
    for x, nv in zip(pts[d + 1:], numer[d + 1:]):
        if not is_zero(poly_eval(coeffs, x) - nv):
            raise DegreeBoundExceeded(f"held-out point {x} disagrees with degree-{d} interpolant")
    return coeffs


def recover_polynomial(f: Callable, degree_bound: int, points: Sequence, held_out: int = 1) -> list:
    """Interpolate ``f`` as a polynomial of degree <= bound, with held-out checks."""
    need = degree_bound + 1 + held_out
    if len(points) < need:
        raise ValueError(f"need {need} points")
    pts = list(points[:need])
    return interpolate_with_known_denominator(
        RationalFunctionSample(pts, [f(x) for x in pts], [mpq(1)], degree_bound))


def series_divide(num: Sequence, den: Sequence, order: int) -> list:
    """First ``order`` coefficients of num/den as a power series (den[0] != 0)."""
    if den[0] == 0:
        raise ZeroDivisionError("series denominator has zero constant term")
    out = []
    for k in range(order):
        acc = num[k] if k < len(num) else 0 * num[0]
        for j in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[j] * out[k - j]
        out.append(acc / den[0])
    return out


# ---------------------------------------------------------------- exact linear algebra


def rref(a: np.ndarray):
    """Reduced row echelon form over Q. Returns (R, pivot_columns)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        pr = m[r]
        nz = [j for j in range(c, cols) if pr[j] != 0]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                mi = m[i]
                for j in nz:
                    mi[j] = mi[j] - f * pr[j]
        pivots.append(c)
        r += 1
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = m[i][j]
    return out, pivots


def nullspace(a: np.ndarray) -> list:
    """Basis of the right null space over Q, one object vector per element."""
    a = np.asarray(a, dtype=object)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return [eye(cols)[:, j].copy() for j in range(cols)]
    r, piv = rref(a)
    free = [j for j in range(cols) if j not in piv]
    basis = []
    for f in free:
        v = zeros(cols)
        v[f] = mpq(1)
        for i, p in enumerate(piv):
            v[p] = -r[i, f]
        basis.append(v)
    return basis


def rank(a: np.ndarray) -> int:
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    return len(rref(a)[1])


def solve_unique(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b exactly; raise SingularSystem unless the solution is unique."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    single = b.ndim == 1
    bb = b.reshape(len(b), -1)
    aug = np.concatenate([a, bb], axis=1)
    r, piv = rref(aug)
    n = a.shape[1]
    if any(p >= n for p in piv):
        raise SingularSystem("inconsistent system")
    if len(piv) < n:
        raise SingularSystem(f"solution space has dimension {n - len(piv)}")
    x = r[:n, n:]
    return x[:, 0] if single else x


def inverse(a: np.ndarray) -> np.ndarray:
    return solve_unique(a, eye(a.shape[0]))


def det(a: np.ndarray):
    """Exact determinant by fraction-free elimination on a copy."""
    m = [list(row) for row in a]
    n = len(m)
    sign = 1
    acc = mpq(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return mpq(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        acc *= piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return acc * sign
