import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import rationals
from yangbethe.scalars import (DegreeBoundExceeded, RationalFunctionSample, det, eye, format_scalar, interpolate,
                               interpolate_with_known_denominator, inverse, is_zero, mpq, nullspace, parse_scalar,
                               poly_eval, poly_from_roots, rank, recover_polynomial, rref, sample_points,
                               series_divide, solve_unique, to_rational)


def _mat(entries, n):
    return np.array(entries[: n * n], dtype=object).reshape(n, n)


def test_rational_round_trip():
    assert format_scalar(mpq(-3, 4)) == "-3/4"
    assert parse_scalar("-3/4") == mpq(-3, 4)
    assert parse_scalar({"re": 1.5, "im": -2.0}) == complex(1.5, -2.0)
    assert to_rational(7) == mpq(7)


def test_float_is_not_rational():
    with pytest.raises(TypeError):
        to_rational(0.5)


def test_sample_points_are_distinct_and_avoid_exclusions():
    pts = sample_points(3, 40, excluded=[mpq(0), mpq(1, 2)])
    assert len(set(pts)) == 40
    assert mpq(0) not in pts and mpq(1, 2) not in pts
    assert pts == sample_points(3, 40, excluded=[mpq(0), mpq(1, 2)])


def test_det_and_inverse_small():
    A = _mat([mpq(2), mpq(1), mpq(1), mpq(1)], 2)
    assert det(A) == 1
    assert is_zero(A @ inverse(A) - eye(2))


def test_nullspace_of_rank_one():
    A = _mat([mpq(1), mpq(2), mpq(2), mpq(4)], 2)
    assert rank(A) == 1
    (v,) = nullspace(A)
    assert is_zero(A @ v)


def test_held_out_point_catches_low_bound():
    pts = [mpq(k) for k in range(6)]
    vals = [x ** 3 for x in pts]
    with pytest.raises(DegreeBoundExceeded):
        interpolate_with_known_denominator(RationalFunctionSample(pts, vals, [mpq(1)], 2))


def test_series_divide_geometric():
    # 1/(1 - x) = 1 + x + x^2 + ...
    assert series_divide([mpq(1)], [mpq(1), mpq(-1)], 5) == [1] * 5


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals(), min_size=1, max_size=6))
def test_interpolation_recovers_polynomial(coeffs):
    pts = sample_points(1, len(coeffs) + 2)
    got = recover_polynomial(lambda x: poly_eval(coeffs, x), len(coeffs) - 1, pts, held_out=2)
    assert got == list(coeffs)


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals(), min_size=8, max_size=8))
def test_det_is_multiplicative(entries):
    A, B = _mat(entries[:4], 2), _mat(entries[4:], 2)
    assert det(A @ B) == det(A) * det(B)


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals(), min_size=12, max_size=12))
def test_solve_unique_or_singular(entries):
    A = _mat(entries[:9], 3)
    b = np.array(entries[9:], dtype=object)
    if det(A) == 0:
        return
    x = solve_unique(A, b)
    assert is_zero(A @ x - b)


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals(), min_size=1, max_size=4))
def test_poly_from_roots_vanishes(roots):
    p = poly_from_roots(roots)
    assert all(poly_eval(p, r) == 0 for r in roots)


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals(), min_size=9, max_size=9))
def test_rref_is_idempotent(entries):
    A = _mat(entries, 3)
    R, piv = rref(A)
    R2, piv2 = rref(R)
    assert piv == piv2 and is_zero(R - R2)


def test_interpolate_matrix_valued():
    pts = [mpq(k) for k in range(3)]
    M0, M1 = eye(2), 2 * eye(2)
    coeffs = interpolate(pts, [M0 + x * M1 for x in pts])
    assert is_zero(coeffs[0] - M0) and is_zero(coeffs[1] - M1) and is_zero(coeffs[2])
