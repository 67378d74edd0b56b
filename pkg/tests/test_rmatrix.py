from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import rationals
from yangbethe import rmatrix as rm
from yangbethe.scalars import eye, is_zero, mpq
from yangbethe.suites import rmatrix_checks


def test_rational_R_is_u_plus_flip():
    u = mpq(5, 3)
    P = rm.flip(2)
    assert is_zero(rm.rational_R(2, u) - (u * eye(4) + P))
    # flip sends e1 (x) e2 to e2 (x) e1
    assert P[2, 1] == 1 and P[1, 2] == 1 and P[0, 0] == 1


def test_antisymmetrizer_is_projector():
    A = rm.antisymmetrizer(3, 2)
    assert is_zero(A @ A - A)
    assert sum(A[i, i] for i in range(9)) == 3


def test_wedge_power_of_diagonal():
    Q = np.diag([mpq(2), mpq(3), mpq(5)]).astype(object)
    W = rm.wedge_power(Q, 2)
    assert sorted(W[i, i] for i in range(3)) == [6, 10, 15]


@pytest.mark.parametrize("N", [2, 3])
def test_rmatrix_suite_exact(N):
    for res in rmatrix_checks(N, draws=10, seed=N):
        assert res["max_abs_error"] == 0, res["name"]


def test_rmatrix_suite_rank_four_partial():
    for res in rmatrix_checks(4, draws=1, seed=4, max_rank=2):
        assert res["max_abs_error"] == 0, res["name"]


@settings(max_examples=25, deadline=None)
@given(rationals(), rationals())
def test_yang_baxter_property(u, v):
    N = 2
    lhs = rm.R_factor(N, 3, 0, 1, u - v) @ rm.R_factor(N, 3, 0, 2, u) @ rm.R_factor(N, 3, 1, 2, v)
    rhs = rm.R_factor(N, 3, 1, 2, v) @ rm.R_factor(N, 3, 0, 2, u) @ rm.R_factor(N, 3, 0, 1, u - v)
    assert is_zero(lhs - rhs)


@settings(max_examples=20, deadline=None)
@given(rationals(), st.integers(1, 3), st.integers(1, 3))
def test_fused_inversion_property(u, k, l):
    N = 3
    A = rm.fused_R(N, k, l, u)
    B = rm.swap21(rm.fused_R(N, l, k, -u), comb(N, l), comb(N, k))
    assert is_zero(A @ B - rm.fused_inversion_scalar(k, l, u) * eye(A.shape[0]))


@settings(max_examples=20, deadline=None)
@given(rationals(), st.lists(rationals(5, 4), min_size=4, max_size=4))
def test_R_commutes_with_twist(u, entries):
    Q = np.array(entries, dtype=object).reshape(2, 2)
    QQ = np.kron(Q, Q)
    R = rm.rational_R(2, u)
    assert is_zero(R @ QQ - QQ @ R)


def test_fused_vector_R_is_rational_R():
    u = mpq(7, 2)
    assert is_zero(rm.fused_R(3, 1, 1, u) - rm.rational_R(3, u))


def test_swap21_is_an_involution():
    X = np.arange(36).reshape(6, 6).astype(object)
    assert is_zero(rm.swap21(rm.swap21(X, 2, 3), 3, 2) - X)


def test_rmatrix_suite_rank_four_full():
    for res in rmatrix_checks(4, draws=1, seed=41):
        assert res["max_abs_error"] == 0, res["name"]
