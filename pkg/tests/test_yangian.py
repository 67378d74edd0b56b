import numpy as np
import pytest
from hypothesis import assume, given, settings

from conftest import q, rationals
from yangbethe import yangian as yg
from yangbethe.reps import vector_rep, wedge_rep
from yangbethe.rmatrix import flip
from yangbethe.scalars import det, eye, is_zero, mpq
from yangbethe.suites import yangian_checks


def _vv_chain(z1, z2, N=2):
    return yg.TensorChain([vector_rep(N), vector_rep(N)], [z1, z2])


def test_single_site_T_entries():
    ch = yg.TensorChain([vector_rep(2)], [q("1/2")])
    u = q("3")
    T = ch.T(u)
    # T_12(u) = e_21/(u - z): maps e_1 to e_2 / (u - z)
    assert T[0][1][1, 0] == 1 / (u - q("1/2"))
    assert is_zero(T[0][0] - (eye(2) + vector_rep(2).e(0, 0) / (u - q("1/2"))))


def test_two_site_transfer_closed_form():
    # tr T(u) = 2 + 1/(u - z1) + 1/(u - z2) + P/((u - z1)(u - z2)) with Q = 1
    z1, z2, u = q("0"), q("3"), q("7/5")
    ch = _vv_chain(z1, z2)
    T1 = yg.transfer_matrix(ch, eye(2), 1, u)
    ref = (2 + 1 / (u - z1) + 1 / (u - z2)) * eye(4) + flip(2) / ((u - z1) * (u - z2))
    assert is_zero(T1 - ref)


def test_qdet_of_vector_site():
    # on V(z): qdet = (u - z + 1)/(u - z)
    z, u = q("2/3"), q("-5/2")
    ch = yg.TensorChain([vector_rep(3)], [z])
    assert is_zero(yg.qdet(ch, u) - ((u - z + 1) / (u - z)) * eye(3))


def test_top_transfer_is_det_times_qdet():
    ch = _vv_chain(q("1/3"), q("-2"), N=3)
    Q = np.array([[2, 1, 0], [0, 1, 3], [1, 0, 1]], dtype=object)
    u = q("9/4")
    assert is_zero(yg.transfer_matrix(ch, Q, 3, u) - 5 * yg.qdet(ch, u))
    assert det(Q) == 5


def test_pole_is_reported():
    ch = yg.TensorChain([vector_rep(2)], [q("1")])
    with pytest.raises(yg.PoleAtEvaluationPoint):
        ch.T(q("1"))


@pytest.mark.parametrize("mods,z", [
    ([vector_rep(2), vector_rep(2)], ["0", "3"]),
    ([vector_rep(3), wedge_rep(3, 2)], ["1/2", "-7/3"]),
])
def test_yangian_suite_exact(mods, z):
    ch = yg.TensorChain(mods, [q(x) for x in z])
    N = ch.N
    Q = np.array([[mpq(a * N + b + 1, 1 + (a == b)) for b in range(N)] for a in range(N)], dtype=object)
    for res in yangian_checks(ch, Q, seed=1):
        assert res["max_abs_error"] == 0, res["name"]


@settings(max_examples=20, deadline=None)
@given(rationals(), rationals(), rationals(), rationals())
def test_transfer_commute_property(z, u, v, x):
    assume(len({z, x}) == 2 and u not in (z, x) and v not in (z, x))
    ch = _vv_chain(z, x)
    Q = np.array([[mpq(2), mpq(1)], [mpq(-1), mpq(3)]], dtype=object)
    A = yg.transfer_matrix(ch, Q, 1, u)
    B = yg.transfer_matrix(ch, Q, 1, v)
    C = yg.transfer_matrix(ch, Q, 2, v)
    assert is_zero(A @ B - B @ A)
    assert is_zero(A @ C - C @ A)


@settings(max_examples=15, deadline=None)
@given(rationals(), rationals(), rationals())
def test_identity_twist_gives_gl_invariance(z, x, u):
    assume(z != x and u not in (z, x))
    ch = _vv_chain(z, x)
    T = yg.transfer_matrix(ch, eye(2), 1, u)
    for a in range(2):
        for b in range(2):
            g = ch.generator(a, b)
            assert is_zero(T @ g - g @ T)


def test_float_path_matches_exact():
    ch = _vv_chain(q("0"), q("3"))
    Q = np.array([[mpq(2), mpq(1)], [mpq(0), mpq(1)]], dtype=object)
    exact = yg.transfer_matrix(ch, Q, 1, q("1/2"))
    approx = yg.transfer_matrix(_vv_chain(0.0 + 0j, 3.0 + 0j), Q.astype(complex), 1, 0.5 + 0j)
    assert np.allclose(exact.astype(complex), approx, atol=1e-13)


def test_difference_operator_coefficients():
    ch = _vv_chain(q("0"), q("3"))
    Q = np.diag([mpq(2), mpq(5)]).astype(object)
    u = q("11/3")
    pencil = yg.difference_operator(ch, Q, u)
    for k, C in enumerate(pencil.coefficients):
        assert is_zero(C - (-1) ** k * yg.transfer_matrix(ch, Q, k, u))
