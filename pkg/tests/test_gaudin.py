import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import q, rationals
from yangbethe import gaudin as gd
from yangbethe.reps import vector_rep, wedge_rep
from yangbethe.scalars import eye, is_zero, mpq, zeros
from yangbethe.suites import appendix_b_checks, gaudin_checks
from yangbethe.yangian import TensorChain


def _chain():
    return TensorChain([vector_rep(2), vector_rep(2)], [q("0"), q("1")])


def _zero_twist(N=2):
    return zeros((N, N))


def test_derived_root():
    # 1/t + 1/(t - 1) = 0 at t = 1/2
    prob = gd.GaudinProblem.from_chain(_chain(), [mpq(0), mpq(0)], (1,))
    assert gd.gaudin_bae_residual(prob, [[q("1/2")]]) == [0]
    assert gd.gaudin_bae_residual(prob, [[q("1/3")]]) != [0]


def test_derived_weight_function_is_singlet():
    F = gd.gaudin_weight_F(_chain(), (1,), [[q("1/2")]])
    assert F[0] == 0 and F[3] == 0 and F[1] == -F[2] != 0


def test_derived_eigenvalues():
    # G_1 = 1/u + 1/(u-1); G_2 = (P - 1)/u + (1 - P)/(u - 1) with P = -1 on the singlet
    ch = _chain()
    F = gd.gaudin_weight_F(ch, (1,), [[q("1/2")]])
    for u in [q("1/3"), q("5/2"), q("-7")]:
        G = gd.gaudin_transfers(ch, _zero_twist(), u)
        assert is_zero(G[1] @ F - (1 / u + 1 / (u - 1)) * F)
        assert is_zero(G[2] @ F - (2 / (u * (u - 1))) * F)


def test_verify_gaudin_eigenpair_derived():
    prob = gd.GaudinProblem.from_chain(_chain(), [mpq(0), mpq(0)], (1,))
    res = gd.verify_gaudin_eigenpair(prob, [[q("1/2")]], [q(x) for x in ("1/3", "5/2", "-7", "9/4", "3")])
    assert res["passed"] and res["max_relative_residual"] == 0 and res["singular_residual"] == 0


def test_first_transfer_is_trace():
    ch = TensorChain([vector_rep(3), wedge_rep(3, 2)], [q("1/2"), q("-7/3")])
    K = np.diag([mpq(1), mpq(-2), mpq(5, 3)]).astype(object)
    u = q("4/5")
    G = gd.gaudin_transfers(ch, K, u)
    L = gd.CurrentModule.from_chain(ch).L(u)
    ref = sum((L[a][a] for a in range(3)), zeros((ch.dim, ch.dim))) + (mpq(1) - 2 + mpq(5, 3)) * eye(ch.dim)
    assert is_zero(G[0] - eye(ch.dim))
    assert is_zero(G[1] - ref)


def test_weight_function_example_n3():
    ch = TensorChain([vector_rep(3), wedge_rep(3, 2)], [q("1/2"), q("-7/3")])
    t1, t2 = q("2/5"), q("3")
    L = lambda a, b, u: gd.L_entry(ch, a - 1, b - 1, u)  # noqa: E731
    v = ch.hwv()
    ref = L(1, 2, t1) @ L(2, 3, t2) @ v + L(1, 3, t1) @ v / (t2 - t1)
    assert is_zero(gd.gaudin_weight_F(ch, (1, 1), [[t1], [t2]]) - ref)


@pytest.mark.parametrize("mods,z", [
    ([vector_rep(2), vector_rep(2)], ["0", "1"]),
    ([vector_rep(3), wedge_rep(3, 2)], ["1/2", "-7/3"]),
])
def test_gaudin_suite_exact(mods, z):
    ch = TensorChain(mods, [q(x) for x in z])
    N = ch.N
    K = np.array([[mpq(a - b, 1 + a + b) for b in range(N)] for a in range(N)], dtype=object)
    for res in gaudin_checks(ch, K, seed=2):
        assert res["max_abs_error"] == 0, res["name"]


@pytest.mark.parametrize("mods,z", [
    ([vector_rep(2), vector_rep(2)], ["0", "1"]),
    ([vector_rep(3), vector_rep(3)], ["1/3", "-2"]),
])
def test_dynamical_expansions(mods, z):
    ch = TensorChain(mods, [q(x) for x in z])
    K = np.diag([mpq(2 * a + 1, 3) for a in range(ch.N)]).astype(object)
    for res in appendix_b_checks(ch, K, seed=3):
        assert res["max_abs_error"] == 0, res["name"]


def test_hamiltonians_commute():
    ch = TensorChain([vector_rep(3)] * 3, [q("0"), q("1"), q("-5/2")])
    K = np.diag([mpq(1), mpq(3), mpq(-2)]).astype(object)
    hs = gd.gaudin_hamiltonians(ch, K)
    ops = hs["H"] + hs["G"]
    for A in ops:
        for B in ops:
            assert is_zero(A @ B - B @ A)


def test_coincident_points_rejected():
    ch = TensorChain([vector_rep(2)] * 2, [q("1"), q("1")])
    with pytest.raises(gd.CoincidentEvaluationPoints):
        gd.gaudin_hamiltonians(ch, _zero_twist())


@settings(max_examples=15, deadline=None)
@given(rationals(), rationals(), st.lists(rationals(5, 3), min_size=4, max_size=4))
def test_gaudin_commute_property(u, v, Ks):
    ch = TensorChain([vector_rep(2)] * 2, [q("0"), q("1")])
    assume(u not in ch.z and v not in ch.z)
    K = np.array(Ks, dtype=object).reshape(2, 2)
    Gu = gd.gaudin_transfers(ch, K, u)
    Gv = gd.gaudin_transfers(ch, K, v)
    for A in Gu:
        for B in Gv:
            assert is_zero(A @ B - B @ A)


@settings(max_examples=10, deadline=None)
@given(st.lists(rationals(), min_size=3, max_size=3, unique=True))
def test_weight_function_sum_equals_recursion_property(ts):
    ch = TensorChain([vector_rep(3), vector_rep(3)], [q("1/3"), q("-2")])
    assume(not set(ts) & set(ch.z))
    t = [ts[:2], ts[2:]]
    assert is_zero(gd.gaudin_weight_F(ch, (2, 1), t) - gd.gaudin_weight_F_recursive(ch, (2, 1), t))
