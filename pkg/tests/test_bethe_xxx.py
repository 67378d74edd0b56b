import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import q, rationals
from yangbethe import bethe_xxx as bx
from yangbethe.reps import vector_rep, wedge_rep
from yangbethe.scalars import is_zero, mpq
from yangbethe.suites import bethe_checks, bethe_example_n3, bethe_example_n4
from yangbethe.yangian import TensorChain, transfer_matrix


def _problem():
    ch = TensorChain([vector_rep(2), vector_rep(2)], [q("0"), q("3")])
    return bx.BetheProblem.from_chain(ch, [mpq(1), mpq(1)], (1,)), ch


def test_derived_root_solves_equations():
    # (t + 1)(t - 2) = t (t - 3) has the single solution t = 1
    prob, _ = _problem()
    assert bx.bae_residual(prob, [[q("1")]]) == [0]
    assert bx.bae_residual(prob, [[q("2")]]) != [0]


def test_derived_bethe_vector_is_the_singlet():
    prob, ch = _problem()
    B = bx.bethe_vector_trace(ch, (1,), [[q("1")]])
    assert B[0] == 0 and B[3] == 0 and B[1] == -B[2] != 0


def test_derived_eigenvalue_closed_form():
    # on the singlet the flip acts by -1 in tr T(u) = 2 + 1/u + 1/(u-3) + P/(u(u-3))
    prob, ch = _problem()
    for u in [q("1/2"), q("5/7"), q("-4")]:
        lam = bx.transfer_eigenvalue(prob, [[q("1")]], 1, u)
        assert lam == 2 + 1 / u + 1 / (u - 3) - 1 / (u * (u - 3))


def test_verify_eigenpair_on_derived_problem():
    prob, _ = _problem()
    res = bx.verify_eigenpair(prob, [[q("1")]], [q(x) for x in ("1/2", "5/7", "-4", "13/3", "7")])
    assert res["passed"]
    assert res["max_relative_residual"] == 0
    assert res["singular_residual"] == 0


def test_eigenpair_with_twist_numerically():
    # root of 2 (t + 1)(t - 2) = 3 t (t - 3), taken in floating point
    ch = TensorChain([vector_rep(2), vector_rep(2)], [q("0"), q("3")])
    prob = bx.BetheProblem.from_chain(ch, [mpq(2), mpq(3)], (1,))
    r = np.roots([2 - 3, -2 + 9, -4])
    for t in r:
        res = bx.verify_eigenpair(prob, [[complex(t)]], [0.5, 1.7, -2.2])
        assert res["max_relative_residual"] < 1e-10
        assert res["max_dense_gap"] < 1e-10


def test_not_off_diagonal_is_rejected():
    ch = TensorChain([vector_rep(3)] * 2, [q("0"), q("3")])
    prob = bx.BetheProblem.from_chain(ch, [1, 1, 1], (1, 1))
    with pytest.raises(bx.NotOffDiagonal):
        bx.verify_eigenpair(prob, [[q("1")], [q("1")]], [q("1/2")])


def test_root_at_evaluation_point_is_rejected():
    ch = TensorChain([vector_rep(2)] * 2, [q("0"), q("3")])
    with pytest.raises(bx.CoincidentRoots):
        bx.bethe_vector_trace(ch, (1,), [[q("3")]])


def test_bethe_suite_exact():
    for res in bethe_checks(seed=5):
        assert res["max_abs_error"] == 0, res["name"]


def test_n3_example():
    ch = TensorChain([vector_rep(3), vector_rep(3)], [q("1/2"), q("-3")])
    t1, t2 = q("2/7"), q("5")
    got = bx.bethe_vector_trace(ch, (1, 1), [[t1], [t2]])
    scale = (t1 - q("1/2")) * (t1 + 3) * (t2 - q("1/2")) * (t2 + 3) * (t2 - t1)
    assert is_zero(got - scale * bethe_example_n3(ch, t1, t2))


@pytest.mark.xfail(strict=True, reason="the variant with (t3 - t1) in place of (t3 - t2) is not the trace formula")
def test_n4_example_variant_t3_minus_t1():
    ch = TensorChain([vector_rep(4), wedge_rep(4, 2)], [q("1/2"), q("-3")])
    a, b, c = q("2/7"), q("5"), q("-1/3")
    got = bx.bethe_vector_trace(ch, (1, 1, 1), [[a], [b], [c]])
    scale = bx._clearing_factor((1, 1, 1), [[a], [b], [c]], ch.z)
    assert is_zero(got - scale * bethe_example_n4(ch, a, b, c, literal=True))


def test_n4_example_corrected():
    ch = TensorChain([vector_rep(4), wedge_rep(4, 2)], [q("1/2"), q("-3")])
    a, b, c = q("2/7"), q("5"), q("-1/3")
    got = bx.bethe_vector_trace(ch, (1, 1, 1), [[a], [b], [c]])
    scale = bx._clearing_factor((1, 1, 1), [[a], [b], [c]], ch.z)
    assert is_zero(got - scale * bethe_example_n4(ch, a, b, c))


@settings(max_examples=15, deadline=None)
@given(st.lists(rationals(), min_size=3, max_size=3, unique=True))
def test_trace_equals_recursion_property(ts):
    ch = TensorChain([vector_rep(3), wedge_rep(3, 2)], [q("1/2"), q("-7/3")])
    assume(not set(ts) & set(ch.z))
    t = [ts[:2], ts[2:]]
    assert is_zero(bx.bethe_vector_trace(ch, (2, 1), t) - bx.bethe_vector_recursive(ch, (2, 1), t))


@settings(max_examples=15, deadline=None)
@given(st.lists(rationals(), min_size=3, max_size=3, unique=True))
def test_level_symmetry_property(ts):
    ch = TensorChain([vector_rep(2)] * 3, [q("0"), q("1"), q("-2")])
    assume(not set(ts) & set(ch.z))
    # roots one apart within a level sit on a pole of the normalisation
    assume(all(abs(x - y) != 1 for x in ts for y in ts))
    ref = bx.bethe_vector_trace(ch, (3,), [ts])
    for perm in itertools.permutations(ts):
        assert is_zero(bx.bethe_vector_trace(ch, (3,), [list(perm)]) - ref)


@settings(max_examples=15, deadline=None)
@given(st.lists(rationals(), min_size=2, max_size=2, unique=True))
def test_weight_of_bethe_vector(ts):
    ch = TensorChain([vector_rep(3)] * 2, [q("1/3"), q("2")])
    assume(not set(ts) & set(ch.z))
    B = bx.bethe_vector_trace(ch, (1, 1), [[ts[0]], [ts[1]]])
    wt = bx.bethe_weight(ch, (1, 1))
    for a in range(3):
        assert is_zero(ch.generator(a, a) @ B - wt[a] * B)


def test_transfer_eigenvalue_k0_is_one():
    prob, _ = _problem()
    assert bx.transfer_eigenvalue(prob, [[q("1")]], 0, q("5/2")) == 1


def test_dense_top_transfer_matches_eigenvalue():
    prob, ch = _problem()
    u = q("9/2")
    T2 = transfer_matrix(ch, np.diag([mpq(1), mpq(1)]).astype(object), 2, u)
    lam = bx.transfer_eigenvalue(prob, [[q("1")]], 2, u)
    B = bx.bethe_vector_trace(ch, (1,), [[q("1")]])
    assert is_zero(T2 @ B - lam * B)
