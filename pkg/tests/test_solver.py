import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import q
from yangbethe.bethe_xxx import BetheProblem, bae_residual
from yangbethe.gaudin import GaudinProblem, gaudin_bae_residual
from yangbethe.reps import vector_rep, wedge_rep
from yangbethe.scalars import mpq
from yangbethe.solver import NoConvergence, solve_bae
from yangbethe.yangian import TensorChain


def _xxx():
    ch = TensorChain([vector_rep(2)] * 2, [q("0"), q("3")])
    return BetheProblem.from_chain(ch, [mpq(1), mpq(1)], (1,))


def _gaudin():
    ch = TensorChain([vector_rep(2)] * 2, [q("0"), q("1")])
    return GaudinProblem.from_chain(ch, [mpq(0), mpq(0)], (1,))


def test_xxx_root_found_from_most_starts():
    rep = solve_bae(_xxx(), starts=20, seed=0)
    best = max(rep.roots, key=lambda r: r["hits"])
    assert abs(best["t"][0][0] - 1) < 1e-10
    assert best["hits"] >= 18


def test_gaudin_root_found_from_most_starts():
    rep = solve_bae(_gaudin(), starts=20, seed=0)
    best = max(rep.roots, key=lambda r: r["hits"])
    assert abs(best["t"][0][0] - 0.5) < 1e-10
    assert best["hits"] >= 18


@pytest.mark.parametrize("make", [_xxx, _gaudin])
def test_report_is_deterministic(make):
    a = solve_bae(make(), starts=10, seed=7).to_dict()
    b = solve_bae(make(), starts=10, seed=7).to_dict()
    assert a == b


def test_twisted_quadratic_roots():
    # 2 (t + 1)(t - 2) = 3 t (t - 3) has two roots
    ch = TensorChain([vector_rep(2)] * 2, [q("0"), q("3")])
    prob = BetheProblem.from_chain(ch, [mpq(2), mpq(3)], (1,))
    rep = solve_bae(prob, starts=20, seed=1)
    found = sorted(r["t"][0][0].real for r in rep.roots)
    expected = sorted(np.roots([-1, 7, -4]).real)
    assert len(found) == 2 and np.allclose(found, expected, atol=1e-9)


def test_rank_three_problem_converges():
    ch = TensorChain([vector_rep(3), wedge_rep(3, 2)], [q("0"), q("5/2")])
    prob = GaudinProblem.from_chain(ch, [mpq(1), mpq(2), mpq(4)], (1, 1))
    rep = solve_bae(prob, starts=20, seed=0)
    assert rep.success
    for r in rep.roots:
        assert max(abs(complex(v)) for v in gaudin_bae_residual(prob, r["t"])) < 1e-9


def test_empty_xi_is_trivial():
    ch = TensorChain([vector_rep(2)] * 2, [q("0"), q("3")])
    rep = solve_bae(BetheProblem.from_chain(ch, [1, 1], (0,)), starts=3)
    assert rep.success and rep.roots[0]["t"] == [[]]


def test_failure_raises_when_asked():
    # one vector site with K = 0: the equation 1/t = 0 has no finite root
    ch = TensorChain([vector_rep(2)], [q("0")])
    prob = GaudinProblem.from_chain(ch, [mpq(0), mpq(0)], (1,))
    assert not solve_bae(prob, starts=5, seed=0).success
    with pytest.raises(NoConvergence):
        solve_bae(prob, starts=5, seed=0, raise_on_failure=True)


def test_bad_arguments():
    with pytest.raises(ValueError):
        solve_bae(_xxx(), starts=0)


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_converged_roots_satisfy_equations(seed):
    prob = _xxx()
    rep = solve_bae(prob, starts=4, seed=seed)
    for r in rep.roots:
        assert max(abs(complex(v)) for v in bae_residual(prob, r["t"])) <= 1e-10
    assert rep.converged_starts + rep.start_outcomes.count(None) == 4
