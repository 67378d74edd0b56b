import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from yangbethe.reps import (commutation_defect, irrep_from_partition, module_from_descriptor, singular_space,
                            tensor_generator, tensor_hwv, vector_rep, wedge_dimension, wedge_rep, weyl_dimension)
from yangbethe.scalars import is_zero


def test_vector_rep_matrix_units():
    V = vector_rep(3)
    for a, b in itertools.product(range(3), repeat=2):
        E = np.zeros((3, 3), dtype=int)
        E[a, b] = 1
        assert is_zero(V.e(a, b) - E)
    assert V.highest_weight == (1, 0, 0)


@pytest.mark.parametrize("N,k", [(2, 1), (3, 2), (4, 2), (4, 3)])
def test_wedge_dimension_and_weight(N, k):
    W = wedge_rep(N, k)
    assert W.dim == wedge_dimension(N, k)
    assert W.highest_weight == tuple([1] * k + [0] * (N - k))


@settings(max_examples=12, deadline=None)
@given(st.integers(2, 4).flatmap(lambda N: st.tuples(st.just(N), st.integers(1, N))))
def test_wedge_commutation_relations(Nk):
    N, k = Nk
    assert commutation_defect(wedge_rep(N, k)) == 0


@pytest.mark.parametrize("N,lam", [(2, (2, 0)), (2, (3, 1)), (3, (2, 1, 0)), (3, (2, 0, 0))])
def test_partition_irrep(N, lam):
    M = irrep_from_partition(N, lam)
    assert M.dim == weyl_dimension(N, lam)
    assert commutation_defect(M) == 0
    assert M.highest_weight == tuple(lam)


def test_weyl_dimension_values():
    # symmetric square of C^3 and the adjoint of gl_3
    assert weyl_dimension(3, (2, 0, 0)) == 6
    assert weyl_dimension(3, (2, 1, 0)) == 8


def test_descriptor():
    assert module_from_descriptor(3, {"type": "wedge", "k": 2}).dim == 3
    with pytest.raises(ValueError):
        module_from_descriptor(3, {"type": "spinor"})


def test_tensor_hwv_is_singular():
    mods = [vector_rep(3), wedge_rep(3, 2)]
    v = tensor_hwv(mods)
    for a in range(3):
        for b in range(a + 1, 3):
            assert is_zero(tensor_generator(mods, a, b) @ v)


def test_singular_space_of_two_vectors():
    # V (x) V = Sym^2 + wedge^2: one singular vector of weight (1, 1)
    mods = [vector_rep(2), vector_rep(2)]
    (s,) = singular_space(mods, (1, 1))
    assert s[1] == -s[2] and s[0] == 0 and s[3] == 0
