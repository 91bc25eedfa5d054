import itertools

import numpy as np
import pytest

from subalg import (FiniteSA, FnAlgebra, FnElement, as_finite_sa, fn_star, full_fsa, one_point_sa, rank,
                    unrank, update_assignment, variable_fn)
from subalg.core import assignments, constant_fn, dimension_set, zero_elements, zero_set
from subalg.errors import CapacityError, UsageError
from subalg.fixtures import C0, C1, NEG, V0

import oracle

F12_TABLE = [[[0, 3, 0, 3], [0, 2, 1, 3], [0, 1, 2, 3], [0, 0, 3, 3]]]


@pytest.mark.parametrize("s, k, x, want", [
    ((0, 1), 0, 1, (1, 1)),
    ((0, 1), 1, 1, (0, 1)),
    ((0, 0, 0), 2, 1, (0, 0, 1)),
])
def test_update_assignment(s, k, x, want):
    assert update_assignment(s, k, x) == want


def test_update_rejects_bad_index():
    with pytest.raises(UsageError):
        update_assignment((0, 1), 2, 0)


def test_rank_is_little_endian():
    assert [rank(s, 2) for s in [(0, 0), (1, 0), (0, 1), (1, 1)]] == [0, 1, 2, 3]
    for r in range(27):
        assert rank(unrank(r, 3, 3), 3) == r
    assert list(assignments(2, 3)) == oracle.points(2, 3)


def test_variable_tables():
    assert list(variable_fn(0, 1, 2).table) == [0, 1]
    assert list(variable_fn(1, 2, 2).table) == [0, 0, 1, 1]
    assert list(variable_fn(0, 2, 1).table) == [0]


def test_f12_canonical_ids(f12_fn):
    neg = FnElement(1, 2, (1, 0))
    ids = {name: f12_fn.index(f) for name, f in
           [("c0", constant_fn(0, 1, 2)), ("neg", neg), ("v0", variable_fn(0, 1, 2)), ("c1", constant_fn(1, 1, 2))]}
    assert ids == {"c0": C0, "neg": NEG, "v0": V0, "c1": C1}
    assert as_finite_sa(f12_fn).v == (V0,)


def test_neg_squared_is_identity(f12_fn):
    neg = f12_fn.element(NEG)
    assert fn_star(neg, neg, 0) == f12_fn.var(0)


def test_unit_laws_on_functions(f12_fn):
    v = f12_fn.var(0)
    for f in f12_fn:
        assert fn_star(f, v, 0) == f
        assert fn_star(v, f, 0) == f


def test_sizes():
    assert full_fsa(1, 2).size == 4
    assert full_fsa(2, 2).size == 16
    assert full_fsa(1, 1).size == 1
    assert full_fsa(2, 3, lazy=True).size == 3 ** 9


def test_f12_tables(f12):
    assert f12.tables == F12_TABLE
    assert f12.v == (V0,)


@pytest.mark.parametrize("alpha, u", [(1, 2), (2, 2), (1, 3), (2, 1)])
def test_tables_match_oracle(alpha, u):
    _, tables, v = oracle.full_algebra(alpha, u)
    A = as_finite_sa(full_fsa(alpha, u))
    assert A.tables == tables
    assert list(A.v) == v


def test_full23_constants(full23):
    # V_0 = [0,1,2]*3 and V_1 = [0,0,0,1,1,1,2,2,2] read as base-3 numbers, low digit first
    assert full23.size == 19683
    assert full23.v == (15897, 19305)
    afn = full_fsa(2, 3, lazy=True)
    for i in (0, 1, 4242, 19682):
        assert afn.element(i).canonical_id == i


def test_delta_and_zero(f12):
    assert [sorted(dimension_set(f12, x)) for x in range(4)] == [[], [0], [0], []]
    assert zero_set(f12, {0}) == {C0, C1}
    assert zero_set(f12, set()) == set(range(4))
    assert zero_elements(f12) == (C0, C1)


def test_lazy_full_stays_lazy():
    afn = full_fsa(3, 3, lazy=True)
    assert afn.lazy
    assert afn.element(5).canonical_id == 5
    with pytest.raises(CapacityError):
        afn.materialize(bound=1000)


def test_tabulation_capacity():
    with pytest.raises(CapacityError):
        as_finite_sa(full_fsa(2, 3, lazy=True), bound=1000)


def test_non_full_fnalgebra(f12_fn):
    sub = FnAlgebra(1, 2, [f12_fn.element(i) for i in (C0, V0, C1)])
    B = as_finite_sa(sub)
    assert B.tables == [[[0, 0, 2], [0, 1, 2], [0, 2, 2]]]


def test_non_closed_fnalgebra_rejected(f12_fn):
    from subalg.errors import IntegrityError
    with pytest.raises(IntegrityError):
        as_finite_sa(FnAlgebra(1, 2, [f12_fn.element(i) for i in (C0, NEG, V0)]))


def test_finite_sa_validation():
    with pytest.raises(UsageError):
        FiniteSA(1, 2, [0], np.array([[[0, 2], [0, 1]]]))
    with pytest.raises(UsageError):
        FiniteSA(1, 2, [5], np.zeros((1, 2, 2), dtype=int))


def test_one_point():
    A = one_point_sa(3)
    assert A.size == 1 and A.v == (0, 0, 0)


def test_with_cell_is_a_copy(f12):
    M = f12.with_cell(0, NEG, V0, C0)
    assert M.op(NEG, V0, 0) == C0
    assert f12.op(NEG, V0, 0) == NEG
    assert M != f12


def test_star_fn_matches_tables(f12_fn, f12):
    for a, b in itertools.product(range(4), repeat=2):
        assert f12_fn.index(fn_star(f12_fn.element(a), f12_fn.element(b), 0)) == f12.op(a, b, 0)
