import itertools

import pytest
from hypothesis import given, settings, strategies as st

from subalg import (SubstContext, check_subst_laws, gamma_hom, gamma_hom_image, generalized_subst,
                    is_gamma_homomorphism, subst)
from subalg.core import FnElement, variable_fn, zero_set
from subalg.errors import PreconditionError
from subalg.fixtures import C0, C1, NEG, V0, load_fixture
from subalg.substitution import LAWS, subst_in_order

import oracle


def test_empty_gamma_is_identity(f12):
    for a in range(4):
        assert subst(f12, (V0,), set(), a) == a


def test_single_index(f12):
    assert subst(f12, (C0,), {0}, NEG) == C1


def test_context_rejects_substituent_outside_zero_set(f12):
    with pytest.raises(PreconditionError, match="0"):
        SubstContext(f12, (NEG,), frozenset({0}))


def test_context_fold(full22):
    ctx = SubstContext(full22, (0, 15), frozenset({0, 1}))
    assert generalized_subst(ctx, 10) == oracle.gsubst(full22.tables, (0, 15), {0, 1}, 10)


def _eligible(A, gamma):
    Z = sorted(zero_set(A, gamma))
    return itertools.product(Z, repeat=A.dimension)


@pytest.mark.parametrize("name", ["f12", "full22", "sub3"])
def test_order_independence_exhaustive(name):
    A = load_fixture(name)
    for mask in range(1 << A.dimension):
        gamma = [k for k in range(A.dimension) if mask >> k & 1]
        for s in _eligible(A, gamma):
            for a in range(A.size):
                want = subst(A, s, gamma, a)
                assert want == oracle.gsubst(A.tables, s, gamma, a)
                for order in itertools.permutations(gamma):
                    assert subst_in_order(A, s, order, a) == want


@pytest.mark.parametrize("name", ["f12", "full22", "sub3"])
def test_result_lies_in_zero_set(name):
    A = load_fixture(name)
    for mask in range(1 << A.dimension):
        gamma = {k for k in range(A.dimension) if mask >> k & 1}
        Z = zero_set(A, gamma)
        for s in _eligible(A, gamma):
            for a in range(A.size):
                assert subst(A, s, gamma, a) in Z


@pytest.mark.parametrize("name", ["f12", "full22", "sub3"])
def test_laws_pass(name):
    reports = check_subst_laws(load_fixture(name))
    assert [r.law for r in reports] == list(LAWS)
    assert all(r.status == "pass" for r in reports), [r.to_json() for r in reports if r.status != "pass"]


def test_laws_refuse_non_sa():
    with pytest.raises(PreconditionError):
        check_subst_laws(load_fixture("mutated_f12"))


def test_corrupted_entry_breaks_a_law(full22):
    # c0 *_0 (not x0) is the constant 1, id 15; overwrite it with 3
    M = full22.with_cell(0, 0, 5, 3)
    failing = [r for r in check_subst_laws(M, require_sa=False) if r.status == "fail"]
    assert failing
    assert {r.law for r in failing} & {"peel-off", "dimension-bound"}
    assert failing[0].counterexample


def test_sampled_budget_is_seeded(full22):
    a = check_subst_laws(full22, budget=50, seed=7)
    b = check_subst_laws(full22, budget=50, seed=7)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    assert all(r.cases_checked <= 50 * 16 for r in a)


def test_gamma_hom_image_of_neg_is_swap(f12):
    assert gamma_hom_image(f12, {0}, NEG) == FnElement(1, 2, (1, 0))


def test_gamma_hom_image_of_variable(full22):
    for mask in range(4):
        gamma = {k for k in range(2) if mask >> k & 1}
        u = len(zero_set(full22, gamma))
        for k in gamma:
            assert gamma_hom_image(full22, gamma, full22.v[k]) == variable_fn(k, 2, u)


def test_gamma_hom_empty_gamma_is_constant(f12):
    for a in range(4):
        f = gamma_hom_image(f12, set(), a)
        assert f.base_size == 4 and set(f.table) == {a}


@pytest.mark.parametrize("name", ["f12", "full22", "sub3"])
def test_gamma_hom_is_homomorphism(name):
    A = load_fixture(name)
    for mask in range(1 << A.dimension):
        gamma = {k for k in range(A.dimension) if mask >> k & 1}
        images, target = gamma_hom(A, gamma)
        assert is_gamma_homomorphism(images, A, target, gamma).holds


def test_identity_is_homomorphism(full22):
    assert is_gamma_homomorphism(range(16), full22, full22, {0, 1}).holds


def test_constant_map_fails_on_v(f12):
    rep = is_gamma_homomorphism([C0] * 4, f12, f12, {0})
    assert not rep.holds
    assert rep.violations


def test_empty_base_is_an_error():
    import numpy as np
    from subalg import FiniteSA
    A = FiniteSA(1, 2, [1], np.array([[[0, 0], [1, 1]]]))
    with pytest.raises(PreconditionError):
        gamma_hom_image(A, {0}, 0)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_peel_off_on_full22(data):
    A = load_fixture("full22")
    gamma = data.draw(st.sets(st.integers(0, 1)))
    Z = sorted(zero_set(A, gamma))
    s = tuple(data.draw(st.sampled_from(Z)) for _ in range(2))
    a = data.draw(st.integers(0, 15))
    for k in gamma:
        rest = gamma - {k}
        assert subst(A, s, gamma, a) == A.op(s[k], subst(A, s, rest, a), k)
