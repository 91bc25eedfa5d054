import pytest
from hypothesis import given, settings

from subalg import (as_finite_sa, find_embedding, find_neat_embedding, full_fsa, generate_subalgebra,
                    is_representable_up_to, one_point_sa, reduct, verify_embedding)
from subalg.errors import CapacityError, UsageError
from subalg.fixtures import C0, C1, V0
from subalg.suite import brute_force_embeddings

from strategies import random_tables


def test_self_embedding_is_identity(f12):
    w = find_embedding(f12, f12)
    assert w.map == (0, 1, 2, 3) and w.verified


def test_inclusion_found(f12, sub3):
    w = find_embedding(sub3, f12)
    assert w.map == (C0, V0, C1)
    assert verify_embedding(sub3, f12, w.map)


def test_no_embedding_into_a_point(f12):
    assert find_embedding(f12, one_point_sa(1)) is None


def test_dimension_mismatch(f12, full22):
    with pytest.raises(UsageError):
        find_embedding(f12, full22)


def test_search_into_full_fnalgebra(f12):
    w = find_embedding(f12, full_fsa(1, 3, lazy=True))
    assert w.verified
    assert w.target == {"kind": "full_fsa", "dimension": 1, "base_size": 3}


def test_budget_caps_lazy_targets(f12):
    with pytest.raises(CapacityError):
        find_embedding(reduct(as_finite_sa(full_fsa(2, 2)), 1)[0], full_fsa(1, 8, lazy=True), budget=1000)


def test_representable_f12(f12):
    rep = is_representable_up_to(f12, 2)
    assert rep.status == "witness" and rep.base_size == 2


def test_representable_subalgebra(f12):
    S, _ = generate_subalgebra(f12, {C0, C1})
    assert is_representable_up_to(S, 2).base_size == 2


def test_representable_point():
    assert is_representable_up_to(one_point_sa(1), 1).base_size == 1


def test_reduct_needs_a_larger_base(full22):
    B, _ = reduct(full22, 1)
    assert is_representable_up_to(B, 2).status == "unknown"
    rep = is_representable_up_to(B, 4)
    assert rep.status == "witness" and rep.base_size == 4 and rep.witness.verified


def test_neat_embedding_into_full(f12):
    w = find_neat_embedding(f12, full_fsa(2, 2))
    assert w.map == (0, 5, 10, 15) and w.verified


def test_neat_embedding_identity(f12):
    assert find_neat_embedding(f12, f12).map == (0, 1, 2, 3)


def test_neat_embedding_too_small(f12, full22):
    # the 0-neat reduct of full22 has the two constants only
    B, _ = reduct(f12, 0)
    assert find_neat_embedding(B, full22, 0) is None


@settings(max_examples=120, deadline=None)
@given(random_tables(1, 3), random_tables(1, 3))
def test_search_matches_brute_force(A, B):
    w = find_embedding(A, B)
    oracle = brute_force_embeddings(A, B)
    assert (w.map if w else None) == (oracle[0] if oracle else None)


def test_all_embeddings_lexicographic(f12):
    maps = brute_force_embeddings(f12, f12)
    assert maps == sorted(maps)
    assert maps[0] == tuple(range(4))
