"""The twelve acceptance criteria, one test each.

Each test runs the matching verification suite at the stated bounds; the terminal summary
prints one PASS/FAIL line per criterion.
"""
import time

import pytest

from subalg.fixtures import FN_FIXTURES, SA_FIXTURES
from subalg.suite import SuiteConfig, mutations, run_one
from subalg import fixtures as fx


def run(name, **overrides):
    cfg = SuiteConfig(**overrides)
    t0 = time.perf_counter()
    res = run_one(name, cfg)
    elapsed = time.perf_counter() - t0
    print(f"{name}: {res.status} in {elapsed:.1f}s detail={res.detail}")
    assert res.status == "pass", res.counterexample or res.reason
    return res, elapsed


def test_criterion_01_axiom_soundness():
    res, elapsed = run("axioms", max_dim=2, max_base=2, extra=((1, 3), (2, 3), (3, 2)))
    checked = {tuple(c[:2]) for c in res.detail["checked"] if isinstance(c, list)}
    assert {(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)} <= checked
    assert elapsed < 60


def test_criterion_02_mutation_sensitivity():
    res, _ = run("mutation", mutations=20)
    expected = sum(len(mutations(fx.load_fixture(n), 20, f"0:{n}")) for n in SA_FIXTURES)
    assert expected == 20 + 20 + 18      # sub3 has only 18 distinct single-cell mutations
    assert res.detail["caught"] + len(res.detail["semantics_preserving"]) == expected


def test_criterion_03_substitution_laws():
    res, elapsed = run("subst-laws", budget=None)
    for name in ("f12", "full22"):
        for law in ("order-independence", "peel-off", "dimension-bound", "point-update", "distribution"):
            assert f"{name}:{law}" in res.detail["cases"]
    assert res.detail["cases"]["full22:distribution"] > 0
    assert elapsed < 120


def test_criterion_04_gamma_homomorphism():
    res, _ = run("gamma-hom")
    assert res.detail["cases"] > 0


def test_criterion_05_strong_distinction():
    res, _ = run("strong-distinction", strong_triples=10)
    full = [n for n in FN_FIXTURES if fx.load_fixture(n).full]
    assert res.detail["triples"] == 10 * len(full)


def test_criterion_06_finite_collapse():
    res, _ = run("representation")
    assert set(res.detail["algebras"]) == {"f12", "full22", "sub3"}


def test_criterion_07_principal_ultraproducts():
    res, _ = run("ultraproducts")
    assert res.detail["quotients"] > 0


def test_criterion_08_strong_implies_distinguished():
    res, _ = run("distinguished-implication", random_subalgebras=50)
    assert res.detail["algebras"] >= 50 + len(SA_FIXTURES)


def test_criterion_09_reducts_and_neat_embeddings():
    res, _ = run("reducts-neat")
    assert len(res.detail["dilated"]) == 2 * len(FN_FIXTURES)


def test_criterion_10_pad_locality():
    res, _ = run("pad-locality")
    assert res.detail["f12_violations"] > 0


def test_criterion_11_search_oracle():
    res, _ = run("search-oracle", search_max_carrier=6)
    assert res.detail["pairs"] > 0


def test_criterion_12_format_stability():
    run("formats")


@pytest.mark.parametrize("criterion", ["axioms"])
def test_corrupted_fixture_fails_the_axiom_suite(criterion, tmp_path):
    for name in fx.ALL_FIXTURES:
        (tmp_path / f"{name}.json").write_bytes(fx.fixture_path(name).read_bytes())
    (tmp_path / "f12.json").write_bytes(fx.fixture_path("mutated_f12").read_bytes())
    res = run_one(criterion, SuiteConfig(max_dim=1, max_base=1, extra=(), fixture_dir=str(tmp_path)))
    assert res.status == "fail"
    assert res.counterexample["algebra"] == "f12"
    assert res.counterexample["violation"]["axiom"] == 1
