"""Bundled example algebras.

``f12``          the full FSA of dimension 1 over two points (c0, NEG, V_0, c1)
``full22``       the full FSA of dimension 2 over two points
``sub3``         the subalgebra of ``f12`` generated by the two constants
``mutated_f12``  ``f12`` with ``NEG *_0 V_0`` overwritten by ``c0``; not an SA
``pad_f12``      ``f12`` padded to dimension 2 with ``v_1 = c0``; not an SA
``*_fn``         the same function algebras in the FnAlgebra format
"""
from pathlib import Path

from ..core import as_finite_sa, full_fsa, FnAlgebra
from ..io import load, save

FIXTURE_DIR = Path(__file__).parent

SA_FIXTURES = ("f12", "full22", "sub3")
BROKEN_FIXTURES = ("mutated_f12", "pad_f12")
FN_FIXTURES = ("f12_fn", "full22_fn", "sub3_fn")
ALL_FIXTURES = SA_FIXTURES + BROKEN_FIXTURES + FN_FIXTURES

# element ids in f12
C0, NEG, V0, C1 = 0, 1, 2, 3


def build_fixtures():
    """Recompute every fixture from its definition."""
    from ..constructions import generate_subalgebra, pad_algebra
    f12 = as_finite_sa(full_fsa(1, 2))
    full22 = as_finite_sa(full_fsa(2, 2))
    sub3, inclusion = generate_subalgebra(f12, {C0, C1})
    f12_fn = full_fsa(1, 2)
    return {
        "f12": f12,
        "full22": full22,
        "sub3": sub3,
        "mutated_f12": f12.with_cell(0, NEG, V0, C0),
        "pad_f12": pad_algebra(f12, 2, [C0]),
        "f12_fn": f12_fn,
        "full22_fn": full_fsa(2, 2),
        "sub3_fn": FnAlgebra(1, 2, [f12_fn.element(i) for i in inclusion]),
    }


def fixture_path(name, directory=None):
    return Path(directory or FIXTURE_DIR) / f"{name}.json"


def load_fixture(name, directory=None):
    return load(fixture_path(name, directory))


def write_fixtures(directory=None):
    for name, obj in build_fixtures().items():
        save(obj, fixture_path(name, directory))
