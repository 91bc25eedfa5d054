import json

import pytest

from subalg import as_finite_sa, dumps, full_fsa, io_roundtrip, load, parse
from subalg.errors import FormatError
from subalg.fixtures import ALL_FIXTURES, build_fixtures, fixture_path


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_fixture_round_trip(name, tmp_path):
    src = fixture_path(name)
    out = tmp_path / "out.json"
    io_roundtrip(src, out)
    assert out.read_bytes() == src.read_bytes()


def test_fixtures_are_current():
    for name, obj in build_fixtures().items():
        assert dumps(obj) == fixture_path(name).read_text(encoding="utf-8"), name


def test_key_order_is_normalized(f12):
    text = json.dumps({"star": f12.tables, "v": list(f12.v), "size": 4, "dimension": 1})
    assert dumps(parse(text)) == dumps(f12)


def test_out_of_range_cell_named():
    text = json.dumps({"dimension": 1, "size": 2, "v": [1], "star": [[[0, 1], [0, 7]]]})
    with pytest.raises(FormatError, match=r"star\[0\]\[1\]\[1\] = 7 out of range"):
        parse(text)


def test_malformed_json_reports_position():
    with pytest.raises(FormatError, match=r"line 2 column"):
        parse('{"dimension": 1,\n "size": }')


def test_unknown_format():
    with pytest.raises(FormatError):
        parse('{"dimension": 1}')


def test_fn_round_trip_and_tabulation():
    afn = load(fixture_path("f12_fn"))
    assert afn.full and afn.size == 4
    assert as_finite_sa(afn) == load(fixture_path("f12"))
    assert [afn.index(afn.element(i)) for i in range(4)] == [0, 1, 2, 3]


def test_full_must_be_complete():
    text = dumps(full_fsa(1, 2)).replace("[1, 0],\n", "")
    with pytest.raises(FormatError):
        parse(text)


def test_dimension_zero(tmp_path):
    from subalg import reduct
    B, _ = reduct(load(fixture_path("f12")), 0)
    assert '"star": []' in dumps(B)
    assert parse(dumps(B)) == B
