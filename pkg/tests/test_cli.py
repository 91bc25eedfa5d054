import json

from subalg import dumps, generate_subalgebra, load
from subalg.cli import main
from subalg.fixtures import fixture_path

F12 = str(fixture_path("f12"))
FULL22 = str(fixture_path("full22"))
SUB3 = str(fixture_path("sub3"))
MUTATED = str(fixture_path("mutated_f12"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_exit_codes(capsys, tmp_path):
    assert run(capsys, "check", F12)[0] == 0
    code, out, _ = run(capsys, "check", MUTATED, "--max-violations", "2")
    assert code == 1
    assert len(json.loads(out)["violations"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 1, "size": 2, "v": [1], "star": [[[0, 1], [0, 9]]]}')
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "star[0][1][1]" in err


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check")[0] == 2


def test_sub_output_is_the_module_result(capsys, tmp_path):
    side = tmp_path / "map.json"
    code, out, _ = run(capsys, "sub", F12, "--gens", "0,3", "--map", str(side))
    S, inc = generate_subalgebra(load(F12), [0, 3])
    assert code == 0 and out == dumps(S)
    assert json.loads(side.read_text()) == {"map": list(inc)}


def test_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert run(capsys, "reduct", FULL22, "--beta", "1", "-o", str(out))[0] == 0
    assert load(out).dimension == 1


def test_subst_and_precondition(capsys):
    code, out, _ = run(capsys, "subst", F12, "--s", "0", "--gamma", "0", "--a", "1")
    assert code == 0 and json.loads(out) == {"result": 3}
    assert run(capsys, "subst", F12, "--s", "1", "--gamma", "0", "--a", "1")[0] == 2


def test_laws(capsys):
    code, out, _ = run(capsys, "laws", FULL22)
    assert code == 0 and all(r["status"] == "pass" for r in json.loads(out))
    assert run(capsys, "laws", MUTATED)[0] == 2


def test_distinguished(capsys):
    assert run(capsys, "distinguished", F12)[0] == 0
    code, out, _ = run(capsys, "distinguished", "--strong", F12)
    assert code == 0 and json.loads(out)["holds"]


def test_product(capsys):
    code, out, _ = run(capsys, "product", F12, SUB3, "--filter", "principal:1")
    assert code == 0 and json.loads(out)["size"] == 3
    assert run(capsys, "product", F12, F12, "--filter", "principal:5")[0] == 2


def test_filter_file(capsys, tmp_path):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"index_size": 2, "sets": [[0, 1]]}))
    code, out, _ = run(capsys, "product", F12, F12, "--filter", f"file:{f}")
    assert code == 0 and json.loads(out)["size"] == 16


def test_embedding_commands(capsys):
    code, out, _ = run(capsys, "embed", SUB3, F12)
    assert code == 0 and json.loads(out)["map"] == [0, 2, 3]
    assert run(capsys, "embed", F12, SUB3)[0] == 1
    code, out, _ = run(capsys, "represent", F12, "--max-base", "2")
    assert code == 0 and json.loads(out)["base_size"] == 2
    code, out, _ = run(capsys, "neat-embed", F12, str(fixture_path("full22_fn")))
    assert code == 0 and json.loads(out)["map"] == [0, 5, 10, 15]


def test_represent_unknown(capsys, tmp_path):
    r = tmp_path / "r.json"
    run(capsys, "reduct", FULL22, "--beta", "1", "-o", str(r))
    assert run(capsys, "represent", str(r), "--max-base", "2")[0] == 1


def test_constructions(capsys):
    assert run(capsys, "represent-z", F12)[0] == 0
    assert run(capsys, "neat", FULL22, "--beta", "1")[0] == 0
    code, out, _ = run(capsys, "dilate", str(fixture_path("f12_fn")), "--extra", "1")
    assert code == 0 and json.loads(out)["elements"][1] == [1, 0, 1, 0]
    assert run(capsys, "dilate", F12, "--extra", "1")[0] == 2
    assert run(capsys, "pad", F12, "--gamma", "2", "--v", "0")[0] == 0
    code, out, _ = run(capsys, "full", "--dimension", "1", "--base-size", "2", "--tabulate")
    assert code == 0 and out == fixture_path("f12").read_text()


def test_queries(capsys):
    code, out, _ = run(capsys, "delta", F12)
    assert json.loads(out)["delta"] == {"0": [], "1": [0], "2": [0], "3": []}
    code, out, _ = run(capsys, "zero-set", F12, "--gamma", "0")
    assert json.loads(out)["zero_set"] == [0, 3]
    code, out, _ = run(capsys, "gamma-hom", F12, "--gamma", "0")
    assert code == 0 and json.loads(out)["map"][1] == [1, 0]


def test_text_format(capsys):
    code, out, _ = run(capsys, "check", MUTATED, "--format", "text")
    assert code == 1 and "axiom (1)" in out


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--max-dim", "1", "--max-base", "1", "--no-extra", "--suite", "axioms",
                       "--suite", "formats")
    assert code == 0
    assert [s["status"] for s in json.loads(out)["suites"]] == ["pass", "pass"]


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "--suite", "nope")[0] == 2
