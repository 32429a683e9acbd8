from __future__ import annotations

import json

import pytest

from qfpure.cli import main, parse_caps, CommandError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_witt_eval(capsys):
    code, out, _ = run(capsys, "witt", "eval", "--p", "2", "--n", "3", "--expr", "[1]+[1]+[1]+[1]")
    assert code == 0 and out.strip().endswith("= (0, 0, 1)")


def test_height_json_is_stable(capsys):
    argv = ["height", "--ring", "gallery:SS3", "--max-degree", "3", "--emit", "json"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    doc = json.loads(a)
    assert set(doc) == {"version", "command", "ring", "params", "result", "certificates"}
    assert doc["result"]["height"] == {"kind": "lower_bound", "value": 2, "evidence_degree": 3,
                                       "evidence_height": 2}


def test_reduced_text(capsys):
    code, out, _ = run(capsys, "reduced", "--ring", "gallery:EX4ST")
    assert code == 0 and "s'*x + t'*y + z" in out


def test_inline_ring_and_file(tmp_path, capsys):
    f = tmp_path / "rings.qfp"
    f.write_text("ring A = GF(2)[x] / (x^2 + x) finite\nring B = GF(2)[x] / (x^2) finite\n")
    code, out, _ = run(capsys, "height", "--ring", str(f), "--ring-name", "B")
    assert code == 0 and "infinity" in out
    code, _, err = run(capsys, "height", "--ring", str(f))
    assert code == 2 and "--ring-name" in err
    code, out, _ = run(capsys, "ring", "print", "--ring", "ring C = GF(3)[x]/(x^2-1) finite")
    assert out.strip() == "ring C = GF(3)[x] / (x^2 + 2) finite"


def test_verify_ledger(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "EXAMPLE-4", "--emit", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["ledger"]) == 3


def test_q_compare(capsys):
    code, out, _ = run(capsys, "q", "compare", "--ring", "gallery:DUAL2", "--n", "2")
    assert code == 0 and "isomorphic" in out


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "height", "--ring", "gallery:GF4", "--emit", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["height"]["value"] == 1
    assert list(tmp_path.iterdir()) == [target]


@pytest.mark.parametrize("argv", [
    ["height", "--ring", "missing.qfp"],
    ["height", "--ring", "gallery:NOPE"],
    ["height", "--ring", "ring A = GF(2)[x] / (x^2 finite"],
    ["height", "--ring", "gallery:EX4"],
    ["height", "--ring", "gallery:SS3", "--max-degree", "40"],
    ["witt", "eval", "--p", "6", "--n", "2", "--expr", "1"],
    ["witt", "eval", "--p", "2", "--n", "9", "--expr", "1"],
    ["witt", "eval", "--p", "2", "--n", "2", "--expr", "[1"],
    ["verify", "--filter", "NOPE"],
    ["height", "--ring", "gallery:GF2", "--caps", "enum=zero"],
])
def test_operational_errors_exit_2(argv, capsys):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("qfp: error:")


def test_caps_parsing():
    assert parse_caps("enum=100,degree=5")["degree"] == 5
    with pytest.raises(CommandError):
        parse_caps("degree=99")
    with pytest.raises(CommandError):
        parse_caps("bogus=1")
