import json

import pytest

from wandering.cli import main


def test_construct_verify_roundtrip(tmp_path, capsys):
    out = tmp_path / "cert.json"
    code = main(["construct", "--p", "2", "--k", "1", "--a0-val", "-2", "--eps-val", "8",
                 "--stages", "2", "--window", "64", "--out", str(out)])
    assert code == 0
    assert "verification: pass" in capsys.readouterr().out
    assert main(["verify", str(out)]) == 0
    assert main(["verify", str(out), "--window", "128"]) == 0

    obj = json.loads(out.read_text())
    obj["aFinal"] = obj["a0"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    capsys.readouterr()
    assert main(["--json", "verify", str(bad)]) == 1
    err = json.loads(capsys.readouterr().out)
    assert err["error"] == "ItineraryBreak"


def test_construct_base_case_to_stdout(capsys):
    assert main(["construct", "--stages", "0", "--eps-val", "8"]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["stages"] == [] and cert["verification"]["pass"]


@pytest.mark.parametrize("argv", [["construct", "--p", "2", "--a0-val", "1"],
                                  ["construct", "--p", "4"],
                                  ["construct", "--stages", "-1"],
                                  ["construct", "--window", "0"],
                                  ["construct", "--bogus"]])
def test_configuration_errors(argv, capsys):
    assert main(argv) == 3


def test_bad_certificate_file(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"certVersion": 7}')
    assert main(["verify", str(p)]) == 3
    assert main(["verify", str(tmp_path / "missing.json")]) == 3


def test_oracle(capsys):
    assert main(["--json", "oracle", "--eps-val", "8"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert len(obj["rows"]) == 48
    assert obj["plan"]["M"] == [5, 9, 13] and obj["plan"]["m"] == [7, 11, 15]
    assert main(["--json", "oracle", "--stages", "0"]) == 0
    assert len(json.loads(capsys.readouterr().out)["rows"]) == 8
    assert main(["oracle"]) == 0
    assert "M = [5, 9, 13]" in capsys.readouterr().out


def test_lemmas(capsys):
    assert main(["lemmas", "--samples", "30", "--seed", "42"]) == 0
    assert main(["lemmas", "--samples", "5", "--inject-failure"]) == 1
    assert main(["lemmas", "--samples", "0"]) == 0
    assert "vacuously" in capsys.readouterr().err
