import json

import pytest

from quartic_k3.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_bitangents(capsys):
    code, out = run(capsys, "bitangents", "--t", "1", "--json")
    assert code == 0
    assert len(json.loads(out)["bitangents"]) == 28


def test_lattice_json(capsys):
    code, out = run(capsys, "lattice", "--name", "H", "--json")
    data = json.loads(out)
    assert code == 0 and data["rank"] == 14 and data["signature"] == [2, 12]


def test_lattice_unknown(capsys):
    assert main(["lattice", "--name", "E7"]) == 2
    assert "E7" in capsys.readouterr().err


def test_periods(capsys):
    code, out = run(capsys, "periods", "--lam", "-2", "--json")
    data = json.loads(out)
    p1 = complex(*data["periods"]["P1"])
    assert code == 0 and abs(p1 - complex(*data["P1_agm"])) < 1e-8


def test_regulator(capsys):
    code, out = run(capsys, "regulator", "--t", "1", "--check", "--json")
    data = json.loads(out)
    assert code == 0 and data["rhs"] == 0.25
    assert data["report"]["rel_err_under_integral"] < 1e-3


def test_region_csv(capsys, tmp_path):
    path = tmp_path / "region.csv"
    code, _ = run(capsys, "region", "--t", "1", "--resolution", "10", "--csv", str(path))
    assert code == 0
    assert path.read_text().startswith("region,a,b,inside")


def test_family_and_maps(capsys):
    assert run(capsys, "family", "--t", "1", "--json")[0] == 0
    code, out = run(capsys, "maps", "--samples", "20", "--json")
    assert code == 0 and "psi" in out


def test_verify(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, _ = run(capsys, "verify", "--json", "--threads", "2", "--out", str(out_file))
    assert code == 0
    rows = json.loads(out_file.read_text())
    assert rows and all(r["status"] == "pass" for r in rows)


def test_verify_catches_wrong_constant(capsys):
    code, out = run(capsys, "verify", "--pf-constant=-1/2")
    assert code == 1
    assert "FAIL" in out


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["nope"])
