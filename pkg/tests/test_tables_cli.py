import json

from otkit.cli import main
from otkit.tables import (load_expected, regen_minvol, regen_prop5index,
                          regen_volumebounds)


def test_expected_data_provenance():
    data = load_expected()
    assert set(data) == {"computeJ", "prop5index", "volumebounds", "minvol",
                         "quartics"}
    for cell in data["computeJ"]["F"].values():
        assert cell["src"] == "published"
        assert cell["convention"] in ("tp", "alt")


def test_regen_prop5index():
    checks = regen_prop5index()
    assert checks and all(c.ok for c in checks)


def test_regen_volumebounds():
    checks = regen_volumebounds()
    assert checks and all(c.ok for c in checks)
    by_cell = {c.cell: c for c in checks}
    assert by_cell["torsion_3"].got == "2856582"


def test_regen_minvol():
    checks = regen_minvol()
    assert all(c.ok for c in checks)
    skipped = [c for c in checks if "not recomputed" in c.got]
    assert len(skipped) == 2  # the two high-rank rows


def test_cli_field_text(capsys):
    rc = main(["field", "T^3 + T^2 - 1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "0.3371464457" in out
    assert "J norm         1" in out


def test_cli_field_reducible(capsys):
    rc = main(["field", "T^3 - T + 6"])
    assert rc == 2
    assert "not irreducible" in capsys.readouterr().err


def test_cli_field_malformed(capsys):
    rc = main(["field", "T^^3"])
    assert rc == 1


def test_cli_field_json_large(capsys):
    rc = main(["field", "T^3 + 2*T + 2000", "--format", "json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["J"]["factors"][-1] == ["1649120827309715616889", 1]
    assert report["torsion"]["order"] == report["J"]["norm"]
    assert report["units"]["certified_index_bound"] == 1


def test_cli_certified_only_rejects_high_rank(capsys):
    rc = main(["field", "T^6 - T^5 - 2*T^4 + 3*T^3 - T^2 - 2*T + 1",
               "--certified-only", "--bound", "2"])
    assert rc == 3


def test_cli_units_and_jideal(capsys):
    rc = main(["units", "T^3 - T + 5", "--format", "json"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["certified_index_bound"] == 1
    assert data["J_norm"] == "5"
    rc = main(["jideal", "T^3 - 2*T - 7", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert data["norm"] == "1526"
    assert data["factorization_complete"]


def test_cli_h1_roundtrip(tmp_path, capsys):
    pres = tmp_path / "p.json"
    rc = main(["h1", "--poly", "T^3 - T + 2", "--save-presentation", str(pres),
               "--format", "json"])
    assert rc == 0
    first = json.loads(capsys.readouterr().out)
    assert first["torsion_order"] == "4"
    rc = main(["h1", "--presentation", str(pres), "--format", "json"])
    second = json.loads(capsys.readouterr().out)
    assert rc == 0 and second == first
    rc = main(["h1", "--presentation", str(tmp_path / "missing.json")])
    assert rc == 1


def test_cli_h1_malformed_presentation(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["h1", "--presentation", str(bad)]) == 1
    bad.write_text(json.dumps({"n": 2, "matrices": [[[2, 0], [0, 1]]]}))
    assert main(["h1", "--presentation", str(bad)]) == 1


def test_cli_reconstruct(tmp_path, capsys):
    pres = tmp_path / "p.json"
    main(["h1", "--poly", "T^3 + T^2 - 1", "--save-presentation", str(pres),
          "--format", "json"])
    capsys.readouterr()
    rc = main(["reconstruct", str(pres), "--source", "T^3 + T^2 - 1",
               "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert data["round_trip"]["disc_match"]
    assert data["round_trip"]["regulator_overlap"]
    assert data["cubic_galois_closure_degree"] == 6


def test_cli_reconstruct_non_primitive(tmp_path, capsys):
    pres = tmp_path / "ident.json"
    pres.write_text(json.dumps(
        {"n": 3, "matrices": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]}))
    rc = main(["reconstruct", str(pres), "--format", "json"])
    assert rc == 4
    assert json.loads(capsys.readouterr().out)["primitive"] is False


def test_cli_inoue_and_bound(capsys):
    rc = main(["inoue", "5", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert rc == 0 and data["h1"]["torsion_factors"] == ["5"]
    rc = main(["bound", "T^3 + 8*T - 2", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert rc == 0 and data["bound_holds"] and data["torsion_order"] == "2"


def test_cli_scan_csv(capsys):
    rc = main(["scan", "--s", "1", "--coeff-bound", "2", "--disc-max", "50",
               "--format", "csv"])
    out = capsys.readouterr().out.strip().splitlines()
    assert rc == 0
    assert out[0].startswith("poly,disc,index,regulator,certified")
    assert any("-23" in line for line in out[1:])


def test_cli_scan_empty(capsys):
    rc = main(["scan", "--s", "1", "--coeff-bound", "1", "--disc-max", "5"])
    out = capsys.readouterr().out.strip().splitlines()
    assert rc == 0 and len(out) == 1  # header only


def test_cli_paper_tables(tmp_path, capsys):
    out = tmp_path / "t.csv"
    rc = main(["paper-tables", "prop5index", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("table,cell,expected,got,status")
    assert all(",ok," in line or line.startswith("table,") for line in lines)


def test_cli_mcvol(capsys):
    rc = main(["mcvol", "T^3 - T + 1", "--samples", "20000", "--seed", "11",
               "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert data["agreement_3se"]
    assert data["monte_carlo"]["samples"] == 20000


def test_cli_field_with_mc(capsys):
    rc = main(["field", "T^3 - T + 1", "--mc", "--samples", "20000",
               "--seed", "2", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert rc == 0
    vols = data["volume"]
    assert set(vols) == {"closed_form", "determinant_path", "monte_carlo"}
    assert vols["monte_carlo"]["seed"] == 2


def test_cli_determinism(capsys):
    main(["volume", "T^3 - T + 2", "--format", "json", "--seed", "3"])
    first = capsys.readouterr().out
    main(["volume", "T^3 - T + 2", "--format", "json", "--seed", "3"])
    second = capsys.readouterr().out
    assert first == second


def test_env_precision_override():
    import os
    import subprocess
    import sys

    env = dict(os.environ, OTKIT_PRECISION="256")
    out = subprocess.run(
        [sys.executable, "-c",
         "from otkit.config import DEFAULT_PRECISION; print(DEFAULT_PRECISION)"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "256"
    env["OTKIT_PRECISION"] = "16"  # clamped to the minimum
    out = subprocess.run(
        [sys.executable, "-c",
         "from otkit.config import DEFAULT_PRECISION; print(DEFAULT_PRECISION)"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "64"
