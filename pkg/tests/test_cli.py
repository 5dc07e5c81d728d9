import json
import subprocess
import sys
from pathlib import Path

import pytest

from ksgeo import formats
from ksgeo.cli import main

DATA = Path(__file__).parent / "data"


@pytest.fixture
def built(tmp_path, capsys):
    out = tmp_path / "sys.json"
    assert main(["construct", "--out", str(out)]) == 0
    capsys.readouterr()
    return out


def test_construct_writes_document(tmp_path, capsys):
    out, svg = tmp_path / "sys.json", tmp_path / "fig.svg"
    assert main(["construct", "--out", str(out), "--svg", str(svg)]) == 0
    assert "114 points" in capsys.readouterr().out
    assert len(formats.parse_system(out.read_text())) == 114
    assert svg.read_text().startswith("<svg")


def test_construct_bad_step(tmp_path):
    assert main(["construct", "--step-deg", "7", "--out", str(tmp_path / "x.json")]) == 4


def test_construct_missing_directory(tmp_path):
    assert main(["construct", "--out", str(tmp_path / "nope" / "x.json")]) == 2


def test_verify_constructed(built, tmp_path, capsys):
    cert = tmp_path / "cert.txt"
    assert main(["verify", str(built), "--certificate", str(cert)]) == 1
    assert capsys.readouterr().out.strip() == "UNCOLORABLE"
    assert main(["check-cert", str(built), str(cert)]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_check_cert_rejects_tampering(built, tmp_path, capsys):
    cert = tmp_path / "cert.txt"
    main(["verify", str(built), "--certificate", str(cert)])
    lines = cert.read_text().splitlines()
    k = next(i for i, ln in enumerate(lines) if ln.startswith("PROP") and len(ln.split()) > 3)
    lines[k] = " ".join(lines[k].split()[:-1])
    cert.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["check-cert", str(built), str(cert)]) == 1
    assert "invalid" in capsys.readouterr().out


def test_verify_single_triple(capsys):
    assert main(["verify", str(DATA / "basis.json")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("VALID") and "x=R" in out


@pytest.mark.parametrize("mode", ["full", "brute"])
def test_verify_modes_agree(mode, tmp_path, capsys):
    # ten points: the basis, face diagonals of the x-y plane, and more
    vecs = tmp_path / "v.txt"
    vecs.write_text("1 0 0\n0 1 0\n0 0 1\n1 1 0\n1 -1 0\n1 0 1\n1 0 -1\n0 1 1\n0 1 -1\n1 1 1\n")
    doc = tmp_path / "ten.json"
    assert main(["derive", str(vecs), "--out", str(doc)]) == 0
    capsys.readouterr()
    code = main(["verify", str(doc), "--mode", mode, "--json"])
    verdict = json.loads(capsys.readouterr().out)["verdict"]
    assert (code, verdict) in {(0, "VALID"), (1, "UNCOLORABLE")}
    ref = main(["verify", str(doc), "--mode", "brute"])
    assert code == ref


def test_verify_propagate_only(built, capsys):
    code = main(["verify", str(built), "--mode", "propagate-only"])
    assert code == 6
    assert capsys.readouterr().out.strip() == "UNDECIDED"


def test_verify_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["verify", str(bad)]) == 5


def test_verify_missing_file(tmp_path):
    assert main(["verify", str(tmp_path / "missing.json")]) == 2


def test_verify_geometry_failure(tmp_path):
    doc = tmp_path / "g.json"
    doc.write_text(json.dumps({"schema": formats.SCHEMA,
                               "points": [{"id": "a", "v": [1, 0, 0]}, {"id": "b", "v": [1, 1, 0]},
                                          {"id": "c", "v": [0, 0, 1]}],
                               "triples": [["a", "b", "c"]]}))
    assert main(["verify", str(doc)]) == 3


def test_export_cnf(built, tmp_path):
    out = tmp_path / "sys.cnf"
    assert main(["export-cnf", str(built), "--out", str(out)]) == 0
    first = out.read_text()
    assert "p cnf 114 " in first
    main(["export-cnf", str(built), "--out", str(out)])
    assert out.read_text() == first


def test_plan_descent(capsys):
    assert main(["plan-descent", "--from-lat", "60", "--from-lon", "0",
                 "--to-lat", "30", "--to-lon", "180"]) == 0
    assert capsys.readouterr().out.startswith("7 steps")
    assert main(["plan-descent", "--from-lat", "60", "--from-lon", "0",
                 "--to-lat", "30", "--to-lon", "180", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["betas_deg"]) == 7


def test_plan_descent_wrong_direction():
    assert main(["plan-descent", "--from-lat", "30", "--from-lon", "0",
                 "--to-lat", "60", "--to-lon", "0"]) == 4


def test_derive_flags(tmp_path, capsys):
    out = tmp_path / "d.json"
    assert main(["derive", str(DATA / "vectors.txt"), "--out", str(out), "--no-spans", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"points": 4, "triples": 1, "pairs": 1, "spans": 0}


def test_identical_invocations_identical_output(tmp_path, capsys):
    outs = []
    for k in range(2):
        p = tmp_path / f"s{k}.json"
        main(["construct", "--out", str(p)])
        outs.append((capsys.readouterr().out.replace(str(p), "X"), p.read_text()))
    assert outs[0] == outs[1]


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "ksgeo", "plan-descent", "--from-lat", "50",
                          "--from-lon", "0", "--to-lat", "40", "--to-lon", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "steps" in res.stdout
