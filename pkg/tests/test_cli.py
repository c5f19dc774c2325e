import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from indexforge import cli
from indexforge.errors import NumericError


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def equal_var(tmp_path):
    return write(tmp_path, "equal.csv", "id,a,b\nr1,0,1\nr2,1,0\nr3,2,2\n")


def test_weigh_var_equal_variances(capsys, equal_var):
    code, out, _ = run(capsys, "weigh", equal_var, "--method", "var")
    assert code == 0
    report = json.loads(out)
    assert report["weights"] == pytest.approx({"a": 0.5, "b": 0.5}, abs=1e-12)
    assert report["manifest"]["command"] == "weigh"
    assert report["manifest"]["metadata"]["pca_loading_convention"] == "absolute"


def test_weigh_csv_format_and_manifest(capsys, tmp_path, equal_var):
    target = tmp_path / "w.csv"
    code, _, _ = run(capsys, "weigh", equal_var, "--method", "ent", "--format", "csv", "-o", target)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert [r["indicator"] for r in rows] == ["a", "b"]
    assert sum(float(r["weight"]) for r in rows) == pytest.approx(1.0)
    assert json.loads((tmp_path / "w.csv.manifest.json").read_text())["config"]["method"] == "ENT"


def test_weigh_dea_epsilon_too_large(capsys, tmp_path):
    path = write(tmp_path, "dea.csv", "id,a,b,c\nr1,1,1,1\nr2,0,0.5,0\nr3,0.2,0,0.4\n")
    code, _, err = run(capsys, "weigh", path, "--method", "dea", "--dea-epsilon", "0.5")
    assert code != 0
    assert "epsilon too large" in err


def test_weigh_pca_duplicated_columns(capsys, tmp_path):
    path = write(tmp_path, "dup.csv", "id,a,b\nr1,0,0\nr2,1,1\nr3,3,3\n")
    code, out, _ = run(capsys, "weigh", path, "--method", "pca", "--components", "1")
    assert code == 0
    w = json.loads(out)["weights"]
    assert w["a"] == pytest.approx(0.5, abs=1e-9) and w["b"] == pytest.approx(0.5, abs=1e-9)


def test_weigh_negate(capsys, tmp_path):
    path = write(tmp_path, "cost.csv", "id,good,cost\nr1,1,5\nr2,2,1\nr3,3,4\nr4,0,2\n")
    code, out, _ = run(capsys, "weigh", path, "--method", "critic", "--negate", "cost")
    assert code == 0
    assert json.loads(out)["manifest"]["config"]["negate"] == ["cost"]


def test_index_inline_weights(capsys, tmp_path):
    path = write(tmp_path, "p.csv", "id,a,b\nr1,0.5,1.0\nr2,1.0,0.0\nr3,0.0,0.5\n")
    code, out, _ = run(capsys, "index", path, "--weights", "0.8,0.2", "--prescaled")
    assert code == 0
    report = json.loads(out)
    assert report["index"]["r1"] == pytest.approx(0.6, abs=1e-12)
    assert report["ranking"][0]["system_id"] == "r2"


def test_index_first_column_ranking(capsys, tmp_path):
    path = write(tmp_path, "p.csv", "id,a,b\nr1,1,9\nr2,3,0\nr3,2,5\n")
    code, out, _ = run(capsys, "index", path, "--weights", "1,0", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["system_id"] for r in rows] == ["r2", "r3", "r1"]


def test_index_ties_flagged(capsys, tmp_path):
    path = write(tmp_path, "t.csv", "id,a,b\nr1,0,1\nr2,1,0\n")
    code, out, _ = run(capsys, "index", path, "--weights", "0.5,0.5")
    report = json.loads(out)
    assert code == 0 and report["ties"]
    assert [r["rank"] for r in report["ranking"]] == [1, 1]


def test_index_from_report(capsys, tmp_path, equal_var):
    report = tmp_path / "w.json"
    assert run(capsys, "weigh", equal_var, "--method", "var", "-o", report)[0] == 0
    code, out, _ = run(capsys, "index", equal_var, "--weights", report)
    assert code == 0
    assert json.loads(out)["weights"] == pytest.approx({"a": 0.5, "b": 0.5})


def test_index_dimension_mismatch(capsys, equal_var):
    code, _, err = run(capsys, "index", equal_var, "--weights", "0.2,0.3,0.5")
    assert code == 1 and "3 weights" in err


def test_simulate_writes_outputs(capsys, tmp_path):
    out_dir = tmp_path / "sim"
    code, out, _ = run(
        capsys, "simulate", "--scenario", "normal", "--iterations", "10", "--seed", "42", "--svg", "-o", out_dir
    )
    assert code == 0
    svgs = sorted(p.name for p in out_dir.glob("*.svg"))
    assert len(svgs) == 5
    for name in svgs:
        ET.parse(out_dir / name)
    assert out == (out_dir / "summary.json").read_text()
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["seed"] == 42 and "summary.csv" in manifest["outputs"]
    rows = list(csv.DictReader(io.StringIO((out_dir / "summary.csv").read_text())))
    assert len(rows) == 25
    medians = [float(r["median"]) for r in rows]
    assert all(0.1 < m < 0.3 for m in medians)


def test_simulate_repeat_is_byte_identical(capsys, tmp_path):
    args = ["simulate", "--scenario", "normal-correlated", "--methods", "critic,dea,pca",
            "--pca-components", "1", "--iterations", "6", "--seed", "3"]
    run(capsys, *args, "-o", tmp_path / "a")
    run(capsys, *args, "-o", tmp_path / "b", "--workers", "3")
    for name in ("summary.csv", "samples.csv", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_env_seed_and_manifest_replay(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("INDEXFORGE_SEED", "17")
    run(capsys, "simulate", "--scenario", "systemic-correlated", "--iterations", "4", "-o", tmp_path / "a")
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest["seed"] == 17
    monkeypatch.delenv("INDEXFORGE_SEED")
    run(capsys, "simulate", "--config", tmp_path / "a" / "manifest.json", "-o", tmp_path / "b")
    assert (tmp_path / "a" / "summary.csv").read_bytes() == (tmp_path / "b" / "summary.csv").read_bytes()
    run(capsys, "simulate", "--config", tmp_path / "a" / "manifest.json", "--seed", "18", "-o", tmp_path / "c")
    assert (tmp_path / "a" / "summary.csv").read_bytes() != (tmp_path / "c" / "summary.csv").read_bytes()


def test_bad_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("INDEXFORGE_SEED", "abc")
    code, _, err = run(capsys, "simulate", "--iterations", "1")
    assert code == 1 and "INDEXFORGE_SEED" in err


def test_report_rerenders(capsys, tmp_path):
    run(capsys, "simulate", "--iterations", "5", "--methods", "var,ent", "--svg", "-o", tmp_path / "s")
    code, out, _ = run(capsys, "report", tmp_path / "s" / "summary.csv", "-o", tmp_path / "r")
    assert code == 0
    for name in ("boxplot_var.svg", "boxplot_ent.svg"):
        ET.parse(tmp_path / "r" / name)
    assert len(out.splitlines()) == 2


@pytest.mark.filterwarnings("ignore::indexforge.errors.IndexForgeWarning")
def test_exit_codes(capsys, tmp_path, monkeypatch, equal_var):
    ragged = write(tmp_path, "bad.csv", "id,a,b\nr1,1\n")
    code, _, err = run(capsys, "weigh", ragged, "--method", "var")
    assert code == 1 and "row 2" in err

    text = write(tmp_path, "txt.csv", "id,a,b\nr1,1,x\nr2,2,3\n")
    code, _, err = run(capsys, "weigh", text, "--method", "var")
    assert code == 1 and "column b" in err

    with pytest.raises(SystemExit) as info:
        cli.main(["weigh", equal_var, "--method", "nope"])
    assert info.value.code == 1
    capsys.readouterr()

    constant = write(tmp_path, "const.csv", "id,a,b\nr1,1,1\nr2,1,2\nr3,1,3\n")
    code, _, err = run(capsys, "weigh", constant, "--method", "var")
    assert code == 2

    def boom(*a, **k):
        raise NumericError("no convergence", residual=1.0)

    monkeypatch.setattr(cli, "compute_weights", boom)
    code, _, _ = run(capsys, "weigh", equal_var, "--method", "pca")
    assert code == 3


def test_module_entry_point(equal_var):
    proc = subprocess.run(
        [sys.executable, "-m", "indexforge", "weigh", equal_var, "--method", "var", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "method,indicator,weight"
