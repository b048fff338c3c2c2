import json

import numpy as np
import pytest

from boundary_triples import cli
from boundary_triples import relations as rel


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_dirichlet(capsys):
    code, out, _ = run(capsys, "spectrum", "--model", "interval", "--theta", "dirichlet", "--range", "0:50")
    assert code == 0
    vals = [e["lambda"] for e in json.loads(out)["eigenvalues"]]
    assert np.allclose(vals, [9.8696044, 39.4784176], atol=1e-7)


def test_spectrum_robin_matches_frozen(capsys, frozen):
    code, out, _ = run(capsys, "spectrum", "--theta", "robin:1", "--range", "0:100", "--format", "csv")
    assert code == 0
    rows = out.strip().splitlines()[1:]
    vals = [float(r.split(",")[0]) for r in rows]
    assert np.allclose(vals, frozen["interval_robin_1_closed"], atol=1e-7)


def test_spectrum_relation_file(capsys, tmp_path):
    path = tmp_path / "neumann.json"
    rel.save_relation(rel.graph(np.zeros((2, 2))), path)
    code, out, _ = run(capsys, "spectrum", "--theta", f"relation:{path}", "--range=-1:15")
    assert code == 0
    eig = json.loads(out)["eigenvalues"]
    assert abs(eig[0]["lambda"]) < 1e-9 and "outside Weyl characterization" in eig[1]["caveats"]


def test_spectrum_kvn(capsys):
    code, out, _ = run(capsys, "spectrum", "--theta", "kvn:-1", "--range=-2:5")
    assert code == 0
    eig = json.loads(out)["eigenvalues"]
    assert abs(eig[0]["lambda"] + 1.0) < 1e-9 and eig[0]["multiplicity"] == 2


def test_verify_passes_and_fault_fails(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "verify", "--fault", "flip-trace1")
    report = json.loads(out)
    assert code == 1
    assert not next(c for c in report["checks"] if c["name"] == "green_identity")["passed"]


def test_verify_counterexample_warns(capsys):
    code, out, _ = run(capsys, "verify", "--model", "counterexample", "--modes", "4")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert any("ill-conditioned" in w for w in report["warnings"])


def test_dtn_export_rows(capsys):
    code, out, _ = run(capsys, "dtn-export", "--range=-5:-1", "--grid", "5")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6
    assert lines[0].startswith("lambda_re,lambda_im,m00_re,m00_im")
    row = np.array([float(x) for x in lines[1].split(",")])
    m = (row[2::2] + 1j * row[3::2]).reshape(2, 2)
    assert np.allclose(m, m.conj().T)


def test_dtn_export_single_mode_monotone(capsys):
    code, out, _ = run(capsys, "dtn-export", "--model", "disk", "--mode-list", "3", "--range=-10:-0.5", "--grid", "12")
    vals = [float(r.split(",")[2]) for r in out.strip().splitlines()[1:]]
    assert code == 0 and all(b > a for a, b in zip(vals, vals[1:]))


def test_dtn_export_pole_skip(capsys):
    # the first grid node is pi^2 itself
    code, out, _ = run(capsys, "dtn-export", "--range", "9.8696044010893586:12", "--grid", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["skipped"]) == 1 and len(data["rows"]) == 3


def test_counterexample_command(capsys, tmp_path):
    out_path = tmp_path / "trace.json"
    code, _, _ = run(capsys, "counterexample", "--sizes", "4,8,12", "--out", str(out_path))
    data = json.loads(out_path.read_text())
    assert code == 0 and data["strictly_decreasing"] and data["bound_holds"]
    sig = [row["sigma_min"] for row in data["trace"]]
    assert sig == sorted(sig, reverse=True)


def test_krein_demo(capsys):
    code, out, _ = run(capsys, "krein-demo", "--theta", "robin:-2", "--lam", "3+1j")
    report = json.loads(out)
    assert code == 0 and report["passed"] and report["point"]["class"] == "resolvent"


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--theta", "bogus"],
        ["spectrum", "--range", "5:1"],
        ["spectrum", "--theta", "robin:"],
        ["nope"],
        ["spectrum", "--theta", "relation:/nonexistent.json"],
    ],
)
def test_usage_errors(capsys, argv):
    assert cli.main(argv) == 2


def test_model_error(capsys):
    assert cli.main(["spectrum", "--model", "disk", "--modes", "500"]) == 3


def test_run_config_round_trip():
    cfg = cli.RunConfig(command="spectrum", theta="robin:2", range=(-1.0, 4.0), lam=2 - 1j)
    assert cli.RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
