import json
import subprocess
import sys

import pytest

CMD = [sys.executable, "-m", "asqem.cli"]

H2 = "tests/fixtures/h2_sto3g/fcidump"
H2O_STO = "tests/fixtures/h2o_sto3g/fcidump"
H2O_STO_REFS = "tests/fixtures/h2o_sto3g/manifest.json"
KS = "tests/fixtures/h2o_631gs_ks/fcidump"
KS_LR = "tests/fixtures/h2o_631gs_ks/lr_mu7p25.fcidump"
KS_GRID = "tests/fixtures/h2o_631gs_ks/grid.asqem"
KS_REFS = "tests/fixtures/h2o_631gs_ks/manifest.json"


def run(*args):
    return subprocess.run(
        CMD + list(args), capture_output=True, text=True, cwd="."
    )


def test_hf_embed_h2o_sto3g_cas10_7(tmp_path):
    out = tmp_path / "report.json"
    r = run(
        "hf-embed", "--fcidump", H2O_STO, "--active", "10,7",
        "--solver", "exact", "--refs", H2O_STO_REFS, "--out", str(out),
    )
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    assert doc["result"]["energy"] == pytest.approx(-75.009, abs=1e-3)
    assert doc["result"]["n_qubits"] == 12
    # all orbitals active: the embedding recovers the full correlation gap
    assert doc["metrics"]["epsilon_hf"] == pytest.approx(100.0, abs=2.5)


def test_hf_embed_rejects_empty_active_space():
    r = run("hf-embed", "--fcidump", H2, "--active", "0,0")
    assert r.returncode == 1
    assert "error" in r.stderr.lower()


def test_hf_embed_missing_file():
    r = run("hf-embed", "--fcidump", "nope.fcidump", "--active", "2,2")
    assert r.returncode == 1


def test_hf_embed_vqe_matches_exact(tmp_path):
    out_e = tmp_path / "e.json"
    out_v = tmp_path / "v.json"
    r1 = run("hf-embed", "--fcidump", H2, "--active", "2,2",
             "--solver", "exact", "--out", str(out_e))
    r2 = run("hf-embed", "--fcidump", H2, "--active", "2,2",
             "--solver", "vqe", "--out", str(out_v))
    assert r1.returncode == 0 and r2.returncode == 0, r2.stderr
    e_exact = json.loads(out_e.read_text())["result"]["energy"]
    e_vqe = json.loads(out_v.read_text())["result"]["energy"]
    assert e_vqe == pytest.approx(e_exact, abs=1e-6)


def test_cli_determinism(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        r = run("hf-embed", "--fcidump", H2, "--active", "2,2",
                "--solver", "vqe", "--out", str(out))
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        doc.pop("created_at")
        outs.append(doc)
    assert outs[0] == outs[1]


def test_dft_embed_cas66(tmp_path):
    out = tmp_path / "report.json"
    hist = tmp_path / "history.csv"
    r = run(
        "dft-embed", "--fcidump", KS, "--lr", KS_LR, "--grid", KS_GRID,
        "--active", "6,6", "--refs", KS_REFS,
        "--out", str(out), "--history-csv", str(hist),
    )
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    assert doc["result"]["energy"] == pytest.approx(-76.068, abs=10e-3)
    assert doc["result"]["converged"] is True
    assert doc["result"]["iterations"] <= 10
    assert doc["metrics"]["epsilon_dft"] == pytest.approx(62.6, abs=3.0)
    assert hist.exists()
    assert doc["history"][-1]["abs_delta_e"] < 1e-10


def test_dft_embed_missing_grid_fails_fast():
    r = run("dft-embed", "--fcidump", KS, "--lr", KS_LR,
            "--grid", "missing.grid", "--active", "6,6")
    assert r.returncode == 1


def test_sweep_mu_endpoints(tmp_path):
    out = tmp_path / "sweep.json"
    csv = tmp_path / "sweep.csv"
    r = run(
        "sweep-mu", "--fcidump", KS, "--grid", KS_GRID, "--active", "6,6",
        "--point", "0.01", "tests/fixtures/h2o_631gs_ks/lr_mu0p01.fcidump",
        "--point", "7.25", KS_LR,
        "--point", "1000", "tests/fixtures/h2o_631gs_ks/lr_mu1000.fcidump",
        "--out", str(out), "--sweep-csv", str(csv),
    )
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    assert doc["result"]["mu_optimal"] == 7.25
    assert len(doc["result"]["points"]) == 3
    assert csv.exists()
    assert "optimal mu = 7.25" in r.stdout


def test_explicit_index_lists(tmp_path):
    out = tmp_path / "r.json"
    r = run(
        "hf-embed", "--fcidump", H2O_STO,
        "--inactive-indices", "0,1,2", "--active-indices", "3,4,5,6",
        "--out", str(out),
    )
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    assert doc["result"]["active_space"]["inactive"] == [0, 1, 2]
    assert doc["result"]["active_space"]["n_active_electrons"] == 4


def test_reduce_requires_parity():
    r = run("hf-embed", "--fcidump", H2, "--active", "2,2",
            "--mapping", "jw", "--reduce")
    assert r.returncode == 1
