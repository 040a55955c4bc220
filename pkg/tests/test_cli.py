import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from paleyrip.cli import RIPCURVE_COLUMNS, _csv_text, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_frame_command(capsys):
    code, out, _ = run_cli(capsys, "frame", "--p", "7")
    assert code == 0
    doc = json.loads(out)
    assert doc["p"] == 7
    assert doc["rows"] == [0, 1, 2, 4]
    assert len(doc["entries"]) == 4
    assert len(doc["entries"][0]) == 7
    re0, im0 = doc["entries"][0][0]
    assert abs(re0 - math.sqrt(1 / 7)) < 1e-12 and abs(im0) < 1e-12


def test_frame_exit_codes(capsys):
    assert run_cli(capsys, "frame", "--p", "6")[0] == 2
    assert run_cli(capsys, "frame", "--p", "13")[0] == 3


def test_gram_command_and_methods(capsys):
    code, out_a, _ = run_cli(capsys, "gram", "--p", "7", "--support", "0,1,3")
    assert code == 0
    code, out_d, _ = run_cli(capsys, "gram", "--p", "7", "--support", "0,1,3",
                             "--method", "direct")
    assert code == 0
    ga = np.array([[complex(re, im) for re, im in row]
                   for row in json.loads(out_a)["entries"]])
    gd = np.array([[complex(re, im) for re, im in row]
                   for row in json.loads(out_d)["entries"]])
    assert np.abs(ga - gd).max() < 1e-12


def test_gram_duplicate_support_exit_6(capsys):
    code, _, err = run_cli(capsys, "gram", "--p", "19", "--support", "0,19")
    assert code == 6


def test_support_reduction_warning(capsys):
    code, out, err = run_cli(capsys, "gram", "--p", "19", "--support", "1,2,19")
    assert code == 0
    assert "19 reduced to 0" in err
    assert json.loads(out)["rows"] == [1, 2, 0]


def test_bounds_command(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--p", "1009", "--k", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["max_sparsity"]["gershgorin"]["floor_threshold"] == 23
    assert doc["max_sparsity"]["skew_linear"]["floor_threshold"] == 35
    assert "conditional" not in doc

    code, out, _ = run_cli(capsys, "bounds", "--p", "7", "--k", "3")
    assert abs(json.loads(out)["bounds"]["dembo_recursive"]
               - math.sqrt(3) / math.sqrt(7)) < 1e-14

    code, out, _ = run_cli(capsys, "bounds", "--p", "103", "--k", "30", "--beta", "0.7")
    doc = json.loads(out)
    assert doc["conditional"]["beta"] == 0.7
    assert "conjecture" in doc["conditional"]["note"]

    assert run_cli(capsys, "bounds", "--p", "7", "--k", "1")[0] == 4


def test_estimate_csv_matches_library(capsys):
    code, out, _ = run_cli(capsys, "estimate", "--p", "103", "--k", "30", "--seed", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "j,d,gershgorin,skew_linear,dembo_recursive,generalized_dembo"
    assert len(lines) == 31
    from paleyrip.experiments import estimate_rip_single

    est = estimate_rip_single(103, 30, 1)
    d_col = [float(line.split(",")[1]) for line in lines[1:]]
    assert np.abs(np.array(d_col) - est.d).max() == 0.0
    # orders 1 and 2 sit below the domain of the recursive families
    assert lines[1].split(",")[4] == "nan"
    assert lines[2].split(",")[5] == "nan"


def test_estimate_deterministic_output(capsys):
    _, out1, _ = run_cli(capsys, "estimate", "--p", "43", "--k", "8", "--seed", "3",
                         "--trials", "5")
    _, out2, _ = run_cli(capsys, "estimate", "--p", "43", "--k", "8", "--seed", "3",
                         "--trials", "5")
    assert out1 == out2


def test_estimate_json_csv_round_trip(capsys):
    _, csv_text, _ = run_cli(capsys, "estimate", "--p", "43", "--k", "8", "--seed", "3")
    _, json_text, _ = run_cli(capsys, "estimate", "--p", "43", "--k", "8", "--seed", "3",
                              "--format", "json")
    doc = json.loads(json_text)
    projected = _csv_text(RIPCURVE_COLUMNS, doc["rows"])
    assert projected == csv_text


def test_estimate_range_exit_4(capsys):
    assert run_cli(capsys, "estimate", "--p", "43", "--k", "44", "--seed", "0")[0] == 4


def test_fit_command(tmp_path, capsys):
    # exact synthetic power law round-trips through the CSV interface
    k, p, beta = 20, 103, 0.7
    rows = [{"j": j, "d": j**beta / math.sqrt(p), "gershgorin": 0.0,
             "skew_linear": 0.0, "dembo_recursive": None,
             "generalized_dembo": None} for j in range(1, k + 1)]
    path = tmp_path / "curve.csv"
    path.write_text(_csv_text(RIPCURVE_COLUMNS, rows))
    code, out, _ = run_cli(capsys, "fit", "--input", str(path))
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["beta"] - beta) < 1e-10
    assert abs(doc["r2"] - 1.0) < 1e-12


def test_estimate_fit_pipeline(tmp_path, capsys):
    # end-to-end: a measured curve fits to a slope in the expected band
    path = tmp_path / "measured.csv"
    code, _, _ = run_cli(capsys, "estimate", "--p", "103", "--k", "30",
                         "--seed", "1", "--out", str(path))
    assert code == 0
    code, out, _ = run_cli(capsys, "fit", "--input", str(path))
    assert code == 0
    assert 0.50 <= json.loads(out)["beta"] <= 0.80


def test_fit_malformed_exit_5(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,2\n")
    assert run_cli(capsys, "fit", "--input", str(bad))[0] == 5
    few = tmp_path / "few.csv"
    few.write_text("j,d\n1,0.0\n2,0.1\n3,0.2\n")  # only two positive rows
    assert run_cli(capsys, "fit", "--input", str(few))[0] == 5
    assert run_cli(capsys, "fit", "--input", str(tmp_path / "missing.csv"))[0] == 5


def test_demboratio_command(capsys):
    code, out, _ = run_cli(capsys, "demboratio", "--p", "103", "--k", "30", "--seed", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "j,lambda_max,dembo_bound,gershgorin_bound,dembo_ratio,gershgorin_ratio"
    assert len(lines) == 30  # j = 2..30
    for line in lines[1:]:
        parts = line.split(",")
        dembo_ratio, gersh_ratio = float(parts[4]), float(parts[5])
        assert dembo_ratio >= 1.0 - 1e-9
        assert dembo_ratio <= gersh_ratio + 1e-12
    first = lines[1].split(",")
    assert abs(float(first[4]) - float(first[5])) < 1e-12


def test_conjecture_explicit_support(capsys):
    code, out, _ = run_cli(capsys, "conjecture", "--p", "5", "--support", "0,1,2,3,4")
    assert code == 0
    doc = json.loads(out)
    assert doc["ratio"] <= 1 / 3 + 1e-12
    assert doc["satisfied"] is True

    code, out, _ = run_cli(capsys, "conjecture", "--p", "19",
                           "--support", "1,2,18,16,15,14,8,7,6,4")
    doc = json.loads(out)
    assert doc["numerator"] == 0  # a perfectly balanced pair exists
    assert doc["satisfied"] is True


def test_conjecture_scan_mode(capsys):
    code, out, err = run_cli(capsys, "conjecture", "--p", "19", "--k", "12",
                             "--trials", "20", "--seed", "7")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "trial,k,best_i,best_j,ratio,satisfied"
    assert len(lines) == 21
    assert "summary:" in err
    code, out2, _ = run_cli(capsys, "conjecture", "--p", "19", "--k", "12",
                            "--trials", "20", "--seed", "7", "--format", "json")
    doc = json.loads(out2)
    assert len(doc["rows"]) == 20
    assert 0.0 <= doc["summary"]["worst_ratio"] <= 1.0
    assert run_cli(capsys, "conjecture", "--p", "19")[0] == 4


def test_conjecture_peel_mode(capsys):
    code, out, _ = run_cli(capsys, "conjecture", "--p", "43",
                           "--support", "1,5,8,12,20,22,30,41,2,9,17,33",
                           "--peel", "--m-alpha", "5")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["steps"]) == 4  # 12 -> 10 -> 8 -> 6 -> 4
    assert doc["m_alpha"] == 5
    assert isinstance(doc["all_satisfied"], bool)


def test_verify_p103_runtime(capsys):
    import time

    t0 = time.monotonic()
    code, out, _ = run_cli(capsys, "verify", "--p", "103")
    elapsed = time.monotonic() - t0
    assert code == 0
    assert json.loads(out)["all_passed"] is True
    assert elapsed < 60.0


def test_verify_command(capsys):
    code, out, _ = run_cli(capsys, "verify", "--p", "7")
    assert code == 0
    doc = json.loads(out)
    assert doc["all_passed"] is True
    assert {c["name"] for c in doc["checks"]} == {
        "delta3_spectrum", "charpoly_identity", "gamma_nonneg", "block_determinant",
        "lemma_k_inequality", "cot_radius", "c_alpha_search",
    }


def test_verify_fault_injection_exit_7(capsys, monkeypatch):
    # a tampered eigensolver must be caught and mapped to exit 7
    import paleyrip.spectra as spectra

    real = spectra.hermitian_spectrum

    def tampered(m, tol=1e-10):
        w = real(m, tol)
        return w + 1e-6

    monkeypatch.setattr(spectra, "hermitian_spectrum", tampered)
    code, out, err = run_cli(capsys, "verify", "--p", "7")
    assert code == 7
    doc = json.loads(out)
    assert not doc["all_passed"]
    assert "delta3_spectrum" in doc["failed"]
    assert "verification failed" in err


def test_out_file_and_meta_sidecar(tmp_path, capsys):
    out_path = tmp_path / "curve.csv"
    code, stdout, _ = run_cli(capsys, "estimate", "--p", "43", "--k", "8",
                              "--seed", "3", "--out", str(out_path))
    assert code == 0
    assert stdout == ""
    assert out_path.exists()
    meta = json.loads((tmp_path / "curve.csv.meta.json").read_text())
    assert meta["command"] == "estimate"
    assert meta["seed"] == 3
    assert meta["parameters"]["p"] == 43
    assert meta["parameters"]["trials"] == 1
    assert "version" in meta and "wall_time_s" in meta


def test_usage_error_exit_4(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["estimate", "--p", "43"])  # missing --k
    assert exc.value.code == 4


def test_module_invocation_subprocess():
    env = dict(os.environ)
    env["PALEY_THREADS"] = "1"
    res = subprocess.run(
        [sys.executable, "-m", "paleyrip", "bounds", "--p", "7", "--k", "3"],
        capture_output=True, text=True, env=env,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["p"] == 7
