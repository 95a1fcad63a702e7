import json

import pytest

from dtmod.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_modulus_prints_value(capsys):
    code, out, _ = run(capsys, "modulus", "--fn", "poly:0,0,1",
                       "--variant", "classical", "--k", "2",
                       "--p", "inf", "--t", "0.5")
    assert code == 0
    value = float(out.strip().split("\n")[-1])
    assert value == pytest.approx(0.5, abs=1e-9)
    assert "variant=classical" in out
    assert "# config" in out


def test_modulus_json_mode(capsys):
    code, out, _ = run(capsys, "modulus", "--fn", "poly:0,0,1", "--k", "2",
                       "--t", "0.25", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(2 * 0.25**2, abs=1e-9)
    assert payload["grid"]["panels"] == 256


def test_usage_errors_exit_two(capsys):
    assert main(["modulus", "--fn", "poly:0,0,1", "--k", "2", "--t", "0.5",
                 "--p", "bogus"]) == 2
    capsys.readouterr()
    assert main(["modulus", "--fn", "nosuch:1", "--k", "1", "--t", "0.1"]) == 2
    capsys.readouterr()
    assert main(["nosuchcommand"]) == 2
    capsys.readouterr()
    assert main(["modulus", "--fn", "poly:1", "--k", "1", "--t", "0.1",
                 "--variant", "zigzag"]) == 2


def test_inadmissible_weight_exits_three(capsys):
    code, _, err = run(capsys, "modulus", "--fn", "poly:0,0,1",
                       "--variant", "classical", "--k", "2",
                       "--p", "inf", "--t", "0.5", "--alpha", "-1")
    assert code == 3
    assert "[0, inf)" in err


def test_step_bound_exits_three(capsys):
    code, _, err = run(capsys, "modulus", "--fn", "poly:0,0,1",
                       "--k", "3", "--t", "0.9")
    assert code == 3
    assert "2/k" in err


def test_approx_error_line(capsys):
    code, out, _ = run(capsys, "approx", "--fn", "poly:0,0,1",
                       "--n", "1", "--p", "inf")
    assert code == 0
    err_line = [ln for ln in out.split("\n") if ln.startswith("error")][0]
    assert float(err_line.split()[1]) == pytest.approx(0.5, abs=1e-6)
    coeff_line = [ln for ln in out.split("\n")
                  if ln.startswith("coefficients")][0]
    assert len(coeff_line.split()) == 3  # label + two basis coefficients


def test_approx_coconvex(capsys):
    code, out, _ = run(capsys, "approx", "--fn", "poly:0,0,0,1", "--n", "3",
                       "--p", "inf", "--constraint", "coconvex",
                       "--inflections", "0.0")
    assert code == 0
    err_line = [ln for ln in out.split("\n") if ln.startswith("error")][0]
    assert float(err_line.split()[1]) <= 1e-8


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(json.dumps({"mod.hgrid": 6}))
    _, out, _ = run(capsys, "modulus", "--fn", "poly:0,1", "--k", "1",
                    "--t", "0.2", "--config", str(cfgfile))
    assert "h_points=6" in out
    _, out, _ = run(capsys, "modulus", "--fn", "poly:0,1", "--k", "1",
                    "--t", "0.2", "--config", str(cfgfile), "--hgrid", "9")
    assert "h_points=9" in out  # explicit flag beats the file


def test_bad_config_key_exits_two(capsys, tmp_path):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(json.dumps({"mod.hgird": 6}))
    code, _, err = run(capsys, "modulus", "--fn", "poly:0,1", "--k", "1",
                       "--t", "0.2", "--config", str(cfgfile))
    assert code == 2
    assert "mod.hgird" in err


def test_seed_env_fallback(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("DTMOD_SEED", "11")
    code, out, _ = run(capsys, "verify", "--claim", "THM2.10",
                       "--out", str(tmp_path / "r.csv"))
    assert code == 0
    assert "seed=11" in out
    # explicit flag wins over the environment
    code, out, _ = run(capsys, "verify", "--claim", "THM2.10", "--seed", "4",
                       "--out", str(tmp_path / "r2.csv"))
    assert "seed=4" in out


def test_verify_unknown_claim(capsys):
    code, _, err = run(capsys, "verify", "--claim", "THM9.9")
    assert code == 2
    assert "THM1.6" in err and "COR4.3" in err


def test_verify_sigma_gate(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--claim", "THM2.13", "--sigma", "4")
    assert code == 2
    assert "--override-hypotheses" in err
    code, out, _ = run(capsys, "verify", "--claim", "THM2.13", "--sigma", "4",
                      "--override-hypotheses", "--out",
                      str(tmp_path / "s4.csv"))
    assert code == 0
    assert "PASS" in out


def test_verify_pass_and_outputs(capsys, tmp_path):
    out_csv = tmp_path / "chain.csv"
    code, out, _ = run(capsys, "verify", "--claim", "THM4.1-chainB",
                       "--seed", "7", "--out", str(out_csv))
    assert code == 0
    assert "PASS" in out
    assert out_csv.exists()
    twin = tmp_path / "chain.json"
    assert twin.exists()
    payload = json.loads(twin.read_text())
    assert payload["claim"] == "THM4.1-chainB"


def test_verify_defective_claim_exits_one(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--claim", "THM3.3",
                       "--out", str(tmp_path / "t33.csv"))
    assert code == 1
    assert "FAIL" in out
    assert (tmp_path / "t33.csv").exists()  # report still written


def test_verify_rerun_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "verify", "--claim", "THM2.11", "--seed", "7",
        "--out", str(a))
    run(capsys, "verify", "--claim", "THM2.11", "--seed", "7",
        "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (
        tmp_path / "b.json").read_bytes()


def test_report_roundtrip(capsys, tmp_path):
    run(capsys, "verify", "--claim", "THM2.10", "--out",
        str(tmp_path / "r.csv"))
    code, out, _ = run(capsys, "report", "--in", str(tmp_path / "r.json"))
    assert code == 0
    assert "claim=THM2.10" in out
    assert "summary" in out


def test_report_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "report", "--in", str(tmp_path / "nope.json"))
    assert code == 2
