import json
import math

import pytest

from mollint.cli import main


def run(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def verdicts(out):
    lines = [ln for ln in out.splitlines() if ln.strip()]
    return [json.loads(ln) for ln in lines]


def test_moment_plain(tmp_path, capsys):
    rc, out, err = run(capsys, ["--output-dir", str(tmp_path),
                                "moment", "--T", "500"])
    assert rc == 0 and err == ""
    (v,) = verdicts(out)
    assert v["operation"] == "moment"
    assert v["pass"] is True
    assert abs(v["lhs"] - 1.0) <= 1e-8
    assert v["inputs"]["mollifier"] == "none"


def test_moment_rerun_byte_identical(tmp_path, capsys):
    argv = ["--output-dir", str(tmp_path), "moment", "--T", "500"]
    _, out1, _ = run(capsys, argv)
    _, out2, _ = run(capsys, argv)
    assert out1 == out2


def test_moment_compare_bch(tmp_path, capsys):
    rc, out, _ = run(capsys, ["--output-dir", str(tmp_path), "moment",
                              "--T", "500", "--theta", "0.3",
                              "--mollifier", "ltheta", "--compare-bch"])
    assert rc == 0
    vs = verdicts(out)
    assert [v["operation"] for v in vs] == ["moment", "moment.compare_bch"]
    assert abs(vs[1]["ratio"] - 1.0) <= 0.05


def test_moment_resolution_refused(tmp_path, capsys):
    rc, out, err = run(capsys, ["--output-dir", str(tmp_path), "--panels",
                                "10", "moment", "--T", "500"])
    assert rc == 2
    assert err.startswith("error:")
    rc, out, _ = run(capsys, ["--output-dir", str(tmp_path), "--panels", "10",
                              "moment", "--T", "500", "--force"])
    assert rc == 0
    assert verdicts(out)[0]["inputs"]["panels"] == 10


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\npanels = 400\noutput_dir = %s\n" % tmp_path)
    rc, out, _ = run(capsys, ["--config", str(cfg), "moment", "--T", "500",
                              "--force"])
    assert rc == 0
    assert verdicts(out)[0]["inputs"]["panels"] == 400
    # explicit flag beats the file
    rc, out, _ = run(capsys, ["--config", str(cfg), "--panels", "600",
                              "moment", "--T", "500", "--force"])
    assert verdicts(out)[0]["inputs"]["panels"] == 600


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("pannels=10\n")
    rc, _, err = run(capsys, ["--config", str(cfg), "moment", "--T", "500"])
    assert rc == 2
    assert "unknown key" in err


def test_output_dir_unwritable(capsys):
    rc, _, err = run(capsys, ["--output-dir", "/no/such/dir",
                              "moment", "--T", "500"])
    assert rc == 2
    assert "output_dir" in err


def test_zeros_compute_verify_import(tmp_path, capsys, monkeypatch):
    table = tmp_path / "z.txt"
    rc, out, _ = run(capsys, ["--output-dir", str(tmp_path), "zeros",
                              "compute", "--t0", "10", "--t1", "60",
                              "--out", str(table)])
    assert rc == 0
    v = verdicts(out)[0]
    assert v["pass"] is True
    assert table.exists()

    rc, out, _ = run(capsys, ["zeros", "verify", "--path", str(table)])
    assert rc == 0
    assert verdicts(out)[0]["operation"] == "zeros.verify"

    # env variable supplies the table when --path is absent
    monkeypatch.setenv("MOLLINT_ZEROS", str(table))
    rc, out, _ = run(capsys, ["zeros", "verify"])
    assert rc == 0
    monkeypatch.delenv("MOLLINT_ZEROS")

    cache = tmp_path / "cache.txt"
    rc, out, _ = run(capsys, ["zeros", "import", "--path", str(table),
                              "--range", "10", "60", "--out", str(cache)])
    assert rc == 0
    assert cache.exists()


def test_zeros_verify_without_table(capsys):
    rc, _, err = run(capsys, ["zeros", "verify"])
    assert rc == 2
    assert "no table" in err


def test_bounds_baez_closed_form(tmp_path, capsys):
    rc, out, _ = run(capsys, ["--output-dir", str(tmp_path), "bounds", "baez",
                              "--T", "500", "--t-cap", "100"])
    assert rc == 0
    v = verdicts(out)[0]
    assert v["pass"] is True
    assert v["rhs"] == pytest.approx(4.0 * math.atan(200.0), rel=1e-12)
    assert v["tail_bound"] >= 0.0


def test_quadform_subcommands(tmp_path, capsys):
    rc, out, _ = run(capsys, ["--output-dir", str(tmp_path), "quadform",
                              "verify-diag", "--N", "50", "--trials", "3"])
    assert rc == 0
    assert verdicts(out)[0]["lhs"] <= 1e-10

    rc, out, _ = run(capsys, ["--output-dir", str(tmp_path), "quadform",
                              "minimize", "--N", "100"])
    assert rc == 0
    assert (tmp_path / "minimizer_100.csv").exists()

    rc, out, _ = run(capsys, ["--output-dir", str(tmp_path), "quadform",
                              "s-decomp", "--N", "100"])
    assert rc == 0
    v = verdicts(out)[0]
    assert v["s2_sign"] == 1

    rc, out, _ = run(capsys, ["--output-dir", str(tmp_path), "quadform",
                              "propb", "--N", "50", "--T", "1000"])
    assert rc == 0
    v = verdicts(out)[0]
    assert v["lhs"] == pytest.approx(v["rhs"], rel=1e-10)


def test_seed_changes_sdecomp_inputs(tmp_path, capsys):
    rc, out1, _ = run(capsys, ["--output-dir", str(tmp_path), "--seed", "1",
                               "quadform", "s-decomp", "--N", "80"])
    rc, out2, _ = run(capsys, ["--output-dir", str(tmp_path), "--seed", "2",
                               "quadform", "s-decomp", "--N", "80"])
    v1, v2 = verdicts(out1)[0], verdicts(out2)[0]
    assert v1["pass"] and v2["pass"]
    assert v1["S1"] != v2["S1"]
