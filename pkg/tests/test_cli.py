import json

import numpy as np
import pytest

from lossfish import ChannelParams, SingularSystem, optimize_xi, qfi_tmsv
from lossfish.cli import main, parse_grid


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_grid_forms():
    assert np.allclose(parse_grid("0:1:3"), [0.0, 0.5, 1.0])
    assert np.allclose(parse_grid("0.1:10:3:log"), [0.1, 1.0, 10.0])
    assert np.allclose(parse_grid("0.3,0.7"), [0.3, 0.7])
    assert np.allclose(parse_grid("2.5"), [2.5])
    with pytest.raises(ValueError):
        parse_grid("1:0:5")
    with pytest.raises(ValueError):
        parse_grid("0:1:1")
    with pytest.raises(ValueError):
        parse_grid("-1:1:4:log")


def test_qfi_tmsv_row(capsys):
    code, out, _ = run_cli(capsys, ["qfi", "--eta", "0.7071", "--nb", "0",
                                    "--probe", "tmsv", "--ns", "1"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "eta,nb,probe,ns,route,qfi"
    fields = lines[1].split(",")
    assert fields[2] == "tmsv" and fields[4] == "closed"
    expected = qfi_tmsv(1.0, ChannelParams(0.7071, 0.0))
    assert float(fields[5]) == pytest.approx(expected, rel=1e-11)
    assert expected == pytest.approx(4.0 / (1 - 0.7071 ** 2), rel=1e-12)


def test_qfi_routes_consistent(capsys):
    vals = {}
    for route in ("closed", "sld", "fidelity"):
        code, out, _ = run_cli(capsys, ["qfi", "--eta", "0.6", "--nb", "1",
                                        "--probe", "dsq", "--ns", "2",
                                        "--xi", "0.5", "--route", route])
        assert code == 0
        vals[route] = float(out.strip().split("\n")[1].split(",")[5])
    assert vals["sld"] == pytest.approx(vals["closed"], rel=1e-8)
    assert vals["fidelity"] == pytest.approx(vals["sld"], rel=1e-4)


def test_qfi_guard_band_exits_2(capsys):
    code, _, err = run_cli(capsys, ["qfi", "--eta", "1.0", "--probe",
                                    "coherent", "--ns", "1"])
    assert code == 2
    assert "error" in err


def test_qfi_coherent_full_loss(capsys):
    code, out, _ = run_cli(capsys, ["qfi", "--eta", "0", "--nb", "1",
                                    "--probe", "coherent", "--ns", "1"])
    assert code == 0
    value = float(out.strip().split("\n")[1].split(",")[5])
    assert value == pytest.approx(4.0 / 3.0, rel=1e-11)


def test_missing_required_flag_exits_2(capsys):
    code, _, _ = run_cli(capsys, ["qfi", "--eta", "0.5", "--probe", "dsq",
                                  "--ns", "1"])  # no --xi
    assert code == 2
    code, _, _ = run_cli(capsys, ["qfi", "--eta", "0.5"])
    assert code == 2


def test_sweep_xi_matches_library(capsys):
    code, out, _ = run_cli(capsys, ["sweep-xi", "--ns-grid", "0.01,1",
                                    "--eta-grid", "0.5,0.9", "--nb", "0"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "ns,eta,xi_opt,qfi_opt,boundary"
    assert len(lines) == 5
    # row-major: ns outer, eta inner
    first = lines[1].split(",")
    assert float(first[0]) == 0.01 and float(first[1]) == 0.5
    for line in lines[1:]:
        ns, eta, xi_opt, qfi_opt, boundary = line.split(",")
        res = optimize_xi(float(ns), ChannelParams(float(eta), 0.0))
        assert float(xi_opt) == pytest.approx(res.xi_opt, abs=1e-10)
        assert boundary == res.boundary


def test_sweep_twomode_argmax_and_markers(capsys):
    code, out, _ = run_cli(capsys, ["sweep-twomode", "--ns", "1", "--eta",
                                    "0.7071", "--nb", "1", "--grid", "32x32"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "zeta,r,qfi"
    assert len(lines) == 1 + 32 * 32 + 4
    argmax = lines[-4].split(",")
    assert float(argmax[0]) == 1.0 and float(argmax[1]) == 1.0
    tmsv_marker = lines[-1].split(",")
    assert float(tmsv_marker[0]) == 1.0 and float(tmsv_marker[1]) == 1.0
    assert float(tmsv_marker[2]) == pytest.approx(
        qfi_tmsv(1.0, ChannelParams(0.7071, 1.0)), rel=1e-9)


def test_sweep_twomode_grid_refinement_keeps_argmax(capsys):
    rows = {}
    for grid in ("32x32", "64x64"):
        code, out, _ = run_cli(capsys, ["sweep-twomode", "--ns", "1", "--eta",
                                        "0.5", "--nb", "0.5", "--grid", grid])
        assert code == 0
        rows[grid] = out.strip().split("\n")[-4]
    z32, r32, _ = rows["32x32"].split(",")
    z64, r64, _ = rows["64x64"].split(",")
    assert (z32, r32) == (z64, r64) == ("1", "1")


def test_sweep_total_regions(capsys):
    code, out, _ = run_cli(capsys, ["sweep-total", "--total-ns-grid", "0.01,50",
                                    "--eta-grid", "0.5,0.9", "--nb", "0"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "total_ns,eta,m_opt,xi_opt,total_qfi,ratio_vs_coherent,ratio_vs_tmsv"
    table = {(row.split(",")[0], row.split(",")[1]): row.split(",")
             for row in lines[1:]}
    # small power, high transmission: broadband squeezed-vacuum region
    m_opt, xi_opt = table[("0.01", "0.9")][2], table[("0.01", "0.9")][3]
    assert m_opt == "inf" and float(xi_opt) == 1.0
    # large power: single-shot region with partial squeezing
    m_opt, xi_opt = table[("50", "0.9")][2], table[("50", "0.9")][3]
    assert m_opt == "1" and 0.0 < float(xi_opt) < 1.0
    # at eta <= 1/sqrt(2) the single shot always wins
    assert table[("0.01", "0.5")][2] == "1"
    assert table[("50", "0.5")][2] == "1"


def test_sweep_total_tmsv_scale(capsys):
    # total TMSV QFI 4 T/(1-eta^2) ~ 10 around T = 1, eta ~ 0.775
    code, out, _ = run_cli(capsys, ["sweep-total", "--total-ns-grid", "1,2",
                                    "--eta-grid", "0.775,0.9", "--nb", "0"])
    assert code == 0
    row = out.strip().split("\n")[1].split(",")
    tmsv_total = float(row[4]) / float(row[6])
    assert tmsv_total == pytest.approx(10.0, rel=0.05)


def test_sweep_total_rejects_bare_thermal(capsys):
    code, _, err = run_cli(capsys, ["sweep-total", "--total-ns-grid", "1,2",
                                    "--eta-grid", "0.5,0.9", "--nb", "1"])
    assert code == 2
    assert "diverge" in err


def test_advantage_values(capsys):
    code, out, _ = run_cli(capsys, ["advantage", "--eta-grid", "0.001,0.01",
                                    "--ns-grid", "0.01,1", "--nb", "1000",
                                    "--normalized"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "eta,ns,ratio_tmsv_coh"
    first = lines[1].split(",")
    assert 1.9 <= float(first[2]) <= 2.0


def test_hypothesis_delegates(capsys):
    code, out, _ = run_cli(capsys, ["hypothesis", "--eta-plus", "0.9",
                                    "--eta-minus", "0.8", "--m", "10",
                                    "--probe", "coherent", "--ns", "1"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "eta_plus,eta_minus,m,fid_bound,qfi_approx,threshold_approx"
    row = lines[1].split(",")
    # coherent at N_B = 0: bound = exp(-M d^2 N_S / 2)/2
    assert float(row[3]) == pytest.approx(0.5 * np.exp(-10 * 0.01 * 1.0 / 2), rel=1e-9)
    assert 0.0 <= float(row[5]) <= 1.0


def test_json_format_mirrors_columns(capsys):
    code, out, _ = run_cli(capsys, ["qfi", "--eta", "0.5", "--probe",
                                    "coherent", "--ns", "1",
                                    "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload[0]["probe"] == "coherent"
    assert float(payload[0]["qfi"]) == pytest.approx(4.0, rel=1e-11)


def test_determinism_stdout_and_files(tmp_path, capsys):
    argv = ["sweep-xi", "--ns-grid", "0.1:10:4:log", "--eta-grid",
            "0.2:0.9:5", "--nb", "1"]
    _, out1, _ = run_cli(capsys, argv)
    _, out2, _ = run_cli(capsys, argv)
    assert out1 == out2

    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(f1)]) == 0
    assert main(argv + ["--out", str(f2)]) == 0
    assert f1.read_bytes() == f2.read_bytes()
    assert f1.read_text().encode() == out1.encode()


def test_numbers_use_12_significant_digits(capsys):
    _, out, _ = run_cli(capsys, ["qfi", "--eta", "0.7071", "--probe", "tmsv",
                                 "--ns", "1"])
    value = out.strip().split("\n")[1].split(",")[5]
    assert len(value.replace(".", "").replace("-", "").lstrip("0")) == 12


def test_numerical_failure_exits_3(monkeypatch, capsys):
    import lossfish.cli as cli_mod

    def boom(*args, **kwargs):
        raise SingularSystem("synthetic failure")

    monkeypatch.setattr(cli_mod, "qfi_sld", boom)
    code, _, err = run_cli(capsys, ["qfi", "--eta", "0.5", "--probe",
                                    "coherent", "--ns", "1", "--route", "sld"])
    assert code == 3
    assert "synthetic failure" in err
