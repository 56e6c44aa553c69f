import json
import re

import pytest

from finslergeo import cli, scenario

I3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]


def bundled(name):
    for path in scenario.bundled_scenarios():
        if path.endswith(name + ".json"):
            return path
    raise AssertionError(f"no bundled scenario named {name}")


def write_scenario(tmp_path, data, name="scen.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_text_report_passes(capsys):
    code = cli.main(["--scenario", bundled("su2_biinvariant_minkowski_lie")])
    out = capsys.readouterr().out
    assert code == 0
    assert "passed: yes" in out
    assert "wall time:" in out
    assert "task: check-minkowski-lie" in out


def test_expected_failure_exits_zero(capsys):
    code = cli.main(["--scenario", bundled("h3_euclidean_minkowski_lie")])
    out = capsys.readouterr().out
    assert code == 0
    assert "check_passed: no" in out
    assert "expected_passed: no" in out


def test_expectation_mismatch_exits_two(capsys):
    code = cli.main(["--scenario", bundled("h3_randers_berwald"), "--tol", "1.0"])
    out = capsys.readouterr().out
    assert code == 2
    assert "passed: no" in out


def test_missing_file_exits_one(capsys):
    code = cli.main(["--scenario", "/no/such/file.json"])
    err = capsys.readouterr().err
    assert code == 1
    assert err.startswith("error: ParseError:")


def test_invalid_norm_exits_one(tmp_path, capsys):
    path = write_scenario(
        tmp_path,
        {
            "task": "berwald",
            "model": "heisenberg3",
            "norm": {"kind": "randers", "a": I3, "b": [1.5, 0.0, 0.0]},
        },
    )
    code = cli.main(["--scenario", path])
    err = capsys.readouterr().err
    assert code == 1
    assert "error: ValidationError:" in err
    assert "‖b‖ < 1" in err


def test_missing_required_param_exits_one(tmp_path, capsys):
    path = write_scenario(
        tmp_path,
        {"task": "integrate-geodesic", "model": "su2", "norm": {"kind": "euclidean", "a": I3}},
    )
    code = cli.main(["--scenario", path])
    err = capsys.readouterr().err
    assert code == 1
    assert "y0" in err


def test_machine_bytes_stable(tmp_path, capsys):
    out_a = str(tmp_path / "a.json")
    out_b = str(tmp_path / "b.json")
    scen = bundled("h3_euclidean_geodesic_vectors")
    assert cli.main(["--scenario", scen, "--format", "machine", "--out", out_a]) == 0
    assert cli.main(["--scenario", scen, "--format", "machine", "--out", out_b]) == 0
    capsys.readouterr()
    body_a = open(out_a, "rb").read()
    body_b = open(out_b, "rb").read()
    assert body_a == body_b
    assert b"wall" not in body_a


def test_out_file_keeps_stdout_quiet(tmp_path, capsys):
    out = str(tmp_path / "report.txt")
    code = cli.main(["--scenario", bundled("su2_biinvariant_nat_reductive"), "--out", out])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == ""
    assert "passed: yes" in open(out, encoding="utf-8").read()


def test_seed_override_changes_digest(capsys):
    scen = bundled("su2_biinvariant_nat_reductive")
    assert cli.main(["--scenario", scen, "--format", "machine"]) == 0
    base = json.loads(capsys.readouterr().out)
    assert cli.main(["--scenario", scen, "--format", "machine", "--seed", "7"]) == 0
    moved = json.loads(capsys.readouterr().out)
    assert base["digest"] != moved["digest"]
    assert cli.main(["--scenario", scen, "--format", "machine", "--seed", "0"]) == 0
    same = json.loads(capsys.readouterr().out)
    assert same["digest"] == base["digest"]


def test_tol_override_lands_in_report(capsys):
    scen = bundled("su2_biinvariant_minkowski_lie")
    assert cli.main(["--scenario", scen, "--format", "machine", "--tol", "1e-4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["tolerances"]["residual"] == 1.0e-4


def test_trajectory_table_format(tmp_path, capsys):
    path = write_scenario(
        tmp_path,
        {
            "task": "integrate-geodesic",
            "model": "su2",
            "norm": {"kind": "euclidean", "a": I3},
            "params": {"y0": [0.6, -0.3, 0.5], "T": 0.05, "step": 1.0e-3},
        },
    )
    code = cli.main(["--scenario", path])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    header = lines.index("trajectory:")
    assert lines[header + 1] == "# t x1 x2 x3 y1 y2 y3 F"
    rows = lines[header + 2:]
    assert len(rows) == 51
    cell = re.compile(r"-?\d\.\d{16}e[+-]\d{2}")
    for row in rows:
        cells = row.split(" ")
        assert len(cells) == 8
        for value in cells:
            assert cell.fullmatch(value), value


def test_scurvature_profile_table(tmp_path, capsys):
    path = write_scenario(
        tmp_path,
        {
            "task": "s-curvature",
            "model": "su2",
            "norm": {"kind": "euclidean", "a": I3},
            "params": {"y0": [0.6, -0.3, 0.5], "T": 0.2, "step": 1.0e-3, "stride": 50,
                       "tol": 1.0e-4},
        },
    )
    assert cli.main(["--scenario", path]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    header = lines.index("distortion_profile:")
    assert lines[header + 1] == "# t tau S sigma_error"
    assert len(lines[header + 2:]) == 5


def test_every_bundled_scenario_exits_zero(capsys):
    for path in scenario.bundled_scenarios():
        code = cli.main(["--scenario", path, "--format", "machine"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0, path
        assert report["passed"] is True, path
