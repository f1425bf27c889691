from __future__ import annotations

import json

import pytest

import fpm
from backend.app.errors import SingularSystem

from .test_mesh_import import TWO_QUADS


def test_run_prints_the_report(capsys):
    code = fpm.main(["run", "--case", "1.8", "--method", "fpm", "--points", "48"])
    assert code == fpm.EXIT_OK
    out = capsys.readouterr().out
    report = json.loads(out[out.index("{"):])
    assert report["case_id"] == "1.8"
    assert report["n_points"] == 48


def test_config_file_and_flags(tmp_path, capsys):
    config = tmp_path / "run.ini"
    config.write_text("[run]\ncase = 1.8\nmethod = pg2\npoints = 48\neta2 = 50  # weak walls\n", encoding="utf-8")
    code = fpm.main(["--config", str(config), "run", "--method", "fpm", "--out", str(tmp_path / "out")])
    assert code == fpm.EXIT_OK
    out = capsys.readouterr().out
    report = json.loads(out[out.index("{"):out.rindex("}") + 1])
    assert report["method"] == "fpm"
    assert report["eta2"] == 50.0
    assert (tmp_path / "out" / "results.csv").exists()


def test_read_config_file_drops_cli_only_keys(tmp_path):
    config = tmp_path / "run.ini"
    config.write_text("case = 2.7\nrbf-c = 3\nrecord = yes\n", encoding="utf-8")
    assert fpm.read_config_file(config) == {"case": "2.7", "rbf_c": "3"}


def test_unknown_case_exits_with_a_configuration_error(capsys):
    assert fpm.main(["run", "--case", "4.2", "--method", "fpm"]) == fpm.EXIT_CONFIG
    assert "Configuration error" in capsys.readouterr().err


def test_missing_config_file():
    assert fpm.main(["--config", "/nonexistent/run.ini", "run"]) == fpm.EXIT_CONFIG


def test_bad_sweep_list():
    code = fpm.main(["sweep", "--case", "2.1", "--method", "pg2", "--eta1", "1,x", "--eta2", "10"])
    assert code == fpm.EXIT_CONFIG


def test_solver_failure_exits_with_three(monkeypatch, capsys):
    def broken(request):
        raise SingularSystem("matrix is singular")

    monkeypatch.setattr("backend.app.services.run_case", broken)
    assert fpm.main(["run", "--case", "1.8", "--method", "fpm"]) == fpm.EXIT_SOLVER
    assert "SingularSystem" in capsys.readouterr().err


def test_sweep_prints_a_table(capsys):
    code = fpm.main(["sweep", "--case", "2.1", "--method", "pg2", "--points", "27", "--eta1", "1", "--eta2", "100,1000"])
    assert code == fpm.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].split() == ["eta1", "eta2", "e0", "status"]
    assert all(line.split()[-1] == "ok" for line in lines[2:])


def test_refine_prints_one_row_per_level(capsys):
    code = fpm.main(["refine", "--case", "2.1", "--method", "pg2", "--levels", "27,64"])
    assert code == fpm.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].split() == ["points", "dt", "e0"]
    rows = [line.split() for line in lines[2:]]
    assert [row[0] for row in rows] == ["27", "64"]
    # steady case: no time step
    assert all(row[1] == "-" for row in rows)


def test_mesh_info(tmp_path, capsys):
    path = tmp_path / "strip.mesh"
    path.write_text(TWO_QUADS, encoding="utf-8")
    assert fpm.main(["mesh-info", str(path)]) == fpm.EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert info["n_points"] == 2
    assert info["segments"] == ["left", "right"]


def test_mesh_info_missing_file(tmp_path):
    assert fpm.main(["mesh-info", str(tmp_path / "absent.mesh")]) == fpm.EXIT_CONFIG


@pytest.mark.parametrize("argv", [["run", "--method", "fem"], []])
def test_argparse_errors_exit(argv):
    with pytest.raises(SystemExit):
        fpm.main(argv)
