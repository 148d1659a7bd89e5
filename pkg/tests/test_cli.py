import io
import json
import os

import pandas as pd
import pytest

import lieh1tools.cli as cli
from lieh1tools.cli import EXIT_INVALID, EXIT_MISMATCH, EXIT_OK, RunConfig, main, read_grid, run
from lieh1tools.argsfromconfig import make_parser
from lieh1tools.utils import MAX_WORKERS_ENV, worker_count


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_h1_origin(capsys):
    code, out, _ = _run(capsys, "h1", "--alpha", "0", "--beta", "0")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["dim_h1"] == 5
    assert report["stabilized"] is True
    assert report["alpha"] == "0"


@pytest.mark.parametrize("argv", [
    ["h1", "--alpha", "0", "--beta", "0", "--support", "5"],
    ["h1", "--alpha", "0.5", "--beta", "0"],
    ["h1", "--alpha", "0"],
    ["h1", "--algebra", "virasoro"],
    ["evaluate", "--name", "delta33"],
    ["h1", "--alpha", "0", "--beta", "0", "--inner-support", "8"],
])
def test_invalid_input(capsys, argv):
    code, out, err = _run(capsys, *argv)
    assert code == EXIT_INVALID
    assert out == ""
    assert err.startswith("error: ")
    assert len(err.strip().splitlines()) == 1


def test_h1_tsv(capsys):
    code, out, _ = _run(capsys, "h1", "--alpha", "1/2", "--beta", "1/2", "--format", "tsv")
    assert code == EXIT_OK
    header, row = out.strip().splitlines()
    assert header.split("\t") == ["alpha", "beta", "degree", "M", "N", "dim_h1", "stabilized"]
    assert row.split("\t")[:6] == ["1/2", "1/2", "0", "4", "10", "1"]


def test_sweep_keeps_input_order(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(MAX_WORKERS_ENV, "1")
    grid = tmp_path / "grid.tsv"
    pd.DataFrame({"alpha": ["5", "0", "2/3"], "beta": ["7", "1", "1/3"]}).to_csv(grid, sep="\t", index=False)
    code, out, _ = _run(capsys, "sweep", "--grid", str(grid), "--workers", "4")
    assert code == EXIT_OK
    reports = [json.loads(line) for line in out.strip().splitlines()]
    assert [(r["alpha"], r["beta"], r["dim_h1"]) for r in reports] == [("5", "7", 0), ("0", "1", 2),
                                                                       ("2/3", "1/3", 1)]


def test_sweep_json_and_tsv_agree(tmp_path):
    grid = tmp_path / "grid.tsv"
    pd.DataFrame({"alpha": ["1", "-1"], "beta": ["1", "-1"]}).to_csv(grid, sep="\t", index=False)
    as_json, as_tsv = io.StringIO(), io.StringIO()
    assert run(RunConfig("sweep", grid=str(grid)), as_json) == EXIT_OK
    assert run(RunConfig("sweep", grid=str(grid), format="tsv"), as_tsv) == EXIT_OK
    from_json = [json.loads(line)["dim_h1"] for line in as_json.getvalue().splitlines()]
    from_tsv = pd.read_csv(io.StringIO(as_tsv.getvalue()), sep="\t")["dim_h1"].tolist()
    assert from_json == from_tsv == [1, 0]


def test_grid_errors(tmp_path):
    with pytest.raises(ValueError):
        read_grid(str(tmp_path / "missing.tsv"))
    grid = tmp_path / "grid.tsv"
    pd.DataFrame({"alpha": ["1"]}).to_csv(grid, sep="\t", index=False)
    with pytest.raises(ValueError):
        read_grid(str(grid))


def test_default_grid_file():
    points = read_grid("default")
    assert len(points) == 15
    assert points[0] == (0, 0)


def test_sweep_only_over_tensor_densities():
    assert run(RunConfig("sweep", module="adjoint"), io.StringIO()) == EXIT_INVALID


def test_evaluate(capsys):
    code, out, _ = _run(capsys, "evaluate", "--name", "delta02", "--alpha", "0", "--beta", "2", "--n", "2")
    assert code == EXIT_OK
    assert json.loads(out)["value"] == {"terms": [{"sector": "v|v", "index": [0, 2], "coeff": "8"}]}


def test_noncoboundary(capsys):
    code, out, _ = _run(capsys, "noncoboundary", "--name", "delta11", "--max-window", "6")
    assert code == EXIT_OK
    assert json.loads(out) == {"name": "delta11", "noncoboundary": "pass@6", "solution": None}


def test_verify_catalog_entry(capsys):
    code, out, _ = _run(capsys, "verify-catalog", "--name", "delta00_3", "--max-window", "6")
    assert code == EXIT_OK
    assert json.loads(out) == {"name": "delta00_3", "cocycle": "pass", "noncoboundary": "pass@6",
                               "independent_in_h1": True}


def test_verify_catalog_wrong_parameters(capsys):
    code, out, _ = _run(capsys, "verify-catalog", "--name", "delta02", "--alpha", "0", "--beta", "3")
    assert code == EXIT_INVALID


def test_resultdir(tmp_path):
    config = RunConfig("h1", alpha="1", beta="0", resultdir=str(tmp_path), stabilization_rounds=0)
    stream = io.StringIO()
    assert run(config, stream) == EXIT_OK
    (folder,) = [root for root, _, files in os.walk(tmp_path) if "run_inputs.json" in files]
    with open(os.path.join(folder, "reports.jsonl")) as fp:
        assert fp.read() == stream.getvalue()
    with open(os.path.join(folder, "run_inputs.json")) as fp:
        assert json.load(fp)["alpha"] == "1"


def test_worker_count(monkeypatch):
    monkeypatch.delenv(MAX_WORKERS_ENV, raising=False)
    assert worker_count(None) == 1
    assert worker_count(3) == 3
    monkeypatch.setenv(MAX_WORKERS_ENV, "2")
    assert worker_count(8) == 2
    monkeypatch.setenv(MAX_WORKERS_ENV, "many")
    with pytest.raises(ValueError):
        worker_count(2)


def test_golden_mismatch_exit_code(tmp_path, monkeypatch):
    grid = tmp_path / "grid.tsv"
    pd.DataFrame({"alpha": ["0"], "beta": ["0"]}).to_csv(grid, sep="\t", index=False)
    monkeypatch.setattr("lieh1tools.cohomology.golden.SPECIAL_POINTS", {})
    assert run(RunConfig("golden", grid=str(grid)), io.StringIO()) == EXIT_MISMATCH


@pytest.mark.slow
def test_golden_is_deterministic(capsys):
    first = _run(capsys, "golden", "--grid", "default")
    second = _run(capsys, "golden", "--grid", "default")
    assert first[0] == EXIT_OK
    assert first[1] == second[1]
    assert all(json.loads(line)["match"] for line in first[1].splitlines())


def test_failed_sweep_writes_no_reports(tmp_path, monkeypatch):
    monkeypatch.setenv(MAX_WORKERS_ENV, "1")
    grid = tmp_path / "grid.tsv"
    pd.DataFrame({"alpha": ["5", "0"], "beta": ["7", "1"]}).to_csv(grid, sep="\t", index=False)
    finished = cli._sweep_point

    def fail_on_second(task):
        if task[:2] == (0, 1):
            raise ValueError("point failed")
        return finished(task)

    monkeypatch.setattr(cli, "_sweep_point", fail_on_second)
    stream = io.StringIO()
    assert run(RunConfig("sweep", grid=str(grid), workers=1), stream) == EXIT_INVALID
    assert stream.getvalue() == ""


def test_option_types_are_checked(tmp_path):
    table = tmp_path / "cli.yml"
    table.write_text("groups:\n  g:\n    points:\n      default: null\n      type: list\n      nargs: '+'\n"
                     "subcommands:\n  h1:\n    groups: [g]\n")
    with pytest.raises(NotImplementedError):
        make_parser(str(table))
