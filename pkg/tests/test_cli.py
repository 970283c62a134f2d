"""End-to-end tests of the arbigeom command line."""

import json

import pytest

import case_utils
import database
import main
from tests.test_arrangement import Q_TABLE_8


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.setattr(main, "LOG_FILE", "")
    monkeypatch.setattr(database, "RUNS_DB_FILE", tmp_path / "runs.db")
    monkeypatch.setattr(case_utils, "CASES_DIR", tmp_path / "cases")
    return tmp_path


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run_json(capsys, argv):
    code = main.run(argv + ["--json"])
    out = capsys.readouterr().out
    assert code == 0, out
    return json.loads(out)


def test_qtable_reproduces_grid(capsys):
    data = run_json(capsys, ["qtable", "--max-m", "8", "--max-n", "8"])
    assert data["rows"] == Q_TABLE_8


def test_qtable_text(capsys):
    assert main.run(["qtable", "--max-m", "3", "--max-n", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4
    assert lines[3].split() == ["3", "2", "6", "8"]


def test_detect_column_of_ones(tmp_path, capsys):
    matrix = write(tmp_path, "ones.csv", "1\n1\n")
    assert main.run(["detect", "--matrix", matrix]) == 0
    assert capsys.readouterr().out.strip() == "ARBITRAGE v=[1]"


def test_detect_json(tmp_path, capsys):
    matrix = write(tmp_path, "triangle.csv", "1,0\n0,1\n-1,-1\n")
    data = run_json(capsys, ["detect", "--matrix", matrix])
    assert data["verdict"] == "no_arbitrage"
    assert data["state_prices"] == ["1/3", "1/3", "1/3"]
    assert data["portfolio"] is None


def test_global_flags_before_subcommand(tmp_path, capsys):
    matrix = write(tmp_path, "coin.csv", "1\n-1\n")
    assert main.run(["--json", "--matrix", matrix, "detect"]) == 0
    assert json.loads(capsys.readouterr().out)["state_prices"] == ["1/2", "1/2"]


def test_detect_in_orthant(tmp_path, capsys):
    matrix = write(tmp_path, "coin.csv", "1\n-1\n")
    data = run_json(capsys, ["detect", "--matrix", matrix, "--orthant", "+-"])
    assert data["verdict"] == "arbitrage"
    assert data["orthant"] == "+-"


def test_detect_save_case(isolated, tmp_path, capsys):
    matrix = write(tmp_path, "coin.csv", "1\n-1\n")
    data = run_json(capsys, ["detect", "--matrix", matrix, "--save-case", "Fair coin"])
    assert data["saved_case"] == "Fair coin"
    assert (isolated / "cases" / "fair_coin.yaml").exists()


def test_farkas_both_routes(tmp_path, capsys):
    matrix = write(tmp_path, "a.csv", "1,-1\n1,-1\n")
    target = write(tmp_path, "b.csv", "0,2\n")
    simplex = run_json(capsys, ["farkas", "--matrix", matrix, "--target", target])
    assert simplex["outcome"] == "separator"
    assert simplex["y"] == ["1", "-1"]
    via_arbitrage = run_json(capsys, ["farkas", "--matrix", matrix, "--target", target, "--via-arbitrage"])
    assert via_arbitrage["outcome"] == "separator"
    assert via_arbitrage["route"] == "arbitrage"


def test_farkas_dimension_mismatch(tmp_path, capsys):
    matrix = write(tmp_path, "a.csv", "1,0\n0,1\n")
    target = write(tmp_path, "b.csv", "1,2,3\n")
    assert main.run(["farkas", "--matrix", matrix, "--target", target]) == 1
    assert "error" in capsys.readouterr().err


def test_cone_with_point(tmp_path, capsys):
    matrix = write(tmp_path, "c.csv", "1,-1,0\n0,0,1\n")
    point = write(tmp_path, "x.csv", "3,2\n")
    data = run_json(capsys, ["cone", "--matrix", matrix, "--point", point])
    assert data["pointed"] is False
    assert data["lineality_basis"] == ["[1, 0]"]
    assert data["split"]["slice_part"] == "[0, 2]"
    assert data["split"]["lineality_part"] == "[3, 0]"


def test_cone_point_outside(tmp_path, capsys):
    matrix = write(tmp_path, "c.csv", "1,-1,0\n0,0,1\n")
    point = write(tmp_path, "x.csv", "0,-1\n")
    assert main.run(["cone", "--matrix", matrix, "--point", point]) == 1


def test_orthants_list(tmp_path, capsys):
    matrix = write(tmp_path, "triangle.csv", "1,0\n0,1\n-1,-1\n")
    data = run_json(capsys, ["orthants", "--matrix", matrix, "--list"])
    assert data["count"] == 6
    assert data["q"] == 6
    assert "+++" not in data["hits"]
    assert len(data["hits"]) == 6


def test_generic_check(tmp_path, capsys):
    matrix = write(tmp_path, "r.csv", "1,0\n0,1\n1,0\n")
    data = run_json(capsys, ["generic-check", "--matrix", matrix])
    assert data["generic"] is False
    assert data["deleted_rows"] == [1]
    rate = run_json(capsys, ["generic-check", "-m", "4", "-n", "2", "--trials", "10"])
    assert rate["generic_rate"] == 1.0


def test_generic_check_needs_input(capsys):
    assert main.run(["generic-check"]) == 2


def test_simulate_report(capsys):
    argv = ["simulate", "-m", "4", "-n", "2", "--trials", "300", "--seed", "7"]
    data = run_json(capsys, argv)
    assert list(data) == [
        "m", "n", "trials", "seed", "hits", "estimate",
        "theoretical_num", "theoretical_den", "std_error", "ci95_lo", "ci95_hi",
    ]
    assert (data["theoretical_num"], data["theoretical_den"]) == (1, 2)
    assert data["seed"] == 7


def test_simulate_output_is_stable_across_threads(capsys):
    argv = ["simulate", "-m", "3", "-n", "2", "--trials", "120", "--seed", "5", "--json"]
    assert main.run(argv + ["--threads", "1"]) == 0
    first = capsys.readouterr().out
    assert main.run(argv + ["--threads", "4"]) == 0
    assert capsys.readouterr().out == first


def test_simulate_equal_orthants(capsys):
    data = run_json(capsys, ["simulate", "-m", "3", "-n", "2", "--trials", "100", "--equal-orthants"])
    assert data["census_counts"] == [6]
    assert len(data["rates"]) == 8


def test_simulate_record_and_history(capsys):
    run_json(capsys, ["simulate", "-m", "3", "-n", "1", "--trials", "50", "--seed", "3", "--record"])
    history = run_json(capsys, ["history"])
    assert len(history["runs"]) == 1
    assert history["runs"][0]["seed"] == 3
    cleared = run_json(capsys, ["history", "--clear"])
    assert cleared["cleared"] == 1


def test_price(capsys):
    data = run_json(capsys, ["price", "--spot", "100", "--up", "1.2", "--down", "0.9", "--rate", "0.05", "--strike", "100"])
    assert data["pi_u"] == "1/2"
    assert data["pi_d"] == "1/2"
    assert data["call_price"] == "200/21"
    assert data["verdict"] == "no_arbitrage"


def test_price_mispriced_security(capsys):
    data = run_json(capsys, [
        "price", "--spot", "100", "--up", "1.2", "--down", "0.9", "--rate", "0.05",
        "--security", "1,1.05,1",
    ])
    assert data["verdict"] == "arbitrage"


def test_price_degenerate_market(capsys):
    assert main.run(["price", "--spot", "100", "--up", "1", "--down", "1", "--rate", "0"]) == 1


@pytest.mark.parametrize("argv", [
    ["detect"],
    ["bogus"],
    [],
    ["simulate", "-m", "4"],
    ["qtable", "--max-m", "0"],
])
def test_usage_errors(argv):
    assert main.run(argv) == 2


def test_unreadable_and_malformed_files(tmp_path):
    assert main.run(["detect", "--matrix", str(tmp_path / "missing.csv")]) == 1
    ragged = write(tmp_path, "ragged.csv", "1,2\n3\n")
    assert main.run(["detect", "--matrix", ragged]) == 1


def test_help_exits_cleanly():
    assert main.run(["--help"]) == 0


def test_simulate_prints_json_without_flag(capsys):
    assert main.run(["simulate", "-m", "4", "-n", "2", "--trials", "10000", "--seed", "7"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data["theoretical_num"], data["theoretical_den"]) == (1, 2)
    assert data["trials"] == 10000


def test_price_prints_json_without_flag(capsys):
    argv = ["price", "--spot", "100", "--up", "1.2", "--down", "0.9", "--rate", "0.05", "--strike", "100"]
    assert main.run(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert {"pi_u", "pi_d", "call_price", "verdict"} <= set(data)


def test_text_summary_on_request(capsys):
    assert main.run(["simulate", "-m", "3", "-n", "1", "--trials", "20", "--seed", "2", "--text"]) == 0
    first_line = capsys.readouterr().out.splitlines()[0]
    assert first_line.endswith("of 20 3x1 gaussian matrices admit arbitrage")
