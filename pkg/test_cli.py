"""
End-to-end tests: solver dispatch, the icover command line and the HTTP handlers
"""

import asyncio
import io
import json
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, main
from engine.errors import SolverDisagreementError
from engine.generator import random_instances
from engine.istring import parse_istring, split_records
from engine.service import check, solve
from models.run_config import Algorithm, RunConfig

FIG1 = "bb??abb??ba?"
EXAMPLE_CNF = "c running example\np cnf 5 3\n1 2 -3 5 0\n-1 4 0\n-2 3 -5 0\n"


@pytest.fixture
def fig1_file(tmp_path):
    path = tmp_path / "fig1.txt"
    path.write_text(f"#alphabet=ab\n{FIG1}\n", encoding="utf-8")
    return path


def _lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


# --- service --------------------------------------------------------------------------

def test_solve_auto_picks_partial():
    report = solve(parse_istring(FIG1, "ab"))
    assert report.algorithm == "partial"
    assert report.validated
    assert (report.result.length, report.result.witness) == (4, "bbaa")
    assert "index" in report.timings and "solve" in report.timings


def test_solve_auto_falls_back_to_simple():
    text = parse_istring("a[ab]ca[ab]c", "abc")
    report = solve(text, RunConfig(table_max_k=0))
    assert report.algorithm == "simple"
    assert report.result.length == 3


def test_solve_oracle_reports_all_lengths():
    report = solve(parse_istring("a?b", "ab"), RunConfig(algorithm=Algorithm.ORACLE))
    assert report.all_lengths == [2, 3]
    data = report.to_json_dict()
    assert data["all_lengths"] == [2, 3]
    assert set(data) >= {"n", "k", "sigma", "partial", "length", "witness", "covering_set", "algo", "micros"}


def test_check_agrees_on_fig1():
    report = check(parse_istring(FIG1, "ab"))
    assert report.agreed, report.disagreements
    assert report.expected_length == 4
    assert {r.algorithm for r in report.reports} == {"simple", "odot", "fpt", "partial", "oracle"}


def test_check_skips_refused_algorithms():
    report = check(parse_istring("a?b?a?b?a?b?", "ab"), RunConfig(max_prefixes=1), with_oracle=False)
    assert report.agreed
    assert "simple" not in {r.algorithm for r in report.reports}


# --- command line ---------------------------------------------------------------------

def test_cli_solve_plain(fig1_file, capsys):
    assert main(["solve", str(fig1_file)]) == EXIT_OK
    lines = _lines(capsys)
    assert lines[0] == "length: 4"
    assert lines[1] == "witness: bbaa"
    assert lines[2] == "covering_set: 1 2 6 9"
    assert "algo: partial" in lines


def test_cli_solve_json_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("a?b\n"))
    assert main(["solve", "--alphabet", "ab", "--algo", "oracle", "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert (data["n"], data["k"], data["sigma"], data["partial"]) == (3, 1, 2, True)
    assert (data["length"], data["witness"], data["algo"]) == (2, "ab", "oracle")
    assert data["all_lengths"] == [2, 3]


@pytest.mark.parametrize("algo", ["simple", "odot", "fpt", "partial"])
def test_cli_solve_each_algorithm(fig1_file, capsys, algo):
    assert main(["solve", str(fig1_file), "--algo", algo, "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["length"] == 4
    assert data["algo"] == algo


def test_cli_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("a[]b", encoding="utf-8")
    assert main(["solve", str(bad)]) == EXIT_INPUT
    assert main(["solve", str(tmp_path / "missing.txt")]) == EXIT_INPUT
    general = tmp_path / "general.txt"
    general.write_text("a[ab]c", encoding="utf-8")
    assert main(["solve", str(general), "--algo", "partial"]) == EXIT_INPUT
    assert "icover:" in capsys.readouterr().err


def test_cli_budget_refusal(tmp_path, capsys):
    source = tmp_path / "wide.txt"
    source.write_text("a?b?a?b?a?b?a?b?a?b?", encoding="utf-8")
    assert main(["solve", str(source), "--algo", "simple", "--max-prefixes", "1"]) == EXIT_BUDGET
    assert "max_prefixes" in capsys.readouterr().err


def test_cli_check_random(capsys):
    argv = ["check", "--count", "6", "--n", "10", "--k", "3", "--sigma", "2", "--partial", "--seed", "5"]
    assert main(argv) == EXIT_OK
    assert _lines(capsys)[-1] == "checked 6 instances, 0 disagreements"


def test_cli_check_file(fig1_file, capsys):
    assert main(["check", str(fig1_file)]) == EXIT_OK
    assert _lines(capsys)[0].startswith("ok bb??abb??ba? length=4")


def test_cli_gen_random_is_reproducible(tmp_path, capsys):
    argv = ["gen", "random", "--count", "4", "--n", "15", "--k", "3", "--sigma", "3", "--seed", "9"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    records = split_records(first)
    assert len(records) == 4
    assert all(record.startswith("#alphabet=abc\n") for record in records)
    assert [parse_istring(record) for record in records] == list(random_instances(9, 4, 15, 3, 3))
    out = tmp_path / "random.txt"
    assert main(argv + ["--out", str(out)]) == EXIT_OK
    assert out.read_text(encoding="utf-8") == first

    assert main(["check", str(out), "--no-oracle"]) == EXIT_OK
    assert len(_lines(capsys)) == 4
    assert main(["solve", str(out)]) == EXIT_INPUT


def test_cli_gen_random_file_solves_like_the_instance(tmp_path, capsys):
    out = tmp_path / "one.txt"
    argv = ["gen", "random", "--count", "1", "--n", "8", "--k", "4", "--sigma", "3", "--partial", "--seed", "7"]
    assert main(argv + ["--out", str(out)]) == EXIT_OK
    original = next(random_instances(7, 1, 8, 4, 3, True))
    assert parse_istring(out.read_text(encoding="utf-8")) == original

    assert main(["solve", str(out), "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    expected = solve(original).result
    assert (data["length"], data["witness"]) == (expected.length, expected.witness)
    assert data["sigma"] == 3


def test_cli_gen_sat(tmp_path, capsys):
    cnf = tmp_path / "example.cnf"
    cnf.write_text(EXAMPLE_CNF, encoding="utf-8")
    assert main(["gen", "sat", str(cnf)]) == EXIT_OK
    text_line, sidecar_line = _lines(capsys)
    assert len(text_line) == 457
    sidecar = json.loads(sidecar_line)
    assert (sidecar["p"], sidecar["m"], sidecar["d"], sidecar["length"]) == (5, 3, 23, 457)

    out = tmp_path / "example.txt"
    assert main(["gen", "sat", str(cnf), "--out", str(out)]) == EXIT_OK
    assert out.read_text(encoding="utf-8").strip() == text_line
    assert json.loads((tmp_path / "example.txt.json").read_text(encoding="utf-8")) == sidecar


def test_cli_gen_sat_rejects_tautology(tmp_path):
    cnf = tmp_path / "taut.cnf"
    cnf.write_text("p cnf 2 2\n1 -1 0\n2 0\n", encoding="utf-8")
    assert main(["gen", "sat", str(cnf)]) == EXIT_INPUT
    assert main(["gen", "sat", str(cnf), "--lenient"]) == EXIT_OK


def test_cli_reduce(tmp_path, capsys):
    cnf = tmp_path / "small.cnf"
    cnf.write_text("p cnf 2 2\n1 2 0\n-1 0\n", encoding="utf-8")
    assert main(["reduce", str(cnf), "--json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["passed"]
    assert report["satisfiable"]
    assert report["shortest_length"] == 11


def test_cli_bench_csv(capsys):
    assert main(["bench", "--suite", "small", "--algos", "simple", "fpt"]) == EXIT_OK
    lines = _lines(capsys)
    assert lines[0] == "n,k,sigma,algo,micros,length"
    assert len(lines) == 1 + 4 * 2
    assert {line.split(",")[3] for line in lines[1:]} == {"simple", "fpt"}


def test_cli_config(capsys):
    assert main(["config"]) == EXIT_OK
    assert "max_prefixes" in capsys.readouterr().out


# --- HTTP handlers --------------------------------------------------------------------

def test_http_solve_and_errors():
    from fastapi import HTTPException

    from app import SolveRequest, health, solve_endpoint

    body = asyncio.run(solve_endpoint(SolveRequest(text=FIG1, alphabet="ab")))
    assert (body["length"], body["witness"]) == (4, "bbaa")

    with pytest.raises(HTTPException) as excinfo:
        asyncio.run(solve_endpoint(SolveRequest(text="a[]b")))
    assert excinfo.value.status_code == 400

    with pytest.raises(HTTPException) as excinfo:
        asyncio.run(solve_endpoint(SolveRequest(text="a?b?a?b?a?b?a?b?a?b?", alphabet="ab",
                                                algorithm="simple", max_prefixes=1)))
    assert excinfo.value.status_code == 422

    assert asyncio.run(health())["status"] == "healthy"


def test_http_reduce():
    from app import ReduceRequest, reduce_endpoint

    body = asyncio.run(reduce_endpoint(ReduceRequest(dimacs="p cnf 1 1\n1 0\n", verify=True)))
    assert body["d"] == 7
    assert len(body["text"]) == body["length"]
    assert body["verification"]["passed"]


def test_disagreement_error_is_runtime_error():
    assert issubclass(SolverDisagreementError, RuntimeError)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
