import os
from pathlib import Path

import pytest

from heatgraph import cli, spectral

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

CASES = {
    "bessel_vanishing": ["bessel", "--n", "5", "--t", "3", "--c", "1"],
    "bessel_surd": ["bessel", "--n", "1", "--t", "3", "--q", "2"],
    "bessel_negative_c": ["bessel", "--n", "2", "--t", "6", "--c=-1/2"],
    "tree_kernel": ["tree-kernel", "--q", "2", "--rmax", "4", "--tmax", "5"],
    "graph_kernel_petersen": ["graph-kernel", "--graph", str(DATA / "petersen.json"), "--basepoint", "0", "--tmax", "6"],
    "graph_kernel_random": ["graph-kernel", "--graph", "random_regular:12:4:1", "--tmax", "8"],
    "trace_check_petersen": ["trace-check", "--graph", str(DATA / "petersen.json"), "--tmax", "12"],
    "trace_check_hypercube": ["trace-check", "--graph", "hypercube:3", "--tmax", "6"],
    "general_trace_geometric": ["general-trace", "--graph", "petersen", "--coefficients", str(DATA / "geometric.json")],
    "general_trace_point_mass": ["general-trace", "--graph", "complete:4", "--coefficients", str(DATA / "point_mass3.json"), "--nodes", "1024"],
    "count_geodesics_petersen": ["count-geodesics", "--graph", str(DATA / "petersen.json"), "--mmax", "5"],
    "count_geodesics_circulant": ["count-geodesics", "--graph", "circulant:10:1,2", "--mmax", "8"],
    "random_walk": ["random-walk", "--graph", "petersen", "--tmax", "6", "--trials", "20000", "--seed", "7"],
    "halfline": ["halfline", "--alpha", "0.3", "--beta", "0.2", "--tmax", "4"],
    "generate_cycle": ["generate", "--family", "cycle", "--n", "6"],
    "generate_random": ["generate", "--family", "random_regular", "--n", "8", "--degree", "3", "--seed", "2"],
}


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_output(name, capsys):
    code, out, _ = run(CASES[name], capsys)
    assert code == 0
    # paths differ between machines; golden files store them relative to the data dir
    out = out.replace(str(DATA), "<data>")
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_text(out)
    assert out == path.read_text()


def test_output_is_reproducible(capsys):
    first = run(CASES["random_walk"], capsys)
    second = run(CASES["random_walk"], capsys)
    assert first == second


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "g.json"
    code, out, _ = run(["generate", "--family", "complete", "--n", "4", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    code, out, _ = run(["count-geodesics", "--graph", str(target), "--mmax", "3"], capsys)
    assert code == 0 and '"agree": true' in out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bessel", "--n", "1"],
        ["bessel", "--n", "1", "--t", "2"],
        ["bessel", "--n", "1", "--t", "2", "--c", "1", "--q", "2"],
        ["trace-check", "--graph", "dodecahedron", "--tmax", "3"],
        ["trace-check", "--graph", str(DATA / "bad_degree.json"), "--tmax", "3"],
        ["trace-check", "--graph", "petersen", "--tmax", "-1"],
        ["general-trace", "--graph", "petersen", "--coefficients", str(DATA / "geometric_quarter.json")],
        ["generate", "--family", "cycle"],
        ["generate", "--family", "random_regular", "--n", "7", "--degree", "3", "--seed", "0"],
        ["random-walk", "--graph", "petersen", "--tmax", "3", "--trials", "10"],
        ["halfline", "--alpha", "0.6", "--beta", "0.5", "--tmax", "3"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    code = None
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert capsys.readouterr().err


def test_regularity_error_message_names_vertex(capsys):
    code, _, err = run(["trace-check", "--graph", str(DATA / "bad_degree.json"), "--tmax", "2"], capsys)
    assert code == 1 and "vertex 2" in err


def test_validation_failure_exits_two(monkeypatch, capsys):
    real = spectral.trace_formula_check

    def broken(graph, t_max):
        report = real(graph, t_max)
        t, lhs, rhs = report.rows[-1]
        report.rows[-1] = (t, lhs, rhs + 1)
        return report

    monkeypatch.setattr(spectral, "trace_formula_check", broken)
    code, out, _ = run(["trace-check", "--graph", "complete:4", "--tmax", "3"], capsys)
    assert code == 2
    assert '"first_failure": 3' in out and '"passed": false' in out
