"""Tests for the command line interface."""

from pathlib import Path

import orjson
import pytest
from typer.testing import CliRunner

from cyclefree.cli import cli
from cyclefree.const import Family, TesterId
from cyclefree.generators import gen_c4_lb_pair
from cyclefree.graph import Graph, write_edge_list
from cyclefree.models import ExperimentSpec, TesterParams
from cyclefree.testers import tuple_hitting_sample_size

runner = CliRunner()


def lines(output: str) -> list[object]:
    """Return the JSON lines of a command output."""
    return [orjson.loads(line) for line in output.splitlines() if line.strip()]


@pytest.fixture
def tree_file(tmp_path: Path) -> Path:
    """Return the path of a small tree."""
    path = tmp_path / "tree.txt"
    write_edge_list(path, Graph.from_edges(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]))
    return path


@pytest.fixture
def squares_file(tmp_path: Path) -> Path:
    """Return the path of two disjoint 4-cycles."""
    path = tmp_path / "squares.txt"
    square = [(0, 1), (1, 2), (2, 3), (3, 0)]
    edges = square + [(u + 4, v + 4) for u, v in square]
    write_edge_list(path, Graph.from_edges(8, edges))
    return path


@pytest.mark.parametrize(("name", "expected"), [("C4", 2), ("C5", 3), ("K1,3", 3)])
def test_ell_by_name(name: str, expected: int) -> None:
    """Test the vertex-cover quantity of named patterns."""
    result = runner.invoke(cli, ["ell", "--name", name])
    assert result.exit_code == 0
    assert lines(result.stdout) == [expected]


def test_ell_from_file(tmp_path: Path) -> None:
    """Test a pattern read from an edge list."""
    path = tmp_path / "triangle.txt"
    write_edge_list(path, Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)]))
    result = runner.invoke(cli, ["ell", "--file", str(path)])
    assert result.exit_code == 0
    assert lines(result.stdout) == [2]


def test_ell_needs_one_source(tree_file: Path) -> None:
    """Test --file and --name are mutually exclusive and one is required."""
    assert runner.invoke(cli, ["ell"]).exit_code == 2
    result = runner.invoke(cli, ["ell", "--name", "C4", "--file", str(tree_file)])
    assert result.exit_code == 2


def test_ell_unknown_pattern() -> None:
    """Test an unknown pattern name is a library error."""
    assert runner.invoke(cli, ["ell", "--name", "Q7"]).exit_code == 1


def test_verify(squares_file: Path) -> None:
    """Test the exact count and sandwich of two squares."""
    result = runner.invoke(cli, ["verify", "-g", str(squares_file), "-k", "4"])
    assert result.exit_code == 0
    assert lines(result.stdout) == [
        {"k": 4, "count": 2, "greedy_size": 2, "lower": 0.25, "upper": 1.0}
    ]


def test_verify_free_lower_bound_graph(tmp_path: Path) -> None:
    """Test the free member of the C4 pair has no C4."""
    path = tmp_path / "g0.txt"
    write_edge_list(path, gen_c4_lb_pair(13).g0)
    result = runner.invoke(cli, ["verify", "-g", str(path), "-k", "4"])
    assert result.exit_code == 0
    (report,) = lines(result.stdout)
    assert isinstance(report, dict)
    assert (report["count"], report["upper"]) == (0, 0.0)


def test_malformed_edge_list(tmp_path: Path) -> None:
    """Test a malformed edge list exits with status 1."""
    path = tmp_path / "bad.txt"
    path.write_text("3 1\n0\n")
    assert runner.invoke(cli, ["verify", "-g", str(path), "-k", "4"]).exit_code == 1
    path.write_text("3 1\n0 0\n")
    assert runner.invoke(cli, ["arboricity", "-g", str(path)]).exit_code == 1


def test_missing_file(tmp_path: Path) -> None:
    """Test a missing file exits with status 1."""
    result = runner.invoke(cli, ["verify", "-g", str(tmp_path / "nope"), "-k", "4"])
    assert result.exit_code == 1


def test_tester_accepts_tree(tree_file: Path) -> None:
    """Test a C4 run on a tree accepts."""
    result = runner.invoke(
        cli,
        ["test", "c4", "-g", str(tree_file), "--eps", "0.5"]
        + ["--override", "t_mult=20", "--seed", "3"],
    )
    assert result.exit_code == 0
    (verdict,) = lines(result.stdout)
    assert isinstance(verdict, dict)
    assert verdict["verdict"] == "accept"
    assert verdict["seed"] == 3


def test_tester_trials(squares_file: Path) -> None:
    """Test repeated runs report the reject rate last."""
    result = runner.invoke(
        cli,
        ["test", "ck-odd", "-g", str(squares_file), "-k", "5"]
        + ["--eps", "1", "--trials", "3"],
    )
    assert result.exit_code == 0
    *verdicts, summary = lines(result.stdout)
    assert len(verdicts) == 3
    assert summary == {"trials": 3, "reject_count": 0, "reject_rate": 0.0}
    assert [(v["seed"], v["spawn_key"]) for v in verdicts] == [
        (0, [8, 1, trial]) for trial in range(3)
    ]


@pytest.mark.parametrize("override", ["t_mult", "bogus=1", "t_mult=-2", "t_mult=x"])
def test_bad_override(tree_file: Path, override: str) -> None:
    """Test invalid overrides are usage errors."""
    result = runner.invoke(
        cli, ["test", "c4", "-g", str(tree_file), "--override", override]
    )
    assert result.exit_code == 2


def test_generate(tmp_path: Path) -> None:
    """Test an instance is written with its sidecar."""
    output = tmp_path / "forest.txt"
    result = runner.invoke(
        cli, ["generate", "forest", "-n", "20", "-o", str(output), "--seed", "1"]
    )
    assert result.exit_code == 0
    (payload,) = lines(result.stdout)
    assert isinstance(payload, dict)
    assert payload["n"] == 20
    assert payload["m"] == 19
    assert payload["family"] == "forest"
    assert output.read_text().startswith("20 19\n")
    sidecar = orjson.loads(Path(f"{output}.json").read_bytes())
    assert sidecar["seed"] == 1
    assert sidecar["labels"]["light"] == 20


@pytest.mark.parametrize(
    ("family", "params", "tester"),
    [
        ("disjoint-cycles", ["k=6"], TesterId.C6),
        ("disjoint-cycles", ["k=4"], TesterId.C4),
        ("c5-lb-g1", [], TesterId.C5),
    ],
)
def test_generate_labels_match_family(
    tmp_path: Path, family: str, params: list[str], tester: TesterId
) -> None:
    """Test the sidecar labels use the thresholds of the family's tester."""
    output = tmp_path / "instance.txt"
    args = ["generate", family, "-n", "60", "-o", str(output), "--eps", "0.5"]
    for param in params:
        args += ["-p", param]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0
    labels = orjson.loads(Path(f"{output}.json").read_bytes())["labels"]
    expected = TesterParams(eps=0.5).thresholds(60, tester)
    assert labels["theta1"] == pytest.approx(expected.theta1)
    assert labels["theta0"] == pytest.approx(expected.theta0)


def test_generate_infeasible(tmp_path: Path) -> None:
    """Test an infeasible family size exits with status 1."""
    output = tmp_path / "c4.txt"
    result = runner.invoke(
        cli, ["generate", "c4-lb-g0", "-n", "12", "-o", str(output)]
    )
    assert result.exit_code == 1
    assert not output.exists()


def test_generate_bad_param(tmp_path: Path) -> None:
    """Test a family parameter without a value is a usage error."""
    output = tmp_path / "x.txt"
    result = runner.invoke(
        cli, ["generate", "forest", "-n", "5", "-o", str(output), "-p", "trees"]
    )
    assert result.exit_code == 2


def test_arboricity(squares_file: Path) -> None:
    """Test the degeneracy and exact arboricity of two squares."""
    result = runner.invoke(cli, ["arboricity", "-g", str(squares_file)])
    assert result.exit_code == 0
    assert lines(result.stdout) == [{"degeneracy": 2, "exact_nash_williams": 2}]


def test_tuple_hitting() -> None:
    """Test the tuple hitting experiment reports its sample size and rate."""
    result = runner.invoke(
        cli,
        ["tuple-hitting", "--x-size", "1000", "--count", "100", "--trials", "20"],
    )
    assert result.exit_code == 0
    (payload,) = lines(result.stdout)
    assert isinstance(payload, dict)
    assert payload["s"] == tuple_hitting_sample_size(1000, 100, 2)
    assert 0.0 <= payload["rate"] <= 1.0


def test_select_edge(tmp_path: Path) -> None:
    """Test the selector summary on a perfect matching."""
    path = tmp_path / "matching.txt"
    write_edge_list(path, Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)]))
    result = runner.invoke(
        cli, ["select-edge", "-g", str(path), "--eps", "1", "--draws", "2000"]
    )
    assert result.exit_code == 0
    (payload,) = lines(result.stdout)
    assert isinstance(payload, dict)
    assert payload["m_low"] == 3
    assert 0.0 < payload["success_rate"] <= 1.0


def test_experiment(tmp_path: Path) -> None:
    """Test an experiment writes its CSV and a scaling fit."""
    config = tmp_path / "spec.json"
    output = tmp_path / "rows.csv"
    spec = ExperimentSpec(
        tester=TesterId.C4,
        family=Family.FOREST,
        n_sweep=(64, 256),
        eps=0.5,
        overrides={"t_mult": 20.0},
        trials=3,
        master_seed=5,
    )
    config.write_text(spec.to_json())
    result = runner.invoke(
        cli, ["experiment", "-c", str(config), "-o", str(output), "--workers", "2"]
    )
    assert result.exit_code == 0
    first, second, fit = lines(result.stdout)
    assert isinstance(first, dict)
    assert isinstance(second, dict)
    assert (first["n"], second["n"]) == (64, 256)
    assert first["reject_count"] == 0
    assert isinstance(fit, dict)
    assert fit["fit"]["points"] == 2
    assert output.read_text().count("\n") == 3


def test_experiment_old_schema(tmp_path: Path) -> None:
    """Test a spec from an unsupported schema exits with status 1."""
    config = tmp_path / "spec.json"
    payload = ExperimentSpec(
        tester=TesterId.C4, family=Family.FOREST, n_sweep=(64,), eps=0.5
    ).to_dict()
    payload["schema_version"] = "0.9"
    config.write_bytes(orjson.dumps(payload))
    assert runner.invoke(cli, ["experiment", "-c", str(config)]).exit_code == 1
