"""Command line interface for cyclefree.

Results go to standard output as JSON lines; diagnostics go to standard
error.
"""

import logging
import sys
from pathlib import Path
from typing import Annotated

import orjson
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel

from cyclefree.const import DEFAULT_WORKERS, LOGGER, Family, TesterId
from cyclefree.exact import verify
from cyclefree.exceptions import (
    CycleFreeError,
    GraphFormatError,
    InfeasibleSpecError,
    ParameterError,
    UnsupportedSchemaError,
)
from cyclefree.generators import (
    FamilyRequest,
    generate,
    label_degrees,
    read_instance,
    write_instance,
)
from cyclefree.graph import PatternGraph, arboricity_bound, ell_of, read_edge_list
from cyclefree.harness import Experiment, fit_scaling, write_csv
from cyclefree.models import ExperimentSpec, TesterParams
from cyclefree.oracle import OracleSession
from cyclefree.testers import (
    disjoint_tuples,
    run_tester,
    select_edge_distribution,
    tuple_hitting_rate,
    tuple_hitting_sample_size,
)
from cyclefree.utils import derive_seed

from .async_typer import AsyncTyper

cli = AsyncTyper(
    help="Sublinear cycle-freeness testers",
    no_args_is_help=True,
    add_completion=False,
)
console = Console(stderr=True)


def _error_panel(title: str, error: Exception) -> None:
    console.print(Panel(str(error), expand=False, title=title, border_style="red bold"))
    sys.exit(1)


@cli.error_handler(CycleFreeError)
def cyclefree_error_handler(error: CycleFreeError) -> None:
    """Handle library errors."""
    _error_panel("Error", error)


@cli.error_handler(GraphFormatError)
def graph_format_error_handler(error: GraphFormatError) -> None:
    """Handle malformed edge lists."""
    _error_panel("Invalid edge list", error)


@cli.error_handler(InfeasibleSpecError)
def infeasible_error_handler(error: InfeasibleSpecError) -> None:
    """Handle instances that cannot be generated."""
    _error_panel("Infeasible instance", error)


@cli.error_handler(UnsupportedSchemaError)
def unsupported_schema_error_handler(error: UnsupportedSchemaError) -> None:
    """Handle payloads written with an unsupported schema."""
    _error_panel("Unsupported schema", error)


@cli.error_handler(OSError)
def os_error_handler(error: OSError) -> None:
    """Handle file errors."""
    _error_panel("File error", error)


@cli.error_handler(ValueError)
def value_error_handler(error: ValueError) -> None:
    """Handle invalid JSON payloads."""
    _error_panel("Invalid input", error)


def emit(payload: object) -> None:
    """Write one JSON line to standard output."""
    typer.echo(orjson.dumps(payload, option=orjson.OPT_SORT_KEYS).decode())


def _parse_value(text: str) -> int | float | str:
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            continue
    return text


def _parse_pairs(pairs: list[str], option: str) -> dict[str, str]:
    parsed: dict[str, str] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key or not value:
            msg = f"expected key=value, got {pair!r}"
            raise typer.BadParameter(msg, param_hint=option)
        parsed[key.strip()] = value.strip()
    return parsed


def _tester_params(eps: float, alpha: float, overrides: list[str]) -> TesterParams:
    values = _parse_pairs(overrides, "--override")
    try:
        return TesterParams(eps=eps, alpha=alpha).with_overrides(
            {key: float(value) for key, value in values.items()}
        )
    except (ParameterError, ValueError) as err:
        raise typer.BadParameter(str(err), param_hint="--override") from err


GraphOption = Annotated[
    Path,
    typer.Option("--graph", "-g", help="Edge-list file", show_default=False),
]
EpsOption = Annotated[float, typer.Option(help="Distance parameter in (0, 1]")]
AlphaOption = Annotated[float, typer.Option(help="Arboricity bound")]
SeedOption = Annotated[int, typer.Option(help="Seed of the tester randomness")]
OverrideOption = Annotated[
    list[str] | None,
    typer.Option(help="Tester constant override, key=value; repeatable"),
]


@cli.callback()
def main(
    verbose: Annotated[
        bool, typer.Option("--verbose", "-v", help="Log debug output to standard error")
    ] = False,
) -> None:
    """Test graphs for C_k-freeness with a sublinear number of queries."""
    if verbose:
        if not any(isinstance(handler, RichHandler) for handler in LOGGER.handlers):
            LOGGER.addHandler(RichHandler(console=console, show_path=False))
        LOGGER.setLevel(logging.DEBUG)


@cli.command("generate")
def command_generate(
    family: Annotated[Family, typer.Argument(help="Instance family")],
    n: Annotated[int, typer.Option("-n", help="Target number of vertices")],
    output: Annotated[
        Path,
        typer.Option(
            "--output", "-o", help="Edge-list file to write", show_default=False
        ),
    ],
    param: Annotated[
        list[str] | None,
        typer.Option("--param", "-p", help="Family parameter, key=value; repeatable"),
    ] = None,
    seed: SeedOption = 0,
    eps: Annotated[
        float, typer.Option(help="Distance parameter of the degree labels")
    ] = 0.1,
    alpha: AlphaOption = 2.0,
) -> None:
    """Generate an instance and write it with its JSON sidecar."""
    pairs = _parse_pairs(param or [], "--param")
    params = {key: _parse_value(value) for key, value in pairs.items()}
    request = FamilyRequest(family, n, params)
    instance = generate(request, seed)
    graph, metadata = instance.graph, instance.metadata
    metadata.labels = label_degrees(
        graph, TesterParams(eps=eps, alpha=alpha), request.tester()
    )
    write_instance(output, graph, metadata)
    emit({"path": str(output), "n": graph.n, "m": graph.m, **metadata.to_dict()})


@cli.command("test")
def command_test(  # noqa: PLR0913
    tester: Annotated[TesterId, typer.Argument(help="Tester to run")],
    graph_path: GraphOption,
    k: Annotated[
        int | None, typer.Option("-k", help="Cycle length of the odd cycle tester")
    ] = None,
    pattern: Annotated[
        str | None, typer.Option(help="Pattern of the general tester, for example K1,3")
    ] = None,
    eps: EpsOption = 0.1,
    alpha: AlphaOption = 2.0,
    override: OverrideOption = None,
    seed: SeedOption = 0,
    trials: Annotated[int, typer.Option(min=1, help="Independent runs")] = 1,
    budget: Annotated[
        int | None, typer.Option(min=1, help="Query budget per run")
    ] = None,
) -> None:
    """Run a tester on an edge list; with --trials, report the reject rate."""
    params = _tester_params(eps, alpha, override or [])
    graph, _ = read_instance(graph_path)
    shape = PatternGraph.parse(pattern) if pattern else None
    rejected = 0
    for trial in range(trials):
        session_seed = seed if trials == 1 else derive_seed(seed, graph.n, trial)
        session = OracleSession(graph, seed=session_seed, budget=budget)
        verdict = run_tester(
            tester, session, params, k=k, pattern=shape, m_hint=max(graph.m, 1)
        )
        rejected += verdict.rejected
        emit(verdict.to_dict())
    if trials > 1:
        emit(
            {
                "trials": trials,
                "reject_count": rejected,
                "reject_rate": rejected / trials,
            }
        )


@cli.command("experiment")
async def command_experiment(
    config: Annotated[
        Path,
        typer.Option(
            "--config", "-c", help="Experiment spec (JSON)", show_default=False
        ),
    ],
    output: Annotated[
        Path | None,
        typer.Option("--output", "-o", help="CSV file to write", show_default=False),
    ] = None,
    workers: Annotated[
        int, typer.Option(min=1, help="Worker threads")
    ] = DEFAULT_WORKERS,
) -> None:
    """Run an experiment spec and write its CSV."""
    spec = ExperimentSpec.from_json(config.read_bytes())
    async with Experiment(spec, workers=workers) as runner:
        rows = []
        for n in spec.n_sweep:
            row = await runner.run_point(n)
            rows.append(row)
            emit({**row.to_dict(), "reject_rate": row.reject_rate})
    target = output or (Path(spec.output) if spec.output else None)
    if target is not None:
        write_csv(rows, target)
    try:
        emit({"fit": fit_scaling(rows).to_dict()})
    except ParameterError:
        LOGGER.debug("Not enough sweep points for a scaling fit")


@cli.command("verify")
def command_verify(
    graph_path: GraphOption,
    k: Annotated[int, typer.Option("-k", help="Cycle length")],
) -> None:
    """Print the exact C_k count and distance sandwich of a graph."""
    emit(verify(read_edge_list(graph_path), k).to_dict())


@cli.command("ell")
def command_ell(
    pattern_file: Annotated[
        Path | None,
        typer.Option("--file", "-f", help="Pattern edge list", show_default=False),
    ] = None,
    name: Annotated[
        str | None, typer.Option("--name", help="Pattern name, for example C5")
    ] = None,
) -> None:
    """Print the vertex-cover quantity that sizes the general tester's sample."""
    if (pattern_file is None) == (name is None):
        msg = "give exactly one of --file and --name"
        raise typer.BadParameter(msg)
    if pattern_file is not None:
        pattern = PatternGraph.from_graph(read_edge_list(pattern_file))
    else:
        pattern = PatternGraph.parse(name or "")
    emit(ell_of(pattern))


@cli.command("arboricity")
def command_arboricity(graph_path: GraphOption) -> None:
    """Print the degeneracy bound and, on small graphs, the exact arboricity."""
    emit(arboricity_bound(read_edge_list(graph_path)).to_dict())


@cli.command("tuple-hitting")
def command_tuple_hitting(
    x_size: Annotated[int, typer.Option(min=1, help="Ground set size")] = 10_000,
    count: Annotated[
        int, typer.Option(min=1, help="Number of disjoint tuples")
    ] = 1_000,
    ell: Annotated[int, typer.Option(min=1, help="Tuple size")] = 2,
    trials: Annotated[int, typer.Option(min=1, help="Independent trials")] = 500,
    seed: SeedOption = 0,
) -> None:
    """Estimate how often a uniform sample covers a whole tuple."""
    s = tuple_hitting_sample_size(x_size, count, ell)
    tuples = disjoint_tuples(x_size, count, ell)
    rate = tuple_hitting_rate(x_size, tuples, s, trials, seed)
    emit(
        {
            "x_size": x_size,
            "count": count,
            "ell": ell,
            "s": s,
            "trials": trials,
            "rate": rate,
        }
    )


@cli.command("select-edge")
def command_select_edge(
    graph_path: GraphOption,
    eps: EpsOption = 0.1,
    alpha: AlphaOption = 2.0,
    draws: Annotated[
        int, typer.Option(min=1, help="Calls of the edge selector")
    ] = 10_000,
    seed: SeedOption = 0,
) -> None:
    """Summarize the edge distribution of the light-edge selector on a graph."""
    params = TesterParams(eps=eps, alpha=alpha)
    emit(select_edge_distribution(read_edge_list(graph_path), params, draws, seed))


if __name__ == "__main__":
    cli()
