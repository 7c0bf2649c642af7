"""Sublinear one-sided-error testers for cycle-freeness in bounded-arboricity graphs."""

from .const import Family, PlantedProfile, TesterId, VerdictKind
from .exceptions import (
    CycleFreeError,
    GraphFormatError,
    InfeasibleSpecError,
    ParameterError,
    QueryBudgetExhaustedError,
    QueryError,
    SizeLimitError,
    TesterAbort,
)
from .graph import Graph, PatternGraph, ell_of, load_edge_list, save_edge_list
from .harness import Experiment, fit_scaling, run_experiment, write_csv
from .models import (
    DisjointCycleSet,
    DistanceBounds,
    ExperimentRow,
    ExperimentSpec,
    PlantedSpec,
    QueryStats,
    TesterParams,
    Verdict,
)
from .oracle import OracleSession
from .subdivision import SubdividedOracle, subdivide_for_ck, subdivided_session
from .testers import run_tester

__all__ = [
    "CycleFreeError",
    "DisjointCycleSet",
    "DistanceBounds",
    "Experiment",
    "ExperimentRow",
    "ExperimentSpec",
    "Family",
    "Graph",
    "GraphFormatError",
    "InfeasibleSpecError",
    "OracleSession",
    "ParameterError",
    "PatternGraph",
    "PlantedProfile",
    "PlantedSpec",
    "QueryBudgetExhaustedError",
    "QueryError",
    "QueryStats",
    "SizeLimitError",
    "SubdividedOracle",
    "TesterAbort",
    "TesterId",
    "TesterParams",
    "Verdict",
    "VerdictKind",
    "ell_of",
    "fit_scaling",
    "load_edge_list",
    "run_experiment",
    "run_tester",
    "save_edge_list",
    "subdivide_for_ck",
    "subdivided_session",
    "write_csv",
]
