"""Tests for the query oracle."""

import numpy as np
import pytest

from cyclefree.exceptions import QueryBudgetExhaustedError, QueryError
from cyclefree.graph import Graph
from cyclefree.models import QueryStats
from cyclefree.oracle import ExploredGraph, OracleSession, replay
from cyclefree.utils import derive_seed


@pytest.fixture
def graph() -> Graph:
    """Return a small graph: a 4-cycle with a pendant vertex and an isolated one."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])


def test_queries_are_counted(graph: Graph) -> None:
    """Test each query type increments its own counter."""
    session = OracleSession(graph, seed=1)
    assert session.degree(0) == 3
    assert session.degree(0) == 3
    assert session.neighbor(0, 3) == 4
    assert session.pair(1, 3) is False
    assert session.pair(3, 2) is True
    assert session.stats() == QueryStats(degree=2, neighbor=1, pair=2)
    assert session.total == 5


def test_stats_serialization() -> None:
    """Test the total is derived and survives a round trip."""
    stats = QueryStats(degree=2, neighbor=5, pair=1, wall_time=0.5)
    payload = stats.to_dict()
    assert payload["total"] == 8
    assert QueryStats.from_dict(payload) == stats


def test_contract_violations(graph: Graph) -> None:
    """Test invalid queries raise QueryError without being charged."""
    session = OracleSession(graph)
    with pytest.raises(QueryError):
        session.degree(6)
    with pytest.raises(QueryError):
        session.degree(-1)
    with pytest.raises(QueryError):
        session.neighbor(4, 2)
    with pytest.raises(QueryError):
        session.neighbor(0, 0)
    with pytest.raises(QueryError):
        session.pair(2, 2)
    with pytest.raises(QueryError):
        session.random_neighbor(5)
    assert session.neighbor_queries == 0
    assert session.pair_queries == 0


def test_budget(graph: Graph) -> None:
    """Test the budget stops the session at the first query beyond it."""
    session = OracleSession(graph, budget=2)
    session.degree(0)
    session.neighbor(0, 1)
    with pytest.raises(QueryBudgetExhaustedError):
        session.pair(0, 1)
    assert session.total == 2


def test_capped(graph: Graph) -> None:
    """Test a cap applies inside its block only."""
    session = OracleSession(graph)
    session.degree(0)
    with session.capped(1):
        session.degree(1)
        with pytest.raises(QueryBudgetExhaustedError):
            session.degree(2)
    assert session.budget is None
    session.degree(2)
    assert session.total == 3


def test_capped_keeps_tighter_budget(graph: Graph) -> None:
    """Test a cap never loosens an existing budget."""
    session = OracleSession(graph, budget=2)
    with session.capped(10):
        assert session.budget == 2
    assert session.budget == 2


def test_explored_graph(graph: Graph) -> None:
    """Test revealed degrees and edges are recorded."""
    session = OracleSession(graph)
    session.degree(1)
    session.neighbor(1, 2)
    session.pair(0, 2)
    session.pair(0, 3)
    explored = session.explored
    assert explored.degrees == {1: 2}
    assert explored.edges() == [(0, 3), (1, 2)]
    assert explored.drain() == [(1, 2), (0, 3)]
    assert explored.drain() == []
    assert explored.m == 2


def test_explored_graph_ignores_repeats() -> None:
    """Test an edge is recorded once whatever its orientation."""
    explored = ExploredGraph()
    assert explored.add_edge(3, 1)
    assert not explored.add_edge(1, 3)
    explored.add_path([1, 3, 5])
    assert explored.m == 2
    assert explored.has_edge(5, 3)
    assert explored.neighbors(3) == {1, 5}
    assert explored.n == 3


def test_sample_neighbors(graph: Graph) -> None:
    """Test distinct neighbor samples."""
    session = OracleSession(graph, seed=3)
    assert session.sample_neighbors(0, 5, 3) == [1, 3, 4]
    sample = session.sample_neighbors(0, 2, 3)
    assert len(sample) == len(set(sample)) == 2
    assert set(sample) <= {1, 3, 4}
    assert session.neighbor_queries == 5


def test_random_neighbor_queries_degree(graph: Graph) -> None:
    """Test a random neighbor of an unseen vertex costs a degree query."""
    session = OracleSession(graph, seed=0)
    assert session.random_neighbor(2) in {1, 3}
    assert session.degree_queries == 1
    session.random_neighbor(2)
    assert session.degree_queries == 1
    assert session.neighbor_queries == 2


def test_same_seed_same_answers(graph: Graph) -> None:
    """Test a session is a deterministic function of graph and seed."""
    first = OracleSession(graph, seed=11)
    second = OracleSession(graph, seed=11)
    draws = [(first.random_neighbor(0), first.uniform_vertex()) for _ in range(20)]
    again = [(second.random_neighbor(0), second.uniform_vertex()) for _ in range(20)]
    assert draws == again


def test_session_seed() -> None:
    """Test integer seeds and derived seed sequences are recorded."""
    graph = Graph.from_edges(2, [(0, 1)])
    session = OracleSession(graph, seed=5)
    assert (session.seed, session.spawn_key) == (5, None)
    derived = OracleSession(graph, seed=derive_seed(7, 64, 3))
    assert (derived.seed, derived.spawn_key) == (7, (64, 1, 3))
    plain = OracleSession(graph, seed=np.random.SeedSequence(5))
    assert (plain.seed, plain.spawn_key) == (5, ())
    assert OracleSession(graph, seed=np.random.SeedSequence()).seed is None


def test_derived_seed_reproduces_session(graph: Graph) -> None:
    """Test the recorded seed and spawn key rebuild the same random stream."""
    first = OracleSession(graph, seed=derive_seed(4, 6, 2))
    assert first.seed is not None
    assert first.spawn_key is not None
    rebuilt = np.random.SeedSequence(first.seed, spawn_key=first.spawn_key)
    second = OracleSession(graph, seed=rebuilt)
    assert [first.uniform_vertex() for _ in range(10)] == [
        second.uniform_vertex() for _ in range(10)
    ]


def test_rng_helpers(graph: Graph) -> None:
    """Test the random helpers stay in range."""
    session = OracleSession(graph, seed=2)
    assert all(0 <= session.uniform_vertex() < graph.n for _ in range(50))
    assert all(1 <= session.uniform_index(4) <= 4 for _ in range(50))
    assert not any(session.coin(0.0) for _ in range(50))
    assert all(session.coin(1.0) for _ in range(50))


def test_transcript_and_replay(graph: Graph) -> None:
    """Test a transcript replays cleanly on the same graph only."""
    session = OracleSession(graph, seed=4, record_transcript=True)
    session.degree(0)
    session.neighbor(0, 2)
    session.pair(1, 3)
    session.pair(0, 4)
    assert session.transcript == [
        "D 0 -> 3",
        "N 0 2 -> 3",
        "P 1 3 -> 0",
        "P 0 4 -> 1",
    ]
    assert replay(session.transcript, OracleSession(graph)) == []

    other = Graph.from_edges(6, [(0, 1), (0, 4), (0, 3), (1, 3), (2, 5)])
    mismatches = replay(session.transcript, OracleSession(other))
    assert mismatches == ["N 0 2 -> 3", "P 1 3 -> 0"]


def test_replay_flags_bad_lines(graph: Graph) -> None:
    """Test unparsable lines and invalid queries are reported."""
    lines = ["X 1", "N 4 3 -> 0"]
    assert replay(lines, OracleSession(graph)) == lines
