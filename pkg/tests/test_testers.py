"""Tests for the testers."""

from collections import Counter

import pytest

from cyclefree import testers
from cyclefree.const import PlantedProfile, TesterId, VerdictKind
from cyclefree.exact import bounds_from_set, count_cycles
from cyclefree.exceptions import ParameterError
from cyclefree.generators import (
    gen_c4_lb_pair,
    gen_c5_lb_pair,
    gen_disjoint_cycles,
    gen_forest,
    gen_high_girth,
    gen_lines_points,
    gen_planted,
    gen_regular_tripartite,
    gen_star_forest,
)
from cyclefree.graph import Graph, PatternGraph, edge_key
from cyclefree.models import DisjointCycleSet, PlantedSpec, TesterParams
from cyclefree.oracle import OracleSession
from cyclefree.subdivision import subdivided_session
from cyclefree.utils import derive_seed
from cyclefree.witness import is_valid_witness

FAST = TesterParams(eps=0.5, t_mult=20.0)


def complete_bipartite(a: int, b: int) -> Graph:
    """Return K_{a,b} with the a side first."""
    return Graph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])


@pytest.mark.parametrize(
    ("tester", "kwargs"),
    [
        (TesterId.C4, {}),
        (TesterId.C5, {}),
        (TesterId.C6, {}),
        (TesterId.F, {"pattern": PatternGraph.cycle(4)}),
        (TesterId.CK_ODD, {"k": 5}),
    ],
)
@pytest.mark.parametrize("seed", range(3))
def test_forests_are_accepted(
    tester: TesterId, kwargs: dict[str, object], seed: int
) -> None:
    """Test no tester rejects a forest."""
    forest = gen_forest(150, seed=seed, trees=3)
    verdict = testers.run_tester(
        tester, OracleSession(forest, seed=seed), FAST, m_hint=forest.m, **kwargs
    )
    assert verdict.verdict is VerdictKind.ACCEPT
    assert verdict.witness is None
    assert verdict.tester == tester


@pytest.mark.parametrize("seed", range(5))
def test_c4_accepts_free_pair_member(seed: int) -> None:
    """Test the C4-free member of the lower-bound pair is always accepted."""
    graph = gen_c4_lb_pair(200).g0
    verdict = testers.test_c4(OracleSession(graph, seed=seed), FAST)
    assert verdict.verdict is VerdictKind.ACCEPT
    assert verdict.queries.total <= testers.c4_query_bound(graph.n, FAST)


@pytest.mark.parametrize("seed", range(5))
def test_c5_accepts_free_pair_member(seed: int) -> None:
    """Test the C5-free member of the lower-bound pair is always accepted."""
    verdict = testers.test_c5(OracleSession(gen_c5_lb_pair(100).g0, seed=seed), FAST)
    assert verdict.verdict is VerdictKind.ACCEPT


def test_c6_accepts_high_girth() -> None:
    """Test a graph of girth 12 is accepted by the C6 tester."""
    graph = gen_high_girth(gen_lines_points(3))
    verdict = testers.test_c6(OracleSession(graph, seed=1), FAST)
    assert verdict.verdict is VerdictKind.ACCEPT


@pytest.mark.parametrize("seed", range(3))
def test_c4_rejects_disjoint_cycles(seed: int) -> None:
    """Test the C4 tester finds a C4 in disjoint C4s."""
    graph, _ = gen_disjoint_cycles(50, 4)
    session = OracleSession(graph, seed=seed)
    verdict = testers.test_c4(session, FAST)
    assert verdict.rejected
    assert verdict.witness is not None
    assert is_valid_witness(session.explored, PatternGraph.cycle(4), verdict.witness)
    assert verdict.queries.total <= testers.c4_query_bound(graph.n, FAST)


def test_c4_rejects_through_heavy_vertices() -> None:
    """Test K_{2,100}, whose two hubs are above theta1."""
    graph = complete_bipartite(2, 100)
    verdict = testers.test_c4(OracleSession(graph, seed=4), FAST)
    assert verdict.rejected
    assert verdict.witness is not None
    assert {0, 1} <= set(verdict.witness)


@pytest.mark.parametrize("seed", range(3))
def test_c5_rejects_disjoint_cycles(seed: int) -> None:
    """Test the C5 tester finds a C5 in disjoint C5s."""
    graph, _ = gen_disjoint_cycles(40, 5)
    verdict = testers.test_c5(OracleSession(graph, seed=seed), FAST)
    assert verdict.rejected


@pytest.mark.parametrize("seed", range(3))
def test_c6_rejects_disjoint_cycles(seed: int) -> None:
    """Test the C6 tester finds a C6 in disjoint C6s."""
    graph, _ = gen_disjoint_cycles(20, 6)
    verdict = testers.test_c6(OracleSession(graph, seed=seed), FAST)
    assert verdict.rejected
    assert verdict.witness is not None
    assert len(verdict.witness) == 6


def test_c6_repetitions() -> None:
    """Test t = ceil(c6_t_mult * ln^3(n) / eps^3)."""
    params = TesterParams(eps=0.5, c6_t_mult=1.0)
    assert testers.c6_repetitions(1, params) == 8
    assert testers.c6_repetitions(100, params) == 782


def test_f_general_finds_stars() -> None:
    """Test the general tester finds a K_{1,3} in a star forest."""
    graph = gen_star_forest(20, 3)
    session = OracleSession(graph, seed=0)
    verdict = testers.test_f_general(session, PatternGraph.star(3), FAST, graph.m)
    assert verdict.rejected
    assert verdict.witness is not None
    assert is_valid_witness(session.explored, PatternGraph.star(3), verdict.witness)


def test_f_general_accepts_paths_for_stars() -> None:
    """Test a union of paths has no K_{1,3}."""
    graph = Graph.from_edges(90, [(v, v + 1) for v in range(89) if v % 3 != 2])
    verdict = testers.test_f_general(
        OracleSession(graph, seed=0), PatternGraph.star(3), FAST, graph.m
    )
    assert verdict.verdict is VerdictKind.ACCEPT


def test_f_sample_size_grows_with_m() -> None:
    """Test s grows like m^(1 - 1/ell)."""
    pattern = PatternGraph.cycle(4)
    small = testers.f_sample_size(10_000, pattern, FAST, 10_000)
    large = testers.f_sample_size(10_000, pattern, FAST, 40_000)
    assert large == pytest.approx(2 * small, rel=0.01)


@pytest.mark.parametrize("k", [3, 5])
def test_ck_odd_rejects_disjoint_cycles(k: int) -> None:
    """Test the odd cycle tester on disjoint odd cycles."""
    graph, _ = gen_disjoint_cycles(100 // k, k)
    verdict = testers.test_ck_odd(OracleSession(graph, seed=k), k, FAST, graph.m)
    assert verdict.rejected
    assert verdict.witness is not None
    assert len(verdict.witness) == k


def test_ck_odd_sizes() -> None:
    """Test the vertex sample only exists for k > 3."""
    assert testers.ck_odd_sizes(1000, 3, FAST, 1000)[1] == 0
    s1, s2 = testers.ck_odd_sizes(1000, 5, FAST, 1000)
    assert s1 > 0
    assert s2 > 0


@pytest.mark.parametrize("k", [2, 4, 6])
def test_ck_odd_needs_odd_k(k: int) -> None:
    """Test even k is refused."""
    graph = gen_forest(10, seed=0)
    with pytest.raises(ParameterError):
        testers.test_ck_odd(OracleSession(graph), k, FAST, graph.m)


def test_run_tester_arguments() -> None:
    """Test missing arguments are refused."""
    graph = gen_forest(10, seed=0)
    session = OracleSession(graph)
    with pytest.raises(ParameterError):
        testers.run_tester(TesterId.F, session, FAST)
    with pytest.raises(ParameterError):
        testers.run_tester(TesterId.F, session, FAST, m_hint=graph.m)
    with pytest.raises(ParameterError):
        testers.run_tester(TesterId.CK_ODD, session, FAST, m_hint=graph.m)


def test_budget_ends_with_accept() -> None:
    """Test an exhausted budget is an aborted Accept."""
    verdict = testers.test_c4(OracleSession(gen_forest(50, seed=0), budget=5), FAST)
    assert verdict.verdict is VerdictKind.ACCEPT
    assert verdict.aborted
    assert verdict.queries.total == 5


def test_budget_keeps_found_witness() -> None:
    """Test a witness already explored survives an exhausted budget."""
    graph, _ = gen_disjoint_cycles(50, 4)
    unlimited = testers.test_c4(OracleSession(graph, seed=2), FAST)
    budget = unlimited.queries.total
    verdict = testers.test_c4(OracleSession(graph, seed=2, budget=budget), FAST)
    assert verdict.rejected
    assert not verdict.aborted


def test_same_seed_same_run() -> None:
    """Test a run is a deterministic function of graph, params and seed."""
    graph = complete_bipartite(2, 100)
    first = testers.test_c4(OracleSession(graph, seed=9), FAST)
    second = testers.test_c4(OracleSession(graph, seed=9), FAST)
    assert first.witness == second.witness
    assert first.queries.total == second.queries.total
    assert first.seed == second.seed == 9


def test_c6_through_subdivided_oracle() -> None:
    """Test C6 witnesses found through the subdivision oracle are real cycles."""
    base, parts = gen_regular_tripartite(40, 4, seed=3)
    oracle = subdivided_session(OracleSession(base, seed=3), 6, parts, seed=3)
    verdict = testers.test_c6(oracle, FAST)
    if count_cycles(base, 3) == 0:
        assert verdict.verdict is VerdictKind.ACCEPT
    if verdict.witness is not None:
        graph = oracle.materialize()
        cycle = verdict.witness
        assert all(graph.has_edge(cycle[i - 1], cycle[i]) for i in range(6))


def test_select_an_edge_starts_light() -> None:
    """Test the selected edge starts at a light vertex."""
    graph = complete_bipartite(2, 100)
    session = OracleSession(graph, seed=1)
    for _ in range(20):
        edge = testers.select_an_edge(session, FAST)
        assert edge is not None
        assert graph.degree(edge[0]) <= FAST.theta0
        assert graph.has_edge(*edge)


def test_select_edges_without_light_vertices() -> None:
    """Test both selectors fail on a graph without light vertices."""
    clique = Graph.from_edges(10, [(u, v) for u in range(10) for v in range(u + 1, 10)])
    params = TesterParams(eps=1.0, alpha=1.0)
    session = OracleSession(clique, seed=0)
    assert testers.select_an_edge(session, params) is None
    assert testers.select_uniform_edge_low(session, params.theta0, 100) is None


def test_select_uniform_edge_low() -> None:
    """Test the uniform sampler returns low edges starting at a light vertex."""
    graph = complete_bipartite(2, 100)
    session = OracleSession(graph, seed=5)
    for _ in range(20):
        edge = testers.select_uniform_edge_low(session, FAST.theta0, 10_000)
        assert edge is not None
        assert edge[0] >= 2
        assert graph.has_edge(*edge)


def test_select_edge_distribution() -> None:
    """Test Select-an-Edge is close to uniform over low edges."""
    graph = gen_star_forest(3, 10)
    summary = testers.select_edge_distribution(
        graph, TesterParams(eps=1.0, alpha=1.0), draws=3000, seed=1
    )
    assert summary["m_low"] == 30
    assert summary["success_rate"] > 0.9
    assert 0.5 < summary["min"] <= summary["max"] < 1.5


def test_low_edges() -> None:
    """Test edges with a light endpoint."""
    graph = complete_bipartite(2, 3)
    assert testers.low_edges(graph, 2.0) == list(graph.edge_list)
    assert testers.low_edges(graph, 1.0) == []


def test_tuple_hitting() -> None:
    """Test the tuple-hitting sample size and rate."""
    assert testers.tuple_hitting_sample_size(10_000, 1_000, 2) == 10_120
    tuples = testers.disjoint_tuples(10_000, 1_000, 2)
    assert tuples.shape == (1_000, 2)
    assert tuples[1].tolist() == [2, 3]
    rate = testers.tuple_hitting_rate(10_000, tuples, 10_120, trials=50, seed=0)
    assert rate >= 2 / 3
    assert testers.tuple_hitting_rate(10_000, tuples, 0, trials=5, seed=0) == 0.0
    with pytest.raises(ParameterError):
        testers.disjoint_tuples(10, 6, 2)


def test_tester_pattern() -> None:
    """Test the pattern each tester looks for."""
    assert testers.tester_pattern(TesterId.C5) == PatternGraph.cycle(5)
    assert testers.tester_pattern(TesterId.CK_ODD, k=7) == PatternGraph.cycle(7)
    star = PatternGraph.star(3)
    assert testers.tester_pattern(TesterId.F, pattern=star) == star


def test_select_uniform_edge_low_mixed_degrees() -> None:
    """Test light-light and light-heavy edges are drawn equally often."""
    square = complete_bipartite(2, 30)
    ring = [(32 + i, 32 + (i + 1) % 10) for i in range(10)]
    graph = Graph.from_edges(42, list(square.edge_list) + ring)
    session = OracleSession(graph, seed=8)
    theta0 = TesterParams(eps=1.0, alpha=2.0).theta0
    counts: Counter[tuple[int, int]] = Counter()
    for _ in range(7000):
        edge = testers.select_uniform_edge_low(session, theta0, 10_000)
        assert edge is not None
        assert graph.degree(edge[0]) <= theta0
        counts[edge_key(*edge)] += 1
    assert set(counts) == set(testers.low_edges(graph, theta0))
    assert len(counts) == 70
    assert all(50 <= count <= 150 for count in counts.values())


def test_select_edge_distribution_mixed_degrees() -> None:
    """Test Select-an-Edge doubles light-light edges and keeps every edge reachable.

    A light-heavy edge has normalized frequency m'/(E1 + 2 E2) = 0.875 here
    and a light-light edge twice that.
    """
    square = complete_bipartite(2, 30)
    ring = [(32 + i, 32 + (i + 1) % 10) for i in range(10)]
    graph = Graph.from_edges(42, list(square.edge_list) + ring)
    summary = testers.select_edge_distribution(
        graph, TesterParams(eps=1.0, alpha=2.0), draws=20_000, seed=2
    )
    assert summary["m_low"] == 70
    assert summary["success_rate"] >= 2 / 3
    assert 0.6 <= summary["min"] <= 1.1
    assert 1.4 <= summary["max"] <= 2.2


@pytest.mark.parametrize("n", [2**10, 2**12])
def test_c4_rejects_far_pair_member(n: int) -> None:
    """Test the far member of the C4 pair is rejected at eps = 0.1."""
    pair = gen_c4_lb_pair(n)
    certificate = DisjointCycleSet(k=4, cycles=pair.certificate)
    assert bounds_from_set(pair.g1, certificate).lower >= 0.1
    params = TesterParams(eps=0.1)
    rejected = 0
    for trial in range(30):
        session = OracleSession(pair.g1, seed=derive_seed(1, n, trial))
        rejected += testers.test_c4(session, params).rejected
    assert rejected >= 20


@pytest.mark.parametrize(
    ("k", "profile"),
    [(5, PlantedProfile.TWO_HEAVY), (6, PlantedProfile.THREE_HEAVY)],
)
def test_heavy_profiles_are_rejected(k: int, profile: PlantedProfile) -> None:
    """Test planted cycles through heavy hubs are found at eps = 0.2."""
    spec = PlantedSpec(n=1024, k=k, eps_target=0.2, profile=profile)
    graph, _ = gen_planted(spec, seed=4)
    params = TesterParams(eps=0.2)
    tester = TesterId(f"c{k}")
    rejected = 0
    for trial in range(20):
        session = OracleSession(graph, seed=derive_seed(2, graph.n, trial))
        verdict = testers.run_tester(tester, session, params, m_hint=graph.m)
        assert verdict.witness is None or len(verdict.witness) == k
        rejected += verdict.rejected
    assert rejected >= 14


def test_reject_rate_grows_with_effort() -> None:
    """Test more repetitions or a larger budget never turn a reject into accept.

    Runs with the same seed share their random stream, so a reject found
    with less effort is found again with more.
    """
    graph, _ = gen_planted(PlantedSpec(n=400, k=4, eps_target=0.1), seed=6)
    few = TesterParams(eps=0.5, t_mult=1.0)
    many = TesterParams(eps=0.5, t_mult=50.0)
    rejected = 0
    for seed in range(20):
        low = testers.test_c4(OracleSession(graph, seed=seed), few).rejected
        high = testers.test_c4(OracleSession(graph, seed=seed), many).rejected
        capped = testers.test_c4(
            OracleSession(graph, seed=seed, budget=30), many
        ).rejected
        assert low <= high
        assert capped <= high
        rejected += high
    assert rejected >= 18
