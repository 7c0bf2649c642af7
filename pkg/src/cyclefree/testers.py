"""One-sided error testers for C_k-freeness and F-freeness."""

from __future__ import annotations

import math
import time
from collections import Counter
from typing import TYPE_CHECKING

import numpy as np

from .const import LOGGER, TesterId, VerdictKind
from .exceptions import CycleFreeError, ParameterError, TesterAbort
from .graph import Edge, PatternGraph, edge_key, ell_of
from .models import TesterParams, Verdict
from .oracle import OracleSession
from .utils import ceil_int, make_rng, natural_log
from .witness import WitnessSearch, is_valid_witness

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from .graph import Graph
    from .oracle import QueryAccess

Witness = tuple[int, ...]


def select_an_edge(access: QueryAccess, params: TesterParams) -> Edge | None:
    """Return an edge incident to a light vertex, or None on Fail.

    Each of ceil(select_mult * theta0) rounds picks a uniform vertex u and,
    when d(u) <= theta0, returns a uniform edge at u with probability
    d(u) / theta0. The returned pair starts at the light vertex.
    """
    theta0 = params.theta0
    for _ in range(ceil_int(params.select_mult * theta0)):
        u = access.uniform_vertex()
        d = access.degree(u)
        if 0 < d <= theta0 and access.coin(d / theta0):
            return (u, access.neighbor(u, access.uniform_index(d)))
    return None


def select_uniform_edge_low(
    access: QueryAccess, theta0: float, max_rounds: int
) -> Edge | None:
    """Return a uniform edge of G_{<=theta0}, or None after `max_rounds` rounds.

    G_{<=theta0} holds the edges with at least one light endpoint. A round
    draws v, an index j in 1..floor(theta0) and a fair coin; light-light
    edges are found from both ends, so they are kept on heads only. The
    returned pair starts at the light vertex v.
    """
    slots = max(1, math.floor(theta0))
    for _ in range(max_rounds):
        v = access.uniform_vertex()
        j = access.uniform_index(slots)
        heads = access.coin(0.5)
        d = access.degree(v)
        if d > theta0 or j > d:
            continue
        u = access.neighbor(v, j)
        if access.known_degree(u) > theta0 or heads:
            return (v, u)
    return None


class _Exploration:
    """State of one tester run: access, witness search and expansions."""

    def __init__(self, access: QueryAccess, pattern: PatternGraph) -> None:
        self.access = access
        self.search = WitnessSearch(access.explored, pattern)
        self.expanded: set[int] = set()

    def expand(self, v: int, degree: int) -> None:
        """Query every neighbor of v, once per run."""
        if v in self.expanded:
            return
        for i in range(1, degree + 1):
            self.access.neighbor(v, i)
        self.expanded.add(v)

    def walk(self, start: int, length: int) -> None:
        """Perform a random walk; degrees along the way are queried as needed."""
        current = start
        for _ in range(length):
            degree = self.access.known_degree(current)
            if degree == 0:
                return
            current = self.access.random_neighbor(current, degree)

    def witness(self) -> Witness | None:
        return self.search.step()


def _conclude(
    access: QueryAccess,
    pattern: PatternGraph,
    tester: TesterId,
    body: Callable[[_Exploration], Witness | None],
) -> Verdict:
    """Run a tester body and turn its outcome into a verified Verdict."""
    exploration = _Exploration(access, pattern)
    started = time.perf_counter()
    aborted = False
    try:
        witness = body(exploration)
        if witness is None:
            witness = exploration.witness()
    except TesterAbort as exception:
        LOGGER.debug("%s run aborted: %s", tester, exception)
        witness = exploration.witness()
        aborted = witness is None
    elapsed = time.perf_counter() - started

    if witness is not None and not is_valid_witness(access.explored, pattern, witness):
        msg = f"{tester} produced a witness {witness} outside the explored subgraph"
        raise CycleFreeError(msg)
    return Verdict(
        verdict=VerdictKind.ACCEPT if witness is None else VerdictKind.REJECT,
        witness=witness,
        queries=access.stats(wall_time=elapsed),
        seed=access.seed,
        spawn_key=access.spawn_key,
        tester=str(tester),
        aborted=aborted,
    )


def c4_sizes(n: int, params: TesterParams) -> tuple[int, int, int]:
    """Return (t, s1_max, s2) of the C4 tester on n vertices."""
    thresholds = params.thresholds(n, TesterId.C4)
    t = ceil_int(params.t_mult / params.eps)
    s1_max = min(
        ceil_int(params.s1_mult * math.sqrt(thresholds.theta1 / params.eps)),
        max(1, math.floor(thresholds.theta1)),
    )
    s2 = ceil_int(
        params.s2_mult
        * math.sqrt(n * params.alpha / thresholds.theta1 * natural_log(n))
        / params.eps**2
    )
    return t, s1_max, s2


def c4_query_bound(n: int, params: TesterParams) -> int:
    """Return the largest number of queries one C4 tester run can make.

    Per repetition: the Select-an-Edge rounds plus its neighbor query, the
    endpoint degree, then either s1 sampled neighbors with their degrees
    and expansions, or s2 length-2 walks of three queries each.
    """
    t, s1_max, s2 = c4_sizes(n, params)
    thresholds = params.thresholds(n, TesterId.C4)
    select = ceil_int(params.select_mult * params.theta0) + 1
    low = s1_max * (2 + math.floor(thresholds.theta_min))
    return t * (select + 1 + max(low, 3 * s2))


def _select_endpoint(
    exploration: _Exploration, params: TesterParams
) -> tuple[int, int] | None:
    access = exploration.access
    edge = select_an_edge(access, params)
    if edge is None:
        return None
    v = edge[0] if access.coin(0.5) else edge[1]
    return v, access.degree(v)


def test_c4(access: QueryAccess, params: TesterParams) -> Verdict:
    """Test C4-freeness.

    Each of t repetitions selects an edge and one endpoint v. Below theta1,
    s1 random neighbors of v are sampled and every sampled neighbor u with
    d(u) <= theta_min is expanded; above theta1, s2 random walks of
    length 2 leave v. Rejects only with a C4 of the explored subgraph.
    """
    n = access.n
    thresholds = params.thresholds(n, TesterId.C4)
    t, _, s2 = c4_sizes(n, params)

    def body(exploration: _Exploration) -> Witness | None:
        for _ in range(t):
            if (picked := _select_endpoint(exploration, params)) is None:
                continue
            v, degree = picked
            if degree <= thresholds.theta1:
                s1 = ceil_int(params.s1_mult * math.sqrt(degree / params.eps))
                for u in access.sample_neighbors(v, s1, degree):
                    degree_u = access.degree(u)
                    if degree_u <= thresholds.theta_min:
                        exploration.expand(u, degree_u)
                    if (witness := exploration.witness()) is not None:
                        return witness
            else:
                for _ in range(s2):
                    exploration.walk(v, 2)
                    if (witness := exploration.witness()) is not None:
                        return witness
        return None

    return _conclude(access, PatternGraph.cycle(4), TesterId.C4, body)


def test_c5(access: QueryAccess, params: TesterParams) -> Verdict:
    """Test C5-freeness.

    As the C4 tester, but each sampled light neighbor starts a restricted
    BFS of depth 2 (only light vertices are expanded), and very-high-degree
    endpoints start length-3 walks.
    """
    n = access.n
    thresholds = params.thresholds(n, TesterId.C5)
    theta0 = params.theta0
    t = ceil_int(params.t_mult / params.eps)
    s2 = ceil_int(
        params.s2_mult
        * params.eps**-3
        * math.sqrt(n * natural_log(n) / thresholds.theta1)
    )

    def body(exploration: _Exploration) -> Witness | None:
        for _ in range(t):
            if (picked := _select_endpoint(exploration, params)) is None:
                continue
            v, degree = picked
            if degree <= thresholds.theta1:
                s1 = ceil_int(params.s1_mult * math.sqrt(degree / params.eps))
                for u in access.sample_neighbors(v, s1, degree):
                    degree_u = access.degree(u)
                    if degree_u > theta0:
                        continue
                    exploration.expand(u, degree_u)
                    for w in sorted(access.explored.neighbors(u)):
                        degree_w = access.known_degree(w)
                        if degree_w <= theta0:
                            exploration.expand(w, degree_w)
                    if (witness := exploration.witness()) is not None:
                        return witness
            else:
                for _ in range(s2):
                    exploration.walk(v, 3)
                    if (witness := exploration.witness()) is not None:
                        return witness
        return None

    return _conclude(access, PatternGraph.cycle(5), TesterId.C5, body)


def c6_repetitions(n: int, params: TesterParams) -> int:
    """Return t = ceil(c6_t_mult * ln^3(n) / eps^3)."""
    return ceil_int(params.c6_t_mult * natural_log(n) ** 3 / params.eps**3)


def test_c6(access: QueryAccess, params: TesterParams) -> Verdict:
    """Test C6-freeness with a restricted BFS of depth 4 from light vertices.

    Light vertices are expanded fully. A heavy vertex reached from a light
    one is expanded fully up to theta1 neighbors, otherwise ceil(theta1)
    distinct uniform neighbors are sampled. A heavy vertex reached only
    from heavy vertices is not expanded.
    """
    n = access.n
    thresholds = params.thresholds(n, TesterId.C6)
    theta0, theta1 = thresholds.theta0, thresholds.theta1
    t = c6_repetitions(n, params)

    def restricted_bfs(exploration: _Exploration, root: int) -> Witness | None:
        visited = {root}
        # vertex -> reached from a light vertex
        level: dict[int, bool] = {root: True}
        for _ in range(4):
            following: dict[int, bool] = {}
            for u, from_light in level.items():
                degree = access.known_degree(u)
                light = degree <= theta0
                if light or (from_light and degree <= theta1):
                    exploration.expand(u, degree)
                    reached = access.explored.neighbors(u)
                elif from_light:
                    reached = set(access.sample_neighbors(u, math.ceil(theta1), degree))
                else:
                    continue
                if (witness := exploration.witness()) is not None:
                    return witness
                for w in sorted(reached - visited):
                    following[w] = following.get(w, False) or light
            visited.update(following)
            level = following
        return None

    def body(exploration: _Exploration) -> Witness | None:
        for _ in range(t):
            v = access.uniform_vertex()
            if access.degree(v) > theta0:
                continue
            if (witness := restricted_bfs(exploration, v)) is not None:
                return witness
        return None

    return _conclude(access, PatternGraph.cycle(6), TesterId.C6, body)


def _average_degree(n: int, m_hint: int) -> float:
    return 2 * m_hint / max(n, 1)


def f_sample_size(
    n: int, pattern: PatternGraph, params: TesterParams, m_hint: int
) -> int:
    """Return the vertex sample size of the general subgraph tester."""
    ell = ell_of(pattern)
    m = max(m_hint, 1)
    return ceil_int(
        params.sample_mult
        * pattern.k ** (2 + 1 / ell)
        * m
        * (params.alpha / m) ** (1 / ell)
        * (1 / params.eps) ** (1 + 2 / ell)
    )


def _sample_vertices(access: QueryAccess, s: int) -> Sequence[int]:
    """Return s uniform vertices, or every vertex once when s >= n."""
    if s >= access.n:
        return range(access.n)
    return [access.uniform_vertex() for _ in range(s)]


def _expand_light(
    exploration: _Exploration, vertices: Sequence[int], theta0: float
) -> Witness | None:
    access = exploration.access
    for v in vertices:
        degree = access.degree(v)
        if degree <= theta0:
            exploration.expand(v, degree)
            if (witness := exploration.witness()) is not None:
                return witness
    return None


def test_f_general(
    access: QueryAccess, pattern: PatternGraph, params: TesterParams, m_hint: int
) -> Verdict:
    """Test F-freeness by expanding the light vertices of a uniform sample.

    The sample size grows with m * (alpha/m)^(1/ell(F)); `m_hint` may be any
    upper bound on m. The run is capped at s + cap_mult * s * 2 * avg degree
    queries and accepts when the cap is hit.
    """
    s = f_sample_size(access.n, pattern, params, m_hint)
    cap = s + ceil_int(params.cap_mult * s * 2 * _average_degree(access.n, m_hint))
    theta0 = params.theta0

    def body(exploration: _Exploration) -> Witness | None:
        with access.capped(cap):
            return _expand_light(exploration, _sample_vertices(access, s), theta0)

    return _conclude(access, pattern, TesterId.F, body)


def ck_odd_sizes(n: int, k: int, params: TesterParams, m_hint: int) -> tuple[int, int]:
    """Return (s1, s2): sampled light edges and sampled vertices for odd k."""
    m = max(m_hint, 1)
    eps, alpha = params.eps, params.alpha
    s1 = ceil_int(
        params.edge_sample_mult
        * k
        * m ** (1 - 2 / (k - 1))
        * (1 / alpha) ** (1 - 4 / (k - 1))
        * eps ** (1 - 6 / (k - 1))
    )
    s2 = 0
    if k > 3:
        s2 = ceil_int(
            params.edge_sample_mult
            * k
            * n
            * (alpha**2 / m) ** (2 / (k - 1))
            * (1 / eps) ** (6 / (k - 1))
        )
    return s1, s2


def test_ck_odd(
    access: QueryAccess, k: int, params: TesterParams, m_hint: int
) -> Verdict:
    """Test C_k-freeness for odd k from uniform light edges and light vertices.

    Both endpoints of each sampled edge of G_{<=theta0} are expanded when
    both are light. For k > 3 a vertex sample follows, capped at
    cap_mult * s2 * (1 + 2 * avg degree) queries.
    """
    if k < 3 or k % 2 == 0:
        msg = f"The odd cycle tester needs an odd k >= 3, got {k}"
        raise ParameterError(msg)
    theta0 = params.theta0
    s1, s2 = ck_odd_sizes(access.n, k, params, m_hint)
    rounds = ceil_int(params.edge_cap_mult * theta0 * access.n / max(m_hint, 1))

    def body(exploration: _Exploration) -> Witness | None:
        for _ in range(s1):
            edge = select_uniform_edge_low(access, theta0, rounds)
            if edge is None:
                LOGGER.debug("No light edge found in %s rounds", rounds)
                break
            v, u = edge
            degree_u = access.known_degree(u)
            if degree_u <= theta0:
                exploration.expand(v, access.known_degree(v))
                exploration.expand(u, degree_u)
                if (witness := exploration.witness()) is not None:
                    return witness
        if s2:
            cap = ceil_int(
                params.cap_mult * s2 * (1 + 2 * _average_degree(access.n, m_hint))
            )
            with access.capped(cap):
                return _expand_light(exploration, _sample_vertices(access, s2), theta0)
        return None

    return _conclude(access, PatternGraph.cycle(k), TesterId.CK_ODD, body)


def run_tester(
    tester: TesterId,
    access: QueryAccess,
    params: TesterParams,
    *,
    k: int | None = None,
    pattern: PatternGraph | None = None,
    m_hint: int | None = None,
) -> Verdict:
    """Run a tester by id.

    Args:
    ----
        tester: Which tester to run.
        access: Query access to the tested graph.
        params: Tester parameters.
        k: Cycle length of the odd cycle tester.
        pattern: Pattern of the general subgraph tester.
        m_hint: Upper bound on the edge count, needed by the sample-based
            testers.

    Returns:
    -------
        The verdict.

    Raises:
    ------
        ParameterError: A required argument for the tester is missing.

    """
    if tester is TesterId.C4:
        return test_c4(access, params)
    if tester is TesterId.C5:
        return test_c5(access, params)
    if tester is TesterId.C6:
        return test_c6(access, params)
    if m_hint is None:
        msg = f"The {tester} tester needs an upper bound on the edge count"
        raise ParameterError(msg)
    if tester is TesterId.F:
        if pattern is None:
            msg = "The general subgraph tester needs a pattern"
            raise ParameterError(msg)
        return test_f_general(access, pattern, params, m_hint)
    if k is None:
        msg = "The odd cycle tester needs k"
        raise ParameterError(msg)
    return test_ck_odd(access, k, params, m_hint)


def tester_pattern(
    tester: TesterId, *, k: int | None = None, pattern: PatternGraph | None = None
) -> PatternGraph:
    """Return the pattern a tester looks for."""
    if tester is TesterId.F and pattern is not None:
        return pattern
    if tester is TesterId.CK_ODD and k is not None:
        return PatternGraph.cycle(k)
    lengths = {TesterId.C4: 4, TesterId.C5: 5, TesterId.C6: 6}
    return PatternGraph.cycle(lengths.get(tester, 4))


def tuple_hitting_sample_size(x_size: int, count: int, ell: int) -> int:
    """Return ceil(16 * ell * |X| / |T|^(1/ell))."""
    return ceil_int(16 * ell * x_size / count ** (1 / ell))


def tuple_hitting_trial(
    x_size: int, tuples: np.ndarray, s: int, rng: np.random.Generator
) -> bool:
    """Return if s uniform draws from X cover every element of some tuple.

    Args:
    ----
        x_size: Size of the ground set X = 0..x_size-1.
        tuples: Integer array of shape (count, ell).
        s: Number of draws, with replacement.
        rng: Random generator.

    Returns:
    -------
        True when a whole tuple was drawn.

    """
    drawn = np.zeros(x_size, dtype=bool)
    drawn[rng.integers(0, x_size, size=s)] = True
    return bool(drawn[tuples].all(axis=1).any())


def tuple_hitting_rate(
    x_size: int, tuples: np.ndarray, s: int, trials: int, seed: int | None = None
) -> float:
    """Return the fraction of trials in which some tuple is hit."""
    rng = make_rng(seed)
    hits = sum(tuple_hitting_trial(x_size, tuples, s, rng) for _ in range(trials))
    return hits / trials


def disjoint_tuples(x_size: int, count: int, ell: int) -> np.ndarray:
    """Return `count` disjoint tuples of size ell over 0..x_size-1."""
    if count * ell > x_size:
        msg = f"{count} disjoint tuples of size {ell} do not fit in {x_size} elements"
        raise ParameterError(msg)
    return np.arange(count * ell, dtype=np.int64).reshape(count, ell)


def low_edges(graph: Graph, theta0: float) -> list[Edge]:
    """Return the edges with at least one endpoint of degree <= theta0."""
    degrees = graph.degrees
    return [
        edge_key(u, v)
        for u, v in graph.edge_list
        if degrees[u] <= theta0 or degrees[v] <= theta0
    ]


def select_edge_distribution(
    graph: Graph, params: TesterParams, draws: int, seed: int | None = None
) -> dict[str, float]:
    """Summarize Select-an-Edge over repeated calls on one graph.

    Returns
    -------
        success_rate, the number m' of low-incident edges, and the smallest
        and largest normalized frequency m' * count / successes over those
        edges (an edge never returned counts as 0).

    """
    session = OracleSession(graph, seed=seed)
    targets = low_edges(graph, params.theta0)
    counts: Counter[Edge] = Counter()
    for _ in range(draws):
        edge = select_an_edge(session, params)
        if edge is not None:
            counts[edge_key(*edge)] += 1
    successes = sum(counts.values())
    m_low = len(targets)
    if not successes or not m_low:
        return {
            "success_rate": successes / draws,
            "m_low": m_low,
            "min": 0.0,
            "max": 0.0,
        }
    normalized = [m_low * counts[edge] / successes for edge in targets]
    return {
        "success_rate": successes / draws,
        "m_low": m_low,
        "min": min(normalized),
        "max": max(normalized),
    }
