"""Instance generators: planted far instances, controls and hard pairs."""

from __future__ import annotations

import math
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field
from itertools import chain, combinations
from pathlib import Path
from typing import TYPE_CHECKING, Any

import backoff
import numpy as np

from .const import (
    DEFAULT_HUBS,
    DIST_D_C2,
    GENERATION_MAX_TRIES,
    LOGGER,
    REPAIR_ATTEMPTS_PER_EDGE,
    Family,
    PlantedProfile,
    TesterId,
)
from .exceptions import GenerationRepairError, InfeasibleSpecError, ParameterError
from .graph import Edge, Graph, degeneracy, read_edge_list, write_edge_list
from .models import (
    DegreeLabels,
    DisjointCycleSet,
    InstanceMetadata,
    PlantedSpec,
    TesterParams,
)
from .subdivision import PART_PAIRS, path_lengths, subdivide_for_ck
from .utils import make_rng

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

Seed = int | np.random.SeedSequence | None
Cycle = tuple[int, ...]


@dataclass
class Instance:
    """A generated graph with its sidecar metadata.

    Subdivided instances also keep their tripartite base graph, so testers
    can be run through the on-the-fly subdivision oracle.
    """

    graph: Graph
    metadata: InstanceMetadata
    base: Graph | None = None
    base_parts: tuple[int, ...] | None = None
    k: int | None = None

    @property
    def certificate(self) -> tuple[Cycle, ...] | None:
        """Return the planted cycle set, if the generator knows one."""
        return self.metadata.certificate


def _cycle_edges(cycle: Sequence[int]) -> list[Edge]:
    return [(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


def _random_tree(vertices: Sequence[int], rng: np.random.Generator) -> list[Edge]:
    """Attach every vertex after the first to a uniform earlier one."""
    return [
        (vertices[int(rng.integers(0, index))], vertices[index])
        for index in range(1, len(vertices))
    ]


def gen_disjoint_cycles(t: int, k: int) -> tuple[Graph, DisjointCycleSet]:
    """Return t vertex-disjoint copies of C_k and the copies as certificate."""
    if k < 3 or t < 0:
        msg = f"Need k >= 3 and t >= 0, got k={k}, t={t}"
        raise ParameterError(msg)
    cycles = [tuple(range(i * k, (i + 1) * k)) for i in range(t)]
    edges = [edge for cycle in cycles for edge in _cycle_edges(cycle)]
    return Graph.from_edges(t * k, edges), DisjointCycleSet(k=k, cycles=tuple(cycles))


def gen_forest(n: int, seed: Seed = None, trees: int = 1) -> Graph:
    """Return a random recursive forest.

    Every vertex v >= trees picks a uniform parent below v.
    """
    if not 1 <= trees <= max(n, 1):
        msg = f"Need 1 <= trees <= n, got trees={trees}, n={n}"
        raise ParameterError(msg)
    rng = make_rng(seed)
    return Graph.from_edges(
        n, [(int(rng.integers(0, v)), v) for v in range(trees, n)]
    )


def gen_star_forest(stars: int, leaves: int) -> Graph:
    """Return disjoint stars K_{1,leaves}; each center precedes its leaves."""
    size = leaves + 1
    return Graph.from_edges(
        stars * size,
        [(s * size, s * size + i) for s in range(stars) for i in range(1, size)],
    )


def is_prime(p: int) -> bool:
    """Return if p is prime."""
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def gen_lines_points(p: int) -> Graph:
    """Return the incidence graph of points and lines over Z_p x Z_p.

    Point (x, y) has id x * p + y, line (a, b) has id p^2 + a * p + b, and
    they are adjacent iff x = b * y - a (mod p). Two lines share at most one
    point, so the graph is C4-free for prime p; it is p-regular.
    """
    if not is_prime(p):
        msg = f"The lines-points graph needs a prime p, got {p}"
        raise ParameterError(msg)
    points = p * p
    edges = [
        (points + a * p + b, ((b * y - a) % p) * p + y)
        for a in range(p)
        for b in range(p)
        for y in range(p)
    ]
    return Graph.from_edges(2 * points, edges)


def gen_high_girth(base: Graph, rounds: int = 1) -> Graph:
    """Subdivide every edge once per round; the girth doubles each round.

    New vertices follow the old ones in edge order.
    """
    graph = base
    for _ in range(rounds):
        edges: list[Edge] = []
        for index, (u, v) in enumerate(graph.edge_list):
            middle = graph.n + index
            edges.extend(((u, middle), (middle, v)))
        graph = Graph.from_edges(graph.n + graph.m, edges)
    return graph


def _part_labels(sizes: Sequence[int]) -> list[int]:
    return [part for part, size in enumerate(sizes) for _ in range(size)]


def gen_random_tripartite(
    sizes: Sequence[int], p: float, seed: Seed = None
) -> tuple[Graph, list[int]]:
    """Return a random tripartite graph.

    Every cross-part pair is an edge with probability p.

    Returns
    -------
        The graph, edges in lexicographic order, and the part of every vertex.

    """
    if len(sizes) != 3 or not 0 <= p <= 1:
        msg = f"Need three part sizes and p in [0, 1], got {sizes}, {p}"
        raise ParameterError(msg)
    rng = make_rng(seed)
    starts = np.cumsum([0, *sizes])
    edges: list[Edge] = []
    for a, b in PART_PAIRS:
        rows, cols = np.nonzero(rng.random((sizes[a], sizes[b])) < p)
        edges.extend(
            zip(
                (rows + starts[a]).tolist(),
                (cols + starts[b]).tolist(),
                strict=True,
            )
        )
    edges.sort()
    return Graph.from_edges(int(starts[-1]), edges), _part_labels(sizes)


def _biregular_block(
    left: np.ndarray,
    right: np.ndarray,
    left_degree: int,
    right_degree: int,
    rng: np.random.Generator,
) -> list[Edge]:
    """Return a simple biregular bipartite graph between two vertex arrays.

    Degree stubs are matched at random, then every repeated pair is removed
    by switching its right endpoint with that of a random other pair.

    Raises
    ------
        InfeasibleSpecError: The stub counts of both sides differ.
        GenerationRepairError: The switching repair ran out of attempts.

    """
    tails = np.repeat(left, left_degree).tolist()
    heads = rng.permutation(np.repeat(right, right_degree)).tolist()
    if len(tails) != len(heads):
        msg = (
            f"{len(left)} x {left_degree} stubs cannot be matched with "
            f"{len(right)} x {right_degree} stubs"
        )
        raise InfeasibleSpecError(msg)

    present: set[Edge] = set()
    repeated: list[int] = []
    for index, pair in enumerate(zip(tails, heads, strict=True)):
        if pair in present:
            repeated.append(index)
        else:
            present.add(pair)

    pending = set(repeated)
    for index in repeated:
        a, b = tails[index], heads[index]
        for _ in range(REPAIR_ATTEMPTS_PER_EDGE):
            other = int(rng.integers(0, len(tails)))
            a2, b2 = tails[other], heads[other]
            if (
                other in pending
                or a == a2
                or b == b2
                or (a, b2) in present
                or (a2, b) in present
            ):
                continue
            present.discard((a2, b2))
            present.update(((a, b2), (a2, b)))
            heads[index], heads[other] = b2, b
            pending.discard(index)
            break
        else:
            msg = f"Could not repair repeated pair ({a}, {b})"
            raise GenerationRepairError(msg)
    return list(zip(tails, heads, strict=True))


def _log_restart(details: Any) -> None:  # noqa: ANN401
    LOGGER.debug(
        "Restarting %s after repair failure (try %s)",
        details["target"].__name__,
        details["tries"],
    )


@backoff.on_exception(
    backoff.constant,
    GenerationRepairError,
    max_tries=GENERATION_MAX_TRIES,
    interval=0,
    jitter=None,
    on_backoff=_log_restart,
    logger=None,
)
def _sample_blocks(
    blocks: Sequence[tuple[np.ndarray, np.ndarray, int, int]],
    rng: np.random.Generator,
) -> list[Edge]:
    """Sample every biregular block; a failed repair restarts all of them."""
    edges: list[Edge] = []
    for left, right, left_degree, right_degree in blocks:
        edges.extend(_biregular_block(left, right, left_degree, right_degree, rng))
    return edges


def gen_regular_tripartite(
    n_part: int, d: int, seed: Seed = None
) -> tuple[Graph, list[int]]:
    """Return a d-regular tripartite graph with d/2 neighbors in each other part.

    Parts are consecutive id blocks of size n_part.
    """
    if d % 2 or not 0 < d // 2 <= n_part:
        msg = f"Need an even d with 0 < d/2 <= n_part, got d={d}, n_part={n_part}"
        raise InfeasibleSpecError(msg)
    rng = make_rng(seed)
    part = [np.arange(i * n_part, (i + 1) * n_part) for i in range(3)]
    half = d // 2
    edges = _sample_blocks(
        [(part[a], part[b], half, half) for a, b in PART_PAIRS], rng
    )
    return Graph.from_edges(3 * n_part, edges), _part_labels([n_part] * 3)


@dataclass(frozen=True)
class DistDLayout:
    """Part sizes of the one-sided lower bound distribution."""

    n: int
    alpha: int
    d: int
    x_size: int
    y_size: int

    @property
    def z_size(self) -> int:
        """Return the number of isolated padding vertices."""
        return self.n - 2 * self.x_size - 2 * self.y_size

    def parts(self) -> dict[str, tuple[int, int]]:
        """Return X1, X2, Y1, Y2 and Z as id ranges."""
        x, y = self.x_size, self.y_size
        return {
            "X1": (0, x),
            "X2": (x, 2 * x),
            "Y1": (2 * x, 2 * x + y),
            "Y2": (2 * x + y, 2 * x + 2 * y),
            "Z": (2 * x + 2 * y, self.n),
        }


def dist_d_layout(n: int, alpha: int, c2: int = DIST_D_C2) -> DistDLayout:
    """Return the part sizes for (n, alpha).

    d = sqrt(n)/c2 rounded down to an even number; |X_b| = n/4 rounded down
    to a multiple of d; |Y_b| = |X_b| * alpha / d; the rest is Z.

    Raises
    ------
        InfeasibleSpecError: alpha is odd, or d < max(2, alpha).

    """
    d = math.isqrt(n) // c2
    d -= d % 2
    if alpha % 2 or alpha < 2:
        msg = f"alpha must be even and at least 2, got {alpha}"
        raise InfeasibleSpecError(msg)
    if d < max(2, alpha):
        msg = f"n={n} gives d={d}, which must be at least max(2, alpha={alpha})"
        raise InfeasibleSpecError(msg)
    x_size = (n // 4) // d * d
    return DistDLayout(n=n, alpha=alpha, d=d, x_size=x_size, y_size=x_size * alpha // d)


def gen_dist_d(
    n: int, alpha: int, seed: Seed = None, c2: int = DIST_D_C2
) -> Graph:
    """Sample the one-sided lower bound distribution for C4.

    Every X vertex gets alpha/2 neighbors in each Y part and every Y vertex
    d/2 neighbors in each X part; Z stays isolated. A smaller c2 raises d,
    and with it the share of edges that lie on C4s.
    """
    layout = dist_d_layout(n, alpha, c2)
    ranges = layout.parts()
    rng = make_rng(seed)
    blocks = [
        (np.arange(*ranges[x]), np.arange(*ranges[y]), alpha // 2, layout.d // 2)
        for x in ("X1", "X2")
        for y in ("Y1", "Y2")
    ]
    return Graph.from_edges(n, _sample_blocks(blocks, rng))


def _lb_y0(n: int, x_of_y: Callable[[int], int]) -> int:
    """Return the largest odd y with x_of_y(y) + y <= n."""
    y = 1
    while x_of_y(y + 2) + y + 2 <= n:
        y += 2
    return y


@dataclass(frozen=True)
class LowerBoundPair:
    """Two graphs with equal degree profiles, one free and one far from free."""

    g0: Graph
    g1: Graph
    g0_parts: dict[str, tuple[int, int]]
    g1_parts: dict[str, tuple[int, int]]
    certificate: tuple[Cycle, ...]


def gen_c4_lb_pair(n: int) -> LowerBoundPair:
    """Return the C4 lower bound pair on n vertices.

    G0 serves every pair of Y (|Y| = y0, odd) by its own X vertex, so it is
    C4-free. G1 has y1 = y0 - 1 vertices in Y split in halves and serves
    each cross pair once from each half of X, which closes x1/2
    edge-disjoint C4s. X vertices have degree 2 and Y vertices y0 - 1 in
    both graphs.
    """
    if n < 13:
        msg = f"The C4 pair needs n >= 13, got {n}"
        raise InfeasibleSpecError(msg)
    y0 = _lb_y0(n, lambda y: y * (y - 1) // 2)
    pairs = list(combinations(range(y0), 2))
    x0 = len(pairs)
    edges0 = [
        edge for x, (a, b) in enumerate(pairs) for edge in ((x, x0 + a), (x, x0 + b))
    ]

    y1 = y0 - 1
    half = y1 // 2
    cross = [(a, half + b) for a in range(half) for b in range(half)]
    x1 = 2 * len(cross)
    edges1: list[Edge] = []
    certificate: list[Cycle] = []
    for index, (a, b) in enumerate(cross):
        first, second = index, len(cross) + index
        edges1.extend(((first, x1 + a), (first, x1 + b)))
        edges1.extend(((second, x1 + a), (second, x1 + b)))
        certificate.append((first, x1 + a, second, x1 + b))
    return LowerBoundPair(
        g0=Graph.from_edges(n, edges0),
        g1=Graph.from_edges(n, edges1),
        g0_parts={"X": (0, x0), "Y": (x0, x0 + y0), "Z": (x0 + y0, n)},
        g1_parts={"X": (0, x1), "Y": (x1, x1 + y1), "Z": (x1 + y1, n)},
        certificate=tuple(certificate),
    )


def gen_c5_lb_pair(n: int) -> LowerBoundPair:
    """Return the C5 lower bound pair on n vertices.

    A Y pair is served either by a common X neighbor (a path of length 2)
    or by an X edge (a path of length 3). In G0 the pairs of Y, taken in
    lexicographic order, alternate between the two kinds, so every cycle is
    at least 6 long. In G1 every cross pair of the halves of Y is served
    both ways, which closes one C5 per cross pair. All X vertices have
    degree 2; Y vertices have degree y0 - 1 in both graphs.
    """
    if n < 7:
        msg = f"The C5 pair needs n >= 7, got {n}"
        raise InfeasibleSpecError(msg)

    def x_size(y: int) -> int:
        count = y * (y - 1) // 2
        return (count + 1) // 2 + 2 * (count // 2)

    y0 = _lb_y0(n, x_size)
    x0 = x_size(y0)
    edges0: list[Edge] = []
    x = 0
    for index, (a, b) in enumerate(combinations(range(y0), 2)):
        if index % 2 == 0:
            edges0.extend(((x0 + a, x), (x, x0 + b)))
            x += 1
        else:
            edges0.extend(((x0 + a, x), (x, x + 1), (x + 1, x0 + b)))
            x += 2

    y1 = y0 - 1
    half = y1 // 2
    cross = [(a, half + b) for a in range(half) for b in range(half)]
    x1 = 3 * len(cross)
    edges1 = []
    certificate: list[Cycle] = []
    for index, (a, b) in enumerate(cross):
        hub, left, right = 3 * index, 3 * index + 1, 3 * index + 2
        ya, yb = x1 + a, x1 + b
        edges1.extend(((ya, hub), (hub, yb), (ya, left), (left, right), (right, yb)))
        certificate.append((ya, hub, yb, right, left))
    return LowerBoundPair(
        g0=Graph.from_edges(n, edges0),
        g1=Graph.from_edges(n, edges1),
        g0_parts={"X": (0, x0), "Y": (x0, x0 + y0), "Z": (x0 + y0, n)},
        g1_parts={"X": (0, x1), "Y": (x1, x1 + y1), "Z": (x1 + y1, n)},
        certificate=tuple(certificate),
    )


def _hub_groups(hubs: int, size: int) -> list[tuple[int, ...]]:
    """Return all `size`-subsets of the hubs 0..hubs-1."""
    return list(combinations(range(hubs), size))


def _planted_cycle(
    profile: PlantedProfile, k: int, group: tuple[int, ...], fresh: list[int]
) -> Cycle:
    """Return one planted cycle through the hubs of `group` and fresh vertices."""
    if profile is PlantedProfile.ALL_LIGHT:
        return tuple(fresh)
    if profile is PlantedProfile.ONE_HEAVY:
        return (group[0], *fresh)
    if profile is PlantedProfile.TWO_HEAVY:
        r, s = group
        if k == 4:
            return (r, fresh[0], s, fresh[1])
        return (r, fresh[0], s, fresh[1], fresh[2])
    a, b, c = group
    return (a, fresh[0], b, fresh[1], c, fresh[2])


_HUBS_PER_CYCLE = {
    PlantedProfile.ALL_LIGHT: 0,
    PlantedProfile.ONE_HEAVY: 1,
    PlantedProfile.TWO_HEAVY: 2,
    PlantedProfile.THREE_HEAVY: 3,
}


def hub_degree_floor(spec: PlantedSpec) -> float:
    """Return the degree every hub of a planted instance must exceed.

    C4 and C5 hubs are very heavy, above theta1 of the matching tester.
    Longer cycles only need heavy hubs, above theta0. Thresholds use
    eps_target and alpha_target with the default constants.
    """
    params = TesterParams(eps=spec.eps_target, alpha=spec.alpha_target)
    if spec.k in (4, 5):
        return params.thresholds(spec.n, TesterId(f"c{spec.k}")).theta1
    return params.theta0


def _min_hub_cycles(groups: Sequence[tuple[int, ...]], hubs: int, count: int) -> int:
    """Return the fewest cycles any hub lies on after `count` round-robin cycles."""
    rounds, rest = divmod(count, len(groups))
    per_round = Counter(chain.from_iterable(groups))
    partial = Counter(chain.from_iterable(groups[:rest]))
    return min(rounds * per_round[h] + partial[h] for h in range(hubs))


def _planted_count(spec: PlantedSpec, hubs: int, floor: float) -> int | None:
    """Return the fewest cycles meeting eps_target and the hub floor, or None."""
    per_cycle = _HUBS_PER_CYCLE[spec.profile]
    groups = _hub_groups(hubs, per_cycle)
    fresh_per_cycle = spec.k - per_cycle
    most = (spec.n - hubs) // fresh_per_cycle

    def feasible(count: int) -> bool:
        rest = spec.n - hubs - count * fresh_per_cycle
        m = count * spec.k + max(rest - 1, 0)
        if count * spec.k < spec.eps_target * m:
            return False
        return not per_cycle or 2 * _min_hub_cycles(groups, hubs, count) > floor

    count = 1 + bisect_left(range(1, most + 1), True, key=feasible)
    return count if count <= most else None


def _first_plan(
    spec: PlantedSpec, candidates: Sequence[int], floor: float
) -> tuple[int, int] | None:
    """Return (hubs, cycles) for the first hub count that works, or None."""
    for hubs in candidates:
        if (count := _planted_count(spec, hubs, floor)) is not None:
            return hubs, count
    return None


def gen_planted(spec: PlantedSpec, seed: Seed = None) -> tuple[Graph, DisjointCycleSet]:
    """Return a graph with planted edge-disjoint C_k copies and the copies.

    Hubs take the first ids; each planted cycle runs through the hubs of
    one hub group (chosen round-robin) and k minus that many fresh light
    vertices. Cycles sharing hubs share no edge. The remaining vertices
    form a random tree, which adds no cycle.

    The number of cycles is the smallest that puts at least eps_target of
    the edges on planted cycles and lifts every hub above
    `hub_degree_floor`. Without an explicit hub count, the profile default
    is tried first and fewer hubs are tried while n is too small for it.

    Raises
    ------
        InfeasibleSpecError: n cannot hold enough cycles of the profile,
            or the graph would exceed degeneracy alpha_target + 2.

    """
    per_cycle = _HUBS_PER_CYCLE[spec.profile]
    floor = hub_degree_floor(spec) if per_cycle else 0.0
    if not per_cycle:
        candidates: Sequence[int] = (0,)
    elif spec.hubs is not None:
        if spec.hubs < per_cycle:
            msg = f"The {spec.profile} profile needs at least {per_cycle} hubs"
            raise InfeasibleSpecError(msg)
        candidates = (spec.hubs,)
    else:
        candidates = range(DEFAULT_HUBS[spec.profile], per_cycle - 1, -1)
    if (plan := _first_plan(spec, candidates, floor)) is None:
        msg = (
            f"n={spec.n} cannot hold {spec.profile} C{spec.k} copies on"
            f" {spec.eps_target} of the edges"
        )
        if per_cycle:
            msg += f" with hub degrees above {floor:.1f}"
        raise InfeasibleSpecError(msg)
    hubs, count = plan

    groups = _hub_groups(hubs, per_cycle) if per_cycle else [()]
    fresh_per_cycle = spec.k - per_cycle
    rng = make_rng(seed)
    cycles: list[Cycle] = []
    edges: list[Edge] = []
    nxt = hubs
    for index in range(count):
        fresh = list(range(nxt, nxt + fresh_per_cycle))
        nxt += fresh_per_cycle
        cycle = _planted_cycle(spec.profile, spec.k, groups[index % len(groups)], fresh)
        cycles.append(cycle)
        edges.extend(_cycle_edges(cycle))
    edges.extend(_random_tree(range(nxt, spec.n), rng))
    graph = Graph.from_edges(spec.n, edges)
    if (core := degeneracy(graph)) > spec.alpha_target + 2:
        msg = f"Planted graph has degeneracy {core} above {spec.alpha_target} + 2"
        raise InfeasibleSpecError(msg)
    LOGGER.debug(
        "Planted %s cycles of length %s (%s, %s hubs) on %s vertices",
        count,
        spec.k,
        spec.profile,
        hubs,
        spec.n,
    )
    return graph, DisjointCycleSet(k=spec.k, cycles=tuple(cycles))


def label_degrees(
    graph: Graph, params: TesterParams, tester: TesterId = TesterId.C4
) -> DegreeLabels:
    """Label vertices light (d <= theta0), heavy or very heavy (d > theta1)."""
    thresholds = params.thresholds(graph.n, tester)
    degrees = graph.degree_array
    heavy = np.nonzero(
        (degrees > thresholds.theta0) & (degrees <= thresholds.theta1)
    )[0]
    very_heavy = np.nonzero(degrees > thresholds.theta1)[0]
    return DegreeLabels(
        theta0=thresholds.theta0,
        theta1=thresholds.theta1,
        light=int(np.count_nonzero(degrees <= thresholds.theta0)),
        heavy=tuple(heavy.tolist()),
        very_heavy=tuple(very_heavy.tolist()),
    )


def sidecar_path(path: str | Path) -> Path:
    """Return the metadata path next to an edge-list file."""
    return Path(f"{path}.json")


def write_instance(path: str | Path, graph: Graph, metadata: InstanceMetadata) -> None:
    """Write the edge list and its JSON sidecar."""
    write_edge_list(path, graph)
    sidecar_path(path).write_bytes(metadata.to_json().encode())


def read_instance(path: str | Path) -> tuple[Graph, InstanceMetadata | None]:
    """Read an edge list and its sidecar, when there is one."""
    graph = read_edge_list(path)
    sidecar = sidecar_path(path)
    if not sidecar.exists():
        return graph, None
    return graph, InstanceMetadata.from_json(sidecar.read_bytes())


def _parts_as_ranges(parts: Sequence[int]) -> dict[str, tuple[int, int]]:
    """Return contiguous part labels as named ranges."""
    ranges: dict[str, tuple[int, int]] = {}
    for part in range(3):
        members = [v for v, label in enumerate(parts) if label == part]
        if members:
            ranges[f"P{part}"] = (members[0], members[-1] + 1)
    return ranges


def high_girth_size(p: int, rounds: int) -> int:
    """Return the vertex count of lines-points(p) subdivided `rounds` times."""
    return 2 * p * p + p**3 * (2**rounds - 1)


def _largest_prime(n: int, size: Callable[[int], int]) -> int:
    """Return the largest prime p with size(p) <= n.

    Raises
    ------
        InfeasibleSpecError: Even p = 2 does not fit.

    """
    if size(2) > n:
        msg = f"n={n} is too small for this family (needs {size(2)})"
        raise InfeasibleSpecError(msg)
    p = 2
    while size(p + 1) <= n:
        p += 1
    while not is_prime(p):
        p -= 1
    return p


@dataclass
class FamilyRequest:
    """Parameters of one generated instance."""

    family: Family
    n: int
    params: dict[str, int | float | str] = field(default_factory=dict)

    def integer(self, name: str, default: int) -> int:
        """Return an integer parameter."""
        return int(self.params.get(name, default))

    def number(self, name: str, default: float) -> float:
        """Return a float parameter."""
        return float(self.params.get(name, default))

    def tester(self) -> TesterId:
        """Return the tester whose thresholds fit this family."""
        if self.family in (Family.C5_LB_G0, Family.C5_LB_G1):
            return TesterId.C5
        default_k = {Family.PLANTED: 4, Family.DISJOINT_CYCLES: 4, Family.SUBDIVIDED: 6}
        if self.family not in default_k:
            return TesterId.C4
        k = self.integer("k", default_k[self.family])
        if k in (4, 5, 6):
            return TesterId(f"c{k}")
        return TesterId.CK_ODD if k % 2 else TesterId.C4


def _metadata(
    request: FamilyRequest,
    seed: int | None,
    certificate: Sequence[Cycle] | None = None,
    parts: dict[str, tuple[int, int]] | None = None,
    **extra: int | float | str,
) -> InstanceMetadata:
    return InstanceMetadata(
        family=request.family,
        seed=seed,
        parameters={"n": request.n, **request.params, **extra},
        certificate=None if certificate is None else tuple(certificate),
        parts=parts or {},
    )


def generate(request: FamilyRequest, seed: Seed = None) -> Instance:
    """Generate an instance of a named family.

    Family parameters come from `request.params`: `k`, `profile`, `eps`,
    `alpha`, `hubs` (planted); `alpha`, `c2` (dist-d); `k` (disjoint-cycles,
    subdivided); `trees` (forest); `leaves` (star-forest); `rounds`
    (high-girth); `p` (tripartite); `d` (regular-tripartite, subdivided).
    Sizes are derived from n; families of fixed shape use the largest
    instance that fits in n vertices.

    Raises
    ------
        InfeasibleSpecError: The family cannot be realized at this n.

    """
    family, n = request.family, request.n
    seed_value = seed if isinstance(seed, int) else None
    rng = make_rng(seed)

    if family in (Family.C4_LB_G0, Family.C4_LB_G1, Family.C5_LB_G0, Family.C5_LB_G1):
        pair = gen_c4_lb_pair(n) if family.name.startswith("C4") else gen_c5_lb_pair(n)
        if family.value.endswith("g0"):
            return Instance(pair.g0, _metadata(request, seed_value, (), pair.g0_parts))
        return Instance(
            pair.g1,
            _metadata(request, seed_value, pair.certificate, pair.g1_parts),
        )

    if family is Family.DIST_D:
        alpha, c2 = request.integer("alpha", 2), request.integer("c2", DIST_D_C2)
        layout = dist_d_layout(n, alpha, c2)
        return Instance(
            gen_dist_d(n, alpha, rng, c2),
            _metadata(request, seed_value, parts=layout.parts(), d=layout.d),
        )

    if family is Family.PLANTED:
        spec = PlantedSpec(
            n=n,
            k=request.integer("k", 4),
            alpha_target=request.number("alpha", 2.0),
            eps_target=request.number("eps", 1.0),
            profile=PlantedProfile(
                str(request.params.get("profile", PlantedProfile.ALL_LIGHT))
            ),
            hubs=int(request.params["hubs"]) if "hubs" in request.params else None,
        )
        graph, cycles = gen_planted(spec, rng)
        return Instance(graph, _metadata(request, seed_value, cycles.cycles))

    if family is Family.DISJOINT_CYCLES:
        k = request.integer("k", 4)
        graph, cycles = gen_disjoint_cycles(n // k, k)
        return Instance(graph, _metadata(request, seed_value, cycles.cycles))

    if family is Family.FOREST:
        return Instance(
            gen_forest(n, rng, request.integer("trees", 1)),
            _metadata(request, seed_value, ()),
        )

    if family is Family.STAR_FOREST:
        leaves = request.integer("leaves", 3)
        return Instance(
            gen_star_forest(n // (leaves + 1), leaves), _metadata(request, seed_value)
        )

    if family is Family.LINES_POINTS:
        p = _largest_prime(n, lambda q: 2 * q * q)
        return Instance(gen_lines_points(p), _metadata(request, seed_value, (), p=p))

    if family is Family.HIGH_GIRTH:
        rounds = request.integer("rounds", 1)
        p = _largest_prime(n, lambda q: high_girth_size(q, rounds))
        return Instance(
            gen_high_girth(gen_lines_points(p), rounds),
            _metadata(request, seed_value, (), p=p),
        )

    if family is Family.TRIPARTITE:
        size = n // 3
        graph, parts = gen_random_tripartite(
            (size, size, n - 2 * size), request.number("p", 0.5), rng
        )
        metadata = _metadata(request, seed_value, parts=_parts_as_ranges(parts))
        return Instance(graph, metadata)

    if family is Family.REGULAR_TRIPARTITE:
        graph, parts = gen_regular_tripartite(n // 3, request.integer("d", 4), rng)
        metadata = _metadata(request, seed_value, parts=_parts_as_ranges(parts))
        return Instance(graph, metadata)

    return _generate_subdivided(request, seed_value, rng)


def subdivided_base_size(n: int, k: int, d: int) -> int:
    """Return the largest part size whose subdivided graph has at most n vertices."""
    lengths = path_lengths(k)
    per_part = 3 + d // 2 * sum(length - 1 for length in lengths.values())
    return n // per_part


def _generate_subdivided(
    request: FamilyRequest, seed_value: int | None, rng: np.random.Generator
) -> Instance:
    k, d = request.integer("k", 6), request.integer("d", 4)
    n_part = subdivided_base_size(request.n, k, d)
    base, parts = gen_regular_tripartite(n_part, d, rng)
    graph = subdivide_for_ck(base, k, parts)
    return Instance(
        graph,
        _metadata(request, seed_value, parts=_parts_as_ranges(parts), base_n=base.n),
        base=base,
        base_parts=tuple(parts),
        k=k,
    )

