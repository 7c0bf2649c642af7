"""Experiment runner: trial batches over an n sweep, scaling fits and CSV output."""

from __future__ import annotations

import asyncio
import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Self

import numpy as np
from cachetools import LRUCache

from .const import (
    CSV_COLUMNS,
    DEFAULT_WORKERS,
    ENUMERATION_MAX_N,
    INSTANCE_CACHE_SIZE,
    LOGGER,
    QUANTILES,
    QUERY_TYPES,
    TesterId,
)
from .exact import bounds_from_set, certify_cycle_set, distance_bounds, is_free
from .exceptions import ParameterError
from .generators import FamilyRequest, Instance, generate
from .graph import PatternGraph
from .models import DistanceBounds, ExperimentRow, ScalingFit
from .oracle import OracleSession
from .subdivision import subdivided_session
from .testers import run_tester, tester_pattern
from .utils import derive_seed

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .models import ExperimentSpec, QueryStats, TesterParams, Verdict
    from .oracle import QueryAccess


def distance_sandwich(instance: Instance, pattern: PatternGraph) -> DistanceBounds:
    """Return the certified distance sandwich of an instance.

    A generator certificate of k-cycles is checked and used directly; its
    maximality is only decided below the enumeration cap. Without a usable
    certificate, small graphs get a greedy maximal set. Large graphs without
    one get the trivial sandwich, tightened to 0 for C4-free graphs.
    """
    graph = instance.graph
    small = graph.n <= ENUMERATION_MAX_N
    if not pattern.is_cycle():
        return DistanceBounds(
            k=pattern.k, size=0, m=graph.m, maximal=small and is_free(graph, pattern)
        )
    k = pattern.k
    certificate = instance.certificate
    if certificate and all(len(cycle) == k for cycle in certificate):
        return bounds_from_set(
            graph, certify_cycle_set(graph, certificate, k, check_maximal=small)
        )
    if small:
        return distance_bounds(graph, k)
    return DistanceBounds(k=k, size=0, m=graph.m, maximal=k == 4 and is_free(graph, 4))


def open_session(
    instance: Instance, seed: np.random.SeedSequence | int | None
) -> QueryAccess:
    """Return query access to an instance.

    Subdivided instances are tested through the on-the-fly subdivision
    oracle over their base graph.
    """
    base, parts, k = instance.base, instance.base_parts, instance.k
    if base is not None and parts is not None and k is not None:
        return subdivided_session(OracleSession(base, seed=seed), k, parts, seed)
    return OracleSession(instance.graph, seed=seed)


def summarize(stats: Sequence[QueryStats]) -> dict[str, float]:
    """Return p50, p90 and max of every query type over a batch of runs."""
    columns = {
        "degree": [s.degree for s in stats],
        "neighbor": [s.neighbor for s in stats],
        "pair": [s.pair for s in stats],
        "total": [s.total for s in stats],
    }
    summary: dict[str, float] = {}
    for query in QUERY_TYPES:
        values = np.asarray(columns[query], dtype=np.float64)
        for name, q in QUANTILES:
            summary[f"{query}_{name}"] = float(np.percentile(values, q))
        summary[f"{query}_max"] = float(values.max())
    return summary


@dataclass
class Experiment:
    """Run an experiment spec, trial-parallel on a thread pool.

    One tester run is one session and runs on one worker thread. Rows come
    out in sweep order and every trial seed depends only on the master
    seed, n and the trial index, so the worker count never changes a row.
    """

    spec: ExperimentSpec
    workers: int = DEFAULT_WORKERS
    executor: ThreadPoolExecutor | None = None

    params: TesterParams = field(init=False, repr=False)
    pattern: PatternGraph = field(init=False, repr=False)

    _close_executor: bool = False
    _instances: LRUCache[int, Instance] = field(
        default_factory=lambda: LRUCache(maxsize=INSTANCE_CACHE_SIZE), repr=False
    )

    def __post_init__(self) -> None:
        """Validate the runner configuration."""
        if self.workers < 1:
            msg = f"workers must be at least 1, got {self.workers}"
            raise ParameterError(msg)
        spec = self.spec
        if spec.tester is TesterId.F and not spec.pattern:
            msg = "The general subgraph tester needs a pattern"
            raise ParameterError(msg)
        if spec.tester is TesterId.CK_ODD and spec.k is None:
            msg = "The odd cycle tester needs k"
            raise ParameterError(msg)
        self.params = spec.params()
        self.pattern = tester_pattern(
            spec.tester,
            k=spec.k,
            pattern=PatternGraph.parse(spec.pattern) if spec.pattern else None,
        )

    def instance(self, n: int) -> Instance:
        """Return the instance of size n, generated once per runner."""
        if (cached := self._instances.get(n)) is not None:
            return cached
        request = FamilyRequest(self.spec.family, n, dict(self.spec.family_params))
        instance = generate(request, derive_seed(self.spec.master_seed, n))
        self._instances[n] = instance
        return instance

    def trial(self, instance: Instance, n: int, index: int) -> Verdict:
        """Run one independent tester session."""
        spec = self.spec
        return run_tester(
            spec.tester,
            open_session(instance, derive_seed(spec.master_seed, n, index)),
            self.params,
            k=spec.k,
            pattern=self.pattern,
            m_hint=max(instance.graph.m, 1),
        )

    async def run_point(self, n: int) -> ExperimentRow:
        """Generate, certify and test one sweep point."""
        if self.executor is None:
            self.executor = ThreadPoolExecutor(max_workers=self.workers)
            self._close_executor = True
        loop = asyncio.get_running_loop()
        started = time.perf_counter()

        instance = await loop.run_in_executor(self.executor, self.instance, n)
        bounds = await loop.run_in_executor(
            self.executor, distance_sandwich, instance, self.pattern
        )
        LOGGER.debug(
            "n=%s: m=%s, distance in [%s, %s]",
            n,
            instance.graph.m,
            bounds.lower,
            bounds.upper,
        )
        verdicts = await asyncio.gather(
            *(
                loop.run_in_executor(self.executor, self.trial, instance, n, index)
                for index in range(self.spec.trials)
            )
        )
        row = ExperimentRow(
            n=n,
            m=instance.graph.m,
            trials=self.spec.trials,
            reject_count=sum(verdict.rejected for verdict in verdicts),
            quantiles=summarize([verdict.queries for verdict in verdicts]),
            distance_lower=bounds.lower,
            distance_upper=bounds.upper,
            wall_time=time.perf_counter() - started,
        )
        LOGGER.debug("n=%s: %s/%s rejections", n, row.reject_count, row.trials)
        return row

    async def run(self) -> list[ExperimentRow]:
        """Run every sweep point, in sweep order."""
        return [await self.run_point(n) for n in self.spec.n_sweep]

    async def close(self) -> None:
        """Shut down the thread pool, if this runner created it."""
        if self.executor and self._close_executor:
            self.executor.shutdown(wait=True)
            self.executor = None
            self._close_executor = False

    async def __aenter__(self) -> Self:
        """Async enter.

        Returns
        -------
            The Experiment object.

        """
        return self

    async def __aexit__(self, *_exc_info: object) -> None:
        """Async exit.

        Args:
        ----
            _exc_info: Exec type.

        """
        await self.close()


async def _run(spec: ExperimentSpec, workers: int) -> list[ExperimentRow]:
    async with Experiment(spec, workers=workers) as runner:
        return await runner.run()


def run_experiment(
    spec: ExperimentSpec, workers: int = DEFAULT_WORKERS
) -> list[ExperimentRow]:
    """Run an experiment spec to completion and return one row per sweep point."""
    return asyncio.run(_run(spec, workers))


def fit_scaling(rows: Sequence[ExperimentRow], column: str = "total_p50") -> ScalingFit:
    """Fit log2(queries) = slope * log2(n) + intercept by least squares.

    Rows whose query quantile is zero carry no information on a log scale
    and are skipped.

    Raises
    ------
        ParameterError: Fewer than two usable rows, or a single n.

    """
    points = [
        (row.n, row.quantiles[column]) for row in rows if row.quantiles[column] > 0
    ]
    if len(points) < 2 or len({n for n, _ in points}) < 2:
        msg = f"A scaling fit needs two distinct n with positive {column}"
        raise ParameterError(msg)
    x = np.log2(np.asarray([n for n, _ in points], dtype=np.float64))
    y = np.log2(np.asarray([q for _, q in points], dtype=np.float64))
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 if ss_tot == 0 else 1.0 - float((residual**2).sum()) / ss_tot
    return ScalingFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        points=len(points),
    )


def csv_bytes(rows: Sequence[ExperimentRow]) -> bytes:
    """Return the rows as CSV with the fixed column list; wall time is left out."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.csv_record())
    return buffer.getvalue().encode()


def write_csv(rows: Sequence[ExperimentRow], path: str | Path) -> None:
    """Write the rows as CSV."""
    Path(path).write_bytes(csv_bytes(rows))
