"""Models for cyclefree."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import TYPE_CHECKING, Any

from awesomeversion import AwesomeVersion
from mashumaro.config import BaseConfig
from mashumaro.mixins.orjson import DataClassORJSONMixin
from mashumaro.types import SerializationStrategy

from .const import (
    DEFAULT_C1,
    DEFAULT_C6_T_MULT,
    DEFAULT_CAP_MULT,
    DEFAULT_EDGE_CAP_MULT,
    DEFAULT_EDGE_SAMPLE_MULT,
    DEFAULT_S1_MULT,
    DEFAULT_S2_MULT,
    DEFAULT_SAMPLE_MULT,
    DEFAULT_SELECT_MULT,
    DEFAULT_T_MULT,
    DEFAULT_TRIALS,
    MIN_SUPPORTED_SCHEMA,
    SCHEMA_VERSION,
    Family,
    PlantedProfile,
    TesterId,
    VerdictKind,
)
from .exceptions import ParameterError, UnsupportedSchemaError
from .utils import get_awesome_version, natural_log

if TYPE_CHECKING:
    from collections.abc import Mapping


class AwesomeVersionSerializationStrategy(SerializationStrategy, use_annotations=True):
    """Serialization strategy for AwesomeVersion objects."""

    def serialize(self, value: AwesomeVersion) -> str:
        """Serialize AwesomeVersion object to string."""
        return str(value)

    def deserialize(self, value: str) -> AwesomeVersion:
        """Deserialize string to AwesomeVersion object."""
        return get_awesome_version(value)


class BaseModel(DataClassORJSONMixin):
    """Base model for all cyclefree models."""

    # pylint: disable-next=too-few-public-methods
    class Config(BaseConfig):
        """Mashumaro configuration."""

        omit_none = True
        serialization_strategy = {  # noqa: RUF012
            AwesomeVersion: AwesomeVersionSerializationStrategy(),
        }
        serialize_by_alias = True


def _check_schema(d: dict[Any, Any], payload: str) -> dict[Any, Any]:
    """Reject payloads written with a schema older than we can read."""
    version = get_awesome_version(str(d.get("schema_version", SCHEMA_VERSION)))
    if version < MIN_SUPPORTED_SCHEMA:
        msg = (
            f"Unsupported {payload} schema version {version}. "
            f"Minimum supported version is {MIN_SUPPORTED_SCHEMA}."
        )
        raise UnsupportedSchemaError(msg)
    return d


@dataclass(frozen=True, kw_only=True)
class QueryStats(BaseModel):
    """Query counters of one oracle session."""

    degree: int = 0
    neighbor: int = 0
    pair: int = 0

    wall_time: float | None = None
    """Seconds spent in the tester, when measured."""

    @property
    def total(self) -> int:
        """Return the total number of queries."""
        return self.degree + self.neighbor + self.pair

    def __post_serialize__(self, d: dict[Any, Any]) -> dict[Any, Any]:
        """Add the derived total to the serialized counters."""
        d["total"] = self.total
        return d

    @classmethod
    def __pre_deserialize__(cls, d: dict[Any, Any]) -> dict[Any, Any]:
        """Drop the derived total; it is recomputed."""
        d = dict(d)
        d.pop("total", None)
        return d


@dataclass(frozen=True)
class Thresholds:
    """Degree thresholds of one tester run on an n-vertex graph."""

    theta0: float
    theta1: float

    @property
    def theta_min(self) -> float:
        """Return min(theta0, theta1)."""
        return min(self.theta0, self.theta1)


_MULTIPLIERS = (
    "c1",
    "t_mult",
    "s1_mult",
    "s2_mult",
    "c6_t_mult",
    "select_mult",
    "sample_mult",
    "edge_sample_mult",
    "cap_mult",
    "edge_cap_mult",
)


@dataclass(frozen=True, kw_only=True)
class TesterParams(BaseModel):  # pylint: disable=too-many-instance-attributes
    """Every tunable of the testers.

    Sample sizes are fixed up to a constant factor; each constant is a field
    here so it can be overridden per run.
    """

    eps: float
    """Distance parameter, in (0, 1]."""

    alpha: float = 2.0
    """Upper bound on the arboricity of the tested graph."""

    c1: float = DEFAULT_C1
    """Constant of the very-high-degree threshold theta1."""

    t_mult: float = DEFAULT_T_MULT
    """Repetitions of the C4/C5 testers: t = ceil(t_mult / eps)."""

    s1_mult: float = DEFAULT_S1_MULT
    """Neighbor samples: s1 = ceil(s1_mult * sqrt(d(v) / eps))."""

    s2_mult: float = DEFAULT_S2_MULT
    """Constant of the number of random walks from very-high-degree vertices."""

    c6_t_mult: float = DEFAULT_C6_T_MULT
    """Repetitions of the C6 tester: t = ceil(c6_t_mult * ln^3(n) / eps^3)."""

    select_mult: float = DEFAULT_SELECT_MULT
    """Rounds of Select-an-Edge: ceil(select_mult * theta0)."""

    sample_mult: float = DEFAULT_SAMPLE_MULT
    """Constant of the vertex sample of the general subgraph tester."""

    edge_sample_mult: float = DEFAULT_EDGE_SAMPLE_MULT
    """Constant of the edge and vertex samples of the odd cycle tester."""

    cap_mult: float = DEFAULT_CAP_MULT
    """Multiplier of the average-degree query cap."""

    edge_cap_mult: float = DEFAULT_EDGE_CAP_MULT
    """Safety factor on the rounds of the uniform light-edge sampler."""

    def __post_init__(self) -> None:
        """Validate ranges."""
        if not 0 < self.eps <= 1:
            msg = f"eps must be in (0, 1], got {self.eps}"
            raise ParameterError(msg)
        if self.alpha < 1:
            msg = f"alpha must be at least 1, got {self.alpha}"
            raise ParameterError(msg)
        for name in _MULTIPLIERS:
            if getattr(self, name) <= 0:
                msg = f"{name} must be positive, got {getattr(self, name)}"
                raise ParameterError(msg)

    @property
    def theta0(self) -> float:
        """Return the light-vertex threshold 4 * alpha / eps."""
        return 4 * self.alpha / self.eps

    def thresholds(self, n: int, tester: TesterId = TesterId.C4) -> Thresholds:
        """Return the thresholds of a run on an n-vertex graph.

        Args:
        ----
            n: Number of vertices of the tested graph.
            tester: The C6 tester uses the polylogarithmic theta1; all
                others use c1 * sqrt(n) / eps.

        Returns:
        -------
            The thresholds theta0 and theta1.

        """
        root = math.sqrt(max(n, 1))
        if tester is TesterId.C6:
            theta1 = self.c1 * root * natural_log(n) ** 2 / self.eps**2
        else:
            theta1 = self.c1 * root / self.eps
        return Thresholds(theta0=self.theta0, theta1=theta1)

    def with_overrides(self, overrides: Mapping[str, float]) -> TesterParams:
        """Return a copy with some fields replaced.

        Raises
        ------
            ParameterError: Unknown field name or invalid value.

        """
        known = {item.name for item in fields(self)}
        if unknown := sorted(set(overrides) - known):
            msg = f"Unknown tester parameter(s): {', '.join(unknown)}"
            raise ParameterError(msg)
        return replace(self, **{key: float(value) for key, value in overrides.items()})


@dataclass(frozen=True, kw_only=True)
class Verdict(BaseModel):
    """Result of a tester run.

    A Reject always carries the witness it was found with; the witness has
    been checked against the explored subgraph before the verdict is built.
    """

    verdict: VerdictKind
    witness: tuple[int, ...] | None = None
    queries: QueryStats = field(default_factory=QueryStats)
    seed: int | None = None

    spawn_key: tuple[int, ...] | None = None
    """Spawn key of a seed sequence derived from `seed`, for repeated trials."""

    tester: str | None = None

    aborted: bool = False
    """True when the run hit a query cap and accepted without finishing."""

    @property
    def rejected(self) -> bool:
        """Return if the tester rejected."""
        return self.verdict is VerdictKind.REJECT


@dataclass(frozen=True, kw_only=True)
class ArboricityBound(BaseModel):
    """Upper bounds on the arboricity of a graph."""

    degeneracy: int
    exact_nash_williams: int | None = None


@dataclass(frozen=True, kw_only=True)
class DisjointCycleSet(BaseModel):
    """Pairwise edge-disjoint k-cycles of one graph."""

    k: int
    cycles: tuple[tuple[int, ...], ...] = ()

    maximal: bool = False
    """True when no further k-cycle is edge-disjoint from the set."""

    def __len__(self) -> int:
        """Return the number of cycles."""
        return len(self.cycles)


@dataclass(frozen=True, kw_only=True)
class DistanceBounds(BaseModel):
    """Sandwich on the distance to C_k-freeness from an edge-disjoint set S.

    The lower bound holds for any such set; the upper bound needs S maximal
    and is 1 otherwise.
    """

    k: int
    size: int
    m: int
    maximal: bool = True

    @property
    def lower(self) -> float:
        """Return |S| / m."""
        return self.size / self.m if self.m else 0.0

    @property
    def upper(self) -> float:
        """Return min(1, k * |S| / m), or 1 for a set not known to be maximal."""
        if not self.maximal:
            return 1.0 if self.m else 0.0
        return min(1.0, self.k * self.size / self.m) if self.m else 0.0

    def __post_serialize__(self, d: dict[Any, Any]) -> dict[Any, Any]:
        """Add the derived bounds."""
        d["lower"] = self.lower
        d["upper"] = self.upper
        return d

    @classmethod
    def __pre_deserialize__(cls, d: dict[Any, Any]) -> dict[Any, Any]:
        """Drop the derived bounds."""
        return {key: value for key, value in d.items() if key not in {"lower", "upper"}}


@dataclass(frozen=True, kw_only=True)
class VerifyReport(BaseModel):
    """Ground truth of one graph for C_k, as printed by `verify`."""

    k: int
    count: int
    greedy_size: int
    lower: float
    upper: float


@dataclass(frozen=True, kw_only=True)
class PlantedSpec(BaseModel):
    """Request for a planted far-from-C_k-free instance."""

    n: int
    k: int
    alpha_target: float = 2.0
    """Arboricity bound; the graph keeps degeneracy at most alpha_target + 2."""

    eps_target: float = 1.0
    """Fraction of the edges that lie on planted edge-disjoint cycles."""

    profile: PlantedProfile = PlantedProfile.ALL_LIGHT

    hubs: int | None = None
    """Number of heavy hubs; None tries the profile default, then fewer."""

    def __post_init__(self) -> None:
        """Validate the request."""
        if self.k < 3:
            msg = f"k must be at least 3, got {self.k}"
            raise ParameterError(msg)
        if self.alpha_target < 1:
            msg = f"alpha_target must be at least 1, got {self.alpha_target}"
            raise ParameterError(msg)
        if not 0 < self.eps_target <= 1:
            msg = f"eps_target must be in (0, 1], got {self.eps_target}"
            raise ParameterError(msg)
        if self.profile is PlantedProfile.TWO_HEAVY and self.k not in (4, 5):
            msg = "The two-heavy profile exists for C4 and C5 only"
            raise ParameterError(msg)
        if self.profile is PlantedProfile.THREE_HEAVY and self.k != 6:
            msg = "The three-heavy profile exists for C6 only"
            raise ParameterError(msg)


@dataclass(frozen=True, kw_only=True)
class DegreeLabels(BaseModel):
    """Light/heavy labelling of an instance at given tester thresholds."""

    theta0: float
    theta1: float
    light: int
    heavy: tuple[int, ...] = ()
    very_heavy: tuple[int, ...] = ()


@dataclass(kw_only=True)
class InstanceMetadata(BaseModel):
    """JSON sidecar written next to a generated edge list."""

    schema_version: AwesomeVersion = field(default_factory=lambda: SCHEMA_VERSION)
    family: Family
    seed: int | None = None
    parameters: dict[str, int | float | str] = field(default_factory=dict)
    certificate: tuple[tuple[int, ...], ...] | None = None

    parts: dict[str, tuple[int, int]] = field(default_factory=dict)
    """Named vertex parts as half-open id ranges [start, stop)."""

    labels: DegreeLabels | None = None

    @classmethod
    def __pre_deserialize__(cls, d: dict[Any, Any]) -> dict[Any, Any]:
        """Pre deserialize hook for InstanceMetadata object."""
        return _check_schema(d, "instance")


@dataclass(kw_only=True)
class ExperimentSpec(BaseModel):  # pylint: disable=too-many-instance-attributes
    """One experiment: a tester run over a sweep of instance sizes."""

    schema_version: AwesomeVersion = field(default_factory=lambda: SCHEMA_VERSION)
    tester: TesterId
    family: Family
    family_params: dict[str, int | float | str] = field(default_factory=dict)
    n_sweep: tuple[int, ...]
    eps: float
    alpha: float = 2.0

    k: int | None = None
    """Cycle length of the odd cycle tester."""

    pattern: str | None = None
    """Pattern name of the general subgraph tester, for example `C4` or `K1,3`."""

    overrides: dict[str, float] = field(default_factory=dict)
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    output: str | None = None

    def __post_init__(self) -> None:
        """Validate trials, sweep and overrides."""
        if self.trials < 1:
            msg = f"trials must be at least 1, got {self.trials}"
            raise ParameterError(msg)
        if not self.n_sweep:
            msg = "The n sweep is empty"
            raise ParameterError(msg)
        if bad := sorted(key for key, value in self.overrides.items() if value <= 0):
            msg = f"Overrides must be positive: {', '.join(bad)}"
            raise ParameterError(msg)

    @classmethod
    def __pre_deserialize__(cls, d: dict[Any, Any]) -> dict[Any, Any]:
        """Pre deserialize hook for ExperimentSpec object."""
        return _check_schema(d, "experiment")

    def params(self) -> TesterParams:
        """Return the tester parameters of this experiment."""
        return TesterParams(eps=self.eps, alpha=self.alpha).with_overrides(
            self.overrides
        )


@dataclass(frozen=True, kw_only=True)
class ExperimentRow(BaseModel):  # pylint: disable=too-many-instance-attributes
    """Aggregated trials of one sweep point."""

    n: int
    m: int
    trials: int
    reject_count: int
    quantiles: dict[str, float]
    """Keys `<type>_<p50|p90|max>` for degree, neighbor, pair and total."""

    distance_lower: float
    distance_upper: float
    wall_time: float | None = None

    @property
    def reject_rate(self) -> float:
        """Return reject_count / trials."""
        return self.reject_count / self.trials

    def csv_record(self) -> dict[str, int | float]:
        """Return the row keyed by CSV column."""
        return {
            "n": self.n,
            "m": self.m,
            "trials": self.trials,
            "reject_count": self.reject_count,
            "reject_rate": self.reject_rate,
            **self.quantiles,
            "distance_lower": self.distance_lower,
            "distance_upper": self.distance_upper,
        }


@dataclass(frozen=True, kw_only=True)
class ScalingFit(BaseModel):
    """Least-squares fit of log2(p50 queries) against log2(n)."""

    slope: float
    intercept: float
    r_squared: float
    points: int
