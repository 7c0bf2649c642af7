"""Constants for cyclefree."""

import logging
from enum import StrEnum

from awesomeversion import AwesomeVersion

LOGGER = logging.getLogger(__package__)

SCHEMA_VERSION = AwesomeVersion("1.0")
MIN_SUPPORTED_SCHEMA = AwesomeVersion("1.0")

# Caps for the exhaustive routines.
EXACT_ARBORICITY_MAX_N = 20
PATTERN_MAX_K = 12
CYCLE_MAX_K = 12
ENUMERATION_MAX_N = 10_000
EXACT_DISTANCE_MAX_M = 18

# Tester constants. t_mult and s1_mult are the values used in the C4 proof
# (t = 500/eps, s1 = 512 * sqrt(d(v)/eps)); the rest were calibrated once
# against the acceptance runs and are frozen here.
DEFAULT_C1 = 1.0
DEFAULT_T_MULT = 500.0
DEFAULT_S1_MULT = 512.0
DEFAULT_S2_MULT = 4.0
DEFAULT_C6_T_MULT = 0.02
DEFAULT_SELECT_MULT = 8.0
DEFAULT_SAMPLE_MULT = 1.0
DEFAULT_EDGE_SAMPLE_MULT = 1.0
DEFAULT_CAP_MULT = 1.0
DEFAULT_EDGE_CAP_MULT = 32.0

# Generators.
GENERATION_MAX_TRIES = 8
REPAIR_ATTEMPTS_PER_EDGE = 50
DIST_D_C2 = 4
DEFAULT_HUBS = {
    "one-heavy": 4,
    "two-heavy": 4,
    "three-heavy": 3,
}

# Experiments.
DEFAULT_TRIALS = 200
DEFAULT_WORKERS = 4
INSTANCE_CACHE_SIZE = 8


class TesterId(StrEnum):
    """Testers that can be run by name."""

    C4 = "c4"
    C5 = "c5"
    C6 = "c6"
    F = "f"
    CK_ODD = "ck-odd"


class Family(StrEnum):
    """Instance families known to the generators."""

    C4_LB_G0 = "c4-lb-g0"
    C4_LB_G1 = "c4-lb-g1"
    C5_LB_G0 = "c5-lb-g0"
    C5_LB_G1 = "c5-lb-g1"
    DIST_D = "dist-d"
    PLANTED = "planted"
    DISJOINT_CYCLES = "disjoint-cycles"
    FOREST = "forest"
    STAR_FOREST = "star-forest"
    LINES_POINTS = "lines-points"
    HIGH_GIRTH = "high-girth"
    TRIPARTITE = "tripartite"
    REGULAR_TRIPARTITE = "regular-tripartite"
    SUBDIVIDED = "subdivided"


class PlantedProfile(StrEnum):
    """Degree profile of a planted instance.

    Each profile exercises one case of the detection analysis: all cycle
    vertices light, one heavy hub per cycle, two hubs per cycle (C4/C5) or
    three hubs per cycle (C6).
    """

    ALL_LIGHT = "all-light"
    ONE_HEAVY = "one-heavy"
    TWO_HEAVY = "two-heavy"
    THREE_HEAVY = "three-heavy"


class VerdictKind(StrEnum):
    """Outcome of a tester run."""

    ACCEPT = "accept"
    REJECT = "reject"


QUERY_TYPES = ("degree", "neighbor", "pair", "total")
QUANTILES = (("p50", 50.0), ("p90", 90.0))

CSV_COLUMNS = (
    "n",
    "m",
    "trials",
    "reject_count",
    "reject_rate",
    *(
        f"{query}_{name}"
        for query in QUERY_TYPES
        for name in ("p50", "p90", "max")
    ),
    "distance_lower",
    "distance_upper",
)
