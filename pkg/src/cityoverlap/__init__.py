"""City networks from firm-ownership ties, compared across two time points.

Build a weighted directed city graph per year, measure how much of each
city's link set survives between the years (topological overlap), and rank
cities as stable or changing.
"""

from .errors import (
    CityNetError,
    FormatError,
    NodeLookupError,
    SelfLoopError,
    SnapshotStateError,
    ValidationError,
)
from .graph import (
    NodeRegistry,
    Snapshot,
    in_weights,
    load_edgelist,
    out_weights,
    read_edgelist,
    register_node,
    save_edgelist,
    upsert_edge,
    write_edgelist,
)
from .ingest import OwnershipRecord, aggregate_city_graph, parse_ownership_file
from .metrics import (
    DegreeDirection,
    Direction,
    Mode,
    NetworkStats,
    OverlapScore,
    average_path_length,
    degree_centrality,
    network_stats,
    topological_overlap,
    topological_overlap_all,
    transitivity,
)
from .pipeline import (
    DcSource,
    RankingReport,
    dc_change_ranking,
    joint_comparison,
    rank_stability,
    shortlist,
)
from .synth import SynthConfig, generate_pair

__version__ = "0.1.0"
