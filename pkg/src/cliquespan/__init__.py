"""Graph spanners in a simulated congested clique, with hitting-set derandomization."""

from .clique import Clique, Message, RoundLedger
from .errors import (
    ConsistencyError,
    HittingSetFailure,
    InputError,
    ParameterError,
    ParseError,
    ResourceError,
    RoutingAdmissibilityError,
    SpannerError,
    UnsupportedK,
)
from .graph import Graph, all_pairs_distances, bfs_truncated, generate, read_edge_list, write_edge_list
from .hitting import HittingSetInstance, derandomized_hitting_set, randomized_hitting_set, solve_hitting
from .nearest import nearest_neighbors
from .partition import classify
from .spanners import (
    SpannerReport,
    baswana_sen,
    deterministic_spanner,
    ok_spanner,
    randomized_spanner,
    run_algorithm,
    small_k_spanner,
)
from .verify import audit_clustering, audit_hitting, audit_stretch

__version__ = "0.1.0"
