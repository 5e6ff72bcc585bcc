"""Fractional repetition codes as incidence structures."""

from .bounds import (
    BoundReport,
    Certificate,
    FrParams,
    binomial_bound,
    bound_report,
    dual_bound,
    g_prime,
    optimality_certificate,
    recursive_g,
    silberstein_min_k,
)
from .constructions import (
    GraphSpec,
    complete_graph_code,
    fixture,
    from_regular_graph,
    load_database,
    petersen_graph,
)
from .hierarchy import (
    BudgetExceeded,
    FileSizeHierarchy,
    ParetoPoint,
    full_hierarchy,
    hierarchy_via_dual,
    n_value,
    pareto_points,
    supported_file_size,
    supported_file_size_bruteforce,
)
from .incidence import (
    FormatError,
    FrCode,
    IncidenceStructure,
    RegularityReport,
    dual,
    from_matrix,
    is_simple,
    parse_text,
    to_text,
    validate_fr,
)
from .storage import StorageSystem, encode_and_place

__version__ = "0.1.0"
