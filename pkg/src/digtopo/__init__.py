"""Digital topology toolkit.

Models finite digital images as graphs, enumerates and searches their
continuous self-maps, and decides subset properties that constrain those
maps: freezing sets, cold sets, and (m, n)-limiting sets, together with
the metric and structural bounds that govern them.
"""

from .errors import (
    BadAdjacency,
    BadCycleLength,
    BadEdge,
    BudgetExceeded,
    DigitalTopologyError,
    Disconnected,
    DomainMismatch,
    EmptySubset,
    InputFileError,
    NotACycle,
    NotAnMMap,
    NotAProduct,
    NotAValidTriple,
    NotEmbedded,
    Unclassifiable,
)
from .image import (
    INF,
    AdjacencyKind,
    DigitalImage,
    apply_grid_isometry,
    boundary,
    build_box,
    build_cycle,
    build_explicit,
    build_from_points,
    cycle_grid,
    diameter,
    full_mask,
    induced,
    is_dominating,
    is_k_cover,
    is_tree,
    leaves,
    map_mask,
    mask_from_indices,
    mask_from_points,
    mask_indices,
    mask_points,
    metric,
    metric_ball,
    product,
    unique_shortest_path,
)
from .limiting import (
    FactorReport,
    LimitingVerdict,
    MinimalSetResult,
    boundary_cold_condition,
    cover_displacement_bound,
    cycle_triple_bound,
    factor_limitedness,
    find_minimal_limiting_sets,
    is_freezing,
    is_limiting,
    is_minimal_limiting,
    is_s_cold,
    limiting_profile,
    retract_displacement_bound,
    surjectivity_threshold,
)
from .maps import (
    CycleMapClass,
    FLIP_ROTATION,
    MapTable,
    NONSURJECTIVE,
    ROTATION,
    SearchOutcome,
    classify_cycle_map,
    compose,
    constant,
    continuous_maps_between,
    cycle_indexing,
    displacement,
    enumerate_continuous_self_maps,
    fixed_points,
    flip_map,
    from_point_function,
    identity,
    is_continuous,
    is_homotopic,
    is_n_map,
    is_n_map_on,
    is_retraction,
    is_rigid,
    iter_counterexamples,
    only_identity_is_1map,
    rotation,
    run_counterexample_search,
    search_counterexample,
)
from .metrics import (
    check_diameter_bound,
    hausdorff,
    metric_of_continuity,
    subset_diameter_ambient,
    subset_diameter_induced,
)

__version__ = "0.1.0"
