"""Learned vertex pruning for exact maximum clique enumeration."""

from .althea import (
    AltheaResult,
    DegreeStats,
    SymbolModel,
    althea_run,
    categorize,
    degree_stats,
    significance,
    symbol_probabilities,
)
from .classifier import (
    LabeledSet,
    LinearModel,
    accuracy,
    build_training_set,
    coefficient_report,
    log_loss,
    train,
)
from .errors import (
    ConfigError,
    DegenerateGraphError,
    DegenerateLabelsError,
    GraphFormatError,
    GraphParseError,
    MultistageFitError,
    SolverTimeout,
)
from .features import (
    EDGE_FEATURE_NAMES,
    VERTEX_FEATURE_NAMES,
    FeatureMatrix,
    FeatureProfile,
    chi_square,
    color_rule_deletable_edges,
    compute_vertex_features,
    edge_features,
    expected_order_k_lcc,
    order4_lcc,
    order_k_lcc,
    vertex_features,
)
from .graph import (
    Coloring,
    EigenResult,
    Graph,
    eigencentrality,
    greedy_coloring,
    induced_subgraph,
    k_core_prune,
    load_edge_list,
    local_clustering,
    save_dimacs,
    save_edge_list,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .randgraph import (
    PlantedInstance,
    build_planted_corpus,
    corpus_from_manifest,
    expected_clique_number,
    gen_gnp,
    plant_clique,
)
from .solver import (
    MceResult,
    enumerate_maximum_cliques,
    evaluate,
    is_clique,
    omega_oracle_prune,
)
from .sparsify import (
    PRESETS,
    PruneConfig,
    PruneReport,
    fit_multistage,
    prune_once,
    run_strategy,
)

__version__ = "0.1.0"
