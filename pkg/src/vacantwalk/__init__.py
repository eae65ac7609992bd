"""Monte Carlo laboratory for the vacant set left by random walks on random graphs.

A random walk on a graph gradually erodes the set of unvisited vertices;
the subgraph this vacant set induces passes through a sharp phase
transition at a predictable number of steps.  The package generates random
regular, G(n,p), and directed D(n,p) graphs, drives seeded walks over them
(including a deferred-decision coupling that builds the pairing only as the
walk explores it), decomposes vacant subgraphs into components, and
compares every measurement against the closed-form predictions in
`vacantwalk.theory`.
"""

__version__ = "0.1.0"

from .components import (
    ComponentDecomposition,
    VacantSnapshot,
    decompose_vacant,
    decompose_vacant_strong,
    snapshot_statistics,
    vacant_degree_histogram,
)
from .experiments import (
    AggregateReport,
    CoverTimeReport,
    CrossValidation,
    ExperimentConfig,
    PairingUniformity,
    ReportRow,
    ScanReport,
    TrialRecord,
    cover_time_trials,
    critical_window_scan,
    early_connectivity_check,
    resampling_crossvalidation,
    pairing_uniformity_test,
    run_dnp_experiment,
    run_experiment,
    run_gnp_experiment,
    run_regular_experiment,
)
from .graphs import (
    Digraph,
    DnpParams,
    GnpParams,
    Graph,
    RegularParams,
    generate_dnp,
    generate_gnp,
    generate_regular,
    pairing_edges,
    random_pairing,
    sample_configuration,
    underlying_graph,
)
from .pairing import PairingState, finalize_pairing
from .theory import (
    GnpSchedule,
    RegularPrediction,
    TreeSizeThresholds,
    count_subtrees_by_enumeration,
    cover_time_estimate,
    critical_time,
    degree_profile,
    er_giant_fraction,
    expected_tree_count,
    expected_vacant_count,
    extinction_prob,
    giant_fraction,
    gnp_schedule,
    molloy_reed_criterion,
    molloy_reed_weighted_sum,
    return_constant,
    root_subtree_count,
    tree_size_thresholds,
    vacant_neighbor_prob,
)
from .walk import (
    NicenessReport,
    ReturnEstimate,
    UnvisitEstimate,
    WalkRun,
    burn_in_steps,
    choose_nice_vertices,
    classify_nice,
    cover_time,
    estimate_returns,
    run_with_snapshots,
    unvisit_probability,
)

__all__ = [name for name in dir() if not name.startswith("_")]
