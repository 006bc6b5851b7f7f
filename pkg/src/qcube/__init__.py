"""Random subgraphs of the n-cube: sampling, degree structure, components,
and extreme adjacency eigenvalues, with a Monte Carlo verification harness."""

from .analysis import (
    ComponentCensus,
    ComponentSummary,
    DegreeProfile,
    components,
    degree_profile,
    subcube_high_degree_census,
    tail_count,
)
from .families import FamilyKind, ProbabilityFamily, parse_family, resolve_family
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    TrialRecord,
    emit,
    load_config,
    parse_config,
    run_experiment,
)
from .hypercube import (
    SubcubeDescriptor,
    decode_edge,
    edge_count,
    encode_edge,
    neighbors,
    subcube_decompose,
    vertex_count,
)
from .sampler import (
    EdgeProbability,
    SubgraphSample,
    coupled_edge_ids,
    expected_edge_count,
    read_edge_list,
    sample_from_edge_ids,
    sample_from_endpoints,
    sample_subgraph,
    write_edge_list,
)
from .spectral import (
    DecompositionResult,
    EigenvalueCountCertificate,
    SpectralEstimate,
    component_lambda_max,
    decomposition_bound,
    dense_spectrum,
    eigencount_certificate,
    eigenvalue_count_at_least,
    lambda_max,
    lambda_max_by_components,
    row_sum_A2,
    select_distance3_family,
    symmetry_check,
    two_step_count,
)
from .theory import (
    PartitionThresholds,
    Regime,
    RegimePrediction,
    VertexPartition,
    classify_regime,
    concentration_bounds,
    empty_graph_prob,
    kappa,
    log_expected_tail_count,
    thresholds,
    vertex_partition,
)

__version__ = "0.1.0"
