"""rankmix: clustering partially observed ranking data from mixtures of
random utility models, via pairwise-marginal embeddings, hard singular value
thresholding, and single-linkage clustering.
"""

from .clustering import ClusteringResult, select_t2, single_linkage
from .estimation import (
    DEFAULT_CONSTANTS,
    ConcentrationConstants,
    HsvtEstimate,
    ObservationMatrix,
    SpectralGapReport,
    SvdResult,
    compute_svd,
    delta_bound,
    estimate_p_hat,
    hsvt,
    hsvt_projector,
    k_of_p,
    select_threshold,
    spectral_gap_check,
)
from .evaluation import (
    CorollaryReport,
    EvaluationReport,
    corollary_condition_check,
    empirical_tau,
    gamma_lower_bound_gaussian,
    gamma_lower_bound_mnl,
    misclassification_rate,
    psi2_norm,
    separation_gamma,
)
from .experiments import (
    EXP2_COLUMNS,
    EXP3_COLUMNS,
    EXPERIMENTS,
    ExperimentConfig,
    default_config,
    run_experiment,
)
from .fileio import (
    read_key_values,
    read_labels,
    read_matrix,
    read_mixture_spec,
    read_rankings,
    write_key_values,
    write_labels,
    write_matrix,
    write_mixture_spec,
    write_rankings,
)
from .generators import (
    ComponentSpec,
    LabeledSample,
    MixtureSpec,
    cluster_mean,
    exact_pairwise_marginal,
    hypercube_utilities,
    mask,
    normal_utilities,
    rho_separated_utilities,
    sample_component,
    sample_embedded_batch,
    sample_mixture,
)
from .pipeline import PipelineError, PipelineResult, run_pipeline, run_pipeline_samples
from .rankings import (
    MISSING,
    EmbeddedObservation,
    PairIndexer,
    Permutation,
    embed,
    embedding_distance_sq,
    is_missing,
    kendall_tau,
    pair_index,
    pair_of,
)
from .seeding import child_seed, substream

__all__ = [
    "MISSING",
    "DEFAULT_CONSTANTS",
    "EXP2_COLUMNS",
    "EXP3_COLUMNS",
    "EXPERIMENTS",
    "ClusteringResult",
    "ComponentSpec",
    "ConcentrationConstants",
    "CorollaryReport",
    "EmbeddedObservation",
    "EvaluationReport",
    "ExperimentConfig",
    "HsvtEstimate",
    "LabeledSample",
    "MixtureSpec",
    "ObservationMatrix",
    "PairIndexer",
    "Permutation",
    "PipelineError",
    "PipelineResult",
    "SpectralGapReport",
    "SvdResult",
    "child_seed",
    "cluster_mean",
    "compute_svd",
    "corollary_condition_check",
    "default_config",
    "delta_bound",
    "embed",
    "embedding_distance_sq",
    "empirical_tau",
    "estimate_p_hat",
    "exact_pairwise_marginal",
    "gamma_lower_bound_gaussian",
    "gamma_lower_bound_mnl",
    "hsvt",
    "hsvt_projector",
    "hypercube_utilities",
    "is_missing",
    "k_of_p",
    "kendall_tau",
    "mask",
    "misclassification_rate",
    "normal_utilities",
    "pair_index",
    "pair_of",
    "psi2_norm",
    "read_key_values",
    "read_labels",
    "read_matrix",
    "read_mixture_spec",
    "read_rankings",
    "rho_separated_utilities",
    "run_experiment",
    "run_pipeline",
    "run_pipeline_samples",
    "sample_component",
    "sample_embedded_batch",
    "sample_mixture",
    "select_t2",
    "select_threshold",
    "separation_gamma",
    "single_linkage",
    "spectral_gap_check",
    "substream",
    "write_key_values",
    "write_labels",
    "write_matrix",
    "write_mixture_spec",
    "write_rankings",
]

__version__ = "0.1.0"
