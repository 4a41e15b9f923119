"""graphsamp: graph Laplacian learning, sampling-set selection, and
graph-regularized signal reconstruction on dense desk-scale graphs."""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .bench import (
    CellResult,
    ExperimentConfig,
    ExperimentResult,
    average_mse,
    overlap_report,
    run_experiment,
)
from .core import GraphModel, SamplingSet, build_graph_model, pinv_psd, sampling_operator
from .graphlearn import (
    LearnConfig,
    LearnTrace,
    cgl_objective,
    ddgl_objective,
    learn_cgl,
    learn_ddgl,
)
from .reconstruct import (
    ReconstructionProblem,
    covariance_gap,
    doptimal_objective,
    error_covariance_approx,
    error_covariance_exact,
    gamma_from_mu,
    glr_reconstruct,
)
from .sampler import (
    DOptState,
    RepulsionFilter,
    build_repulsion_filter,
    default_hop_count,
    greedy_doptimal,
    init_doptimal_state,
    random_select_bernoulli,
    random_select_fixed,
    sm_update,
    vis_select,
    visr_select,
)
from .synthdata import (
    NodeLayout,
    SignalBatch,
    add_noise,
    empirical_covariance,
    generate_layout,
    gp_covariance,
    sample_gaussian_signals,
)

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "GraphModel",
    "SamplingSet",
    "build_graph_model",
    "sampling_operator",
    "pinv_psd",
    "NodeLayout",
    "SignalBatch",
    "generate_layout",
    "gp_covariance",
    "sample_gaussian_signals",
    "add_noise",
    "empirical_covariance",
    "LearnConfig",
    "LearnTrace",
    "cgl_objective",
    "ddgl_objective",
    "learn_cgl",
    "learn_ddgl",
    "DOptState",
    "RepulsionFilter",
    "init_doptimal_state",
    "sm_update",
    "greedy_doptimal",
    "vis_select",
    "default_hop_count",
    "build_repulsion_filter",
    "visr_select",
    "random_select_fixed",
    "random_select_bernoulli",
    "ReconstructionProblem",
    "gamma_from_mu",
    "glr_reconstruct",
    "error_covariance_exact",
    "error_covariance_approx",
    "covariance_gap",
    "doptimal_objective",
    "ExperimentConfig",
    "ExperimentResult",
    "CellResult",
    "average_mse",
    "overlap_report",
    "run_experiment",
]
