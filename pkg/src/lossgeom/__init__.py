"""Random-model simulator for neural loss-landscape gradients and Hessians.

A softmax/cross-entropy layer over i.i.d. Gaussian logits, with logit
gradients split into class means plus residuals, yields a weight-space
gradient and a G-term Hessian whose spectra reproduce the characteristic
local geometry of real networks: a bulk plus C-1 outlier eigenvalues,
gradients confined to the outlier eigenspace, a logit-variance-driven rise
of the top eigenvalue, and the decay of the trace-to-norm curvature ratio.
"""

from .clustering import (
    ClusteringReport,
    clustering_report,
    cosine,
    empirical_class_means,
    per_class_q_slsc,
    predicted_q_sl,
    q_dl,
    q_sl,
    q_slsc,
)
from .config import ConfigError, RunConfig, parse_config
from .dumps import (
    DumpError,
    DumpLabelError,
    DumpMagicError,
    DumpTruncatedError,
    LogitGradientDump,
    read_dump,
    write_dump,
)
from .experiments import (
    SweepRecord,
    SweepSpec,
    run_freezing_experiment,
    run_overlap_experiment,
    run_sigma_z_sweep,
    run_snr_sweep,
    run_spectrum_experiment,
)
from .gradients import (
    LogitGradientSet,
    class_coupling_matrix,
    clustered_hessian,
    model_hessian,
    sample_logit_gradients,
    sample_mean_logit_gradients,
    sample_residuals,
    weight_gradient,
)
from .logits import (
    LogitEnsemble,
    assign_labels,
    cross_entropy_loss,
    freezing_stats,
    logit_gradient,
    logit_hessian,
    sample_ensemble,
    sample_logits,
    shannon_entropy,
    softmax_probs,
)
from .params import ModelParams
from .rng import RngStream, gaussian_matrix, substream
from .spectra import (
    OutlierReport,
    SymmetricSpectrum,
    detect_outliers,
    eigh,
    gradient_overlaps,
    project_hessian,
    random_orthonormal_basis,
    spectral_norm,
    trace_norm_ratio,
)
from .svgplot import emit_svg

__version__ = "0.1.0"

__all__ = [
    "ClusteringReport", "ConfigError", "DumpError", "DumpLabelError",
    "DumpMagicError", "DumpTruncatedError", "LogitEnsemble",
    "LogitGradientDump", "LogitGradientSet", "ModelParams", "OutlierReport",
    "RngStream", "RunConfig", "SweepRecord", "SweepSpec", "SymmetricSpectrum",
    "assign_labels", "class_coupling_matrix", "clustered_hessian",
    "clustering_report", "cosine", "cross_entropy_loss", "detect_outliers",
    "eigh", "emit_svg", "empirical_class_means", "freezing_stats",
    "gaussian_matrix", "gradient_overlaps", "logit_gradient", "logit_hessian",
    "model_hessian", "parse_config", "per_class_q_slsc", "predicted_q_sl",
    "project_hessian", "q_dl", "q_sl", "q_slsc", "random_orthonormal_basis",
    "read_dump", "run_freezing_experiment", "run_overlap_experiment",
    "run_sigma_z_sweep", "run_snr_sweep", "run_spectrum_experiment",
    "sample_ensemble", "sample_logit_gradients", "sample_logits",
    "sample_mean_logit_gradients", "sample_residuals", "shannon_entropy",
    "softmax_probs", "spectral_norm", "substream", "trace_norm_ratio",
    "weight_gradient", "write_dump",
]
