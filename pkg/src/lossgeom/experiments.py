"""Experiment orchestration: the four property experiments and the sweeps.

Each experiment is a pure function of a :class:`ModelParams` (plus a sweep
spec where applicable): identical inputs give identical outputs. Sweep tasks
draw from labeled substreams (``sweep:<point>:<repeat>:<role>``), so points
and repeats are independent and could run concurrently; this implementation
executes them serially in grid order, which is also the merge order.

Labels are re-drawn per sweep point and repeat at the configured target
accuracy: each point models a training snapshot at fixed accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .clustering import q_sl
from .gradients import (
    LogitGradientSet,
    model_hessian,
    sample_logit_gradients,
    weight_gradient,
)
from .logits import LogitEnsemble, freezing_stats, sample_ensemble
from .params import ModelParams
from .rng import substream
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

SIMPLEX_SAMPLE_LIMIT = 500
# equilateral-triangle corners for barycentric plotting of C=3 rows
_SIMPLEX_CORNERS = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition for the logit-variance sweep.

    ``gamma`` is the mean-gradient growth exponent: at grid value sigma_z the
    ensemble uses sigma_c(sigma_z) = sigma_c_base * (sigma_z/sigma_z_ref)^gamma,
    with sigma_e scaled by the same factor so sigma_c/sigma_e stays constant
    (see :func:`run_sigma_z_sweep` for the fixed-sigma_e alternate mode).
    """

    sigma_z_min: float = 1e-3
    sigma_z_max: float = 1e2
    points: int = 25
    scale: str = "log"
    gamma: float = 0.5
    sigma_z_ref: float = 15.0
    repeats: int = 5

    def __post_init__(self) -> None:
        if self.scale not in ("log", "linear"):
            raise ValueError(f"scale must be 'log' or 'linear', got {self.scale!r}")
        if not self.sigma_z_min < self.sigma_z_max:
            raise ValueError(
                f"need sigma_z_min < sigma_z_max, got {self.sigma_z_min} "
                f"and {self.sigma_z_max}"
            )
        if self.scale == "log" and self.sigma_z_min <= 0:
            raise ValueError("log scale needs sigma_z_min > 0")
        if self.sigma_z_min < 0:
            raise ValueError(f"sigma_z_min must be nonnegative, got {self.sigma_z_min}")
        if self.points < 2:
            raise ValueError(f"need at least 2 grid points, got {self.points}")
        if self.repeats < 1:
            raise ValueError(f"need at least 1 repeat, got {self.repeats}")
        if not self.sigma_z_ref > 0:
            raise ValueError(f"sigma_z_ref must be positive, got {self.sigma_z_ref}")
        if not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma!r}")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(
                math.log10(self.sigma_z_min), math.log10(self.sigma_z_max), self.points
            )
        return np.linspace(self.sigma_z_min, self.sigma_z_max, self.points)


@dataclass(frozen=True)
class SweepRecord:
    """One (grid point, repeat) summary of the sweep."""

    sigma_z: float
    sigma_c: float
    top_eigenvalue: float
    trace: float
    spectral_norm: float
    trace_ratio: float
    projected_trace_ratio: float
    mean_entropy: float
    mean_max_prob: float
    n_outliers: int
    grad_power_top10: float
    repeat: int


def _sample_instance(
    params: ModelParams, label_prefix: str = ""
) -> tuple[LogitEnsemble, LogitGradientSet]:
    return sample_ensemble(params, label_prefix), sample_logit_gradients(
        params, label_prefix
    )


def _top_power(cumulative_power: np.ndarray, k: int = 10) -> float:
    return float(cumulative_power[min(k, cumulative_power.shape[0]) - 1])


def run_spectrum_experiment(
    params: ModelParams,
) -> tuple[SymmetricSpectrum, OutlierReport]:
    """One full ensemble at params: Hessian eigensystem plus outlier report."""
    ensemble, grads = _sample_instance(params)
    spectrum = eigh(model_hessian(grads, ensemble))
    return spectrum, detect_outliers(spectrum, max_candidates=3 * params.n_classes)


def run_overlap_experiment(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Gradient/eigenvector cosines and cumulative power at params.

    Raises the zero-gradient error if every probability row is frozen
    exactly onto its label.
    """
    ensemble, grads = _sample_instance(params)
    spectrum = eigh(model_hessian(grads, ensemble))
    return gradient_overlaps(spectrum, weight_gradient(grads, ensemble))


def run_sigma_z_sweep(
    params: ModelParams, spec: SweepSpec, fixed_sigma_e: bool = False
) -> list[SweepRecord]:
    """Sweep sigma_z over spec's grid, one record per (point, repeat).

    Default mode scales sigma_e together with sigma_c (constant
    sigma_c/sigma_e); ``fixed_sigma_e=True`` is the alternate mode that
    holds sigma_e at its base value while sigma_c still grows, provided for
    comparison. Records appear in grid order, repeats innermost.
    """
    records: list[SweepRecord] = []
    for i, sigma_z in enumerate(spec.grid()):
        factor = (sigma_z / spec.sigma_z_ref) ** spec.gamma
        sigma_c = params.sigma_c * factor
        sigma_e = params.sigma_e if fixed_sigma_e else params.sigma_e * factor
        point_params = replace(
            params, sigma_z=float(sigma_z), sigma_c=sigma_c, sigma_e=sigma_e
        )
        for rep in range(spec.repeats):
            prefix = f"sweep:{i}:{rep}:"
            records.append(
                _sweep_record(point_params, prefix, float(sigma_z), sigma_c, rep)
            )
    return records


def _sweep_record(
    params: ModelParams, prefix: str, sigma_z: float, sigma_c: float, rep: int
) -> SweepRecord:
    ensemble, grads = _sample_instance(params, prefix)
    hessian = model_hessian(grads, ensemble)
    spectrum = eigh(hessian)
    norm = spectral_norm(spectrum)
    basis = random_orthonormal_basis(
        params, substream(params.seed, prefix + "hyperplane")
    )
    projected = eigh(project_hessian(hessian, basis))
    _, cumulative = gradient_overlaps(spectrum, weight_gradient(grads, ensemble))
    mean_entropy, mean_max_prob = freezing_stats(ensemble)
    report = detect_outliers(spectrum, max_candidates=3 * params.n_classes)
    return SweepRecord(
        sigma_z=sigma_z,
        sigma_c=sigma_c,
        top_eigenvalue=float(spectrum.eigenvalues[0]),
        trace=float(spectrum.eigenvalues.sum()),
        spectral_norm=norm,
        trace_ratio=trace_norm_ratio(spectrum),
        projected_trace_ratio=trace_norm_ratio(projected),
        mean_entropy=mean_entropy,
        mean_max_prob=mean_max_prob,
        n_outliers=report.n_outliers,
        grad_power_top10=_top_power(cumulative),
        repeat=rep,
    )


def run_snr_sweep(
    params: ModelParams, snr_grid
) -> list[tuple[float, int, float]]:
    """(snr, n_outliers, q_sl) per grid point, sigma_c fixed, sigma_e = sigma_c/sqrt(snr)."""
    results: list[tuple[float, int, float]] = []
    for i, snr in enumerate(snr_grid):
        if not snr > 0:
            raise ValueError(f"snr values must be positive, got {snr!r}")
        sigma_e = 0.0 if math.isinf(snr) else params.sigma_c / math.sqrt(snr)
        point_params = replace(params, sigma_e=sigma_e)
        prefix = f"snr:{i}:"
        ensemble, grads = _sample_instance(point_params, prefix)
        spectrum = eigh(model_hessian(grads, ensemble))
        report = detect_outliers(spectrum, max_candidates=3 * params.n_classes)
        results.append((float(snr), report.n_outliers, q_sl(grads)))
    return results


def run_freezing_experiment(
    params: ModelParams, sigma_z_grid
) -> list[tuple[float, float, float, np.ndarray]]:
    """(sigma_z, mean_entropy, mean_max_prob, simplex_points) per grid point.

    ``simplex_points`` holds barycentric plane coordinates of up to 500
    probability rows when C=3 (for plotting the freezing motion on the
    probability simplex) and is empty otherwise.
    """
    results = []
    for i, sigma_z in enumerate(sigma_z_grid):
        point_params = replace(params, sigma_z=float(sigma_z))
        ensemble = sample_ensemble(point_params, f"freeze:{i}:")
        mean_entropy, mean_max_prob = freezing_stats(ensemble)
        if params.n_classes == 3:
            rows = ensemble.probs[:SIMPLEX_SAMPLE_LIMIT]
            simplex = rows @ _SIMPLEX_CORNERS
        else:
            simplex = np.empty((0, 2))
        results.append((float(sigma_z), mean_entropy, mean_max_prob, simplex))
    return results
