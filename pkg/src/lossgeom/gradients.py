"""Weight-space gradient and G-term Hessian of the random model.

Logit gradients decompose into class means plus residuals,
dz[mu,k]/dW = c[k] + E[mu,k], with c ~ N(0, sigma_c^2) (optionally
length-varied per class) and E ~ N(0, sigma_e^2). The weight-space objects
are

    g      = (1/N) sum_mu sum_k (y - p)[mu,k] (c[k] + E[mu,k])
    H      = (1/N) sum_mu J[mu]^T A[mu] J[mu],   A[mu] = diag(p) - p p^T
    H_clu  = C^T P C  +  (1/N) sum_mu E[mu]^T A[mu] E[mu]

where P = (1/N) sum_mu A[mu] is the class coupling matrix. H is assembled
through the exact variance identity J^T A J = sum_k p_k (J_k - w)(J_k - w)^T
with w = sum_l p_l J_l, which keeps it PSD by construction; H_clu drops the
mean/residual cross-terms, and H - H_clu is exactly those cross-terms.

Sign convention: g uses y - p, so g is minus the gradient of the
cross-entropy loss (the finite-difference tests check -g).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .logits import LogitEnsemble
from .params import ModelParams
from .rng import RngStream, gaussian_matrix, substream

DEFAULT_MEMORY_LIMIT = 2**31  # bytes allowed for the dense D x D Hessian


@dataclass(frozen=True)
class LogitGradientSet:
    """Mean logit gradients (C, D) plus residuals (N, C, D)."""

    means: np.ndarray
    residuals: np.ndarray

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.residuals.shape

    def composed(self) -> np.ndarray:
        """The full (N, C, D) tensor means[k] + residuals[mu, k].

        Materializes N*C*D doubles (24 MB at the reference scale).
        """
        return self.means[np.newaxis, :, :] + self.residuals


def sample_mean_logit_gradients(params: ModelParams, stream: RngStream) -> np.ndarray:
    """C x D class-mean gradients, row k scaled by 1 + length_beta*k/(C-1)."""
    base = gaussian_matrix(stream, params.n_classes, params.n_weights, params.sigma_c)
    if params.length_beta == 0.0:
        return base
    k = np.arange(params.n_classes)
    lengths = 1.0 + params.length_beta * k / (params.n_classes - 1)
    return base * lengths[:, np.newaxis]


def sample_residuals(params: ModelParams, stream: RngStream) -> np.ndarray:
    """(N, C, D) i.i.d. Normal(0, sigma_e^2) residual tensor.

    Drawn example-major, logit-next, weight-last (matching the dump layout).
    """
    n, c, d = params.n_examples, params.n_classes, params.n_weights
    return gaussian_matrix(stream, n * c, d, params.sigma_e).reshape(n, c, d)


def sample_logit_gradients(params: ModelParams, label_prefix: str = "") -> LogitGradientSet:
    """Draw means and residuals from the labeled substreams of params.seed."""
    return LogitGradientSet(
        means=sample_mean_logit_gradients(
            params, substream(params.seed, label_prefix + "means")
        ),
        residuals=sample_residuals(
            params, substream(params.seed, label_prefix + "residuals")
        ),
    )


def _one_hot(labels: np.ndarray, n_classes: int) -> np.ndarray:
    return np.eye(n_classes)[np.asarray(labels)]


def weight_gradient(grads: LogitGradientSet, ensemble: LogitEnsemble) -> np.ndarray:
    """The D-vector g = (1/N) sum_{mu,k} (y - p)[mu,k] (c[k] + E[mu,k])."""
    coef = _one_hot(ensemble.labels, ensemble.n_classes) - ensemble.probs
    n = ensemble.n_examples
    g_means = coef.sum(axis=0) @ grads.means
    g_resid = np.einsum("nc,ncd->d", coef, grads.residuals)
    return (g_means + g_resid) / n


def class_coupling_matrix(probs: np.ndarray) -> np.ndarray:
    """P = (1/N) sum_mu (diag(p) - p p^T): symmetric PSD, rows sum to zero.

    P annihilates the all-ones vector identically, so rank(P) <= C-1.
    """
    p = np.asarray(probs, dtype=float)
    n = p.shape[0]
    pm = np.diag(p.mean(axis=0)) - (p.T @ p) / n
    return (pm + pm.T) / 2.0


def _weighted_centered_rows(tensor: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """Rows sqrt(p[mu,k]) (T[mu,k] - sum_l p[mu,l] T[mu,l]), flattened to (N*C, D).

    Building block of the variance identity: for X = this matrix,
    X^T X = sum_mu T[mu]^T A[mu] T[mu] exactly.
    """
    n, c, d = tensor.shape
    w = np.einsum("nc,ncd->nd", probs, tensor)
    centered = tensor - w[:, np.newaxis, :]
    return (np.sqrt(probs)[:, :, np.newaxis] * centered).reshape(n * c, d)


def model_hessian(
    grads: LogitGradientSet,
    ensemble: LogitEnsemble,
    memory_limit_bytes: int = DEFAULT_MEMORY_LIMIT,
) -> np.ndarray:
    """Dense D x D G-term Hessian H = (1/N) sum_mu J[mu]^T A[mu] J[mu].

    Exact assembly via the variance identity (module docstring); PSD by
    construction up to roundoff. Fails fast if the dense D x D output would
    exceed ``memory_limit_bytes``. When the residuals are identically zero
    the factored rank-(C-1) path H = C^T P C is used instead (O(C D^2)).
    """
    n, c, d = grads.shape
    needed = d * d * 8
    if needed > memory_limit_bytes:
        raise ValueError(
            f"dense {d}x{d} Hessian needs {needed} bytes, over the "
            f"{memory_limit_bytes}-byte memory limit"
        )
    if not grads.residuals.any():
        p_mat = class_coupling_matrix(ensemble.probs)
        h = grads.means.T @ p_mat @ grads.means
    else:
        x = _weighted_centered_rows(grads.composed(), ensemble.probs)
        h = (x.T @ x) / n
    return (h + h.T) / 2.0


def clustered_hessian(
    grads: LogitGradientSet, ensemble: LogitEnsemble
) -> tuple[np.ndarray, np.ndarray]:
    """(signal, noise) split of the Hessian with cross-terms dropped.

    signal = C^T P C from the sampled means and the coupling matrix;
    noise = (1/N) sum_mu E[mu]^T A[mu] E[mu] from the residuals only.
    model_hessian - signal - noise equals the dropped cross-terms exactly.
    """
    n = ensemble.n_examples
    p_mat = class_coupling_matrix(ensemble.probs)
    signal = grads.means.T @ p_mat @ grads.means
    xe = _weighted_centered_rows(grads.residuals, ensemble.probs)
    noise = (xe.T @ xe) / n
    return (signal + signal.T) / 2.0, (noise + noise.T) / 2.0
