"""Softmax / cross-entropy layer of the random model.

Logits z of shape (N, C) are i.i.d. Normal(0, sigma_z^2); probabilities are
row-wise softmax; labels are assigned to hit a target simulated accuracy.
As sigma_z grows the softmax rows freeze onto single classes (the Boltzmann
freezing of i.i.d. random energies), which :func:`freezing_stats` quantifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ModelParams
from .rng import RngStream, gaussian_matrix, substream


@dataclass(frozen=True)
class LogitEnsemble:
    """Sampled logits with derived probabilities and assigned labels.

    Invariants: each probs row sums to 1 within 1e-12 and labels lie in
    [0, C). Rows are strictly positive whenever no within-row logit gap
    exceeds ~745 (the float64 exp underflow threshold); beyond that,
    underflowed zeros are possible and :func:`cross_entropy_loss` surfaces
    them with its +inf sentinel.
    """

    logits: np.ndarray  # (N, C)
    probs: np.ndarray  # (N, C)
    labels: np.ndarray  # (N,) int

    @property
    def n_examples(self) -> int:
        return self.logits.shape[0]

    @property
    def n_classes(self) -> int:
        return self.logits.shape[1]


def sample_logits(params: ModelParams, stream: RngStream) -> np.ndarray:
    """N x C i.i.d. Normal(0, sigma_z^2) logit matrix."""
    return gaussian_matrix(stream, params.n_examples, params.n_classes, params.sigma_z)


def softmax_probs(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax in max-subtracted form (no overflow for finite input)."""
    z = np.asarray(logits, dtype=float)
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy_loss(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean negative log-probability of the labeled class.

    Returns the +inf sentinel if any labeled probability has underflowed to
    exactly 0 (frozen-wrong-label pathology at extreme sigma_z), rather than
    clipping silently.
    """
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels)
    p_label = probs[np.arange(probs.shape[0]), labels]
    if np.any(p_label == 0.0):
        return float("inf")
    return float(-np.mean(np.log(p_label)))


def logit_gradient(probs_row: np.ndarray, label: int) -> np.ndarray:
    """Loss gradient with respect to one example's logits: y - p.

    Sign convention: the one-hot label minus the probability row (components
    sum to zero; the frozen correct prediction gives the zero vector).
    """
    p = np.asarray(probs_row, dtype=float)
    y = np.zeros_like(p)
    y[label] = 1.0
    return y - p


def logit_hessian(probs_row: np.ndarray) -> np.ndarray:
    """Per-example logit-space curvature A = diag(p) - p p^T.

    Symmetric, positive semidefinite, rows sum to zero (the all-ones vector
    is a null eigenvector). Equals minus the Jacobian of
    :func:`logit_gradient` with respect to the logits.
    """
    p = np.asarray(probs_row, dtype=float)
    return np.diag(p) - np.outer(p, p)


def shannon_entropy(probs_row: np.ndarray) -> float:
    """Entropy of one probability row in bits, with 0 log 0 = 0."""
    p = np.asarray(probs_row, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def _row_entropies(probs: np.ndarray) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def assign_labels(
    probs: np.ndarray, target_accuracy: float, stream: RngStream
) -> np.ndarray:
    """Labels hitting the target simulated accuracy.

    Exactly round(target_accuracy * N) examples (a uniformly random subset)
    get their argmax class (ties broken toward the lowest index); the rest
    get a uniformly random class different from the argmax.
    """
    if not 0.0 <= target_accuracy <= 1.0:
        raise ValueError(f"target_accuracy must lie in [0, 1], got {target_accuracy!r}")
    probs = np.asarray(probs, dtype=float)
    n, c = probs.shape
    argmax = probs.argmax(axis=1)
    labels = argmax.copy()
    n_correct = int(round(target_accuracy * n))
    order = stream.permutation(n)
    wrong = order[n_correct:]
    if wrong.size:
        # draw over C-1 classes, then skip past the argmax slot
        draw = stream.integers(c - 1, wrong.size)
        labels[wrong] = draw + (draw >= argmax[wrong])
    return labels


def freezing_stats(ensemble: LogitEnsemble) -> tuple[float, float]:
    """(mean entropy in bits, mean max probability) over the ensemble."""
    return (
        float(_row_entropies(ensemble.probs).mean()),
        float(ensemble.probs.max(axis=1).mean()),
    )


def sample_ensemble(params: ModelParams, label_prefix: str = "") -> LogitEnsemble:
    """Draw a full ensemble from the labeled substreams of params.seed.

    Substream labels are ``<prefix>logits`` and ``<prefix>labels``; sweep
    code passes per-task prefixes like ``"sweep:3:1:"`` so each (point,
    repeat) task owns independent streams.
    """
    logits = sample_logits(params, substream(params.seed, label_prefix + "logits"))
    probs = softmax_probs(logits)
    labels = assign_labels(
        probs, params.target_accuracy, substream(params.seed, label_prefix + "labels")
    )
    return LogitEnsemble(logits=logits, probs=probs, labels=labels)
