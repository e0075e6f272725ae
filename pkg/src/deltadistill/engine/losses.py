"""Scalar training losses."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatchError
from .tensor import Tensor, from_op


def l2_loss(a: Tensor, b: Tensor) -> Tensor:
    """Mean over all elements of the squared difference.

    Reduction is mean over batch, channel and spatial axes alike, which
    keeps loss magnitudes comparable across feature-map sizes.
    """
    if a.shape != b.shape:
        raise ShapeMismatchError(f"l2_loss: shapes {a.shape} and {b.shape} differ")
    diff = a.data - b.data
    n = diff.size
    val = np.asarray(np.sum(diff * diff) / n)

    def backward(g):
        gd = (2.0 / n) * diff * g
        return gd, -gd

    return from_op("l2_loss", (a, b), val, backward)


def softmax_cross_entropy(logits: Tensor, labels: np.ndarray, ignore_label: int = -1) -> Tensor:
    """Mean pixelwise negative log-likelihood.

    ``logits`` is [N,K,H,W]; ``labels`` an integer [N,H,W] map. Pixels
    whose label equals ``ignore_label`` are excluded from the mean.
    """
    if logits.ndim != 4:
        raise ShapeMismatchError(f"logits must be [N,K,H,W], got {logits.shape}")
    labels = np.asarray(labels)
    n, k, h, w = logits.shape
    if labels.shape != (n, h, w):
        raise ShapeMismatchError(
            f"labels shape {labels.shape} does not match logits {logits.shape}"
        )
    valid = labels != ignore_label
    lab = np.where(valid, labels, 0)
    if lab.min() < 0 or lab.max() >= k:
        bad = labels[(labels != ignore_label) & ((labels < 0) | (labels >= k))]
        raise ValueError(f"labels out of range [0, {k}): {np.unique(bad)}")
    n_valid = int(valid.sum())
    if n_valid == 0:
        raise ValueError("softmax_cross_entropy: no valid pixels")

    z = logits.data
    zmax = z.max(axis=1, keepdims=True)
    ez = np.exp(z - zmax)
    lse = np.log(ez.sum(axis=1)) + zmax[:, 0]  # [N,H,W]
    picked = np.take_along_axis(z, lab[:, None], axis=1)[:, 0]
    val = np.asarray(np.sum((lse - picked) * valid) / n_valid)

    probs = ez / ez.sum(axis=1, keepdims=True)

    def backward(g):
        grad = probs.copy()
        ni, yi, xi = np.nonzero(valid)
        grad[ni, lab[ni, yi, xi], yi, xi] -= 1.0
        grad *= valid[:, None] * (g / n_valid)
        return (grad,)

    return from_op("softmax_cross_entropy", (logits,), val, backward)
