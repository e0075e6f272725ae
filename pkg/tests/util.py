"""Shared test helpers: finite differences and random-shape generators."""

from __future__ import annotations

import numpy as np


def central_diff_grad(f, arrays, idx, step=1e-3):
    """Central finite-difference gradient of scalar f(*arrays) wrt arrays[idx]."""
    a = arrays[idx]
    g = np.zeros_like(a)
    it = np.nditer(a, flags=["multi_index"])
    for _ in it:
        i = it.multi_index
        orig = a[i]
        a[i] = orig + step
        fp = f(*arrays)
        a[i] = orig - step
        fm = f(*arrays)
        a[i] = orig
        g[i] = (fp - fm) / (2.0 * step)
    return g


def rel_err(analytic, numeric):
    denom = max(np.abs(numeric).max(), np.abs(analytic).max(), 1e-10)
    return np.abs(analytic - numeric).max() / denom


def away_from_kinks(x, margin=0.1):
    """Push values near 0 away so relu finite differences stay one-sided."""
    return np.where(np.abs(x) < margin, np.sign(x) * margin + (x == 0) * margin, x)
