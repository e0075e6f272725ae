"""Naive nested-loop convolution: the reference the fast kernels answer to.

Unbearably slow, deliberately so: every multiply-add is a visible Python
statement, which makes the loop both the numerical oracle for the im2col
and numba paths and the instrumented counter the cost model's analytic
multiply-add formulas are checked against.
"""

from __future__ import annotations

import numpy as np


class MacCounter:
    """Counts multiply-adds executed by the naive convolution loop."""

    def __init__(self):
        self.count = 0
        self.active = False

    def reset(self):
        self.count = 0


_COUNTER = MacCounter()


def mac_counter() -> MacCounter:
    return _COUNTER


class count_macs:
    """Context manager enabling multiply-add instrumentation.

    Usage::

        with count_macs() as ctr:
            naive_conv2d(x, w)
        assert ctr.count == expected
    """

    def __enter__(self) -> MacCounter:
        _COUNTER.reset()
        _COUNTER.active = True
        return _COUNTER

    def __exit__(self, *exc):
        _COUNTER.active = False
        return False


def naive_conv2d(x, weight, bias=None, stride=(1, 1), padding=(0, 0)):
    """Seven-nested-loop cross-correlation over a [N,Cin,H,W] input.

    Multiply-adds are tallied per batch element (the counter reports the
    per-sample figure times N; callers comparing against the per-frame
    analytic formula should pass N=1).
    """
    x = np.asarray(x)
    weight = np.asarray(weight)
    n_batch, cin, h, w = x.shape
    cout, cin_w, kh, kw = weight.shape
    assert cin == cin_w, "channel mismatch"
    sh, sw = stride
    ph, pw = padding
    oh_n = (h + 2 * ph - kh) // sh + 1
    ow_n = (w + 2 * pw - kw) // sw + 1
    x_pad = np.pad(x, ((0, 0), (0, 0), (ph, ph), (pw, pw)))
    out = np.zeros((n_batch, cout, oh_n, ow_n), dtype=x.dtype)
    counting = _COUNTER.active
    macs = 0
    for n in range(n_batch):
        for o in range(cout):
            for oh in range(oh_n):
                for ow in range(ow_n):
                    acc = 0.0
                    for c in range(cin):
                        for i in range(kh):
                            for j in range(kw):
                                acc += x_pad[n, c, oh * sh + i, ow * sw + j] * weight[o, c, i, j]
                                if counting:
                                    macs += 1
                    out[n, o, oh, ow] = acc
    if counting:
        _COUNTER.count += macs
    if bias is not None:
        out += np.asarray(bias).reshape(1, cout, 1, 1)
    return out
