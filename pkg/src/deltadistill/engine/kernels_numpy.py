"""Vectorised im2col convolution kernels (pure numpy fallback path)."""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def _windows(x_pad, kh, kw, sh, sw):
    # [N, Cin, OH, OW, kh, kw] strided view of every receptive field
    return sliding_window_view(x_pad, (kh, kw), axis=(2, 3))[:, :, ::sh, ::sw]


def conv2d_forward(x_pad, weight, sh, sw, out):
    _, _, kh, kw = weight.shape
    win = _windows(x_pad, kh, kw, sh, sw)
    np.einsum("nchwij,ocij->nohw", win, weight, out=out, optimize=True)


def conv2d_backward_input(gout, weight, sh, sw, gx_pad):
    cout, cin, kh, kw = weight.shape
    n, _, oh_n, ow_n = gout.shape
    # gcol[n,c,i,j,h,w] = sum_o w[o,c,i,j] * gout[n,o,h,w], then scatter-add
    # one vectorised slab per kernel offset (deterministic order).
    gcol = np.einsum("ocij,nohw->ncijhw", weight, gout, optimize=True)
    for i in range(kh):
        for j in range(kw):
            gx_pad[:, :, i : i + sh * oh_n : sh, j : j + sw * ow_n : sw] += gcol[:, :, i, j]


def conv2d_backward_weight(gout, x_pad, sh, sw, gw):
    _, _, kh, kw = gw.shape
    win = _windows(x_pad, kh, kw, sh, sw)
    gw += np.einsum("nohw,nchwij->ocij", gout, win, optimize=True)
