"""Convolution and pixel-shuffle operations.

Forward/backward work is dispatched to the active kernel backend (numba
direct loops, numpy im2col, or the naive reference). Cross-correlation
convention throughout: no kernel flipping.
"""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .. import backend as _backend
from ..errors import ConfigurationError, ShapeMismatchError
from . import kernels_numpy, reference
from .tensor import Tensor, from_op

try:
    from . import kernels_numba
except ImportError:  # pragma: no cover
    kernels_numba = None


def _pair(v) -> Tuple[int, int]:
    if isinstance(v, (tuple, list)):
        a, b = v
        return int(a), int(b)
    return int(v), int(v)


def conv_output_hw(h: int, w: int, kh: int, kw: int, stride, padding) -> Tuple[int, int]:
    """Output extents of a cross-correlation; raises if non-positive or fractional."""
    sh, sw = _pair(stride)
    ph, pw = _pair(padding)
    if sh < 1 or sw < 1:
        raise ConfigurationError(f"stride must be positive, got {(sh, sw)}")
    if ph < 0 or pw < 0:
        raise ConfigurationError(f"padding must be non-negative, got {(ph, pw)}")
    num_h = h + 2 * ph - kh
    num_w = w + 2 * pw - kw
    if num_h < 0 or num_w < 0 or num_h % sh or num_w % sw:
        raise ConfigurationError(
            f"conv geometry {h}x{w} with kernel {kh}x{kw}, stride {(sh, sw)}, "
            f"padding {(ph, pw)} does not produce integral positive output extents"
        )
    return num_h // sh + 1, num_w // sw + 1


def _forward_kernel(x_pad, weight, sh, sw, out):
    name = _backend.active_backend()
    if name == "numba" and kernels_numba is not None:
        kernels_numba.conv2d_forward(x_pad, weight, sh, sw, out)
    elif name == "naive":
        # reference path re-pads internally; hand it the already-padded input
        out += reference.naive_conv2d(x_pad, weight, stride=(sh, sw))
    else:
        kernels_numpy.conv2d_forward(x_pad, weight, sh, sw, out)


def _backward_input_kernel(gout, weight, sh, sw, gx_pad):
    if _backend.active_backend() == "numba" and kernels_numba is not None:
        kernels_numba.conv2d_backward_input(gout, weight, sh, sw, gx_pad)
    else:  # naive backend shares the vectorised backward
        kernels_numpy.conv2d_backward_input(gout, weight, sh, sw, gx_pad)


def _backward_weight_kernel(gout, x_pad, sh, sw, gw):
    if _backend.active_backend() == "numba" and kernels_numba is not None:
        kernels_numba.conv2d_backward_weight(gout, x_pad, sh, sw, gw)
    else:
        kernels_numpy.conv2d_backward_weight(gout, x_pad, sh, sw, gw)


def conv2d(
    x: Tensor,
    weight: Tensor,
    bias: Optional[Tensor] = None,
    stride=(1, 1),
    padding=(0, 0),
) -> Tensor:
    """Batched 2-D cross-correlation: [N,Cin,H,W] * [Cout,Cin,kh,kw] -> [N,Cout,H',W']."""
    if x.ndim != 4:
        raise ShapeMismatchError(f"conv2d input must be 4-D [N,Cin,H,W], got {x.shape}")
    if weight.ndim != 4:
        raise ShapeMismatchError(f"conv2d weight must be 4-D [Cout,Cin,kh,kw], got {weight.shape}")
    n, cin, h, w = x.shape
    cout, cin_w, kh, kw = weight.shape
    if cin != cin_w:
        raise ShapeMismatchError(
            f"conv2d: input has {cin} channels but weight expects {cin_w}"
        )
    if bias is not None and bias.shape != (cout,):
        raise ShapeMismatchError(f"conv2d: bias shape {bias.shape} != ({cout},)")
    sh, sw = _pair(stride)
    ph, pw = _pair(padding)
    oh_n, ow_n = conv_output_hw(h, w, kh, kw, (sh, sw), (ph, pw))

    x_pad = np.pad(x.data, ((0, 0), (0, 0), (ph, ph), (pw, pw)))
    out = np.zeros((n, cout, oh_n, ow_n), dtype=np.result_type(x.dtype, weight.dtype))
    _forward_kernel(x_pad, weight.data, sh, sw, out)
    if bias is not None:
        out += bias.data.reshape(1, cout, 1, 1)

    inputs = (x, weight) if bias is None else (x, weight, bias)
    wdata = weight.data

    def backward(g):
        g = np.ascontiguousarray(g)
        gx_pad = np.zeros_like(x_pad)
        _backward_input_kernel(g, wdata, sh, sw, gx_pad)
        gx = gx_pad[:, :, ph : ph + h, pw : pw + w]
        gw = np.zeros_like(wdata)
        _backward_weight_kernel(g, x_pad, sh, sw, gw)
        if bias is None:
            return gx, gw
        return gx, gw, g.sum(axis=(0, 2, 3))

    return from_op("conv2d", inputs, out, backward)


def pointwise_conv(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None, stride=(1, 1)) -> Tensor:
    """1x1 convolution (channel mixing, optional spatial subsampling)."""
    if weight.ndim != 4 or weight.shape[2:] != (1, 1):
        raise ShapeMismatchError(f"pointwise_conv weight must be [Cout,Cin,1,1], got {weight.shape}")
    return conv2d(x, weight, bias=bias, stride=stride, padding=(0, 0))


def pixel_shuffle(x: Tensor, r: int) -> Tensor:
    """Depth-to-space: [N, C*r^2, H, W] -> [N, C, H*r, W*r].

    Channel group layout: channel index c*r^2 + i*r + j maps to output
    offset (i, j) inside each r x r cell.
    """
    if r < 1:
        raise ConfigurationError(f"pixel_shuffle factor must be >= 1, got {r}")
    if x.ndim != 4:
        raise ShapeMismatchError(f"pixel_shuffle input must be 4-D, got {x.shape}")
    n, c_full, h, w = x.shape
    if c_full % (r * r):
        raise ConfigurationError(
            f"pixel_shuffle: {c_full} channels not divisible by r^2={r * r}"
        )
    c = c_full // (r * r)
    data = (
        x.data.reshape(n, c, r, r, h, w)
        .transpose(0, 1, 4, 2, 5, 3)
        .reshape(n, c, h * r, w * r)
    )

    def backward(g):
        gx = (
            g.reshape(n, c, h, r, w, r)
            .transpose(0, 1, 3, 5, 2, 4)
            .reshape(n, c_full, h, w)
        )
        return (np.ascontiguousarray(gx),)

    return from_op("pixel_shuffle", (x,), np.ascontiguousarray(data), backward)
