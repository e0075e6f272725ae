"""Numerical core: tensors, tape, convolutions, losses, optimizer."""

from .conv import conv2d, conv_output_hw, pixel_shuffle, pointwise_conv
from .losses import l2_loss, softmax_cross_entropy
from .optim import SGD, clip_grad_norm, global_grad_norm
from .reference import count_macs, naive_conv2d
from .tensor import (
    Tensor,
    add,
    concat_channels,
    getitem,
    grad_enabled,
    mul,
    no_grad,
    relu,
    scale,
    set_nan_check,
    softmax1d,
    sub,
    tensor_mean,
    tensor_sum,
)

__all__ = [
    "SGD",
    "Tensor",
    "add",
    "clip_grad_norm",
    "concat_channels",
    "conv2d",
    "conv_output_hw",
    "count_macs",
    "getitem",
    "global_grad_norm",
    "grad_enabled",
    "l2_loss",
    "mul",
    "naive_conv2d",
    "no_grad",
    "pixel_shuffle",
    "pointwise_conv",
    "relu",
    "scale",
    "set_nan_check",
    "softmax1d",
    "softmax_cross_entropy",
    "sub",
    "tensor_mean",
    "tensor_sum",
]
