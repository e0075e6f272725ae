"""Reverse-mode differentiation core.

A :class:`Tensor` wraps a numpy array. Every differentiable operation
records a tape node (operation id, saved inputs, backward closure) on its
output; :meth:`Tensor.backward` walks the resulting DAG once in reverse
topological order, accumulating gradients additively so a tensor used
twice receives the sum of both contributions.

Tensors are immutable after creation except for gradient accumulation and
explicit in-place parameter updates performed by the optimizer between
tape lifetimes.
"""

from __future__ import annotations

import os
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import GradientError, NumericalError, ShapeMismatchError

_GRAD_ENABLED = True
_NAN_CHECK = os.environ.get("DELTADISTILL_NANCHECK", "") not in ("", "0", "false")


def nan_check_enabled() -> bool:
    return _NAN_CHECK


def set_nan_check(flag: bool) -> None:
    global _NAN_CHECK
    _NAN_CHECK = bool(flag)


class no_grad:
    """Context manager suppressing tape construction (inference, targets)."""

    def __enter__(self):
        global _GRAD_ENABLED
        self._prev = _GRAD_ENABLED
        _GRAD_ENABLED = False
        return self

    def __exit__(self, *exc):
        global _GRAD_ENABLED
        _GRAD_ENABLED = self._prev
        return False


class _Node:
    """Tape record: operation id, input references, backward closure."""

    __slots__ = ("op", "inputs", "backward_fn")

    def __init__(self, op: str, inputs: Sequence["Tensor"], backward_fn: Callable):
        self.op = op
        self.inputs = tuple(inputs)
        self.backward_fn = backward_fn


class Tensor:
    __slots__ = ("data", "requires_grad", "grad", "_node", "name")

    def __init__(self, data, requires_grad: bool = False, name: Optional[str] = None):
        arr = np.asarray(data)
        if not np.issubdtype(arr.dtype, np.floating):
            arr = arr.astype(np.float64)
        if _NAN_CHECK and not np.all(np.isfinite(arr)):
            raise NumericalError(f"non-finite values in tensor {name or ''}")
        self.data = arr
        self.requires_grad = bool(requires_grad)
        self.grad: Optional[np.ndarray] = None
        self._node: Optional[_Node] = None
        self.name = name

    # -- basic introspection -------------------------------------------------
    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    @property
    def dtype(self):
        return self.data.dtype

    def __repr__(self):
        tag = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.data.shape}, grad={self.requires_grad}{tag})"

    # -- autograd ------------------------------------------------------------
    def detach(self) -> "Tensor":
        """New leaf sharing this tensor's values, cut from the tape."""
        return Tensor(self.data, requires_grad=False)

    def item(self) -> float:
        return float(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self) -> None:
        if self.size != 1:
            raise GradientError(f"backward() requires a scalar loss, got shape {self.shape}")
        order = _topo_order(self)
        self.grad = np.ones_like(self.data)
        for node_tensor in order:
            node = node_tensor._node
            if node is None or node_tensor.grad is None:
                continue
            grads = node.backward_fn(node_tensor.grad)
            for inp, g in zip(node.inputs, grads):
                if g is None or not inp.requires_grad:
                    continue
                if g.shape != inp.data.shape:
                    raise GradientError(
                        f"{node.op}: gradient shape {g.shape} != input shape {inp.data.shape}"
                    )
                # copy on first write: backward closures may hand out views
                # or the same array to several inputs
                inp.grad = g.copy() if inp.grad is None else inp.grad + g

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)


def _topo_order(root: Tensor) -> list:
    """Reverse topological order of tape tensors reachable from ``root``."""
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        t, expanded = stack.pop()
        if expanded:
            order.append(t)
            continue
        if id(t) in seen:
            continue
        seen.add(id(t))
        stack.append((t, True))
        if t._node is not None:
            for inp in t._node.inputs:
                if id(inp) not in seen and inp.requires_grad:
                    stack.append((inp, False))
    order.reverse()
    return order


def from_op(
    op: str, inputs: Sequence[Tensor], data: np.ndarray, backward_fn: Callable
) -> Tensor:
    """Wrap an op result, registering it on the tape when grads are live."""
    if _NAN_CHECK and not np.all(np.isfinite(data)):
        raise NumericalError(f"non-finite values produced by {op}")
    requires = _GRAD_ENABLED and any(t.requires_grad for t in inputs)
    out = Tensor.__new__(Tensor)
    out.data = data
    out.requires_grad = requires
    out.grad = None
    out.name = None
    out._node = _Node(op, inputs, backward_fn) if requires else None
    return out


def grad_enabled() -> bool:
    return _GRAD_ENABLED


def _as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _check_same_shape(op: str, a: Tensor, b: Tensor) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{op}: shapes {a.shape} and {b.shape} differ")


# -- elementwise and structural operations ------------------------------------


def add(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _check_same_shape("add", a, b)
    return from_op("add", (a, b), a.data + b.data, lambda g: (g, g))


def sub(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _check_same_shape("sub", a, b)
    return from_op("sub", (a, b), a.data - b.data, lambda g: (g, -g))


def mul(a, b) -> Tensor:
    """Elementwise product, equal shapes only."""
    a, b = _as_tensor(a), _as_tensor(b)
    _check_same_shape("mul", a, b)
    ad, bd = a.data, b.data
    return from_op("mul", (a, b), ad * bd, lambda g: (g * bd, g * ad))


def scale(x, s) -> Tensor:
    """Multiply a tensor by a python scalar or a scalar (0-d) Tensor."""
    x = _as_tensor(x)
    if isinstance(s, Tensor):
        if s.size != 1:
            raise ShapeMismatchError(f"scale: scalar operand has shape {s.shape}")
        sval = float(s.data)
        xd = x.data

        def backward(g):
            gs = np.asarray(np.sum(g * xd)).reshape(s.data.shape)
            return g * sval, gs

        return from_op("scale", (x, s), x.data * sval, backward)
    sval = float(s)
    return from_op("scale", (x,), x.data * sval, lambda g: (g * sval,))


def relu(x) -> Tensor:
    x = _as_tensor(x)
    mask = x.data > 0  # subgradient at 0 is 0
    return from_op("relu", (x,), np.where(mask, x.data, 0.0), lambda g: (g * mask,))


def concat_channels(tensors: Sequence[Tensor]) -> Tensor:
    """Concatenate [N,C,H,W] tensors along the channel axis, first-arg first."""
    tensors = [_as_tensor(t) for t in tensors]
    base = tensors[0]
    for t in tensors[1:]:
        if t.ndim != base.ndim or t.shape[0] != base.shape[0] or t.shape[2:] != base.shape[2:]:
            raise ShapeMismatchError(
                f"concat_channels: {t.shape} incompatible with {base.shape}"
            )
    widths = [t.shape[1] for t in tensors]
    data = np.concatenate([t.data for t in tensors], axis=1)
    offsets = np.cumsum([0] + widths)

    def backward(g):
        return tuple(g[:, offsets[i] : offsets[i + 1]] for i in range(len(tensors)))

    return from_op("concat_channels", tensors, data, backward)


def tensor_sum(x) -> Tensor:
    x = _as_tensor(x)
    shape = x.shape
    return from_op(
        "sum", (x,), np.asarray(np.sum(x.data)), lambda g: (np.broadcast_to(g, shape).copy(),)
    )


def tensor_mean(x) -> Tensor:
    x = _as_tensor(x)
    n = x.size
    shape = x.shape
    return from_op(
        "mean",
        (x,),
        np.asarray(np.mean(x.data)),
        lambda g: (np.broadcast_to(g / n, shape).copy(),),
    )


def getitem(x, index: int) -> Tensor:
    """Select one entry of a 1-D tensor as a 0-d tensor."""
    x = _as_tensor(x)
    if x.ndim != 1:
        raise ShapeMismatchError(f"getitem expects a 1-D tensor, got shape {x.shape}")

    def backward(g):
        gx = np.zeros_like(x.data)
        gx[index] = g
        return (gx,)

    return from_op("getitem", (x,), np.asarray(x.data[index]), backward)


def softmax1d(x, temperature: float = 1.0) -> Tensor:
    """Softmax of a 1-D tensor with optional temperature."""
    x = _as_tensor(x)
    if x.ndim != 1:
        raise ShapeMismatchError(f"softmax1d expects a 1-D tensor, got shape {x.shape}")
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    z = x.data / temperature
    z = z - np.max(z)
    e = np.exp(z)
    s = e / np.sum(e)

    def backward(g):
        return ((s * (g - np.dot(g, s))) / temperature,)

    return from_op("softmax1d", (x,), s, backward)
