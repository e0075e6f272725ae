"""SGD with momentum, plus global-norm gradient clipping."""

from __future__ import annotations

import math
from typing import Iterable, List, Optional

import numpy as np

from ..errors import GradientError
from .tensor import Tensor


class SGD:
    """Momentum SGD: v <- m*v + (g + wd*p); p <- p - lr*v.

    Updates are in-place on parameter data and fully deterministic given
    the parameter/gradient state.
    """

    def __init__(
        self,
        params: Iterable[Tensor],
        lr: float,
        momentum: float = 0.0,
        weight_decay: float = 0.0,
    ):
        self.params: List[Tensor] = list(params)
        if not self.params:
            raise ValueError("SGD needs at least one parameter")
        self.lr = lr
        self.momentum = momentum
        self.weight_decay = weight_decay
        self._velocity: List[Optional[np.ndarray]] = [None] * len(self.params)

    def zero_grad(self) -> None:
        for p in self.params:
            p.grad = None

    def step(self) -> None:
        for i, p in enumerate(self.params):
            if p.grad is None:
                raise GradientError(
                    f"parameter {p.name or i} has no gradient; run backward() first"
                )
            g = p.grad
            if self.weight_decay:
                g = g + self.weight_decay * p.data
            if self.momentum:
                v = self._velocity[i]
                v = g.copy() if v is None else self.momentum * v + g
                self._velocity[i] = v
            else:
                v = g
            p.data = p.data - self.lr * v

    # -- checkpointing --------------------------------------------------------
    def state_arrays(self) -> List[np.ndarray]:
        """Momentum buffers in parameter order (zeros where untouched)."""
        return [
            np.zeros_like(p.data) if v is None else v
            for p, v in zip(self.params, self._velocity)
        ]

    def load_state_arrays(self, arrays: List[np.ndarray]) -> None:
        if len(arrays) != len(self.params):
            raise ValueError("optimizer state length mismatch")
        self._velocity = [a.astype(p.dtype).copy() for a, p in zip(arrays, self.params)]


def global_grad_norm(params: Iterable[Tensor]) -> float:
    total = 0.0
    for p in params:
        if p.grad is not None:
            total += float(np.sum(p.grad.astype(np.float64) ** 2))
    return math.sqrt(total)


def clip_grad_norm(params: Iterable[Tensor], max_norm: float) -> float:
    """Scale all gradients so their global norm is at most ``max_norm``.

    Returns the pre-clip norm. Gradients are reassigned, never mutated in
    place (they may be shared between tensors).
    """
    params = list(params)
    norm = global_grad_norm(params)
    if max_norm > 0 and norm > max_norm:
        factor = max_norm / norm
        for p in params:
            if p.grad is not None:
                p.grad = p.grad * factor
    return norm
