"""deltadistill: accelerate video-stream models by distilling temporal feature deltas.

An expensive teacher network runs fully only on key-frames; cheap per-block
students regress how each block's activations change between consecutive
frames and update the cached features additively on the frames in between.
"""

__version__ = "0.1.0"

from .backend import active_backend, set_backend, use_backend
from .engine import SGD, Tensor, no_grad

__all__ = [
    "SGD",
    "Tensor",
    "active_backend",
    "no_grad",
    "set_backend",
    "use_backend",
    "__version__",
]
