"""SGD update rules against hand-rolled recurrences."""

import numpy as np
import pytest

from deltadistill.engine import SGD, Tensor, clip_grad_norm
from deltadistill.errors import GradientError


def param(value):
    return Tensor(np.asarray(value, dtype=np.float64), requires_grad=True)


def test_zero_lr_leaves_params_unchanged():
    p = param([1.0, -2.0])
    p.grad = np.array([10.0, -3.0])
    SGD([p], lr=0.0).step()
    assert np.array_equal(p.data, [1.0, -2.0])


def test_plain_sgd_closed_form():
    p = param(1.0)
    p.grad = np.asarray(2.0)
    SGD([p], lr=0.1).step()
    assert p.data == pytest.approx(0.8)


def test_momentum_two_step_recurrence():
    p = param(1.0)
    opt = SGD([p], lr=0.1, momentum=0.9)
    grads = [2.0, -1.0]
    # hand-rolled: v1 = g1; p1 = p0 - lr*v1; v2 = 0.9*v1 + g2; p2 = p1 - lr*v2
    v = 0.0
    expect = 1.0
    for g in grads:
        v = 0.9 * v + g
        expect -= 0.1 * v
    for g in grads:
        p.grad = np.asarray(g)
        opt.step()
    assert p.data == pytest.approx(expect, abs=1e-15)


def test_weight_decay_adds_param_to_grad():
    p = param(2.0)
    p.grad = np.asarray(0.0)
    SGD([p], lr=0.1, weight_decay=0.5).step()
    # effective grad = 0 + 0.5*2 = 1 -> p = 2 - 0.1
    assert p.data == pytest.approx(1.9)


def test_missing_grad_raises():
    p = param(1.0)
    with pytest.raises(GradientError, match="no gradient"):
        SGD([p], lr=0.1).step()


def test_clip_grad_norm_scales_to_max():
    a, b = param(np.zeros(2)), param(np.zeros(2))
    a.grad = np.array([3.0, 0.0])
    b.grad = np.array([0.0, 4.0])
    norm = clip_grad_norm([a, b], 1.0)
    assert norm == pytest.approx(5.0)
    total = np.sqrt(np.sum(a.grad**2) + np.sum(b.grad**2))
    assert total == pytest.approx(1.0)


def test_clip_noop_below_threshold():
    a = param(np.zeros(2))
    a.grad = np.array([0.3, 0.4])
    norm = clip_grad_norm([a], 10.0)
    assert norm == pytest.approx(0.5)
    assert np.array_equal(a.grad, [0.3, 0.4])


def test_optimizer_state_roundtrip():
    p = param([1.0, 2.0])
    opt = SGD([p], lr=0.1, momentum=0.9)
    p.grad = np.array([1.0, -1.0])
    opt.step()
    state = opt.state_arrays()

    q = param([1.0, 2.0])
    opt2 = SGD([q], lr=0.1, momentum=0.9)
    q.grad = np.array([1.0, -1.0])
    opt2.step()
    opt2.load_state_arrays(state)
    p.grad = np.array([0.5, 0.5])
    q.grad = np.array([0.5, 0.5])
    opt.step()
    opt2.step()
    assert np.array_equal(p.data, q.data)
