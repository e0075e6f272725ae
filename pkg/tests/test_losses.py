"""Loss values against explicit summation / log-sum-exp oracles."""

import numpy as np
import pytest

from deltadistill.engine import Tensor, l2_loss, softmax_cross_entropy
from deltadistill.errors import ShapeMismatchError


class TestL2Loss:
    def test_identical_inputs_zero(self):
        x = Tensor(np.random.default_rng(0).normal(size=(2, 3, 4)))
        assert l2_loss(x, x).item() == 0.0

    def test_constant_difference_closed_form(self):
        a = Tensor(np.full(10, 5.0))
        b = Tensor(np.full(10, 3.0))
        assert l2_loss(a, b).item() == pytest.approx(4.0)

    def test_random_matches_explicit_summation(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(3, 2, 5, 5))
        b = rng.normal(size=(3, 2, 5, 5))
        got = l2_loss(Tensor(a), Tensor(b)).item()
        acc = 0.0
        for ai, bi in zip(a.flat, b.flat):
            acc += (ai - bi) ** 2
        assert abs(got - acc / a.size) < 1e-12

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            l2_loss(Tensor(np.zeros(3)), Tensor(np.zeros(4)))


class TestSoftmaxCrossEntropy:
    def test_uniform_logits_is_log_k(self):
        logits = Tensor(np.zeros((1, 4, 3, 3)))
        labels = np.zeros((1, 3, 3), dtype=np.int64)
        assert softmax_cross_entropy(logits, labels).item() == pytest.approx(np.log(4.0))

    def test_saturated_correct_logits_tend_to_zero(self):
        labels = np.ones((1, 2, 2), dtype=np.int64)
        z = np.full((1, 3, 2, 2), -50.0)
        z[:, 1] = 50.0
        assert softmax_cross_entropy(Tensor(z), labels).item() < 1e-12

    def test_random_matches_log_sum_exp_oracle(self):
        rng = np.random.default_rng(8)
        logits = rng.normal(size=(2, 5, 4, 4)) * 3
        labels = rng.integers(0, 5, size=(2, 4, 4))
        got = softmax_cross_entropy(Tensor(logits), labels).item()
        total = 0.0
        for n in range(2):
            for y in range(4):
                for x in range(4):
                    z = logits[n, :, y, x]
                    total += np.log(np.exp(z).sum()) - z[labels[n, y, x]]
        assert abs(got - total / 32) < 1e-10

    def test_ignore_label_excluded(self):
        rng = np.random.default_rng(9)
        logits = rng.normal(size=(1, 3, 2, 2))
        labels = np.array([[[0, -1], [-1, 2]]])
        got = softmax_cross_entropy(Tensor(logits), labels, ignore_label=-1).item()
        z00 = logits[0, :, 0, 0]
        z11 = logits[0, :, 1, 1]
        expect = (
            np.log(np.exp(z00).sum()) - z00[0] + np.log(np.exp(z11).sum()) - z11[2]
        ) / 2
        assert abs(got - expect) < 1e-12

    def test_out_of_range_label_raises(self):
        logits = Tensor(np.zeros((1, 3, 1, 1)))
        with pytest.raises(ValueError, match="range"):
            softmax_cross_entropy(logits, np.array([[[7]]]))
