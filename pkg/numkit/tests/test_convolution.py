# -*- coding: utf-8 -*-
# numkit.convolution test cases
# Published under the Modified BSD Licence.

from __future__ import division, absolute_import

import pytest
import numpy
from numpy.testing import assert_equal, assert_almost_equal, assert_allclose

from numkit import ShapeError
from numkit.convolution import ConvKernel, conv2d_same, conv2d_backward
from numkit.gradcheck import check_gradient


def conv_bruteforce(x, weights, bias):
    """Nested-loop zero-padded cross-correlation."""
    C, H, W = x.shape
    O, _, k, _ = weights.shape
    p = k // 2
    out = numpy.zeros((O, H, W))
    for o in range(O):
        for y in range(H):
            for xx in range(W):
                s = bias[o]
                for c in range(C):
                    for i in range(k):
                        for j in range(k):
                            yy, xj = y + i - p, xx + j - p
                            if 0 <= yy < H and 0 <= xj < W:
                                s += weights[o, c, i, j] * x[c, yy, xj]
                out[o, y, xx] = s
    return out

@pytest.fixture
def grid():
    return numpy.arange(1, 10, dtype=numpy.float64).reshape(1, 3, 3)


def test_identity_1x1(grid):
    kernel = ConvKernel(numpy.ones((1, 1, 1, 1)), numpy.zeros(1))
    assert_equal(conv2d_same(grid, kernel), grid)

def test_all_ones_3x3(grid):
    kernel = ConvKernel(numpy.ones((1, 1, 3, 3)))
    out = conv2d_same(grid, kernel)
    assert out.shape == (1, 3, 3)
    assert_almost_equal(out[0, 1, 1], 45)
    assert_almost_equal(out[0, 0, 0], 12)

def test_no_kernel_flip():
    x = numpy.zeros((1, 5, 5))
    x[0, 2, 2] = 1.0
    w = numpy.zeros((1, 1, 3, 3))
    w[0, 0, 0, 0] = 1.0          # top-left tap
    out = conv2d_same(x, ConvKernel(w))
    # correlation: out[y,x] = x[y-1,x-1] -> impulse moves down-right
    assert out[0, 3, 3] == 1.0
    assert out.sum() == 1.0

def test_centered_delta_is_identity():
    rng = numpy.random.RandomState(11)
    x = rng.randn(3, 6, 7)
    w = numpy.zeros((3, 3, 5, 5))
    for c in range(3):
        w[c, c, 2, 2] = 1.0
    assert_equal(conv2d_same(x, ConvKernel(w)), x)

@pytest.mark.parametrize('seed', range(100))
def test_bruteforce_oracle(seed):
    rng = numpy.random.RandomState(seed)
    k = [1, 3, 5][seed % 3]
    x = rng.randn(2, 5, 5)
    w = rng.randn(4, 2, k, k)
    b = rng.randn(4)
    assert_allclose(conv2d_same(x, ConvKernel(w, b)), conv_bruteforce(x, w, b), rtol=0, atol=1e-12)

def test_batch_matches_single():
    rng = numpy.random.RandomState(3)
    x = rng.randn(3, 2, 6, 6)
    kernel = ConvKernel(rng.randn(4, 2, 3, 3), rng.randn(4))
    out = conv2d_same(x, kernel)
    assert out.shape == (3, 4, 6, 6)
    for i in range(3):
        assert_allclose(out[i], conv2d_same(x[i], kernel), rtol=0, atol=1e-12)

def test_linearity():
    rng = numpy.random.RandomState(5)
    kernel = ConvKernel(rng.randn(3, 2, 3, 3))
    x, y = rng.randn(2, 2, 7, 7)
    a, b = rng.randn(2)
    lhs = conv2d_same(a * x + b * y, kernel)
    rhs = a * conv2d_same(x, kernel) + b * conv2d_same(y, kernel)
    assert_allclose(lhs, rhs, rtol=0, atol=1e-10)

def test_channel_mismatch():
    kernel = ConvKernel(numpy.ones((1, 2, 3, 3)))
    with pytest.raises(ShapeError):
        conv2d_same(numpy.ones((3, 4, 4)), kernel)

@pytest.mark.parametrize('shape', [(1, 1, 2, 2), (1, 1, 3, 5), (2, 3, 3)])
def test_bad_kernel(shape):
    with pytest.raises(ShapeError):
        ConvKernel(numpy.ones(shape))


class TestBackward(object):
    def setup_method(self):
        rng = numpy.random.RandomState(42)
        self.x = rng.randn(2, 5, 5)
        self.kernel = ConvKernel(rng.randn(3, 2, 3, 3), rng.randn(3))
        self.g = rng.randn(3, 5, 5)

    def objective(self):
        return numpy.sum(self.g * conv2d_same(self.x, self.kernel))

    def test_zero_cotangent(self):
        dx, dw, db = conv2d_backward(self.x, self.kernel, numpy.zeros_like(self.g))
        assert not dx.any() and not dw.any() and not db.any()
        assert dx.shape == self.x.shape
        assert dw.shape == self.kernel.weights.shape
        assert db.shape == self.kernel.bias.shape

    def test_1x1_weight_gradient(self):
        rng = numpy.random.RandomState(1)
        x = rng.randn(1, 4, 4)
        g = rng.randn(1, 4, 4)
        kernel = ConvKernel(numpy.full((1, 1, 1, 1), 0.7))
        _, dw, _ = conv2d_backward(x, kernel, g)
        assert_almost_equal(dw[0, 0, 0, 0], numpy.sum(x * g), decimal=12)

    def test_input_gradient(self):
        dx, _, _ = conv2d_backward(self.x, self.kernel, self.g)
        assert check_gradient(self.objective, self.x, dx) < 1e-6

    def test_weight_gradient(self):
        _, dw, _ = conv2d_backward(self.x, self.kernel, self.g)
        assert check_gradient(self.objective, self.kernel.weights, dw) < 1e-6

    def test_bias_gradient(self):
        _, _, db = conv2d_backward(self.x, self.kernel, self.g)
        assert check_gradient(self.objective, self.kernel.bias, db) < 1e-6

    def test_batched_accumulates_over_samples(self):
        rng = numpy.random.RandomState(7)
        xb = rng.randn(4, 2, 5, 5)
        gb = rng.randn(4, 3, 5, 5)
        dx, dw, db = conv2d_backward(xb, self.kernel, gb)
        parts = [conv2d_backward(xb[i], self.kernel, gb[i]) for i in range(4)]
        assert_allclose(dw, sum(p[1] for p in parts), atol=1e-12)
        assert_allclose(db, sum(p[2] for p in parts), atol=1e-12)
        for i in range(4):
            assert_allclose(dx[i], parts[i][0], atol=1e-12)

    def test_grad_out_shape_mismatch(self):
        with pytest.raises(ShapeError):
            conv2d_backward(self.x, self.kernel, numpy.zeros((2, 5, 5)))
