# -*- coding: utf-8 -*-
# numkit.gradcheck test cases
# Published under the Modified BSD Licence.

from __future__ import division, absolute_import

import pytest
import numpy
from numpy.testing import assert_allclose

from numkit import LowAccuracyWarning
from numkit.gradcheck import numerical_gradient, relative_error, check_gradient


def test_quadratic():
    x = numpy.array([1.0, -2.0, 0.5])
    grad = numerical_gradient(lambda: numpy.sum(x ** 2), x)
    assert_allclose(grad, 2 * x, rtol=1e-8)
    assert_allclose(x, [1.0, -2.0, 0.5])   # restored

def test_indices():
    x = numpy.arange(4.0)
    grad = numerical_gradient(lambda: numpy.sum(x ** 3), x, indices=[1, 3])
    assert grad[0] == 0 and grad[2] == 0
    assert_allclose(grad[[1, 3]], [3.0, 27.0], rtol=1e-8)

def test_check_gradient_detects_error():
    x = numpy.linspace(-1, 1, 5)
    f = lambda: numpy.sum(numpy.sin(x))
    assert check_gradient(f, x, numpy.cos(x)) < 1e-9
    assert check_gradient(f, x, 1.1 * numpy.cos(x)) > 1e-2
    assert check_gradient(f, x, numpy.cos(x), indices=[0, 4]) < 1e-9

def test_relative_error():
    assert relative_error([0.0], [0.0]) == 0.0
    assert relative_error([1.0, 1.0], [1.0, 1.0]) == 0.0
    with pytest.raises(ValueError):
        relative_error([1.0], [1.0, 2.0])

def test_single_precision_warns():
    x = numpy.ones(2, dtype=numpy.float32)
    with pytest.warns(LowAccuracyWarning):
        numerical_gradient(lambda: float(numpy.sum(x)), x, eps=1e-2)
