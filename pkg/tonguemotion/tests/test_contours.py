# TongueMotion: test_contours.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.

from __future__ import division, absolute_import

import pytest
import numpy
from numpy.testing import assert_equal, assert_allclose

from tonguemotion.contours import (SnakeParams, internal_matrix, snake_extract, initial_contour,
                                   propagate_contours, rasterize_contour, point_to_polyline,
                                   curve_distance, contour_targets, dataset_targets)
from numkit.timeseries import is_nonincreasing
from tonguemotion.exceptions import AutoCorrectionWarning

SIZE = 48


def ridge_image(curve, width=1.5, size=SIZE):
    """Bright ridge along the curve y(x) given per column."""
    rows = numpy.arange(size)[:, numpy.newaxis]
    return numpy.exp(-(rows - curve[numpy.newaxis, :]) ** 2 / (2 * width ** 2))

def flat(y=24.0):
    return numpy.full(SIZE, y)

def parabola(shift=0.0):
    x = numpy.arange(SIZE, dtype=float)
    return 14.0 + 0.02 * (x - 24.0) ** 2 + shift

def contour_on(curve, lo=6, hi=41, points=32):
    xs = numpy.linspace(lo, hi, points)
    return numpy.column_stack([xs, numpy.interp(xs, numpy.arange(len(curve)), curve)])


class TestParams(object):
    def test_defaults(self):
        p = SnakeParams()
        assert (p.alpha, p.beta, p.gamma, p.sigma, p.iterations) == (0.1, 0.5, 1.0, 2.0, 200)
        assert p.normal_only is True

    @pytest.mark.parametrize('key', ['alpha', 'beta', 'gamma', 'sigma'])
    def test_positive(self, key):
        with pytest.raises(ValueError):
            SnakeParams(**{key: 0}).validate()


def test_internal_matrix():
    A = internal_matrix(6, 0.1, 0.5)
    assert_allclose(A, A.T)
    # free ends: constant and linear contours carry no bending, constants no tension
    assert_allclose(A.dot(numpy.ones(6)), 0.0, atol=1e-15)
    assert numpy.all(numpy.linalg.eigvalsh(A + numpy.eye(6)) > 0)
    assert numpy.count_nonzero(numpy.triu(A, 3)) == 0


class TestSnake(object):
    def test_ridge_is_fixed_point(self):
        init = contour_on(flat())
        result = snake_extract(ridge_image(flat()), init)
        assert numpy.abs(result - init).max() < 0.5

    def test_ridge_offset(self):
        init = contour_on(flat(27.0))
        result = snake_extract(ridge_image(flat()), init)
        assert curve_distance(result, flat()) < 1.0

    def test_energy_non_increasing(self):
        history = []
        snake_extract(ridge_image(flat()), contour_on(flat(27.0)), history=history)
        assert len(history) > 2
        assert is_nonincreasing(history, tol=1e-6)
        assert history[-1] < history[0]

    def test_arc(self):
        init = contour_on(parabola(2.0))
        result = snake_extract(ridge_image(parabola()), init)
        assert curve_distance(result, parabola()) < 1.5
        assert curve_distance(result, parabola()) < curve_distance(init, parabola())

    def test_deterministic(self):
        image = ridge_image(parabola())
        init = contour_on(parabola(2.0))
        assert_equal(snake_extract(image, init), snake_extract(image, init))

    def test_accepts_frames(self):
        image = ridge_image(flat())
        init = contour_on(flat(25.0))
        assert_equal(snake_extract(image[numpy.newaxis], init), snake_extract(image, init))

    def test_clamped(self):
        params = SnakeParams(external_weight=50.0)
        init = contour_on(flat(4.0))
        with pytest.warns(AutoCorrectionWarning):
            result = snake_extract(ridge_image(flat(2.0)), init, params)
        assert result[:, 1].min() >= 0.0
        assert result[:, 0].max() <= SIZE - 1

    @pytest.mark.parametrize('init', [
        [[1.0, 1.0], [2.0, 2.0]],                 # too few points
        [[1.0, 1.0], [2.0, 2.0], [3.0, -0.5]],    # out of bounds
        [[1.0, 1.0], [2.0, 2.0], [SIZE, 3.0]],    # out of bounds
        [[1.0, 1.0], [2.0, numpy.nan], [3.0, 3.0]],
    ])
    def test_bad_init(self, init):
        with pytest.raises(ValueError):
            snake_extract(ridge_image(flat()), numpy.array(init))

    def test_initial_contour(self):
        init = initial_contour(ridge_image(parabola()), points=20)
        assert init.shape == (20, 2)
        assert curve_distance(init, parabola()) < 1.0


class TestPropagate(object):
    def test_static_video(self):
        frames = [ridge_image(parabola())[numpy.newaxis]] * 6
        contours = propagate_contours(frames, init=contour_on(parabola(1.0)))
        assert len(contours) == 6
        for contour in contours[1:]:
            assert numpy.abs(contour - contours[0]).max() < 0.5

    def test_translating_arc(self):
        frames = [ridge_image(parabola(t))[numpy.newaxis] for t in range(10)]
        contours = propagate_contours(frames, init=contour_on(parabola()))
        for t, contour in enumerate(contours):
            assert curve_distance(contour, parabola(t)) < 1.5, t

    def test_automatic_init(self):
        frames = [ridge_image(parabola())[numpy.newaxis]] * 2
        contours = propagate_contours(frames, params=SnakeParams(points=16))
        assert contours[0].shape == (16, 2)

    def test_empty(self):
        with pytest.raises(ValueError):
            propagate_contours([])

    def test_targets(self):
        frames = [ridge_image(parabola(t))[numpy.newaxis] for t in range(3)]
        videos = {'a': frames, 'b': frames[::-1]}
        contours, targets = dataset_targets(videos, jobs=1)
        threaded_contours, threaded = dataset_targets(videos, jobs=2)
        assert list(targets) == ['a', 'b']
        for name in videos:
            assert len(targets[name]) == 3
            assert targets[name][0].shape == (1, SIZE, SIZE)
            for x, y in zip(targets[name], threaded[name]):
                assert_equal(x, y)
        single, single_targets = contour_targets(frames, video='a')
        assert_equal(single_targets[2], targets['a'][2])


class TestRasterize(object):
    def test_outside(self):
        frame = rasterize_contour([[-10.0, -20.0], [50.0, -20.0]], 32, 32)
        assert frame.shape == (1, 32, 32)
        assert_equal(frame, 0.0)

    def test_horizontal_band(self):
        frame = rasterize_contour([[-5.0, 10.0], [40.0, 10.0]], 32, 32)
        assert frame[0, 10, 16] > 0.5
        assert frame[0, 10, 16] > frame[0, 12, 16] > frame[0, 14, 16]
        assert_equal(frame[0, 16:], 0.0)
        assert_equal(frame[0, :4], 0.0)
        assert frame.min() >= 0.0 and frame.max() <= 1.0

    def test_binary_stroke(self):
        frame = rasterize_contour([[0.0, 5.0], [9.0, 5.0]], 10, 10, blur=0)
        assert_equal(frame[0, 4:7], 1.0)
        assert_equal(frame[0, :4], 0.0)
        assert_equal(frame[0, 7:], 0.0)

    def test_translation_covariant(self):
        contour = numpy.array([[10.25, 12.5], [16.75, 15.0], [24.5, 13.25]])
        frame = rasterize_contour(contour, 40, 40)
        moved = rasterize_contour(contour + [3, 2], 40, 40)
        assert_equal(moved[0, 2:, 3:], frame[0, :-2, :-3])

    def test_bad_size(self):
        with pytest.raises(ValueError):
            rasterize_contour([[0, 0], [1, 1]], 0, 5)


class TestDistances(object):
    def test_point_to_polyline(self):
        polyline = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0]]
        points = [[1.0, 1.0], [3.0, 0.0], [-1.0, 0.0], [2.0, 1.0], [1.0, -0.5]]
        assert_allclose(point_to_polyline(points, polyline), [1.0, 1.0, 1.0, 0.0, 0.5])

    def test_single_point_polyline(self):
        assert_allclose(point_to_polyline([[3.0, 4.0]], [[0.0, 0.0]]), [5.0])

    def test_curve_distance(self):
        curve = parabola()
        assert curve_distance(contour_on(curve), curve) < 1e-2
        assert curve_distance(contour_on(flat(20.0)), flat(23.0)) == pytest.approx(3.0)
