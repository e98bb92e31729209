# TongueMotion: contours.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
:mod:`tonguemotion.contours` -- Tongue surface contours
=======================================================

The bright tongue surface is extracted with an open active contour (a
"snake"). A contour is an array ``[N, 2]`` of subpixel ``(x, y)``
points in pixel coordinates (column, row) that form an open polyline.

The snake minimizes

   E = sum_i (alpha |v'_i|^2 + beta |v''_i|^2) / 2  +  sum_i E_image(v_i)

with forward differences along the contour (free ends) and the image
energy

   E_image = external_weight * (w_line * E_line + w_edge * E_edge)
   E_line  = -(G_sigma * I)
   E_edge  = -|grad(G_sigma * I)|^2

The line term pulls the contour onto bright ridges, the edge term onto
strong gradients. Each iteration solves the semi-implicit system

   (A + gamma I) v_t = gamma v_{t-1} - grad E_image(v_{t-1})

for the x and y coordinates, where ``A = alpha D1'D1 + beta D2'D2`` is the
pentadiagonal internal energy matrix. ``A + gamma I`` is positive
definite; it is factored once with a banded Cholesky decomposition.

By default (``normal_only``) each point only moves along its local
normal: the tension term shortens an open contour along its own length,
which over a long video would shrink the contour to a point.

Contours of the training frames are turned into image targets for the
"contours" training condition by :func:`rasterize_contour`.

.. autoclass:: SnakeParams
.. autofunction:: snake_extract
.. autofunction:: snake_energy
.. autofunction:: initial_contour
.. autofunction:: propagate_contours
.. autofunction:: rasterize_contour
.. autofunction:: contour_targets
.. autofunction:: dataset_targets
.. autofunction:: point_to_polyline
.. autofunction:: curve_distance
"""
from __future__ import absolute_import, division

import warnings
from collections import OrderedDict as odict
from concurrent.futures import ThreadPoolExecutor

import numpy
import scipy.ndimage
import scipy.linalg
from scipy.interpolate import RectBivariateSpline

from numkit.timeseries import smooth

from .exceptions import AutoCorrectionWarning
from . import utilities

import logging
logger = logging.getLogger('tonguemotion.contours')


class SnakeParams(utilities.Parameters):
    """Snake settings.

    ``alpha``, ``beta``
        elasticity and rigidity weights [0.1, 0.5]
    ``gamma``
        inverse step size [1.0]
    ``sigma``
        Gaussian pre-smoothing of the image in pixels [2.0]
    ``iterations``
        maximum number of iterations [200]
    ``external_weight``, ``w_line``, ``w_edge``
        weights of the image energy and its line and edge terms [1, 1, 0]
    ``points``
        number of contour points of automatic initializations [64]
    ``normal_only``
        restrict point motion to the local normal [True]
    """
    section = 'Snake'
    schema = (
        ('alpha', float, 0.1),
        ('beta', float, 0.5),
        ('gamma', float, 1.0),
        ('sigma', float, 2.0),
        ('iterations', int, 200),
        ('external_weight', float, 1.0),
        ('w_line', float, 1.0),
        ('w_edge', float, 0.0),
        ('points', int, 64),
        ('normal_only', utilities.boolean, True),
    )

    def validate(self):
        for name in ('alpha', 'beta', 'gamma', 'sigma'):
            if not self[name] > 0:
                raise ValueError("{0}: must be positive, got {1}".format(name, self[name]))
        if self.iterations < 0:
            raise ValueError("iterations: must not be negative, got {0}".format(self.iterations))
        if self.points < 3:
            raise ValueError("points: need at least 3, got {0}".format(self.points))
        return self

#: largest point displacement (pixels) that counts as converged
CONVERGENCE = 0.01

def internal_matrix(n, alpha, beta):
    """Dense ``alpha D1'D1 + beta D2'D2`` for an open contour of *n* points."""
    eye = numpy.eye(n)
    d1 = numpy.diff(eye, n=1, axis=0)
    d2 = numpy.diff(eye, n=2, axis=0)
    return alpha * d1.T.dot(d1) + beta * d2.T.dot(d2)

def _banded_factor(n, alpha, beta, gamma):
    M = internal_matrix(n, alpha, beta) + gamma * numpy.eye(n)
    u = 2
    ab = numpy.zeros((u + 1, n))
    for k in range(u + 1):
        ab[u - k, k:] = numpy.diagonal(M, k)
    # fails (LinAlgError) unless M is positive definite
    return scipy.linalg.cholesky_banded(ab, lower=False)

def image_energy(image, params):
    """Image energy map ``[H, W]`` of *image* (``[1, H, W]`` or ``[H, W]``)."""
    image = numpy.asarray(image, dtype=numpy.float64)
    if image.ndim == 3:
        image = image[0]
    smoothed = scipy.ndimage.gaussian_filter(image, params.sigma)
    energy = numpy.zeros_like(smoothed)
    if params.w_line:
        energy -= params.w_line * smoothed
    if params.w_edge:
        gy, gx = numpy.gradient(smoothed)
        energy -= params.w_edge * (gx * gx + gy * gy)
    return params.external_weight * energy

def _interpolator(energy):
    H, W = energy.shape
    return RectBivariateSpline(numpy.arange(W), numpy.arange(H), energy.T, kx=3, ky=3, s=0)

def snake_energy(contour, spline, A):
    """Total (internal plus image) energy of *contour*."""
    x, y = contour[:, 0], contour[:, 1]
    internal = 0.5 * (x.dot(A.dot(x)) + y.dot(A.dot(y)))
    return float(internal + spline.ev(x, y).sum())

def _normals(x, y):
    tx = numpy.gradient(x)
    ty = numpy.gradient(y)
    length = numpy.hypot(tx, ty)
    length[length == 0] = 1.0
    return -ty / length, tx / length

def _check_contour(contour, H, W):
    contour = numpy.array(contour, dtype=numpy.float64)
    if contour.ndim != 2 or contour.shape[1] != 2 or len(contour) < 3:
        raise ValueError("a contour needs at least 3 (x, y) points, got shape {0!r}".format(contour.shape))
    if not numpy.all(numpy.isfinite(contour)):
        raise ValueError("contour contains non-finite coordinates")
    x, y = contour[:, 0], contour[:, 1]
    if x.min() < 0 or x.max() > W - 1 or y.min() < 0 or y.max() > H - 1:
        raise ValueError("initial contour leaves the {0}x{1} image".format(W, H))
    return contour

def snake_extract(image, init, params=None, history=None):
    """Fit an open snake to *image*, starting from contour *init*.

    :Arguments:
       *image*
           frame ``[1, H, W]`` or ``[H, W]``
       *init*
           initial contour ``[N, 2]`` inside the image, ``N >= 3``
       *params*
           :class:`SnakeParams`
       *history*
           if a list, the total energy before the first and after every
           iteration is appended to it

    :Returns: the fitted contour ``[N, 2]``; points that would leave the
              image are clamped to it (with an
              :class:`~tonguemotion.AutoCorrectionWarning`)
    :Raises: :exc:`ValueError` if *init* is malformed or out of bounds
    """
    params = SnakeParams(params or {}).validate()
    image = numpy.asarray(image, dtype=numpy.float64)
    if not numpy.all(numpy.isfinite(image)):
        raise ValueError("image contains non-finite values")
    H, W = image.shape[-2:]
    contour = _check_contour(init, H, W)
    n = len(contour)

    spline = _interpolator(image_energy(image, params))
    factor = _banded_factor(n, params.alpha, params.beta, params.gamma)
    A = internal_matrix(n, params.alpha, params.beta) if history is not None else None
    if history is not None:
        history.append(snake_energy(contour, spline, A))

    x, y = contour[:, 0].copy(), contour[:, 1].copy()
    clamped = False
    for iteration in range(params.iterations):
        fx = spline.ev(x, y, dx=1)
        fy = spline.ev(x, y, dy=1)
        xn = scipy.linalg.cho_solve_banded((factor, False), params.gamma * x - fx)
        yn = scipy.linalg.cho_solve_banded((factor, False), params.gamma * y - fy)
        dx, dy = xn - x, yn - y
        if params.normal_only:
            nx, ny = _normals(x, y)
            along = dx * nx + dy * ny
            dx, dy = along * nx, along * ny
        xn = numpy.clip(x + dx, 0, W - 1)
        yn = numpy.clip(y + dy, 0, H - 1)
        if not clamped and (numpy.any(xn != x + dx) or numpy.any(yn != y + dy)):
            clamped = True
        step = numpy.max(numpy.hypot(xn - x, yn - y))
        x, y = xn, yn
        if history is not None:
            history.append(snake_energy(numpy.column_stack([x, y]), spline, A))
        if step < CONVERGENCE:
            logger.debug("snake converged after %d iterations", iteration + 1)
            break
    if clamped:
        warnings.warn("snake points were clamped to the {0}x{1} image".format(W, H),
                      category=AutoCorrectionWarning)
    return numpy.column_stack([x, y])

def initial_contour(frame, points=64, sigma=2.0, threshold=0.5):
    """Automatic initialization along the brightest row of each column.

    The frame is smoothed with a Gaussian of width *sigma*; columns whose
    maximum reaches *threshold* times the overall maximum belong to the
    surface. The row of the maximum in these columns is smoothed along x
    and sampled at *points* evenly spaced columns.
    """
    frame = numpy.asarray(frame, dtype=numpy.float64)
    if frame.ndim == 3:
        frame = frame[0]
    H, W = frame.shape
    smoothed = scipy.ndimage.gaussian_filter(frame, sigma)
    peak = smoothed.max(axis=0)
    columns = numpy.nonzero(peak >= threshold * peak.max())[0]
    if peak.max() <= 0 or len(columns) < 2:
        columns = numpy.arange(W)
    lo, hi = columns[0], columns[-1]
    cols = numpy.arange(lo, hi + 1)
    rows = numpy.argmax(smoothed[:, cols], axis=0).astype(numpy.float64)
    if len(rows) >= 5:
        rows = smooth(rows, window_len=5)
    xs = numpy.linspace(lo, hi, points)
    ys = numpy.clip(numpy.interp(xs, cols, rows), 0, H - 1)
    return numpy.column_stack([xs, ys])

def propagate_contours(frames, init=None, params=None, video=None):
    """Track the surface through *frames*.

    Frame t starts from the contour of frame t-1; frame 0 starts from
    *init* or, if ``None``, from :func:`initial_contour`.

    :Returns: list with one contour per frame
    """
    if len(frames) == 0:
        raise ValueError("propagate_contours() needs at least one frame")
    params = SnakeParams(params or {}).validate()
    if init is None:
        init = initial_contour(frames[0], points=params.points, sigma=params.sigma)
    contours = []
    contour = init
    for frame in frames:
        contour = snake_extract(frame, contour, params)
        contours.append(contour)
    logger.debug("tracked %d frames%s", len(contours), "" if video is None else " of " + str(video))
    return contours

def rasterize_contour(contour, height, width, radius=1.0, blur=1.0):
    """Draw *contour* into a ``[1, height, width]`` frame.

    Pixels whose centre lies within *radius* of the polyline are set to
    1 (a 2-pixel stroke), everything else to 0; the result is blurred with
    a Gaussian of width *blur* and clipped to [0, 1]. Parts of the contour
    outside the frame are clipped.
    """
    contour = numpy.asarray(contour, dtype=numpy.float64).reshape(-1, 2)
    height, width = int(height), int(width)
    if height < 1 or width < 1:
        raise ValueError("frame size must be positive, got {0}x{1}".format(width, height))
    frame = numpy.zeros((1, height, width))
    if len(contour) == 0:
        return frame
    pixels = numpy.indices((height, width)).reshape(2, -1)[::-1].T.astype(numpy.float64)
    distance = point_to_polyline(pixels, contour)
    frame[0] = (distance <= radius).reshape(height, width)
    if blur > 0:
        frame[0] = scipy.ndimage.gaussian_filter(frame[0], blur, mode='constant', cval=0.0)
    return numpy.clip(frame, 0.0, 1.0)

def point_to_polyline(points, polyline):
    """Euclidean distance of every point ``[M, 2]`` to the polyline ``[N, 2]``."""
    points = numpy.asarray(points, dtype=numpy.float64).reshape(-1, 2)
    polyline = numpy.asarray(polyline, dtype=numpy.float64).reshape(-1, 2)
    if len(polyline) == 1:
        polyline = numpy.vstack([polyline, polyline])
    start, end = polyline[:-1], polyline[1:]
    best = numpy.full(len(points), numpy.inf)
    for p, q in zip(start, end):
        d = q - p
        rel = points - p
        length2 = d.dot(d)
        t = numpy.clip(rel.dot(d) / length2, 0.0, 1.0) if length2 > 0 else numpy.zeros(len(points))
        off = rel - t[:, numpy.newaxis] * d
        numpy.minimum(best, numpy.hypot(off[:, 0], off[:, 1]), out=best)
    return best

def curve_distance(contour, curve):
    """Mean distance of the contour points to a curve ``y(x)`` given per column."""
    curve = numpy.asarray(curve, dtype=numpy.float64)
    polyline = numpy.column_stack([numpy.arange(len(curve)), curve])
    return float(point_to_polyline(contour, polyline).mean())

def contour_targets(frames, params=None, init=None, video=None):
    """Contours of all *frames* and their rasterizations.

    :Returns: ``(contours, targets)``; *targets* is a list of ``[1, H, W]``
              frames suitable as training targets
    """
    contours = propagate_contours(frames, init=init, params=params, video=video)
    H, W = numpy.asarray(frames[0]).shape[-2:]
    return contours, [rasterize_contour(c, H, W) for c in contours]

def dataset_targets(videos, params=None, jobs=1):
    """Rasterized contour targets of every video (dict name -> frames).

    Videos are independent; with *jobs* > 1 they are tracked in threads.

    :Returns: ``(contours, targets)``, ordered dicts keyed by video name
    """
    params = SnakeParams(params or {}).validate()
    names = list(videos)

    def track(name):
        return contour_targets(videos[name], params=params, video=name)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(track, names))
    else:
        results = [track(name) for name in names]
    logger.info("extracted contours of %d videos", len(names))
    return (odict((n, r[0]) for n, r in zip(names, results)),
            odict((n, r[1]) for n, r in zip(names, results)))
