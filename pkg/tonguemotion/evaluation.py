# TongueMotion: evaluation.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
:mod:`tonguemotion.evaluation` -- Metrics, baselines and reports
================================================================

Predicted frames are scored against the true target frames with two
metrics:

:func:`mse_8bit`
    mean squared error on the 0-255 intensity scale
:func:`cw_ssim`
    complex wavelet structural similarity, which tolerates small shifts
    of the tongue surface that pixel MSE punishes hard

Besides trained models (wrapped in :class:`ModelPredictor`) three
predictors without parameters serve as baselines (see :data:`registry`):

``average``
    the pixelwise mean of the input frames
``copy-8th``
    the last input frame
``contour-copy``
    the window's reference target, i.e. the rasterized contour of the
    last input frame in the contours condition

:func:`evaluate` runs all predictors over the same windows and collects
one row per predictor in a :class:`~tonguemotion.fileformats.ReportTable`
(``predictor,offset,mse,cwssim,n``).

CW-SSIM
-------

Both frames are filtered with a bank of complex Gabor kernels (every
combination of :attr:`CwSsimConfig.wavelengths` and
:attr:`CwSsimConfig.orientations`; Gaussian envelope with standard
deviation 0.56 wavelength on a square support, zero mean, unit norm).
In every subband and window *w* of the coefficient maps the local score
is::

   (2 |sum_w c_a conj(c_b)| + K) / (sum_w |c_a|^2 + sum_w |c_b|^2 + K)

and the index is the mean over all windows of all subbands. It is 1 for
identical frames, symmetric, and lies in [0, 1].

.. autoclass:: CwSsimConfig
.. autofunction:: mse_8bit
.. autofunction:: cw_ssim
.. autofunction:: gabor_bank
.. autofunction:: baseline_average
.. autofunction:: baseline_copy_last
.. autofunction:: baseline_contour_copy
.. autoclass:: ModelPredictor
   :members:
.. autodata:: registry
.. autofunction:: score_predictions
.. autofunction:: write_frames
.. autofunction:: evaluate
"""
from __future__ import absolute_import, division

import os
import math
from collections import OrderedDict as odict

import six
import numpy
import scipy.signal
from numpy.lib.stride_tricks import sliding_window_view

from .exceptions import ShapeError, OffsetMismatchError, MissingDataError
from .fileformats import PGM, ReportTable
from .network import forward_sequence
from . import utilities

import logging
logger = logging.getLogger('tonguemotion.evaluation')


class CwSsimConfig(utilities.Parameters):
    """CW-SSIM settings.

    ``wavelengths``
        carrier wavelengths in pixels [4 8]
    ``orientations``
        carrier orientations in degrees [0 45 90 135]
    ``support``
        odd side length of the filter kernels [11]
    ``window``, ``stride``
        side length and step of the pooling windows on the coefficient
        maps [7, 4]
    ``K``
        stabilizing constant [0.01]
    """
    section = 'CWSSIM'
    schema = (
        ('wavelengths', utilities.floatlist, [4.0, 8.0]),
        ('orientations', utilities.floatlist, [0.0, 45.0, 90.0, 135.0]),
        ('support', int, 11),
        ('window', int, 7),
        ('stride', int, 4),
        ('K', float, 0.01),
    )

    def validate(self):
        if not self.wavelengths or any(w <= 0 for w in self.wavelengths):
            raise ValueError("wavelengths: need positive values, got {0!r}".format(self.wavelengths))
        if not self.orientations:
            raise ValueError("orientations: need at least one angle")
        if self.support < 1 or self.support % 2 == 0:
            raise ValueError("support: must be odd and positive, got {0}".format(self.support))
        if self.window < 1 or self.stride < 1:
            raise ValueError("window and stride must be positive, got {0}, {1}".format(self.window, self.stride))
        if not self.K > 0:
            raise ValueError("K: must be positive, got {0}".format(self.K))
        return self


_gabor_cache = {}

def gabor_bank(wavelengths, orientations, support):
    """List of complex Gabor kernels ``[support, support]`` (cached)."""
    key = (tuple(wavelengths), tuple(orientations), int(support))
    if key in _gabor_cache:
        return _gabor_cache[key]
    half = support // 2
    v, u = numpy.mgrid[-half:half + 1, -half:half + 1].astype(numpy.float64)
    bank = []
    for wavelength in wavelengths:
        sigma = 0.56 * wavelength
        envelope = numpy.exp(-(u * u + v * v) / (2 * sigma * sigma))
        for angle in orientations:
            theta = numpy.deg2rad(angle)
            kernel = envelope * numpy.exp(2j * numpy.pi * (u * numpy.cos(theta) + v * numpy.sin(theta)) / wavelength)
            kernel -= kernel.mean()
            kernel /= numpy.sqrt(numpy.sum(numpy.abs(kernel) ** 2))
            bank.append(kernel)
    _gabor_cache[key] = bank
    return bank

def _image(frame):
    frame = numpy.asarray(frame, dtype=numpy.float64)
    return frame[0] if frame.ndim == 3 else frame

def _check_pair(a, b):
    a, b = _image(a), _image(b)
    if a.shape != b.shape:
        raise ShapeError("frames differ in shape: {0!r} != {1!r}".format(a.shape, b.shape))
    return a, b

def mse_8bit(a, b):
    """Mean of ``(255 a - 255 b)**2`` over all pixels."""
    a, b = _check_pair(a, b)
    diff = 255.0 * a - 255.0 * b
    return float(numpy.mean(diff * diff))

def cw_ssim(a, b, cfg=None):
    """Complex wavelet structural similarity of frames *a* and *b*.

    :Raises: :exc:`~tonguemotion.ShapeError` if the shapes differ,
             :exc:`ValueError` if the frames are smaller than the filter
             support
    """
    cfg = CwSsimConfig(cfg or {}).validate()
    a, b = _check_pair(a, b)
    if min(a.shape) < cfg.support:
        raise ValueError("frame {0}x{1} is smaller than the {2}x{2} filter support".format(
            a.shape[1], a.shape[0], cfg.support))
    # subbands have the size of the frame; the window never exceeds them
    w, s, K = min(cfg.window, min(a.shape)), cfg.stride, cfg.K

    def pooled(x):
        return sliding_window_view(x, (w, w))[::s, ::s].sum(axis=(-1, -2))

    scores = []
    for kernel in gabor_bank(cfg.wavelengths, cfg.orientations, cfg.support):
        ca = scipy.signal.convolve2d(a, kernel, mode='same', boundary='symm')
        cb = scipy.signal.convolve2d(b, kernel, mode='same', boundary='symm')
        # c_a conj(c_b) from real products so that swapping a and b is exact
        cross = numpy.hypot(pooled(ca.real * cb.real + ca.imag * cb.imag),
                            pooled(ca.imag * cb.real - ca.real * cb.imag))
        power = pooled(ca.real ** 2 + ca.imag ** 2) + pooled(cb.real ** 2 + cb.imag ** 2)
        scores.append(((2 * cross + K) / (power + K)).ravel())
    return float(numpy.clip(numpy.mean(numpy.concatenate(scores)), 0.0, 1.0))

def baseline_average(window):
    """Pixelwise mean of the input frames of *window*."""
    return numpy.mean(window.inputs, axis=0)

def baseline_copy_last(window):
    """The last input frame of *window*."""
    return window.inputs[-1]

def baseline_contour_copy(window):
    """The target-domain version of the last input frame (its rasterized contour)."""
    return window.reference


class ModelPredictor(object):
    """Make a :class:`~tonguemotion.network.Model` usable as a predictor.

    Predictions are clamped to [0, 1].
    """
    def __init__(self, model, name="ConvLSTM", batch=16):
        self.model = model
        self.name = name
        self.batch = batch

    @property
    def offset(self):
        return self.model.offset

    def __call__(self, window):
        return self.predict_batch([window])[0]

    def predict_batch(self, windows):
        """Predictions for all *windows*, computed in batches."""
        out = []
        for start in range(0, len(windows), self.batch):
            inputs = numpy.stack([w.inputs for w in windows[start:start + self.batch]])
            prediction, _ = forward_sequence(inputs, self.model, keep_caches=False)
            out.extend(numpy.clip(prediction, 0.0, 1.0))
        return out

    def __repr__(self):
        return "ModelPredictor({0!r}, {1!r})".format(self.name, self.model)


#: Predictors without parameters, by report name.
registry = odict([
    ('average', baseline_average),
    ('copy-8th', baseline_copy_last),
    ('contour-copy', baseline_contour_copy),
])

def _predictors(predictors):
    if isinstance(predictors, dict):
        items = list(predictors.items())
    else:
        items = []
        for p in utilities.asiterable(predictors):
            if isinstance(p, six.string_types):
                try:
                    items.append((p, registry[p]))
                except KeyError:
                    raise ValueError("unknown predictor {0!r}; known: {1}".format(p, ", ".join(registry)))
            else:
                items.append((getattr(p, 'name', getattr(p, '__name__', repr(p))), p))
    return items

def score_predictions(predictions, windows, cfg=None):
    """Per-window 8-bit MSE and CW-SSIM of *predictions* against the targets.

    :Returns: ``(mse, cwssim)`` arrays
    """
    cfg = CwSsimConfig(cfg or {}).validate()
    mse = numpy.array([mse_8bit(p, w.target) for p, w in zip(predictions, windows)])
    cws = numpy.array([cw_ssim(p, w.target, cfg) for p, w in zip(predictions, windows)])
    return mse, cws

def write_frames(outdir, predictions, windows):
    """Write *predictions* as 8-bit PGMs ``<outdir>/<video>_<target index>.pgm``."""
    utilities.mkdir_p(outdir)
    for p, w in zip(predictions, windows):
        filename = os.path.join(outdir, "{0}_{1:06d}.pgm".format(w.video or "video", w.target_index))
        PGM.from_frame(numpy.clip(p, 0.0, 1.0)).write(filename)
    logger.info("wrote %d predicted frames to %r", len(windows), outdir)

def evaluate(predictors, windows, offset, cfg=None, report=None, frames_out=None):
    """Score every predictor on *windows*.

    :Arguments:
       *predictors*
           names from :data:`registry`, callables ``window -> frame``
           (:class:`ModelPredictor` instances are batched) or a dict
           name -> callable
       *windows*
           :class:`~tonguemotion.data.SampleWindow` list built for *offset*
       *offset*
           the predicted frame offset (1..3)
       *cfg*
           :class:`CwSsimConfig`
       *report*
           write the table to this CSV file (atomically)
       *frames_out*
           write predicted frames as ``<frames_out>/<predictor>/<video>_<index>.pgm``

    :Returns: :class:`~tonguemotion.fileformats.ReportTable`
    :Raises: :exc:`~tonguemotion.OffsetMismatchError` if a window or a model
             predictor belongs to another offset
    """
    cfg = CwSsimConfig(cfg or {}).validate()
    if not windows:
        raise MissingDataError("evaluate() needs at least one window")
    offsets = sorted(set(w.offset for w in windows))
    if offsets != [offset]:
        errmsg = "windows are built for offset(s) {0}, evaluation asks for offset {1}".format(offsets, offset)
        logger.error(errmsg)
        raise OffsetMismatchError(errmsg)
    table = ReportTable()
    for name, predictor in _predictors(predictors):
        if getattr(predictor, 'offset', None) not in (None, offset):
            errmsg = "predictor {0!r} predicts offset {1}, evaluation asks for offset {2}".format(
                name, predictor.offset, offset)
            logger.error(errmsg)
            raise OffsetMismatchError(errmsg)
        if hasattr(predictor, 'predict_batch'):
            predictions = predictor.predict_batch(windows)
        else:
            predictions = [predictor(w) for w in windows]
        mse, cws = score_predictions(predictions, windows, cfg)
        row = (name, offset, math.fsum(mse) / len(mse), math.fsum(cws) / len(cws), len(windows))
        table.append(row)
        logger.info("%-12s offset %d: MSE %.4g  CW-SSIM %.4f  (%d windows)", *row)
        if frames_out is not None:
            write_frames(os.path.join(frames_out, name), predictions, windows)
    if report is not None:
        table.write(report)
    return table
