# TongueMotion: data.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
:mod:`tonguemotion.data` -- Frames, videos and sample windows
=============================================================

A *frame* is a float array ``[1, H, W]`` with intensities in [0, 1]. A
*video* is the list of its frames in time order. On disk a dataset is a
directory of videos::

   <root>/manifest.txt               "utt_0000 120" per line
   <root>/utt_0000/frame_000000.pgm  binary PGM (P5) frames
   <root>/utt_0000/curve.txt         ground truth surface (synthetic data only)

Training samples are :class:`SampleWindow` objects: *T* = 8 consecutive
input frames and the frame *offset* steps after the last of them. Windows
never straddle two videos.

Synthetic videos
----------------

The clinical recordings this kind of model is built for are not freely
available, so :func:`synth_generate` renders stand-in videos: a bright,
smoothly deforming open arc (the tongue surface) over a dark background
with multiplicative speckle. The surface at frame *t* is::

   y(x, t) = H * (baseline + amplitude * sin(2 pi (x/W) cycles + phi(t)))

where the phase phi follows a random walk whose velocity is a
first-order autoregressive process, so the motion is smooth and partly
predictable. Everything is drawn from :class:`numpy.random.RandomState`
seeded from *seed*; the same seed reproduces the same bytes.

.. autoclass:: SampleWindow
.. autoclass:: SynthParams
.. autofunction:: load_video
.. autofunction:: load_dataset
.. autofunction:: load_curves
.. autofunction:: split_videos
.. autofunction:: resize_bilinear
.. autofunction:: make_windows
.. autofunction:: dataset_windows
.. autofunction:: synth_generate
.. autofunction:: render_video
"""
from __future__ import absolute_import, division

import os
import glob
from collections import OrderedDict as odict

import numpy
import scipy.ndimage

from .exceptions import MissingDataError, FrameSizeError, ParseError
from .fileformats import PGM
from . import utilities

import logging
logger = logging.getLogger('tonguemotion.data')

#: name of the manifest file in a dataset root
MANIFEST = "manifest.txt"
#: ground truth surface heights of a synthetic video
CURVES = "curve.txt"


class SampleWindow(object):
    """*T* input frames and the target frame *offset* steps after the last one.

    :attr:`inputs`
        ``[T, 1, H, W]``
    :attr:`target`
        ``[1, H, W]``; a raw frame or, for the contour condition, a
        rasterized contour
    :attr:`reference`
        the target-domain version of the last input frame (the frame itself
        or its rasterized contour); what a "copy the last frame" predictor
        returns
    :attr:`offset`, :attr:`video`, :attr:`start`
        offset (1..3), source video name and index of the first input frame
    """
    __slots__ = ('inputs', 'target', 'reference', 'offset', 'video', 'start')

    def __init__(self, inputs, target, offset, video=None, start=0, reference=None):
        self.inputs = inputs
        self.target = target
        self.offset = offset
        self.video = video
        self.start = start
        self.reference = inputs[-1] if reference is None else reference

    @property
    def window(self):
        return len(self.inputs)

    @property
    def target_index(self):
        """Index of the target frame in the video."""
        return self.start + self.window - 1 + self.offset

    def __repr__(self):
        return "SampleWindow(video={0!r}, start={1}, T={2}, offset={3})".format(
            self.video, self.start, self.window, self.offset)


def resize_bilinear(frame, height, width):
    """Resize *frame* with corner-aligned bilinear interpolation.

    Output pixel *j* samples the input at ``j (n_in - 1) / (n_out - 1)``
    along each axis, so the corner pixels map onto each other; a single
    output pixel samples the centre. Same-size resizing returns a copy.
    Values are clipped to [0, 1].
    """
    frame = numpy.asarray(frame)
    squeeze = frame.ndim == 2
    img = frame if squeeze else frame[0]
    height, width = int(height), int(width)
    if height < 1 or width < 1:
        raise ValueError("target size must be positive, got {0}x{1}".format(height, width))
    if img.shape == (height, width):
        return frame.copy()

    def coordinates(n_in, n_out):
        if n_out == 1:
            return numpy.array([(n_in - 1) / 2.0])
        return numpy.arange(n_out) * ((n_in - 1) / (n_out - 1.0))

    rows = coordinates(img.shape[0], height)
    cols = coordinates(img.shape[1], width)
    grid = numpy.meshgrid(rows, cols, indexing='ij')
    out = scipy.ndimage.map_coordinates(img.astype(numpy.float64), grid, order=1, mode='nearest')
    out = numpy.clip(out, 0.0, 1.0).astype(frame.dtype, copy=False)
    return out if squeeze else out[numpy.newaxis]

def load_video(dirname, height=None, width=None):
    """Read all ``*.pgm`` frames of *dirname* in lexicographic order.

    Frames are scaled to [0, 1] and resized to *height* x *width* unless
    these are ``None``.

    :Raises: :exc:`IOError` for unreadable files,
             :exc:`~tonguemotion.PGMFormatError` for files that are not P5,
             :exc:`~tonguemotion.FrameSizeError` if the frames of the video
             do not all have the same size,
             :exc:`~tonguemotion.MissingDataError` if there are no frames
    """
    if not os.path.isdir(dirname):
        raise IOError("video directory {0!r} does not exist".format(dirname))
    filenames = sorted(glob.glob(os.path.join(dirname, "*.pgm")))
    if not filenames:
        errmsg = "no *.pgm frames in {0!r}".format(dirname)
        logger.error(errmsg)
        raise MissingDataError(errmsg)
    frames = []
    shape = None
    for filename in filenames:
        pgm = PGM(filename)
        if shape is None:
            shape = pgm.shape
        elif pgm.shape != shape:
            errmsg = "{0!r}: frame size {1[1]}x{1[0]} differs from {2[1]}x{2[0]} of the first frame".format(
                filename, pgm.shape, shape)
            logger.error(errmsg)
            raise FrameSizeError(errmsg)
        frame = pgm.to_frame()
        if height is not None and width is not None:
            frame = resize_bilinear(frame, height, width)
        frames.append(frame)
    logger.debug("loaded %d frames from %r", len(frames), dirname)
    return frames

def read_manifest(root):
    """List of ``(video, frame_count)`` from the manifest of *root*."""
    filename = os.path.join(root, MANIFEST)
    entries = []
    with open(filename) as manifest:
        for lineno, line in enumerate(manifest, start=1):
            fields = line.split()
            if not fields or fields[0].startswith('#'):
                continue
            try:
                name, count = fields[0], int(fields[1])
            except (IndexError, ValueError):
                errmsg = "{0}:{1}: expected 'VIDEO FRAMES', got {2!r}".format(filename, lineno, line.strip())
                logger.error(errmsg)
                raise ParseError(errmsg)
            entries.append((name, count))
    return entries

def load_dataset(root, height=None, width=None):
    """Read every video listed in the manifest of *root*.

    Without a manifest all sub-directories are read in sorted order.

    :Returns: ordered dict ``video -> list of frames``
    :Raises: :exc:`~tonguemotion.ParseError` if a video does not have the
             number of frames that the manifest announces
    """
    if not os.path.isdir(root):
        raise IOError("dataset directory {0!r} does not exist".format(root))
    if os.path.exists(os.path.join(root, MANIFEST)):
        entries = read_manifest(root)
    else:
        entries = [(name, None) for name in sorted(os.listdir(root))
                   if os.path.isdir(os.path.join(root, name))]
    if not entries:
        errmsg = "dataset {0!r} contains no videos".format(root)
        logger.error(errmsg)
        raise MissingDataError(errmsg)
    videos = odict()
    for name, count in entries:
        frames = load_video(os.path.join(root, name), height=height, width=width)
        if count is not None and len(frames) != count:
            errmsg = "{0!r}: manifest announces {1} frames, found {2}".format(
                os.path.join(root, name), count, len(frames))
            logger.error(errmsg)
            raise ParseError(errmsg)
        videos[name] = frames
    logger.info("loaded %d videos (%d frames) from %r", len(videos),
                sum(len(v) for v in videos.values()), root)
    return videos

def load_curves(dirname):
    """Ground truth surface heights ``[frames, W]`` of a synthetic video (or ``None``)."""
    filename = os.path.join(dirname, CURVES)
    if not os.path.exists(filename):
        return None
    return numpy.loadtxt(filename, ndmin=2)

def split_videos(names, test_fraction=0.25, seed=0):
    """Split video *names* into training and test videos.

    Whole videos are assigned, so no window of a test video is ever seen
    in training. At least one video ends up on each side.

    :Returns: ``(train, test)`` lists, each in the original order
    """
    names = list(names)
    if len(names) < 2:
        raise MissingDataError("need at least 2 videos to split into training and test sets, got {0}".format(len(names)))
    if not 0 < test_fraction < 1:
        raise ValueError("test_fraction must be in (0, 1), got {0!r}".format(test_fraction))
    n_test = min(len(names) - 1, max(1, int(round(test_fraction * len(names)))))
    order = numpy.random.RandomState(seed).permutation(len(names))
    test = set(order[:n_test])
    return ([n for i, n in enumerate(names) if i not in test],
            [n for i, n in enumerate(names) if i in test])

def make_windows(frames, offset, window=8, targets=None, video=None):
    """Build all sample windows of one video (stride 1).

    :Arguments:
       *frames*
           list of frames (or an array ``[N, 1, H, W]``)
       *offset*
           predict the frame *offset* steps after the last input, 1..3
       *window*
           number of input frames *T* [8]
       *targets*
           alternative target frames, one per input frame (rasterized
           contours); the frames themselves if ``None``
       *video*
           name recorded in the windows

    :Returns: list of ``len(frames) - window - offset + 1`` windows
              (empty if the video is too short)
    """
    offset, window = int(offset), int(window)
    if offset not in (1, 2, 3):
        raise ValueError("offset must be 1, 2 or 3, got {0}".format(offset))
    if len(frames) == 0:
        return []
    stack = numpy.asarray(frames)
    if targets is None:
        tstack = stack
    else:
        tstack = numpy.asarray(targets)
        if len(tstack) != len(stack):
            raise ValueError("{0} targets for {1} frames".format(len(tstack), len(stack)))
    count = len(stack) - window - offset + 1
    return [SampleWindow(stack[i:i + window], tstack[i + window - 1 + offset], offset,
                         video=video, start=i, reference=tstack[i + window - 1])
            for i in range(max(0, count))]

def dataset_windows(videos, offset, window=8, targets=None):
    """Windows of all *videos* (dict name -> frames) in video order.

    *targets* is an optional dict name -> target frames.
    """
    windows = []
    for name, frames in videos.items():
        windows.extend(make_windows(frames, offset, window=window, video=name,
                                    targets=None if targets is None else targets[name]))
    return windows


class SynthParams(utilities.Parameters):
    """Settings of the synthetic video generator.

    Lengths ``baseline`` and ``amplitude`` are fractions of the frame
    height; ``cycles`` is the number of sine periods across the width;
    ``phase_speed`` (radians per frame) and ``phase_memory`` set the
    standard deviation and autocorrelation of the phase velocity;
    ``thickness`` is the standard deviation of the Gaussian cross-section
    of the arc in pixels; ``looks`` is the shape parameter of the gamma
    distributed speckle (larger is less noisy).
    """
    section = 'Synth'
    schema = (
        ('videos', int, 8),
        ('frames', int, 120),
        ('height', int, 96),
        ('width', int, 96),
        ('seed', int, 0),
        ('baseline', float, 0.45),
        ('amplitude', float, 0.12),
        ('cycles', float, 0.75),
        ('phase_speed', float, 0.12),
        ('phase_memory', float, 0.95),
        ('thickness', float, 1.5),
        ('intensity', float, 0.9),
        ('background', float, 0.08),
        ('looks', float, 16.0),
    )

    def validate(self):
        for name in ('videos', 'frames', 'height', 'width'):
            if self[name] < 1:
                raise ValueError("{0}: must be positive, got {1}".format(name, self[name]))
        if not 0 <= self.phase_memory < 1:
            raise ValueError("phase_memory: must be in [0, 1), got {0}".format(self.phase_memory))
        if self.looks <= 0 or self.thickness <= 0:
            raise ValueError("looks and thickness must be positive")
        return self

def _envelope(width):
    """Smooth 0..1 taper that makes the arc an open curve."""
    x = numpy.arange(width) / max(width - 1.0, 1.0)
    ramp = numpy.clip(numpy.minimum(x - 0.06, 0.94 - x) / 0.12, 0.0, 1.0)
    return ramp * ramp * (3 - 2 * ramp)

def render_video(rng, params):
    """Render one synthetic video.

    :Returns: ``(frames, curves)``; *frames* ``[N, 1, H, W]`` in [0, 1]
              before quantization, *curves* ``[N, W]`` surface rows
    """
    N, H, W = params.frames, params.height, params.width
    xs = numpy.arange(W, dtype=numpy.float64)
    ys = numpy.arange(H, dtype=numpy.float64)[:, numpy.newaxis]
    envelope = params.intensity * _envelope(W)
    background = params.background * (1.0 + 0.5 * ys / H) * numpy.ones((1, W))
    memory = params.phase_memory
    phi = rng.uniform(0, 2 * numpy.pi)
    velocity = rng.normal(0.0, params.phase_speed)
    frames = numpy.empty((N, 1, H, W))
    curves = numpy.empty((N, W))
    for t in range(N):
        curve = H * (params.baseline + params.amplitude *
                     numpy.sin(2 * numpy.pi * (xs / W) * params.cycles + phi))
        ridge = envelope * numpy.exp(-(ys - curve) ** 2 / (2 * params.thickness ** 2))
        clean = numpy.minimum(background + ridge, 1.0)
        speckle = rng.gamma(params.looks, 1.0 / params.looks, size=(H, W))
        frames[t, 0] = numpy.clip(clean * speckle, 0.0, 1.0)
        curves[t] = curve
        velocity = memory * velocity + numpy.sqrt(1 - memory ** 2) * rng.normal(0.0, params.phase_speed)
        phi += velocity
    return frames, curves

def synth_generate(root, params=None, keep_frames=False, **kwargs):
    """Write a synthetic dataset to directory *root*.

    :Arguments:
       *root*
           output directory (created if necessary)
       *params*
           :class:`SynthParams`; *kwargs* override individual values
       *keep_frames*
           also return the frames before 8-bit quantization

    :Returns: :class:`~tonguemotion.utilities.AttributeDict` with ``root``,
              ``videos`` (names), ``curves`` (dict) and, if *keep_frames*,
              ``frames`` (dict)
    """
    params = SynthParams(params or {}, **kwargs).validate()
    utilities.mkdir_p(root)
    master = numpy.random.RandomState(params.seed)
    seeds = master.randint(0, 2**31 - 1, size=params.videos)
    result = utilities.AttributeDict(root=root, videos=[], curves=odict(), frames=odict())
    for v, seed in enumerate(seeds):
        name = "utt_{0:04d}".format(v)
        dirname = os.path.join(root, name)
        utilities.mkdir_p(dirname)
        frames, curves = render_video(numpy.random.RandomState(seed), params)
        for t, frame in enumerate(frames):
            PGM.from_frame(frame).write(os.path.join(dirname, "frame_{0:06d}.pgm".format(t)))
        numpy.savetxt(os.path.join(dirname, CURVES), curves, fmt="%.6f")
        result.videos.append(name)
        result.curves[name] = curves
        if keep_frames:
            result.frames[name] = frames
        logger.debug("rendered %s (%d frames)", dirname, len(frames))
    with utilities.atomic_write(os.path.join(root, MANIFEST)) as manifest:
        for name in result.videos:
            manifest.write("{0} {1:d}\n".format(name, params.frames))
    logger.info("wrote %d synthetic videos of %d frames (%dx%d) to %r",
                params.videos, params.frames, params.width, params.height, root)
    return result
