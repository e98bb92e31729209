# TongueMotion: training.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
:mod:`tonguemotion.training` -- Loss, optimizer, training loop, checkpoints
===========================================================================

Models are trained on sample windows (:class:`tonguemotion.data.SampleWindow`)
by minimizing the pixelwise mean squared error on the normalized [0, 1]
scale with Adam. Every epoch visits the training windows in a freshly
shuffled order (seeded), in mini-batches of :attr:`TrainConfig.batch`;
the last, possibly smaller batch is kept.

With ``jobs > 1`` a batch is split into *jobs* contiguous chunks whose
forward and backward passes run in threads; chunk gradients are always
summed in chunk order, so results do not depend on thread timing. Runs
with ``jobs = 1`` are bit-reproducible for a fixed seed and dataset.

Example::

   from tonguemotion import data, training
   videos = data.load_dataset("synth", height=32, width=32)
   train_names, test_names = data.split_videos(list(videos), 0.25, seed=0)
   cfg = training.TrainConfig.from_config(height=32, width=32, epochs=30)
   train_set = data.dataset_windows(dict((n, videos[n]) for n in train_names), cfg.offset)
   test_set = data.dataset_windows(dict((n, videos[n]) for n in test_names), cfg.offset)
   model, curves = training.train(cfg, train_set, test_set, losses="losses.csv")
   training.checkpoint_save(model, "model.ckpt")

.. autoclass:: TrainConfig
   :members:
.. autoclass:: AdamState
   :members:
.. autofunction:: mse_loss
.. autofunction:: adam_step
.. autofunction:: batch_gradient
.. autofunction:: evaluate_loss
.. autofunction:: train
.. autofunction:: checkpoint_save
.. autofunction:: checkpoint_load
"""
from __future__ import absolute_import, division

import math
import warnings
from collections import OrderedDict as odict
from concurrent.futures import ThreadPoolExecutor

import numpy

from numkit.timeseries import moving_average

from .exceptions import (ShapeError, MissingDataError, OffsetMismatchError,
                         TrainingDivergedError, BadParameterWarning)
from .fileformats import Checkpoint, LossCurves
from .network import Architecture, Model, forward_sequence, backward_sequence
from . import utilities

import logging
logger = logging.getLogger('tonguemotion.training')


class TrainConfig(utilities.Parameters):
    """Settings of a training run.

    Contains all :class:`~tonguemotion.network.Architecture` keys plus

    ``lr``, ``batch``, ``epochs``, ``seed``
        Adam learning rate [0.001], mini-batch size [16], number of
        epochs [20] and the seed for initialization and shuffling [0]
    ``jobs``
        threads per batch [1]
    ``test_fraction``
        fraction of videos held out by :func:`tonguemotion.data.split_videos` [0.25]
    ``target``
        ``frames`` (predict the raw frame) or ``contours`` (predict the
        rasterized snake contour of the frame)
    """
    section = 'Training'
    schema = Architecture.schema + (
        ('lr', float, 0.001),
        ('batch', int, 16),
        ('epochs', int, 20),
        ('seed', int, 0),
        ('jobs', int, 1),
        ('test_fraction', float, 0.25),
        ('target', str, 'frames'),
    )

    def validate(self):
        self.architecture()
        if self.lr <= 0:
            raise ValueError("lr: must be positive, got {0}".format(self.lr))
        if self.batch < 1:
            raise ValueError("batch: must be at least 1, got {0}".format(self.batch))
        if self.epochs < 0:
            raise ValueError("epochs: must not be negative, got {0}".format(self.epochs))
        if self.jobs < 1:
            raise ValueError("jobs: must be at least 1, got {0}".format(self.jobs))
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction: must be in (0, 1), got {0}".format(self.test_fraction))
        if self.target not in ('frames', 'contours'):
            raise ValueError("target: must be 'frames' or 'contours', got {0!r}".format(self.target))
        return self

    def architecture(self):
        """The validated :class:`~tonguemotion.network.Architecture` part."""
        return Architecture((name, self[name]) for name, c, d in Architecture.schema).validate()


class AdamState(object):
    """Moment estimates and step counter of the Adam optimizer.

    :attr:`m` and :attr:`v` are ordered dicts of zero-initialized arrays
    shaped like the parameters they belong to; :attr:`t` counts steps.
    """
    def __init__(self, params, lr=0.001, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = odict((name, numpy.zeros_like(p)) for name, p in params.items())
        self.v = odict((name, numpy.zeros_like(p)) for name, p in params.items())

    def __repr__(self):
        return "AdamState(lr={0}, t={1}, {2} tensors)".format(self.lr, self.t, len(self.m))


def mse_loss(prediction, target):
    """Mean squared error and its gradient with respect to *prediction*.

    :Returns: ``(loss, grad)`` with ``grad = 2 (prediction - target) / N``
    :Raises: :exc:`~tonguemotion.ShapeError` if the shapes differ
    """
    prediction = numpy.asarray(prediction)
    target = numpy.asarray(target)
    if prediction.shape != target.shape:
        raise ShapeError("prediction {0!r} and target {1!r} differ in shape".format(
            prediction.shape, target.shape))
    diff = prediction - target.astype(prediction.dtype, copy=False)
    loss = float(numpy.mean(diff.astype(numpy.float64) ** 2))
    return loss, (2.0 / diff.size) * diff

def adam_step(params, grads, state):
    """Apply one bias-corrected Adam update to *params* in place.

    :Arguments:
       *params*, *grads*
           ordered dicts name -> array with identical keys and shapes
       *state*
           :class:`AdamState` created for *params*

    :Returns: ``(params, state)``
    :Raises: :exc:`~tonguemotion.ShapeError` if keys or shapes disagree
    """
    if list(params) != list(grads) or list(params) != list(state.m):
        raise ShapeError("parameters, gradients and optimizer state name different tensors")
    for name, p in params.items():
        if grads[name].shape != p.shape or state.m[name].shape != p.shape:
            raise ShapeError("{0}: parameter {1!r}, gradient {2!r}, state {3!r}".format(
                name, p.shape, grads[name].shape, state.m[name].shape))
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1 ** state.t
    correction2 = 1.0 - b2 ** state.t
    for name, p in params.items():
        g = grads[name]
        m, v = state.m[name], state.v[name]
        m *= b1
        m += (1 - b1) * g
        v *= b2
        v += (1 - b2) * (g * g)
        p -= state.lr * (m / correction1) / (numpy.sqrt(v / correction2) + state.eps)
    return params, state

def _stack(windows, dtype):
    inputs = numpy.stack([w.inputs for w in windows]).astype(dtype, copy=False)
    targets = numpy.stack([w.target for w in windows]).astype(dtype, copy=False)
    return inputs, targets

def _chunk_gradient(model, inputs, targets):
    prediction, caches = forward_sequence(inputs, model)
    loss, grad = mse_loss(prediction, targets)
    return loss, backward_sequence(caches, grad, model)

def batch_gradient(model, windows, jobs=1, executor=None):
    """Mean MSE of *windows* and the gradient of that mean.

    The batch is split into ``min(jobs, len(windows))`` contiguous chunks;
    chunk results are weighted by chunk size and summed in chunk order.

    :Returns: ``(loss, grads)``
    """
    inputs, targets = _stack(windows, model.dtype)
    B = len(windows)
    bounds = numpy.linspace(0, B, min(jobs, B) + 1).astype(int)
    chunks = [(inputs[a:b], targets[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]
    if executor is None or len(chunks) == 1:
        results = [_chunk_gradient(model, x, y) for x, y in chunks]
    else:
        futures = [executor.submit(_chunk_gradient, model, x, y) for x, y in chunks]
        results = [f.result() for f in futures]
    if len(results) == 1:
        return results[0]
    loss = 0.0
    grads = model.zero_grads()
    for (x, y), (chunk_loss, chunk_grads) in zip(chunks, results):
        weight = len(x) / B
        loss += weight * chunk_loss
        for name in grads:
            grads[name] += weight * chunk_grads[name]
    return loss, grads

def evaluate_loss(model, windows, batch=16):
    """Mean per-window MSE (normalized scale) of *model* on *windows*."""
    if not windows:
        raise MissingDataError("evaluate_loss() needs at least one window")
    losses = []
    for start in range(0, len(windows), batch):
        inputs, targets = _stack(windows[start:start + batch], model.dtype)
        prediction, _ = forward_sequence(inputs, model, keep_caches=False)
        diff = (prediction - targets).astype(numpy.float64)
        losses.extend(numpy.mean(diff * diff, axis=(1, 2, 3)))
    return math.fsum(losses) / len(losses)

def _check_windows(windows, offset, name):
    if not windows:
        errmsg = "{0} set is empty".format(name)
        logger.error(errmsg)
        raise MissingDataError(errmsg)
    offsets = set(w.offset for w in windows)
    if offsets != set([offset]):
        errmsg = "{0} windows have offsets {1}, the model predicts offset {2}".format(
            name, sorted(offsets), offset)
        logger.error(errmsg)
        raise OffsetMismatchError(errmsg)

def train(config, train_set, test_set, model=None, losses=None):
    """Train a model on *train_set* and track its loss on *test_set*.

    :Arguments:
       *config*
           :class:`TrainConfig` (or a dict of its keys)
       *train_set*, *test_set*
           lists of :class:`~tonguemotion.data.SampleWindow` built for
           ``config.offset``
       *model*
           continue training this model instead of a fresh one created
           with ``config.seed``
       *losses*
           CSV file that is rewritten after every epoch with the rows
           ``epoch,train_mse,test_mse``

    :Returns: ``(model, curves)``; *curves* is a
              :class:`~tonguemotion.fileformats.LossCurves` with one row per epoch
    :Raises: :exc:`~tonguemotion.MissingDataError` for an empty set,
             :exc:`~tonguemotion.OffsetMismatchError` for windows of another offset,
             :exc:`~tonguemotion.TrainingDivergedError` if the loss stops being finite
    """
    config = TrainConfig(config).validate()
    arch = config.architecture()
    _check_windows(train_set, arch.offset, "training")
    _check_windows(test_set, arch.offset, "test")
    if model is None:
        model = Model.create(arch, seed=config.seed)
    elif model.offset != arch.offset:
        raise OffsetMismatchError("model predicts offset {0}, configuration says {1}".format(
            model.offset, arch.offset))
    model.meta['target'] = config.target
    if config.jobs > 1:
        warnings.warn("jobs={0}: batches are split into chunks; results are reproducible "
                      "but differ in rounding from a jobs=1 run".format(config.jobs),
                      category=BadParameterWarning)

    params = model.parameters()
    state = AdamState(params, lr=config.lr)
    rng = numpy.random.RandomState(config.seed)
    curves = LossCurves()
    logger.info("training %r on %d windows (test %d), %d epochs, batch %d, lr %g",
                model, len(train_set), len(test_set), config.epochs, config.batch, config.lr)

    executor = ThreadPoolExecutor(max_workers=config.jobs) if config.jobs > 1 else None
    try:
        for epoch in range(1, config.epochs + 1):
            order = rng.permutation(len(train_set))
            weighted = []
            for b, start in enumerate(range(0, len(order), config.batch)):
                batch = [train_set[i] for i in order[start:start + config.batch]]
                loss, grads = batch_gradient(model, batch, jobs=config.jobs, executor=executor)
                if not numpy.isfinite(loss):
                    errmsg = "training diverged: loss {0} in epoch {1}, batch {2}".format(loss, epoch, b)
                    logger.error(errmsg)
                    raise TrainingDivergedError(errmsg, epoch=epoch, batch=b)
                adam_step(params, grads, state)
                weighted.append(loss * len(batch))
            train_mse = math.fsum(weighted) / len(train_set)
            test_mse = evaluate_loss(model, test_set, batch=config.batch)
            curves.append((epoch, train_mse, test_mse))
            smoothed = moving_average(curves.df['train_mse'].values, window_len=min(3, epoch))[-1]
            logger.info("epoch %3d: train MSE %.6g (3-epoch mean %.6g), test MSE %.6g",
                        epoch, train_mse, smoothed, test_mse)
            if losses is not None:
                curves.write(losses)
    finally:
        if executor is not None:
            executor.shutdown()
    return model, curves

def checkpoint_save(model, path):
    """Write *model* (architecture, metadata, all parameters) to *path*.

    Parameters are stored as 32-bit floats, so the round trip is bit-exact
    for 32-bit models.
    """
    config = odict(model.arch.as_text())
    config.update(model.meta)
    ckpt = Checkpoint(config=config, tensors=model.parameters())
    ckpt.write(path)
    return ckpt

def checkpoint_load(path):
    """Rebuild the :class:`~tonguemotion.network.Model` saved in *path*.

    :Raises: :exc:`IOError` if the file cannot be read, the
             :exc:`~tonguemotion.CheckpointError` subclasses for bad magic,
             an unsupported version or corrupt contents (including a
             tensor table that does not fit the stored architecture)
    """
    ckpt = Checkpoint(path)
    known = Architecture.converters()
    try:
        arch = Architecture((k, v) for k, v in ckpt.config.items() if k in known).validate()
    except (KeyError, ValueError) as err:
        ckpt._corrupt("bad architecture ({0})".format(err))
    meta = odict((k, v) for k, v in ckpt.config.items() if k not in known)
    model = Model.zeros(arch)
    params = model.parameters()
    missing = [name for name in params if name not in ckpt.tensors]
    extra = [name for name in ckpt.tensors if name not in params]
    if missing or extra:
        ckpt._corrupt("tensor table does not fit the architecture (missing: {0}; unexpected: {1})".format(
            ", ".join(missing) or "none", ", ".join(extra) or "none"))
    for name, value in params.items():
        stored = ckpt.tensors[name]
        if stored.shape != value.shape:
            ckpt._corrupt("tensor {0!r} has shape {1!r}, architecture needs {2!r}".format(
                name, stored.shape, value.shape))
        value[...] = stored
    model.meta = meta
    logger.info("loaded %r from %r", model, path)
    return model
