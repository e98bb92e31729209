# TongueMotion: network.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
:mod:`tonguemotion.network` -- Stacked ConvLSTM frame predictor
===============================================================

The predictor unrolls a stack of ConvLSTM layers over the *T* input
frames. At every step layer 0 reads the frame and layer l reads the
hidden state of layer l-1 (cell states are not passed upward). All
states start at zero. After the last step a linear "same" convolution
(the head) maps the top hidden state to the predicted frame; there is
no output nonlinearity, predictions are only clamped to [0, 1] when
they are emitted as images (:func:`predict`).

One model predicts one target offset (the 9th, 10th or 11th frame).

Parameters are addressed by flat names, ``layer0.W_xi`` ...
``layer2.b_o``, ``head.weight`` and ``head.bias``; the same names key
gradients, optimizer state and checkpoint tensors.

.. autoclass:: Architecture
   :members:
.. autoclass:: Model
   :members:
.. autofunction:: forward_sequence
.. autofunction:: backward_sequence
.. autofunction:: predict
"""
from __future__ import absolute_import, division

from collections import OrderedDict as odict

import numpy

import numkit
from numkit.convolution import ConvKernel, conv2d_same, conv2d_backward

from .convlstm import CellParams, PARAM_NAMES, cell_forward, cell_backward, init_params, zero_state
from .exceptions import ShapeError
from . import utilities

import logging
logger = logging.getLogger('tonguemotion.network')


class Architecture(utilities.Parameters):
    """Shape of a model.

    ``hidden``
        hidden channels per ConvLSTM layer [8 8 8]
    ``kernel``
        odd kernel size of all convolutions [3]
    ``height``, ``width``
        frame size [96 x 96]
    ``window``
        number of input frames *T* [8]
    ``offset``
        which frame after the window is predicted, 1..3 [1]
    ``precision``
        32 or 64 bit floats [32]
    """
    section = 'Training'
    schema = (
        ('hidden', utilities.intlist, [8, 8, 8]),
        ('kernel', int, 3),
        ('height', int, 96),
        ('width', int, 96),
        ('window', int, 8),
        ('offset', int, 1),
        ('precision', int, 32),
    )

    def validate(self):
        if not self.hidden or any(c < 1 for c in self.hidden):
            raise ValueError("hidden: need at least one layer with positive channel counts, got {0!r}".format(self.hidden))
        if self.kernel < 1 or self.kernel % 2 == 0:
            raise ValueError("kernel: must be odd and positive, got {0}".format(self.kernel))
        if self.height < 1 or self.width < 1:
            raise ValueError("height/width: must be positive, got {0}x{1}".format(self.height, self.width))
        if self.window < 1:
            raise ValueError("window: must be positive, got {0}".format(self.window))
        if self.offset not in (1, 2, 3):
            raise ValueError("offset: must be 1, 2 or 3, got {0}".format(self.offset))
        numkit.dtype_for(self.precision)
        return self

    @property
    def dtype(self):
        return numkit.dtype_for(self.precision)


class Model(object):
    """ConvLSTM layers plus the output head.

    :Arguments:
       *arch*
           :class:`Architecture`
       *layers*
           list of :class:`~tonguemotion.convlstm.CellParams`, one per layer
       *head*
           :class:`~numkit.convolution.ConvKernel` ``[1, C_top, k, k]``
       *meta*
           free-form string metadata stored with the model in checkpoints
           (for instance the training target, ``frames`` or ``contours``)
    """
    logger = logging.getLogger('tonguemotion.network.Model')

    def __init__(self, arch, layers, head, meta=None):
        self.arch = Architecture(arch).validate()
        self.layers = list(layers)
        self.head = head
        self.meta = odict(meta or {})
        self.check()

    @classmethod
    def create(cls, arch, seed=0):
        """Randomly initialized model; layer l uses seed+l, the head seed+L."""
        arch = Architecture(arch).validate()
        dtype = arch.dtype
        layers = []
        c_in = 1
        for l, c_hid in enumerate(arch.hidden):
            layers.append(init_params(c_in, c_hid, arch.kernel, seed + l, dtype=dtype))
            c_in = c_hid
        rng = numpy.random.RandomState(seed + len(arch.hidden))
        k = arch.kernel
        s = numpy.sqrt(6.0 / ((c_in + 1) * k * k))
        head = ConvKernel(rng.uniform(-s, s, size=(1, c_in, k, k)).astype(dtype),
                          numpy.zeros(1, dtype=dtype))
        return cls(arch, layers, head)

    @classmethod
    def zeros(cls, arch):
        """Model with every parameter zero."""
        model = cls.create(arch, seed=0)
        for value in model.parameters().values():
            value[...] = 0
        return model

    def check(self):
        """Raise :exc:`~tonguemotion.ShapeError` if layers and head do not fit :attr:`arch`."""
        if len(self.layers) != len(self.arch.hidden):
            raise ShapeError("architecture has {0} layers, model {1}".format(len(self.arch.hidden), len(self.layers)))
        c_in = 1
        for l, (p, c_hid) in enumerate(zip(self.layers, self.arch.hidden)):
            p.check()
            if (p.c_in, p.c_hid, p.k) != (c_in, c_hid, self.arch.kernel):
                raise ShapeError("layer{0}: C_in={1}, C_hid={2}, k={3}; expected {4}, {5}, {6}".format(
                    l, p.c_in, p.c_hid, p.k, c_in, c_hid, self.arch.kernel))
            c_in = c_hid
        if self.head.weights.shape != (1, c_in, self.arch.kernel, self.arch.kernel):
            raise ShapeError("head has shape {0!r}, expected {1!r}".format(
                self.head.weights.shape, (1, c_in, self.arch.kernel, self.arch.kernel)))

    @property
    def dtype(self):
        return self.head.weights.dtype

    @property
    def offset(self):
        return self.arch.offset

    def parameters(self):
        """Ordered dict of all parameter arrays (the arrays themselves, not copies)."""
        params = odict()
        for l, p in enumerate(self.layers):
            for name in PARAM_NAMES:
                params["layer{0}.{1}".format(l, name)] = p[name]
        params['head.weight'] = self.head.weights
        params['head.bias'] = self.head.bias
        return params

    def zero_grads(self):
        """Ordered dict of zero arrays keyed like :meth:`parameters`."""
        return odict((name, numpy.zeros_like(value)) for name, value in self.parameters().items())

    def astype(self, dtype):
        """Copy of the model at another precision."""
        dtype = numpy.dtype(dtype)
        arch = self.arch.copy()
        arch.precision = dtype.itemsize * 8
        return Model(arch, [p.astype(dtype) for p in self.layers],
                     ConvKernel(self.head.weights.astype(dtype), self.head.bias.astype(dtype)),
                     meta=self.meta)

    def copy(self):
        return self.astype(self.dtype)

    def __repr__(self):
        return "Model(hidden={0!r}, k={1}, {2}x{3}, T={4}, offset={5}, {6})".format(
            self.arch.hidden, self.arch.kernel, self.arch.height, self.arch.width,
            self.arch.window, self.arch.offset, self.dtype)


class SequenceCache(object):
    """Everything :func:`backward_sequence` needs from a forward pass."""
    __slots__ = ('cells', 'kernels', 'top_h', 'batched')

    def __init__(self, cells, kernels, top_h, batched):
        #: cells[l][t] is the CellCache of layer l at step t
        self.cells = cells
        self.kernels = kernels
        self.top_h = top_h
        self.batched = batched


def _check_frames(frames, model):
    frames = numpy.asarray(frames)
    if frames.ndim == 4:
        batched = False
    elif frames.ndim == 5:
        batched = True
    else:
        raise ShapeError("frames must be [T,1,H,W] or [B,T,1,H,W], got shape {0!r}".format(frames.shape))
    arch = model.arch
    T, C, H, W = frames.shape[-4:]
    if (T, C, H, W) != (arch.window, 1, arch.height, arch.width):
        raise ShapeError("frames {0!r} do not match the architecture T={1}, 1x{2}x{3}".format(
            frames.shape, arch.window, arch.height, arch.width))
    return frames.astype(model.dtype, copy=False), batched

def forward_sequence(frames, model, keep_caches=True):
    """Run the model over a window of frames.

    :Arguments:
       *frames*
           ``[T, 1, H, W]`` (or a batch ``[B, T, 1, H, W]``) with values in [0, 1]
       *model*
           :class:`Model`
       *keep_caches*
           ``False`` skips storing intermediates (inference only)

    :Returns: ``(prediction, caches)``; *prediction* is ``[1, H, W]`` (or
              ``[B, 1, H, W]``) and unclamped; *caches* is ``None`` unless
              *keep_caches*
    :Raises: :exc:`~tonguemotion.ShapeError` if the frames do not fit the architecture
    """
    frames, batched = _check_frames(frames, model)
    if not batched:
        frames = frames[numpy.newaxis]
    B, T = frames.shape[:2]
    H, W = frames.shape[-2:]

    kernels = [p.stacked() for p in model.layers]
    states = [zero_state(p.c_hid, H, W, batch=B, dtype=model.dtype) for p in model.layers]
    cells = [[None] * T for p in model.layers]
    for t in range(T):
        inp = frames[:, t]
        for l, p in enumerate(model.layers):
            states[l], cache = cell_forward(inp, states[l], p, kernel=kernels[l])
            if keep_caches:
                cells[l][t] = cache
            inp = states[l].h
    top_h = states[-1].h
    prediction = conv2d_same(top_h, model.head)
    if not batched:
        prediction = prediction[0]
    caches = SequenceCache(cells, kernels, top_h, batched) if keep_caches else None
    return prediction, caches

def backward_sequence(caches, grad_prediction, model):
    """Backpropagation through time for one :func:`forward_sequence` call.

    Gradients reach every time step through both the hidden and the cell
    state recurrences and every layer through the hidden states passed
    upward.

    :Returns: ordered dict of gradients keyed like :meth:`Model.parameters`
    :Raises: :exc:`~tonguemotion.ShapeError` if the caches do not belong to *model*
             or *grad_prediction* has the wrong shape
    """
    if caches is None:
        raise ValueError("backward_sequence() needs the caches of forward_sequence(keep_caches=True)")
    L = len(model.layers)
    if len(caches.cells) != L or len(caches.kernels) != L:
        raise ShapeError("caches are for {0} layers, model has {1}".format(len(caches.cells), L))
    grad_prediction = numpy.asarray(grad_prediction, dtype=model.dtype)
    if not caches.batched:
        grad_prediction = grad_prediction[numpy.newaxis]
    expected = caches.top_h.shape[:1] + (1,) + caches.top_h.shape[2:]
    if grad_prediction.shape != expected:
        raise ShapeError("grad_prediction {0!r} does not match prediction shape {1!r}".format(
            grad_prediction.shape, expected))
    T = len(caches.cells[0])

    grads = model.zero_grads()
    dh_top, dweights, dbias = conv2d_backward(caches.top_h, model.head, grad_prediction)
    grads['head.weight'] += dweights
    grads['head.bias'] += dbias

    shape = [caches.cells[l][T - 1].c.shape for l in range(L)]
    dh_next = [numpy.zeros(s, dtype=model.dtype) for s in shape]
    dc_next = [numpy.zeros(s, dtype=model.dtype) for s in shape]
    dh_next[-1] += dh_top
    for t in reversed(range(T)):
        from_above = None
        for l in reversed(range(L)):
            cache = caches.cells[l][t]
            if cache is None:
                raise ValueError("no cache for layer {0} step {1}".format(l, t))
            dh = dh_next[l] if from_above is None else dh_next[l] + from_above
            dx, (dh_next[l], dc_next[l]), dparams = cell_backward(
                (dh, dc_next[l]), cache, model.layers[l], kernel=caches.kernels[l])
            prefix = "layer{0}.".format(l)
            for name in PARAM_NAMES:
                grads[prefix + name] += dparams[name]
            from_above = dx
    return grads

def predict(window, model):
    """Predicted target frame of *window*, clamped to [0, 1].

    *window* is a :class:`~tonguemotion.data.SampleWindow` or an array of
    input frames ``[T, 1, H, W]``.
    """
    frames = getattr(window, 'inputs', window)
    prediction, _ = forward_sequence(frames, model, keep_caches=False)
    return numpy.clip(prediction, 0.0, 1.0)
