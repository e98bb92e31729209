# TongueMotion: convlstm.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
:mod:`tonguemotion.convlstm` -- A single ConvLSTM cell
======================================================

One time step of a convolutional LSTM without peephole connections::

   i_t  = sigmoid(W_xi * x_t + W_hi * h_{t-1} + b_i)
   f_t  = sigmoid(W_xf * x_t + W_hf * h_{t-1} + b_f)
   c~_t = tanh   (W_xc * x_t + W_hc * h_{t-1} + b_c)
   c_t  = f_t o c_{t-1} + i_t o c~_t
   o_t  = sigmoid(W_xo * x_t + W_ho * h_{t-1} + b_o)
   h_t  = o_t o tanh(c_t)

``*`` is :func:`numkit.convolution.conv2d_same` and ``o`` the elementwise
product. Each gate has a single bias; the hidden-to-gate kernels carry
none.

All eight kernels are applied in one convolution: input and previous
hidden state are concatenated along the channel axis and convolved with
the stacked kernel ``[4 C_hid, C_in + C_hid, k, k]`` in gate order
i, f, c~, o (see :meth:`CellParams.stacked`).

Every array may carry a leading batch axis; all samples share the
parameters and have independent states.

.. autoclass:: CellParams
   :members:
.. autoclass:: CellState
.. autoclass:: CellCache
.. autofunction:: cell_forward
.. autofunction:: cell_backward
.. autofunction:: init_params
.. autofunction:: zero_state
"""
from __future__ import absolute_import, division

from collections import namedtuple

import numpy

from numkit.convolution import ConvKernel, conv2d_same, conv2d_backward
from numkit.activation import activation, activation_grad

from .exceptions import ShapeError
from .utilities import AttributeDict

import logging
logger = logging.getLogger('tonguemotion.convlstm')

#: gate order inside the stacked kernel
GATES = ('i', 'f', 'c', 'o')

#: parameter names of a cell, in storage order
PARAM_NAMES = tuple(['W_x' + g for g in GATES] + ['W_h' + g for g in GATES] +
                    ['b_' + g for g in GATES])


class CellParams(AttributeDict):
    """Weights and biases of one ConvLSTM layer.

    Keys ``W_xi, W_xf, W_xc, W_xo`` (``[C_hid, C_in, k, k]``),
    ``W_hi, W_hf, W_hc, W_ho`` (``[C_hid, C_hid, k, k]``) and
    ``b_i, b_f, b_c, b_o`` (``[C_hid]``). The same container holds
    gradients.
    """

    @property
    def c_in(self):
        return self['W_xi'].shape[1]

    @property
    def c_hid(self):
        return self['W_xi'].shape[0]

    @property
    def k(self):
        return self['W_xi'].shape[2]

    def check(self):
        """Raise :exc:`~tonguemotion.ShapeError` unless all shapes agree."""
        missing = [name for name in PARAM_NAMES if name not in self]
        if missing:
            raise ShapeError("cell parameters lack {0}".format(", ".join(missing)))
        c_hid, c_in, k = self.c_hid, self.c_in, self.k
        if k % 2 == 0:
            raise ShapeError("kernel size must be odd, got {0}".format(k))
        expected = dict([('W_x' + g, (c_hid, c_in, k, k)) for g in GATES] +
                        [('W_h' + g, (c_hid, c_hid, k, k)) for g in GATES] +
                        [('b_' + g, (c_hid,)) for g in GATES])
        for name, shape in expected.items():
            if self[name].shape != shape:
                raise ShapeError("{0} has shape {1!r}, expected {2!r}".format(name, self[name].shape, shape))
        return self

    def stacked(self):
        """The combined gate kernel as a :class:`~numkit.convolution.ConvKernel`."""
        weights = numpy.concatenate(
            [numpy.concatenate([self['W_x' + g], self['W_h' + g]], axis=1) for g in GATES], axis=0)
        bias = numpy.concatenate([self['b_' + g] for g in GATES])
        return ConvKernel(weights, bias)

    @classmethod
    def from_stacked(cls, weights, bias, c_in):
        """Split stacked kernel *weights* and *bias* back into named parameters."""
        c_hid = weights.shape[0] // 4
        p = cls()
        for n, g in enumerate(GATES):
            rows = slice(n * c_hid, (n + 1) * c_hid)
            p['W_x' + g] = weights[rows, :c_in]
            p['W_h' + g] = weights[rows, c_in:]
            p['b_' + g] = bias[rows]
        return p

    def zeros_like(self):
        return CellParams((name, numpy.zeros_like(self[name])) for name in PARAM_NAMES)

    def astype(self, dtype):
        return CellParams((name, numpy.array(self[name], dtype=dtype)) for name in PARAM_NAMES)


#: Recurrent state of a layer: hidden state *h* and cell state *c*.
CellState = namedtuple('CellState', ['h', 'c'])


class CellCache(object):
    """Intermediates of :func:`cell_forward` needed by :func:`cell_backward`.

    The input and the previous hidden state are kept as the concatenated
    convolution input :attr:`z`; :attr:`x` and :attr:`h_prev` are views.
    """
    __slots__ = ('z', 'c_in', 'c_prev', 'i', 'f', 'g', 'o', 'c')

    def __init__(self, z, c_in, c_prev, i, f, g, o, c):
        self.z = z
        self.c_in = c_in
        self.c_prev = c_prev
        self.i = i
        self.f = f
        self.g = g
        self.o = o
        self.c = c

    @property
    def x(self):
        return self.z[..., :self.c_in, :, :]

    @property
    def h_prev(self):
        return self.z[..., self.c_in:, :, :]


def zero_state(c_hid, height, width, batch=None, dtype=numpy.float64):
    """All-zero :class:`CellState` (with a leading *batch* axis unless ``None``)."""
    shape = (c_hid, height, width) if batch is None else (batch, c_hid, height, width)
    return CellState(numpy.zeros(shape, dtype=dtype), numpy.zeros(shape, dtype=dtype))

def cell_forward(x, prev, params, kernel=None):
    """Advance one layer by one time step.

    :Arguments:
       *x*
           input ``[C_in, H, W]`` or ``[B, C_in, H, W]``
       *prev*
           :class:`CellState` with ``h`` and ``c`` of shape ``[(B,) C_hid, H, W]``
       *params*
           :class:`CellParams`
       *kernel*
           precomputed ``params.stacked()``; built on the fly if ``None``

    :Returns: ``(next_state, cache)``
    :Raises: :exc:`~tonguemotion.ShapeError` for inconsistent shapes
    """
    x = numpy.asarray(x)
    h_prev, c_prev = prev
    if x.shape[:-3] != h_prev.shape[:-3] or x.shape[-2:] != h_prev.shape[-2:]:
        raise ShapeError("input {0!r} and hidden state {1!r} disagree in batch or spatial size".format(
            x.shape, h_prev.shape))
    if h_prev.shape != c_prev.shape:
        raise ShapeError("hidden {0!r} and cell state {1!r} differ".format(h_prev.shape, c_prev.shape))
    if x.shape[-3] != params.c_in or h_prev.shape[-3] != params.c_hid:
        raise ShapeError("cell expects C_in={0}, C_hid={1}; got input {2!r}, state {3!r}".format(
            params.c_in, params.c_hid, x.shape, h_prev.shape))
    if kernel is None:
        kernel = params.stacked()

    z = numpy.concatenate([x, h_prev], axis=-3)
    a = conv2d_same(z, kernel)
    ai, af, ac, ao = numpy.split(a, 4, axis=-3)
    i = activation('sigmoid', ai)
    f = activation('sigmoid', af)
    g = activation('tanh', ac)
    o = activation('sigmoid', ao)
    c = f * c_prev + i * g
    h = o * numpy.tanh(c)
    return CellState(h, c), CellCache(z, params.c_in, c_prev, i, f, g, o, c)

def cell_backward(grads, cache, params, kernel=None):
    """Backpropagate through one :func:`cell_forward` step.

    :Arguments:
       *grads*
           ``(dh, dc)``, gradients of the loss w.r.t. ``h_t`` and ``c_t``
       *cache*
           :class:`CellCache` of the forward step
       *params*
           :class:`CellParams` used in the forward step
       *kernel*
           precomputed ``params.stacked()``

    :Returns: ``(dx, CellState(dh_prev, dc_prev), dparams)``; *dparams* is a
              fresh :class:`CellParams` which the caller accumulates over
              time steps
    """
    dh, dc = grads
    if dh.shape != cache.c.shape or dc.shape != cache.c.shape:
        raise ShapeError("gradients {0!r}, {1!r} do not match the state shape {2!r}".format(
            dh.shape, dc.shape, cache.c.shape))
    if kernel is None:
        kernel = params.stacked()

    tanh_c = numpy.tanh(cache.c)
    do = dh * tanh_c
    dc_total = dc + dh * cache.o * (1 - tanh_c * tanh_c)
    di = dc_total * cache.g
    df = dc_total * cache.c_prev
    dg = dc_total * cache.i
    dc_prev = dc_total * cache.f

    da = numpy.concatenate([activation_grad('sigmoid', cache.i, di),
                            activation_grad('sigmoid', cache.f, df),
                            activation_grad('tanh', cache.g, dg),
                            activation_grad('sigmoid', cache.o, do)], axis=-3)
    dz, dweights, dbias = conv2d_backward(cache.z, kernel, da)
    dx = dz[..., :cache.c_in, :, :]
    dh_prev = dz[..., cache.c_in:, :, :]
    return dx, CellState(dh_prev, dc_prev), CellParams.from_stacked(dweights, dbias, cache.c_in)

def init_params(c_in, c_hid, k, seed, dtype=numpy.float64):
    """Random initial parameters of a layer.

    Every kernel is drawn uniformly from [-s, s] with
    ``s = sqrt(6 / (fan_in + fan_out))``, ``fan_in = C_in k**2`` and
    ``fan_out = C_out k**2`` of that kernel. Biases are zero except the
    forget gate bias ``b_f = 1``.

    :Raises: :exc:`ValueError` for non-positive channel counts or an even *k*
    """
    c_in, c_hid, k = int(c_in), int(c_hid), int(k)
    if c_in < 1 or c_hid < 1:
        raise ValueError("channel counts must be positive, got C_in={0}, C_hid={1}".format(c_in, c_hid))
    if k < 1 or k % 2 == 0:
        raise ValueError("kernel size must be odd and positive, got {0}".format(k))
    rng = numpy.random.RandomState(seed)

    def uniform(fan_in_channels, fan_out_channels):
        s = numpy.sqrt(6.0 / ((fan_in_channels + fan_out_channels) * k * k))
        return rng.uniform(-s, s, size=(fan_out_channels, fan_in_channels, k, k)).astype(dtype)

    p = CellParams()
    for g in GATES:
        p['W_x' + g] = uniform(c_in, c_hid)
    for g in GATES:
        p['W_h' + g] = uniform(c_hid, c_hid)
    for g in GATES:
        p['b_' + g] = numpy.zeros(c_hid, dtype=dtype)
    p['b_f'][:] = 1.0
    return p
