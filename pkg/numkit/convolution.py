# numkit --- same-padded 2D convolution
# Released under the "Modified BSD Licence" (see COPYING).
"""
:mod:`numkit.convolution` --- 2D convolution with same padding
==============================================================

"Convolution" here is cross-correlation (no kernel flip), the usual
convention for learned filters. Zero padding of width (k-1)/2 keeps the
spatial size, so the kernel size *k* must be odd.

Inputs are either a single sample ``[C, H, W]`` or a batch
``[B, C, H, W]``; outputs have the same leading layout. The batch
dimension is what lets a whole mini-batch go through one
:func:`numpy.tensordot` call.

.. autoclass:: ConvKernel
   :members:
.. autofunction:: conv2d_same
.. autofunction:: conv2d_backward

"""
from __future__ import absolute_import, division

import numpy
from numpy.lib.stride_tricks import sliding_window_view

from . import ShapeError

import logging
logger = logging.getLogger("numkit.convolution")


class ConvKernel(object):
    """Weights ``[C_out, C_in, k, k]`` and bias ``[C_out]`` of a convolution.

    :Arguments:
       *weights*
           4D array; the last two dimensions must be equal and odd
       *bias*
           1D array of length C_out; zeros if ``None``
    """
    def __init__(self, weights, bias=None):
        weights = numpy.asarray(weights)
        if weights.ndim != 4:
            raise ShapeError("kernel weights must be 4D [C_out, C_in, k, k], got shape {0!r}".format(weights.shape))
        c_out, c_in, k, k2 = weights.shape
        if k != k2 or k % 2 == 0:
            raise ShapeError("kernel must be square with odd size, got {0}x{1}".format(k, k2))
        if bias is None:
            bias = numpy.zeros(c_out, dtype=weights.dtype)
        bias = numpy.asarray(bias)
        if bias.shape != (c_out,):
            raise ShapeError("bias shape {0!r} does not match C_out={1}".format(bias.shape, c_out))
        self.weights = weights
        self.bias = bias

    @property
    def c_out(self):
        return self.weights.shape[0]

    @property
    def c_in(self):
        return self.weights.shape[1]

    @property
    def k(self):
        return self.weights.shape[2]

    def __repr__(self):
        return "ConvKernel(C_out={0.c_out}, C_in={0.c_in}, k={0.k})".format(self)


def _batched(x, name="input"):
    """Return *x* as ``[B, C, H, W]`` and whether a batch axis was added."""
    x = numpy.asarray(x)
    if x.ndim == 3:
        return x[numpy.newaxis], True
    elif x.ndim == 4:
        return x, False
    raise ShapeError("{0} must be [C,H,W] or [B,C,H,W], got shape {1!r}".format(name, x.shape))

def _pad(x, p):
    return numpy.pad(x, ((0, 0), (0, 0), (p, p), (p, p)), mode='constant')

def _windows(x, k):
    """View of all k x k patches of padded *x*, shape ``[B, C, H, W, k, k]``."""
    return sliding_window_view(_pad(x, (k - 1) // 2), (k, k), axis=(2, 3))

def conv2d_same(x, kernel):
    """Cross-correlate *x* with *kernel* using zero "same" padding.

    :Arguments:
       *x*
           input ``[C_in, H, W]`` or ``[B, C_in, H, W]``
       *kernel*
           :class:`ConvKernel`

    :Returns: ``[C_out, H, W]`` (or ``[B, C_out, H, W]``), bias added per
              output channel
    :Raises: :exc:`~numkit.ShapeError` if the channel counts disagree
    """
    xb, squeeze = _batched(x)
    if xb.shape[1] != kernel.c_in:
        raise ShapeError("input has {0} channels but kernel expects C_in={1}".format(
            xb.shape[1], kernel.c_in))
    # [B,C,H,W,k,k] . [O,C,k,k] -> [B,H,W,O]
    out = numpy.tensordot(_windows(xb, kernel.k), kernel.weights, axes=([1, 4, 5], [1, 2, 3]))
    out = numpy.ascontiguousarray(out.transpose(0, 3, 1, 2))
    out += kernel.bias[numpy.newaxis, :, numpy.newaxis, numpy.newaxis]
    return out[0] if squeeze else out

def conv2d_backward(x, kernel, grad_out):
    """Gradients of ``sum(grad_out * conv2d_same(x, kernel))``.

    The input gradient is the full correlation of the padded *grad_out*
    with the spatially flipped kernel, input and output channels swapped.

    :Returns: tuple ``(grad_input, grad_weights, grad_bias)`` shaped like
              *x*, ``kernel.weights`` and ``kernel.bias``
    :Raises: :exc:`~numkit.ShapeError` if *grad_out* does not have the
             shape of the forward output
    """
    xb, squeeze = _batched(x)
    gb, _ = _batched(grad_out, name="grad_out")
    B, C, H, W = xb.shape
    if xb.shape[1] != kernel.c_in:
        raise ShapeError("input has {0} channels but kernel expects C_in={1}".format(C, kernel.c_in))
    if gb.shape != (B, kernel.c_out, H, W):
        raise ShapeError("grad_out shape {0!r} does not match forward output {1!r}".format(
            gb.shape, (B, kernel.c_out, H, W)))
    k = kernel.k

    grad_weights = numpy.tensordot(gb, _windows(xb, k), axes=([0, 2, 3], [0, 2, 3]))
    grad_bias = gb.sum(axis=(0, 2, 3))

    flipped = kernel.weights[:, :, ::-1, ::-1]
    # [B,O,H,W,k,k] . [O,C,k,k] -> [B,H,W,C]
    grad_input = numpy.tensordot(_windows(gb, k), flipped, axes=([1, 4, 5], [0, 2, 3]))
    grad_input = numpy.ascontiguousarray(grad_input.transpose(0, 3, 1, 2))
    if squeeze:
        grad_input = grad_input[0]
    return grad_input, grad_weights, grad_bias
