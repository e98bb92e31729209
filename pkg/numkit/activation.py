# numkit --- elementwise activations
# Released under the "Modified BSD Licence" (see COPYING).
"""
:mod:`numkit.activation` --- Gate nonlinearities
================================================

Gradients are computed from the stored *output* y of the forward pass,
not from its input:

=========  ==================  ======================
kind       forward             derivative in terms of y
=========  ==================  ======================
sigmoid    1/(1 + exp(-x))     y (1 - y)
tanh       tanh(x)             1 - y**2
=========  ==================  ======================

:func:`scipy.special.expit` saturates to exactly 0 or 1 for large |x|
without overflow warnings.

.. autofunction:: activation
.. autofunction:: activation_grad

"""
from __future__ import absolute_import

import numpy
import scipy.special

def _sigmoid_grad(y, grad_out):
    return grad_out * y * (1 - y)

def _tanh_grad(y, grad_out):
    return grad_out * (1 - y * y)

_FORWARD = {
    'sigmoid': scipy.special.expit,
    'tanh': numpy.tanh,
}

_BACKWARD = {
    'sigmoid': _sigmoid_grad,
    'tanh': _tanh_grad,
}

def activation(kind, x):
    """Apply the elementwise nonlinearity *kind* ("sigmoid" or "tanh") to *x*."""
    try:
        return _FORWARD[kind](x)
    except KeyError:
        raise ValueError("activation {0!r} not supported; must be one of {1!r}".format(
            kind, sorted(_FORWARD)))

def activation_grad(kind, y, grad_out):
    """Backpropagate *grad_out* through activation *kind* with stored output *y*."""
    try:
        return _BACKWARD[kind](y, grad_out)
    except KeyError:
        raise ValueError("activation {0!r} not supported; must be one of {1!r}".format(
            kind, sorted(_BACKWARD)))
