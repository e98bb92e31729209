# numkit --- numerical kernels for small from-scratch neural networks
# Copyright (c) 2010 Oliver Beckstein <orbeckst@gmail.com>
# Released under the "Modified BSD Licence" (see COPYING).
"""
:mod:`numkit` --- Helper functions for numpy, scipy and friends
===============================================================

:Licence: Modified BSD

A collection of dense array kernels that the :mod:`tonguemotion` package
builds its recurrent networks from. Because these functions could
conceivably be useful in other contexts as well they live in a separate
package with a very permissive licence.

Tensors are plain :class:`numpy.ndarray` instances in row-major order;
there is no separate container class. The working precision is whatever
dtype the caller hands in (``float32`` for training, ``float64`` for
gradient checks).

Please note that these functions are provided "as is" and no guarantee is given
that they are accurate or free from error.

The following modules are available and can be imported when needed:

:mod:`numkit.convolution`
   Same-padded 2D cross-correlation with its exact adjoint.

:mod:`numkit.activation`
   Elementwise sigmoid and tanh with gradients from stored outputs.

:mod:`numkit.gradcheck`
   Central finite differences for verifying hand-derived gradients.

:mod:`numkit.timeseries`
   Smoothing of short series such as per-epoch loss curves.

"""

__all__ = ['convolution', 'activation', 'gradcheck', 'timeseries']

class ShapeError(ValueError):
    """Array shapes or channel counts do not agree."""

class LowAccuracyWarning(Warning):
    """Warns that results may possibly have low accuracy."""

#: Dtypes selected by the numeric precision switch (bits -> dtype).
PRECISION = {32: 'float32', 64: 'float64'}

def dtype_for(precision):
    """Return the :class:`numpy.dtype` for *precision* (32 or 64 bits).

    :Raises: :exc:`ValueError` for any other value.
    """
    import numpy
    try:
        return numpy.dtype(PRECISION[int(precision)])
    except (KeyError, ValueError, TypeError):
        raise ValueError("precision must be 32 or 64, not {0!r}".format(precision))
