# numkit --- finite-difference gradient checking
# Released under the "Modified BSD Licence" (see COPYING).
"""
:mod:`numkit.gradcheck` --- Verifying hand-derived gradients
============================================================

Analytic gradients are compared against central finite differences

  df/dx_i ~ (f(x + eps e_i) - f(x - eps e_i)) / (2 eps)

The perturbation is applied to the array *in place* and undone
afterwards, so *f* may close over the very array that is checked (for
instance one weight tensor of a model).

Checks only make sense in double precision; at single precision a
:exc:`~numkit.LowAccuracyWarning` is issued.

.. autofunction:: numerical_gradient
.. autofunction:: relative_error
.. autofunction:: check_gradient

"""
from __future__ import absolute_import, division

import warnings

import numpy

from . import LowAccuracyWarning

import logging
logger = logging.getLogger("numkit.gradcheck")

def numerical_gradient(f, x, eps=1e-5, indices=None):
    """Central-difference gradient of the scalar function *f* w.r.t. array *x*.

    :Arguments:
       *f*
           callable without arguments returning a scalar; it must read the
           current contents of *x*
       *x*
           float array that is perturbed in place (restored afterwards)
       *eps*
           step size [1e-5]
       *indices*
           iterable of flat indices to probe; all entries if ``None``.
           Entries not probed are zero in the result.

    :Returns: array shaped like *x*
    """
    if x.dtype != numpy.float64:
        warnings.warn("finite differences at {0} are unreliable; use float64".format(x.dtype),
                      category=LowAccuracyWarning)
    grad = numpy.zeros_like(x)
    flat = x.reshape(-1)          # view, x must be contiguous
    gflat = grad.reshape(-1)
    if indices is None:
        indices = range(flat.size)
    for i in indices:
        old = flat[i]
        flat[i] = old + eps
        fplus = f()
        flat[i] = old - eps
        fminus = f()
        flat[i] = old
        gflat[i] = (fplus - fminus) / (2 * eps)
    return grad

def relative_error(analytic, numeric, floor=1e-12):
    """Relative deviation ``||a - n|| / max(||a|| + ||n||, floor)`` in the 2-norm.

    Norms over the whole array keep entries whose true gradient is
    (nearly) zero from dominating through division by round-off.
    """
    analytic = numpy.asarray(analytic, dtype=numpy.float64)
    numeric = numpy.asarray(numeric, dtype=numpy.float64)
    if analytic.shape != numeric.shape:
        raise ValueError("shapes differ: {0!r} != {1!r}".format(analytic.shape, numeric.shape))
    if analytic.size == 0:
        return 0.0
    scale = max(numpy.linalg.norm(analytic) + numpy.linalg.norm(numeric), floor)
    return float(numpy.linalg.norm(analytic - numeric) / scale)

def check_gradient(f, x, analytic, eps=1e-5, indices=None, floor=1e-12):
    """Return the relative error between *analytic* and the numerical gradient.

    Only the probed *indices* enter the comparison.
    """
    if indices is not None:
        indices = numpy.asarray(list(indices), dtype=int)
    numeric = numerical_gradient(f, x, eps=eps, indices=indices)
    if indices is not None:
        err = relative_error(numpy.asarray(analytic).reshape(-1)[indices],
                             numeric.reshape(-1)[indices], floor=floor)
    else:
        err = relative_error(analytic, numeric, floor=floor)
    logger.debug("gradient check on %d entries: relative error %g", numeric.size if indices is None else len(indices), err)
    return err
