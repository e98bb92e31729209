# TongueMotion
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.

""":mod:`tonguemotion` -- TongueMotion Package Overview
=====================================================

**TongueMotion** (package :mod:`tonguemotion`) predicts a future frame of
an ultrasound tongue video from the 8 frames before it with a stack of
convolutional LSTM layers that is written directly on top of
:mod:`numpy` (no deep learning framework). Gradients are derived by hand
and verified against finite differences.

The package also contains the non-learned baselines the network is
measured against, an open active contour ("snake") extractor for the
tongue surface, two image similarity metrics and a generator for
synthetic tongue videos.


Modules
-------

:mod:`tonguemotion.convlstm`
     A single ConvLSTM cell: forward step, backward step and
     initialization.

:mod:`tonguemotion.network`
     Layer stack unrolled over the input window plus the linear
     convolutional output head; full backpropagation through time.

:mod:`tonguemotion.training`
     Mean squared error, Adam, the mini-batch loop and binary
     checkpoints.

:mod:`tonguemotion.evaluation`
     8-bit MSE, CW-SSIM, baselines and evaluation reports.

:mod:`tonguemotion.contours`
     Open snake extraction, contour propagation through a video and
     rasterization of contours to target images.

:mod:`tonguemotion.data`
     Reading frame directories, resizing, sample windows and the
     synthetic video generator.

:mod:`tonguemotion.cli`
     The ``tonguemotion`` command with the subcommands ``synth``,
     ``train``, ``predict``, ``evaluate`` and ``contour``.

:mod:`tonguemotion.fileformats`
     Classes for the on-disk formats (PGM frames, checkpoints, key=value
     run files, contour files, CSV tables).

:mod:`tonguemotion.config`
     Global configuration and default values.

:mod:`tonguemotion.utilities`
     Convenience functions and parameter containers.

The numerical kernels (convolution, activations, gradient checking)
live in the separate :mod:`numkit` package.


Logging
-------

The library uses python's logging_ module. Start logging with
:func:`start_logging`; in order to obtain logging messages right from
the start set the environment variable :envvar:`TONGUEMOTION_START_LOGGING`
to any value before importing the package.

.. _logging: http://docs.python.org/library/logging.html

.. autofunction:: start_logging
.. autofunction:: stop_logging
"""
from __future__ import absolute_import

__docformat__ = "restructuredtext en"

import os
import warnings
import logging

from .version import VERSION, RELEASE, get_version, get_version_tuple

__version__ = get_version()

from .exceptions import (TongueMotionError, MissingDataError, ParseError, ShapeError,
                         PGMFormatError, FrameSizeError, CheckpointError,
                         BadMagicError, VersionMismatchError, CorruptCheckpointError,
                         OffsetMismatchError, TrainingDivergedError,
                         AutoCorrectionWarning, BadParameterWarning, LowAccuracyWarning)

from . import config
from . import fileformats

logging.getLogger("tonguemotion").addHandler(logging.NullHandler())

# Add the following to modules that want to log:
#     import logging
#     logger = logging.getLogger('tonguemotion.MODULENAME')

def start_logging(logfile=None):
    """Start logging of messages to file and console.

    The default logfile and the levels are taken from the ``[Logging]``
    section of the configuration file.
    """
    from . import log
    if logfile is None:
        logfile = config.logfilename
    log.create("tonguemotion", logfile=logfile,
               loglevel_console=config.loglevel_console,
               loglevel_file=config.loglevel_file)
    logging.getLogger("tonguemotion").info("TongueMotion %s STARTED logging to %r", get_version(), logfile)

def stop_logging():
    """Stop logging to logfile and console."""
    from . import log
    logger = logging.getLogger("tonguemotion")
    logger.info("TongueMotion %s STOPPED logging", get_version())
    log.clear_handlers(logger)  # this _should_ do the job...

if os.environ.get('TONGUEMOTION_START_LOGGING', False):
    start_logging()


# convenience functions for warnings

less_important_warnings = ['AutoCorrectionWarning', 'BadParameterWarning']

def filter_tonguemotion_warnings(action, categories=None):
    """Set the :meth:`warnings.simplefilter` to *action*.

    *categories* must be a list of warning classes or strings.
    ``None`` selects the defaults,  :data:`tonguemotion.less_important_warnings`.
    """
    if categories is None:
        categories = less_important_warnings
    for c in categories:
        try:
            w = globals()[c]
        except (KeyError, TypeError):
            w = c
        if not (isinstance(w, type) and issubclass(w, Warning)):
            raise TypeError("{0!r} is neither a Warning nor the name of a TongueMotion warning.".format(c))
        warnings.simplefilter(action, category=w)
