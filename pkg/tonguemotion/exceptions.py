# TongueMotion
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.

# exceptions and warnings

from numkit import ShapeError, LowAccuracyWarning

class TongueMotionError(Exception):
    """Base class for errors raised by the :mod:`tonguemotion` package."""

class MissingDataError(TongueMotionError):
    """Error raised when prerequisite data are not available.

    Typically an empty training or test set, or a video that is too short
    to yield a single sample window.
    """

class ParseError(TongueMotionError):
    """Error raised when parsing of a file failed."""

class PGMFormatError(ParseError):
    """A frame file is not a binary (P5) portable graymap."""

class FrameSizeError(ParseError):
    """Frames within one video do not share the same dimensions."""

class CheckpointError(ParseError):
    """Base class for unreadable model checkpoints."""

class BadMagicError(CheckpointError):
    """The file does not start with the checkpoint magic bytes."""

class VersionMismatchError(CheckpointError):
    """The checkpoint was written with an unsupported format version."""

class CorruptCheckpointError(CheckpointError):
    """The checkpoint is truncated or its tensor table is inconsistent."""

class OffsetMismatchError(TongueMotionError, ValueError):
    """Predictor and sample windows were built for different target offsets."""

class TrainingDivergedError(TongueMotionError, ArithmeticError):
    """Training produced a non-finite loss.

    The attributes :attr:`epoch` and :attr:`batch` locate the failure.
    """
    def __init__(self, msg, epoch=None, batch=None):
        super(TrainingDivergedError, self).__init__(msg)
        self.epoch = epoch
        self.batch = batch

class AutoCorrectionWarning(Warning):
    """Warns about cases when the code is choosing new values automatically."""

class BadParameterWarning(Warning):
    """Warns if some parameters or variables are unlikely to be appropriate or correct."""

import warnings
# These warnings should always be displayed because other parameters
# can have changed, eg during interactive use.
for w in (AutoCorrectionWarning, BadParameterWarning, LowAccuracyWarning):
    warnings.simplefilter('always', category=w)
del w
