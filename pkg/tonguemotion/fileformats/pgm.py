# TongueMotion: pgm.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
Binary portable graymap (PGM, P5)
=================================

Frames are stored as binary PGM files: the magic ``P5``, width, height
and maxval as ASCII decimals separated by white space (``#`` comments
allowed in the header), a single white space character and then the
raster, row by row, one byte per pixel for maxval < 256 and two
big-endian bytes otherwise.

In memory a frame is a float array ``[1, H, W]`` with values in [0, 1]
(intensity divided by maxval); see :meth:`PGM.to_frame` and
:meth:`PGM.from_frame`.

.. autoclass:: PGM
   :members:
"""
from __future__ import absolute_import, with_statement

import numpy

from ..exceptions import PGMFormatError
from .. import utilities

import logging

_WHITESPACE = b" \t\r\n\v\f"

class PGM(utilities.FileUtils):
    """Class that represents a binary portable graymap.

    The raster is available as the integer array :attr:`PGM.array`
    (shape ``[H, W]``) together with :attr:`PGM.maxval`.
    """
    default_extension = "pgm"
    logger = logging.getLogger('tonguemotion.formats.PGM')

    def __init__(self, filename=None, array=None, maxval=255):
        """Initialize the graymap.

        :Arguments:
          *filename*
              read from a pgm file
          *array*
              integer raster ``[H, W]`` with values in ``0..maxval``
          *maxval*
              largest intensity [255]
        """
        self.array = None if array is None else numpy.asarray(array)
        self.maxval = int(maxval)
        if filename is not None:
            self._init_filename(filename)
            self.read(filename)

    @classmethod
    def from_frame(cls, frame, maxval=255):
        """Quantize a float frame (``[1, H, W]`` or ``[H, W]``, values in [0, 1]).

        Values are clamped to [0, 1] and rounded to the nearest level.
        """
        frame = numpy.asarray(frame, dtype=numpy.float64)
        if frame.ndim == 3:
            frame = frame[0]
        levels = numpy.rint(numpy.clip(frame, 0.0, 1.0) * maxval)
        return cls(array=levels.astype(numpy.uint8 if maxval < 256 else numpy.uint16), maxval=maxval)

    def to_frame(self, dtype=numpy.float64):
        """Return the raster as a frame ``[1, H, W]`` scaled to [0, 1]."""
        return (self.array.astype(dtype) / self.maxval)[numpy.newaxis]

    @property
    def shape(self):
        return self.array.shape

    def read(self, filename=None):
        """Read and parse the pgm file *filename*."""
        self._init_filename(filename)
        with open(self.real_filename, 'rb') as pgm:
            self.parse(pgm.read())

    def _error(self, msg):
        errmsg = "{0!r}: {1}".format(getattr(self, 'real_filename', '(stream)'), msg)
        self.logger.error(errmsg)
        raise PGMFormatError(errmsg)

    def parse(self, data):
        """Decode the bytes *data* of a P5 file."""
        if data[:2] != b"P5":
            self._error("not a binary PGM (P5) file, magic is {0!r}".format(data[:2]))
        pos = 2
        values = []
        while len(values) < 3:
            # skip white space and comments
            while pos < len(data) and (data[pos:pos+1] in _WHITESPACE or data[pos:pos+1] == b"#"):
                if data[pos:pos+1] == b"#":
                    end = data.find(b"\n", pos)
                    pos = len(data) if end < 0 else end + 1
                else:
                    pos += 1
            start = pos
            while pos < len(data) and data[pos:pos+1] not in _WHITESPACE and data[pos:pos+1] != b"#":
                pos += 1
            token = data[start:pos]
            if not token.isdigit():
                self._error("bad header field {0!r}".format(token))
            values.append(int(token))
        width, height, maxval = values
        if width < 1 or height < 1 or not 0 < maxval < 65536:
            self._error("invalid header width={0} height={1} maxval={2}".format(width, height, maxval))
        if data[pos:pos+1] not in _WHITESPACE or pos >= len(data):
            self._error("header not terminated by white space")
        pos += 1
        dtype = numpy.dtype('u1') if maxval < 256 else numpy.dtype('>u2')
        nbytes = width * height * dtype.itemsize
        raster = data[pos:pos+nbytes]
        if len(raster) < nbytes:
            self._error("truncated raster: {0} of {1} bytes".format(len(raster), nbytes))
        self.array = numpy.frombuffer(raster, dtype=dtype).reshape(height, width).copy()
        self.maxval = maxval
        if self.array.max() > maxval:
            self._error("pixel value {0} exceeds maxval {1}".format(self.array.max(), maxval))

    def tobytes(self):
        """Encoded file contents."""
        if self.array is None:
            raise ValueError("PGM has no raster")
        height, width = self.array.shape
        dtype = numpy.dtype('u1') if self.maxval < 256 else numpy.dtype('>u2')
        header = "P5\n{0} {1}\n{2}\n".format(width, height, self.maxval).encode('ascii')
        return header + numpy.ascontiguousarray(self.array, dtype=dtype).tobytes()

    def write(self, filename=None):
        """Write the graymap to *filename*."""
        self._init_filename(filename)
        with open(self.real_filename, 'wb') as pgm:
            pgm.write(self.tobytes())
