# TongueMotion: contourfile.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
Contour text files
==================

A header line with the number of points *N* followed by *N* lines
``x y`` (pixel coordinates, column then row)::

   3
   0.5 10.25
   1.5 10.5
   2.5 10.0

.. autoclass:: ContourFile
   :members:
"""
from __future__ import absolute_import, with_statement

import numpy

from ..exceptions import ParseError
from .. import utilities

import logging

class ContourFile(utilities.FileUtils):
    """Ordered contour points as an array :attr:`ContourFile.points` of shape ``[N, 2]``."""
    default_extension = "txt"
    logger = logging.getLogger('tonguemotion.formats.ContourFile')

    def __init__(self, filename=None, points=None):
        self.points = None if points is None else numpy.asarray(points, dtype=float)
        if filename is not None:
            self._init_filename(filename)
            self.read(filename)

    def read(self, filename=None):
        """Read contour file *filename*."""
        self._init_filename(filename)
        with open(self.real_filename) as contour:
            lines = [line.strip() for line in contour if line.strip()]
        try:
            n = int(lines[0])
            points = numpy.array([[float(v) for v in line.split()] for line in lines[1:]])
        except (IndexError, ValueError) as err:
            errmsg = "{0!r}: not a contour file ({1})".format(self.real_filename, err)
            self.logger.error(errmsg)
            raise ParseError(errmsg)
        if points.shape != (n, 2):
            errmsg = "{0!r}: header announces {1} points but {2} 'x y' lines follow".format(
                self.real_filename, n, len(lines) - 1)
            self.logger.error(errmsg)
            raise ParseError(errmsg)
        self.points = points

    def write(self, filename=None):
        """Write the contour to *filename*."""
        self._init_filename(filename)
        with open(self.real_filename, 'w') as contour:
            contour.write("{0:d}\n".format(len(self.points)))
            for x, y in self.points:
                contour.write("{0!r} {1!r}\n".format(float(x), float(y)))
