# TongueMotion: checkpoint.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
Binary model checkpoints
========================

Layout (all integers little-endian)::

   8 bytes    magic "CLSTMCKP"
   uint32     format version (1)
   uint32     length L of the configuration block
   L bytes    UTF-8 text, one "key = value" line per setting
   repeated until end of file, one entry per tensor:
     uint16   length of the name
     bytes    name (UTF-8)
     uint8    rank r
     r*uint32 dimensions
     float32  values in row-major order

Values are always stored as 32-bit IEEE-754, so a round trip of a
single precision model is bit-exact.

Reading distinguishes :exc:`~tonguemotion.BadMagicError`,
:exc:`~tonguemotion.VersionMismatchError` and
:exc:`~tonguemotion.CorruptCheckpointError`; I/O problems raise
:exc:`IOError`.

.. autoclass:: Checkpoint
   :members:
"""
from __future__ import absolute_import, with_statement

import io
import struct
from collections import OrderedDict as odict

import numpy

from ..exceptions import BadMagicError, VersionMismatchError, CorruptCheckpointError, ParseError
from .. import utilities
from .kvfile import KeyValueFile

import logging

class Checkpoint(utilities.FileUtils):
    """A checkpoint: configuration strings plus named float32 tensors.

    :attr:`Checkpoint.config` is an ordered dict of strings,
    :attr:`Checkpoint.tensors` an ordered dict of arrays.
    """
    default_extension = "ckpt"
    logger = logging.getLogger('tonguemotion.formats.Checkpoint')

    MAGIC = b"CLSTMCKP"
    VERSION = 1
    DTYPE = numpy.dtype('<f4')

    def __init__(self, filename=None, config=None, tensors=None):
        self.config = odict() if config is None else odict(config)
        self.tensors = odict() if tensors is None else odict(tensors)
        if filename is not None:
            self._init_filename(filename)
            self.read(filename)

    def _corrupt(self, msg):
        errmsg = "{0!r}: corrupt checkpoint: {1}".format(getattr(self, 'real_filename', '(bytes)'), msg)
        self.logger.error(errmsg)
        raise CorruptCheckpointError(errmsg)

    def read(self, filename=None):
        """Read the checkpoint *filename*."""
        self._init_filename(filename)
        with open(self.real_filename, 'rb') as ckpt:
            self.parse(ckpt.read())

    def parse(self, data):
        """Decode checkpoint bytes *data*."""
        fn = getattr(self, 'real_filename', '(bytes)')
        if data[:8] != self.MAGIC:
            errmsg = "{0!r}: not a checkpoint (magic {1!r})".format(fn, data[:8])
            self.logger.error(errmsg)
            raise BadMagicError(errmsg)
        if len(data) < 16:
            self._corrupt("truncated header")
        version, length = struct.unpack_from('<II', data, 8)
        if version != self.VERSION:
            errmsg = "{0!r}: checkpoint format version {1}, only version {2} is supported".format(
                fn, version, self.VERSION)
            self.logger.error(errmsg)
            raise VersionMismatchError(errmsg)
        pos = 16
        block = data[pos:pos+length]
        if len(block) < length:
            self._corrupt("truncated configuration block")
        pos += length
        try:
            config = KeyValueFile(io.StringIO(block.decode('utf-8')), autoconvert=False)
        except (UnicodeDecodeError, ValueError, ParseError) as err:
            self._corrupt("unreadable configuration block ({0})".format(err))

        tensors = odict()
        while pos < len(data):
            if pos + 2 > len(data):
                self._corrupt("truncated tensor entry at byte {0}".format(pos))
            namelen, = struct.unpack_from('<H', data, pos)
            pos += 2
            name = data[pos:pos+namelen]
            if len(name) < namelen or pos + namelen + 1 > len(data):
                self._corrupt("truncated tensor name at byte {0}".format(pos))
            try:
                name = name.decode('utf-8')
            except UnicodeDecodeError:
                self._corrupt("tensor name is not UTF-8 at byte {0}".format(pos))
            pos += namelen
            rank, = struct.unpack_from('<B', data, pos)
            pos += 1
            if pos + 4*rank > len(data):
                self._corrupt("truncated shape of tensor {0!r}".format(name))
            shape = struct.unpack_from('<{0}I'.format(rank), data, pos)
            pos += 4*rank
            if any(d == 0 for d in shape):
                self._corrupt("tensor {0!r} has an empty dimension {1!r}".format(name, shape))
            nbytes = int(numpy.prod(shape, dtype=numpy.int64)) * self.DTYPE.itemsize
            if pos + nbytes > len(data):
                self._corrupt("truncated values of tensor {0!r}".format(name))
            if name in tensors:
                self._corrupt("duplicate tensor {0!r}".format(name))
            tensors[name] = numpy.frombuffer(data, dtype=self.DTYPE, count=nbytes // 4,
                                             offset=pos).reshape(shape).astype(numpy.float32)
            pos += nbytes
        self.config = odict(config)
        self.tensors = tensors

    def tobytes(self):
        """Encoded checkpoint."""
        block = KeyValueFile(autoconvert=False)
        block.update(self.config)
        block = block.tostring().encode('utf-8')
        out = [self.MAGIC, struct.pack('<II', self.VERSION, len(block)), block]
        for name, value in self.tensors.items():
            value = numpy.asarray(value)
            bname = name.encode('utf-8')
            out.append(struct.pack('<H', len(bname)))
            out.append(bname)
            out.append(struct.pack('<B', value.ndim))
            out.append(struct.pack('<{0}I'.format(value.ndim), *value.shape))
            out.append(numpy.ascontiguousarray(value, dtype=self.DTYPE).tobytes())
        return b"".join(out)

    def write(self, filename=None):
        """Write the checkpoint to *filename* (atomically)."""
        self._init_filename(filename)
        with utilities.atomic_write(self.real_filename, 'wb') as ckpt:
            ckpt.write(self.tobytes())
        self.logger.info("wrote checkpoint %r (%d tensors)", self.real_filename, len(self.tensors))
