# TongueMotion: kvfile.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
Flat key = value run files
==========================

Run configuration files passed with ``--config`` and the configuration
block embedded in checkpoints share one format: one ``key = value``
per line, ``#`` starts a comment, blank lines are ignored. The class
:class:`KeyValueFile` parses this file and provides access to the keys
and values as ordered dictionary.

.. autoclass:: KeyValueFile
   :members:
"""
from __future__ import absolute_import, with_statement

import re
from collections import OrderedDict as odict

import six

from ..exceptions import ParseError
from .. import utilities

import logging

class KeyValueFile(odict, utilities.FileUtils):
    """Class that represents a flat ``key = value`` file.

    The KeyValueFile instance is an ordered dictionary of the parameters
    in file order. Comments and blank lines are not preserved. A key
    that appears twice keeps its last value (with a warning in the log).
    """
    default_extension = None
    logger = logging.getLogger('tonguemotion.formats.KeyValueFile')

    COMMENT = re.compile(r"""\s*\#\s*(?P<value>.*)""")   # eat initial ws
    PARAMETER = re.compile(r"""
                            \s*(?P<parameter>[A-Za-z_][\w.\-]*)\s*=\s*  # parameter (ws-stripped), before '='
                            (?P<value>[^\#]*?)\s*                   # value (stop before comment=#)
                            (?P<comment>\#.*)?$                     # optional comment
                            """, re.VERBOSE)

    def __init__(self, filename=None, autoconvert=True, **kwargs):
        """Initialize the parameter file.

        :Arguments:
          *filename*
              read from file (or an open stream)
          *autoconvert* : boolean
              ``True`` converts numerical values to python numerical types;
              ``False`` keeps everything as strings [``True``]
          *kwargs*
              Populate with key=value pairs.
        """
        super(KeyValueFile, self).__init__(**kwargs)
        self.autoconvert = autoconvert

        if filename is not None:
            self.read(filename)

    def _transform(self, value):
        if self.autoconvert:
            return utilities.autoconvert(value)
        else:
            return value

    def read(self, filename=None):
        """Read and parse *filename* (a path or a text stream)."""
        if hasattr(filename, 'read'):
            name = getattr(filename, 'name', '(stream)')
        else:
            self._init_filename(filename)
            filename = name = self.real_filename

        data = odict()
        with utilities.openany(filename) as kv:
            for lineno, line in enumerate(kv, start=1):
                line = line.strip()
                if len(line) == 0 or self.COMMENT.match(line):
                    continue
                m = self.PARAMETER.match(line)
                if m:
                    parameter = m.group('parameter')
                    if parameter in data:
                        self.logger.warning("%s:%d: parameter %r given again, using the last value",
                                            name, lineno, parameter)
                    data[parameter] = self._transform(m.group('value'))
                else:
                    errmsg = '{name!s}:{lineno:d}: cannot parse line {line!r}'.format(**vars())
                    self.logger.error(errmsg)
                    raise ParseError(errmsg)

        super(KeyValueFile, self).update(data)
        self.source = name

    def check_keys(self, known):
        """Raise :exc:`~tonguemotion.ParseError` for keys not in *known*."""
        unknown = [k for k in self if k not in known]
        if unknown:
            errmsg = "{0}: unknown parameter(s) {1}".format(getattr(self, 'source', '(config)'),
                                                         ", ".join(repr(k) for k in unknown))
            self.logger.error(errmsg)
            raise ParseError(errmsg)

    def tostring(self):
        lines = []
        for k, v in self.items():
            if isinstance(v, (list, tuple)):
                v = " ".join(str(x) for x in v)
            lines.append("{k!s} = {v!s}\n".format(**vars()))
        return "".join(lines)

    def write(self, filename=None):
        """Write the parameters to *filename* (a path or a text stream)."""
        if not hasattr(filename, 'write'):
            self._init_filename(filename)
            filename = self.real_filename
        with utilities.openany(filename, 'w') as kv:
            kv.write(self.tostring())
