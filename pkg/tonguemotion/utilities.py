# TongueMotion: utilities.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.

"""
:mod:`tonguemotion.utilities` -- Helper functions and classes
=============================================================

The module defines some convenience functions and classes that are
used in other modules; they do *not* depend on any other module of the
package apart from :mod:`tonguemotion.exceptions` and can be safely
imported at any time.


Classes
-------

:class:`FileUtils` provides functions related to filename handling. It
can be used as a base or mixin class. The file format classes in
:mod:`tonguemotion.fileformats` are derived from it.

:class:`Parameters` is the base of all parameter containers (training,
architecture, snake, CW-SSIM settings): an :class:`AttributeDict` with a
fixed set of keys, default values and conversion from text.

.. autoclass:: FileUtils
   :members:
.. autoclass:: AttributeDict
.. autoclass:: Parameters
   :members:

Functions
---------

.. function:: openany(datasource[,mode='r'])

   Context manager to open a file (or pass through an open stream).

.. function:: atomic_write(filename[,mode='w'])

   Context manager that writes to a temporary file next to *filename*
   and renames it into place only if the block succeeds.

.. autofunction:: iterable
.. autofunction:: asiterable
.. autofunction:: mkdir_p
.. autofunction:: autoconvert
.. autofunction:: intlist
.. autofunction:: floatlist

"""
from __future__ import absolute_import, with_statement

__docformat__ = "restructuredtext en"

import os
import errno
import tempfile
from contextlib import contextmanager

import six

import logging
logger = logging.getLogger('tonguemotion.utilities')


class AttributeDict(dict):
    """A dictionary with pythonic access to keys as attributes --- useful for interactive work."""
    def __getattribute__(self, x):
        try:
            return super(AttributeDict,self).__getattribute__(x)
        except AttributeError:
            try:
                return self[x]
            except KeyError:
                raise AttributeError(x)

    def __setattr__(self, name, value):
        try:
            super(AttributeDict, self).__setitem__(name, value)
        except KeyError:
            super(AttributeDict, self).__setattr__(name, value)

    def __getstate__(self):
        return dict(self)

    def __setstate__(self, state):
        self.update(state)


def autoconvert(s):
    """Convert input to a numerical type if possible.

    1. A non-string object is returned as it is
    2. Try conversion to int, float, str.
    """
    if not isinstance(s, six.string_types):
        return s
    for converter in int, float, str:   # try them in increasing order of lenience
        try:
            return converter(s)
        except ValueError:
            pass
    raise ValueError("Failed to autoconvert {0!r}".format(s))

def _split(s):
    return s.replace(',', ' ').split()

def intlist(s):
    """Convert ``"8 8 8"`` or ``"8,8,8"`` (or a sequence) to a list of ints."""
    if isinstance(s, six.string_types):
        s = _split(s)
    return [int(x) for x in asiterable(s)]

def floatlist(s):
    """Convert ``"4 8"`` or ``"4,8"`` (or a sequence) to a list of floats."""
    if isinstance(s, six.string_types):
        s = _split(s)
    return [float(x) for x in asiterable(s)]

def boolean(s):
    """Interpret yes/no, true/false, on/off and 1/0."""
    if isinstance(s, six.string_types):
        v = s.strip().lower()
        if v in ('1', 'yes', 'true', 'on'):
            return True
        if v in ('0', 'no', 'false', 'off'):
            return False
        raise ValueError("not a boolean: {0!r}".format(s))
    return bool(s)


class Parameters(AttributeDict):
    """Parameter set with a fixed schema.

    Derived classes declare :attr:`schema` as a sequence of
    ``(name, converter, default)`` tuples. On construction all defaults
    are filled in; every value that is set later goes through the
    converter, so strings from configuration files and command lines
    are accepted. Unknown keys raise :exc:`KeyError`.

    :attr:`section` names the section of the global configuration file
    whose values :meth:`from_config` reads.
    """
    schema = ()
    section = None

    def __init__(self, *args, **kwargs):
        super(Parameters, self).__init__()
        for name, converter, default in self.schema:
            dict.__setitem__(self, name, default)
        self.update(*args, **kwargs)

    @classmethod
    def converters(cls):
        return dict((name, converter) for name, converter, default in cls.schema)

    def __setitem__(self, name, value):
        try:
            converter = self.converters()[name]
        except KeyError:
            raise KeyError("unknown parameter {0!r} for {1}; known: {2}".format(
                name, self.__class__.__name__, ", ".join(sorted(self.converters()))))
        if value is not None:
            try:
                value = converter(value)
            except (TypeError, ValueError) as err:
                raise ValueError("{0}: bad value {1!r} for {2!r}: {3}".format(
                    self.__class__.__name__, value, name, err))
        dict.__setitem__(self, name, value)

    def __setattr__(self, name, value):
        self[name] = value

    def update(self, *args, **kwargs):
        for name, value in dict(*args, **kwargs).items():
            self[name] = value

    def copy(self):
        return self.__class__(self)

    def validate(self):
        """Check the values; raise :exc:`ValueError` naming the offending key.

        The base class accepts everything.
        """
        return self

    @classmethod
    def from_config(cls, cfg=None, **kwargs):
        """Defaults overridden by the known keys in :attr:`section` of *cfg*.

        *cfg* defaults to the global :data:`tonguemotion.config.cfg`;
        *kwargs* take precedence over both.
        """
        if cfg is None:
            from . import config
            cfg = config.cfg
        p = cls()
        if cls.section is not None and cfg.has_section(cls.section):
            known = p.converters()
            for option in cfg.options(cls.section):
                # config parsers fold option names to lower case
                for name in known:
                    if name.lower() == option:
                        p[name] = cfg.get(cls.section, option)
        p.update(kwargs)
        return p

    def as_text(self):
        """Dict of the values rendered as strings (lists space separated)."""
        def render(v):
            if isinstance(v, (list, tuple)):
                return " ".join(str(x) for x in v)
            return str(v)
        return dict((name, render(self[name])) for name, c, d in self.schema)


class FileUtils(object):
    """Mixin class to provide additional file-related capabilities."""

    #: Default extension for files read/written by this class.
    default_extension = None

    def _init_filename(self, filename=None, ext=None):
        """Initialize the current filename :attr:`FileUtils.real_filename` of the object.

        - The first invocation must have ``filename != None``; this will set a
          default filename with suffix :attr:`FileUtils.default_extension`
          unless another one was supplied.

        - Subsequent invocations either change the filename accordingly or
          ensure that the default filename is set with the proper suffix.

        """

        extension = ext or self.default_extension
        filename = self.filename(filename, ext=extension, use_my_ext=True, set_default=True)
        #: Current full path of the object for reading and writing I/O.
        self.real_filename = os.path.realpath(filename)

    def filename(self,filename=None,ext=None,set_default=False,use_my_ext=False):
        """Supply a file name for the class object.

        Typical uses::

           fn = filename()             ---> <default_filename>
           fn = filename('name.ext')   ---> 'name'
           fn = filename(ext='pgm')    ---> <default_filename>'.pgm'
           fn = filename('name.inp','pgm') --> 'name.pgm'
           fn = filename('foo.ckpt',ext='pgm',use_my_ext=True) --> 'foo.ckpt'

        The returned filename is stripped of the extension
        (``use_my_ext=False``) and if provided, another extension is
        appended. Chooses a default if no filename is given.

        Raises a ``ValueError`` exception if no default file name is known.

        If ``set_default=True`` then the default filename is also set.

        ``use_my_ext=True`` lets the suffix of a provided filename take
        priority over a default ``ext`` tension.
        """
        if filename is None:
            if not hasattr(self,'_filename'):
                self._filename = None        # add attribute to class
            if self._filename:
                filename = self._filename
            else:
                raise ValueError("A file name is required because no default file name was defined.")
            my_ext = None
        else:
            filename, my_ext = os.path.splitext(filename)
            if set_default:                  # replaces existing default file name
                self._filename = filename
        if my_ext and use_my_ext:
            ext = my_ext
        if ext is not None:
            if ext.startswith(os.extsep):
                ext = ext[1:]  # strip a dot to avoid annoying mistakes
            if ext != "":
                filename = filename + os.extsep + ext
        return filename

    def __repr__(self):
        fmt = "{0!s}(filename=%r)".format(self.__class__.__name__)
        try:
            fn =  self.filename()
        except ValueError:
            fn = None
        return fmt % fn


@contextmanager
def openany(datasource, mode='r', **kwargs):
    """Open the datasource and close it when the context exits.

    :Arguments:
       *datasource*
          a stream or a filename; streams are passed through and *not*
          closed
       *mode*
          ``'r'`` opens for reading, ``'w'`` for writing ['r']
       *kwargs*
          additional keyword arguments that are passed through to
          :func:`open`
    """
    if hasattr(datasource, 'read') or hasattr(datasource, 'write'):
        yield datasource
        return
    stream = open(datasource, mode, **kwargs)
    try:
        yield stream
    finally:
        stream.close()

@contextmanager
def atomic_write(filename, mode='w'):
    """Write *filename* via a temporary file that is renamed on success.

    Readers never see a half-written file; on error the temporary file
    is removed and the target is left untouched.
    """
    dirname = os.path.dirname(os.path.abspath(filename))
    fd, tmpname = tempfile.mkstemp(prefix=".tmp-", suffix=os.path.basename(filename), dir=dirname)
    try:
        with os.fdopen(fd, mode) as stream:
            yield stream
        os.replace(tmpname, filename)
    except BaseException:
        try:
            os.unlink(tmpname)
        except OSError:
            pass
        raise
    logger.debug("wrote %r", filename)


def iterable(obj):
    """Returns ``True`` if *obj* can be iterated over and is *not* a  string."""
    if isinstance(obj, six.string_types):
        return False    # avoid iterating over characters of a string
    if hasattr(obj, '__next__') or hasattr(obj, 'next'):
        return True    # any iterator will do
    try:
        len(obj)       # anything else that might work
    except TypeError:
        return False
    return True

def asiterable(obj):
    """Returns obj so that it can be iterated over; a string is *not* treated as iterable"""
    if not iterable(obj):
        obj = [obj]
    return obj

def mkdir_p(path):
    """Create a directory *path* with subdirs but do not complain if it exists.

    This is like GNU ``mkdir -p path``.
    """
    try:
        os.makedirs(path)
    except OSError as err:
        if err.errno != errno.EEXIST:
            raise
