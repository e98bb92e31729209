# TongueMotion config.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
""":mod:`tonguemotion.config` -- Configuration for TongueMotion
=============================================================

The config module provides configurable options for the whole package:
how to handle log files and the default values of every training,
snake and CW-SSIM parameter.

Configuration is layered. The bundled template
``tonguemotion/templates/tonguemotion.cfg`` supplies all defaults; values
in the user file ``~/.tonguemotion.cfg`` (or the file named by the
environment variable :envvar:`TONGUEMOTION_CONFIG`) replace them. The
command line adds two more layers on top for a single run: a flat
``key=value`` run file given with ``--config`` and finally the flags
themselves (see :mod:`tonguemotion.cli`).

If the configuration file is edited then one can force a rereading of
the new config file with :func:`tonguemotion.config.get_configuration`::

 tonguemotion.config.get_configuration()

The file has ini-file syntax as described in :mod:`configparser`.

.. autofunction:: get_configuration
.. autofunction:: get_template

Developers
~~~~~~~~~~

Developers are able to access all configuration data through
:data:`tonguemotion.config.cfg`, which represents the merger of the
package default values and the user configuration file values.

.. autodata:: cfg
.. autoclass:: TMConfigParser
   :members:

Default values are hard-coded in

.. autodata:: CONFIGNAME
.. autodata:: defaults

Logging
-------

.. autodata:: logfilename
.. autodata:: loglevel_console
.. autodata:: loglevel_file
"""
from __future__ import absolute_import, with_statement

import os
import logging

from six.moves.configparser import ConfigParser

#: Default name of the global configuration file.
CONFIGNAME = os.environ.get('TONGUEMOTION_CONFIG',
                            os.path.expanduser(os.path.join("~", ".tonguemotion.cfg")))

defaults = {
    'logfilename': "tonguemotion.log",
    'loglevel_console': 'INFO',
    'loglevel_file': 'DEBUG',
}

# Logging
# -------

logger = logging.getLogger("tonguemotion.config")

#: File name for the log file. The default is *tonguemotion.log*.
logfilename = defaults['logfilename']

#: The default loglevel that is still printed to the console.
loglevel_console = logging.getLevelName(defaults['loglevel_console'])

#: The default loglevel that is still written to the :data:`logfilename`.
loglevel_file = logging.getLevelName(defaults['loglevel_file'])

# Location of template files
# --------------------------

#: Directory of the templates that ship with the package.
templatesdir = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'templates')

#: All bundled template files, keyed by file name.
templates = dict((fn, os.path.join(templatesdir, fn))
                 for fn in os.listdir(templatesdir) if not fn.endswith('~'))

def get_template(t):
    """Find template file *t* and return its real path.

    *t* is either an accessible path or the name of a bundled template.

    :Raises: :exc:`ValueError` if no file can be located.
    """
    if os.path.exists(t):
        return os.path.realpath(t)
    try:
        return os.path.realpath(templates[os.path.basename(t)])
    except KeyError:
        raise ValueError("Failed to locate the template file {t!r}.".format(**vars()))

class TMConfigParser(ConfigParser):
    """Customized :class:`configparser.ConfigParser`."""
    cfg_template = 'tonguemotion.cfg'

    def __init__(self, *args, **kwargs):
        """Reads and parses the configuration file.

        Default values are loaded from the bundled template and then
        replaced with the values from ``~/.tonguemotion.cfg`` if that file
        exists.

        Normally, the configuration is only loaded when the
        :mod:`tonguemotion` package is imported but a re-reading of the
        configuration can be forced anytime by calling
        :func:`get_configuration`.
        """
        self.filename = kwargs.pop('filename', CONFIGNAME)
        kwargs.setdefault('interpolation', None)
        ConfigParser.__init__(self, *args, **kwargs)

        self.add_section('Logging')
        self.set('Logging', 'logfilename', defaults['logfilename'])
        self.set('Logging', 'loglevel_console', defaults['loglevel_console'])
        self.set('Logging', 'loglevel_file', defaults['loglevel_file'])

        # bundled defaults
        with open(get_template(self.cfg_template)) as default_cfg:
            self.read_file(default_cfg)

        # defaults are overriden by existing user global cfg file
        if self.filename:
            self.read([self.filename])

    @property
    def configuration(self):
        """Dict of variables that we make available as globals in the module.

        Can be used as ::

           globals().update(TMConfigParser.configuration)
        """
        return {
            'configfilename': self.filename,
            'logfilename': self.getpath('Logging', 'logfilename'),
            'loglevel_console': self.getLogLevel('Logging', 'loglevel_console'),
            'loglevel_file': self.getLogLevel('Logging', 'loglevel_file'),
            }

    def getpath(self, section, option):
        """Return option as an expanded path."""
        return os.path.expanduser(os.path.expandvars(self.get(section, option)))

    def getlist(self, section, option, converter=str):
        """Return a whitespace or comma separated option as a list."""
        return [converter(x) for x in self.get(section, option).replace(',', ' ').split()]

    def getLogLevel(self, section, option):
        """Return the textual representation of logging level 'option' or the number.

        Note that option is always interpreted as an UPPERCASE string
        and hence integer log levels will not be recognized.

        .. SeeAlso: :mod:`logging` and :func:`logging.getLevelName`
        """
        return logging.getLevelName(self.get(section, option).upper())

def get_configuration(filename=CONFIGNAME):
    """Reads and parses the configuration file.

    Default values are loaded and then replaced with the values from
    *filename* (``~/.tonguemotion.cfg``) if that file exists. The global
    configuration instance :data:`tonguemotion.config.cfg` is updated
    as are the logging variables :data:`logfilename`, ...

    :Returns: the new :class:`TMConfigParser`
    """
    global cfg, configuration

    cfg = TMConfigParser(filename=filename)
    globals().update(cfg.configuration)
    configuration = cfg.configuration
    return cfg

#: :data:`cfg` is the instance of :class:`TMConfigParser` that makes all
#: global configuration data accessible
cfg = TMConfigParser()
globals().update(cfg.configuration)

#: Dict containing important configuration variables, populated by
#: :func:`get_configuration` (mainly a shortcut; use :data:`cfg` in most cases).
configuration = cfg.configuration
