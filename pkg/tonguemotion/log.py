# log.py
# logging for the TongueMotion package
# Published under the GNU Public Licence v3

"""
:mod:`tonguemotion.log` -- setting up logging
=============================================

Configure logging for TongueMotion. Import this module if logging is
desired in application code.

The top level logger of the library is named *tonguemotion* by
convention; a simple logger that writes to the console and logfile can
be created with the :func:`log.create` function. This only has to be
done *once*. For convenience, the default logger can be created with
:func:`tonguemotion.start_logging`::

 import tonguemotion
 tonguemotion.start_logging()

Any code can log to the package logger by using ::

 import logging
 logger = logging.getLogger('tonguemotion.MODULENAME')

 # use the logger, for example at info level:
 logger.info("Starting task ...")

The important point is that the name of the logger begins with
"tonguemotion.".

.. SeeAlso:: The :mod:`logging` module in the standard library contains
             in depth documentation about using logging.

.. autofunction:: create
.. autofunction:: clear_handlers
"""
from __future__ import absolute_import

import logging

def create(logger_name, logfile='tonguemotion.log',
           loglevel_console=logging.INFO, loglevel_file=logging.DEBUG):
    """Create a top level logger.

    - The file logger logs everything at or above *loglevel_file*
      (DEBUG by default).
    - The console logger only logs *loglevel_console* (INFO) and above.

    No file handler is attached if *logfile* is ``None``.
    """

    logger = logging.getLogger(logger_name)

    logger.setLevel(min(loglevel_console, loglevel_file))

    if logfile is not None:
        logfile = logging.FileHandler(logfile)
        logfile.setLevel(loglevel_file)
        logfile_formatter = logging.Formatter('%(asctime)s %(name)-24s %(levelname)-8s %(message)s')
        logfile.setFormatter(logfile_formatter)
        logger.addHandler(logfile)

    # define a Handler which writes INFO messages or higher to the sys.stderr
    console = logging.StreamHandler()
    console.setLevel(loglevel_console)
    # set a format which is simpler for console use
    formatter = logging.Formatter('%(name)-24s: %(levelname)-8s %(message)s')
    console.setFormatter(formatter)

    logger.addHandler(console)

    return logger

def clear_handlers(logger):
    """clean out handlers in the library top level logger

    (only important for reload/debug cycles...)
    """
    for h in list(logger.handlers):
        if not isinstance(h, logging.NullHandler):
            logger.removeHandler(h)
            h.close()
