# TongueMotion: tables.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
CSV tables
==========

Loss curves and evaluation reports are small CSV tables with a fixed
header. They are handled as :class:`pandas.DataFrame` objects and are
always written atomically (temporary file plus rename), so a crashed
run never leaves a partial table behind.

.. autoclass:: CSVTable
   :members:
.. autoclass:: LossCurves
   :members:
.. autoclass:: ReportTable
   :members:
"""
from __future__ import absolute_import, with_statement

import pandas

from ..exceptions import ParseError, MissingDataError
from .. import utilities

import logging

class CSVTable(utilities.FileUtils):
    """A CSV file with the fixed header :attr:`columns`.

    The data are available as :attr:`CSVTable.df`.
    """
    default_extension = "csv"
    columns = ()
    logger = logging.getLogger('tonguemotion.formats.CSVTable')

    def __init__(self, filename=None, rows=None):
        """Initialize the table.

        :Arguments:
          *filename*
              read from a csv file
          *rows*
              list of dicts or tuples in :attr:`columns` order
        """
        self.df = pandas.DataFrame(rows if rows else [], columns=list(self.columns))
        if rows and not isinstance(rows[0], dict):
            self.df = pandas.DataFrame(list(rows), columns=list(self.columns))
        if filename is not None:
            self._init_filename(filename)
            self.read(filename)

    def append(self, row):
        """Add one row (dict or tuple in column order)."""
        if not isinstance(row, dict):
            row = dict(zip(self.columns, row))
        rows = self.df.to_dict('records') + [row]
        self.df = pandas.DataFrame(rows, columns=list(self.columns))

    def __len__(self):
        return len(self.df)

    def to_df(self):
        return self.df.copy()

    def read(self, filename=None):
        """Read *filename* and check its header."""
        self._init_filename(filename)
        df = pandas.read_csv(self.real_filename)
        if list(df.columns) != list(self.columns):
            errmsg = "{0!r}: expected columns {1}, found {2}".format(
                self.real_filename, ",".join(self.columns), ",".join(map(str, df.columns)))
            self.logger.error(errmsg)
            raise ParseError(errmsg)
        self.df = df

    def write(self, filename=None):
        """Write the table atomically to *filename*."""
        self._init_filename(filename)
        with utilities.atomic_write(self.real_filename, 'w') as csv:
            self.df.to_csv(csv, index=False, columns=list(self.columns))
        self.logger.info("wrote %r (%d rows)", self.real_filename, len(self.df))


class LossCurves(CSVTable):
    """Mean train and test MSE per epoch (normalized [0, 1] pixel scale)."""
    columns = ('epoch', 'train_mse', 'test_mse')
    logger = logging.getLogger('tonguemotion.formats.LossCurves')

    def plot(self, filename=None, ax=None, **kwargs):
        """Plot train and test MSE against epoch.

        Requires :mod:`matplotlib` (install the ``plotting`` extra). If
        *filename* is given the figure is saved there.
        """
        if len(self.df) == 0:
            raise MissingDataError("plot() needs at least one epoch")
        import matplotlib
        if ax is None:
            matplotlib.use('Agg')
        import matplotlib.pyplot as plt

        if ax is None:
            fig, ax = plt.subplots()
        else:
            fig = ax.figure
        ax.plot(self.df['epoch'], self.df['train_mse'], label="training", **kwargs)
        ax.plot(self.df['epoch'], self.df['test_mse'], label="test", **kwargs)
        ax.set_xlabel("epoch")
        ax.set_ylabel("MSE")
        ax.legend(loc="best")
        if filename is not None:
            fig.savefig(filename)
            self.logger.info("wrote loss plot %r", filename)
        return ax


class ReportTable(CSVTable):
    """One row per (predictor, offset) with mean 8-bit MSE and CW-SSIM."""
    columns = ('predictor', 'offset', 'mse', 'cwssim', 'n')
    logger = logging.getLogger('tonguemotion.formats.ReportTable')

    def row(self, predictor, offset=None):
        """Return the row of *predictor* (at *offset*) as a dict."""
        df = self.df[self.df['predictor'] == predictor]
        if offset is not None:
            df = df[df['offset'] == offset]
        if len(df) == 0:
            raise KeyError("no row for predictor {0!r}".format(predictor))
        return df.iloc[0].to_dict()
