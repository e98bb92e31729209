# TongueMotion test cases
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
Test cases for TongueMotion
===========================

Run with pytest from the top of the source tree::

   pytest tonguemotion numkit

Tests that reproduce whole training runs take minutes to tens of
minutes; they are marked ``slow`` and only run with ``--runslow``.
"""
