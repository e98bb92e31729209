# -*- coding: utf-8 -*-
# numkit test cases
# Published under the Modified BSD Licence.
"""
Test cases for numkit
=====================

Run all the tests with ``pytest numkit``.

Writing test cases
------------------

Use :mod:`numpy.testing` for array comparisons and
:func:`numkit.gradcheck.check_gradient` for derivatives; gradient checks
run at 64-bit precision.
"""
