# TongueMotion: conftest.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.

import pytest


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="also run the slow training reproductions")

def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long training runs, only with --runslow")

def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
