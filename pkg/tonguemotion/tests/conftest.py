# TongueMotion: shared test fixtures
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.

from __future__ import absolute_import

import pytest

from tonguemotion import data
from tonguemotion.network import Architecture


@pytest.fixture
def tiny_arch():
    """Two layers, two hidden channels, 8x8 frames, 3 input frames, 64 bit."""
    return Architecture(hidden=[2, 2], kernel=3, height=8, width=8, window=3,
                        offset=1, precision=64)

@pytest.fixture(scope='module')
def synth_dataset(tmpdir_factory):
    """Small synthetic dataset on disk: 4 videos of 14 frames, 16x16."""
    root = str(tmpdir_factory.mktemp("synth"))
    result = data.synth_generate(root, videos=4, frames=14, height=16, width=16,
                                 seed=3, keep_frames=True)
    return result
