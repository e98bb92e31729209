# TongueMotion: test_utilities.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.

from __future__ import division, absolute_import, print_function

import os
import pytest
from six.moves import cPickle as pickle
from six.moves import StringIO, configparser

import tonguemotion.utilities
from tonguemotion.utilities import Parameters, intlist, floatlist, boolean


@pytest.fixture
def string_buffer():
    return StringIO()


class TestAttributeDict(object):
    def setup_method(self):
        self.d = tonguemotion.utilities.AttributeDict(foo="bar", baz="boing")

    def test_attribute_get(self):
        assert self.d.foo == "bar"

    def test_missing_attribute(self):
        with pytest.raises(AttributeError):
            self.d.gargl

    def test_attribute_set(self):
        self.d.gargl = "blaster"
        assert self.d['gargl'] == "blaster"

    def test_pickle(self):
        d = pickle.loads(pickle.dumps(self.d, pickle.HIGHEST_PROTOCOL))
        assert dict(d) == dict(self.d)


class Knobs(Parameters):
    section = 'Knobs'
    schema = (
        ('rate', float, 0.5),
        ('layers', intlist, [4, 4]),
        ('verbose', boolean, False),
    )


class TestParameters(object):
    def test_defaults(self):
        p = Knobs()
        assert p.rate == 0.5
        assert p.layers == [4, 4]
        assert p.verbose is False

    def test_conversion_from_text(self):
        p = Knobs(rate="0.25", layers="1, 2 3", verbose="yes")
        assert p.rate == 0.25
        assert p.layers == [1, 2, 3]
        assert p.verbose is True

    def test_attribute_assignment_converts(self):
        p = Knobs()
        p.rate = "2"
        assert p.rate == 2.0

    def test_unknown_key(self):
        with pytest.raises(KeyError):
            Knobs(gargl=1)

    def test_bad_value_names_key(self):
        with pytest.raises(ValueError) as err:
            Knobs(rate="fast")
        assert "rate" in str(err.value)

    def test_copy_is_independent(self):
        p = Knobs()
        q = p.copy()
        q.rate = 1
        assert p.rate == 0.5
        assert isinstance(q, Knobs)

    def test_from_config(self):
        cfg = configparser.ConfigParser()
        cfg.add_section('Knobs')
        cfg.set('Knobs', 'rate', '0.125')
        cfg.set('Knobs', 'layers', '8 8 8')
        p = Knobs.from_config(cfg, verbose=True)
        assert p.rate == 0.125
        assert p.layers == [8, 8, 8]
        assert p.verbose is True

    def test_kwargs_beat_config(self):
        cfg = configparser.ConfigParser()
        cfg.add_section('Knobs')
        cfg.set('Knobs', 'rate', '0.125')
        assert Knobs.from_config(cfg, rate=3).rate == 3.0

    def test_as_text(self):
        assert Knobs().as_text() == {'rate': '0.5', 'layers': '4 4', 'verbose': 'False'}


@pytest.mark.parametrize('text,value', [("1", True), ("on", True), ("No", False), ("false", False)])
def test_boolean(text, value):
    assert boolean(text) is value

def test_boolean_rejects_garbage():
    with pytest.raises(ValueError):
        boolean("maybe")

def test_floatlist():
    assert floatlist("4 8") == [4.0, 8.0]
    assert floatlist([1, 2]) == [1.0, 2.0]

@pytest.mark.parametrize('value,expected', [("12", 12), ("1.5", 1.5), ("abc", "abc"), (3, 3)])
def test_autoconvert(value, expected):
    assert tonguemotion.utilities.autoconvert(value) == expected


class TestAtomicWrite(object):
    def test_success(self, tmpdir):
        target = str(tmpdir.join("report.csv"))
        with tonguemotion.utilities.atomic_write(target) as out:
            out.write("a,b\n")
        with open(target) as f:
            assert f.read() == "a,b\n"
        assert os.listdir(str(tmpdir)) == ["report.csv"]

    def test_failure_leaves_target_alone(self, tmpdir):
        target = tmpdir.join("report.csv")
        target.write("old\n")
        with pytest.raises(RuntimeError):
            with tonguemotion.utilities.atomic_write(str(target)) as out:
                out.write("half")
                raise RuntimeError("boom")
        assert target.read() == "old\n"
        assert os.listdir(str(tmpdir)) == ["report.csv"]


def test_openany_passes_streams_through(string_buffer):
    with tonguemotion.utilities.openany(string_buffer) as stream:
        stream.write("x")
    assert not string_buffer.closed
    assert string_buffer.getvalue() == "x"

def test_mkdir_p(tmpdir):
    path = str(tmpdir.join("a", "b"))
    tonguemotion.utilities.mkdir_p(path)
    tonguemotion.utilities.mkdir_p(path)
    assert os.path.isdir(path)

@pytest.mark.parametrize('obj,expected', [("abc", False), ([1], True), (iter([]), True), (3, False)])
def test_iterable(obj, expected):
    assert tonguemotion.utilities.iterable(obj) is expected


class TestFileUtils(object):
    class Thing(tonguemotion.utilities.FileUtils):
        default_extension = "pgm"

    def test_default_extension(self):
        t = self.Thing()
        t._init_filename("frame")
        assert t.real_filename.endswith("frame.pgm")

    def test_own_extension_wins(self):
        t = self.Thing()
        t._init_filename("frame.ckpt")
        assert t.filename() == "frame"
        assert t.real_filename.endswith("frame.ckpt")

    def test_no_default(self):
        with pytest.raises(ValueError):
            self.Thing().filename()
