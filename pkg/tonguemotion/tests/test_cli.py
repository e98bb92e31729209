# TongueMotion: test_cli.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.

from __future__ import division, absolute_import

import os

import pytest
import numpy

from tonguemotion import cli
from tonguemotion.training import checkpoint_load
from tonguemotion.fileformats import LossCurves, ReportTable, ContourFile, PGM
from tonguemotion.data import read_manifest

SMALL = ['--height', '24', '--width', '24']
TINY_MODEL = SMALL + ['--hidden', '2', '--window', '3', '--epochs', '1', '--batch', '8']


@pytest.fixture(scope='module')
def workspace(tmpdir_factory):
    """Synthetic dataset (3 videos, 14 frames, 24x24) and a model trained on it."""
    tmp = tmpdir_factory.mktemp("cli")
    dataset = str(tmp.join("data"))
    model = str(tmp.join("model.ckpt"))
    assert cli.run(['synth', '--out', dataset, '--videos', '3', '--frames', '14', '--seed', '1'] + SMALL) == 0
    assert cli.run(['train', '--data', dataset, '--out', model] + TINY_MODEL) == 0
    return tmp, dataset, model


class TestParser(object):
    @pytest.mark.parametrize('command,flags', [
        ('synth', ['--out', '--videos', '--frames', '--seed', '--amplitude', '--looks']),
        ('train', ['--data', '--out', '--lr', '--batch', '--epochs', '--seed', '--offset', '--precision',
                   '--jobs', '--hidden', '--target', '--losses', '--loss-plot', '--snake-alpha', '--config']),
        ('predict', ['--model', '--data', '--out', '--split']),
        ('evaluate', ['--model', '--data', '--report', '--frames-out', '--cwssim-support', '--snake-sigma']),
        ('contour', ['--data', '--out', '--snake-iterations', '--jobs']),
    ])
    def test_help(self, capsys, command, flags):
        assert cli.run([command, '--help']) == 0
        out = capsys.readouterr().out
        for flag in flags:
            assert flag in out, flag

    def test_flag_names(self):
        assert cli._flag('test_fraction') == '--test-fraction'
        assert 'snake_alpha' in cli._keys('train')
        assert 'cwssim_K' not in cli._keys('train')
        assert 'videos' not in cli._keys('train')

    @pytest.mark.parametrize('argv', [
        [],
        ['fly'],
        ['train', '--data', 'x'],                                       # --out missing
        ['train', '--data', 'x', '--out', 'm.ckpt', '--gargl', '1'],
        ['train', '--data', 'x', '--out', 'm.ckpt', '--offset', '4'],
        ['evaluate', '--data', 'x', '--report', 'r.csv', '--split', 'dev'],
    ])
    def test_usage_errors(self, argv, capsys):
        assert cli.run(argv) == 2


class TestErrors(object):
    def test_missing_data(self, tmpdir, capsys):
        code = cli.run(['train', '--data', str(tmpdir.join("none")), '--out', str(tmpdir.join("m.ckpt"))])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_bad_value(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        assert cli.run(['train', '--data', dataset, '--out', str(tmpdir.join("m.ckpt")),
                        '--epochs', 'many']) == 2
        assert cli.run(['train', '--data', dataset, '--out', str(tmpdir.join("m.ckpt")),
                        '--kernel', '4']) == 2

    def test_unknown_config_key(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        runfile = tmpdir.join("run.cfg")
        runfile.write("epochs = 1\ngargl = 3\n")
        assert cli.run(['train', '--config', str(runfile), '--data', dataset,
                        '--out', str(tmpdir.join("m.ckpt"))]) == 2

    def test_corrupt_model(self, workspace, tmpdir, capsys):
        tmp, dataset, model = workspace
        bad = tmpdir.join("bad.ckpt")
        bad.write_binary(b"NOTACKPT" + b"\x00" * 20)
        code = cli.run(['predict', '--model', str(bad), '--data', dataset, '--out', str(tmpdir.join("p"))])
        assert code == 1
        err = capsys.readouterr().err
        assert "tonguemotion: error:" in err

    def test_run_failure(self, tmpdir, capsys):
        # a single video cannot be split into training and test videos
        dataset = str(tmpdir.join("one"))
        assert cli.run(['synth', '--out', dataset, '--videos', '1', '--frames', '12'] + SMALL) == 0
        code = cli.run(['train', '--data', dataset, '--out', str(tmpdir.join("m.ckpt"))] + TINY_MODEL)
        assert code == 1


class TestCommands(object):
    def test_synth_deterministic(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        again = str(tmpdir.join("again"))
        assert cli.run(['synth', '--out', again, '--videos', '3', '--frames', '14', '--seed', '1'] + SMALL) == 0
        assert read_manifest(again) == read_manifest(dataset)
        for name in ("utt_0000", "utt_0002"):
            fn = os.path.join(name, "frame_000007.pgm")
            with open(os.path.join(dataset, fn), 'rb') as a, open(os.path.join(again, fn), 'rb') as b:
                assert a.read() == b.read()

    def test_train_outputs(self, workspace):
        tmp, dataset, model = workspace
        loaded = checkpoint_load(model)
        assert loaded.arch.hidden == [2]
        assert loaded.arch.height == 24
        assert loaded.meta['target'] == 'frames'
        assert loaded.meta['seed'] == '0'
        curves = LossCurves(os.path.splitext(model)[0] + ".losses.csv")
        assert len(curves) == 1

    def test_train_is_reproducible(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        again = str(tmpdir.join("again.ckpt"))
        assert cli.run(['train', '--data', dataset, '--out', again] + TINY_MODEL) == 0
        with open(model, 'rb') as a, open(again, 'rb') as b:
            assert a.read() == b.read()

    def test_train_with_run_file(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        runfile = tmpdir.join("run.cfg")
        runfile.write("# short run\nepochs = 3\nhidden = 2\nwindow = 3\nheight = 24\nwidth = 24\n")
        out = str(tmpdir.join("m.ckpt"))
        losses = str(tmpdir.join("curves.csv"))
        assert cli.run(['train', '--config', str(runfile), '--data', dataset, '--out', out,
                        '--losses', losses, '--epochs', '2', '--offset', '2']) == 0
        assert len(LossCurves(losses)) == 2
        assert checkpoint_load(out).offset == 2

    def test_predict(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        out = str(tmpdir.join("pred"))
        assert cli.run(['predict', '--model', model, '--data', dataset, '--out', out]) == 0
        files = sorted(os.listdir(out))
        assert len(files) == 14 - 3 - 1 + 1
        assert files[0].endswith("_000003.pgm")
        assert PGM(os.path.join(out, files[0])).shape == (24, 24)

    def test_evaluate(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        report = str(tmpdir.join("report.csv"))
        frames = str(tmpdir.join("frames"))
        assert cli.run(['evaluate', '--model', model, '--data', dataset, '--report', report,
                        '--frames-out', frames]) == 0
        table = ReportTable(report)
        assert list(table.df['predictor']) == ['ConvLSTM', 'average', 'copy-8th']
        assert set(table.df['offset']) == {1}
        assert numpy.all((table.df['cwssim'] >= 0) & (table.df['cwssim'] <= 1))
        assert sorted(os.listdir(frames)) == ['ConvLSTM', 'average', 'copy-8th']

    def test_evaluate_baselines_only(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        report = str(tmpdir.join("report.csv"))
        assert cli.run(['evaluate', '--data', dataset, '--report', report, '--window', '3',
                        '--offset', '3', '--split', 'all'] + SMALL) == 0
        table = ReportTable(report)
        assert list(table.df['predictor']) == ['average', 'copy-8th']
        assert table.row('copy-8th')['n'] == 3 * (14 - 3 - 3 + 1)

    def test_contour(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        out = str(tmpdir.join("contours"))
        assert cli.run(['contour', '--data', dataset, '--out', out, '--snake-points', '16',
                        '--snake-iterations', '50']) == 0
        assert read_manifest(out) == read_manifest(dataset)
        contour = ContourFile(os.path.join(out, "utt_0001", "frame_000013.txt"))
        assert contour.points.shape == (16, 2)
        target = PGM(os.path.join(out, "utt_0001", "frame_000013.pgm")).to_frame()
        assert target.shape == (1, 24, 24)
        assert target.max() > 0.5

    def test_contour_condition(self, workspace, tmpdir):
        tmp, dataset, model = workspace
        out = str(tmpdir.join("cross.ckpt"))
        report = str(tmpdir.join("report.csv"))
        assert cli.run(['train', '--data', dataset, '--out', out, '--target', 'contours',
                        '--snake-iterations', '50'] + TINY_MODEL) == 0
        assert checkpoint_load(out).meta['target'] == 'contours'
        assert cli.run(['evaluate', '--model', out, '--data', dataset, '--report', report,
                        '--snake-iterations', '50']) == 0
        assert list(ReportTable(report).df['predictor']) == ['ConvLSTM', 'contour-copy']
