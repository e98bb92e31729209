# TongueMotion: cli.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.
"""
:mod:`tonguemotion.cli` -- The ``tonguemotion`` command
=======================================================

Subcommands::

   tonguemotion synth    --out DIR [--videos N --frames N --seed S ...]
   tonguemotion train    --data DIR --out MODEL.ckpt [--offset K --target contours ...]
   tonguemotion predict  --model MODEL.ckpt --data DIR --out DIR [--split test]
   tonguemotion evaluate [--model MODEL.ckpt] --data DIR --report REPORT.csv [--frames-out DIR]
   tonguemotion contour  --data DIR --out DIR [--snake-alpha A ...]

Every field of :class:`~tonguemotion.training.TrainConfig`,
:class:`~tonguemotion.contours.SnakeParams` (prefixed ``--snake-``),
:class:`~tonguemotion.evaluation.CwSsimConfig` (prefixed ``--cwssim-``)
and :class:`~tonguemotion.data.SynthParams` is available as a flag of the
subcommands that use it. Values are taken, in increasing order of
precedence, from the global configuration file (:mod:`tonguemotion.config`),
from the ``key = value`` run file given with ``--config`` (keys are the
flag names without leading dashes and with ``_`` for ``-``, e.g.
``snake_alpha = 0.2``) and from the flags.

Exit codes: 0 on success, 2 for usage errors (unknown flags, bad values,
missing input paths), 1 if the run itself fails. Failures print a single
``tonguemotion: error: ...`` line.

.. autofunction:: run
.. autofunction:: main
.. autodata:: OPTIONS
"""
from __future__ import absolute_import, print_function

import os
import sys
import argparse
from collections import OrderedDict as odict

import numpy

from . import config, data, training, evaluation, contours, log, utilities
from .exceptions import TongueMotionError, ParseError
from .fileformats import KeyValueFile, ContourFile, PGM
from .version import get_version

import logging
logger = logging.getLogger('tonguemotion.cli')


class UsageError(Exception):
    """Bad command line; reported with exit code 2."""


#: Parameter groups: (parameter class, key prefix, subcommands using it).
GROUPS = (
    (training.TrainConfig, '', ('train', 'predict', 'evaluate')),
    (contours.SnakeParams, 'snake_', ('train', 'evaluate', 'contour')),
    (evaluation.CwSsimConfig, 'cwssim_', ('evaluate',)),
    (data.SynthParams, '', ('synth',)),
)

HELP = {
    'lr': "Adam learning rate",
    'batch': "mini-batch size",
    'epochs': "number of training epochs",
    'seed': "seed of all random numbers (initialization, shuffling, data split, synthetic data)",
    'offset': "predict frame 8+OFFSET: 1 (9th), 2 (10th) or 3 (11th)",
    'precision': "32 or 64 bit floats (64 for gradient-check grade numerics)",
    'jobs': "threads; 1 gives bit-reproducible runs",
    'hidden': "hidden channels per ConvLSTM layer, e.g. '8 8 8'",
    'kernel': "odd convolution kernel size",
    'height': "frame height after resizing",
    'width': "frame width after resizing",
    'window': "number of input frames",
    'test_fraction': "fraction of the videos held out for testing",
    'target': "'frames' or 'contours' (predict the rasterized tongue contour)",
    'videos': "number of synthetic videos",
    'frames': "frames per synthetic video",
}

#: Command line options that are not parameter fields: (flag, subcommands, argparse keywords).
OPTIONS = (
    ('--config', 'all', dict(metavar="FILE", help="key = value run file; overrides the global configuration")),
    ('--logfile', 'all', dict(metavar="FILE", help="also log (at DEBUG level) to FILE")),
    ('--seed', 'all', dict(help=HELP['seed'])),
    ('--precision', 'all', dict(choices=['32', '64'], help=HELP['precision'])),
    ('--jobs', 'all', dict(help=HELP['jobs'])),
    ('--out', ('synth',), dict(required=True, metavar="DIR", help="output dataset directory")),
    ('--out', ('train',), dict(required=True, metavar="MODEL", help="output checkpoint file")),
    ('--out', ('predict',), dict(required=True, metavar="DIR", help="directory for predicted PGM frames")),
    ('--out', ('contour',), dict(required=True, metavar="DIR",
                                 help="directory for contour files and rasterized contour frames")),
    ('--data', ('train', 'predict', 'evaluate', 'contour'), dict(required=True, metavar="DIR",
                                                              help="dataset directory")),
    ('--model', ('predict',), dict(required=True, metavar="MODEL", help="trained checkpoint")),
    ('--model', ('evaluate',), dict(metavar="MODEL", help="trained checkpoint; baselines only if omitted")),
    ('--losses', ('train',), dict(metavar="CSV", help="loss curves (default: MODEL with .losses.csv)")),
    ('--loss-plot', ('train',), dict(metavar="FILE", help="plot the loss curves (needs matplotlib)")),
    ('--report', ('evaluate',), dict(required=True, metavar="CSV", help="report file")),
    ('--frames-out', ('evaluate',), dict(metavar="DIR", help="also write every predictor's frames as PGM")),
    ('--split', ('predict', 'evaluate'), dict(choices=['train', 'test', 'all'],
                                              help="which videos to use [test]")),
)

COMMANDS = odict([
    ('synth', "generate a synthetic tongue video dataset"),
    ('train', "train a ConvLSTM frame predictor"),
    ('predict', "write predicted frames of a trained model"),
    ('evaluate', "score a model and the baselines (MSE, CW-SSIM)"),
    ('contour', "track tongue contours through a dataset"),
])

def _flag(key):
    return '--' + key.replace('_', '-')

def _keys(command):
    """Ordered dict key -> (parameter class, field) of the parameter flags of *command*."""
    keys = odict()
    for cls, prefix, commands in GROUPS:
        if command not in commands:
            continue
        for name, converter, default in cls.schema:
            keys.setdefault(prefix + name, []).append((cls, name))
    return keys

def build_parser():
    """The :class:`argparse.ArgumentParser` with all subcommands."""
    parser = argparse.ArgumentParser(
        prog="tonguemotion", description="ConvLSTM prediction of ultrasound tongue video frames")
    parser.add_argument('--version', action='version', version="%(prog)s " + get_version())
    subparsers = parser.add_subparsers(dest='command', metavar="COMMAND")
    subparsers.required = True
    for command, description in COMMANDS.items():
        sub = subparsers.add_parser(command, help=description, description=description,
                                    argument_default=argparse.SUPPRESS)
        seen = set()
        for flag, commands, kwargs in OPTIONS:
            if commands == 'all' or command in commands:
                sub.add_argument(flag, **kwargs)
                seen.add(flag)
        for key, fields in _keys(command).items():
            flag = _flag(key)
            if flag in seen:
                continue
            cls, name = fields[0]
            converter = cls.converters()[name]
            kwargs = dict(help=HELP.get(key, "{0} {1}".format(cls.__name__, name)))
            if converter in (utilities.intlist, utilities.floatlist):
                kwargs['nargs'] = '+'
            elif name == 'offset':
                kwargs['choices'] = ['1', '2', '3']
            elif name == 'target':
                kwargs['choices'] = ['frames', 'contours']
            sub.add_argument(flag, dest=key, **kwargs)
            seen.add(flag)
    return parser

def _values(args, command):
    """Merge the run file and the flags into a flat dict of raw values."""
    flags = dict((k.replace('-', '_'), v) for k, v in vars(args).items() if k != 'command')
    values = {}
    if 'config' in flags:
        if not os.path.isfile(flags['config']):
            raise UsageError("--config: no such file {0!r}".format(flags['config']))
        known = set(_keys(command)) | set(flag[2:].replace('-', '_') for flag, commands, kw in OPTIONS
                                          if commands == 'all' or command in commands)
        known.discard('config')
        try:
            runfile = KeyValueFile(flags['config'], autoconvert=False)
            runfile.check_keys(known)
        except ParseError as err:
            raise UsageError(str(err))
        values.update(runfile)
    values.update(flags)
    for key, value in values.items():
        if isinstance(value, list):
            values[key] = " ".join(value)
    return values

def _params(values, command, cls, **overrides):
    prefix = [p for c, p, cmds in GROUPS if c is cls][0]
    kwargs = dict((name, values[prefix + name]) for name, c, d in cls.schema if prefix + name in values)
    kwargs.update(overrides)
    try:
        return cls.from_config(config.cfg, **kwargs).validate()
    except (KeyError, ValueError) as err:
        raise UsageError(str(err).strip('"'))

def _require_dir(values, key):
    path = values[key]
    if not os.path.isdir(path):
        raise UsageError("--{0}: no such directory {1!r}".format(key.replace('_', '-'), path))
    return path

def _require_file(values, key):
    path = values[key]
    if not os.path.isfile(path):
        raise UsageError("--{0}: no such file {1!r}".format(key.replace('_', '-'), path))
    return path

def _writable(path, flag):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise UsageError("{0}: directory {1!r} does not exist".format(flag, parent))
    return path

def _select(videos, split, seed, test_fraction):
    if split == 'all':
        return videos
    train_names, test_names = data.split_videos(list(videos), test_fraction, seed=seed)
    names = train_names if split == 'train' else test_names
    return odict((n, videos[n]) for n in names)

def _windows(videos, offset, window, target, snake, jobs):
    targets = None
    if target == 'contours':
        targets = contours.dataset_targets(videos, params=snake, jobs=jobs)[1]
    return data.dataset_windows(videos, offset, window=window, targets=targets)

def do_synth(values):
    params = _params(values, 'synth', data.SynthParams)
    _writable(values['out'], "--out")
    data.synth_generate(values['out'], params)

def do_train(values):
    cfg = _params(values, 'train', training.TrainConfig)
    snake = _params(values, 'train', contours.SnakeParams)
    datadir = _require_dir(values, 'data')
    out = _writable(values['out'], "--out")
    losses = values.get('losses', os.path.splitext(out)[0] + ".losses.csv")
    _writable(losses, "--losses")
    if 'loss_plot' in values:
        _writable(values['loss_plot'], "--loss-plot")

    videos = data.load_dataset(datadir, height=cfg.height, width=cfg.width)
    train_names, test_names = data.split_videos(list(videos), cfg.test_fraction, seed=cfg.seed)
    train_set = _windows(odict((n, videos[n]) for n in train_names), cfg.offset, cfg.window,
                         cfg.target, snake, cfg.jobs)
    test_set = _windows(odict((n, videos[n]) for n in test_names), cfg.offset, cfg.window,
                        cfg.target, snake, cfg.jobs)
    model, curves = training.train(cfg, train_set, test_set, losses=losses)
    model.meta['seed'] = str(cfg.seed)
    model.meta['test_fraction'] = str(cfg.test_fraction)
    training.checkpoint_save(model, out)
    if 'loss_plot' in values:
        curves.plot(values['loss_plot'])

def _load_model(values):
    model = training.checkpoint_load(_require_file(values, 'model'))
    if 'precision' in values:
        model = model.astype(numpy.dtype('float{0}'.format(values['precision'])))
    # the split of the training run unless overridden
    for key in ('seed', 'test_fraction'):
        if key not in values and key in model.meta:
            values[key] = model.meta[key]
    return model

def do_predict(values):
    datadir = _require_dir(values, 'data')
    model = _load_model(values)
    cfg = _params(values, 'predict', training.TrainConfig, **dict(model.arch))
    videos = data.load_dataset(datadir, height=cfg.height, width=cfg.width)
    videos = _select(videos, values.get('split', 'test'), cfg.seed, cfg.test_fraction)
    windows = data.dataset_windows(videos, cfg.offset, window=cfg.window)
    predictor = evaluation.ModelPredictor(model, batch=cfg.batch)
    evaluation.write_frames(values['out'], predictor.predict_batch(windows), windows)

def do_evaluate(values):
    datadir = _require_dir(values, 'data')
    _writable(values['report'], "--report")
    model = _load_model(values) if 'model' in values else None
    arch = dict(model.arch) if model is not None else {}
    cfg = _params(values, 'evaluate', training.TrainConfig, **arch)
    snake = _params(values, 'evaluate', contours.SnakeParams)
    cwssim = _params(values, 'evaluate', evaluation.CwSsimConfig)
    target = model.meta.get('target', cfg.target) if model is not None else cfg.target

    videos = data.load_dataset(datadir, height=cfg.height, width=cfg.width)
    videos = _select(videos, values.get('split', 'test'), cfg.seed, cfg.test_fraction)
    windows = _windows(videos, cfg.offset, cfg.window, target, snake, cfg.jobs)
    predictors = odict()
    if model is not None:
        predictors['ConvLSTM'] = evaluation.ModelPredictor(model, batch=cfg.batch)
    if target == 'contours':
        predictors['contour-copy'] = evaluation.registry['contour-copy']
    else:
        predictors['average'] = evaluation.registry['average']
        predictors['copy-8th'] = evaluation.registry['copy-8th']
    evaluation.evaluate(predictors, windows, cfg.offset, cwssim, report=values['report'],
                        frames_out=values.get('frames_out'))

def do_contour(values):
    datadir = _require_dir(values, 'data')
    snake = _params(values, 'contour', contours.SnakeParams)
    jobs = int(values.get('jobs', config.cfg.get('Training', 'jobs')))
    out = values['out']
    _writable(out, "--out")
    videos = data.load_dataset(datadir)
    tracked, targets = contours.dataset_targets(videos, params=snake, jobs=jobs)
    for name in videos:
        outdir = os.path.join(out, name)
        utilities.mkdir_p(outdir)
        for t, (contour, target) in enumerate(zip(tracked[name], targets[name])):
            ContourFile(points=contour).write(os.path.join(outdir, "frame_{0:06d}.txt".format(t)))
            PGM.from_frame(target).write(os.path.join(outdir, "frame_{0:06d}.pgm".format(t)))
        curves = data.load_curves(os.path.join(datadir, name))
        if curves is not None and curves.shape == (len(videos[name]), videos[name][0].shape[-1]):
            error = numpy.mean([contours.curve_distance(c, y) for c, y in zip(tracked[name], curves)])
            logger.info("%s: mean distance to the true surface %.3f px", name, error)
    with utilities.atomic_write(os.path.join(out, data.MANIFEST)) as manifest:
        for name in videos:
            manifest.write("{0} {1:d}\n".format(name, len(videos[name])))
    logger.info("wrote contours of %d videos to %r", len(videos), out)

DISPATCH = {
    'synth': do_synth,
    'train': do_train,
    'predict': do_predict,
    'evaluate': do_evaluate,
    'contour': do_contour,
}

def run(argv=None):
    """Run the command line *argv* (without the program name).

    :Returns: exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code
    command = args.command
    subparser_prog = "tonguemotion " + command
    top = logging.getLogger('tonguemotion')
    log.create('tonguemotion', logfile=getattr(args, 'logfile', None),
               loglevel_console=config.loglevel_console, loglevel_file=config.loglevel_file)
    try:
        values = _values(args, command)
        DISPATCH[command](values)
    except UsageError as err:
        print("{0}: error: {1}".format(subparser_prog, err), file=sys.stderr)
        return 2
    except (TongueMotionError, IOError, OSError, ValueError, ArithmeticError) as err:
        logger.debug("%s failed", command, exc_info=True)
        print("tonguemotion: error: {0}".format(err), file=sys.stderr)
        return 1
    finally:
        log.clear_handlers(top)
    return 0

def main():
    """Entry point of the ``tonguemotion`` script."""
    sys.exit(run(sys.argv[1:]))

if __name__ == "__main__":
    main()
