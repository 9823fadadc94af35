#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Main-program, runs the experiment a configuration file describes
'''

import argparse
import logging
import sys

from perstd import internals
from perstd import experiments

def parser():
    ''' Command line '''
    ap = argparse.ArgumentParser(
        prog="perstd",
        description="Personalized coupled tensor decomposition",
    )
    ap.add_argument("command", choices=sorted(experiments.COMMANDS) + ["sample"])
    ap.add_argument("name", nargs="?", help="sample to print (sample command only)")
    ap.add_argument("--config", help="experiment configuration file")
    ap.add_argument("--seed", type=int, help="override Experiment.Seed")
    ap.add_argument("--out", help="override Experiment.Output")
    ap.add_argument("--runs", type=int, help="override Experiment.Runs")
    ap.add_argument("--restarts", type=int, help="override Solver.Restarts")
    ap.add_argument("--jobs", type=int, help="override Experiment.Jobs")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    return ap

def report(filename, err, mentioned):
    ''' Print one complaint the way the validators do '''
    if not mentioned:
        print(filename, "=>", err.kind, file=sys.stderr)
    print("    " + str(err.text), file=sys.stderr)
    if err.where:
        print("\t" + str(err.where), file=sys.stderr)
    if err.line:
        print("\t⎣" + err.line + "⎤", file=sys.stderr)

def load_config(args):
    ''' Parse and validate, None after printing the litany '''
    try:
        cfg = internals.ExperimentConfig(filename=args.config)
    except OSError as err:
        print(args.config, "=>", err.strerror, file=sys.stderr)
        return None
    except internals.PerstdError as err:
        report(args.config, err, False)
        return None
    cfg.override(
        seed=args.seed,
        out=args.out,
        runs=args.runs,
        restarts=args.restarts,
        jobs=args.jobs,
    )
    mentioned = False
    for err in cfg.litany():
        report(args.config, err, mentioned)
        mentioned = True
    if cfg.mode != args.command:
        report(args.config, internals.ConfigSemanticError(
            "Configuration is for mode %s, not %s" % (cfg.mode, args.command)
        ), mentioned)
        mentioned = True
    for key in ("runs", "restarts", "jobs"):
        if key in cfg.overrides and cfg.overrides[key] < 1:
            report(args.config, internals.ConfigSemanticError(
                "--%s must be at least 1" % key
            ), mentioned)
            mentioned = True
    if mentioned:
        return None
    return cfg

def main(argv=None):
    ''' Entry point, returns the exit status '''
    args = parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
    )

    if args.command == "sample":
        try:
            if args.name is None:
                for name in experiments.list_samples():
                    print(name)
            else:
                sys.stdout.write(experiments.sample_text(args.name))
        except internals.PerstdError as err:
            report("sample", err, False)
            return experiments.EXIT_ERROR
        return experiments.EXIT_OK

    if args.config is None:
        print("perstd:", args.command, "needs --config", file=sys.stderr)
        return experiments.EXIT_ERROR
    cfg = load_config(args)
    if cfg is None:
        return experiments.EXIT_ERROR
    try:
        return experiments.COMMANDS[args.command](cfg)
    except internals.PerstdError as err:
        report(args.config, err, False)
        return experiments.EXIT_ERROR

def main_exit():
    ''' Console script entry point '''
    sys.exit(main())

if __name__ == "__main__":
    main_exit()
