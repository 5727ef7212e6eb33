#!/usr/bin/env python
# coding=utf-8

"""
zsspectrum main entry point, runs with python 3.
Please refer to the README.md for details.

This file contains a handler that forwards subcommands to the experiment engine.
"""

__license__ = "MIT"
__status__ = "Production"
__version__ = "${ZS_SPECTRUM_VERSION}"

import argparse
import logging
import sys
import traceback

from spectrum import ExperimentConfig
from spectrum.config import DEFAULT_CONFIG_FILE
from spectrum.experiment import Experiment

EXIT_SUCCESS = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERICAL_FAILURE = 2


class CommandHandler(object):

    def __init__(self, experiment):
        self.experiment = experiment
        self.commands = self.experiment.commands()

    def handle_command(self, command):
        """
        Forwards a subcommand to the experiment engine using the commands dict for the mapping.

        :param command: Subcommand name.
        :return: The exit code.
        """
        if command not in self.commands:
            print("Unknown command: " + command)
            return EXIT_CONFIG_ERROR

        (command_func, desc) = self.commands[command]
        try:
            (status, out) = command_func()
        except Exception:
            print("Exception occurred while running '" + command + "'")
            traceback.print_exc()
            return EXIT_NUMERICAL_FAILURE

        print(out)
        return EXIT_SUCCESS if status else EXIT_NUMERICAL_FAILURE


def parse_args(argv):
    parser = argparse.ArgumentParser(prog="zsspectrum",
                                     description="Semiclassical Zakharov-Shabat eigenvalues: WKB quantization "
                                                 "against a direct Wronskian solver.")
    parser.add_argument("command", choices=["validate", "wkb", "direct", "compare", "pt-sweep", "stokes"])
    parser.add_argument("--config", default=DEFAULT_CONFIG_FILE, help="YAML or JSON experiment config")
    parser.add_argument("--out", default=None, help="output directory, overrides output_dir of the config")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for sweep cells")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        config = ExperimentConfig(args.config)
    except (IOError, KeyError, ValueError) as e:
        print("Invalid config '" + args.config + "': " + str(e))
        return EXIT_CONFIG_ERROR

    handler = CommandHandler(Experiment(config, max(1, args.jobs), args.out))
    return handler.handle_command(args.command)


if __name__ == "__main__":
    sys.exit(main())
