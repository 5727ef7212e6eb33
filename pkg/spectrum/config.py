#!/usr/bin/env python
# coding=utf-8

import hashlib
import json
import os.path

import yaml

from .potential import DEFAULT_CUTOFF, PotentialSpec
from .problem import DEFAULT_TOLERANCES, Problem

DEFAULT_CONFIG_FILE = "experiment-config.yml"
DEFAULT_OUTPUT_DIR = "out"


class ExperimentConfig(object):

    def __init__(self, config=DEFAULT_CONFIG_FILE, root_path=None, data=None):
        self.root_path = root_path

        if data is None:
            with open(config, 'r') as stream:
                data = yaml.safe_load(stream)

        if data is None or not isinstance(data, dict):
            raise IOError("invalid config file format")

        self.conf = data
        self.validate_mandatory_fields()
        self.validate_invariants()

    def validate_mandatory_fields(self):
        if self.section('potential') is None or "family" not in self.section('potential'):
            raise KeyError("missing config key: potential.family")

        for key in ("lambda0", "delta", "h_list", "eps_list"):
            if self.conf.get(key) is None:
                raise KeyError("missing config key: " + key)

    def validate_invariants(self):
        h_list = self.h_list()
        eps_list = self.eps_list()

        if not h_list or any(h <= 0 for h in h_list):
            raise ValueError("h_list must be nonempty and positive")
        if h_list != sorted(h_list, reverse=True):
            raise ValueError("h_list must be sorted descending")
        if not eps_list or any(e < 0 for e in eps_list):
            raise ValueError("eps_list must be nonempty and non-negative")
        if eps_list != sorted(eps_list, reverse=True):
            raise ValueError("eps_list must be sorted descending")
        if self.delta() <= 0 or self.lambda0() <= 0:
            raise ValueError("lambda0 and delta must be positive")
        if self.cutoff() <= 0:
            raise ValueError("cutoff must be positive")

        for name, value in self.tolerances().items():
            if name not in DEFAULT_TOLERANCES:
                raise KeyError("unknown tolerance: tolerances." + name)
            if value <= 0:
                raise ValueError("tolerance " + name + " must be positive")

        self.potential()

    def section(self, key):
        if key in self.conf and self.conf[key] is not None:
            return self.conf[key]
        return None

    def potential(self):
        return PotentialSpec.from_dict(self.conf['potential'])

    def lambda0(self):
        return float(self.conf['lambda0'])

    def delta(self):
        return float(self.conf['delta'])

    def h_list(self):
        return [float(h) for h in self.conf['h_list']]

    def eps_list(self):
        return [float(e) for e in self.conf['eps_list']]

    def cutoff(self):
        if self.section('cutoff') is not None:
            return float(self.conf['cutoff'])
        return DEFAULT_CUTOFF

    def window_height(self):
        if self.section('window_height') is not None:
            return float(self.conf['window_height'])
        return None

    def tolerances(self):
        if self.section('tolerances') is not None:
            return dict((k, float(v)) for k, v in self.conf['tolerances'].items())
        return {}

    def output_dir(self):
        output_dir = self.conf.get('output_dir') or DEFAULT_OUTPUT_DIR
        if self.root_path is not None:
            output_dir = os.path.join(self.root_path, output_dir)
        return output_dir

    def seed_metadata(self):
        if self.section('seed_metadata') is not None:
            return str(self.conf['seed_metadata'])
        return ""

    def stokes_lambda(self):
        stokes = self.section('stokes')
        if stokes is not None and stokes.get('lambda') is not None:
            value = stokes['lambda']
            if isinstance(value, list):
                return complex(float(value[0]), float(value[1]))
            return complex(float(value))
        return complex(self.lambda0())

    def stokes_eps(self):
        stokes = self.section('stokes')
        if stokes is not None and stokes.get('eps') is not None:
            return float(stokes['eps'])
        return min(self.eps_list())

    def to_dict(self):
        """
        Canonical form of the config, with defaults filled in.
        """
        lam = self.stokes_lambda()
        return {"potential": self.potential().to_dict(), "lambda0": self.lambda0(), "delta": self.delta(),
                "h_list": self.h_list(), "eps_list": self.eps_list(), "cutoff": self.cutoff(),
                "window_height": self.window_height(), "tolerances": self.tolerances(),
                "output_dir": self.conf.get('output_dir') or DEFAULT_OUTPUT_DIR,
                "seed_metadata": self.seed_metadata(),
                "stokes": {"lambda": [lam.real, lam.imag], "eps": self.stokes_eps()}}

    def config_hash(self):
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def problem(self, h, eps):
        return Problem(self.potential(), eps, h, self.lambda0(), self.delta(), cutoff=self.cutoff(),
                       window_height=self.window_height(), tolerances=self.tolerances())
