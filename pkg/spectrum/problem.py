#!/usr/bin/env python
# coding=utf-8

"""
The numerical problem shared by every solver: potential, perturbation, semiclassical
parameter, spectral window, domain cutoffs and tolerances.
"""

import copy

import numpy as np

from .potential import DEFAULT_CUTOFF, classify_symmetry, real_a, validate_A1
from .quantize import select_branch

DEFAULT_QUAD_NODES = 32

CUTOFF_PADDING = 2.0  # added beyond the point where half the asymptotic margin is reached

DEFAULT_TOLERANCES = {
    "symmetry": 1e-12,
    "root": 1e-12,
    "newton_step": 1e-14,
    "collision": 1e-6,
    "quadrature": 1e-12,
    "quantization": 1e-12,
    "ode_rtol": 1e-10,
    "ode_atol": 1e-13,
    "bracket": 1e-12,
    "boundary_zero": 1e-8,
    "distinct": 1e-9,
    "fd_step": 1e-7,
    "decay_margin": 1e-8,
    "degeneracy": 1e-8,
}


class Problem(object):

    def __init__(self, spec, eps, h, lambda0, delta, cutoff=DEFAULT_CUTOFF, window_height=None,
                 x_left=None, x_right=None, matching_point=None, matching_shift=0.0, cutoff_scale=1.0,
                 quad_nodes=DEFAULT_QUAD_NODES, tolerances=None):
        if eps < 0:
            raise ValueError("eps must be non-negative")
        if h <= 0 or delta <= 0 or lambda0 <= 0:
            raise ValueError("h, delta and lambda0 must be positive")

        self.spec = spec
        self.eps = float(eps)
        self.h = float(h)
        self.lambda0 = float(lambda0)
        self.delta = float(delta)
        self.cutoff = float(cutoff)
        self.window_height = float(window_height) if window_height is not None else 0.5 * self.delta
        self.explicit_x_left = x_left
        self.explicit_x_right = x_right
        self.explicit_matching_point = matching_point
        self.matching_shift = float(matching_shift)
        self.cutoff_scale = float(cutoff_scale)
        self.quad_nodes = int(quad_nodes)

        self.tolerances = dict(DEFAULT_TOLERANCES)
        if tolerances:
            self.tolerances.update(tolerances)

        self._a1_report = None
        self._symmetry = None

    def __str__(self):
        return "Problem[eps=" + repr(self.eps) + ", h=" + repr(self.h) + ", window=" + \
               repr(self.lambda0) + "+-" + repr(self.delta) + "]"

    def copy(self, **overrides):
        other = copy.copy(self)
        other.tolerances = dict(self.tolerances)
        for key, value in overrides.items():
            if key in ("x_left", "x_right", "matching_point"):
                key = "explicit_" + key
            if not hasattr(other, key):
                raise AttributeError("unknown problem field: " + key)
            setattr(other, key, value)

        if "spec" in overrides or "lambda0" in overrides or "cutoff" in overrides:
            other._a1_report = None
            other._symmetry = None
        return other

    def tol(self, name):
        return self.tolerances[name]

    @property
    def a1_report(self):
        if self._a1_report is None:
            self._a1_report = validate_A1(self.spec, self.lambda0, self.cutoff)
        return self._a1_report

    @property
    def symmetry(self):
        if self._symmetry is None:
            self._symmetry = classify_symmetry(self.spec, self.cutoff, self.tol("symmetry"))
        return self._symmetry

    @property
    def branch(self):
        return select_branch(self.a1_report)

    @property
    def x_left(self):
        if self.explicit_x_left is not None:
            return float(self.explicit_x_left)
        return default_cutoffs(self)[0]

    @property
    def x_right(self):
        if self.explicit_x_right is not None:
            return float(self.explicit_x_right)
        return default_cutoffs(self)[1]

    @property
    def matching_point(self):
        if self.explicit_matching_point is not None:
            return float(self.explicit_matching_point) + self.matching_shift
        report = self.a1_report
        return 0.5 * (report.alpha0 + report.beta0) + self.matching_shift

    @property
    def window(self):
        return self.lambda0 - self.delta, self.lambda0 + self.delta

    @property
    def rectangle(self):
        lo, hi = self.window
        return complex(lo, -self.window_height), complex(hi, self.window_height)

    def in_window(self, lam):
        return abs(lam - self.lambda0) <= self.delta


def default_cutoffs(problem):
    """
    Domain cutoffs: the first point beyond each turning point where |A| - lambda0 exceeds
    half of the margin measured at the sampling cutoff, padded by CUTOFF_PADDING.

    :return: A tuple (x_left, x_right) clamped to [-cutoff, cutoff].
    """
    report = problem.a1_report
    cutoff = problem.cutoff

    left = np.linspace(report.alpha0, -cutoff, 2001)
    right = np.linspace(report.beta0, cutoff, 2001)

    left_gap = np.abs(real_a(problem.spec, left)) - problem.lambda0
    right_gap = np.abs(real_a(problem.spec, right)) - problem.lambda0

    x_left = left[np.argmax(left_gap >= 0.5 * report.margins[0])] - CUTOFF_PADDING
    x_right = right[np.argmax(right_gap >= 0.5 * report.margins[1])] + CUTOFF_PADDING

    x_left = max(problem.cutoff_scale * x_left, -cutoff)
    x_right = min(problem.cutoff_scale * x_right, cutoff)
    return float(x_left), float(x_right)
