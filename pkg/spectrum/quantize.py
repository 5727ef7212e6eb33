#!/usr/bin/env python
# coding=utf-8

"""
Bohr-Sommerfeld type quantization: I(lambda, eps) = (k + 1/2) pi h for a simple well,
I(lambda, eps) = k pi h for a monotonic potential.
"""

import logging
import math

from scipy.optimize import brentq

from .action import action_integral
from .errors import EmptyWindow, LeftWindow, NoConvergence, SpectrumError
from .potential import SIMPLE_WELL
from .turning import find_turning_points

logger = logging.getLogger(__name__)

HALF_INTEGER = "half-integer"
INTEGER = "integer"

WKB = "wkb"
DIRECT = "direct"

NEWTON_CAP = 50
RESIDUAL_LIMIT = 1e-10

FIELDS = ("re_lambda", "im_lambda", "k", "branch", "method", "residual", "h", "eps")


class EigenvalueRecord(object):

    def __init__(self, lam, k, branch, method, residual, h, eps):
        self.lam = complex(lam)
        self.k = k
        self.branch = branch
        self.method = method
        self.residual = residual
        self.h = h
        self.eps = eps

    def __str__(self):
        return "EigenvalueRecord[" + self.method + ", k=" + str(self.k) + "] lambda=" + str(self.lam)

    def __eq__(self, other):
        return isinstance(other, EigenvalueRecord) and self.to_row() == other.to_row()

    def __ne__(self, other):
        return not self.__eq__(other)

    def to_row(self):
        return [self.lam.real, self.lam.imag, self.k, self.branch, self.method, self.residual, self.h, self.eps]

    def to_dict(self):
        return dict(zip(FIELDS, self.to_row()))

    @staticmethod
    def from_row(row):
        values = dict(zip(FIELDS, row)) if not isinstance(row, dict) else row
        return EigenvalueRecord(complex(float(values["re_lambda"]), float(values["im_lambda"])),
                                int(values["k"]), values["branch"], values["method"],
                                float(values["residual"]), float(values["h"]), float(values["eps"]))


class Spectrum(object):
    """
    The eigenvalues found in one window, with the per-item failures of the batch and,
    for the direct solver, the winding number certifying completeness.
    """

    def __init__(self, records=None, failures=None, winding=None):
        self.records = sorted(records or [], key=lambda r: (r.lam.real, r.lam.imag))
        self.failures = list(failures or [])
        self.winding = winding

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, index):
        return self.records[index]

    @property
    def eigenvalues(self):
        return [r.lam for r in self.records]

    @property
    def complete(self):
        if self.winding is None:
            return not self.failures
        return self.winding == len(self.records)


def select_branch(report):
    if report.well_type == SIMPLE_WELL:
        return HALF_INTEGER
    return INTEGER


def branch_offset(branch):
    return 0.5 if branch == HALF_INTEGER else 0.0


def quantization_target(k, h, branch):
    return (k + branch_offset(branch)) * math.pi * h


def indices_in_range(i_lo, i_hi, h, branch):
    """
    :return: Every integer k whose quantized action lies in [i_lo, i_hi].
    """
    offset = branch_offset(branch)
    first = int(math.ceil(i_lo / (math.pi * h) - offset))
    last = int(math.floor(i_hi / (math.pi * h) - offset))
    return [k for k in range(first, last + 1) if i_lo <= quantization_target(k, h, branch) <= i_hi]


def action_range(problem):
    """
    Real action at the window edges for the unperturbed problem.
    """
    reference = problem.copy(eps=0.0)
    lo, hi = problem.window
    return action_integral(reference, lo).value.real, action_integral(reference, hi).value.real


def enumerate_indices(problem, i_range=None):
    i_lo, i_hi = i_range or action_range(problem)
    indices = indices_in_range(i_lo, i_hi, problem.h, problem.branch)
    if not indices:
        raise EmptyWindow("no quantized action in [" + repr(i_lo) + ", " + repr(i_hi) + "] for h=" +
                          repr(problem.h))
    return indices


def real_seed(problem, target, i_range=None):
    """
    Bisection on the monotone real action of the eps=0 problem.
    """
    reference = problem.copy(eps=0.0)
    lo, hi = problem.window
    i_lo, i_hi = i_range or action_range(problem)
    if not i_lo <= target <= i_hi:
        raise LeftWindow("quantized action " + repr(target) + " outside [" + repr(i_lo) + ", " + repr(i_hi) + "]")

    def miss(lam):
        return action_integral(reference, lam).value.real - target

    return brentq(miss, lo, hi, xtol=problem.tol("bracket"))


def solve_quantization(problem, k, i_range=None):
    """
    Newton iteration lambda <- lambda - (I - c_k pi h) / I' from the real eps=0 solution.

    :param problem: The Problem.
    :param k: Quantization index.
    :param i_range: Optional precomputed action range at the window edges.
    :return: An EigenvalueRecord with method wkb.
    """
    branch = problem.branch
    target = quantization_target(k, problem.h, branch)
    lam = complex(real_seed(problem, target, i_range))

    pair = None
    for _ in range(NEWTON_CAP):
        if pair is None:
            pair = find_turning_points(problem, lam)
        else:
            pair = find_turning_points(problem, lam, seed=pair)

        action = action_integral(problem, lam, pair)
        miss = action.value - target
        if abs(miss) < problem.tol("quantization"):
            return EigenvalueRecord(lam, k, branch, WKB, abs(miss), problem.h, problem.eps)

        step = miss / action.dvalue_dlambda
        lam = lam - step
        if not problem.in_window(lam):
            raise LeftWindow("Newton iterate " + str(lam) + " left the window")

        if abs(step) < problem.tol("newton_step"):
            pair = find_turning_points(problem, lam, seed=pair)
            miss = action_integral(problem, lam, pair).value - target
            if abs(miss) >= RESIDUAL_LIMIT:
                break
            return EigenvalueRecord(lam, k, branch, WKB, abs(miss), problem.h, problem.eps)

    raise NoConvergence("quantization Newton did not converge for k=" + str(k))


def wkb_spectrum(problem):
    """
    Solves the quantization condition for every index in the window. Per-index failures
    are collected on the returned Spectrum.
    """
    i_range = action_range(problem)
    failures = []
    records = []
    for k in enumerate_indices(problem, i_range):
        try:
            records.append(solve_quantization(problem, k, i_range))
        except SpectrumError as e:
            logger.warning("k=%d failed: %s", k, e)
            failures.append("k=" + str(k) + ": " + type(e).__name__ + ": " + str(e))

    logger.info("WKB spectrum: %d eigenvalues, %d failures (h=%r, eps=%r)",
                len(records), len(failures), problem.h, problem.eps)
    return Spectrum(records, failures)
