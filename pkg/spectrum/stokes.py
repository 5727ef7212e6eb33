#!/usr/bin/env python
# coding=utf-8

"""
Stokes geometry: the level curves Re z(x; tp) = 0 of the WKB phase
z(x; tp) = int_tp^x sqrt(A_eps(t)^2 - lambda^2) dt leaving each turning point.
"""

import cmath
import json
import logging
import math

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DegenerateTurningPoint, SpectrumError, StepFailure
from .potential import eval_scalar
from .turning import find_turning_points

logger = logging.getLogger(__name__)

STRIP_BOUNDARY = "strip-boundary"
MAX_LENGTH = "max-length"
NEAR_TURNING_POINT = "near-turning-point"
STEP_FAILURE = "step-failure"

TERMINATIONS = (STRIP_BOUNDARY, MAX_LENGTH, NEAR_TURNING_POINT, STEP_FAILURE)

STEP = 1e-3
PROJECTION_EVERY = 10
PROJECTION_TRIGGER = 0.1  # fraction of LEVEL_TOLERANCE
PROJECTION_ATTEMPTS = 3
LEVEL_TOLERANCE = 1e-6
ARC_LENGTH_LIMIT = 20.0
START_DISTANCE = 1e-2
START_PROJECTIONS = 3
NEAR_DISTANCE = 1e-3
PHASE_GAUSS_NODES = 16
PHASE_MAGNITUDE_LIMIT = 1e8  # beyond this roundoff in Re z exceeds the level-set tolerance


class StokesCurve(object):

    def __init__(self, origin_index, initial_angle, points, termination, max_level_error=0.0):
        self.origin_index = origin_index
        self.initial_angle = initial_angle
        self.points = list(points)
        self.termination = termination
        self.max_level_error = max_level_error

    def __str__(self):
        return "StokesCurve[" + str(self.origin_index) + " @ " + repr(self.initial_angle) + "] " + \
               str(len(self.points)) + " points, " + self.termination

    @property
    def end(self):
        return self.points[-1]

    def to_dict(self):
        return {"origin": self.origin_index, "angle": self.initial_angle,
                "points": [[z.real, z.imag] for z in self.points], "termination": self.termination,
                "max_level_error": self.max_level_error}

    @staticmethod
    def from_dict(data):
        return StokesCurve(data["origin"], data["angle"], [complex(re, im) for re, im in data["points"]],
                           data["termination"], data.get("max_level_error", 0.0))


class StokesGraph(object):

    def __init__(self, turning_points, curves, lam=None, eps=None, failures=None):
        self.turning_points = list(turning_points)
        self.curves = list(curves)
        self.lam = lam
        self.eps = eps
        self.failures = list(failures or [])

    def __str__(self):
        return "StokesGraph[" + str(len(self.turning_points)) + " turning points, " + \
               str(len(self.curves)) + " curves]"

    def curves_from(self, origin_index):
        return [c for c in self.curves if c.origin_index == origin_index]

    def connecting_curves(self):
        return [c for c in self.curves if c.termination == NEAR_TURNING_POINT]

    def to_dict(self):
        out = {"turning_points": [[z.real, z.imag] for z in self.turning_points],
               "curves": [c.to_dict() for c in self.curves], "failures": self.failures}
        if self.lam is not None:
            out["lambda"] = [self.lam.real, self.lam.imag]
            out["eps"] = self.eps
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(data):
        lam = complex(*data["lambda"]) if "lambda" in data else None
        return StokesGraph([complex(re, im) for re, im in data["turning_points"]],
                           [StokesCurve.from_dict(c) for c in data["curves"]],
                           lam, data.get("eps"), data.get("failures"))


def root(problem, lam, z, reference=None):
    """
    sqrt(A_eps(z)^2 - lambda^2), on the sign closest to reference when one is given.
    """
    a, _ = eval_scalar(problem.spec, z, problem.eps)
    r = cmath.sqrt(a * a - lam * lam)
    if reference is not None and (r * reference.conjugate()).real < 0:
        r = -r
    return r


def stokes_directions(problem, lam, tp):
    """
    The three directions where the local model sqrt(f'(tp) (z - tp)) dz is purely imaginary.

    :return: Sorted angles in [0, 2 pi).
    """
    lam = complex(lam)
    a, da = eval_scalar(problem.spec, tp, problem.eps)
    slope = 2.0 * a * da
    if abs(slope) < problem.tol("degeneracy"):
        raise DegenerateTurningPoint("f'(tp) vanishes at " + str(tp))

    angles = []
    for j in range(3):
        angle = ((math.pi - cmath.phase(slope) + 2.0 * math.pi * j) / 3.0) % (2.0 * math.pi)
        if angle > 2.0 * math.pi - 1e-12:
            angle = 0.0
        angles.append(angle)
    return sorted(angles)


def phase_integral(problem, lam, tp, z, reference_root=None):
    """
    z(x; tp) along the straight segment tp -> z with t = tp + (z - tp) u^2, which removes
    the square-root singularity at the turning point. The branch is continued from z,
    where it matches reference_root if given.
    """
    lam = complex(lam)
    nodes, weights = leggauss(PHASE_GAUSS_NODES)
    u = 0.5 * (nodes + 1.0)
    chord = complex(z) - tp

    current = reference_root
    total = 0j
    for ui, wi in sorted(zip(u, weights), reverse=True):
        current = root(problem, lam, tp + chord * ui * ui, current)
        total += 0.5 * wi * current * 2.0 * chord * ui
    return total


def _simpson(problem, lam, start, end, start_root):
    middle_root = root(problem, lam, 0.5 * (start + end), start_root)
    end_root = root(problem, lam, end, middle_root)
    return (end - start) / 6.0 * (start_root + 4.0 * middle_root + end_root), end_root


def _direction(problem, lam, z, reference, sigma):
    r = root(problem, lam, z, reference)
    if r == 0 or not cmath.isfinite(r):
        raise StepFailure("singular direction field at " + str(z))
    return 1j * sigma * r.conjugate() / abs(r), r


def _project(problem, lam, z, r, phase):
    """
    One Newton step transverse to the curve restoring Re z(x; tp) = 0.
    """
    correction = -phase.real * r.conjugate() / abs(r) ** 2
    target = z + correction
    increment, target_root = _simpson(problem, lam, z, target, r)
    return target, target_root, phase + increment


def _restore_level(problem, lam, z, r, phase):
    """
    At most PROJECTION_ATTEMPTS Newton projections back onto Re z(x; tp) = 0, stopping once
    the drift is below the projection trigger or no longer shrinks.
    """
    for _ in range(PROJECTION_ATTEMPTS):
        if abs(phase.real) < PROJECTION_TRIGGER * LEVEL_TOLERANCE:
            break
        projected = _project(problem, lam, z, r, phase)
        if abs(projected[2].real) >= abs(phase.real):
            break
        z, r, phase = projected
    return z, r, phase


def trace_stokes_line(problem, lam, tp, angle, others=()):
    """
    Follows the Stokes line leaving tp at the given angle with arc-length RK4.

    Only points with |Re z(x; tp)| < LEVEL_TOLERANCE are kept. When the level can no
    longer be restored (phase past PHASE_MAGNITUDE_LIMIT, or stalled projections) the
    curve ends at its last kept point with termination strip-boundary.

    :param problem: The Problem.
    :param lam: Complex spectral parameter.
    :param tp: The origin turning point.
    :param angle: Emanation angle from stokes_directions.
    :param others: Turning points that end the curve when approached.
    :return: A StokesCurve (origin_index left at 0 for the caller to set).
    """
    lam = complex(lam)
    strip = problem.spec.strip_half_width

    z = tp + START_DISTANCE * cmath.exp(1j * angle)
    r = root(problem, lam, z)
    phase = phase_integral(problem, lam, tp, z, r)
    for _ in range(START_PROJECTIONS):
        z = z - phase.real * r.conjugate() / abs(r) ** 2
        r = root(problem, lam, z, r)
        phase = phase_integral(problem, lam, tp, z, r)

    base = 1j * r.conjugate() / abs(r)
    sigma = 1.0 if (base * cmath.exp(-1j * angle)).real >= 0 else -1.0

    points = [complex(tp), z]
    level_error = abs(phase.real)
    length = START_DISTANCE
    steps = 0
    termination = MAX_LENGTH

    try:
        while length < ARC_LENGTH_LIMIT:
            if abs(z.imag) + 2.0 * STEP >= strip:
                termination = STRIP_BOUNDARY
                break

            distance = min([abs(z - other) for other in others] or [math.inf])
            if distance < NEAR_DISTANCE:
                termination = NEAR_TURNING_POINT
                break

            ds = min(STEP, 0.25 * distance)
            k1, r1 = _direction(problem, lam, z, r, sigma)
            k2, r2 = _direction(problem, lam, z + 0.5 * ds * k1, r1, sigma)
            k3, r3 = _direction(problem, lam, z + 0.5 * ds * k2, r2, sigma)
            k4, _ = _direction(problem, lam, z + ds * k3, r3, sigma)
            following = z + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

            increment, following_root = _simpson(problem, lam, z, following, r)
            following_phase = phase + increment
            if not (cmath.isfinite(following) and cmath.isfinite(following_phase)):
                raise StepFailure("non-finite iterate")
            if abs(following_phase) > PHASE_MAGNITUDE_LIMIT:
                logger.debug("phase magnitude %.3g at %s, level no longer resolvable", abs(following_phase), following)
                termination = STRIP_BOUNDARY
                break

            candidate = following, following_root, following_phase
            steps += 1
            if steps % PROJECTION_EVERY == 0 or abs(following_phase.real) >= PROJECTION_TRIGGER * LEVEL_TOLERANCE:
                candidate = _restore_level(problem, lam, *candidate)
            if abs(candidate[2].real) >= LEVEL_TOLERANCE:
                logger.debug("level drift %.3g at %s cannot be restored", abs(candidate[2].real), candidate[0])
                termination = STRIP_BOUNDARY
                break

            z, r, phase = candidate
            length += ds
            level_error = max(level_error, abs(phase.real))
            if steps % PROJECTION_EVERY == 0:
                points.append(z)
    except SpectrumError as e:
        logger.debug("curve from %s at %.6f stopped: %s", tp, angle, e)
        termination = STEP_FAILURE

    if points[-1] != z:
        points.append(z)
    return StokesCurve(0, angle, points, termination, level_error)


def build_graph(problem, lam, pair=None):
    """
    Traces the three Stokes lines of both turning points; per-point failures are kept on
    the graph.

    :return: A StokesGraph.
    """
    lam = complex(lam)
    pair = pair or find_turning_points(problem, lam)
    turning_points = [pair.alpha, pair.beta]

    curves = []
    failures = []
    for index, tp in enumerate(turning_points):
        others = [p for i, p in enumerate(turning_points) if i != index]
        try:
            angles = stokes_directions(problem, lam, tp)
        except SpectrumError as e:
            failures.append("turning point " + str(index) + ": " + type(e).__name__ + ": " + str(e))
            continue

        for angle in angles:
            curve = trace_stokes_line(problem, lam, tp, angle, others)
            curve.origin_index = index
            curves.append(curve)

    graph = StokesGraph(turning_points, curves, lam, problem.eps, failures)
    logger.info("%s", graph)
    return graph
