#!/usr/bin/env python
# coding=utf-8

"""
Reference eigenvalue solver.

The system h u' = M(x) u, M = [[-i lambda, A_eps], [A_eps, i lambda]] is shot from decaying
WKB data at both domain cutoffs to a matching point; eigenvalues are the zeros of the
Wronskian of the two solutions. Solutions are carried as (unit vector, log magnitude).
"""

import cmath
import logging
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .action import action_derivative
from .errors import (BoundaryZero, InsideWell, MissedZeros, NoConvergence, PhaseResolution, PhaseTrackingLost,
                     SpectrumError, StepUnderflow, SymmetryRequired)
from .potential import NO_SYMMETRY, eval_scalar
from .quantize import DIRECT, Spectrum, EigenvalueRecord

logger = logging.getLogger(__name__)

FROM_LEFT = "from-left"
FROM_RIGHT = "from-right"

ROTATION = cmath.exp(0.25j * math.pi)

GRID_STEP_FRACTION = 0.1  # of h
ALIGNMENT_FLOOR = 1e-3  # fraction of max |w| a sample needs to fix the reference phase
PHASE_STEP_LIMIT = 0.5 * math.pi

SAMPLES_PER_EDGE = 16
SAMPLES_PER_ZERO = 8
SAMPLING_DOUBLINGS_CAP = 16
REFINEMENT_CAP = 2 ** 16
WINDING_GUARD = 0.1
INFLATION = 0.01
INFLATION_ATTEMPTS = 3

NEWTON_CAP = 50
NEWTON_STEP = 1e-10
CONTINUATION_STEPS = 4
SEED_PADDING = 1.1  # the eps=0 seed scan covers the window widened by this factor


class BoundaryData(object):

    def __init__(self, x_cut, direction, seed_vector, log_scale):
        self.x_cut = x_cut
        self.direction = direction
        self.seed_vector = np.asarray(seed_vector, dtype=complex)
        self.log_scale = log_scale

    def __str__(self):
        return "BoundaryData[" + self.direction + " @ " + repr(self.x_cut) + "] " + str(self.seed_vector)


class WronskianSample(object):

    def __init__(self, lam, w_value, log_scale):
        self.lam = complex(lam)
        self.w_value = complex(w_value)
        self.log_scale = log_scale

    def __str__(self):
        return "W(" + str(self.lam) + ") = " + str(self.w_value) + " * exp(" + repr(self.log_scale) + ")"

    @property
    def log_magnitude(self):
        return math.log(abs(self.w_value)) + self.log_scale if self.w_value != 0 else -math.inf

    def ratio_to(self, other):
        """
        :return: W(self) / W(other) without forming either full value.
        """
        return self.w_value / other.w_value * math.exp(self.log_scale - other.log_scale)


class ZeroCount(object):

    def __init__(self, rectangle, winding, samples_on_boundary):
        self.rectangle = rectangle
        self.winding = winding
        self.samples_on_boundary = samples_on_boundary

    def __str__(self):
        return "ZeroCount[" + str(self.rectangle[0]) + ", " + str(self.rectangle[1]) + "] winding=" + \
               str(self.winding) + " (" + str(self.samples_on_boundary) + " samples)"


def rotated_sqrt(w):
    """
    Square root with its cut on the negative imaginary axis, continuous through the
    negative reals that H^2 crosses for monotonic potentials.
    """
    return ROTATION * cmath.sqrt(w / ROTATION ** 2)


def decay_rate(problem, lam, x):
    a, _ = eval_scalar(problem.spec, x, problem.eps)
    return cmath.sqrt(a * a - lam * lam)


def wkb_amplitude(problem, lam, x):
    """
    H(x) = ((A_eps + lambda) / (A_eps - lambda))^(1/4), computed as sqrt((A_eps + lambda) / mu)
    with mu the principal root of A_eps^2 - lambda^2.
    """
    lam = complex(lam)
    a, _ = eval_scalar(problem.spec, x, problem.eps)
    mu = cmath.sqrt(a * a - lam * lam)
    if mu == 0:
        raise InsideWell("x=" + repr(x) + " is a turning point")
    return rotated_sqrt((a + lam) / mu)


def boundary_seed(problem, lam, direction):
    """
    Leading-order WKB data of the solution decaying toward the nearer infinity.

    :return: A BoundaryData with a unit seed vector.
    """
    lam = complex(lam)
    x_cut = problem.x_left if direction == FROM_LEFT else problem.x_right

    mu = decay_rate(problem, lam, x_cut)
    if mu.real <= problem.tol("decay_margin"):
        raise InsideWell("no decay at x=" + repr(x_cut) + " for lambda=" + str(lam))

    amp = wkb_amplitude(problem, lam, x_cut)
    if direction == FROM_LEFT:
        vector = np.array([1.0 / amp - 1j * amp, amp - 1j / amp])
    else:
        vector = np.array([1.0 / amp + 1j * amp, -1j / amp - amp])

    norm = np.linalg.norm(vector)
    return BoundaryData(x_cut, direction, vector / norm, math.log(norm))


def integrate(problem, lam, data, x_target):
    """
    Carries the seed to x_target with DOP853 on the norm-preserving form of the system;
    the third state component accumulates d log|u| / dx.

    :return: A tuple (unit vector, log_scale).
    """
    if x_target == data.x_cut:
        return data.seed_vector.copy(), data.log_scale
    if abs(x_target) > problem.cutoff:
        raise ValueError("x_target outside [-cutoff, cutoff]")

    spec, eps, h = problem.spec, problem.eps, problem.h
    lam = complex(lam)

    def rhs(x, state):
        a, _ = eval_scalar(spec, x, eps)
        y1, y2 = state[0], state[1]
        d1 = (-1j * lam * y1 + a * y2) / h
        d2 = (a * y1 + 1j * lam * y2) / h
        growth = (y1.conjugate() * d1 + y2.conjugate() * d2).real / (abs(y1) ** 2 + abs(y2) ** 2)
        return [d1 - growth * y1, d2 - growth * y2, growth]

    start = np.array([data.seed_vector[0], data.seed_vector[1], 0j])
    solution = solve_ivp(rhs, (data.x_cut, x_target), start, method="DOP853",
                         rtol=problem.tol("ode_rtol"), atol=problem.tol("ode_atol"), max_step=h / 4.0)
    if not solution.success:
        raise StepUnderflow("integration from " + repr(data.x_cut) + " failed: " + str(solution.message))

    end = solution.y[:, -1]
    vector = end[:2]
    norm = np.linalg.norm(vector)
    return vector / norm, data.log_scale + end[2].real + math.log(norm)


def wronskian(problem, lam):
    lam = complex(lam)
    x_m = problem.matching_point

    left = integrate(problem, lam, boundary_seed(problem, lam, FROM_LEFT), x_m)
    right = integrate(problem, lam, boundary_seed(problem, lam, FROM_RIGHT), x_m)

    (u, log_u), (v, log_v) = left, right
    return WronskianSample(lam, u[0] * v[1] - u[1] * v[0], log_u + log_v)


def check_wronskian_symmetry(problem, lam):
    """
    :return: The relative difference of |W(lambda)| and |W(conj lambda)|.
    """
    if problem.symmetry == NO_SYMMETRY:
        raise SymmetryRequired("Wronskian symmetry needs an A-even-B-odd or A-odd-B-even pair")

    lam = complex(lam)
    first = wronskian(problem, lam).log_magnitude
    second = wronskian(problem, lam.conjugate()).log_magnitude
    return -math.expm1(-abs(first - second))


def _branch_or_none(problem):
    try:
        return problem.branch
    except SpectrumError:
        return "none"


def zero_density(problem):
    """
    Expected number of eigenvalues per unit of lambda near lambda0, dI/dlambda / (pi h),
    or 0 when the eps=0 action has no usable slope there.
    """
    try:
        slope = action_derivative(problem.copy(eps=0.0), problem.lambda0).real
    except SpectrumError as e:
        logger.debug("no action slope at lambda0: %s", e)
        return 0.0
    return max(slope, 0.0) / (math.pi * problem.h)


def scan_step(problem):
    step = GRID_STEP_FRACTION * problem.h
    density = zero_density(problem)
    if density > 0:
        step = min(step, 1.0 / (8.0 * density))
    return step


def direct_spectrum_real(problem):
    """
    Real eigenvalues from sign changes of the phase-aligned Wronskian on a grid over the window,
    each refined by bracketing.

    :return: A Spectrum of direct records.
    """
    if problem.eps > 0 and problem.symmetry == NO_SYMMETRY:
        raise SymmetryRequired("a real scan at eps > 0 needs an A-even-B-odd or A-odd-B-even pair")

    lo, hi = problem.window
    count = int(math.ceil((hi - lo) / scan_step(problem))) + 1
    grid = np.linspace(lo, hi, count)

    values = np.array([wronskian(problem, lam).w_value for lam in grid])
    magnitudes = np.abs(values)
    reference = values[np.argmax(magnitudes > ALIGNMENT_FLOOR * magnitudes.max())]
    rotation = abs(reference) / reference
    aligned = values * rotation

    folded = np.angle(aligned)
    folded = np.where(folded > 0.5 * math.pi, folded - math.pi, folded)
    folded = np.where(folded <= -0.5 * math.pi, folded + math.pi, folded)
    jumps = np.abs(np.diff(folded))
    if np.any(jumps > PHASE_STEP_LIMIT):
        index = int(np.argmax(jumps))
        raise PhaseTrackingLost("phase jump of " + repr(float(jumps[index])) + " near lambda=" + repr(grid[index]))

    def aligned_real(lam):
        return (wronskian(problem, lam).w_value * rotation).real

    positive = aligned.real > 0
    branch = _branch_or_none(problem)
    records = []
    for i in np.nonzero(positive[1:] != positive[:-1])[0]:
        root = brentq(aligned_real, grid[i], grid[i + 1], xtol=problem.tol("bracket"))
        residual = abs(wronskian(problem, root).w_value)
        records.append(EigenvalueRecord(root, len(records), branch, DIRECT, residual, problem.h, problem.eps))

    logger.info("direct real scan: %d eigenvalues on %d grid points (h=%r, eps=%r)",
                len(records), count, problem.h, problem.eps)
    return Spectrum(records)


def _boundary_path(lo, hi, density, refinement):
    corners = [lo, complex(hi.real, lo.imag), hi, complex(lo.real, hi.imag)]
    points = []
    for start, end in zip(corners, corners[1:] + corners[:1]):
        count = refinement * max(SAMPLES_PER_EDGE, int(math.ceil(SAMPLES_PER_ZERO * density * abs(end - start))))
        points.extend(start + (end - start) * np.arange(count) / count)
    points.append(lo)
    return points


class _OnBoundary(Exception):
    pass


def _winding(problem, lo, hi, cache, density, refinement):
    floor = problem.tol("boundary_zero")

    def phase_point(z):
        if z not in cache:
            cache[z] = wronskian(problem, z).w_value
        w = cache[z]
        if abs(w) < floor:
            raise _OnBoundary(str(z))
        return w / abs(w)

    points = _boundary_path(lo, hi, density, refinement)
    values = [phase_point(z) for z in points]

    while True:
        refined_points = [points[0]]
        refined_values = [values[0]]
        refined = False
        for i in range(1, len(points)):
            if abs(cmath.phase(values[i] / values[i - 1])) >= PHASE_STEP_LIMIT:
                middle = 0.5 * (points[i - 1] + points[i])
                refined_points.append(middle)
                refined_values.append(phase_point(middle))
                refined = True
            refined_points.append(points[i])
            refined_values.append(values[i])

        points, values = refined_points, refined_values
        if not refined:
            break
        if len(points) > REFINEMENT_CAP:
            raise PhaseResolution("boundary refinement exceeded " + str(REFINEMENT_CAP) + " samples")

    total = sum(cmath.phase(values[i] / values[i - 1]) for i in range(1, len(values)))
    turns = total / (2.0 * math.pi)
    winding = int(round(turns))
    if abs(turns - winding) > WINDING_GUARD:
        raise PhaseResolution("winding " + repr(turns) + " is not an integer")
    return winding, len(points) - 1


def _settled_winding(problem, lo, hi, cache, density):
    """
    Doubles the boundary sampling until two successive windings agree.
    """
    previous = None
    refinement = 1
    while refinement <= SAMPLING_DOUBLINGS_CAP:
        winding, samples = _winding(problem, lo, hi, cache, density, refinement)
        if winding == previous:
            if winding < 0:
                raise PhaseResolution("negative winding " + str(winding))
            return winding, samples
        previous = winding
        refinement *= 2

    raise PhaseResolution("winding did not settle with " + str(SAMPLING_DOUBLINGS_CAP) + "x boundary sampling")


def count_zeros(problem, rectangle=None):
    """
    Argument-principle count of the Wronskian zeros inside a rectangle, walking its
    boundary counter-clockwise. Each edge starts with SAMPLES_PER_ZERO samples per expected
    zero along it. A zero on the boundary inflates the rectangle by 1%.

    :param rectangle: (lower-left, upper-right) corners; the window rectangle by default.
    :return: A ZeroCount.
    """
    lo, hi = rectangle or problem.rectangle
    density = zero_density(problem)
    cache = {}
    for _ in range(INFLATION_ATTEMPTS + 1):
        try:
            winding, samples = _settled_winding(problem, lo, hi, cache, density)
            count = ZeroCount((lo, hi), winding, samples)
            logger.debug("%s", count)
            return count
        except _OnBoundary as e:
            logger.debug("zero of W near boundary point %s, inflating", e)
            middle = 0.5 * (lo + hi)
            lo = middle + (lo - middle) * (1.0 + INFLATION)
            hi = middle + (hi - middle) * (1.0 + INFLATION)

    raise BoundaryZero("W vanishes on the boundary after " + str(INFLATION_ATTEMPTS) + " inflations")


def newton_wronskian(problem, lam):
    """
    Complex Newton on W with a central-difference derivative along the real direction.

    :return: A tuple (root, |w_value| at the last iterate).
    """
    lam = complex(lam)
    d = problem.tol("fd_step")
    for _ in range(NEWTON_CAP):
        centre = wronskian(problem, lam)
        plus = wronskian(problem, lam + d)
        minus = wronskian(problem, lam - d)

        slope = plus.ratio_to(centre) - minus.ratio_to(centre)
        if slope == 0:
            raise NoConvergence("flat Wronskian at lambda=" + str(lam))

        step = 2.0 * d / slope
        lam = lam - step
        if abs(step) < NEWTON_STEP:
            return lam, abs(centre.w_value)

    raise NoConvergence("Wronskian Newton did not converge near " + str(lam))


def continue_root(problem, lam):
    """
    Follows a root of the eps=0 Wronskian to problem.eps in CONTINUATION_STEPS equal steps.
    """
    result = (lam, None)
    for step in range(1, CONTINUATION_STEPS + 1):
        stage = problem.copy(eps=problem.eps * step / CONTINUATION_STEPS)
        result = newton_wronskian(stage, result[0])
    return result


def direct_spectrum_complex(problem):
    """
    Complex eigenvalues seeded from the real eigenvalues of the eps=0 problem, certified
    by a winding count over the window rectangle; only roots inside the counted rectangle are
    kept. A shortfall is recorded as MissedZeros, an excess of roots over the winding as
    PhaseResolution.

    :return: A Spectrum carrying the winding number.
    """
    seeds = direct_spectrum_real(problem.copy(eps=0.0, delta=SEED_PADDING * problem.delta))
    failures = list(seeds.failures)
    branch = _branch_or_none(problem)

    roots = []
    for seed in seeds:
        try:
            try:
                lam, residual = newton_wronskian(problem, seed.lam)
            except SpectrumError as e:
                logger.debug("direct Newton from %s failed (%s), continuing in eps", seed.lam, e)
                lam, residual = continue_root(problem, seed.lam)
        except SpectrumError as e:
            logger.warning("seed %s failed: %s", seed.lam, e)
            failures.append("seed=" + repr(seed.lam.real) + ": " + type(e).__name__ + ": " + str(e))
            continue

        if all(abs(lam - other) > problem.tol("distinct") for other, _ in roots):
            roots.append((lam, residual))

    count = count_zeros(problem)
    lo, hi = count.rectangle
    inside = [(lam, residual) for lam, residual in roots
              if lo.real <= lam.real <= hi.real and lo.imag <= lam.imag <= hi.imag]
    logger.debug("%d of %d roots inside the counting rectangle", len(inside), len(roots))
    roots = inside

    if count.winding != len(roots):
        if count.winding > len(roots):
            mismatch = MissedZeros("winding " + str(count.winding) + " exceeds " + str(len(roots)) + " roots found")
        else:
            mismatch = PhaseResolution("winding " + str(count.winding) + " is below " + str(len(roots)) +
                                       " roots found")
        logger.warning("%s", mismatch)
        failures.append(type(mismatch).__name__ + ": " + str(mismatch))

    records = [EigenvalueRecord(lam, k, branch, DIRECT, residual, problem.h, problem.eps)
               for k, (lam, residual) in enumerate(sorted(roots, key=lambda r: (r[0].real, r[0].imag)))]
    return Spectrum(records, failures, count.winding)
