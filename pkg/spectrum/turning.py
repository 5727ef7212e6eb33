#!/usr/bin/env python
# coding=utf-8

"""
Complex turning points: the two roots alpha, beta of A_eps(z)^2 - lambda^2 that
continue the real turning points of the unperturbed problem.
"""

import logging

from scipy.optimize import brentq, minimize_scalar

from .errors import BranchSwap, Collision, NoConvergence, LeftStrip, PathTooCoarse
from .potential import eval_scalar, real_a

logger = logging.getLogger(__name__)

HOMOTOPY_STEPS = 8
NEWTON_CAP = 50
PATH_STEP_LIMIT = 0.1  # fraction of |beta0 - alpha0|


class TurningPointPair(object):

    def __init__(self, alpha, beta, residual_alpha, residual_beta, lam, eps):
        self.alpha = complex(alpha)
        self.beta = complex(beta)
        self.residual_alpha = residual_alpha
        self.residual_beta = residual_beta
        self.lam = complex(lam)
        self.eps = eps

    def __str__(self):
        return "TurningPointPair[lambda=" + str(self.lam) + ", eps=" + repr(self.eps) + "] alpha=" + \
               str(self.alpha) + ", beta=" + str(self.beta)

    @property
    def chord(self):
        return abs(self.beta - self.alpha)

    def to_dict(self):
        return {"alpha": [self.alpha.real, self.alpha.imag], "beta": [self.beta.real, self.beta.imag],
                "residual_alpha": self.residual_alpha, "residual_beta": self.residual_beta,
                "lambda": [self.lam.real, self.lam.imag], "eps": self.eps}


def residual(problem, z, lam, eps):
    a, _ = eval_scalar(problem.spec, z, eps)
    return abs(a * a - lam * lam)


def newton_root(problem, z, lam, eps):
    """
    Newton iteration on f(z) = A_eps(z)^2 - lambda^2 with f'(z) = 2 A_eps A_eps'.

    :return: A tuple (root, |f(root)|).
    """
    spec = problem.spec
    tol = problem.tol("root") * max(1.0, abs(lam) ** 2)
    z = complex(z)

    for _ in range(NEWTON_CAP):
        a, da = eval_scalar(spec, z, eps)
        f = a * a - lam * lam
        if abs(f) < tol:
            return z, abs(f)

        slope = 2.0 * a * da
        if slope == 0:
            raise NoConvergence("vanishing derivative at z=" + str(z))

        step = f / slope
        z = z - step
        if abs(z.imag) >= spec.strip_half_width:
            raise LeftStrip("turning point left the strip at z=" + str(z))
        if abs(step) < problem.tol("newton_step"):
            return z, residual(problem, z, lam, eps)

    raise NoConvergence("turning point Newton did not converge for lambda=" + str(lam))


def real_seeds(problem, level):
    """
    The real solutions of |A(x)| = level around the bottom of |A| between alpha0 and beta0.
    """
    spec = problem.spec
    report = problem.a1_report

    def gap(x):
        return abs(float(real_a(spec, x))) - level

    bottom = minimize_scalar(gap, bounds=(report.alpha0, report.beta0), method="bounded",
                             options={"xatol": 1e-12})
    x_min = float(bottom.x)
    if gap(x_min) >= -problem.tol("root"):
        raise Collision(x_min, x_min, "lambda=" + repr(level) + " is at or below the bottom of |A|")

    cutoff = problem.cutoff
    if gap(-cutoff) <= 0 or gap(cutoff) <= 0:
        raise NoConvergence("no real turning point below the cutoff for level " + repr(level))

    alpha = brentq(gap, -cutoff, x_min, xtol=problem.tol("bracket"))
    beta = brentq(gap, x_min, cutoff, xtol=problem.tol("bracket"))
    return alpha, beta


def _ordered_pair(problem, alpha, beta, lam):
    eps = problem.eps
    if abs(alpha - beta) < problem.tol("collision"):
        raise Collision(alpha, beta)
    if alpha.real >= beta.real:
        raise BranchSwap("turning points exchanged order at lambda=" + str(lam))

    return TurningPointPair(alpha, beta, residual(problem, alpha, lam, eps),
                            residual(problem, beta, lam, eps), lam, eps)


def find_turning_points(problem, lam, seed=None):
    """
    Locates alpha_eps(lambda), beta_eps(lambda).

    Without a seed, the real roots at (Re lambda, eps=0) are continued first in eps and
    then in Im lambda, HOMOTOPY_STEPS each. With a seed pair, Newton starts from it.

    :param problem: The Problem.
    :param lam: Complex spectral parameter.
    :param seed: Optional TurningPointPair to start from.
    :return: A TurningPointPair.
    """
    lam = complex(lam)
    eps = problem.eps

    if seed is not None:
        alpha, _ = newton_root(problem, seed.alpha, lam, eps)
        beta, _ = newton_root(problem, seed.beta, lam, eps)
        return _ordered_pair(problem, alpha, beta, lam)

    alpha, beta = real_seeds(problem, lam.real)
    alpha, beta = complex(alpha), complex(beta)

    if eps > 0:
        for step in range(1, HOMOTOPY_STEPS + 1):
            e = eps * step / HOMOTOPY_STEPS
            alpha, _ = newton_root(problem, alpha, complex(lam.real), e)
            beta, _ = newton_root(problem, beta, complex(lam.real), e)

    if lam.imag != 0:
        for step in range(1, HOMOTOPY_STEPS + 1):
            current = complex(lam.real, lam.imag * step / HOMOTOPY_STEPS)
            alpha, _ = newton_root(problem, alpha, current, eps)
            beta, _ = newton_root(problem, beta, current, eps)
    else:
        alpha, _ = newton_root(problem, alpha, lam, eps)
        beta, _ = newton_root(problem, beta, lam, eps)

    pair = _ordered_pair(problem, alpha, beta, lam)
    logger.debug("%s", pair)
    return pair


def continue_in_window(problem, lambda_path):
    """
    Follows the pair along a path of spectral parameters, each solve seeded by the previous one.

    :return: A list of TurningPointPair, one per path point.
    """
    report = problem.a1_report
    limit = PATH_STEP_LIMIT * abs(report.beta0 - report.alpha0)

    pairs = []
    previous = None
    for lam in lambda_path:
        lam = complex(lam)
        if previous is not None and abs(lam - previous.lam) >= limit:
            raise PathTooCoarse("path step " + repr(abs(lam - previous.lam)) + " exceeds " + repr(limit))

        pair = find_turning_points(problem, lam, seed=previous)
        if previous is not None and abs(pair.alpha - previous.alpha) >= abs(pair.alpha - previous.beta):
            raise BranchSwap("alpha jumped to the beta branch at lambda=" + str(lam))

        pairs.append(pair)
        previous = pair
    return pairs
