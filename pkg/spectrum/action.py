#!/usr/bin/env python
# coding=utf-8

"""
The action integral I(lambda, eps) = int_alpha^beta sqrt(lambda^2 - A_eps(t)^2) dt and its
lambda-derivative, taken along the straight segment between the turning points.

With t = m + r cos(theta) the square-root endpoint behaviour becomes a smooth sin(theta)
factor, so midpoint Gauss-Chebyshev nodes in theta converge spectrally.
"""

import logging

import numpy as np

from .errors import BranchAmbiguity, Collision, DegenerateSegment, QuadratureNoConvergence, SymmetryRequired
from .potential import NO_SYMMETRY, eval_potential
from .turning import find_turning_points

logger = logging.getLogger(__name__)

CONTOUR = "straight-segment"

QUAD_NODE_CAP = 4096
AMBIGUITY_RATIO = 1e-2  # |Re q| / |q| below this for consecutive node roots is a phase jump near pi/2


class ActionValue(object):

    def __init__(self, value, dvalue_dlambda, quad_error_estimate, nodes_used, pair=None):
        self.value = complex(value)
        self.dvalue_dlambda = complex(dvalue_dlambda)
        self.quad_error_estimate = quad_error_estimate
        self.nodes_used = nodes_used
        self.pair = pair
        self.contour = CONTOUR

    def __str__(self):
        return "ActionValue[" + str(self.nodes_used) + " nodes] I=" + str(self.value) + \
               ", dI/dlambda=" + str(self.dvalue_dlambda)


def continue_branch(roots):
    """
    Fixes the signs of sqrt values sampled along the segment so that consecutive values
    never differ by more than a quarter turn, anchored at the middle node.
    """
    products = roots[1:] * np.conj(roots[:-1])
    magnitudes = np.abs(products)
    ambiguous = np.abs(products.real) < AMBIGUITY_RATIO * magnitudes
    if np.any(ambiguous & (magnitudes > 0)):
        raise BranchAmbiguity("square root phase jumps by about pi/2 between two nodes")

    signs = np.concatenate(([1.0], np.cumprod(np.where(products.real < 0, -1.0, 1.0))))
    anchor = len(roots) // 2
    return roots * signs * signs[anchor]


def _quadrature(problem, lam, pair, n):
    theta = (np.arange(n) + 0.5) * np.pi / n
    middle = 0.5 * (pair.alpha + pair.beta)
    half = 0.5 * (pair.beta - pair.alpha)

    t = middle + half * np.cos(theta)
    a, _ = eval_potential(problem.spec, t, problem.eps)
    roots = continue_branch(np.sqrt(lam * lam - a * a))

    anchor = n // 2
    if (half * roots[anchor]).real < 0:
        roots = -roots

    weight = half * np.pi / n * np.sin(theta)
    value = np.sum(weight * roots)
    derivative = np.sum(weight * lam / roots)
    return value, derivative


def _segment(problem, lam, pair):
    if pair is None:
        try:
            pair = find_turning_points(problem, lam)
        except Collision as e:
            raise DegenerateSegment("turning points coincide: " + str(e))

    if pair.chord < problem.tol("collision"):
        raise DegenerateSegment("segment shorter than " + repr(problem.tol("collision")))
    return pair


def action_value(problem, lam, pair=None):
    """
    Evaluates I and dI/dlambda together, doubling the node count from problem.quad_nodes
    until two successive values of I agree to the quadrature tolerance. The derivative
    comes from the same node count and takes no part in the stopping test.

    :param problem: The Problem.
    :param lam: Complex spectral parameter.
    :param pair: Optional TurningPointPair already located for (lam, problem.eps).
    :return: An ActionValue.
    """
    lam = complex(lam)
    pair = _segment(problem, lam, pair)
    tol = problem.tol("quadrature")

    n = problem.quad_nodes
    previous = None
    while n <= QUAD_NODE_CAP:
        value, derivative = _quadrature(problem, lam, pair, n)
        if previous is not None:
            change = abs(value - previous)
            if change < tol * max(1.0, abs(value)):
                return ActionValue(value, derivative, change, n, pair)
        previous = value
        n *= 2

    raise QuadratureNoConvergence("action did not converge with " + str(QUAD_NODE_CAP) + " nodes")


def action_integral(problem, lam, pair=None):
    return action_value(problem, lam, pair)


def action_derivative(problem, lam, pair=None):
    return action_value(problem, lam, pair).dvalue_dlambda


def check_schwarz_symmetry(problem, lam, require_symmetry=True):
    """
    :param require_symmetry: False measures the discrepancy of a control potential without (A2).
    :return: |conj(I(conj lambda, eps)) - I(lambda, eps)|.
    """
    if require_symmetry and problem.symmetry == NO_SYMMETRY:
        raise SymmetryRequired("Schwarz symmetry needs an A-even-B-odd or A-odd-B-even pair")

    lam = complex(lam)
    direct = action_integral(problem, lam).value
    mirrored = action_integral(problem, lam.conjugate()).value
    return abs(mirrored.conjugate() - direct)
