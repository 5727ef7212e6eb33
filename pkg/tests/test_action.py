# coding=utf-8

import math
from unittest import TestCase

import numpy as np
from scipy.integrate import trapezoid

from spectrum.action import (CONTOUR, action_derivative, action_integral, check_schwarz_symmetry,
                             continue_branch)
from spectrum.errors import BranchAmbiguity, DegenerateSegment, SymmetryRequired
from spectrum.potential import CUSTOM, MONOTONE_ODD, WELL_EVEN, PotentialSpec, Term
from spectrum.problem import Problem


def well_problem(eps=0.0, **kwargs):
    return Problem(PotentialSpec(WELL_EVEN, [2.0, 1.0]), eps, 0.1, 1.5, 0.2, **kwargs)


def monotone_problem(eps=0.0):
    return Problem(PotentialSpec(MONOTONE_ODD, [2.0]), eps, 0.1, 1.0, 0.3)


def control_problem(eps=0.0):
    spec = PotentialSpec(CUSTOM, a_terms=[Term("const", 2.0), Term("gauss", -1.0)], b_terms=[Term("gauss", 1.0)])
    return Problem(spec, eps, 0.1, 1.5, 0.2)


def brute_force_monotone_action(lam, nodes=1000000):
    """
    Trapezoid rule in theta on the cos-substituted integrand of the tanh action.
    """
    t_star = math.atanh(lam / 2.0)
    theta = np.linspace(0.0, math.pi, nodes + 1)
    t = t_star * np.cos(theta)
    integrand = np.sqrt(np.maximum(lam * lam - 4.0 * np.tanh(t) ** 2, 0.0)) * t_star * np.sin(theta)
    return trapezoid(integrand, theta)


class TestAction(TestCase):

    def test_monotone_action_matches_brute_force(self):
        value = action_integral(monotone_problem(), 1.0)

        self.assertAlmostEqual(value.value.real, brute_force_monotone_action(1.0), places=9)
        self.assertLess(abs(value.value.imag), 1e-10)
        self.assertGreater(value.value.real, 0.0)
        self.assertLess(value.quad_error_estimate, 1e-10 * max(1.0, abs(value.value)))
        self.assertEqual(value.contour, CONTOUR)

    def test_action_converges_across_the_real_window(self):
        for problem in (monotone_problem(), well_problem()):
            lo, hi = problem.window
            for lam in np.linspace(lo, hi, 41):
                value = action_integral(problem, lam)

                self.assertLess(value.quad_error_estimate, 1e-12 * max(1.0, abs(value.value)), "lambda=" + repr(lam))
                self.assertGreater(value.value.real, 0.0)
                self.assertGreater(value.dvalue_dlambda.real, 0.0)

    def test_action_vanishes_at_well_bottom(self):
        value = action_integral(well_problem(), 1.0 + 1e-4)

        self.assertLess(abs(value.value), 1e-3)
        self.assertGreater(value.value.real, 0.0)

    def test_well_bottom_is_degenerate(self):
        with self.assertRaises(DegenerateSegment):
            action_integral(well_problem(), 1.0)
        with self.assertRaises(DegenerateSegment):
            action_derivative(well_problem(), 1.0)

    def test_derivative_matches_finite_differences(self):
        rng = np.random.RandomState(3)
        for problem, lam0, delta in ((well_problem(0.05), 1.5, 0.2), (monotone_problem(), 1.0, 0.3)):
            for _ in range(10):
                lam = lam0 + 0.8 * delta * complex(rng.uniform(-1, 1), 0.2 * rng.uniform(-1, 1))
                derivative = action_derivative(problem, lam)
                estimate = (action_integral(problem, lam + 1e-6).value -
                            action_integral(problem, lam - 1e-6).value) / 2e-6
                self.assertLess(abs(derivative - estimate) / abs(derivative), 1e-6)

    def test_derivative_is_real_and_positive_at_lambda0(self):
        derivative = action_derivative(monotone_problem(), 1.0)

        self.assertGreater(derivative.real, 0.0)
        self.assertLess(abs(derivative.imag), 1e-10)

    def test_action_increases_on_the_real_window(self):
        problem = well_problem()
        grid = np.linspace(1.3, 1.69, 14)
        values = [action_integral(problem, lam).value.real for lam in grid]
        shifted = [action_integral(problem, lam + 0.01).value.real for lam in grid]

        self.assertTrue(all(b > a for a, b in zip(values, shifted)))

    def test_node_doubling_keeps_the_sign(self):
        first = action_integral(well_problem(), 1.4)
        doubled = action_integral(well_problem(quad_nodes=64), 1.4)

        self.assertGreater(first.value.real, 0.0)
        self.assertGreater(doubled.value.real, 0.0)
        self.assertAlmostEqual(first.value, doubled.value, places=11)

    def test_schwarz_symmetry_on_real_lambda(self):
        self.assertLess(check_schwarz_symmetry(well_problem(0.05), 1.45), 1e-10)

    def test_schwarz_symmetry_on_complex_lambda(self):
        self.assertLess(check_schwarz_symmetry(well_problem(0.05), 1.5 + 0.02j), 1e-10)
        self.assertLess(check_schwarz_symmetry(monotone_problem(0.05), 1.0 + 0.02j), 1e-10)

    def test_schwarz_symmetry_requires_symmetric_pair(self):
        with self.assertRaises(SymmetryRequired):
            check_schwarz_symmetry(control_problem(0.05), 1.5 + 0.02j)

    def test_schwarz_symmetry_fails_for_control(self):
        discrepancy = check_schwarz_symmetry(control_problem(0.05), 1.5 + 0.02j, require_symmetry=False)

        self.assertGreater(discrepancy, 1e-4)

    def test_continue_branch_flips_signs(self):
        roots = np.array([1.0, -1.0, 1.0, 1.0 + 0.1j])
        fixed = continue_branch(roots)

        self.assertTrue(np.all(fixed.real > 0) or np.all(fixed.real < 0))

    def test_continue_branch_rejects_quarter_turn(self):
        with self.assertRaises(BranchAmbiguity):
            continue_branch(np.array([1.0, 1.0j, -1.0]))
