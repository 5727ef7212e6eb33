# coding=utf-8

import math
from unittest import TestCase

import numpy as np

from spectrum.action import action_derivative, action_integral
from spectrum.errors import EmptyWindow, LeftWindow
from spectrum.potential import CUSTOM, MONOTONE_ODD, WELL_EVEN, PotentialSpec, Term, validate_A1
from spectrum.problem import Problem
from spectrum.quantize import (HALF_INTEGER, INTEGER, WKB, EigenvalueRecord, Spectrum, enumerate_indices,
                               indices_in_range, select_branch, solve_quantization, wkb_spectrum)


def well_problem(eps=0.0, h=0.1):
    return Problem(PotentialSpec(WELL_EVEN, [2.0, 1.0]), eps, h, 1.5, 0.2)


def monotone_problem(eps=0.0, h=0.1):
    return Problem(PotentialSpec(MONOTONE_ODD, [2.0]), eps, h, 1.0, 0.3)


def control_problem(eps=0.0, h=0.1):
    spec = PotentialSpec(CUSTOM, a_terms=[Term("const", 2.0), Term("gauss", -1.0)], b_terms=[Term("gauss", 1.0)])
    return Problem(spec, eps, h, 1.5, 0.2)


class TestQuantize(TestCase):

    def test_select_branch(self):
        self.assertEqual(select_branch(validate_A1(PotentialSpec(WELL_EVEN, [2.0, 1.0]), 1.5)), HALF_INTEGER)
        self.assertEqual(select_branch(validate_A1(PotentialSpec(MONOTONE_ODD, [2.0]), 1.0)), INTEGER)

    def test_select_branch_for_asymmetric_simple_well(self):
        lopsided = PotentialSpec(CUSTOM, a_terms=[Term("const", 2.0), Term("gauss", -1.0), Term("xgauss", 0.3)])

        self.assertEqual(select_branch(validate_A1(lopsided, 1.5)), HALF_INTEGER)

    def test_indices_in_range(self):
        self.assertEqual(indices_in_range(0.30, 0.60, 0.05, INTEGER), [2, 3])
        self.assertEqual(indices_in_range(0.30, 0.60, 0.05, HALF_INTEGER), [2, 3])
        self.assertEqual(indices_in_range(0.30, 0.60, 10.0, INTEGER), [])

    def test_enumerate_indices_with_large_h_throws(self):
        with self.assertRaises(EmptyWindow):
            enumerate_indices(monotone_problem(h=10.0), (0.30, 0.60))

    def test_enumerate_indices_covers_the_action_range(self):
        problem = monotone_problem()
        indices = enumerate_indices(problem)
        i_lo = action_integral(problem, 0.7).value.real
        i_hi = action_integral(problem, 1.3).value.real

        self.assertTrue(indices)
        self.assertEqual(indices, list(range(indices[0], indices[-1] + 1)))
        for k in indices:
            self.assertTrue(i_lo <= k * math.pi * problem.h <= i_hi)

    def test_solve_quantization_monotone(self):
        problem = monotone_problem()
        indices = enumerate_indices(problem)
        record = solve_quantization(problem, indices[len(indices) // 2])

        self.assertEqual(record.method, WKB)
        self.assertEqual(record.branch, INTEGER)
        self.assertLess(record.residual, 1e-12)
        self.assertLess(abs(record.lam.imag), 1e-12)
        self.assertTrue(problem.in_window(record.lam))
        self.assertAlmostEqual(action_integral(problem, record.lam).value.real,
                               record.k * math.pi * problem.h, places=10)

    def test_solve_quantization_stays_real_under_symmetry(self):
        problem = well_problem(0.05)
        k = enumerate_indices(problem)[0]
        record = solve_quantization(problem, k)

        self.assertLess(abs(record.lam.imag), 1e-10)
        self.assertLess(record.residual, 1e-10)

    def test_solve_quantization_outside_window_throws(self):
        problem = monotone_problem()
        indices = enumerate_indices(problem)

        with self.assertRaises(LeftWindow):
            solve_quantization(problem, indices[-1] + 5)

    def test_wkb_spectrum_count_and_order(self):
        problem = well_problem()
        spectrum = wkb_spectrum(problem)
        eigenvalues = [r.lam.real for r in spectrum]

        self.assertEqual(len(spectrum), len(enumerate_indices(problem)))
        self.assertEqual(spectrum.failures, [])
        self.assertEqual(eigenvalues, sorted(eigenvalues))

    def test_wkb_spectrum_spacing(self):
        problem = monotone_problem(h=0.02)
        eigenvalues = [r.lam.real for r in wkb_spectrum(problem)]
        for left, right in zip(eigenvalues, eigenvalues[1:]):
            expected = math.pi * problem.h / action_derivative(problem, 0.5 * (left + right)).real
            self.assertLess(abs((right - left) - expected) / expected, 0.1)

    def test_wkb_spectrum_is_continuous_in_eps(self):
        unperturbed = wkb_spectrum(well_problem())
        perturbed = wkb_spectrum(well_problem(1e-6))

        self.assertEqual(len(unperturbed), len(perturbed))
        for a, b in zip(unperturbed, perturbed):
            self.assertLess(abs(a.lam - b.lam), 1e-4)

    def test_wkb_spectrum_without_symmetry_is_complex(self):
        spectrum = wkb_spectrum(control_problem(0.05))

        self.assertTrue(len(spectrum) > 0)
        self.assertGreater(max(abs(r.lam.imag) for r in spectrum), 1e-6)

    def test_node_doubling_moves_eigenvalues_below_tolerance(self):
        problem = monotone_problem()
        first = wkb_spectrum(problem)
        doubled = wkb_spectrum(problem.copy(quad_nodes=64))

        for a, b in zip(first, doubled):
            self.assertLess(abs(a.lam - b.lam), 1e-9)

    def test_record_row_form(self):
        record = EigenvalueRecord(1.25 + 0.5j, 3, HALF_INTEGER, WKB, 1e-13, 0.05, 0.01)
        row = dict(zip(("re_lambda", "im_lambda", "k", "branch", "method", "residual", "h", "eps"),
                       [str(v) for v in record.to_row()]))

        self.assertEqual(EigenvalueRecord.from_row(row), record)
        self.assertEqual(record.to_dict()["im_lambda"], 0.5)

    def test_spectrum_completeness(self):
        records = [EigenvalueRecord(1.2, 0, INTEGER, WKB, 0.0, 0.1, 0.0)]

        self.assertTrue(Spectrum(records).complete)
        self.assertFalse(Spectrum(records, ["k=1: NoConvergence"]).complete)
        self.assertFalse(Spectrum(records, winding=2).complete)
        self.assertTrue(np.allclose(Spectrum(records, winding=1).eigenvalues, [1.2]))
