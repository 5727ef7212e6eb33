# coding=utf-8

import math
import os
import shutil
import tempfile
from unittest import TestCase

from spectrum.config import ExperimentConfig
from spectrum.experiment import (COMPARISON_FIELDS, ComparisonRow, Experiment, convergence_slope, match_nearest,
                                 run_cells, run_compare, wkb_cell)
from spectrum.quantize import INTEGER, WKB, EigenvalueRecord
from spectrum.store import format_cell, read_json, read_table


def monotone_conf(**overrides):
    conf = {"potential": {"family": "monotone-odd", "params": [2.0]}, "lambda0": 1.0, "delta": 0.3,
            "h_list": [0.1], "eps_list": [0.0], "seed_metadata": "unit test"}
    conf.update(overrides)
    return conf


def load_records(rows):
    return [EigenvalueRecord.from_row(row) for row in rows if row["re_lambda"] != ""]


class TestMatching(TestCase):

    def test_match_nearest_pairs_each_element_once(self):
        pairs = match_nearest([1.0, 2.0, 3.0], [2.1, 0.9])

        self.assertEqual(pairs, [(0, 1), (1, 0), (2, None)])

    def test_match_nearest_keeps_unmatched_second(self):
        pairs = match_nearest([1.0], [1.1, 5.0])

        self.assertEqual(pairs, [(0, 0), (None, 1)])

    def test_comparison_row_recomputes_the_difference(self):
        row = ComparisonRow(0.1, 0.0, 2, 1.25 + 0j, 1.2501 + 1e-9j, INTEGER)
        text = dict(zip(COMPARISON_FIELDS, [format_cell(v) for v in row.to_row()]))
        loaded = ComparisonRow.from_row(text)

        self.assertEqual(loaded.abs_diff, row.abs_diff)
        self.assertEqual(loaded.k_proxy, 2)
        self.assertTrue(loaded.matched)
        self.assertFalse(ComparisonRow(0.1, 0.0, None, None, 1.2, INTEGER).matched)

    def test_convergence_slope_of_quadratic_errors(self):
        rows = []
        for h in (0.1, 0.05, 0.025):
            rows.append(ComparisonRow(h, 0.0, 0, 1.0, 1.0 + 0.3 * h * h, INTEGER))
            rows.append(ComparisonRow(h, 0.0, 1, 1.2, 1.2 + 0.1 * h * h, INTEGER))
            rows.append(ComparisonRow(h, 0.05, 0, 1.0, 1.0 + h, INTEGER))

        self.assertAlmostEqual(convergence_slope(rows), 2.0, places=9)
        self.assertIsNone(convergence_slope(rows[:3]))


class TestExperiment(TestCase):

    def setUp(self):
        self.output_dir = tempfile.mkdtemp()
        self.config = ExperimentConfig(data=monotone_conf())
        self.experiment = Experiment(self.config, output_dir=self.output_dir)

    def tearDown(self):
        shutil.rmtree(self.output_dir)

    def test_commands(self):
        self.assertEqual(list(self.experiment.commands().keys()),
                         ["validate", "wkb", "direct", "compare", "pt-sweep", "stokes"])

    def test_metadata(self):
        metadata = self.experiment.metadata()

        self.assertEqual(metadata["config_hash"], self.config.config_hash())
        self.assertEqual(metadata["contour"], "straight-segment")
        self.assertEqual(metadata["seed_metadata"], "unit test")
        self.assertIn("ode_rtol", metadata["tolerances"])

    def test_validate_writes_report(self):
        status, msg = self.experiment.validate()
        metadata, data = read_json(os.path.join(self.output_dir, "validate.json"))

        self.assertTrue(status)
        self.assertEqual(data["branch"], INTEGER)
        self.assertAlmostEqual(data["a1"]["alpha0"], -math.atanh(0.5), places=10)
        self.assertEqual(metadata["config_hash"], self.config.config_hash())

    def test_validate_rejects_a_potential_without_a_well(self):
        config = ExperimentConfig(data=monotone_conf(lambda0=2.5, delta=0.2))
        status, msg = Experiment(config, output_dir=self.output_dir).validate()

        self.assertFalse(status)
        self.assertTrue(msg.startswith("Potential rejected"))

    def test_wkb_writes_records(self):
        status, msg = self.experiment.wkb()
        metadata, rows = read_table(os.path.join(self.output_dir, "wkb.csv"))
        records = load_records(rows)

        self.assertTrue(status)
        self.assertTrue(records)
        self.assertTrue(all(r.method == WKB and r.h == 0.1 for r in records))
        self.assertEqual(metadata["seed_metadata"], "unit test")

    def test_compare_writes_matched_rows(self):
        status, msg = self.experiment.compare()
        metadata, rows = read_table(os.path.join(self.output_dir, "compare.csv"))

        self.assertTrue(status)
        self.assertEqual(metadata["convergence_slope"], "")
        self.assertTrue(rows)
        matched = [ComparisonRow.from_row(row) for row in rows if row["abs_diff"] != ""]
        self.assertTrue(matched)
        for row in matched:
            self.assertLess(row.abs_diff, 0.1 * 0.1)

    def test_compare_always_runs_the_unperturbed_cells(self):
        config = ExperimentConfig(data=monotone_conf(eps_list=[0.05]))
        rows, slope, failed = run_compare(config)

        self.assertEqual(sorted(set(row.eps for row in rows)), [0.0, 0.05])
        self.assertTrue(any(row.eps == 0.0 and row.matched for row in rows))
        self.assertIsNone(slope)

    def test_stokes_writes_graph(self):
        status, msg = self.experiment.stokes()
        _, data = read_json(os.path.join(self.output_dir, "stokes.json"))

        self.assertTrue(status)
        self.assertEqual(len(data["turning_points"]), 2)
        self.assertEqual(len(data["curves"]), 6)

    def test_pt_sweep_writes_one_row_per_cell(self):
        config = ExperimentConfig(data=monotone_conf(eps_list=[0.05, 0.0]))
        status, msg = Experiment(config, output_dir=self.output_dir).pt_sweep()
        _, rows = read_table(os.path.join(self.output_dir, "pt-sweep.csv"))

        self.assertTrue(status, msg)
        self.assertEqual([float(row["eps"]) for row in rows], [0.0, 0.05])
        for row in rows:
            self.assertEqual(row["complete"], "true")
            self.assertEqual(int(row["roots"]), int(row["winding"]))
            self.assertLess(float(row["max_abs_im_lambda"]), 1e-8)

    def test_run_cells_is_deterministic_across_workers(self):
        config = ExperimentConfig(data=monotone_conf(eps_list=[0.05, 0.0]))
        serial = run_cells(wkb_cell, config, jobs=1)
        parallel = run_cells(wkb_cell, config, jobs=2)

        self.assertEqual([(r["h"], r["eps"]) for r in serial], [(0.1, 0.0), (0.1, 0.05)])
        self.assertEqual([r["rows"] for r in serial], [r["rows"] for r in parallel])
