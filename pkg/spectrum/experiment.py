#!/usr/bin/env python
# coding=utf-8

"""
Batch experiments over the (h, eps) grid of a config:
- raw WKB and direct spectra
- WKB against direct comparison with a fitted convergence slope
- reality sweep of perturbed spectra
- Stokes graph export
"""

import collections
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .action import CONTOUR
from .config import ExperimentConfig
from .direct import direct_spectrum_complex, direct_spectrum_real
from .errors import SpectrumError
from .potential import NO_SYMMETRY
from .quantize import FIELDS, wkb_spectrum
from .stokes import build_graph
from .store import ResultStore

logger = logging.getLogger(__name__)

SPECTRUM_FIELDS = FIELDS + ("errors",)

COMPARISON_FIELDS = ("h", "eps", "k_proxy", "re_lambda_wkb", "im_lambda_wkb", "re_lambda_direct",
                     "im_lambda_direct", "abs_diff", "branch", "errors")

SWEEP_FIELDS = ("eps", "h", "max_abs_im_lambda", "symmetry_class", "roots", "winding", "complete", "errors")


def describe(error):
    return type(error).__name__ + ": " + str(error)


class ComparisonRow(object):

    def __init__(self, h, eps, k_proxy, lambda_wkb, lambda_direct, branch, errors=""):
        self.h = h
        self.eps = eps
        self.k_proxy = k_proxy
        self.lambda_wkb = lambda_wkb
        self.lambda_direct = lambda_direct
        self.branch = branch
        self.errors = errors

    def __str__(self):
        return "ComparisonRow[h=" + repr(self.h) + ", eps=" + repr(self.eps) + ", k=" + str(self.k_proxy) + \
               "] diff=" + repr(self.abs_diff)

    @property
    def matched(self):
        return self.lambda_wkb is not None and self.lambda_direct is not None

    @property
    def abs_diff(self):
        if not self.matched:
            return None
        return abs(self.lambda_wkb - self.lambda_direct)

    @property
    def im_lambda_direct(self):
        return self.lambda_direct.imag if self.lambda_direct is not None else None

    def to_row(self):
        wkb = self.lambda_wkb
        direct = self.lambda_direct
        return [self.h, self.eps, self.k_proxy,
                wkb.real if wkb is not None else None, wkb.imag if wkb is not None else None,
                direct.real if direct is not None else None, self.im_lambda_direct,
                self.abs_diff, self.branch, self.errors]

    @staticmethod
    def from_row(row):
        def pair(re_key, im_key):
            if row[re_key] == "":
                return None
            return complex(float(row[re_key]), float(row[im_key]))

        k_proxy = int(row["k_proxy"]) if row["k_proxy"] != "" else None
        return ComparisonRow(float(row["h"]), float(row["eps"]), k_proxy,
                             pair("re_lambda_wkb", "im_lambda_wkb"),
                             pair("re_lambda_direct", "im_lambda_direct"), row["branch"], row["errors"])


def match_nearest(first, second):
    """
    Pairs two lists of complex numbers by increasing distance, each element used once.

    :return: A list of (index in first or None, index in second or None), ordered by the first list.
    """
    candidates = sorted((abs(a - b), i, j) for i, a in enumerate(first) for j, b in enumerate(second))
    used_first, used_second = set(), set()
    pairs = []
    for _, i, j in candidates:
        if i not in used_first and j not in used_second:
            used_first.add(i)
            used_second.add(j)
            pairs.append((i, j))

    pairs.extend((i, None) for i in range(len(first)) if i not in used_first)
    pairs.extend((None, j) for j in range(len(second)) if j not in used_second)
    return sorted(pairs, key=lambda p: (p[0] is None, p[0] if p[0] is not None else p[1]))


def direct_spectrum(problem):
    if problem.eps == 0 or problem.symmetry != NO_SYMMETRY:
        return direct_spectrum_real(problem)
    return direct_spectrum_complex(problem)


def spectrum_rows(spectrum, h, eps):
    rows = [r.to_row() + [""] for r in spectrum]
    rows.extend([None] * len(FIELDS[:-2]) + [h, eps, failure] for failure in spectrum.failures)
    return rows


def wkb_cell(conf, h, eps):
    problem = ExperimentConfig(data=conf).problem(h, eps)
    try:
        spectrum = wkb_spectrum(problem)
    except SpectrumError as e:
        return {"h": h, "eps": eps, "rows": [[None] * len(FIELDS[:-2]) + [h, eps, describe(e)]], "failed": True}
    return {"h": h, "eps": eps, "rows": spectrum_rows(spectrum, h, eps), "failed": bool(spectrum.failures)}


def direct_cell(conf, h, eps):
    problem = ExperimentConfig(data=conf).problem(h, eps)
    try:
        spectrum = direct_spectrum(problem)
    except SpectrumError as e:
        return {"h": h, "eps": eps, "rows": [[None] * len(FIELDS[:-2]) + [h, eps, describe(e)]], "failed": True}
    return {"h": h, "eps": eps, "rows": spectrum_rows(spectrum, h, eps), "failed": bool(spectrum.failures)}


def compare_cell(conf, h, eps):
    problem = ExperimentConfig(data=conf).problem(h, eps)
    try:
        wkb = wkb_spectrum(problem)
        direct = direct_spectrum(problem)
    except SpectrumError as e:
        return {"h": h, "eps": eps, "rows": [ComparisonRow(h, eps, None, None, None, "", describe(e))],
                "failed": True}

    branch = problem.branch
    errors = "; ".join(wkb.failures + direct.failures)
    rows = []
    for i, j in match_nearest(wkb.eigenvalues, direct.eigenvalues):
        rows.append(ComparisonRow(h, eps, i, wkb.eigenvalues[i] if i is not None else None,
                                  direct.eigenvalues[j] if j is not None else None, branch,
                                  errors if not rows else ""))
    unmatched = any(not row.matched for row in rows)
    if unmatched:
        logger.warning("h=%r eps=%r: %d WKB and %d direct eigenvalues do not match one to one",
                       h, eps, len(wkb), len(direct))
    return {"h": h, "eps": eps, "rows": rows, "failed": bool(errors)}


def sweep_cell(conf, h, eps):
    problem = ExperimentConfig(data=conf).problem(h, eps)
    try:
        spectrum = direct_spectrum_complex(problem)
    except SpectrumError as e:
        return {"h": h, "eps": eps, "failed": True,
                "row": [eps, h, None, problem.symmetry, 0, None, False, describe(e)]}

    max_im = max([abs(lam.imag) for lam in spectrum.eigenvalues] or [0.0])
    row = [eps, h, max_im, problem.symmetry, len(spectrum), spectrum.winding, spectrum.complete,
           "; ".join(spectrum.failures)]
    return {"h": h, "eps": eps, "row": row, "failed": bool(spectrum.failures)}


def run_cells(cell, config, jobs=1, eps_list=None):
    """
    Evaluates one cell function per (h, eps) pair, in a process pool when jobs > 1.

    :param eps_list: Overrides the eps values of the config.
    :return: Cell results sorted by (h, eps).
    """
    conf = config.conf
    eps_list = config.eps_list() if eps_list is None else eps_list
    grid = [(h, eps) for h in config.h_list() for eps in eps_list]

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(cell, conf, h, eps) for h, eps in grid]
            results = [f.result() for f in futures]
    else:
        results = [cell(conf, h, eps) for h, eps in grid]

    return sorted(results, key=lambda r: (r["h"], r["eps"]))


def convergence_slope(rows):
    """
    Least-squares slope of log(max abs_diff) against log(h) over the eps=0 rows.
    """
    worst = {}
    for row in rows:
        if row.eps == 0 and row.matched:
            worst[row.h] = max(worst.get(row.h, 0.0), row.abs_diff)

    points = [(math.log(h), math.log(diff)) for h, diff in sorted(worst.items()) if diff > 0]
    if len(points) < 2:
        return None
    x, y = zip(*points)
    return float(np.polyfit(x, y, 1)[0])


def run_compare(config, jobs=1):
    """
    Always runs the eps=0 cells, whether or not the config lists eps=0.

    :return: A tuple (list of ComparisonRow, convergence slope or None, failed cell count).
    """
    eps_list = sorted(set(config.eps_list()) | {0.0}, reverse=True)
    results = run_cells(compare_cell, config, jobs, eps_list)
    rows = [row for result in results for row in result["rows"]]
    failed = sum(1 for result in results if result["failed"])
    return rows, convergence_slope(rows), failed


def run_pt_sweep(config, jobs=1):
    """
    :return: A tuple (list of rows ordered like SWEEP_FIELDS, failed cell count).
    """
    results = run_cells(sweep_cell, config, jobs)
    rows = sorted((result["row"] for result in results), key=lambda row: (row[0], row[1]))
    return rows, sum(1 for result in results if result["failed"])


def run_stokes(config, lam=None, eps=None):
    lam = config.stokes_lambda() if lam is None else complex(lam)
    eps = config.stokes_eps() if eps is None else eps
    problem = config.problem(config.h_list()[-1], eps)
    return build_graph(problem, lam)


class Experiment(object):
    """
    Runs the subcommands of one experiment config and writes their result files.
    """

    def __init__(self, config, jobs=1, output_dir=None):
        self.config = config
        self.jobs = jobs
        self.output_dir = output_dir or config.output_dir()

    def commands(self):
        """
        Each method listed in the below ordered dict takes no argument and returns a tuple
        (success:boolean, msg:string).

        :return: A dict of commands and their associated method and description.
        """
        c = collections.OrderedDict()
        c["validate"] = (self.validate, "Checks assumption (A1) and the symmetry class of the potential")
        c["wkb"] = (self.wkb, "Solves the quantization condition on every (h, eps) cell")
        c["direct"] = (self.direct, "Computes the Wronskian zeros on every (h, eps) cell")
        c["compare"] = (self.compare, "Matches WKB and direct eigenvalues and fits the convergence slope")
        c["pt-sweep"] = (self.pt_sweep, "Reports max |Im lambda| of the perturbed spectra")
        c["stokes"] = (self.stokes, "Traces the Stokes graph at the configured lambda and eps")
        return c

    def metadata(self, **extra):
        problem = self.config.problem(self.config.h_list()[0], 0.0)
        metadata = {"config_hash": self.config.config_hash(), "version": __version__,
                    "tolerances": json.dumps(problem.tolerances, sort_keys=True),
                    "contour": CONTOUR, "seed_metadata": self.config.seed_metadata()}
        metadata.update(extra)
        return metadata

    def store(self, **extra):
        return ResultStore(self.output_dir, self.metadata(**extra))

    def validate(self):
        problem = self.config.problem(self.config.h_list()[0], 0.0)
        try:
            report = problem.a1_report
        except SpectrumError as e:
            return False, "Potential rejected: " + str(e)

        document = {"a1": report.to_dict(), "symmetry": problem.symmetry, "branch": problem.branch,
                    "x_left": problem.x_left, "x_right": problem.x_right, "potential": problem.spec.to_dict()}
        path = self.store().write_json("validate.json", document)
        return True, str(report) + ", symmetry=" + problem.symmetry + ", branch=" + problem.branch + \
            " (" + path + ")"

    def _spectra(self, cell, name):
        results = run_cells(cell, self.config, self.jobs)
        rows = [row for result in results for row in result["rows"]]
        failed = sum(1 for result in results if result["failed"])
        path = self.store().write_table(name, SPECTRUM_FIELDS, rows)
        count = sum(1 for row in rows if row[0] is not None)
        return failed == 0, str(count) + " eigenvalues over " + str(len(results)) + " cells, " + \
            str(failed) + " failed cells (" + path + ")"

    def wkb(self):
        return self._spectra(wkb_cell, "wkb.csv")

    def direct(self):
        return self._spectra(direct_cell, "direct.csv")

    def compare(self):
        rows, slope, failed = run_compare(self.config, self.jobs)
        store = self.store(convergence_slope=slope if slope is not None else "")
        path = store.write_table("compare.csv", COMPARISON_FIELDS, [row.to_row() for row in rows])
        slope_text = "%.3f" % slope if slope is not None else "n/a"
        return failed == 0, str(len(rows)) + " rows, convergence slope " + slope_text + ", " + \
            str(failed) + " failed cells (" + path + ")"

    def pt_sweep(self):
        rows, failed = run_pt_sweep(self.config, self.jobs)
        path = self.store().write_table("pt-sweep.csv", SWEEP_FIELDS, rows)
        worst = max([row[2] for row in rows if row[2] is not None] or [0.0])
        return failed == 0, "max |Im lambda| = %.3g over %d cells, %d failed cells (%s)" % \
            (worst, len(rows), failed, path)

    def stokes(self):
        try:
            graph = run_stokes(self.config)
        except SpectrumError as e:
            return False, "Stokes graph failed: " + describe(e)

        path = self.store().write_json("stokes.json", graph.to_dict())
        connecting = len(graph.connecting_curves())
        return not graph.failures, str(len(graph.turning_points)) + " turning points, " + \
            str(len(graph.curves)) + " curves, " + str(connecting) + " connecting (" + path + ")"
