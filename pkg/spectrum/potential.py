#!/usr/bin/env python
# coding=utf-8

"""
Analytic potential families A(x), B(x) and the perturbed potential A_eps = A + i*eps*B.

Every family is stored as two finite sums of closed-form terms, so values and
derivatives are exact at any complex point of the analyticity strip.
"""

import cmath
import logging

import numpy as np
from scipy.optimize import brentq

from .errors import A1Violated, OutOfStrip

logger = logging.getLogger(__name__)

WELL_EVEN = "well-even"
MONOTONE_ODD = "monotone-odd"
CUSTOM = "custom-sum-of-terms"

FAMILIES = (WELL_EVEN, MONOTONE_ODD, CUSTOM)

TERM_KINDS = ("const", "tanh", "gauss", "xgauss")

A_EVEN_B_ODD = "A-even-B-odd"
A_ODD_B_EVEN = "A-odd-B-even"
NO_SYMMETRY = "none"

SIMPLE_WELL = "simple-well"
MONOTONIC = "monotonic"

DEFAULT_CUTOFF = 8.0
GAUSSIAN_STRIP = 10.0  # entire functions, capped
TANH_STRIP = 0.5

SYMMETRY_GRID_POINTS = 101
SYMMETRY_TOLERANCE = 1e-12

A1_GRID_POINTS = 4001
A1_ROOT_TOLERANCE = 1e-14
DEGENERACY_TOLERANCE = 1e-8


class Term(object):
    """
    One closed-form term: coeff * {1, tanh(scale x), exp(-scale x^2), x exp(-scale x^2)}.
    """

    def __init__(self, kind, coeff, scale=1.0):
        if kind not in TERM_KINDS:
            raise ValueError("unknown term kind: " + str(kind))
        if kind != "const" and scale <= 0:
            raise ValueError("term scale must be positive")

        self.kind = kind
        self.coeff = float(coeff)
        self.scale = float(scale)

    def __str__(self):
        return self.kind + "(" + str(self.coeff) + ", " + str(self.scale) + ")"

    def evaluate(self, z):
        c = self.scale
        if self.kind == "const":
            return self.coeff * np.ones_like(z), np.zeros_like(z)
        if self.kind == "tanh":
            t = np.tanh(c * z)
            return self.coeff * t, self.coeff * c * (1.0 - t * t)

        g = np.exp(-c * z * z)
        if self.kind == "gauss":
            return self.coeff * g, -2.0 * c * self.coeff * z * g

        return self.coeff * z * g, self.coeff * (1.0 - 2.0 * c * z * z) * g

    def evaluate_scalar(self, z):
        c = self.scale
        if self.kind == "const":
            return self.coeff, 0.0
        if self.kind == "tanh":
            t = cmath.tanh(c * z)
            return self.coeff * t, self.coeff * c * (1.0 - t * t)

        g = cmath.exp(-c * z * z)
        if self.kind == "gauss":
            return self.coeff * g, -2.0 * c * self.coeff * z * g

        return self.coeff * z * g, self.coeff * (1.0 - 2.0 * c * z * z) * g

    def to_list(self):
        return [self.kind, self.coeff, self.scale]

    @staticmethod
    def from_list(entry):
        if len(entry) == 2:
            return Term(entry[0], entry[1])
        return Term(entry[0], entry[1], entry[2])


class PotentialSpec(object):
    """
    Immutable description of the pair (A, B) and of the analyticity strip |Im z| < delta.
    """

    def __init__(self, family, params=None, strip_half_width=None, a_terms=None, b_terms=None):
        if family not in FAMILIES:
            raise ValueError("unknown potential family: " + str(family))

        self.family = family
        self.params = [float(p) for p in (params or [])]

        if family == WELL_EVEN:
            self.a_terms, self.b_terms = self.well_even_terms(self.params)
        elif family == MONOTONE_ODD:
            self.a_terms, self.b_terms = self.monotone_odd_terms(self.params)
        else:
            if not a_terms:
                raise ValueError("custom potentials need at least one A term")
            self.a_terms = list(a_terms)
            self.b_terms = list(b_terms or [])

        tanh_scales = [t.scale for t in self.a_terms + self.b_terms if t.kind == "tanh"]
        if strip_half_width is None:
            if tanh_scales:
                strip_half_width = TANH_STRIP / max(tanh_scales)
            else:
                strip_half_width = GAUSSIAN_STRIP

        if strip_half_width <= 0:
            raise ValueError("strip_half_width must be positive")
        if tanh_scales and strip_half_width >= np.pi / (2.0 * max(tanh_scales)):
            raise ValueError("strip reaches a pole of tanh")

        self.strip_half_width = float(strip_half_width)

    def __str__(self):
        return "PotentialSpec[" + self.family + "] A=" + " + ".join(str(t) for t in self.a_terms) + \
               ", B=" + " + ".join(str(t) for t in self.b_terms)

    @staticmethod
    def well_even_terms(params):
        if len(params) != 2:
            raise ValueError("well-even needs params [a, b]")
        a, b = params
        if not a > b > 0:
            raise ValueError("well-even needs a > b > 0")
        return [Term("const", a), Term("gauss", -b)], [Term("xgauss", 1.0)]

    @staticmethod
    def monotone_odd_terms(params):
        if len(params) != 1 or params[0] <= 0:
            raise ValueError("monotone-odd needs params [a] with a > 0")
        return [Term("tanh", params[0])], [Term("gauss", 1.0)]

    def to_dict(self):
        out = {"family": self.family, "params": list(self.params), "strip_half_width": self.strip_half_width}
        if self.family == CUSTOM:
            out["terms"] = {"A": [t.to_list() for t in self.a_terms],
                            "B": [t.to_list() for t in self.b_terms]}
        return out

    @staticmethod
    def from_dict(data):
        if "family" not in data:
            raise KeyError("missing config key: potential.family")

        terms = data.get("terms") or {}
        a_terms = [Term.from_list(entry) for entry in terms.get("A", [])]
        b_terms = [Term.from_list(entry) for entry in terms.get("B", [])]
        return PotentialSpec(data["family"], data.get("params"), data.get("strip_half_width"),
                             a_terms, b_terms)


def sum_terms(terms, z):
    value = np.zeros_like(z)
    derivative = np.zeros_like(z)
    for term in terms:
        v, d = term.evaluate(z)
        value = value + v
        derivative = derivative + d
    return value, derivative


def eval_parts(spec, z):
    """
    :return: A(z), A'(z), B(z), B'(z); scalars in, scalars out.
    """
    scalar = np.isscalar(z)
    zz = np.asarray(z, dtype=complex)
    if np.any(np.abs(zz.imag) >= spec.strip_half_width):
        raise OutOfStrip("|Im z| must stay below " + str(spec.strip_half_width))

    a, da = sum_terms(spec.a_terms, zz)
    b, db = sum_terms(spec.b_terms, zz)
    if scalar:
        return complex(a), complex(da), complex(b), complex(db)
    return a, da, b, db


def eval_potential(spec, z, eps):
    """
    Evaluates A_eps(z) = A(z) + i eps B(z) and its derivative from the closed forms.

    :param spec: The PotentialSpec.
    :param z: Complex point (or numpy array of points) inside the strip.
    :param eps: Perturbation strength, eps >= 0.
    :return: A tuple (value, derivative).
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")

    a, da, b, db = eval_parts(spec, z)
    return a + 1j * eps * b, da + 1j * eps * db


def eval_scalar(spec, z, eps):
    """
    Scalar fast path of eval_potential for the ODE right-hand side and the Stokes tracer.
    """
    z = complex(z)
    if abs(z.imag) >= spec.strip_half_width:
        raise OutOfStrip("|Im z| must stay below " + str(spec.strip_half_width))

    a = da = 0j
    for term in spec.a_terms:
        v, d = term.evaluate_scalar(z)
        a += v
        da += d
    if eps:
        for term in spec.b_terms:
            v, d = term.evaluate_scalar(z)
            a += 1j * eps * v
            da += 1j * eps * d
    return a, da


def real_a(spec, x):
    return sum_terms(spec.a_terms, np.asarray(x, dtype=float))[0]


def classify_symmetry(spec, cutoff=DEFAULT_CUTOFF, tol=SYMMETRY_TOLERANCE):
    """
    Decides which parity pairing of assumption (A2) holds on a symmetric sample grid.

    :return: One of A_EVEN_B_ODD, A_ODD_B_EVEN, NO_SYMMETRY.
    """
    x = np.linspace(-cutoff, cutoff, SYMMETRY_GRID_POINTS)
    a, _, b, _ = eval_parts(spec, x)
    a_ref, _, b_ref, _ = eval_parts(spec, -x)

    a_scale = max(1.0, np.max(np.abs(a)))
    b_scale = max(1.0, np.max(np.abs(b)))

    a_even = np.max(np.abs(a - a_ref)) <= tol * a_scale
    a_odd = np.max(np.abs(a + a_ref)) <= tol * a_scale
    b_even = np.max(np.abs(b - b_ref)) <= tol * b_scale
    b_odd = np.max(np.abs(b + b_ref)) <= tol * b_scale

    if a_even and b_odd:
        return A_EVEN_B_ODD
    if a_odd and b_even:
        return A_ODD_B_EVEN
    return NO_SYMMETRY


class A1Report(object):
    """
    Real turning points of the unperturbed potential at level lambda0.
    """

    def __init__(self, alpha0, beta0, lambda0, slopes, well_type, margins):
        self.alpha0 = alpha0
        self.beta0 = beta0
        self.lambda0 = lambda0
        self.slopes = slopes
        self.well_type = well_type
        self.margins = margins
        self.margin_at_infinity = min(margins)

    def __str__(self):
        return "A1Report[" + self.well_type + "] alpha0=" + repr(self.alpha0) + ", beta0=" + repr(self.beta0) + \
               ", lambda0=" + repr(self.lambda0) + ", margin=" + repr(self.margin_at_infinity)

    def to_dict(self):
        return {"alpha0": self.alpha0, "beta0": self.beta0, "lambda0": self.lambda0,
                "slopes": list(self.slopes), "well_type": self.well_type,
                "margin_at_infinity": self.margin_at_infinity}


def validate_A1(spec, lambda0, cutoff=DEFAULT_CUTOFF):
    """
    Locates the two real solutions of |A(x)| = lambda0 on [-cutoff, cutoff] and checks
    the items of assumption (A1) that finitely many samples can decide.

    The liminf condition at infinity is only checked at the cutoffs.

    :return: An A1Report.
    """
    if lambda0 <= 0 or cutoff <= 0:
        raise ValueError("lambda0 and cutoff must be positive")

    def gap(x):
        return abs(float(real_a(spec, x))) - lambda0

    x = np.linspace(-cutoff, cutoff, A1_GRID_POINTS)
    above = np.abs(real_a(spec, x)) - lambda0 > 0
    changes = np.nonzero(above[1:] != above[:-1])[0]

    if len(changes) == 0:
        raise A1Violated("no-crossings", "|A| never reaches lambda0 on the sampled range")
    if len(changes) > 2:
        raise A1Violated("extra-crossings", str(len(changes)) + " crossings found")
    if not (above[0] and above[-1]):
        raise A1Violated("no-margin-at-infinity", "|A| <= lambda0 at a cutoff")
    if len(changes) == 1:
        raise A1Violated("extra-crossings", "a single crossing found")

    roots = [brentq(gap, x[i], x[i + 1], xtol=A1_ROOT_TOLERANCE) for i in changes]
    alpha0, beta0 = roots

    _, slope_alpha, _, _ = eval_parts(spec, alpha0)
    _, slope_beta, _, _ = eval_parts(spec, beta0)
    slopes = (slope_alpha.real, slope_beta.real)
    if min(abs(slopes[0]), abs(slopes[1])) <= DEGENERACY_TOLERANCE:
        raise A1Violated("zero-slope", "A'(alpha0)A'(beta0) vanishes")

    if float(real_a(spec, alpha0)) * float(real_a(spec, beta0)) > 0:
        well_type = SIMPLE_WELL
    else:
        well_type = MONOTONIC

    margins = (gap(-cutoff), gap(cutoff))
    logger.debug("A1 report: alpha0=%r beta0=%r type=%s", alpha0, beta0, well_type)
    return A1Report(alpha0, beta0, lambda0, slopes, well_type, margins)
