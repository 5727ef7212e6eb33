#!/usr/bin/env python
# coding=utf-8

"""
Exceptions raised by the spectral toolkit.

Every failure is a ValueError so callers that only care about "bad input or no result"
can catch a single type, the same way the engine used to report upgrade failures.
"""


class SpectrumError(ValueError):
    pass


class OutOfStrip(SpectrumError):
    pass


class A1Violated(SpectrumError):

    def __init__(self, reason, detail=""):
        self.reason = reason
        message = "assumption (A1) violated: " + reason
        if detail:
            message += " (" + detail + ")"
        super(A1Violated, self).__init__(message)


class NoConvergence(SpectrumError):
    pass


class LeftStrip(SpectrumError):
    pass


class Collision(SpectrumError):

    def __init__(self, alpha, beta, message=None):
        self.alpha = alpha
        self.beta = beta
        if message is None:
            message = "turning points merge near " + str(alpha)
        super(Collision, self).__init__(message)


class BranchSwap(SpectrumError):
    pass


class PathTooCoarse(SpectrumError):
    pass


class QuadratureNoConvergence(SpectrumError):
    pass


class BranchAmbiguity(SpectrumError):
    pass


class DegenerateSegment(SpectrumError):
    pass


class SymmetryRequired(SpectrumError):
    pass


class EmptyWindow(SpectrumError):
    pass


class LeftWindow(SpectrumError):
    pass


class InsideWell(SpectrumError):
    pass


class StepUnderflow(SpectrumError):
    pass


class PhaseTrackingLost(SpectrumError):
    pass


class BoundaryZero(SpectrumError):
    pass


class PhaseResolution(SpectrumError):
    pass


class MissedZeros(SpectrumError):
    pass


class DegenerateTurningPoint(SpectrumError):
    pass


class StepFailure(SpectrumError):
    pass
