"""Outward-rounded comparisons of exact rationals against log thresholds.

Partial sums of block-start reciprocals are exact rationals.  The thresholds
they are compared against, log(M)/L, are irrational for M >= 2, so a verdict
at the boundary must never depend on float luck: comparisons go through
interval arithmetic and the precision is raised until the interval separates
from the rational.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import iv

from .errors import CapExceeded

_MAX_PREC = 4096


def log_threshold_interval(M: int, L: int, prec: int = 96):
    """Enclosure of log(M)/L as (lo, hi) mpf endpoints."""
    if M < 1 or L < 1:
        raise ValueError("threshold parameters must be positive")
    iv.prec = prec
    t = iv.log(M) / L
    return t.a, t.b


def compare_to_log_threshold(value: Fraction, M: int, L: int, prec: int = 96) -> int:
    """Sign of value - log(M)/L: -1, 0, or +1, decided rigorously.

    Zero only occurs for M == 1, where the threshold is exactly zero.
    """
    if M == 1:
        return (value > 0) - (value < 0)
    while prec <= _MAX_PREC:
        iv.prec = prec
        theta = iv.log(M) / L
        v = iv.mpf(value.numerator) / iv.mpf(value.denominator)
        if v.a > theta.b:
            return 1
        if v.b < theta.a:
            return -1
        prec *= 2
    raise CapExceeded("threshold comparison did not separate at maximal precision")
