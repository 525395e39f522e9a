"""Numerical limits of difference quotients by Neville extrapolation.

A quotient ``Q(h)`` is sampled on the geometric schedule ``h_i = h0 * rho^i``
and the tableau extrapolates the interpolating polynomial in ``h`` to
``h = 0``.  One-sided q-quotients have an error expansion in all powers of
``q - 1``, so the tableau works in ``h`` rather than ``h^2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

from .expression import as_function
from .operators import (
    DifferenceScheme,
    SchemeKind,
    pq_difference,
    pq_power_difference,
    q_difference,
    q_power_difference,
)


class Side(enum.Enum):
    ABOVE = "above"
    BELOW = "below"

    @property
    def sign(self) -> int:
        return 1 if self is Side.ABOVE else -1


class NonFiniteQuotientError(ArithmeticError):
    """The quotient returned inf/nan at some offset of the schedule."""

    def __init__(self, offset: float, value: float):
        self.offset = offset
        self.value = value
        super().__init__(f"quotient is {value} at offset h={offset!r}")


@dataclass(frozen=True)
class LimitSpec:
    side: Side = Side.ABOVE
    h0: float = 2.0 ** -4
    rho: float = 0.5
    max_steps: int = 24
    tol: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "side", Side(self.side))
        if not 0 < self.rho < 1:
            raise ValueError("shrink ratio rho must lie in (0, 1)")
        if not self.h0 > 0:
            raise ValueError("initial offset h0 must be positive")
        if self.max_steps < 2:
            raise ValueError("max_steps must be >= 2")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class ExtrapolationResult:
    value: float
    error: float
    steps: int
    converged: bool
    trace: tuple[tuple[float, float], ...] = ()
    corrections: tuple[float, ...] = field(default=(), repr=False)


def limit_extrapolate(quotient: Callable[[float], float], spec: LimitSpec = LimitSpec()) -> ExtrapolationResult:
    """Extrapolate ``lim_{h -> 0+} quotient(h)``.

    Stops as soon as the last tableau correction drops below
    ``spec.tol * max(1, |value|)``.  Without convergence the diagonal entry
    with the smallest correction is returned with ``converged=False``.
    """
    trace = []
    corrections = []
    prev_row: list[float] = []
    best = None  # (error, value, step)
    h = spec.h0
    for i in range(spec.max_steps):
        if i:
            h = spec.h0 * spec.rho ** i
        v = quotient(h)
        if not math.isfinite(v):
            raise NonFiniteQuotientError(h, v)
        v = float(v)
        trace.append((h, v))
        row = [v]
        # Neville for geometric nodes: T[i][j] = T[i][j-1] + (T[i][j-1] - T[i-1][j-1]) / (rho^-j - 1)
        for j in range(1, i + 1):
            factor = spec.rho ** -j - 1
            row.append(row[j - 1] + (row[j - 1] - prev_row[j - 1]) / factor)
        if i:
            diag = row[i]
            err = max(abs(diag - row[i - 1]), abs(diag - prev_row[i - 1]))
            corrections.append(err)
            if not math.isfinite(diag):
                break
            if best is None or err < best[0]:
                best = (err, diag, i + 1)
            if err <= spec.tol * max(1.0, abs(diag)):
                return ExtrapolationResult(diag, err, i + 1, True, tuple(trace), tuple(corrections))
        prev_row = row
    err, value, _ = best if best is not None else (math.inf, trace[-1][1], len(trace))
    return ExtrapolationResult(value, err, len(trace), False, tuple(trace), tuple(corrections))


def _side_sign(scheme: DifferenceScheme, spec: LimitSpec) -> int:
    s = scheme.side
    return spec.side.sign if s is None else s


def scheme_quotient(f, x: float, scheme: DifferenceScheme, spec: LimitSpec) -> Callable[[float], float]:
    """The scheme's quotient at *x* as a function of the limit offset h."""
    scheme.check_point(x)
    g = as_function(f)
    sign = _side_sign(scheme, spec)
    kind = scheme.kind
    if kind in (SchemeKind.Q_FORWARD, SchemeKind.Q_BACKWARD):
        return lambda h: q_difference(g, x, 1 + sign * h)
    if kind in (SchemeKind.QPOWER_FORWARD, SchemeKind.QPOWER_BACKWARD):
        return lambda h: q_power_difference(g, x, 1 + sign * h)
    base = scheme.base
    if kind is SchemeKind.PQ:
        return lambda h: pq_difference(g, x, base + sign * h, base)
    return lambda h: pq_power_difference(g, x, base + sign * h, base)


def limit_point(x: float, scheme: DifferenceScheme) -> float:
    """Where the derivative is taken in the limit: ``qx`` for (p,q), ``x^q`` for (p,q)-power."""
    if scheme.kind is SchemeKind.PQ:
        return scheme.base * x
    if scheme.kind is SchemeKind.PQPOWER:
        return x ** scheme.base
    return x


def derivative_estimate(f, x: float, scheme: DifferenceScheme, spec: LimitSpec = LimitSpec()) -> ExtrapolationResult:
    """Limit of the scheme's quotient at *x*.

    For the q and q-power kinds this is ``f'(x)``.  For a (p,q) kind with
    base q the limit is ``f'(q x)`` (resp. ``f'(x^q)``), see :func:`limit_point`.
    """
    return limit_extrapolate(scheme_quotient(f, x, scheme, spec), spec)
