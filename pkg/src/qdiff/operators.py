"""Single-quotient difference operators and their monomial closed forms.

Forward and backward variants share one quotient; the direction only
matters for the side from which :mod:`qdiff.limits` approaches the limit.
Every operator accepts an expression tree, expression text, or a callable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .expression import as_function
from .identities import xi


class DegenerateQuotientError(ValueError):
    """The quotient's denominator vanishes for the given parameters."""


class SchemeKind(enum.Enum):
    Q_FORWARD = "q+"
    Q_BACKWARD = "q-"
    PQ = "pq"
    QPOWER_FORWARD = "qpow+"
    QPOWER_BACKWARD = "qpow-"
    PQPOWER = "pqpow"

    @property
    def is_power(self) -> bool:
        return self in (SchemeKind.QPOWER_FORWARD, SchemeKind.QPOWER_BACKWARD, SchemeKind.PQPOWER)

    @property
    def is_pq(self) -> bool:
        return self in (SchemeKind.PQ, SchemeKind.PQPOWER)


@dataclass(frozen=True)
class DifferenceScheme:
    """Operator family plus parameters.

    ``q`` is the deformation parameter of the single quotient.  For the
    (p,q) kinds ``q`` is the fixed base and ``p`` the moving parameter; in a
    limit the moving parameter is generated from the offset schedule, so only
    the base needs to be set (default 1).
    """

    kind: SchemeKind
    q: Optional[float] = None
    p: Optional[float] = None

    def __post_init__(self):
        kind = SchemeKind(self.kind)
        object.__setattr__(self, "kind", kind)
        q, p = self.q, self.p
        if kind is SchemeKind.Q_FORWARD and q is not None and not q > 1:
            raise ValueError("forward q-difference requires q > 1")
        if kind is SchemeKind.Q_BACKWARD and q is not None and not 0 < q < 1:
            raise ValueError("backward q-difference requires 0 < q < 1")
        if kind is SchemeKind.QPOWER_FORWARD and q is not None and not q > 1:
            raise ValueError("forward q-power difference requires q > 1")
        if kind is SchemeKind.QPOWER_BACKWARD and q is not None and not 0 < q < 1:
            raise ValueError("backward q-power difference requires 0 < q < 1")
        if kind.is_pq and p is not None and p == self.base:
            raise ValueError("(p,q) schemes require p != q")

    @property
    def base(self) -> float:
        """Fixed base of a (p,q) scheme."""
        return 1.0 if self.q is None else self.q

    @property
    def side(self) -> Optional[int]:
        """+1 / -1 for the directional q-kinds, None where the limit spec decides."""
        if self.kind in (SchemeKind.Q_FORWARD, SchemeKind.QPOWER_FORWARD):
            return 1
        if self.kind in (SchemeKind.Q_BACKWARD, SchemeKind.QPOWER_BACKWARD):
            return -1
        return None

    def check_point(self, x: float) -> None:
        """Raise ValueError if *x* is inadmissible for this scheme."""
        if self.kind.is_power:
            if not x > 0 or x == 1:
                raise ValueError(f"x={x} inadmissible for q-power difference (need x > 0, x != 1)")
        elif x == 0:
            raise ValueError(f"x={x} inadmissible for q-difference")

    def quotient(self, f, x: float) -> float:
        """Evaluate this scheme's single quotient with its own parameters."""
        kind = self.kind
        if kind.is_pq:
            if self.p is None:
                raise ValueError("(p,q) scheme needs p for a single quotient")
            if kind is SchemeKind.PQ:
                return pq_difference(f, x, self.p, self.base)
            return pq_power_difference(f, x, self.p, self.base)
        if self.q is None:
            raise ValueError("scheme needs q for a single quotient")
        if kind.is_power:
            return q_power_difference(f, x, self.q)
        return q_difference(f, x, self.q)


def q_difference(f, x: float, q: float) -> float:
    """Jackson quotient ``(f(x) - f(qx)) / ((1-q) x)``."""
    if x == 0:
        raise DegenerateQuotientError(f"x={x} inadmissible for q-difference")
    if q == 1:
        raise DegenerateQuotientError("q-difference needs q != 1")
    g = as_function(f)
    return (g(x) - g(q * x)) / ((1 - q) * x)


def pq_difference(f, x: float, p: float, q: float) -> float:
    """``(f(px) - f(qx)) / ((p-q) x)``; equals :func:`q_difference` at p = 1."""
    if x == 0:
        raise DegenerateQuotientError(f"x={x} inadmissible for (p,q)-difference")
    if p == q:
        raise DegenerateQuotientError("(p,q)-difference needs p != q")
    g = as_function(f)
    return (g(p * x) - g(q * x)) / ((p - q) * x)


def _check_power_point(x: float) -> None:
    if not x > 0 or x == 1:
        raise DegenerateQuotientError(f"x={x} inadmissible for q-power difference (need x > 0, x != 1)")


def q_power_difference(f, x: float, q: float) -> float:
    """``(f(x^q) - f(x)) / (x^q - x)`` for x > 0, x != 1."""
    _check_power_point(x)
    if q == 1:
        raise DegenerateQuotientError("q-power difference needs q != 1")
    g = as_function(f)
    xq = x ** q
    if xq == x:
        raise DegenerateQuotientError("zero denominator: x^q == x")
    return (g(xq) - g(x)) / (xq - x)


def pq_power_difference(f, x: float, p: float, q: float) -> float:
    """``(f(x^p) - f(x^q)) / (x^p - x^q)``; equals :func:`q_power_difference` at q = 1."""
    _check_power_point(x)
    if p == q:
        raise DegenerateQuotientError("(p,q)-power difference needs p != q")
    g = as_function(f)
    xp = x ** p
    xq = x ** q
    if xp == xq:
        raise DegenerateQuotientError("zero denominator: x^p == x^q")
    return (g(xp) - g(xq)) / (xp - xq)


def q_derivative_power_closed_form(x, n: int, q):
    """``x^(n-1) * sum_{k<n} q^k``: the q-difference of ``x^n`` without cancellation."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return x ** (n - 1) * sum(q ** k for k in range(n))


def q_derivative_power_high_order(x, n: int, k: int, q, literal: bool = False):
    """k-th order q-derivative of ``x^n`` as ``x^(n-k) * prod_j sum_m q^m``.

    The inner sum runs over ``m = 0 .. n-j-1``, giving ``n!/(n-k)! x^(n-k)``
    at q = 1.  ``literal=True`` uses the upper bound ``n-j`` instead, which
    yields ``(n+1)!/(n-k+1)! x^(n-k)`` at q = 1 and is kept for comparison.
    """
    if not 1 <= k <= n:
        raise ValueError(f"order k={k} must satisfy 1 <= k <= n={n}")
    extra = 1 if literal else 0
    prod = 1
    for j in range(k):
        prod *= sum(q ** m for m in range(n - j + extra))
    return x ** (n - k) * prod


def q_power_difference_power_closed_form(x, m: int, q):
    """``sum_{k=1..m} (x^q)^(m-k) x^(k-1)``: the q-power difference of ``x^m``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not x > 0:
        raise ValueError("x must be positive")
    xq = x if q == 1 else x ** q
    return sum(xq ** (m - k) * x ** (k - 1) for k in range(1, m + 1))


def literal_q_power_high_order(x, m: int, N: int, q):
    """Experimental: the printed product ``prod_j sum_{k=1..m-j} (x^q)^(m-k) x^(k-j-1)``.

    Its x-exponent at q = 1 is ``N*m - N(N+1)/2``, not ``m - N``, so it does not
    reproduce the N-th derivative for N >= 2; use
    :func:`qdiff.taylor.iterated_power_derivative` for that.
    """
    if not 1 <= N <= m:
        raise ValueError(f"order N={N} must satisfy 1 <= N <= m={m}")
    xq = x ** q
    prod = 1
    for j in range(N):
        prod *= sum(xq ** (m - k) * x ** (k - j - 1) for k in range(1, m - j + 1))
    return prod


def _as_exact(v):
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite parameter {v}")
        return Fraction(v)
    return Fraction(v)


def xi_q_quotient(x: int, n: int, q) -> float:
    """``(xi(x, q, n) - xi(x, 1, n)) / (x q - x)``, computed exactly then rounded.

    Equal to ``x^(n-1) (q^n - 1)/(q - 1)``.  Returns a Fraction when *q* is
    rational, a float when *q* is a float.
    """
    if q == 1:
        raise DegenerateQuotientError("xi quotient needs q != 1")
    qe = _as_exact(q)
    value = (xi(x, qe, n) - xi(x, 1, n)) / (x * qe - x)
    return float(value) if isinstance(q, float) else value


def xi_pq_quotient(x: int, n: int, p, q) -> float:
    """``(xi(x, p, n) - xi(x, q, n)) / (x p - x q)`` = ``x^(n-1) (p^n - q^n)/(p - q)``."""
    if p == q:
        raise DegenerateQuotientError("xi (p,q) quotient needs p != q")
    pe, qe = _as_exact(p), _as_exact(q)
    value = (xi(x, pe, n) - xi(x, qe, n)) / (x * pe - x * qe)
    return float(value) if isinstance(p, float) or isinstance(q, float) else value
