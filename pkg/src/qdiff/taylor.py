"""Taylor models and their termwise differentiation through difference operators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .expression import EvalDomainError, Expr, evaluate, nth_derivative, parse
from .limits import ExtrapolationResult, LimitSpec, limit_extrapolate
from .operators import (
    DifferenceScheme,
    SchemeKind,
    pq_difference,
    pq_power_difference,
    q_difference,
    q_power_difference,
    q_power_difference_power_closed_form,
    xi_pq_quotient,
    xi_q_quotient,
)


class OutOfRadiusError(ValueError):
    pass


@dataclass(frozen=True)
class TaylorModel:
    """Truncated expansion ``sum_k c_k (x-a)^k`` with ``c_k = f^(k)(a)/k!``.

    ``smoothness`` is None for analytic functions, else the finite class n.
    """

    center: float
    coefficients: tuple
    radius: float = math.inf
    smoothness: Optional[int] = None

    def __post_init__(self):
        if len(self.coefficients) < 1:
            raise ValueError("a Taylor model needs at least one coefficient")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def check_radius(self, x: float) -> None:
        if not abs(x - self.center) < self.radius:
            raise OutOfRadiusError(f"|x - a| = {abs(x - self.center)} is not below the radius {self.radius}")


@dataclass(frozen=True)
class RemainderSpec:
    """Schlömilch-Roche parameter ``p`` and bound ``M >= sup |f^(N+1)|``."""

    p: float
    M: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("remainder parameter p must be positive")
        if not self.M >= 0:
            raise ValueError("derivative bound M must be non-negative")


@dataclass(frozen=True)
class TaylorDerivative(ExtrapolationResult):
    """Operator-based derivative of a Taylor model at one point."""

    route: str = "direct"
    terms_used: int = 0
    warnings: tuple[str, ...] = ()


def taylor_from_expr(f, a: float, order: int, radius: float = math.inf,
                     smoothness: Optional[int] = None) -> TaylorModel:
    if isinstance(f, str):
        f = parse(f)
    if order < 0:
        raise ValueError("order must be non-negative")
    coefficients = []
    for k, dk in enumerate(nth_derivative(f, order)):
        try:
            value = evaluate(dk, a, exact=True)
        except EvalDomainError as exc:
            raise EvalDomainError(f"derivative of order {k} undefined at a={a}: {exc}", exc.subexpr) from exc
        coefficients.append(value / math.factorial(k))
    return TaylorModel(a, tuple(coefficients), radius, smoothness)


def evaluate_polynomial(tm: TaylorModel, x: float):
    """Horner evaluation of the model at *x*."""
    tm.check_radius(x)
    u = x - tm.center
    acc = 0
    for c in reversed(tm.coefficients):
        acc = acc * u + c
    return acc


def remainder_bound(tm: TaylorModel, x: float, spec: RemainderSpec) -> float:
    """Upper bound of ``|R_{N+1}(x)|`` in Schlömilch-Roche form.

    ``M / (N! p) * |x-a|^p * max_c |x-c|^(N+1-p)`` with c ranging between a
    and x.  p = N+1 gives the Lagrange bound, p = 1 the Cauchy bound.
    """
    tm.check_radius(x)
    d = abs(x - tm.center)
    if d == 0:
        return 0.0
    N = tm.order
    e = N + 1 - spec.p
    # |x-c| ranges over (0, d]; a negative exponent is unbounded as c -> x
    worst = d ** e if e >= 0 else math.inf
    return spec.M / (math.factorial(N) * spec.p) * d ** spec.p * worst


def _is_natural(u: float) -> bool:
    return u >= 1 and float(u).is_integer()


def _monomial_quotient(k: int, u: float, scheme: DifferenceScheme, sign: int, xi_route: bool):
    """Offset-parameterised quotient of ``u^k`` under *scheme*."""
    kind = scheme.kind
    base = scheme.base
    if xi_route:
        n = int(u)
        if kind is SchemeKind.PQ:
            return lambda h: xi_pq_quotient(n, k, base + sign * h, base)
        return lambda h: xi_q_quotient(n, k, 1 + sign * h)
    mono = lambda t: t ** k  # noqa: E731
    if kind in (SchemeKind.Q_FORWARD, SchemeKind.Q_BACKWARD):
        return lambda h: q_difference(mono, u, 1 + sign * h)
    if kind in (SchemeKind.QPOWER_FORWARD, SchemeKind.QPOWER_BACKWARD):
        return lambda h: q_power_difference(mono, u, 1 + sign * h)
    if kind is SchemeKind.PQ:
        return lambda h: pq_difference(mono, u, base + sign * h, base)
    return lambda h: pq_power_difference(mono, u, base + sign * h, base)


def _consumed_terms(tm: TaylorModel, u: float, tol: float) -> int:
    """Highest k whose derivative term still matters.

    Finite-smoothness models use every stored term.  Analytic models stop once
    the largest remaining term bound ``j |c_j| |u|^(j-1)`` is below tol/10.
    """
    N = tm.order
    if tm.smoothness is not None or N == 0:
        return N
    bounds = [k * abs(float(tm.coefficients[k])) * abs(u) ** (k - 1) for k in range(1, N + 1)]
    tail = 0.0
    last = 0
    for k in range(N, 0, -1):
        tail = max(tail, bounds[k - 1])
        if tail >= tol / 10:
            last = k
            break
    return last


def taylor_derivative_via_operator(tm: TaylorModel, x0: float, scheme: DifferenceScheme,
                                   spec: LimitSpec = LimitSpec(), route: str = "auto") -> TaylorDerivative:
    """Differentiate the model at *x0* by applying *scheme* to each ``(x-a)^k``.

    The quotients act on the displacement ``u = x0 - a``.  With ``route="auto"``
    a natural ``u`` and a q or (p,q) scheme go through the exact xi quotients;
    otherwise the direct quotient of ``u^k`` is used.  The per-term quotients
    are summed in ascending k and the sum is extrapolated once.
    """
    tm.check_radius(x0)
    u = x0 - tm.center
    scheme.check_point(u)
    sign = scheme.side if scheme.side is not None else spec.side.sign
    xi_ok = _is_natural(u) and not scheme.kind.is_power
    if route == "auto":
        use_xi = xi_ok
    elif route == "xi":
        if not xi_ok:
            raise ValueError("xi route needs a natural displacement x0 - a and a q or (p,q) scheme")
        use_xi = True
    elif route == "direct":
        use_xi = False
    else:
        raise ValueError(f"unknown route {route!r}")

    warnings = []
    if tm.smoothness is not None:
        warnings.append(
            f"finite smoothness C^{tm.smoothness}: derivative of the order-{tm.order} "
            "polynomial part only; the remainder derivative is not included"
        )
    last = _consumed_terms(tm, u, spec.tol)
    terms = [(float(tm.coefficients[k]), _monomial_quotient(k, u, scheme, sign, use_xi))
             for k in range(1, last + 1)]

    if not terms:
        res = ExtrapolationResult(0.0, 0.0, 0, True)
    else:
        def quotient(h):
            total = 0.0
            for c, qk in terms:
                total += c * qk(h)
            return total

        res = limit_extrapolate(quotient, spec)
    return TaylorDerivative(res.value, res.error, res.steps, res.converged, res.trace, res.corrections,
                            route="xi" if use_xi else "direct", terms_used=last, warnings=tuple(warnings))


def iterated_power_derivative(m: int, N: int, x: float, q_scheme: DifferenceScheme,
                              spec: LimitSpec = LimitSpec()) -> float:
    """N-th derivative of ``x^m`` by N applications of the q-power derivative.

    Each pass extrapolates the closed-form q-power quotient of the current
    monomial ``x^d`` to its limit ``L``; the result is the monomial
    ``(L / x^(d-1)) x^(d-1)``, so the degree drops by one per pass.
    """
    if q_scheme.kind not in (SchemeKind.QPOWER_FORWARD, SchemeKind.QPOWER_BACKWARD):
        raise ValueError("iterated power derivative needs a q-power scheme")
    if not 1 <= N <= m:
        raise ValueError(f"order N={N} must satisfy 1 <= N <= m={m}")
    q_scheme.check_point(x)
    sign = q_scheme.side
    coefficient = 1.0
    for d in range(m, m - N, -1):
        res = limit_extrapolate(lambda h, d=d: q_power_difference_power_closed_form(x, d, 1 + sign * h), spec)
        if not res.converged:
            raise ArithmeticError(f"q-power limit did not converge for degree {d}")
        coefficient *= res.value / x ** (d - 1)
    return coefficient * x ** (m - N)
