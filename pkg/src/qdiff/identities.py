"""Exact discrete power identities over the naturals.

Every function here works in unbounded rational arithmetic, so the identities
can be checked with zero tolerance.  The central object is the term
polynomial

    u_k(x, n) = 6*k*x^(n-2) - 6*k^2*x^(n-3) + x^(n-3)

whose sum over ``k = 0 .. x-1`` is ``x^n``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb

J = 6  # 3!


class SetVariant(enum.Enum):
    """Index set of the expansion sum."""

    C = "C"  #: {0, ..., x}
    U = "U"  #: {0, ..., x-1}
    S = "S"  #: {1, ..., x}

    def indices(self, x: int) -> range:
        if self is SetVariant.C:
            return range(0, x + 1)
        if self is SetVariant.U:
            return range(0, x)
        return range(1, x + 1)


def _check_natural(name: str, value, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def term(k: int, x: int, n: int) -> Fraction:
    """The term polynomial ``6k x^(n-2) - 6k^2 x^(n-3) + x^(n-3)`` (exact)."""
    xf = Fraction(x)
    return J * k * xf ** (n - 2) - J * k * k * xf ** (n - 3) + xf ** (n - 3)


@dataclass(frozen=True)
class ExpansionTermList:
    x: int
    n: int
    variant: SetVariant
    indices: tuple[int, ...]
    terms: tuple[Fraction, ...]
    j: int = J

    def total(self) -> Fraction:
        return sum(self.terms, Fraction(0))


def binomial_growth_expansion(x, dx, n: int):
    """``sum_{k=1..n} C(n,k) x^(n-k) dx^(k-1)``, i.e. ``((x+dx)^n - x^n)/dx``."""
    n = _check_natural("n", n)
    if dx == 0:
        raise ValueError("dx must be nonzero")
    return sum(comb(n, k) * x ** (n - k) * dx ** (k - 1) for k in range(1, n + 1))


def forward_difference_power(x, n: int):
    """``Delta(x^n) = sum_{k=1..n} C(n,k) x^(n-k) = (x+1)^n - x^n``."""
    n = _check_natural("n", n)
    return sum(comb(n, k) * x ** (n - k) for k in range(1, n + 1))


def power_expansion_terms(x: int, n: int, variant: SetVariant = SetVariant.U) -> ExpansionTermList:
    """Tabulate the term polynomial over the variant's index set."""
    x = _check_natural("x", x)
    n = _check_natural("n", n)
    variant = SetVariant(variant)
    idx = tuple(variant.indices(x))
    return ExpansionTermList(x, n, variant, idx, tuple(term(k, x, n) for k in idx))


def power_via_expansion(x: int, n: int, variant: SetVariant = SetVariant.U) -> Fraction:
    """Reconstruct ``x^n`` from the expansion over the chosen index set.

    For U and S the tabulated terms are summed directly.  For C the sum uses
    the leading ``x^(n-2)`` form: ``x^(n-2) + 6*sum_{k=0..x}(k x^(n-2) - k^2 x^(n-3))``,
    which is the same as the tabulated terms minus one ``x^(n-3)`` per index.
    """
    table = power_expansion_terms(x, n, variant)
    if table.variant is not SetVariant.C:
        return table.total()
    xf = Fraction(table.x)
    return xf ** (n - 2) + table.total() - len(table.terms) * xf ** (n - 3)


def xi(x: int, t, n: int):
    """``(x*t)^n`` built termwise: ``sum_{k<x} u_k(x, n) * t^n``.

    Exact for rational ``t`` (int or Fraction); a float ``t`` gives a float.
    """
    x = _check_natural("x", x)
    n = _check_natural("n", n)
    tn = t ** n
    if isinstance(t, float):
        return sum(float(term(k, x, n)) * tn for k in range(x))
    tn = Fraction(tn)
    return sum((term(k, x, n) * tn for k in range(x)), Fraction(0))


def telescoping_power_sum(x: int, n: int, literal: bool = False) -> int:
    """Double binomial sum over ``t = 1..x``.

    The default form ``sum_t sum_k C(n,k) (t-1)^(n-k)`` telescopes to ``x^n``.
    ``literal=True`` evaluates the inner power as ``t^(n-k)``, which sums to
    ``(x+1)^n - 1`` instead; it is kept to document that deviation.
    """
    x = _check_natural("x", x)
    n = _check_natural("n", n)
    shift = 0 if literal else 1
    return sum(comb(n, k) * (t - shift) ** (n - k) for t in range(1, x + 1) for k in range(1, n + 1))
