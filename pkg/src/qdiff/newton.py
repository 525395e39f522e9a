"""Newton interpolation on uniform, geometric and power-tower grids."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from math import comb

from fractions import Fraction

from .expression import Expr, as_function, evaluate, is_exact_number, parse


class DegenerateGridError(ValueError):
    """Grid parameters produce coincident nodes."""


class GridKind(enum.Enum):
    UNIFORM = "uniform"
    GEOMETRIC = "geometric"
    POWER = "power"


@dataclass(frozen=True)
class GridSpec:
    """Node set of K+1 points.

    uniform: a, a+1, ..., a+K
    geometric: a q^m (a > 0, q > 0, q != 1)
    power: a^(q^m) (a > 0, a != 1, q > 0, q != 1)
    """

    kind: GridKind
    a: float
    K: int
    q: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "kind", GridKind(self.kind))
        if self.K < 0:
            raise ValueError("node count K must be non-negative")

    def nodes(self) -> list:
        a, q, K = self.a, self.q, self.K
        if self.kind is GridKind.UNIFORM:
            pts = [a + m for m in range(K + 1)]
        elif self.kind is GridKind.GEOMETRIC:
            if not a > 0 or not q > 0:
                raise DegenerateGridError("geometric grid needs a > 0 and q > 0")
            pts = [a * q ** m for m in range(K + 1)]
        else:
            if not a > 0 or not q > 0:
                raise DegenerateGridError("power grid needs a > 0 and q > 0")
            pts = [a ** (q ** m) for m in range(K + 1)]
        if len(set(pts)) != len(pts):
            raise DegenerateGridError(f"duplicate nodes in {self.kind.value} grid (a={a}, q={q})")
        return pts


@dataclass(frozen=True)
class DividedDifferenceTable:
    nodes: tuple
    coefficients: tuple

    @classmethod
    def build(cls, nodes, values) -> "DividedDifferenceTable":
        nodes = tuple(nodes)
        if len(nodes) != len(values):
            raise ValueError("nodes and values differ in length")
        if len(set(nodes)) != len(nodes):
            raise DegenerateGridError("duplicate nodes")
        col = list(values)
        coefs = [col[0]]
        for j in range(1, len(nodes)):
            col = [(col[i + 1] - col[i]) / (nodes[i + j] - nodes[i]) for i in range(len(col) - 1)]
            coefs.append(col[0])
        return cls(nodes, tuple(coefs))

    def __call__(self, x):
        acc = self.coefficients[-1]
        for j in range(len(self.coefficients) - 2, -1, -1):
            acc = acc * (x - self.nodes[j]) + self.coefficients[j]
        return acc


def forward_difference_table(values, K: int) -> list:
    """``[Delta^0 f(a), ..., Delta^K f(a)]`` from samples at a, a+1, ..."""
    if K < 0:
        raise ValueError("order K must be non-negative")
    if len(values) < K + 1:
        raise ValueError(f"need at least {K + 1} samples, got {len(values)}")
    row = list(values[:K + 1])
    out = [row[0]]
    for _ in range(K):
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
        out.append(row[0])
    return out


def alternating_difference(values, k: int):
    """``Delta^k f(a) = sum_m (-1)^m C(k,m) f(a+k-m)``."""
    return sum((-1) ** m * comb(k, m) * values[k - m] for m in range(k + 1))


def binomial_real(u, k: int):
    """Falling-factorial binomial ``u (u-1) ... (u-k+1) / k!``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    num = 1
    for i in range(k):
        num *= u - i
    if isinstance(num, int):
        # a product of k consecutive integers is divisible by k!
        return num // math.factorial(k)
    return num / math.factorial(k)


def newton_forward_eval(table, a, x, K: int = None):
    """``sum_{k<=K} C(x-a, k) Delta^k f(a)``."""
    if K is None:
        K = len(table) - 1
    if len(table) < K + 1:
        raise ValueError("table shorter than requested order")
    return sum(binomial_real(x - a, k) * table[k] for k in range(K + 1))


def divided_difference_interpolate(grid: GridSpec, f, x: float) -> float:
    """Newton-form interpolant of *f* on the grid nodes, evaluated at *x*.

    When *f* is an expression whose samples evaluate exactly (polynomial and
    rational expressions), the table is built in rationals over the nodes'
    exact binary values and the result is rounded once.  Wide grids such as
    power towers otherwise lose the low-order digits to cancellation.
    """
    nodes = grid.nodes()
    if isinstance(f, str):
        f = parse(f)
    if isinstance(f, Expr) and math.isfinite(x):
        exact_nodes = [Fraction(t) for t in nodes]
        values = [evaluate(f, t, exact=True) for t in exact_nodes]
        if all(is_exact_number(v) for v in values):
            return float(DividedDifferenceTable.build(exact_nodes, values)(Fraction(x)))
    g = as_function(f)
    return DividedDifferenceTable.build(nodes, [g(t) for t in nodes])(x)


@dataclass(frozen=True)
class LiteralEvaluation:
    """Value of an experimental series plus its deviation from the sound interpolant."""

    value: float
    sound_value: float
    residual: float


def _literal_series(g, a, x, K, node):
    total = 0.0
    for k in range(K + 1):
        inner = sum((-1) ** m * comb(k, m) * g(node(k - m)) for m in range(k + 1))
        total += binomial_real(x - a, k) * inner
    return total


def _require_experimental(experimental: bool):
    if not experimental:
        raise ValueError("literal series are experimental; pass experimental=True to acknowledge")


def literal_q_newton_eval(f, a: float, x: float, q: float, K: int, *, experimental: bool = False) -> LiteralEvaluation:
    """Experimental: Newton series with alternating differences sampled at ``a q^j``.

    The binomial kernel is read as ``C(k, m)`` and the nodes are anchored at a.
    """
    _require_experimental(experimental)
    grid = GridSpec(GridKind.GEOMETRIC, a, K, q)
    if q == 1:
        raise DegenerateGridError("q = 1 collapses the geometric nodes")
    g = as_function(f)
    value = _literal_series(g, a, x, K, lambda j: a * q ** j)
    sound = DividedDifferenceTable.build(grid.nodes(), [g(t) for t in grid.nodes()])(x)
    return LiteralEvaluation(value, sound, value - sound)


def literal_qpower_newton_eval(f, a: float, x: float, q: float, K: int, *,
                               experimental: bool = False) -> LiteralEvaluation:
    """Experimental: Newton series with alternating differences sampled at ``a^(q^j)``."""
    _require_experimental(experimental)
    if not a > 0 or a == 1:
        raise DegenerateGridError("power grid needs a > 0 and a != 1")
    if q == 1:
        raise DegenerateGridError("q = 1 collapses the power nodes")
    grid = GridSpec(GridKind.POWER, a, K, q)
    g = as_function(f)
    value = _literal_series(g, a, x, K, lambda j: a ** (q ** j))
    sound = DividedDifferenceTable.build(grid.nodes(), [g(t) for t in grid.nodes()])(x)
    return LiteralEvaluation(value, sound, value - sound)
