from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from qdiff.identities import forward_difference_power
from qdiff.newton import (
    DegenerateGridError,
    DividedDifferenceTable,
    GridKind,
    GridSpec,
    alternating_difference,
    binomial_real,
    divided_difference_interpolate,
    forward_difference_table,
    literal_q_newton_eval,
    literal_qpower_newton_eval,
    newton_forward_eval,
)


def test_forward_difference_table_examples():
    assert forward_difference_table([0, 1, 4], 2) == [0, 1, 2]
    assert forward_difference_table([7, 7, 7, 7], 3) == [7, 0, 0, 0]
    cubes = [x ** 3 for x in range(4)]
    assert forward_difference_table(cubes, 3)[1] == forward_difference_power(0, 3) == 1
    with pytest.raises(ValueError):
        forward_difference_table([1, 2], 2)


@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=9))
def test_iterated_differences_match_alternating_sum(values):
    K = len(values) - 1
    table = forward_difference_table(values, K)
    assert table == [alternating_difference(values, k) for k in range(K + 1)]


def test_cross_module_forward_difference():
    for n in range(1, 9):
        for a in range(0, 15):
            values = [(a + i) ** n for i in range(2)]
            assert forward_difference_table(values, 1)[1] == forward_difference_power(a, n)


def test_binomial_real():
    assert binomial_real(2.5, 2) == 1.875
    for n in range(0, 10):
        for k in range(0, n + 1):
            assert binomial_real(n, k) == comb(n, k)
    assert binomial_real(-1.3, 0) == 1
    assert binomial_real(Fraction(1, 2), 3) == Fraction(1, 2) * Fraction(-1, 2) * Fraction(-3, 2) / 6


def test_newton_forward_eval():
    table = forward_difference_table([0, 1, 4], 2)
    assert newton_forward_eval(table, 0, 2.5, 2) == pytest.approx(6.25, abs=1e-12)
    assert newton_forward_eval(table, 0, 0, 2) == 0
    cubes = forward_difference_table([x ** 3 for x in range(4)], 3)
    assert newton_forward_eval(cubes, 0, 7, 3) == 343


def test_divided_difference_examples():
    assert divided_difference_interpolate(GridSpec("geometric", 1.0, 2, 2.0), "x^2", 3) == pytest.approx(9, rel=1e-12)
    assert divided_difference_interpolate(GridSpec("power", 2.0, 1, 2.0), "x", 3) == pytest.approx(3, rel=1e-12)
    for grid in (GridSpec("uniform", -1.0, 4), GridSpec("geometric", 0.5, 3, 3.0), GridSpec("power", 1.5, 2, 1.5)):
        assert divided_difference_interpolate(grid, "7.5", 0.3) == 7.5


def test_grid_nodes():
    assert GridSpec("uniform", 2.0, 3).nodes() == [2, 3, 4, 5]
    assert GridSpec("geometric", 1.0, 3, 2.0).nodes() == [1, 2, 4, 8]
    assert GridSpec("power", 2.0, 2, 2.0).nodes() == [2, 4, 16]


@pytest.mark.parametrize("grid", [
    GridSpec("geometric", 1.0, 3, 1.0),
    GridSpec("power", 1.0, 2, 2.0),
    GridSpec("power", 2.0, 2, 1.0),
    GridSpec("geometric", -1.0, 2, 2.0),
])
def test_degenerate_grids(grid):
    with pytest.raises(DegenerateGridError):
        divided_difference_interpolate(grid, "x", 1.0)


def test_uniform_grid_matches_newton_forward():
    f = lambda t: t ** 4 - 3 * t + 0.5  # noqa: E731
    for a in (-2.0, 0.0, 1.5):
        grid = GridSpec("uniform", a, 5)
        table = forward_difference_table([f(t) for t in grid.nodes()], 5)
        for x in (-1.3, 0.2, 2.7, 6.1):
            assert divided_difference_interpolate(grid, f, x) == pytest.approx(
                newton_forward_eval(table, a, x, 5), rel=1e-10, abs=1e-10)


def test_divided_table_reproduces_samples():
    nodes = [0.3, 1.1, 2.0, 4.5]
    values = [1.0, -2.0, 0.5, 3.0]
    table = DividedDifferenceTable.build(nodes, values)
    for t, v in zip(nodes, values):
        assert table(t) == pytest.approx(v, abs=1e-12)
    with pytest.raises(DegenerateGridError):
        DividedDifferenceTable.build([1.0, 1.0], [0.0, 1.0])


def test_literal_q_examples():
    res = literal_q_newton_eval("x", 1.0, 1.0, 2.0, 1, experimental=True)
    assert res.value == 1 and res.residual == 0
    res = literal_q_newton_eval("x^2 + 1", 1.5, 4.2, 1.5, 0, experimental=True)
    assert res.value == 1.5 ** 2 + 1
    with pytest.raises(DegenerateGridError):
        literal_q_newton_eval("x", 1.0, 1.0, 1.0, 2, experimental=True)
    with pytest.raises(ValueError):
        literal_q_newton_eval("x", 1.0, 1.0, 2.0, 1)


def test_literal_qpower_examples():
    res = literal_qpower_newton_eval("x", 2.0, 2.0, 2.0, 1, experimental=True)
    assert res.value == 2 and res.residual == 0
    assert literal_qpower_newton_eval("x^3", 1.7, 5.0, 1.3, 0, experimental=True).value == 1.7 ** 3
    with pytest.raises(DegenerateGridError):
        literal_qpower_newton_eval("x", 2.0, 2.0, 1.0, 1, experimental=True)


@pytest.mark.parametrize("K", range(0, 5))
def test_literal_value_at_center(K):
    for evaluator, a in ((literal_q_newton_eval, 1.3), (literal_qpower_newton_eval, 1.3)):
        res = evaluator("exp(x)*sin(x)", a, a, 1.4, K, experimental=True)
        assert res.value == pytest.approx(2.718281828459045 ** 1.3 * __import__("math").sin(1.3), rel=1e-15)
        assert res.residual == pytest.approx(0, abs=1e-12)


def test_literal_series_reports_residual_off_center():
    res = literal_q_newton_eval("x^2", 1.0, 3.0, 2.0, 2, experimental=True)
    # alternating differences at 1, 2, 4: 1, 3, 9 -> 1 + 2*3 + 1*9 = 16 vs the sound 9
    assert res.value == 16
    assert res.sound_value == pytest.approx(9)
    assert res.residual == pytest.approx(7)


def test_wide_power_grid_is_exact_for_expressions():
    # nodes 2, 4, 16, ..., 2^64: float tables lose the small-node digits here
    grid = GridSpec("power", 2.0, 6, 2.0)
    for d in range(7):
        for x in (-0.8, 0.3, 3.0):
            assert divided_difference_interpolate(grid, f"x^{d}", x) == pytest.approx(x ** d, rel=1e-12)


def test_transcendental_expression_uses_float_path():
    import math
    grid = GridSpec("uniform", 0.0, 8)
    assert divided_difference_interpolate(grid, "sin(x)", 4.5) == pytest.approx(math.sin(4.5), abs=1e-2)
