import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qdiff.expression import (
    BinOp,
    Call,
    Const,
    EvalDomainError,
    Neg,
    ParseError,
    X,
    central_difference,
    evaluate,
    parse,
    render,
    symbolic_derivative,
)


def test_parse_precedence():
    assert parse("x^2 + 1") == BinOp("+", BinOp("^", X, Const(2)), Const(1))
    assert parse("sin(x)*x") == BinOp("*", Call("sin", X), X)
    assert parse("-x^2") == Neg(BinOp("^", X, Const(2)))
    assert parse("2^3^2") == BinOp("^", Const(2), BinOp("^", Const(3), Const(2)))
    assert parse("1-2-3") == BinOp("-", BinOp("-", Const(1), Const(2)), Const(3))
    assert parse("0.5") == Const(Fraction(1, 2))


@pytest.mark.parametrize("text, offset", [("x +", 3), ("(x", 2), ("x)", 1), ("foo(x)", 0), ("2 $ x", 2), ("", 0)])
def test_parse_errors(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset
    assert 0 <= info.value.offset <= len(text)


def test_parse_error_message_for_missing_operand():
    with pytest.raises(ParseError) as info:
        parse("x +")
    assert info.value.expected == "operand"


def test_eval_examples():
    assert evaluate(parse("x^2+1"), 2) == 5
    assert evaluate(parse("sin(x)"), 0) == 0
    with pytest.raises(EvalDomainError):
        evaluate(parse("1/x"), 0)
    with pytest.raises(EvalDomainError):
        evaluate(parse("ln(x)"), -1)
    with pytest.raises(EvalDomainError):
        evaluate(parse("sqrt(x)"), -1)
    with pytest.raises(EvalDomainError):
        evaluate(parse("x^0.5"), -4)


def test_exact_mode():
    f = parse("x^3/3 - 0.1*x")
    got = evaluate(f, Fraction(1, 3), exact=True)
    assert got == Fraction(1, 81) - Fraction(1, 30)
    assert isinstance(got, Fraction)
    # a transcendental call drops to floats
    assert isinstance(evaluate(parse("x + sin(x)"), Fraction(1), exact=True), float)


def test_domain_error_reports_subexpression():
    with pytest.raises(EvalDomainError) as info:
        evaluate(parse("x + ln(x - 2)"), 1)
    assert render(info.value.subexpr) == "ln(x - 2)"


@pytest.mark.parametrize("text, expected", [
    ("x^3", "3*x^2"),
    ("sin(x)", "cos(x)"),
    ("x*exp(x)", "exp(x) + x*exp(x)"),
])
def test_symbolic_derivative_examples(text, expected):
    assert render(symbolic_derivative(parse(text))) == expected


@pytest.mark.parametrize("text", ["x^x", "ln(x)/x", "sqrt(x)*cos(x)", "2^x", "exp(-x^2)", "1/(1+x^2)"])
def test_symbolic_derivative_matches_central_difference(text):
    f = parse(text)
    df = symbolic_derivative(f)
    for x in (0.4, 1.3, 2.2):
        assert evaluate(df, x) == pytest.approx(central_difference(f, x, 1e-5), rel=1e-8)


def test_central_difference_examples():
    assert central_difference("x^2", 3, 0.5) == 6
    # (1.1^3 - 0.9^3) / 0.2 by exact arithmetic
    oracle = (Fraction(11, 10) ** 3 - Fraction(9, 10) ** 3) / Fraction(2, 10)
    assert oracle == Fraction(301, 100)
    assert central_difference("x^3", 1, 0.1) == pytest.approx(float(oracle), rel=1e-14)
    assert central_difference("sin(x)", 0, 1e-4) == pytest.approx(evaluate(symbolic_derivative(parse("sin(x)")), 0), abs=1e-8)


def test_central_difference_is_second_order():
    f = parse("exp(x)*sin(x)")
    df = symbolic_derivative(f)
    x = 0.8
    hs = [1e-1, 1e-2, 1e-3]
    errs = [abs(central_difference(f, x, h) - evaluate(df, x)) for h in hs]
    slope = (math.log(errs[-1]) - math.log(errs[0])) / (math.log(hs[-1]) - math.log(hs[0]))
    assert 1.8 <= slope <= 2.2


# --- property tests --------------------------------------------------------

# literals the grammar can produce: non-negative terminating decimals
numbers = st.builds(lambda m, d: Const(Fraction(m, 10 ** d)), st.integers(0, 10 ** 6), st.integers(0, 4))


def trees(max_leaves=12):
    leaves = st.one_of(st.just(X), numbers)

    def extend(children):
        return st.one_of(
            st.builds(Neg, children),
            st.builds(BinOp, st.sampled_from("+-*/"), children, children),
            st.builds(BinOp, st.just("^"), children, st.integers(0, 4).map(Const)),
            st.builds(Call, st.sampled_from(["sin", "cos", "exp", "ln", "sqrt"]), children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@given(trees())
@settings(max_examples=300)
def test_render_round_trip(tree):
    text = render(tree)
    assert parse(text) == tree
    assert parse(render(parse(text))) == parse(text)


def poly_coefficients():
    return st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=10), min_size=1, max_size=7)


def poly_tree(coefs):
    tree = Const(coefs[0])
    for k, c in enumerate(coefs[1:], start=1):
        tree = BinOp("+", tree, BinOp("*", Const(c), BinOp("^", X, Const(k))))
    return tree


@given(poly_coefficients(), st.fractions(min_value=-5, max_value=5, max_denominator=20))
@settings(max_examples=100)
def test_derivative_oracle_on_polynomials(coefs, x):
    # derivative coefficients by hand: d/dx sum c_k x^k = sum k c_k x^(k-1)
    expected = sum((k * c * x ** (k - 1) for k, c in enumerate(coefs) if k), Fraction(0))
    got = evaluate(symbolic_derivative(poly_tree(coefs)), x, exact=True)
    assert got == expected
