"""q-calculus differentiation and Newton interpolation toolkit."""

from .expression import ParseError, EvalDomainError, parse, render, evaluate, symbolic_derivative, central_difference
from .identities import (
    SetVariant,
    binomial_growth_expansion,
    forward_difference_power,
    power_expansion_terms,
    power_via_expansion,
    telescoping_power_sum,
    xi,
)
from .operators import (
    DegenerateQuotientError,
    DifferenceScheme,
    SchemeKind,
    pq_difference,
    pq_power_difference,
    q_derivative_power_closed_form,
    q_derivative_power_high_order,
    q_difference,
    q_power_difference,
    q_power_difference_power_closed_form,
    xi_pq_quotient,
    xi_q_quotient,
)
from .limits import ExtrapolationResult, LimitSpec, Side, derivative_estimate, limit_extrapolate
from .taylor import (
    RemainderSpec,
    TaylorModel,
    evaluate_polynomial,
    iterated_power_derivative,
    remainder_bound,
    taylor_derivative_via_operator,
    taylor_from_expr,
)
from .newton import (
    GridKind,
    GridSpec,
    binomial_real,
    divided_difference_interpolate,
    forward_difference_table,
    literal_q_newton_eval,
    literal_qpower_newton_eval,
    newton_forward_eval,
)

__version__ = "0.1.0"
