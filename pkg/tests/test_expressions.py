import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lammps_lint.expressions import (
    ExpressionError,
    MalformedExpressionError,
    UnresolvableReferenceError,
    evaluate,
    render_number,
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1+2*3", 7),
        ("(1+2)*3", 9),
        ("2^3^2", 64),  # left to right
        ("-2^2", 4),  # unary minus binds tighter
        ("7%3", 1),
        ("10/4", 2.5),
        ("sqrt(16)+abs(-2)", 6),
        ("PI", math.pi),
        ("1 < 2 && 3 > 4", 0),
        ("1 < 2 || 3 > 4", 1),
        ("!0", 1),
        ("2 == 2", 1),
        ("atan2(1,1)*4", math.pi),
        ("1e-3*1000", 1),
        ("round(2.5)", 3),
    ],
)
def test_examples(text, expected):
    assert evaluate(text) == pytest.approx(expected)


def test_variable_references():
    assert evaluate("v_a*v_b", {"a": 2.0, "b": "3"}) == 6


@pytest.mark.parametrize("text", ["temp*2", "v_missing", "c_myTemp", "f_ave[1]", "step+1"])
def test_unresolvable(text):
    with pytest.raises(UnresolvableReferenceError) as e:
        evaluate(text)
    assert e.value.unresolvable


@pytest.mark.parametrize("text", ["(1+", "1 +* 2", "", "1/0", "sqrt(1,2)", "nosuchfunc(1)", "2 3"])
def test_malformed(text):
    with pytest.raises(ExpressionError) as e:
        evaluate(text)
    assert not e.value.unresolvable or isinstance(e.value, MalformedExpressionError)


def test_render_number():
    assert render_number(3.0) == "3"
    assert render_number(-0.5) == "-0.5"
    assert render_number(0.1 + 0.2) == repr(0.1 + 0.2)
    assert float(render_number(1e20)) == 1e20


# arithmetic without ^ or unary minus has the same meaning in Python
_leaf = st.integers(0, 99).map(str)


def _expr(children):
    op = st.sampled_from(["+", "-", "*"])
    return st.tuples(children, op, children).map(lambda t: f"({t[0]} {t[1]} {t[2]})")


@given(st.recursive(_leaf, _expr, max_leaves=12))
def test_agrees_with_python_arithmetic(text):
    assert evaluate(text) == eval(text)  # noqa: S307
