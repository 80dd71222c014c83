import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qkpr.expr import ExprError, evaluate


@pytest.mark.parametrize(
    "text,value",
    [
        ("pi/4", math.pi / 4),
        ("acos(1/sqrt3)", math.acos(1 / math.sqrt(3))),
        ("acos(1/sqrt(3))", math.acos(1 / math.sqrt(3))),
        ("5*pi/18", 5 * math.pi / 18),
        ("11*pi/6", 11 * math.pi / 6),
        ("-pi + 2*pi", math.pi),
        ("(1+2)*3", 9.0),
        ("2 - 3 - 4", -5.0),
        ("1.5e-1", 0.15),
        (".5", 0.5),
        ("sqrt 4", 2.0),
        ("0.7853981633974483", 0.7853981633974483),
    ],
)
def test_values(text, value):
    assert evaluate(text) == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("text", ["", "pi pi", "2pi", "(1", "1)", "import os", "1/0", "acos(2)", "e"])
def test_rejects(text):
    with pytest.raises(ExprError):
        evaluate(text)


@given(st.floats(0, 1e6, allow_nan=False))
def test_plain_numbers_roundtrip(x):
    assert evaluate(repr(x)) == x
