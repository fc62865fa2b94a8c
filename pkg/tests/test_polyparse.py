import pytest
from hypothesis import given
from hypothesis import strategies as st

from formalcr.errors import ParseError
from formalcr.gauss import GaussRational
from formalcr.polyparse import format_series, parse_polynomial, parse_series
from formalcr.series import TruncatedSeries, multi_indices

VARS = ("z1", "z2", "zb1", "zb2")


def test_lewy_defining_function():
    p = parse_polynomial("(z2 - zb2)/(2*i) - z1*zb1", VARS)
    assert p == {
        (0, 1, 0, 0): GaussRational(0, -0.5),
        (0, 0, 0, 1): GaussRational(0, 0.5),
        (1, 0, 1, 0): GaussRational(-1),
    }


@pytest.mark.parametrize("text, value", [
    ("-1/2*i", GaussRational(0, -0.5)),
    ("3i", GaussRational(0, 3)),
    ("0.25", GaussRational(0.25)),
    ("(1+i)^2", GaussRational(0, 2)),
    ("2**3", GaussRational(8)),
])
def test_constants(text, value):
    assert parse_polynomial(text, VARS) == {(0, 0, 0, 0): value}


@pytest.mark.parametrize("text, column", [
    ("z1 + ", 5),
    ("z1 * q3", 6),
    ("z1 / z2", 6),
    ("(z1 + z2", 9),
])
def test_errors_carry_position(text, column):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text, VARS, line=4)
    assert info.value.line == 4
    assert info.value.column == column


small = st.integers(-5, 5)
coeff = st.builds(GaussRational, st.fractions(max_denominator=7), st.fractions(max_denominator=7))


@given(st.dictionaries(st.sampled_from(multi_indices(4, 3)), coeff, max_size=8))
def test_format_parse_roundtrip(terms):
    s = TruncatedSeries(VARS, 3, terms)
    assert parse_series(format_series(s), VARS, 3) == s
