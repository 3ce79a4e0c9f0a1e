from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trigbeta.errors import IntegrandDomainError, ParseError
from trigbeta.integrand import (
    Base,
    Endpoint,
    TrigIntegrand,
    Upper,
    convergence_check,
    normalize,
    parse,
    render,
)

F = Fraction
H, Q = Upper.HALF_PI, Upper.QUARTER_PI


def ti(a, b, c, upper):
    return TrigIntegrand(F(a), F(b), F(c), upper)


# -- parse --------------------------------------------------------------------


@pytest.mark.parametrize("text,expected", [
    ("int[0,pi/2] sin(x)^(-1/2) dx", ti(F(-1, 2), 0, 0, H)),
    ("int[0,pi/2] tan(x)^(1/3) dx", ti(F(1, 3), F(-1, 3), 0, H)),
    ("int[0,pi/4] sin(x)^3 * cos(2x)^(1/2) / cos(x)^6 dx", ti(3, -6, F(1, 2), Q)),
    ("int[0,pi/2] 1/sqrt(sin(x)) dx", ti(F(-1, 2), 0, 0, H)),
    ("int[0,pi/2] sqrt(sin(x)) dx", ti(F(1, 2), 0, 0, H)),
    ("int[0,pi/4] cos(2x)/cos(x)^4 dx", ti(0, -4, 1, Q)),
    ("int[0,pi/2] 1 dx", ti(0, 0, 0, H)),
    ("int[0,pi/2] tan(x) * cot(x) dx", ti(0, 0, 0, H)),
    ("int[0,pi/2] sec(x)^(-2) * csc(x)^(-3) dx", ti(3, 2, 0, H)),
    ("int [ 0 , pi/2 ]  sin ( x ) ^ ( 5 / 10 )  d x", ti(F(1, 2), 0, 0, H)),
    ("int[0,pi/2] sin(x)^2*sin(x)^3 dx", ti(5, 0, 0, H)),
    ("int[0,pi/2] cos(2x)^0 dx", ti(0, 0, 0, H)),
])
def test_parse_examples(text, expected):
    assert parse(text) == expected


# at least ten malformed sources, each rejected with a position
INVALID = [
    ("int[0,pi/2] cos(2x) dx", 12, IntegrandDomainError),
    ("int[0,pi/2] sin(x) * cos(2x)^(1/2) dx", 21, IntegrandDomainError),
    ("int[0,pi/3] sin(x) dx", 6, ParseError),
    ("int[1,pi/2] sin(x) dx", 4, ParseError),
    ("int[0,pi/2] sin(y) dx", 12, ParseError),
    ("int[0,pi/2] sin(x)^(1/0) dx", 22, ParseError),
    ("int[0,pi/2] sin(x)^(a) dx", 20, ParseError),
    ("int[0,pi/2] sin(x)", 18, ParseError),
    ("int[0,pi/2] sin(x) dx extra", 22, ParseError),
    ("Int[0,pi/2] sin(x) dx", 0, ParseError),
    ("int[0,pi/2] exp(x) dx", 12, ParseError),
    ("int[0,pi/2] sin(x)^ dx", 20, ParseError),
    ("int[0,pi/2] sqrt(sin(x)^2) dx", 23, ParseError),
    ("int[0,pi/2] sin(x) ** 2 dx", 20, ParseError),
    ("int[0,pi/2] sin(x)^(1/-2) dx", 22, ParseError),
    ("", 0, ParseError),
    ("int[0,pi/2] dx", 12, ParseError),
    ("int[0,pi/2] sin(x)^1.5 dx", 20, ParseError),
]


@pytest.mark.parametrize("text,position,kind", INVALID)
def test_invalid_sources_rejected_with_position(text, position, kind):
    with pytest.raises(kind) as info:
        parse(text)
    err = info.value
    assert isinstance(err, ParseError)
    assert err.position == position
    assert f"position {position}" in str(err)


def test_half_pi_cos2x_message_and_caret():
    with pytest.raises(IntegrandDomainError) as info:
        parse("int[0,pi/2] cos(2x) dx")
    lines = str(info.value).splitlines()
    assert "cos(2x) on half-pi interval" in lines[0]
    assert lines[2].index("^") - 2 == 12


def test_parse_rejects_non_string():
    with pytest.raises(TypeError):
        parse(42)


def test_constructor_rejects_half_pi_cos2x():
    with pytest.raises(IntegrandDomainError):
        TrigIntegrand(F(0), F(0), F(1), H)


# -- normalize --------------------------------------------------------------------


def test_normalize_examples():
    a = F(1, 2)
    assert normalize([(Base.TAN, a), (Base.COS, -a)]) == (F(1, 2), F(-1), F(0))
    assert normalize([(Base.COT, a), (Base.SIN, -a)]) == (F(-1), F(1, 2), F(0))
    p = F(1, 4)
    assert normalize([(Base.SEC, 2 * p), (Base.SIN, 2 * p - 1)]) == (F(-1, 2), F(-1, 2), F(0))


factor_lists = st.lists(
    st.tuples(st.sampled_from(list(Base)), st.builds(F, st.integers(-240, 240), st.integers(1, 12))),
    max_size=8,
)


@settings(max_examples=300, deadline=None)
@given(factor_lists, factor_lists)
def test_normalize_is_linear(xs, ys):
    left, right, both = normalize(xs), normalize(ys), normalize(xs + ys)
    assert both == tuple(l + r for l, r in zip(left, right))


# -- convergence -------------------------------------------------------------------


def test_convergence_examples():
    ok = convergence_check(ti(F(-1, 2), 0, 0, H))
    assert ok.convergent and ok.offending_endpoint is None
    bad = convergence_check(ti(-1, 0, 0, H))
    assert not bad.convergent and bad.offending_endpoint is Endpoint.LOWER
    assert convergence_check(ti(0, -5, F(1, 2), Q)).convergent
    upper = convergence_check(ti(0, F(-3, 2), 0, H))
    assert upper.offending_endpoint is Endpoint.UPPER
    upper = convergence_check(ti(0, 0, -1, Q))
    assert upper.offending_endpoint is Endpoint.UPPER


# -- render and round trip ------------------------------------------------------------


@pytest.mark.parametrize("value,text", [
    (ti(F(1, 2), 0, 0, H), "int[0,pi/2] sin(x)^(1/2) dx"),
    (ti(0, -2, 0, Q), "int[0,pi/4] cos(x)^(-2) dx"),
    (ti(2, -4, 0, Q), "int[0,pi/4] sin(x)^2 * cos(x)^(-4) dx"),
    (ti(0, 0, 0, H), "int[0,pi/2] 1 dx"),
    (ti(1, 0, 1, Q), "int[0,pi/4] sin(x) * cos(2x) dx"),
])
def test_render_examples(value, text):
    assert render(value) == text
    assert parse(text) == value


exponents = st.builds(F, st.integers(-5000, 5000), st.integers(1, 50))


@st.composite
def integrands(draw):
    upper = draw(st.sampled_from(list(Upper)))
    gamma = draw(exponents) if upper is Q else F(0)
    return TrigIntegrand(draw(exponents), draw(exponents), gamma, upper)


@settings(max_examples=1000, deadline=None)
@given(integrands())
def test_render_parse_round_trip(value):
    assert parse(render(value)) == value
