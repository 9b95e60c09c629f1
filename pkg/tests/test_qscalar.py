"""Scalar layer: canonical rational functions of q, q-combinatorics,
the textual grammar, and the three field adapters."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckelab.qscalar import (
    DEFAULT_PRIME,
    FieldSpec,
    LaurentQ,
    ModInt,
    QScalar,
    Q_ONE,
    Q_VAR,
    Q_ZERO,
    ScalarParseError,
    SpecializationError,
    format_scalar,
    make_field,
    parse_scalar,
    q_binomial,
    q_factorial,
    q_number,
    sample_modular_qs,
    sample_rational_qs,
    specialize,
    _poly_gcd,
)


def L(d):
    return LaurentQ(d)


def QS(num, den=None):
    return QScalar.make(L(num), L(den) if den is not None else None)


# --- canonical form -------------------------------------------------------

def test_canonical_cancels_common_factors():
    # (q^2 - 1) / (q - 1) = q + 1, by construction through the constructor
    x = QS({2: 1, 0: -1}, {1: 1, 0: -1})
    assert x == QS({1: 1, 0: 1})
    assert x.den == LaurentQ.one()


def test_canonical_denominator_constant_term_one():
    # 1 / (2 - q): denominator scaled so that its constant term is 1
    x = QS({0: 1}, {0: 2, 1: -1})
    assert x.den.coeffs[0] == 1
    assert x * QS({0: 2, 1: -1}) == 1


def test_canonical_shifts_q_powers_into_numerator():
    # 1/q is a Laurent numerator, not a denominator
    x = Q_ONE / Q_VAR
    assert x.den == LaurentQ.one()
    assert x.num.coeffs == {-1: Fraction(1)}


def test_canonical_coprime():
    x = QS({3: 1, 1: 2, -1: 1}, {2: 1, 0: 3})
    shift = x.num.min_exp()
    core = x.num.shifted(-shift)
    assert _poly_gcd(core, x.den) == LaurentQ.one()


def test_equality_is_structural_and_hashable():
    a = QS({2: 1, 0: -1}, {1: 1, 0: -1})
    b = QS({1: 1, 0: 1})
    assert a == b and hash(a) == hash(b)
    assert QScalar.from_rat(3) == 3
    assert hash(QScalar.from_rat(Fraction(3, 2))) == hash(Fraction(3, 2))


def test_int_interop():
    assert Q_VAR + 0 == Q_VAR
    assert 1 + Q_VAR - 1 == Q_VAR
    assert 2 * Q_VAR == Q_VAR + Q_VAR
    assert (Q_VAR * 0) == 0 and not (Q_VAR * 0)
    assert Q_VAR / 2 == Fraction(1, 2) * Q_VAR


# --- field axioms via hypothesis ------------------------------------------

small_laurent = st.dictionaries(
    st.integers(min_value=-3, max_value=3),
    st.fractions(min_value=-4, max_value=4, max_denominator=3),
    max_size=3,
)


@st.composite
def qscalars(draw):
    num = draw(small_laurent)
    den = draw(small_laurent.filter(lambda d: any(Fraction(v) for v in d.values())))
    return QS(num, den)


@settings(max_examples=60, deadline=None)
@given(qscalars(), qscalars(), qscalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + Q_ZERO == a
    assert a * Q_ONE == a
    if a:
        assert a * (Q_ONE / a) == Q_ONE


@settings(max_examples=40, deadline=None)
@given(qscalars())
def test_canonicalisation_idempotent(a):
    again = QScalar.make(a.num, a.den)
    assert again.num == a.num and again.den == a.den


@settings(max_examples=40, deadline=None)
@given(qscalars(), qscalars())
def test_arithmetic_matches_evaluation(a, b):
    # evaluation at a non-pole rational point is a ring homomorphism
    q0 = Fraction(5, 3)
    try:
        av, bv = a.evaluate(q0), b.evaluate(q0)
    except SpecializationError:
        return
    assert (a + b).evaluate(q0) == av + bv
    assert (a * b).evaluate(q0) == av * bv


# --- q-combinatorics -------------------------------------------------------

def test_q_number_small_values():
    assert q_number(0) == 0
    assert q_number(1) == 1
    assert q_number(2) == Q_VAR + Q_VAR ** -1
    assert q_number(3) == Q_VAR ** 2 + 1 + Q_VAR ** -2


def test_q_number_matches_quotient_definition():
    lam = Q_VAR - Q_VAR ** -1
    for p in range(-6, 7):
        assert q_number(p) * lam == Q_VAR ** p - Q_VAR ** -p


def test_q_number_odd_symmetry():
    for p in range(1, 6):
        assert q_number(-p) == -q_number(p)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=9),
       st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=7)
         .filter(lambda x: x not in (0, 1)))
def test_q_number_evaluation(p, q0):
    got = q_number(p).evaluate(q0)
    assert got == (q0 ** p - q0 ** -p) / (q0 - 1 / q0)


def test_q_factorial():
    assert q_factorial(0) == 1
    assert q_factorial(1) == 1
    assert q_factorial(2) == q_number(2)
    assert q_factorial(3) == q_number(2) * q_number(3)
    with pytest.raises(ValueError):
        q_factorial(-1)


def test_q_binomial_values():
    assert q_binomial(2, 1) == q_number(2)
    assert q_binomial(4, 2) == q_factorial(4) / (q_factorial(2) * q_factorial(2))
    for p in range(0, 6):
        assert q_binomial(p, 0) == 1
        assert q_binomial(p, p) == 1
    with pytest.raises(ValueError):
        q_binomial(3, 4)
    with pytest.raises(ValueError):
        q_binomial(3, -1)


def test_q_binomial_pascal_recurrence():
    # q_binomial(p, i) = q^i b(p-1, i) + q^(i-p) b(p-1, i-1)
    for p in range(1, 7):
        for i in range(0, p + 1):
            lhs = q_binomial(p, i)
            rhs = Q_ZERO
            if i <= p - 1:
                rhs = rhs + Q_VAR ** i * q_binomial(p - 1, i)
            if i >= 1:
                rhs = rhs + Q_VAR ** (i - p) * q_binomial(p - 1, i - 1)
            assert lhs == rhs, (p, i)


def test_q_binomial_classical_limit():
    from math import comb
    for p in range(0, 7):
        for i in range(0, p + 1):
            assert q_binomial(p, i).evaluate(1) == comb(p, i)


# --- specialisation --------------------------------------------------------

def test_specialize_classical_limit_of_q_number():
    # canonical form has no pole at q = 1
    for p in range(0, 7):
        assert q_number(p).evaluate(1) == p


def test_specialize_pole_raises():
    x = Q_ONE / (Q_VAR - 1)
    with pytest.raises(SpecializationError):
        x.evaluate(1)


def test_specialize_modes():
    x = q_number(3)
    assert specialize(x, FieldSpec.symbolic()) is x
    assert specialize(x, FieldSpec.evaluated(Fraction(2, 3))) == \
        Fraction(2, 3) ** 2 + 1 + Fraction(3, 2) ** 2
    spec = FieldSpec.modular(97, 5)
    got = specialize(x, spec)
    assert got == ModInt((25 + 1 + pow(25, -1, 97)) % 97, 97)


def test_fieldspec_rejects_bad_parameters():
    with pytest.raises(SpecializationError):
        FieldSpec.evaluated(0)
    with pytest.raises(SpecializationError):
        FieldSpec.modular(91, 5)  # 91 = 7 * 13
    with pytest.raises(SpecializationError):
        FieldSpec.modular(97, 0)
    # the involutive classical point is allowed when named explicitly
    assert FieldSpec.evaluated(1).q == 1


def test_field_adapters_expose_constants():
    for spec in (FieldSpec.symbolic(), FieldSpec.evaluated(Fraction(2, 3)),
                 FieldSpec.modular(DEFAULT_PRIME, 7)):
        f = make_field(spec)
        assert f.lam == f.q - f.q ** -1
        assert f.of_int(5) == f.of_int(2) + f.of_int(3)
        assert f.q_number(3) == f.q ** 2 + f.one + f.q ** -2


# --- parsing and formatting ------------------------------------------------

def test_parse_examples():
    lam = Q_VAR - Q_VAR ** -1
    assert parse_scalar("q - q^-1") == lam
    assert parse_scalar("(q^2-1)/(q-1)") == Q_VAR + 1
    assert parse_scalar("0") == 0
    assert parse_scalar("3/2") == Fraction(3, 2)
    assert parse_scalar("2*q^2") == 2 * Q_VAR ** 2
    assert parse_scalar("2q^2") == 2 * Q_VAR ** 2
    assert parse_scalar("-q + 1") == 1 - Q_VAR
    assert parse_scalar("q^0") == 1
    assert parse_scalar("1/2*q") == Q_VAR / 2
    assert parse_scalar(" q +  1 ") == Q_VAR + 1


def test_parse_division_by_zero_polynomial():
    with pytest.raises(ScalarParseError):
        parse_scalar("(q)/(0)")
    with pytest.raises(ScalarParseError):
        parse_scalar("(q)/(1 - 1)")


def test_parse_errors_carry_position():
    with pytest.raises(ScalarParseError) as err:
        parse_scalar("q + #")
    assert err.value.pos == 4
    with pytest.raises(ScalarParseError):
        parse_scalar("")
    with pytest.raises(ScalarParseError):
        parse_scalar("q q")
    with pytest.raises(ScalarParseError):
        parse_scalar("(q")


def test_format_examples():
    lam = Q_VAR - Q_VAR ** -1
    assert format_scalar(lam) == "q - q^-1"
    assert format_scalar(Q_VAR ** -1 + Q_VAR ** -3) == "q^-1 + q^-3"
    assert format_scalar(Q_ZERO) == "0"
    assert format_scalar(QScalar.from_rat(Fraction(-3, 2))) == "-3/2"
    assert format_scalar(Q_ONE / (Q_VAR + 1)) == "(1)/(q + 1)"


@settings(max_examples=60, deadline=None)
@given(qscalars())
def test_parse_format_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


# --- modular scalars --------------------------------------------------------

def test_modint_arithmetic():
    p = 101
    a, b = ModInt(17, p), ModInt(64, p)
    assert a + b == 81 and a * b == 17 * 64 % p
    assert a - b == (17 - 64) % p
    assert (a / b) * b == a
    assert a ** -1 * a == 1
    assert ModInt(0, p) == 0 and not ModInt(0, p)
    assert 1 - ModInt(3, p) == p - 2
    with pytest.raises(ZeroDivisionError):
        a / ModInt(0, p)


# --- deterministic sampling -------------------------------------------------

def test_sample_rational_qs():
    qs = sample_rational_qs(5, seed=11)
    assert qs == sample_rational_qs(5, seed=11)
    assert len(set(qs)) == 5
    for v in qs:
        assert v not in (0, 1, -1)
        assert any(v == Fraction(a, b)
                   for a in range(2, 8) for b in range(2, 8) if a != b)


def test_sample_modular_qs():
    qs = sample_modular_qs(5, DEFAULT_PRIME, seed=3)
    assert qs == sample_modular_qs(5, DEFAULT_PRIME, seed=3)
    assert len(set(qs)) == 5
    for v in qs:
        t, ok = v, True
        for _ in range(18):
            if t == 1:
                ok = False
                break
            t = t * v % DEFAULT_PRIME
        assert ok
