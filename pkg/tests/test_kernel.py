from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from z2z2.kernel import (
    BracketKind,
    Field,
    GaussianRational,
    GradingError,
    GradingKind,
    I,
    PowerSeries,
    as_scalar,
    bracket_kind,
    bracket_sign,
    format_scalar,
    grading,
    inner_product,
    jacobi_combination,
    parse_scalar,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
gaussians = st.builds(GaussianRational, fractions, fractions)
bits = st.tuples(st.integers(0, 1), st.integers(0, 1))
ALG, SUP = GradingKind.Z2Z2_ALGEBRA, GradingKind.Z2Z2_SUPERALGEBRA


def test_parse_and_format_roundtrip_examples():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("1/2+3/4 i", Field.C) == GaussianRational(Fraction(1, 2), Fraction(3, 4))
    assert parse_scalar("-i", Field.C) == GaussianRational(0, -1)
    assert format_scalar(GaussianRational(1, -2)) == "1-2 i"
    with pytest.raises(ValueError):
        parse_scalar("0.5")
    with pytest.raises(ValueError):
        parse_scalar("1+i", Field.R)


@given(gaussians)
def test_gaussian_format_parse_roundtrip(z):
    assert parse_scalar(format_scalar(z), Field.C) == z


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if b != 0:
        assert (a / b) * b == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


def test_i_squared():
    assert I * I == -1


def test_real_mode_rejects_complex():
    with pytest.raises(ValueError):
        as_scalar(I, Field.R)
    assert as_scalar(3, Field.C) == GaussianRational(3)


def test_inner_products():
    # algebra kind: 10 and 01 anticommute, each commutes with itself
    assert inner_product(ALG, (1, 0), (0, 1)) == 1
    assert inner_product(ALG, (1, 0), (1, 0)) == 0
    assert inner_product(ALG, (1, 1), (1, 1)) == 0
    # superalgebra kind: 10 and 01 are odd, 11 is even with itself
    assert inner_product(SUP, (1, 0), (1, 0)) == 1
    assert inner_product(SUP, (1, 0), (0, 1)) == 0
    assert inner_product(SUP, (1, 1), (1, 1)) == 0
    assert inner_product(GradingKind.Z2_SUPER, (1,), (1,)) == 1


def test_bracket_kinds():
    assert bracket_kind(SUP, grading("10"), grading("10")) is BracketKind.ANTICOMMUTATOR
    assert bracket_kind(SUP, grading("10"), grading("01")) is BracketKind.COMMUTATOR
    assert bracket_kind(ALG, grading("10"), grading("11")) is BracketKind.ANTICOMMUTATOR


def test_grading_errors():
    with pytest.raises(GradingError):
        inner_product(ALG, (1,), (0, 1))
    with pytest.raises(GradingError):
        inner_product(SUP, (2, 0), (0, 1))


@given(st.sampled_from([ALG, SUP]), bits, bits, bits)
def test_inner_product_is_symmetric_bilinear(kind, a, b, c):
    assert inner_product(kind, a, b) == inner_product(kind, b, a)
    ab = tuple((x + y) % 2 for x, y in zip(a, b))
    assert inner_product(kind, ab, c) == (inner_product(kind, a, c) + inner_product(kind, b, c)) % 2


class _Graded:
    def __init__(self, m, g):
        self.m, self.g = m, g

    def __add__(self, other):
        return _Graded(self.m + other.m, self.g)

    def __mul__(self, k):
        return _Graded(self.m * k, self.g)


def test_jacobi_combination_on_matrices():
    # graded commutators of 2x2 matrices always satisfy the identity
    from z2z2.matrep import GradedMatrix

    kind = GradingKind.Z2_SUPER

    def bracket(a, b):
        s = bracket_sign(kind, a.g, b.g)
        return _Graded(a.m * b.m - b.m * a.m * s, ((a.g[0] + b.g[0]) % 2,))

    H = _Graded(GradedMatrix([[1, 0], [0, 2]]), (0,))
    Q = _Graded(GradedMatrix([[0, 1], [3, 0]]), (1,))
    R = _Graded(GradedMatrix([[0, 5], [1, 0]]), (1,))
    for triple in ((Q, R, H), (Q, Q, R), (H, Q, Q)):
        res = jacobi_combination(kind, triple, [t.g for t in triple], bracket)
        assert res.m.is_zero()


# ---------------------------------------------------------------------------
# power series

series = st.lists(fractions, min_size=1, max_size=9).map(lambda cs: PowerSeries(cs, 8))


def test_series_inverse_example():
    # 1/(1-x) = 1 + x + x^2 + ...
    inv = (PowerSeries.one(6) - PowerSeries.x(6)).inverse()
    assert list(inv.coefficients) == [1] * 7


def test_series_inverse_needs_unit():
    with pytest.raises(ZeroDivisionError):
        PowerSeries.x(4).inverse()


@given(series, series, series)
def test_series_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(series)
def test_series_inverse_property(a):
    if a[0] != 0:
        assert a * a.inverse() == PowerSeries.one(8)


@given(series, series)
def test_derivative_is_a_derivation(a, b):
    n = 7
    lhs = (a * b).derivative()
    rhs = (a.derivative() * b.truncate(n) + a.truncate(n) * b.derivative())
    assert lhs == rhs


def test_shift_and_unshift():
    s = PowerSeries([0, 0, 1, 2], 5)
    assert s.unshift(2) == PowerSeries([1, 2], 3)
    with pytest.raises(ValueError):
        PowerSeries([1, 2], 4).unshift(1)
