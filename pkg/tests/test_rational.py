import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxsurf.rational import INF, RationalFn, Region, laurent, poly_roots, series_sqrt, zeros_and_poles

roots = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def test_poly_roots_multiplicity():
    # (z - 1)^2 (z + 2) z^3
    c = np.polynomial.polynomial.polyfromroots([1, 1, -2, 0, 0, 0])
    got = sorted(poly_roots(c), key=lambda r: r[0].real)
    assert [m for _, m in got] == [1, 3, 2]
    assert abs(got[0][0] + 2) < 1e-9 and abs(got[2][0] - 1) < 1e-6


def test_constant_has_no_roots():
    assert poly_roots([3.0]) == []


def test_divisor_cancels_common_factors():
    f = RationalFn.from_roots(zeros=[0.5, 2], poles=[0.5, -1])
    zeros, poles = f.divisor
    assert len(zeros) == 1 and abs(zeros[0][0] - 2) < 1e-9
    assert len(poles) == 1 and abs(poles[0][0] + 1) < 1e-9


def test_order_at_points_and_infinity():
    f = RationalFn([0, 0, 1], [1, 0, 0, 0, 1])  # z^2 / (1 + z^4)
    assert f.order_at(0) == 2
    assert f.order_at(INF) == 2
    assert f.order_at(np.exp(1j * np.pi / 4)) == -1
    assert f.order_at(0.3) == 0


def test_zeros_and_poles_in_region():
    f = RationalFn.from_roots(zeros=[0.2, 3.0], poles=[0.5j, -4])
    zeros, poles = zeros_and_poles(f, Region.unit_disk())
    assert [round(abs(a), 9) for a, _ in zeros] == [0.2]
    assert [round(abs(a), 9) for a, _ in poles] == [0.5]


def test_arithmetic_and_derivative():
    z = RationalFn.identity()
    f = (z * z + 1) / (z - 2)
    x = 0.3 + 0.4j
    assert abs(f(x) - (x * x + 1) / (x - 2)) < 1e-14
    h = 1e-6
    assert abs(f.derivative()(x) - (f(x + h) - f(x - h)) / (2 * h)) < 1e-8
    assert abs((f - f)(x)) < 1e-14


def test_value_at_infinity():
    assert RationalFn([1, 2], [3, 4]).at_infinity() == 0.5
    assert RationalFn([1], [0, 1]).at_infinity() == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(roots, min_size=1, max_size=5))
def test_roots_reconstruct_polynomial(rs):
    c = np.polynomial.polynomial.polyfromroots(rs)
    found = poly_roots(c)
    assert sum(m for _, m in found) == len(rs)
    for a, _ in found:
        assert abs(np.polynomial.polynomial.polyval(a, c)) < 1e-6 * (1 + np.max(np.abs(c)))


def test_laurent_simple_pole():
    f = RationalFn([1, 0, 2], [0, 1, -1])  # (1 + 2z^2) / (z (1 - z))
    v, c = laurent(f, 0, 4)
    assert v == -1
    # 1/z (1 + 2z^2)(1 + z + z^2 + ...) = 1/z + 1 + 3z + 3z^2
    assert np.allclose(c, [1, 1, 3, 3])


def test_laurent_at_infinity():
    v, c = laurent(RationalFn([0, 0, 1], [1, 1]), INF, 3)  # z^2/(1+z) = 1/u * 1/(1+u)
    assert v == -1 and np.allclose(c, [1, -1, 1])


def test_series_sqrt_squares_back():
    c = np.array([4, 1, 3, -2], complex)
    s = series_sqrt(c, 4)
    sq = np.convolve(s, s)[:4]
    assert np.allclose(sq, c)


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RationalFn([1], [0])
