from __future__ import annotations

from fractions import Fraction

import pytest

from jetcone.poly import parse_polynomial
from jetcone.series import TruncatedSeries, compose_series


def arc(*vectors):
    return TruncatedSeries.from_vectors(
        [tuple(Fraction(v) for v in vec) for vec in vectors]
    )


def test_series_validation():
    with pytest.raises(ValueError):
        TruncatedSeries(2, 1, ((Fraction(0), Fraction(0)),) * 2)
    with pytest.raises(ValueError):
        TruncatedSeries(2, 2, ((Fraction(0),),) * 3)


def test_compose_parabola_arc_vanishes():
    parabola = parse_polynomial("y - x^2", 2)
    series = arc((0, 0), (1, 0), (0, 1), (0, 0), (0, 0))
    assert all(c == 0 for c in compose_series(parabola, series).scalar_coeffs())


def test_compose_straight_line_leaves_t2_residual():
    parabola = parse_polynomial("y - x^2", 2)
    series = arc((0, 0), (1, 0), (0, 0), (0, 0))
    coeffs = compose_series(parabola, series).scalar_coeffs()
    assert coeffs == (0, 0, Fraction(-1), 0)


def test_compose_zero_series_gives_constant():
    poly = parse_polynomial("x^2 + y - 7", 2)
    series = arc((0, 0), (0, 0), (0, 0))
    coeffs = compose_series(poly, series).scalar_coeffs()
    assert coeffs[0] == poly.evaluate((Fraction(0), Fraction(0)))
    assert all(c == 0 for c in coeffs[1:])


def test_compose_constant_series_agrees_with_evaluate():
    poly = parse_polynomial("x^2*y - 3*x + 1", 2)
    point = (Fraction(2, 3), Fraction(-1, 2))
    series = TruncatedSeries.from_vectors([point, (Fraction(0), Fraction(0)), (Fraction(0), Fraction(0))])
    assert compose_series(poly, series).scalar_coeffs()[0] == poly.evaluate(point)


def test_compose_extended_order_treats_arc_as_polynomial():
    parabola = parse_polynomial("y - x^2", 2)
    series = arc((0, 0), (1, 0), (0, 0))
    coeffs = compose_series(parabola, series, order=5).scalar_coeffs()
    assert coeffs == (0, 0, Fraction(-1), 0, 0, 0)


def test_add_truncates_to_min_order():
    a = arc((0,), (1,), (2,), (3,))
    b = arc((1,), (1,), (1,))
    total = a.add(b)
    assert total.order == 2
    assert total.coeffs == ((Fraction(1),), (Fraction(2),), (Fraction(3),))


def test_truncated_and_padded_round_trip():
    a = arc((0, 0), (1, 2), (3, 4), (5, 6))
    assert a.truncated(2).coeffs == a.coeffs[:3]
    padded = a.padded(5)
    assert padded.order == 5
    assert padded.coeffs[:4] == a.coeffs
    assert all(all(v == 0 for v in vec) for vec in padded.coeffs[4:])


def test_scale():
    a = arc((1, 0), (0, 2), (3, 0))
    assert a.scale(Fraction(1, 2)).coeffs[1] == (Fraction(0), Fraction(1))
