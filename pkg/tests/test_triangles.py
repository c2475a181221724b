import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pascal_fields import triangles as tri
from pascal_fields.triangles import DomainError

from conftest import KINDS
import oracles


@pytest.mark.parametrize(
    "kind, n, k, expected",
    [("pascal", 5, 2, (1, 1)), ("euler", 3, 1, (2, 2)), ("stirling1", 4, 2, (1, 3)), ("stirling2", 4, 3, (1, 3))],
)
def test_coeffs(kind, n, k, expected):
    assert tri.coeffs(kind, n, k) == expected


@pytest.mark.parametrize("n, k", [(0, 0), (3, 4), (3, -1), (-1, 0)])
def test_coeffs_outside_star(n, k):
    with pytest.raises(DomainError):
        tri.coeffs("pascal", n, k)


def test_small_values():
    assert tri.triangle_value("pascal", 4, 2) == 6
    assert tri.triangle_value("stirling2", 3, 2) == 3
    assert tri.triangle_value("euler", 3, 1) == 4


@pytest.mark.parametrize(
    "kind, n, row",
    [("stirling1", 3, (0, 2, 3, 1)), ("euler", 3, (1, 4, 1, 0)), ("pascal", 0, (1,))],
)
def test_rows(kind, n, row):
    assert tri.triangle_row(kind, n) == row


@pytest.mark.parametrize("kind", KINDS)
def test_rows_match_enumeration(kind):
    for n in range(0, 8):
        assert list(tri.triangle_row(kind, n)) == oracles.brute_row(kind, n)


@pytest.mark.parametrize("kind", ["stirling2", "stirling1", "euler"])
def test_recurrence_exact_to_200(kind):
    table = tri.triangle_table(kind, 200)
    for n in range(1, 201):
        for k in range(n + 1):
            a, b = tri.coeffs(kind, n, k)
            assert table(n, k) == a * table(n - 1, k - 1) + b * table(n - 1, k)


def test_support_conventions():
    for n in range(1, 12):
        assert tri.triangle_value("stirling1", n, 0) == 0
        assert tri.triangle_value("stirling2", n, 0) == 0
        assert tri.triangle_value("euler", n, n) == 0


def test_row_sums():
    bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]
    for n in range(11):
        assert sum(tri.triangle_row("pascal", n)) == 2 ** n
        assert sum(tri.triangle_row("stirling1", n)) == math.factorial(n)
        assert sum(tri.triangle_row("euler", n)) == math.factorial(n)
        assert sum(tri.triangle_row("stirling2", n)) == bell[n]


@given(st.integers(1, 120), st.data())
def test_euler_symmetry(n, data):
    k = data.draw(st.integers(0, n - 1))
    assert tri.triangle_value("euler", n, k) == tri.triangle_value("euler", n, n - 1 - k)


def test_log_row_examples():
    assert math.exp(tri.log_row("pascal", 10).log_values[5]) == pytest.approx(252, rel=1e-8)
    lr = tri.log_row("euler", 1).log_values
    assert lr[0] == 0.0 and lr[1] == -np.inf


@pytest.mark.parametrize("kind", KINDS)
def test_log_rows_agree_with_exact(kind):
    for n in (20, 57, 200):
        exact = tri.triangle_row(kind, n)
        logs = tri.log_row(kind, n).log_values
        for k, v in enumerate(exact):
            if v == 0:
                assert logs[k] == -np.inf
            else:
                # exp(log error) - 1 is the relative error of the entry
                assert abs(logs[k] - math.log(v)) < 1e-10


def test_log_row_is_read_only():
    lr = tri.log_row("stirling2", 5)
    with pytest.raises(ValueError):
        lr.log_values[0] = 1.0


@pytest.mark.parametrize("kind", KINDS)
def test_log_recurrence_residual(kind):
    rows = list(tri.iter_log_rows(kind, 150))
    for n in (1, 10, 150):
        for k in range(n + 1):
            a, b = tri.coeffs(kind, n, k)
            terms = []
            if a and k >= 1 and rows[n - 1][k - 1] > -np.inf:
                terms.append(math.log(a) + rows[n - 1][k - 1])
            if b and k < n and rows[n - 1][k] > -np.inf:
                terms.append(math.log(b) + rows[n - 1][k])
            if not terms:
                assert rows[n][k] == -np.inf
                continue
            top = max(terms)
            rhs = top + math.log(sum(math.exp(t - top) for t in terms))
            assert abs(math.expm1(rows[n][k] - rhs)) < 1e-12


# -- row distributions -------------------------------------------------------

def test_distribution_examples():
    assert tri.row_distribution("pascal", 2, Fraction(1, 2), exact=True).probabilities == (
        Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))
    assert tri.row_distribution("euler", 3, exact=True).probabilities == (
        Fraction(1, 6), Fraction(4, 6), Fraction(1, 6), 0)
    assert tri.row_distribution("stirling2", 2, 2, exact=True).probabilities == (0, Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize("N", [1, 2, 3])
def test_stirling2_distribution_matches_draws(N):
    for n in range(1, 6):
        assert list(tri.row_distribution("stirling2", n, N, exact=True).probabilities) == oracles.coupon_draw_law(n, N)


@pytest.mark.parametrize("kind, param", [("pascal", Fraction(1, 3)), ("stirling2", 4),
                                         ("stirling1", Fraction(5, 2)), ("euler", None)])
def test_distribution_sums_to_one(kind, param):
    for n in range(0, 15):
        assert sum(tri.row_distribution(kind, n, param, exact=True).probabilities) == 1
    for n in (1, 30, 400):
        assert abs(tri.row_distribution(kind, n, param).as_array().sum() - 1) < 1e-12


@pytest.mark.parametrize("kind, param", [("pascal", 0.3), ("stirling2", 7), ("stirling1", 1.7), ("euler", None)])
def test_float_distribution_matches_exact(kind, param):
    exact = tri.row_distribution(kind, 25, param, exact=True).as_array()
    approx = tri.row_distribution(kind, 25, param).as_array()
    np.testing.assert_allclose(approx, exact, rtol=1e-11, atol=1e-300)


def test_normalizer_examples():
    assert tri.normalizer("stirling2", 5, 3, exact=True) == 243
    assert tri.normalizer("stirling1", 3, 1, exact=True) == 6
    assert tri.normalizer("euler", 4, exact=True) == 24


@pytest.mark.parametrize("kind, param", [("pascal", Fraction(2, 7)), ("stirling1", Fraction(3, 4)), ("stirling1", 2)])
def test_normalizer_is_weighted_row_sum(kind, param):
    theta = Fraction(param)
    if kind == "pascal":
        theta = theta / (1 - theta)
    for n in range(9):
        row = tri.triangle_row(kind, n)
        assert tri.normalizer(kind, n, param, exact=True) == sum(v * theta ** k for k, v in enumerate(row))
        assert tri.normalizer(kind, n, param) == pytest.approx(float(sum(v * theta ** k for k, v in enumerate(row))))


def test_stirling2_normalizer_falling_factorial_sum():
    for N in (1, 2, 5):
        for n in range(8):
            row = tri.triangle_row("stirling2", n)
            falling = [math.perm(N, k) for k in range(n + 1)]
            assert sum(v * f for v, f in zip(row, falling)) == tri.normalizer("stirling2", n, N, exact=True)


@pytest.mark.parametrize("kind, param", [("pascal", 0), ("pascal", 1.0), ("stirling2", 0), ("stirling2", 2.5),
                                         ("stirling1", 0), ("stirling1", -1.0), ("pascal", None)])
def test_invalid_parameters(kind, param):
    with pytest.raises(DomainError):
        tri.row_distribution(kind, 3, param)
    with pytest.raises(DomainError):
        tri.normalizer(kind, 3, param)


def test_unknown_kind():
    with pytest.raises(DomainError):
        tri.TriangleKind.parse("bell")
