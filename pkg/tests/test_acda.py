import math
from fractions import Fraction

import pytest

from pascal_fields import acda, fields
from pascal_fields.triangles import DomainError, triangle_value

import oracles

SMALL = [(k, n) for k in range(2, 13) for n in range(1, 7) if k * n + 1 <= 13]


def test_trivial_and_hand_cases():
    assert acda.acda_probability(2, 1) == 1
    assert acda.acda_probability(2, 2) == Fraction(24, 30)


@pytest.mark.parametrize("k, n", SMALL)
def test_dp_equals_enumeration(k, n):
    exact, admissible, surjections = oracles.acda_probability_bruteforce(k, n)
    assert acda.acda_probability(k, n) == exact
    rep = acda.acda_report(k, n)
    assert rep.admissible == admissible and rep.surjections == surjections
    assert surjections == triangle_value("stirling2", k * n + 1, n) * math.factorial(n)


def test_float_dp_matches_exact():
    for n in (5, 40, 100):
        assert acda.acda_probability(2, n, exact=False) == pytest.approx(float(acda.acda_probability(2, n, exact=True)),
                                                                          abs=1e-12)


def test_default_switches_to_float_above_limit():
    assert isinstance(acda.acda_probability(2, acda.EXACT_N_LIMIT), Fraction)
    assert isinstance(acda.acda_probability(2, acda.EXACT_N_LIMIT + 1), float)


def test_korsunov_constants():
    c2 = acda.korsunov_constant(2)
    assert c2.c == pytest.approx(0.59362426004004, abs=1e-12)
    assert c2.c + c2.crossing == 1
    assert abs(c2.residual) <= fields.RESIDUAL_TOL
    assert acda.korsunov_constant(3).c == pytest.approx(0.821439372122079, abs=1e-12)
    cs = [acda.korsunov_constant(k).c for k in range(2, 8)]
    assert all(a < b < 1 for a, b in zip(cs, cs[1:]))


def test_approach_to_korsunov():
    c2 = acda.korsunov_constant(2).c
    p10, p100 = acda.acda_probability(2, 10), acda.acda_probability(2, 100)
    assert abs(p100 - c2) < 0.05
    assert abs(p100 - c2) < abs(float(p10) - c2)


def test_domain_errors():
    for k, n in [(1, 3), (2, 0), (2.5, 3), (True, 3)]:
        with pytest.raises(DomainError):
            acda.acda_probability(k, n)
    with pytest.raises(DomainError):
        acda.korsunov_constant(1)
