"""Accessible complete deterministic automata through completion curves.

A surjection [kn+1] -> [n] is admissible when its completion curve X satisfies
k X_l >= l for every l in 0..kn. Under the reversed Stirling2 chain started at
(kn+1, n) the admissible fraction is the probability of staying in that region,
and as n grows it tends to c_k = 1 - k exp(-zeta_2(k-1)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .chains import p1_table
from .fields import zeta
from .triangles import STIRLING2, DomainError, triangle_value

EXACT_N_LIMIT = 30


def _check(k: int, n: int) -> None:
    for name, v, lo in (("k", k, 2), ("n", n, 1)):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < lo:
            raise DomainError(f"{name} must be an integer >= {lo}, got {v!r}")


def admissible_weight(k: int, n: int) -> int:
    """Weighted count of admissible lattice paths from (0, 0) to (kn+1, n).

    Each flat step into level x carries weight x (the Stirling2 coefficient),
    so without the constraint the total is S(kn+1, n); multiplying by n! gives
    the number of admissible surjections.
    """
    _check(k, n)
    m = k * n + 1
    mass = [1] + [0] * n
    for step in range(1, m + 1):
        new = [0] * (n + 1)
        for x in range(1, min(step, n) + 1):
            if step <= m - 1 and k * x < step:
                continue
            new[x] = mass[x - 1] + x * mass[x]
        mass = new
    return mass[n]


def _float_probability(k: int, n: int) -> float:
    """Forward DP of path mass under the reversed chain, with a float p1 table."""
    m = k * n + 1
    table = p1_table(STIRLING2, m)
    mass = np.zeros(n + 1)
    mass[0] = 1.0
    x = np.arange(n + 1)
    for step in range(1, m + 1):
        p1 = np.nan_to_num(table[step, : n + 1], nan=0.0)
        new = np.zeros(n + 1)
        new[1:] = mass[:-1] * p1[1:]
        new += mass * (1.0 - p1)
        new[x > step] = 0.0
        new[0] = 0.0
        if step <= m - 1:
            new[k * x < step] = 0.0
        mass = new
    return float(mass[n])


@dataclass(frozen=True)
class KorsunovConstant:
    k: int
    c: float
    crossing: float     # 1 - c_k, probability that the line y = x/k is crossed
    zeta: float
    residual: float


def korsunov_constant(k: int) -> KorsunovConstant:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k!r}")
    sol = zeta(STIRLING2, k - 1)
    crossing = k * math.exp(-sol.zeta)
    return KorsunovConstant(int(k), 1.0 - crossing, crossing, sol.zeta, sol.residual)


@dataclass(frozen=True)
class AcdaReport:
    k: int
    n: int
    probability: Fraction | float
    c_k: float
    exact: bool
    admissible: int | None = None     # admissible surjections (exact mode)
    surjections: int | None = None

    @property
    def gap(self) -> float:
        return abs(float(self.probability) - self.c_k)

    def to_dict(self) -> dict:
        return {"report": "acda", "library_version": __version__, "k": self.k, "n": self.n,
                "exact": self.exact, "probability": self.probability,
                "probability_float": float(self.probability), "c_k": self.c_k, "gap": self.gap,
                "admissible_surjections": self.admissible, "surjections": self.surjections}


def acda_probability(k: int, n: int, exact: bool | None = None) -> Fraction | float:
    """P_(kn+1, n)(k X_l >= l for l = 0..kn); exact rational when n <= EXACT_N_LIMIT by default."""
    _check(k, n)
    if exact is None:
        exact = n <= EXACT_N_LIMIT
    if exact:
        return Fraction(admissible_weight(k, n), triangle_value(STIRLING2, k * n + 1, n))
    return _float_probability(k, n)


def acda_report(k: int, n: int, exact: bool | None = None) -> AcdaReport:
    _check(k, n)
    if exact is None:
        exact = n <= EXACT_N_LIMIT
    c = korsunov_constant(k).c
    if not exact:
        return AcdaReport(k, n, acda_probability(k, n, exact=False), c, False)
    w = admissible_weight(k, n)
    total = triangle_value(STIRLING2, k * n + 1, n)
    f = math.factorial(n)
    return AcdaReport(k, n, Fraction(w, total), c, True, w * f, total * f)
