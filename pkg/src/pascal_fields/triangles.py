"""Pascal-type triangles T(n, k) = a(n,k) T(n-1,k-1) + b(n,k) T(n-1,k).

Four kinds are supported: binomial coefficients, Stirling numbers of both
kinds (unsigned) and Eulerian numbers. Rows are available as exact Python
integers or in the log domain (binary64, log-sum-exp recurrence). Which one a
caller uses is the caller's choice; nothing switches automatically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence, Union

import numpy as np

Number = Union[int, float, Fraction]


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class UnreachableStateError(DomainError):
    """A chain was asked to start from, or move through, a state with T(n,k)=0."""


class TriangleKind(str, enum.Enum):
    PASCAL = "pascal"
    STIRLING2 = "stirling2"
    STIRLING1 = "stirling1"
    EULER = "euler"

    @classmethod
    def parse(cls, value: "str | TriangleKind") -> "TriangleKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise DomainError(f"unknown triangle kind {value!r} (expected one of {names})") from None

    @property
    def parameter_name(self) -> str | None:
        return {"pascal": "p", "stirling2": "N", "stirling1": "theta", "euler": None}[self.value]


PASCAL, STIRLING2, STIRLING1, EULER = (
    TriangleKind.PASCAL,
    TriangleKind.STIRLING2,
    TriangleKind.STIRLING1,
    TriangleKind.EULER,
)


def _check_star(n: int, k: int) -> None:
    if not (0 <= k <= n) or n == 0:
        raise DomainError(f"(n, k) = ({n}, {k}) is not in S* = {{0 <= k <= n, (n, k) != (0, 0)}}")


def coeffs(kind: TriangleKind | str, n: int, k: int) -> tuple[int, int]:
    """Coefficient pair (a, b) of the kind's Pascal formula at (n, k)."""
    kind = TriangleKind.parse(kind)
    _check_star(n, k)
    return _coeffs(kind, n, k)


def _coeffs(kind: TriangleKind, n: int, k: int) -> tuple[int, int]:
    if kind is PASCAL:
        return 1, 1
    if kind is STIRLING2:
        return 1, k
    if kind is STIRLING1:
        return 1, n - 1
    return n - k, k + 1


def egf_weight(kind: TriangleKind | str, n: int) -> int:
    """f_n: 1 for ordinary generating functions, n! for the two Stirling kinds."""
    kind = TriangleKind.parse(kind)
    return math.factorial(n) if kind in (STIRLING1, STIRLING2) else 1


# ---------------------------------------------------------------------------
# exact rows

def _next_row(kind: TriangleKind, n: int, prev: Sequence[int]) -> tuple[int, ...]:
    # prev is row n-1 (length n); returns row n (length n+1)
    row = []
    for k in range(n + 1):
        a, b = _coeffs(kind, n, k)
        left = prev[k - 1] if k >= 1 else 0
        right = prev[k] if k < n else 0
        row.append(a * left + b * right)
    return tuple(row)


def iter_rows(kind: TriangleKind | str, n_max: int) -> Iterator[tuple[int, ...]]:
    """Yield exact rows 0..n_max, one bottom-up sweep, O(n) live memory."""
    kind = TriangleKind.parse(kind)
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    row: tuple[int, ...] = (1,)
    yield row
    for n in range(1, n_max + 1):
        row = _next_row(kind, n, row)
        yield row


@lru_cache(maxsize=64)
def _row_cached(kind: TriangleKind, n: int) -> tuple[int, ...]:
    if kind is PASCAL:
        return tuple(math.comb(n, k) for k in range(n + 1))
    row: tuple[int, ...] = (1,)
    for row in iter_rows(kind, n):
        pass
    return row


def triangle_row(kind: TriangleKind | str, n: int) -> tuple[int, ...]:
    """Exact row (T(n,0), ..., T(n,n))."""
    kind = TriangleKind.parse(kind)
    if n < 0:
        raise DomainError("n must be >= 0")
    return _row_cached(kind, n)


def triangle_value(kind: TriangleKind | str, n: int, k: int) -> int:
    kind = TriangleKind.parse(kind)
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got (n, k) = ({n}, {k})")
    if kind is PASCAL:
        return math.comb(n, k)
    return triangle_row(kind, n)[k]


@dataclass(frozen=True)
class TriangleTable:
    kind: TriangleKind
    n_max: int
    rows: tuple[tuple[int, ...], ...]

    def __call__(self, n: int, k: int) -> int:
        if 0 <= k <= n <= self.n_max:
            return self.rows[n][k]
        return 0

    def row_sums(self) -> list[int]:
        return [sum(r) for r in self.rows]


def triangle_table(kind: TriangleKind | str, n_max: int) -> TriangleTable:
    kind = TriangleKind.parse(kind)
    return TriangleTable(kind, n_max, tuple(iter_rows(kind, n_max)))


# ---------------------------------------------------------------------------
# log-domain rows

@dataclass(frozen=True)
class LogRow:
    """log T(n, k) for k = 0..n; -inf encodes a zero entry."""

    kind: TriangleKind
    n: int
    log_values: np.ndarray = field(repr=False)

    def values(self) -> np.ndarray:
        return np.exp(self.log_values)


def _log_coeff_arrays(kind: TriangleKind, n: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(n + 1, dtype=float)
    if kind is PASCAL:
        a, b = np.ones_like(k), np.ones_like(k)
    elif kind is STIRLING2:
        a, b = np.ones_like(k), k
    elif kind is STIRLING1:
        a, b = np.ones_like(k), np.full_like(k, n - 1)
    else:
        a, b = n - k, k + 1
    with np.errstate(divide="ignore"):
        return np.log(a), np.log(b)


def iter_log_rows(kind: TriangleKind | str, n_max: int) -> Iterator[np.ndarray]:
    """Yield log rows 0..n_max as float arrays (row n has length n+1)."""
    kind = TriangleKind.parse(kind)
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    row = np.zeros(1)
    yield row
    for n in range(1, n_max + 1):
        log_a, log_b = _log_coeff_arrays(kind, n)
        left = np.concatenate(([-np.inf], row))
        right = np.concatenate((row, [-np.inf]))
        row = np.logaddexp(log_a + left, log_b + right)
        yield row


def log_row(kind: TriangleKind | str, n: int) -> LogRow:
    kind = TriangleKind.parse(kind)
    if n < 0:
        raise DomainError("n must be >= 0")
    row = np.zeros(1)
    for row in iter_log_rows(kind, n):
        pass
    row = row.copy()
    row.flags.writeable = False
    return LogRow(kind, n, row)


# ---------------------------------------------------------------------------
# row distributions h_n and normalizers T_n

def validate_parameter(kind: TriangleKind | str, param, *, closed: bool = False):
    """Check and normalize the growth-process parameter of ``kind``.

    ``closed`` admits p in {0, 1} for the binomial walk (degenerate but
    simulable); distributions written through theta = p/(1-p) need p in (0,1).
    """
    kind = TriangleKind.parse(kind)
    if kind is EULER:
        return None
    if param is None:
        raise DomainError(f"{kind.value} needs a parameter {kind.parameter_name}")
    if kind is PASCAL:
        ok = 0 <= param <= 1 if closed else 0 < param < 1
        if not ok:
            raise DomainError(f"p must lie in {'[0, 1]' if closed else '(0, 1)'}, got {param}")
        return param
    if kind is STIRLING2:
        if isinstance(param, float) and param.is_integer():
            param = int(param)
        if isinstance(param, Fraction) and param.denominator == 1:
            param = int(param)
        if not isinstance(param, (int, np.integer)) or isinstance(param, bool) or param < 1:
            raise DomainError(f"N must be an integer >= 1, got {param!r}")
        return int(param)
    if not param > 0:
        raise DomainError(f"theta must be > 0, got {param}")
    return param


def _as_exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _falling(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


def _rising(x: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= x + i
    return out


def normalizer(kind: TriangleKind | str, n: int, param=None, *, exact: bool = False) -> Number:
    """T_n(theta): (1+theta)^n, N^n, (theta)^{rising n} or n!, by kind."""
    kind = TriangleKind.parse(kind)
    param = validate_parameter(kind, param)
    if n < 0:
        raise DomainError("n must be >= 0")
    if kind is EULER:
        v = math.factorial(n)
        return v if exact else float(v)
    if kind is STIRLING2:
        v = param ** n
        return v if exact else float(v)
    if exact:
        param = _as_exact(param)
        if kind is PASCAL:
            return (1 + param / (1 - param)) ** n
        return _rising(param, n)
    if kind is PASCAL:
        return (1.0 / (1.0 - param)) ** n
    return math.exp(math.lgamma(param + n) - math.lgamma(param))


@dataclass(frozen=True)
class RowDistribution:
    kind: TriangleKind
    n: int
    parameter: Number | None
    probabilities: tuple

    def as_array(self) -> np.ndarray:
        return np.array([float(p) for p in self.probabilities])


def row_distribution(kind: TriangleKind | str, n: int, param=None, *, exact: bool = False) -> RowDistribution:
    """h_n(k) = P(X_n = k) for the kind's forward growth process."""
    kind = TriangleKind.parse(kind)
    param = validate_parameter(kind, param)
    if n < 0:
        raise DomainError("n must be >= 0")
    if exact:
        return RowDistribution(kind, n, param, tuple(_exact_distribution(kind, n, param)))
    return RowDistribution(kind, n, param, tuple(_float_distribution(kind, n, param)))


def _exact_distribution(kind: TriangleKind, n: int, param) -> list[Fraction]:
    row = triangle_row(kind, n)
    if kind is EULER:
        total = math.factorial(n)
        return [Fraction(v, total) for v in row]
    if kind is STIRLING2:
        total = param ** n
        return [Fraction(v * _falling(param, k), total) for k, v in enumerate(row)]
    theta = _as_exact(param)
    if kind is PASCAL:
        theta = theta / (1 - theta)
    weights = [v * theta ** k for k, v in enumerate(row)]
    total = normalizer(kind, n, param, exact=True)
    return [w / total for w in weights]


def _float_distribution(kind: TriangleKind, n: int, param) -> np.ndarray:
    logs = log_row(kind, n).log_values
    k = np.arange(n + 1)
    if kind is EULER:
        weights = logs
    elif kind is STIRLING2:
        with np.errstate(divide="ignore"):
            # log N^{k falling}; -inf once k > N
            terms = np.log(np.maximum(param - np.arange(n + 1), 0).astype(float))
        weights = logs + np.concatenate(([0.0], np.cumsum(terms[:-1])))
    elif kind is PASCAL:
        p = float(param)
        weights = logs + k * math.log(p) + (n - k) * math.log1p(-p)
    else:
        weights = logs + k * math.log(float(param))
    # normalize by the weights themselves rather than the closed-form T_n:
    # rounding in the log rows then cancels instead of accumulating
    top = weights.max()
    weights = weights - (top + math.log(np.exp(weights - top).sum()))
    return np.exp(weights)
