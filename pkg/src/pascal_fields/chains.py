"""Forward growth processes and their time-reversed chains.

Forward side: X_0 = 0, X_{n+1} = X_n + Y_{n+1} with Bernoulli increments whose
up-probability Q_{n,x,x+1} depends on the kind (binomial walk, coupon
collector, Chinese restaurant, descents of the random permutation process).

Reversed side: from (n, k) the chain moves to (n-1, k-1) with probability
p1 = a T(n-1,k-1) / T(n,k) and to (n-1, k) with p0 = b T(n-1,k) / T(n,k).

Randomness
----------
Every draw comes from ``path_rng(seed, index)``: a PCG64 generator seeded by
``numpy.random.SeedSequence(seed, spawn_key=(index,))``. Path ``i`` of any batch
therefore uses the same stream as a single simulation with ``path_index=i``,
whatever the batch size or order of evaluation.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .triangles import (
    PASCAL, STIRLING1, STIRLING2,
    DomainError, TriangleKind, UnreachableStateError,
    _coeffs, iter_log_rows, iter_rows, triangle_row, validate_parameter,
)

ENUMERATION_BOUND = 12
EXACT_TABLE_LIMIT = 200   # p1 tables above this size come from log rows
U64 = 1 << 64


def path_rng(seed: int, index: int = 0) -> np.random.Generator:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < U64:
        raise DomainError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    if index < 0:
        raise DomainError("path index must be >= 0")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(index),))))


# ---------------------------------------------------------------------------
# reversed transitions

@dataclass(frozen=True)
class TransitionPair:
    p0: float | Fraction
    p1: float | Fraction


def reverse_transition(kind: TriangleKind | str, n: int, k: int, *, exact: bool = True) -> TransitionPair:
    """Step probabilities out of (n, k): p1 towards (n-1, k-1), p0 towards (n-1, k).

    ``exact=False`` evaluates the ratio from log-domain rows, which is what large
    n needs; exact mode returns Fractions.
    """
    kind = TriangleKind.parse(kind)
    if not 0 <= k <= n or n == 0:
        raise DomainError(f"(n, k) = ({n}, {k}) is not in S*")
    a, b = _coeffs(kind, n, k)
    if exact:
        prev, cur = triangle_row(kind, n - 1), triangle_row(kind, n)
        if cur[k] == 0:
            raise UnreachableStateError(f"T({n},{k}) = 0 for {kind.value}")
        up = Fraction(a * prev[k - 1], cur[k]) if k >= 1 else Fraction(0)
        stay = Fraction(b * prev[k], cur[k]) if k < n else Fraction(0)
        return TransitionPair(stay, up)
    prev = cur = None
    for row in iter_log_rows(kind, n):
        prev, cur = cur, row
    if cur[k] == -np.inf:
        raise UnreachableStateError(f"T({n},{k}) = 0 for {kind.value}")
    up = math.exp(math.log(a) + prev[k - 1] - cur[k]) if k >= 1 and a and prev[k - 1] > -np.inf else 0.0
    return TransitionPair(1.0 - up, up)


def p1_table(kind: TriangleKind | str, m: int, *, method: str = "auto") -> np.ndarray:
    """Array P with P[n, k] = p1(n, k) for 1 <= n <= m; NaN where T(n, k) = 0.

    ``method`` is "exact" (big-integer rows, correctly rounded ratios), "log"
    or "auto" (exact up to EXACT_TABLE_LIMIT).
    """
    kind = TriangleKind.parse(kind)
    if method == "auto":
        method = "exact" if m <= EXACT_TABLE_LIMIT else "log"
    table = np.full((m + 1, m + 1), np.nan)
    if method == "exact":
        prev = None
        for n, row in enumerate(iter_rows(kind, m)):
            if n:
                for k in range(n + 1):
                    if row[k]:
                        a = _coeffs(kind, n, k)[0]
                        table[n, k] = a * prev[k - 1] / row[k] if k else 0.0
            prev = row
        return table
    if method != "log":
        raise DomainError(f"unknown method {method!r}")
    prev = None
    for n, row in enumerate(iter_log_rows(kind, m)):
        if n:
            k = np.arange(n + 1)
            a = np.array([_coeffs(kind, n, j)[0] for j in k], dtype=float)
            left = np.concatenate(([-np.inf], prev))
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = np.exp(np.log(a) + left - row)
            vals[~np.isfinite(row)] = np.nan
            vals[np.isfinite(row) & ~(vals >= 0)] = 0.0
            table[n, : n + 1] = np.minimum(vals, 1.0)
        prev = row
    return table


# ---------------------------------------------------------------------------
# forward kernels

def forward_kernel(kind: TriangleKind | str, param, n: int, x: int, *, exact: bool = False):
    """Up-step probability Q_{n,x,x+1} = P(X_{n+1} = x + 1 | X_n = x)."""
    kind = TriangleKind.parse(kind)
    param = validate_parameter(kind, param, closed=True)
    if not 0 <= x <= n:
        raise DomainError(f"x = {x} is outside the support 0..{n} of X_{n}")
    if kind is PASCAL:
        q = Fraction(param) if exact else float(param)
    elif kind is STIRLING2:
        if x > param:
            raise DomainError(f"x = {x} exceeds N = {param}")
        q = Fraction(param - x, param)
    elif kind is STIRLING1:
        theta = Fraction(param) if exact else float(param)
        q = theta / (n + theta)
    else:
        q = Fraction(n - x, n + 1)
    return q if exact else float(q)


def propagate(kind: TriangleKind | str, param, n: int, h: list) -> list:
    """h_{n+1} = h_n Q_n (Chapman-Kolmogorov), exact if ``h`` holds Fractions."""
    exact = any(isinstance(v, Fraction) for v in h)
    out = [Fraction(0) if exact else 0.0] * (n + 2)
    for x, mass in enumerate(h):
        if not mass:
            continue
        q = forward_kernel(kind, param, n, x, exact=exact)
        out[x] += mass * (1 - q)
        out[x + 1] += mass * q
    return out


# ---------------------------------------------------------------------------
# sample paths

@dataclass(frozen=True)
class PathSample:
    """A trajectory X_0..X_m stored as its increments Y_1..Y_m."""

    kind: TriangleKind
    m: int
    steps: np.ndarray = field(repr=False)
    direction: str = "forward"
    seed: int | None = None
    path_index: int = 0
    parameter: object = None

    @property
    def X(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.steps, dtype=np.int64)))

    @property
    def start(self) -> tuple[int, int]:
        return (0, 0) if self.direction == "forward" else (self.m, int(self.X[-1]))

    @property
    def end(self) -> tuple[int, int]:
        return (self.m, int(self.X[-1])) if self.direction == "forward" else (0, 0)

    def w(self, t):
        """Normalized path w_m(t) = X_{floor(mt)} / m."""
        idx = np.floor(np.asarray(t, dtype=float) * self.m).astype(int)
        return self.X[idx] / self.m

    def increments_string(self) -> str:
        return "".join(str(int(v)) for v in self.steps)

    def to_rows(self) -> list[tuple[int, int]]:
        return [(n, int(x)) for n, x in enumerate(self.X)]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "direction": self.direction,
            "m": self.m,
            "start": list(self.start),
            "end": list(self.end),
            "seed": self.seed,
            "path_index": self.path_index,
            "parameter": _jsonable(self.parameter),
            "X": [int(v) for v in self.X],
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def simulate_forward(kind: TriangleKind | str, param, m: int, seed: int, *, path_index: int = 0) -> PathSample:
    kind = TriangleKind.parse(kind)
    param = validate_parameter(kind, param, closed=True)
    if m < 1:
        raise DomainError("m must be >= 1")
    u = path_rng(seed, path_index).random(m)
    steps = np.zeros(m, dtype=np.uint8)
    x = 0
    for i in range(m):
        if u[i] < forward_kernel(kind, param, i, x):
            steps[i] = 1
            x += 1
    return PathSample(kind, m, steps, "forward", seed, path_index, param)


def _check_start(kind: TriangleKind, m: int, ell: int, table: np.ndarray | None = None) -> None:
    if m < 1 or not 0 <= ell <= m:
        raise DomainError(f"start (m, ell) = ({m}, {ell}) is not in S*")
    if table is not None:
        ok = not np.isnan(table[m, ell])
    else:
        ok = triangle_row(kind, m)[ell] > 0
    if not ok:
        raise UnreachableStateError(f"T({m},{ell}) = 0 for {kind.value}")


def reversed_paths(kind: TriangleKind | str, m: int, ell: int, n_paths: int, seed: int, *,
                   table: np.ndarray | None = None, first_index: int = 0) -> np.ndarray:
    """X trajectories of ``n_paths`` reversed chains from (m, ell), shape (n_paths, m+1).

    Row i uses ``path_rng(seed, first_index + i)``; the uniform U_j decides the
    j-th backward step (down-step iff U_j < p1).
    """
    kind = TriangleKind.parse(kind)
    if table is None:
        table = p1_table(kind, m)
    _check_start(kind, m, ell, table)
    if n_paths < 1:
        raise DomainError("n_paths must be >= 1")
    u = np.stack([path_rng(seed, first_index + i).random(m) for i in range(n_paths)])
    X = np.empty((n_paths, m + 1), dtype=np.int64)
    k = np.full(n_paths, ell, dtype=np.int64)
    X[:, m] = k
    for j in range(m):
        n = m - j
        k = k - (u[:, j] < table[n, k])
        X[:, n - 1] = k
    if np.any(X[:, 0] != 0):
        raise RuntimeError("reversed chain failed to reach (0, 0)")
    return X


def simulate_reversed(kind: TriangleKind | str, m: int, ell: int, seed: int, *, path_index: int = 0,
                      table: np.ndarray | None = None) -> PathSample:
    kind = TriangleKind.parse(kind)
    X = reversed_paths(kind, m, ell, 1, seed, table=table, first_index=path_index)[0]
    return PathSample(kind, m, np.diff(X).astype(np.uint8), "reversed", seed, path_index)


# ---------------------------------------------------------------------------
# exact path laws (small m)

@dataclass(frozen=True)
class PathLaw:
    """Exact law of (X_0..X_m) on {X_m = ell}, keyed by the increment string Y_1..Y_m."""

    kind: TriangleKind
    m: int
    ell: int
    probabilities: dict

    def total(self) -> Fraction:
        return sum(self.probabilities.values(), Fraction(0))

    def marginal(self, n: int) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for word, prob in self.probabilities.items():
            x = word[:n].count("1")
            out[x] = out.get(x, Fraction(0)) + prob
        return out

    def to_json(self) -> str:
        body = {
            "kind": self.kind.value,
            "m": self.m,
            "ell": self.ell,
            "law": {w: {"numerator": str(p.numerator), "denominator": str(p.denominator)}
                    for w, p in sorted(self.probabilities.items())},
        }
        return json.dumps(body, indent=2, sort_keys=True)


def _patterns(m: int, ell: int) -> Iterable[tuple[int, ...]]:
    for ups in itertools.combinations(range(m), ell):
        y = [0] * m
        for i in ups:
            y[i] = 1
        yield tuple(y)


def _check_enumerable(m: int, ell: int) -> None:
    if not 1 <= m <= ENUMERATION_BOUND:
        raise DomainError(f"exact path laws need 1 <= m <= {ENUMERATION_BOUND}, got m = {m}")
    if not 0 <= ell <= m:
        raise DomainError(f"ell = {ell} outside 0..{m}")


def conditioned_forward_law(kind: TriangleKind | str, param, m: int, ell: int) -> PathLaw:
    """Law of the forward path given X_m = ell, by enumerating all C(m, ell) patterns."""
    kind = TriangleKind.parse(kind)
    param = validate_parameter(kind, param, closed=True)
    if kind is not STIRLING2 and param is not None:
        param = Fraction(param)
    _check_enumerable(m, ell)
    weights = {}
    for y in _patterns(m, ell):
        w, x = Fraction(1), 0
        for i, step in enumerate(y):
            if kind is STIRLING2 and x > param:
                w = Fraction(0)
                break
            q = forward_kernel(kind, param, i, x, exact=True)
            w *= q if step else 1 - q
            x += step
            if not w:
                break
        weights["".join(map(str, y))] = w
    total = sum(weights.values(), Fraction(0))
    if total == 0:
        raise DomainError(f"P(X_{m} = {ell}) = 0 under {kind.value} with parameter {param}")
    return PathLaw(kind, m, ell, {w: v / total for w, v in weights.items()})


def reversed_law(kind: TriangleKind | str, m: int, ell: int) -> PathLaw:
    """Law of the reversed chain from (m, ell), written as forward increment strings."""
    kind = TriangleKind.parse(kind)
    _check_enumerable(m, ell)
    rows = list(iter_rows(kind, m))
    if rows[m][ell] == 0:
        raise UnreachableStateError(f"T({m},{ell}) = 0 for {kind.value}")
    law = {}
    for y in _patterns(m, ell):
        prob, x = Fraction(1), ell
        # walk backwards from (m, ell): the step into (n, x) is y[n-1]
        for n in range(m, 0, -1):
            step = y[n - 1]
            a, b = _coeffs(kind, n, x)
            if step:
                prob *= Fraction(a * rows[n - 1][x - 1], rows[n][x])
            else:
                prob *= Fraction(b * rows[n - 1][x], rows[n][x]) if x < n else 0
            x -= step
            if not prob:
                break
        law["".join(map(str, y))] = prob
    return PathLaw(kind, m, ell, law)


# ---------------------------------------------------------------------------
# one-dimensional internal DLA and Tanny's representation

def idla_simulate(n: int, seed: int, *, run_index: int = 0) -> int:
    """Number of particles settled right of the origin once ``n`` particles are released.

    Literal dynamics: the first particle settles at 0, each later one walks
    +-1 from 0 until it steps on an empty site.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = path_rng(seed, run_index)
    left = right = 0        # occupied sites form [-left, right]
    for _ in range(n - 1):
        pos = 0
        while True:
            for step in rng.integers(0, 2, size=32):
                pos += 1 if step else -1
                if pos > right or pos < -left:
                    break
            else:
                continue
            break
        if pos > right:
            right += 1
        else:
            left += 1
    return right


def idla_counts(n: int, runs: int, seed: int) -> np.ndarray:
    counts = np.zeros(n + 1, dtype=np.int64)
    for r in range(runs):
        counts[idla_simulate(n, seed, run_index=r)] += 1
    return counts


def tanny_sample(n: int, seed: int, size: int | None = None, *, chunk: int = 1 << 17):
    """floor(U_1 + ... + U_n) for i.i.d. uniforms; a scalar, or an array of ``size`` draws."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = path_rng(seed, 0)
    if size is None:
        return int(math.floor(rng.random(n).sum()))
    out = np.empty(size, dtype=np.int64)
    for start in range(0, size, chunk):
        stop = min(start + chunk, size)
        out[start:stop] = np.floor(rng.random((stop - start, n)).sum(axis=1))
    return out


def total_variation(p, q) -> float:
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    size = max(len(p), len(q))
    p = np.pad(p, (0, size - len(p)))
    q = np.pad(q, (0, size - len(q)))
    return 0.5 * float(np.abs(p - q).sum())
