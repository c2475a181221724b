"""Desk-scale experiments: slope convergence, sample-path convergence, averaged paths.

Every experiment starts the reversed chain at (m, l) with l = round(m/(1+lam))
and compares against the field line at the realized lam = (m - l)/l, not the
requested one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .chains import PathSample, p1_table, reverse_transition, reversed_paths
from .fields import field_line, phi
from .triangles import EULER, PASCAL, DomainError, TriangleKind

SLOPE_EXACT_LIMIT = 300
PROVEN = "proven"
CONJECTURAL = "conjectural"


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def start_level(m: int, lam) -> int:
    """l = round(m/(1+lam)), halves rounded up."""
    if m < 1:
        raise DomainError("m must be >= 1")
    if not lam > 0 or not math.isfinite(lam):
        raise DomainError(f"lambda must be a finite positive number, got {lam!r}")
    if isinstance(lam, (int, Fraction)):
        q = Fraction(m) / (1 + Fraction(lam))
        return math.floor(q + Fraction(1, 2))
    return round_half_up(m / (1.0 + lam))


def realized_lambda(m: int, ell: int, exact: bool = False):
    if not 0 < ell < m:
        raise DomainError(f"l = {ell} gives no positive finite lambda at m = {m}")
    return Fraction(m - ell, ell) if exact else (m - ell) / ell


def _check_support(kind: TriangleKind, m: int, ell: int) -> None:
    # supports for m >= 1: pascal 0..m, stirling 1..m, euler 0..m-1
    lo = 1 if kind.value.startswith("stirling") else 0
    hi = m - 1 if kind is EULER else m
    if not lo <= ell <= hi:
        raise DomainError(f"({m}, {ell}) is outside the support of {kind.value}")


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials <= 0:
        return (0.0, 1.0)
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return (lo, hi)


# ---------------------------------------------------------------------------
# sup distance

def sup_distance(path, line: Callable) -> float:
    """max_j |X_j/m - gamma(j/m)| over the grid j = 0..m.

    ``path`` is a PathSample or the array X_0..X_m; ``line`` any callable on [0, 1].
    """
    X = path.X if isinstance(path, PathSample) else np.asarray(path)
    m = len(X) - 1
    if m < 1:
        raise DomainError("path horizon must be >= 1")
    t = np.arange(m + 1) / m
    return float(np.max(np.abs(X / m - np.asarray(line(t), dtype=float))))


def sup_distances(X: np.ndarray, line: Callable) -> np.ndarray:
    """Row-wise sup distance for a batch of paths of shape (n_paths, m+1)."""
    m = X.shape[1] - 1
    t = np.arange(m + 1) / m
    return np.max(np.abs(X / m - np.asarray(line(t), dtype=float)[None, :]), axis=1)


# ---------------------------------------------------------------------------
# sample-path convergence

@dataclass(frozen=True)
class ConvergenceReport:
    kind: TriangleKind
    m: int
    ell: int
    lam: float
    lam_realized: float
    eta: float
    n_paths: int
    seed: int
    threshold: float
    distances: np.ndarray = field(repr=False)
    exceedances: int
    status: str

    @property
    def fraction(self) -> float:
        return self.exceedances / self.n_paths

    @property
    def wilson(self) -> tuple[float, float]:
        return wilson_interval(self.exceedances, self.n_paths)

    def to_dict(self) -> dict:
        return {
            "report": "convergence",
            "library_version": __version__,
            "kind": self.kind.value, "status": self.status,
            "m": self.m, "ell": self.ell, "lambda": self.lam, "lambda_realized": self.lam_realized,
            "eta": self.eta, "threshold": self.threshold, "n_paths": self.n_paths, "seed": self.seed,
            "exceedances": self.exceedances, "fraction": self.fraction, "wilson_95": list(self.wilson),
            "sup_distances": [float(d) for d in self.distances],
        }

    def rows(self):
        return [(i, float(d), bool(d >= self.threshold)) for i, d in enumerate(self.distances)]


def convergence_experiment(kind: TriangleKind | str, m: int, lam, eta: float, n_paths: int,
                           seed: int, *, table: np.ndarray | None = None) -> ConvergenceReport:
    """Fraction of reversed paths from (m, round(m/(1+lam))) whose sup distance is >= m**-eta."""
    kind = TriangleKind.parse(kind)
    if not 0 < eta < 0.5:
        raise DomainError("eta must lie in (0, 1/2)")
    if n_paths < 1:
        raise DomainError("n_paths must be >= 1")
    ell = start_level(m, lam)
    lam_r = realized_lambda(m, ell)
    _check_support(kind, m, ell)
    line = field_line(kind, lam_r)
    X = reversed_paths(kind, m, ell, n_paths, seed, table=table)
    d = sup_distances(X, line)
    threshold = m ** -eta
    return ConvergenceReport(kind, m, ell, float(lam), lam_r, float(eta), n_paths, seed, threshold,
                             d, int(np.sum(d >= threshold)), CONJECTURAL if kind is EULER else PROVEN)


# ---------------------------------------------------------------------------
# slope convergence

@dataclass(frozen=True)
class SlopeRow:
    m: int
    ell: int
    lam_realized: float | Fraction
    p1: float | Fraction
    phi: float | Fraction
    error: float | Fraction


@dataclass(frozen=True)
class SlopeReport:
    kind: TriangleKind
    lam: float
    method: str
    rows: tuple[SlopeRow, ...]

    def errors(self) -> list:
        return [r.error for r in self.rows]

    def to_dict(self) -> dict:
        return {"report": "slope", "library_version": __version__, "kind": self.kind.value,
                "lambda": self.lam, "method": self.method,
                "rows": [{"m": r.m, "ell": r.ell, "lambda_realized": r.lam_realized, "p1": r.p1,
                          "phi": r.phi, "error": r.error} for r in self.rows]}


def slope_convergence(kind: TriangleKind | str, lam, m_list: Sequence[int], *, method: str = "auto") -> SlopeReport:
    """|p1(m, l) - phi(lam realized)| along m_list.

    ``method``: "exact" (big integers), "log" (log-domain rows) or "auto"
    (exact up to SLOPE_EXACT_LIMIT). Pascal is always exact: p1 = l/m = phi.
    """
    kind = TriangleKind.parse(kind)
    if method not in ("auto", "exact", "log"):
        raise DomainError(f"unknown method {method!r}")
    rows = []
    for m in m_list:
        ell = start_level(m, lam)
        _check_support(kind, m, ell)
        if kind is PASCAL:
            lam_r = realized_lambda(m, ell, exact=True)
            p1 = reverse_transition(kind, m, ell).p1
            ph = phi(kind, lam_r)
            rows.append(SlopeRow(m, ell, lam_r, p1, ph, abs(p1 - ph)))
            continue
        lam_r = realized_lambda(m, ell)
        exact = method == "exact" or (method == "auto" and m <= SLOPE_EXACT_LIMIT)
        p1 = float(reverse_transition(kind, m, ell, exact=exact).p1)
        ph = phi(kind, lam_r)
        rows.append(SlopeRow(m, ell, lam_r, p1, ph, abs(p1 - ph)))
    return SlopeReport(kind, float(lam), "exact" if kind is PASCAL else method, tuple(rows))


# ---------------------------------------------------------------------------
# averaged paths

@dataclass(frozen=True)
class AveragedPaths:
    """Mean of w_m over n_paths reversed paths, one curve per start (m, round(m t))."""

    kind: TriangleKind
    m: int
    n_paths: int
    seed: int
    starts: tuple[float, ...]
    levels: tuple[int, ...]
    t: np.ndarray = field(repr=False)
    means: np.ndarray = field(repr=False)           # shape (len(starts), m + 1)
    reference: np.ndarray = field(repr=False)       # field line through (1, l/m); NaN if none

    def rows(self):
        for i, (t0, ell) in enumerate(zip(self.starts, self.levels)):
            for j in range(self.m + 1):
                yield (t0, ell, j, float(self.t[j]), float(self.means[i, j]), float(self.reference[i, j]))

    def to_dict(self) -> dict:
        return {"report": "averaged_paths", "library_version": __version__, "kind": self.kind.value,
                "m": self.m, "n_paths": self.n_paths, "seed": self.seed,
                "curves": [{"t_start": t0, "ell": ell, "mean": self.means[i].tolist(),
                            "field_line": self.reference[i].tolist()}
                           for i, (t0, ell) in enumerate(zip(self.starts, self.levels))]}


def averaged_paths(kind: TriangleKind | str, m: int, t_starts: Sequence[float], n_paths: int,
                   seed: int) -> AveragedPaths:
    """Every start reuses path indices 0..n_paths-1, so the curves share their uniforms."""
    kind = TriangleKind.parse(kind)
    if n_paths < 1:
        raise DomainError("n_paths must be >= 1")
    if m < 1:
        raise DomainError("m must be >= 1")
    table = p1_table(kind, m)
    t = np.arange(m + 1) / m
    levels, means, refs = [], [], []
    for t0 in t_starts:
        if not 0 <= t0 <= 1:
            raise DomainError(f"start ratio must lie in [0, 1], got {t0}")
        ell = round_half_up(m * t0)
        _check_support(kind, m, ell)
        X = reversed_paths(kind, m, ell, n_paths, seed, table=table)
        levels.append(ell)
        means.append(X.mean(axis=0) / m)
        if 0 < ell < m:
            refs.append(np.asarray(field_line(kind, realized_lambda(m, ell))(t), dtype=float))
        else:
            refs.append(np.full(m + 1, np.nan))
    return AveragedPaths(kind, m, n_paths, seed, tuple(float(s) for s in t_starts), tuple(levels),
                         t, np.array(means), np.array(refs))
