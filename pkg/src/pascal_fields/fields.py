"""Limit slopes phi(lambda) and their field lines.

For each triangle the slope of the reversed chain at (m, l) tends to
phi(lambda), lambda = (m - l)/l, where phi is written through the root zeta of a
one-dimensional implicit equation:

    pascal     1/(1 - zeta) = 1 + lambda                phi = 1/(1 + lambda)
    stirling2  zeta/(1 - exp(-zeta)) = 1 + lambda       phi = exp(-zeta)
    stirling1  zeta/((zeta - 1) log(1 - zeta)) = 1 + lambda,  zeta in (0,1)
                                                        phi = 1 - zeta
    euler      exp(zeta)/(exp(zeta) - 1) - 1/zeta = 1/(1 + lambda)
                                                        phi = 1 - zeta/((1+lambda)(exp(zeta)-1))

Field lines are the solutions of y' = phi((x - y)/y) through (1, 1/(1+lambda)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .triangles import EULER, PASCAL, STIRLING1, STIRLING2, DomainError, TriangleKind

RESIDUAL_TOL = 1e-12


class BracketError(RuntimeError):
    """A root bracket failed to straddle a sign change (a solver bug for valid input)."""


class IntegrationDomainError(DomainError):
    """The field-line integrator left the region y > 0, x > y where phi is defined."""


def _check_lambda(lam) -> None:
    if not lam > 0 or lam != lam or lam == math.inf:
        raise DomainError(f"lambda must be a finite positive number, got {lam!r}")


# ---------------------------------------------------------------------------
# scalar root finding

def _bracketed_newton(f: Callable[[float], float], df: Callable[[float], float],
                      lo: float, hi: float, max_iter: int = 200) -> tuple[float, float, int]:
    """Root of a monotone f on [lo, hi]: Newton steps, falling back to bisection.

    Returns (x, f(x), iterations) with x the best point seen.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, flo, 0
    if fhi == 0:
        return hi, fhi, 0
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f = {flo}, {fhi}")
    increasing = fhi > 0
    best, fbest = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    x = 0.5 * (lo + hi)
    f_prev = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        fx = f(x)
        if abs(fx) < abs(fbest):
            best, fbest = x, fx
        if fx == 0:
            break
        if (fx > 0) == increasing:
            hi = x
        else:
            lo = x
        if hi - lo <= 2 * math.ulp(max(abs(lo), abs(hi))):
            break
        d = df(x)
        step_ok = d != 0 and math.isfinite(d) and abs(fx) < 0.5 * abs(f_prev)
        nxt = x - fx / d if d else math.nan
        if not (step_ok or it == 1) or not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if nxt == x:
            break
        f_prev = fx
        x = nxt
    # polish: the neighbouring floats may have a smaller residual
    for cand in (math.nextafter(best, -math.inf), math.nextafter(best, math.inf)):
        fc = f(cand)
        if abs(fc) < abs(fbest):
            best, fbest = cand, fc
    return best, fbest, it


# ---------------------------------------------------------------------------
# defining equations, written in their well-conditioned variables

def _stirling2_lhs(z: float) -> float:
    return z / -math.expm1(-z)


def _stirling2_dlhs(z: float) -> float:
    d = -math.expm1(-z)
    return (d - z * math.exp(-z)) / (d * d)


def _stirling1_lhs(delta: float) -> float:
    # zeta/((zeta-1) log(1-zeta)) with delta = 1 - zeta
    return (1.0 - delta) / (-delta * math.log(delta))


def _stirling1_dlhs(delta: float) -> float:
    ld = math.log(delta)
    den = delta * ld
    return (ld + 1.0 - delta) / (den * den)


# B_{2j} / (2j)!, coefficients of zeta^{2j-1} in L(zeta) - 1/2
_EULER_SERIES = (1 / 12, -1 / 720, 1 / 30240, -1 / 1209600, 1 / 47900160,
                 -691 / 1307674368000, 1 / 74724249600)
_SERIES_CUTOFF = 0.5


def euler_mean(z: float) -> float:
    """L(z) = d/dz log((e^z - 1)/z) = e^z/(e^z - 1) - 1/z, with L(0) = 1/2."""
    if abs(z) < _SERIES_CUTOFF:
        z2, acc, power = z * z, 0.0, z
        for c in _EULER_SERIES:
            acc += c * power
            power *= z2
        return 0.5 + acc
    if z > 0:
        return 1.0 / -math.expm1(-z) - 1.0 / z
    return math.exp(z) / math.expm1(z) - 1.0 / z


def _euler_dmean(z: float) -> float:
    if abs(z) < _SERIES_CUTOFF:
        return 1 / 12 - z * z / 240
    if z > 0:
        e = -math.expm1(-z)
        return 1.0 / (z * z) - math.exp(-z) / (e * e)
    e = math.expm1(z)
    return 1.0 / (z * z) - math.exp(z) / (e * e)


def _x_over_expm1(z: float) -> float:
    """z/(e^z - 1), continuous at 0 and safe for large |z|."""
    if z == 0:
        return 1.0
    if z > 0:
        return z * math.exp(-z) / -math.expm1(-z)
    return z / math.expm1(z)


# ---------------------------------------------------------------------------
# zeta(lambda)

@dataclass(frozen=True)
class ZetaSolution:
    """Root of the kind's defining equation at lambda.

    ``complement`` is 1 - zeta computed without cancellation; it is the working
    variable for the Stirling1 equation and gives phi_3 directly.
    """

    kind: TriangleKind
    lam: float
    zeta: float
    complement: float
    residual: float
    bracket: tuple[float, float]
    iterations: int


def zeta(kind: TriangleKind | str, lam) -> ZetaSolution:
    kind = TriangleKind.parse(kind)
    _check_lambda(lam)
    lam = float(lam)
    if kind is PASCAL:
        comp = 1.0 / (1.0 + lam)
        z = lam / (1.0 + lam)
        return ZetaSolution(kind, lam, z, comp, defining_residual(kind, lam, z, comp), (0.0, 1.0), 0)
    if kind is STIRLING2:
        target = 1.0 + lam
        lo, hi = 1e-12, 2.0 * target + 1.0
        while _stirling2_lhs(lo) >= target and lo > 1e-300:
            lo *= 1e-4
        z, _, it = _bracketed_newton(lambda v: _stirling2_lhs(v) - target, _stirling2_dlhs, lo, hi)
        return ZetaSolution(kind, lam, z, 1.0 - z, defining_residual(kind, lam, z), (lo, hi), it)
    if kind is STIRLING1:
        target = 1.0 + lam
        lo, hi = 1e-12, 1.0 - 1e-12
        delta, _, it = _bracketed_newton(lambda d: _stirling1_lhs(d) - target, _stirling1_dlhs, lo, hi)
        z = 1.0 - delta
        return ZetaSolution(kind, lam, z, delta, defining_residual(kind, lam, z, delta), (1 - hi, 1 - lo), it)
    # euler: solve on the side t <= 1/2 (zeta <= 0) and mirror, using zeta(1-t) = -zeta(t)
    t, s = 1.0 / (1.0 + lam), lam / (1.0 + lam)
    if lam == 1.0:
        return ZetaSolution(kind, lam, 0.0, 1.0, 0.0, (0.0, 0.0), 0)
    target, sign = (t, 1.0) if lam > 1.0 else (s, -1.0)
    bound = 8.0
    while euler_mean(-bound) >= target:
        bound *= 2.0
        if bound > 1e300:
            raise BracketError(f"cannot bracket the euler root for lambda = {lam}")
    z, _, it = _bracketed_newton(lambda v: euler_mean(v) - target, _euler_dmean, -bound, 0.0)
    z *= sign
    return ZetaSolution(kind, lam, z, 1.0 - z, defining_residual(kind, lam, z), (-bound, bound), it)


def defining_residual(kind: TriangleKind | str, lam, z: float, complement: float | None = None) -> float:
    """LHS - RHS of the defining equation at ``z``; pass ``complement`` = 1 - z when known."""
    kind = TriangleKind.parse(kind)
    lam = float(lam)
    if kind is PASCAL:
        comp = 1.0 - z if complement is None else complement
        return 1.0 / comp - (1.0 + lam)
    if kind is STIRLING2:
        return _stirling2_lhs(z) - (1.0 + lam)
    if kind is STIRLING1:
        delta = 1.0 - z if complement is None else complement
        return _stirling1_lhs(delta) - (1.0 + lam)
    if z > 0:
        return lam / (1.0 + lam) - euler_mean(-z)
    return euler_mean(z) - 1.0 / (1.0 + lam)


# ---------------------------------------------------------------------------
# limit slopes

def phi(kind: TriangleKind | str, lam):
    """Limit of p1(m, l) as m/l -> 1 + lam. Exact for Pascal with a Fraction argument."""
    kind = TriangleKind.parse(kind)
    _check_lambda(lam)
    if kind is PASCAL:
        if isinstance(lam, (Fraction, int)):
            return Fraction(1) / (1 + lam)
        return 1.0 / (1.0 + float(lam))
    sol = zeta(kind, lam)
    if kind is STIRLING2:
        return math.exp(-sol.zeta)
    if kind is STIRLING1:
        return sol.complement
    lam = float(lam)
    if sol.zeta == 0:
        return lam / (1.0 + lam)
    return 1.0 - _x_over_expm1(sol.zeta) / (1.0 + lam)


# ---------------------------------------------------------------------------
# field lines

def field_line_closed(kind: TriangleKind | str, lam, x):
    """gamma_lambda(x) for the three kinds with a closed form."""
    kind = TriangleKind.parse(kind)
    _check_lambda(lam)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(~np.isfinite(xa)):
        raise DomainError("field lines are evaluated at finite x >= 0")
    lam = float(lam)
    if kind is PASCAL:
        y = xa / (1.0 + lam)
    elif kind is STIRLING2:
        z = zeta(kind, lam).zeta
        y = -np.expm1(-xa * z) / z
    elif kind is STIRLING1:
        sol = zeta(kind, lam)
        y = sol.complement / sol.zeta * np.log1p(xa * sol.zeta / sol.complement)
    else:
        raise DomainError("no closed form is known for the euler field line; use field_line_ode")
    return float(y) if np.ndim(x) == 0 else y


def slope(kind: TriangleKind, x: float, y: float) -> float:
    """Vector-field slope phi((x - y)/y) at (x, y)."""
    if not (y > 0 and x > y):
        raise IntegrationDomainError(f"slope undefined at (x, y) = ({x!r}, {y!r}): need x > y > 0")
    return phi(kind, (x - y) / y)


@dataclass(frozen=True)
class FieldLine:
    kind: TriangleKind
    lam: float
    mode: str                      # "closed" or "ode"
    x: np.ndarray | None = field(default=None, repr=False)
    y: np.ndarray | None = field(default=None, repr=False)
    dy: np.ndarray | None = field(default=None, repr=False)
    zeta: float | None = None
    residual: float | None = None

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        if self.mode == "closed":
            return field_line_closed(self.kind, self.lam, x)
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(xa < 0) or np.any(xa > 1 + 1e-12):
            raise DomainError("ODE field lines are tabulated on [0, 1]")
        out = np.empty_like(xa)
        low = xa < self.x[0]
        # below the last grid point: straight segment into the origin
        out[low] = xa[low] * (self.y[0] / self.x[0])
        out[~low] = _hermite(self.x, self.y, self.dy, np.minimum(xa[~low], 1.0))
        return float(out[0]) if np.ndim(x) == 0 else out

    def to_dict(self) -> dict:
        body = {"kind": self.kind.value, "lambda": self.lam, "mode": self.mode,
                "zeta": self.zeta, "residual": self.residual}
        if self.mode == "ode":
            body["x"] = [float(v) for v in self.x]
            body["y"] = [float(v) for v in self.y]
        return body


def _hermite(xs: np.ndarray, ys: np.ndarray, ds: np.ndarray, x: np.ndarray) -> np.ndarray:
    i = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 2)
    h = xs[i + 1] - xs[i]
    s = (x - xs[i]) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * ys[i] + h10 * h * ds[i] + h01 * ys[i + 1] + h11 * h * ds[i + 1]


def closed_field_line(kind: TriangleKind | str, lam) -> FieldLine:
    kind = TriangleKind.parse(kind)
    if kind is EULER:
        raise DomainError("no closed form is known for the euler field line; use field_line_ode")
    _check_lambda(lam)
    sol = zeta(kind, lam)
    return FieldLine(kind, float(lam), "closed", zeta=sol.zeta, residual=sol.residual)


def field_line(kind: TriangleKind | str, lam, **ode_options) -> FieldLine:
    """Closed form when one exists, otherwise the RK4 curve."""
    kind = TriangleKind.parse(kind)
    if kind is EULER:
        return field_line_ode(kind, lam, **ode_options)
    return closed_field_line(kind, lam)


def ode_grid(x_min: float = 1e-4, step: float = 1e-3, *, refine: float = 20.0) -> np.ndarray:
    """Decreasing grid 1 = x_0 > x_1 > ... > x_N = x_min used by the field-line integrator.

    Uniform spacing ``step`` while x >= refine * step; below that each step is
    x/refine so the stages stay off the diagonal y = x, which field lines touch
    at the origin. The grid depends only on its arguments.
    """
    xs = [1.0]
    i = 0
    while xs[-1] > x_min:
        x = xs[-1]
        if x >= refine * step:
            i += 1
            nxt = 1.0 - i * step
        else:
            nxt = x - x / refine
        xs.append(nxt if nxt > x_min * (1 + 1e-9) else x_min)
    return np.array(xs)


def field_line_ode(kind: TriangleKind | str, lam, *, x_min: float = 1e-4, step: float = 1e-3) -> FieldLine:
    """Classical RK4 for y' = phi((x - y)/y), from (1, 1/(1+lam)) backwards to x_min.

    Steps follow ``ode_grid``: fixed, never larger than ``step``.
    """
    kind = TriangleKind.parse(kind)
    _check_lambda(lam)
    if not 0 < x_min < 1:
        raise DomainError("x_min must lie in (0, 1)")
    if not 0 < step <= 1e-3:
        raise DomainError("step must lie in (0, 1e-3]")
    lam = float(lam)
    xs = ode_grid(x_min, step)
    ys = np.empty_like(xs)
    ds = np.empty_like(xs)
    ys[0] = 1.0 / (1.0 + lam)
    for i in range(len(xs) - 1):
        x, y = xs[i], ys[i]
        h = x - xs[i + 1]
        k1 = slope(kind, x, y)
        k2 = slope(kind, x - h / 2, y - h / 2 * k1)
        k3 = slope(kind, x - h / 2, y - h / 2 * k2)
        k4 = slope(kind, x - h, y - h * k3)
        ds[i] = k1
        ys[i + 1] = y - h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    ds[-1] = slope(kind, xs[-1], ys[-1])
    sol = zeta(kind, lam)
    return FieldLine(kind, lam, "ode", xs[::-1].copy(), ys[::-1].copy(), ds[::-1].copy(),
                     zeta=sol.zeta, residual=sol.residual)


@dataclass(frozen=True)
class HomothetyReport:
    kind: TriangleKind
    lam: float
    c: float
    max_residual: float
    anchor_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol and self.anchor_error < self.tol


def homothety_check(kind: TriangleKind | str, lam, c: float, *, tol: float = 1e-6,
                    n_points: int = 200) -> HomothetyReport:
    """Check that the image of gamma_lambda under (x, y) -> (c x, c y) still solves the ODE.

    The derivative of the scaled curve is taken by central differences, so the
    check does not reuse the slopes the curve was built from.
    """
    kind = TriangleKind.parse(kind)
    _check_lambda(lam)
    if not 0 < c <= 1:
        raise DomainError("c must lie in (0, 1]")
    if kind is EULER:
        line = field_line_ode(kind, lam)
        keep = line.x >= 0.02
        xs, ys = line.x[keep], line.y[keep]
        X, Y = c * xs, c * ys
        dY = (Y[2:] - Y[:-2]) / (X[2:] - X[:-2])
        X, Y = X[1:-1], Y[1:-1]
        anchor = abs(c * line.y[-1] - c / (1.0 + lam))
    else:
        xs = np.linspace(0.01, 1.0, n_points)
        X = c * xs
        dX = 1e-5 * c
        gamma = lambda u: c * field_line_closed(kind, lam, u / c)
        Y = gamma(X)
        dY = (gamma(X + dX) - gamma(X - dX)) / (2 * dX)
        anchor = abs(gamma(np.array([c]))[0] - c / (1.0 + float(lam)))
    resid = max(abs(d - slope(kind, x, y)) for x, y, d in zip(X, Y, dY))
    return HomothetyReport(kind, float(lam), c, float(resid), float(anchor), tol)
