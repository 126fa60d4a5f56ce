"""Globally adaptive 1-D quadrature, vectorised over panels.

The default rule is Gauss-Kronrod 21/10 with the QUADPACK error heuristic.
Each iteration bisects the panels carrying the largest error estimates and
evaluates the integrand once on all new nodes, so integrands must accept
1-D arrays.  ``gl40`` (40-point Gauss-Legendre checked against 20 points) is
a higher-order rule used as an independent oracle.
"""
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import ConfigurationError, ConvergenceError, DomainError

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny

_GL40_X, _GL40_W = np.polynomial.legendre.leggauss(40)
_GL20_X, _GL20_W = np.polynomial.legendre.leggauss(20)

RULES = ("gk21", "gl40")
TRANSFORMS = ("log_lo", "log_hi")


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 10 ** 6
    rule: str = "gk21"
    endpoint_transforms: Tuple[str, ...] = ()
    initial_panels: int = 4

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ConfigurationError("quadrature tolerances must be positive")
        if self.rule not in RULES:
            raise ConfigurationError(f"unknown rule {self.rule!r}; expected one of {RULES}")
        bad = set(self.endpoint_transforms) - set(TRANSFORMS)
        if bad:
            raise ConfigurationError(f"unknown endpoint transforms {sorted(bad)}")

    def with_(self, **kw) -> "QuadratureSpec":
        return replace(self, **kw)


DEFAULT_SPEC = QuadratureSpec()
SUITE_SPEC = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-300)
ORACLE_SPEC = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-300, rule="gl40")


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error_estimate: float
    subdivisions_used: int

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(self.value + other.value, self.error_estimate + other.error_estimate,
                              self.subdivisions_used + other.subdivisions_used)


ZERO = IntegralResult(0.0, 0.0, 0)


def _apply_rule(f, a, b, rule):
    """Integrate f on each panel [a_i, b_i]; returns (value, error, roundoff floor)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    if rule == "gk21":
        x = c[:, None] + h[:, None] * _kernels.GK21_NODES[None, :]
        fx = f(x.ravel()).reshape(x.shape)
        k, g, resabs, resasc = _kernels.gk21_panels(fx, h)
        err = np.abs(k - g)
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = np.where(resasc > 0, np.minimum(1.0, (200.0 * err / resasc) ** 1.5), 1.0)
        err = np.where((resasc > 0) & (err > 0), resasc * scale, err)
        floor = 4.0 * _EPS * resabs
        return k, err, floor
    x40 = c[:, None] + h[:, None] * _GL40_X[None, :]
    x20 = c[:, None] + h[:, None] * _GL20_X[None, :]
    fx = f(np.concatenate([x40.ravel(), x20.ravel()]))
    f40 = fx[: x40.size].reshape(x40.shape)
    f20 = fx[x40.size:].reshape(x20.shape)
    v40 = (f40 @ _GL40_W) * h
    v20 = (f20 @ _GL20_W) * h
    floor = 4.0 * _EPS * (np.abs(f40) @ _GL40_W) * np.abs(h)
    return v40, np.abs(v40 - v20), floor


def _adaptive(f, breaks, spec: QuadratureSpec) -> IntegralResult:
    breaks = np.asarray(breaks, dtype=float)
    n0 = max(1, int(spec.initial_panels))
    edges = np.concatenate([np.linspace(breaks[i], breaks[i + 1], n0 + 1)[:-1] for i in range(len(breaks) - 1)]
                           + [breaks[-1:]])
    a, b = edges[:-1], edges[1:]
    val, err, floor = _apply_rule(f, a, b, spec.rule)
    splits = 0
    while True:
        eff = np.maximum(err, floor)
        total = val.sum()
        total_err = float(eff.sum())
        tol = max(spec.abs_tol, spec.rel_tol * abs(total))
        if not np.isfinite(total_err) or not np.isfinite(total):
            raise ConvergenceError("integrand produced non-finite values", total, total_err, splits)
        if total_err <= tol:
            return IntegralResult(total, total_err, splits)
        # panels that can still improve: error above their roundoff floor and not too narrow
        width_ok = (b - a) > 64 * _EPS * np.maximum(np.abs(a), np.abs(b)) + _TINY
        active = (err > floor) & width_ok
        if not np.any(active):
            raise ConvergenceError(f"tolerance {tol:.3g} unreachable (estimate {total_err:.3g}); roundoff or "
                                   "panel width limit", total, total_err, splits)
        idx = np.flatnonzero(active)
        order = idx[np.argsort(-eff[idx], kind="stable")]
        # bisect the fewest panels whose removal would bring the error under half the tolerance
        excess = total_err - 0.5 * tol
        csum = np.cumsum(eff[order])
        nsel = int(np.searchsorted(csum, excess) + 1)
        sel = np.sort(order[: min(nsel, order.size)])
        if splits + sel.size > spec.max_subdivisions:
            raise ConvergenceError(f"max_subdivisions={spec.max_subdivisions} reached with error "
                                   f"{total_err:.3g} > {tol:.3g}", total, total_err, splits)
        keep = np.ones(a.size, dtype=bool)
        keep[sel] = False
        m = 0.5 * (a[sel] + b[sel])
        na = np.concatenate([a[sel], m])
        nb = np.concatenate([m, b[sel]])
        nv, ne, nf = _apply_rule(f, na, nb, spec.rule)
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        floor = np.concatenate([floor[keep], nf])
        # restore left-to-right order so summation order is reproducible
        o = np.argsort(a, kind="stable")
        a, b, val, err, floor = a[o], b[o], val[o], err[o], floor[o]
        splits += sel.size


def _guard(f):
    def g(x):
        with np.errstate(all="ignore"):
            return f(x)
    return g


def _log_lo(f, lo, mid):
    # x = lo + (mid - lo) * exp(1 - 1/s), s in (0, 1]
    w = mid - lo

    def h(s):
        e = np.exp(1.0 - 1.0 / s)
        x = lo + w * e
        jac = w * e / (s * s)
        with np.errstate(all="ignore"):
            y = f(x) * jac
        return np.where(jac > 0, y, 0.0)
    return h


def _log_hi(f, mid, hi):
    w = hi - mid

    def h(s):
        e = np.exp(1.0 - 1.0 / s)
        x = hi - w * e
        jac = w * e / (s * s)
        with np.errstate(all="ignore"):
            y = f(x) * jac
        return np.where(jac > 0, y, 0.0)
    return h


def _to_finite(f, lo, hi):
    """Map an infinite range onto a finite one; returns (g, new_lo, new_hi)."""
    if np.isfinite(lo) and np.isfinite(hi):
        return f, lo, hi
    if np.isfinite(lo):  # [lo, inf): x = lo + (1-s)/s
        def g(s):
            x = lo + (1.0 - s) / s
            with np.errstate(all="ignore"):
                y = f(x) / (s * s)
            return np.where(s > 0, y, 0.0)
        return g, 0.0, 1.0
    if np.isfinite(hi):  # (-inf, hi]: x = hi - (1-s)/s
        def g(s):
            x = hi - (1.0 - s) / s
            with np.errstate(all="ignore"):
                y = f(x) / (s * s)
            return np.where(s > 0, y, 0.0)
        return g, 0.0, 1.0

    def g(s):  # x = s / (1 - s^2)
        x = s / (1.0 - s * s)
        with np.errstate(all="ignore"):
            y = f(x) * (1.0 + s * s) / (1.0 - s * s) ** 2
        return np.where(np.abs(s) < 1, y, 0.0)
    return g, -1.0, 1.0


def integrate(f: Callable, lo: float, hi: float, spec: QuadratureSpec = DEFAULT_SPEC,
              points: Sequence[float] = ()) -> IntegralResult:
    """Adaptive integral of a vectorised ``f`` over [lo, hi].

    ``points`` are interior breakpoints.  Infinite limits are mapped to a
    finite interval.  With ``endpoint_transforms`` the first and/or last
    sub-interval is integrated in the variable s with x - lo = h*exp(1 - 1/s)
    (resp. hi - x), which flattens logarithmic and power-type endpoint
    singularities.
    """
    if not lo < hi:
        if lo == hi:
            return ZERO
        r = integrate(f, hi, lo, spec, points)
        return IntegralResult(-r.value, r.error_estimate, r.subdivisions_used)
    f = _guard(f)
    if not (np.isfinite(lo) and np.isfinite(hi)):
        if spec.endpoint_transforms:
            raise ConfigurationError("endpoint transforms need finite limits")
        if points:
            raise ConfigurationError("breakpoints are not supported on infinite intervals")
        g, a, b = _to_finite(f, lo, hi)
        return _adaptive(g, [a, b], spec)
    pts = sorted(float(p) for p in points if lo < p < hi)
    breaks = [lo] + pts + [hi]
    if not spec.endpoint_transforms:
        return _adaptive(f, breaks, spec)
    return _tightened(lambda sp: _split_ends(f, breaks, sp), spec)


def _meets(res: IntegralResult, spec: QuadratureSpec) -> bool:
    return res.error_estimate <= max(spec.abs_tol, spec.rel_tol * abs(res.value))


def _tightened(run: Callable, spec: QuadratureSpec, attempts: int = 4) -> IntegralResult:
    # pieces integrated separately can cancel; tighten until the sum meets the tolerance
    res = run(spec)
    for _ in range(attempts):
        if _meets(res, spec) or res.error_estimate == 0:
            return res
        target = max(spec.abs_tol, spec.rel_tol * abs(res.value))
        factor = max(0.5 * target / res.error_estimate, 1e-6)
        rel = max(spec.rel_tol * factor, 4 * _EPS)
        res = run(spec.with_(rel_tol=rel, abs_tol=max(spec.abs_tol * factor, _TINY)))
    if not _meets(res, spec):
        raise ConvergenceError(f"combined error {res.error_estimate:.3g} exceeds the tolerance",
                               res.value, res.error_estimate, res.subdivisions_used)
    return res


def _split_ends(f, breaks, spec: QuadratureSpec) -> IntegralResult:
    # the end pieces receive the substitution, the rest is integrated directly
    lo, hi = breaks[0], breaks[-1]
    pts = breaks[1:-1]
    lo_t = "log_lo" in spec.endpoint_transforms
    hi_t = "log_hi" in spec.endpoint_transforms
    total = ZERO
    inner_lo, inner_hi = lo, hi
    if lo_t:
        mid = breaks[1] if len(breaks) > 2 else 0.5 * (lo + hi)
        total = total + _adaptive(_log_lo(f, lo, mid), [0.0, 1.0], spec)
        inner_lo = mid
    if hi_t:
        mid = breaks[-2] if len(breaks) > 2 else 0.5 * (lo + hi)
        if lo_t and mid <= inner_lo:
            mid = inner_lo
        total = total + _adaptive(_log_hi(f, mid, hi), [0.0, 1.0], spec)
        inner_hi = mid
    inner = [inner_lo] + [p for p in pts if inner_lo < p < inner_hi] + [inner_hi]
    if inner_hi > inner_lo:
        total = total + _adaptive(f, inner, spec)
    return total


class LogIntegrand:
    """A radial integrand phi(r) given through F(t) = phi(e^t) * e^t.

    Then phi(r) dr = F(t) dt.  With the ``log_lo`` transform and lo = 0 the
    part near the origin is integrated in t directly, which keeps mass that
    sits below the smallest representable radius.
    """

    def __init__(self, F: Callable):
        self.F = F

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return self.F(np.log(r)) / r


def integrate_radial(integrand: Callable, interval: Tuple[float, float], spec: QuadratureSpec = DEFAULT_SPEC,
                     support: Optional[Tuple[float, float]] = None, points: Sequence[float] = ()) -> IntegralResult:
    """Integral of ``integrand(r)`` dr over [lo, hi] with 0 <= lo < hi <= inf.

    An infinite upper limit requires compact ``support`` metadata; the range
    is then clipped to the support.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not (0 <= lo < hi):
        raise DomainError(f"radial interval must satisfy 0 <= lo < hi, got {interval}")
    if support is not None:
        lo, hi = max(lo, support[0]), min(hi, support[1])
        if not lo < hi:
            return ZERO
    elif not np.isfinite(hi):
        raise DomainError("an infinite upper limit needs compact support metadata")
    if lo == 0 and isinstance(integrand, LogIntegrand) and "log_lo" in spec.endpoint_transforms:
        pts = sorted(float(p) for p in points if lo < p < hi)
        mid = pts[0] if pts else 0.5 * hi
        rest = tuple(t for t in spec.endpoint_transforms if t != "log_lo")

        def run(sp):
            head = integrate(integrand.F, -np.inf, float(np.log(mid)), sp.with_(endpoint_transforms=()))
            return head + integrate(integrand, mid, hi, sp.with_(endpoint_transforms=rest), pts[1:])
        return _tightened(run, spec)
    return integrate(integrand, lo, hi, spec, points)


def lp_norm(integrand: Callable, p: float, interval: Tuple[float, float], spec: QuadratureSpec = DEFAULT_SPEC,
            support: Optional[Tuple[float, float]] = None, points: Sequence[float] = ()) -> float:
    """(integral of |phi|^p)^(1/p); any weight must be folded into ``integrand``."""
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p}")
    res = integrate_radial(lambda r: np.abs(integrand(r)) ** p, interval, spec, support, points)
    return float(np.real(res.value)) ** (1.0 / p)


def root_error(value: float, error: float, p: float) -> float:
    """Propagate an error bound on I through I -> I**(1/p)."""
    if value <= 0:
        return error ** (1.0 / p) if error > 0 else 0.0
    return error / p * value ** (1.0 / p - 1.0)
