"""Radial test profiles g(r), their derivatives, and a small named registry.

Profiles are evaluated in the logarithmic variable t = log r.  The primitive
is ``values_log(t) -> (g, euler)`` where ``euler = r * g'(r)``; with that,
every radial integral dr/r becomes dt and scale changes become shifts.

A profile may also advertise *pieces*: reparametrisations y -> t used by the
integrators when the natural scale of the profile is not uniform in t (for
example profiles spread over many decades of |log r|).
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import ConfigurationError, DomainError

VANISHING = "vanishing"
FREE = "free"

_ULP_SLACK = 4 * np.finfo(float).eps


def _fmt(x) -> str:
    if isinstance(x, complex) or np.iscomplexobj(x):
        x = complex(x)
        return f"({x.real:.17g}{x.imag:+.17g}j)"
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class Piece:
    """A stretch of the support integrated in its own variable y.

    ``to_t(y)`` maps into t = log r with ``jac(y) = dt/dy > 0``; ``from_t``
    is the inverse.  ``None`` maps mean y is t itself.
    """
    lo: float
    hi: float
    to_t: Optional[Callable] = None
    jac: Optional[Callable] = None
    from_t: Optional[Callable] = None
    knots: Tuple[float, ...] = ()

    def t_of(self, y):
        return y if self.to_t is None else self.to_t(y)

    def dt(self, y):
        return np.ones_like(y) if self.jac is None else self.jac(y)

    def y_of(self, t):
        return t if self.from_t is None else self.from_t(t)

    @property
    def t_range(self):
        a, b = float(self.t_of(np.array(self.lo))), float(self.t_of(np.array(self.hi)))
        return (min(a, b), max(a, b))

    def shifted(self, shift: float) -> "Piece":
        # reparametrise for t -> t + shift
        if self.to_t is None:
            return Piece(self.lo + shift, self.hi + shift, knots=tuple(k + shift for k in self.knots))
        to_t, from_t = self.to_t, self.from_t
        return Piece(self.lo, self.hi, lambda y: to_t(y) + shift, self.jac,
                     lambda t: from_t(t - shift), self.knots)


class RadialProfile:
    """Base class: subclasses implement ``_values_log`` and set the support."""

    boundary_class = VANISHING

    def __init__(self, key: str, log_support: Tuple[float, float], complex_valued: bool = False):
        la, lb = log_support
        if not la < lb:
            raise ConfigurationError(f"empty profile support {log_support}")
        self.key = key
        self.log_support = (float(la), float(lb))
        self.complex_valued = complex_valued

    def __repr__(self):
        return f"<{type(self).__name__} {self.key}>"

    # -- evaluation ---------------------------------------------------------
    def _values_log(self, t: np.ndarray):
        raise NotImplementedError

    def values_log(self, t):
        """Return (g, r*g') at r = exp(t)."""
        t = np.asarray(t, dtype=float)
        g, e = self._values_log(t)
        if self.boundary_class == VANISHING:
            la, lb = self.log_support
            out = (t <= la) | (t >= lb)
            if np.any(out):
                g = np.where(out, 0.0, g)
                e = np.where(out, 0.0, e)
        return g, e

    def value_log(self, t):
        return self.values_log(t)[0]

    def delta(self, t, logR: float):
        """g(exp t) - g(R); subclasses may override with an exact form."""
        return self.value_log(t) - self.value_log(np.array(logR))[()]

    def g(self, r):
        return self.value_log(_log_radius(r))

    def dg(self, r):
        r = np.asarray(r, dtype=float)
        return self.values_log(_log_radius(r))[1] / r

    def euler(self, r):
        return self.values_log(_log_radius(r))[1]

    # -- geometry -----------------------------------------------------------
    @property
    def support(self) -> Tuple[float, float]:
        la, lb = self.log_support
        return (float(np.exp(la)), float(np.exp(lb)))

    def knots(self) -> Tuple[float, ...]:
        """Interior breakpoints in t where the profile changes character."""
        return ()

    def pieces(self) -> Tuple[Piece, ...]:
        la, lb = self.log_support
        if not (np.isfinite(la) and np.isfinite(lb)):
            raise DomainError(f"profile {self.key} has unbounded support; integrate on an explicit interval")
        return (Piece(la, lb, knots=tuple(k for k in self.knots() if la < k < lb)),)

    @property
    def is_zero(self) -> bool:
        return False

    # -- transformations ----------------------------------------------------
    def scaled(self, c) -> "RadialProfile":
        return ScaledProfile(self, c)

    def dilated(self, lam: float) -> "RadialProfile":
        """The profile r -> g(lam * r)."""
        return DilatedProfile(self, lam)


def _log_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radius must be positive")
    return np.log(r)


class ZeroProfile(RadialProfile):
    def __init__(self):
        super().__init__("zero", (0.0, 1.0))

    def _values_log(self, t):
        z = np.zeros_like(t)
        return z, z

    @property
    def is_zero(self):
        return True


class BumpProfile(RadialProfile):
    """exp(-1/((r-a)(b-r))) on (a, b)."""

    def __init__(self, a: float, b: float):
        _check_interval(a, b)
        super().__init__(f"bump:{_fmt(a)},{_fmt(b)}", (np.log(a), np.log(b)))
        self.a, self.b = float(a), float(b)

    def _values_log(self, t):
        r = np.exp(t)
        g, dg = _kernels.bump(r, self.a, self.b)
        return g, r * dg

    def knots(self):
        return (np.log(0.5 * (self.a + self.b)),)


class PolyBumpProfile(RadialProfile):
    """((r-a)(b-r))**k on (a, b), k >= 2 so that g' vanishes at the ends."""

    def __init__(self, a: float, b: float, k: float):
        _check_interval(a, b)
        if not k >= 2:
            raise ConfigurationError(f"polybump exponent must be >= 2, got {k}")
        super().__init__(f"polybump:{_fmt(a)},{_fmt(b)},{_fmt(k)}", (np.log(a), np.log(b)))
        self.a, self.b, self.k = float(a), float(b), float(k)

    def _values_log(self, t):
        r = np.exp(t)
        q = np.maximum((r - self.a) * (self.b - r), 0.0)
        g = q ** self.k
        dg = self.k * q ** (self.k - 1.0) * (self.a + self.b - 2.0 * r)
        return g, r * dg

    def knots(self):
        return (np.log(0.5 * (self.a + self.b)),)


class PowerLawProfile(RadialProfile):
    """r**alpha times a smooth window in log r that is 1 on the middle half of [a, b]."""

    def __init__(self, alpha: float, a: float, b: float):
        _check_interval(a, b)
        la, lb = np.log(a), np.log(b)
        super().__init__(f"powerlaw:{_fmt(alpha)},{_fmt(a)},{_fmt(b)}", (la, lb))
        self.alpha = float(alpha)
        self.tau = 0.25 * (lb - la)

    def _values_log(self, t):
        la, lb = self.log_support
        w, dw = window(t, la, la + self.tau, lb - self.tau, lb)
        core = np.exp(self.alpha * t)
        return core * w, core * (self.alpha * w + dw)

    def knots(self):
        la, lb = self.log_support
        return (la + self.tau, lb - self.tau)


class LogPowerProfile(RadialProfile):
    """(log(R/r))**beta on [a, b], rising over [a/2, a] and falling over [b, (b+R)/2]."""

    def __init__(self, beta: float, a: float, b: float, R: float):
        _check_interval(a, b)
        if not b < R:
            raise ConfigurationError(f"logpower needs b < R, got b={b}, R={R}")
        super().__init__(f"logpower:{_fmt(beta)},{_fmt(a)},{_fmt(b)},{_fmt(R)}",
                         (np.log(0.5 * a), np.log(0.5 * (b + R))))
        self.beta, self.a, self.b, self.R = float(beta), float(a), float(b), float(R)

    def _values_log(self, t):
        la, lb = self.log_support
        w, dw = window(t, la, np.log(self.a), np.log(self.b), lb)
        L = np.maximum(np.log(self.R) - t, 1e-300)
        core = L ** self.beta
        dcore = -self.beta * L ** (self.beta - 1.0)
        return core * w, core * dw + dcore * w

    def knots(self):
        return (np.log(self.a), np.log(self.b))


class ScaledProfile(RadialProfile):
    def __init__(self, base: RadialProfile, c):
        c = complex(c) if np.iscomplexobj(c) or isinstance(c, complex) else float(c)
        super().__init__(f"{_fmt(c)}*{base.key}", base.log_support,
                         base.complex_valued or isinstance(c, complex))
        self.base, self.c = base, c
        self.boundary_class = base.boundary_class

    def _values_log(self, t):
        g, e = self.base.values_log(t)
        return self.c * g, self.c * e

    def delta(self, t, logR):
        return self.c * self.base.delta(t, logR)

    def knots(self):
        return self.base.knots()

    def pieces(self):
        return self.base.pieces()

    @property
    def is_zero(self):
        return self.base.is_zero or self.c == 0


class DilatedProfile(RadialProfile):
    def __init__(self, base: RadialProfile, lam: float):
        if not lam > 0:
            raise DomainError(f"dilation factor must be positive, got {lam}")
        self.shift = -float(np.log(lam))
        la, lb = base.log_support
        super().__init__(f"dilate({_fmt(lam)})[{base.key}]", (la + self.shift, lb + self.shift),
                         base.complex_valued)
        self.base, self.lam = base, float(lam)
        self.boundary_class = base.boundary_class

    def _values_log(self, t):
        return self.base.values_log(t - self.shift)

    def delta(self, t, logR):
        return self.base.delta(np.asarray(t) - self.shift, logR - self.shift)

    def knots(self):
        return tuple(k + self.shift for k in self.base.knots())

    def pieces(self):
        return tuple(p.shifted(self.shift) for p in self.base.pieces())

    @property
    def is_zero(self):
        return self.base.is_zero


class FunctionProfile(RadialProfile):
    """A free-class profile built from explicit callables g(r) and g'(r)."""

    boundary_class = FREE

    def __init__(self, key: str, g: Callable, dg: Callable, support=(0.0, np.inf)):
        a, b = support
        with np.errstate(divide="ignore"):
            super().__init__(key, (float(np.log(a)), float(np.log(b))))
        self._g, self._dg = g, dg

    def _values_log(self, t):
        r = np.exp(t)
        return np.asarray(self._g(r), dtype=float) + 0.0 * r, r * self._dg(r)


def monomial(mu: float) -> FunctionProfile:
    return FunctionProfile(f"monomial:{_fmt(mu)}", lambda r: r ** mu, lambda r: mu * r ** (mu - 1.0))


def log_profile(support=(0.0, np.inf)) -> FunctionProfile:
    return FunctionProfile("log", np.log, lambda r: 1.0 / r, support)


def affine(slope: float, intercept: float, support=(0.0, np.inf)) -> FunctionProfile:
    return FunctionProfile(f"affine:{_fmt(slope)},{_fmt(intercept)}",
                           lambda r: slope * r + intercept, lambda r: slope + 0.0 * r, support)


def polynomial(coeffs: Sequence[float], support=(0.0, np.inf)) -> FunctionProfile:
    """sum_k coeffs[k] * r**k."""
    poly = np.polynomial.Polynomial(coeffs)
    der = poly.deriv()
    return FunctionProfile("poly:" + ",".join(_fmt(c) for c in coeffs), poly, der, support)


def _check_interval(a, b):
    if not (np.isfinite(a) and np.isfinite(b) and 0 < a < b):
        raise ConfigurationError(f"support must satisfy 0 < a < b < inf, got ({a}, {b})")


def window(t, t0, t1, t2, t3):
    """Smooth indicator rising on [t0, t1] and falling on [t2, t3]; returns (w, dw/dt)."""
    t = np.asarray(t, dtype=float)
    up, dup = _kernels.smooth_step((t - t0) / (t1 - t0))
    down, ddown = _kernels.smooth_step((t3 - t) / (t3 - t2))
    return up * down, dup / (t1 - t0) * down - up * ddown / (t3 - t2)


# ------------------------------------------------------------------- registry

@dataclass(frozen=True)
class ProfileRegistryEntry:
    name: str
    constructor: Callable
    arity: Tuple[int, ...]
    description: str = field(default="", compare=False)


def _cbump(a, b):
    return ScaledProfile(BumpProfile(a, b), 1 + 1j)


REGISTRY: Dict[str, ProfileRegistryEntry] = {
    e.name: e for e in (
        ProfileRegistryEntry("bump", BumpProfile, (2,), "exp(-1/((r-a)(b-r))) on (a,b)"),
        ProfileRegistryEntry("polybump", PolyBumpProfile, (3,), "((r-a)(b-r))^k on (a,b)"),
        ProfileRegistryEntry("powerlaw", PowerLawProfile, (3,), "r^alpha with a smooth log window on [a,b]"),
        ProfileRegistryEntry("logpower", LogPowerProfile, (4,), "log(R/r)^beta with smooth cutoffs"),
        ProfileRegistryEntry("cbump", _cbump, (2,), "(1+i) * bump(a,b)"),
        ProfileRegistryEntry("zero", ZeroProfile, (0,), "identically zero"),
    )
}


def make_profile(name: str, *params) -> RadialProfile:
    entry = REGISTRY.get(name)
    if entry is None:
        raise ConfigurationError(f"unknown profile {name!r}; known: {sorted(REGISTRY)}")
    if len(params) not in entry.arity:
        raise ConfigurationError(f"profile {name!r} takes {entry.arity[0]} parameters, got {len(params)}")
    return entry.constructor(*params)


def parse_profile(text: str) -> RadialProfile:
    """Parse 'name:p1,p2,...' (e.g. 'polybump:0.2,0.8,3')."""
    text = text.strip().strip('"').strip("'")
    name, _, args = text.partition(":")
    try:
        params = [float(a) for a in args.split(",")] if args.strip() else []
    except ValueError:
        raise ConfigurationError(f"bad profile parameters in {text!r}") from None
    return make_profile(name.strip(), *params)


# ------------------------------------------------------------------ operators

def radial_derivative(profile: RadialProfile, r):
    """g'(r); for radial f(x) = g(|x|) this is the radial derivative of f."""
    return profile.dg(r)


def euler_apply(profile: RadialProfile, r):
    """r * g'(r), the Euler operator applied to the radial function."""
    return profile.euler(r)


def finite_diff_check(profile: RadialProfile, grid, h: float) -> float:
    """Max |g'(r) - (g(r+h) - g(r-h)) / 2h| over the grid."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    a, b = profile.support
    if not h > 0:
        raise DomainError("step h must be positive")
    if np.any(grid - h <= max(a, 0.0)) or np.any(grid + h >= b):
        raise DomainError(f"grid with step {h} leaves the open support ({a}, {b})")
    central = (profile.g(grid + h) - profile.g(grid - h)) / (2.0 * h)
    return float(np.max(np.abs(profile.dg(grid) - central)))


def log_bound_lemmas(R: float, r) -> Tuple[bool, bool]:
    """Check (R-r)/R <= log(R/r) <= (R-r)/r for 0 < r < R (elementwise all())."""
    r = np.asarray(r, dtype=float)
    if not R > 0 or np.any(r <= 0) or np.any(r >= R):
        raise DomainError("need 0 < r < R")
    d = R - r
    logq = np.log1p(d / r)
    lower = d / R
    upper = d / r
    return (bool(np.all(lower <= logq * (1 + _ULP_SLACK))),
            bool(np.all(logq <= upper * (1 + _ULP_SLACK))))


def sup_derivative(profile: RadialProfile, n: int = 20001) -> float:
    a, b = profile.support
    r = np.linspace(a, b, n)
    return float(np.max(np.abs(profile.dg(r))))


def mean_value_bound_check(profile: RadialProfile, R: float, grid) -> bool:
    """|g(r) - g(R)| <= sup|g'| * (R - r) on the grid (points in (a, R])."""
    grid = np.asarray(grid, dtype=float)
    a, _ = profile.support
    if np.any(grid <= a) or np.any(grid > R):
        raise DomainError("grid must lie in (a, R]")
    C = sup_derivative(profile) * (1 + 1e-6)
    lhs = np.abs(profile.g(grid) - profile.g(np.array(R)))
    return bool(np.all(lhs <= C * (R - grid) + 1e-15))
